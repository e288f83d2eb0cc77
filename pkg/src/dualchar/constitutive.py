"""
Isotropic hyperelastic models for soft-tissue characterisation.

Three strain-energy families are provided: a first-order Ogden model with an
uncoupled volumetric penalty, a third-order Yeoh model written in the
deviatoric first invariant, and a compressible Neo-Hookean model parameterised
by Young's modulus and Poisson ratio.

Moduli are in MPa. Every function is pure; models and deformation gradients
are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar, Union

import numpy as np

from .exceptions import (
    IncompressibleLimitError,
    InvalidDeformationError,
    NumericalError,
    ParameterError,
    SingularDeformationError,
)

__all__ = [
    "DeformationGradient",
    "Invariants",
    "PrincipalStretches",
    "LameParameters",
    "Ogden1",
    "Yeoh3",
    "NeoHookean",
    "MaterialModel",
    "MODEL_FAMILIES",
    "as_deformation",
    "compute_invariants",
    "principal_stretches",
    "lame_from_young_poisson",
    "isochoric_i1",
    "volumetric_energy",
    "strain_energy",
    "pk2_stress",
    "cauchy_stress",
    "uniaxial_response",
    "equibiaxial_response",
    "shear_response",
    "model_from_params",
    "simple_shear",
]

# J below this is treated as a collapsed element
_SINGULAR_J = 1e-12


@dataclass(frozen=True)
class DeformationGradient:
    """Deformation gradient F together with its determinant J."""

    entries: np.ndarray
    j: float = field(init=False)

    def __post_init__(self):
        f = np.array(self.entries, dtype=float)
        if f.shape != (3, 3):
            raise InvalidDeformationError(f"deformation gradient must be 3x3, got {f.shape}")
        if not np.all(np.isfinite(f)):
            raise InvalidDeformationError("deformation gradient has non-finite entries")
        j = float(np.linalg.det(f))
        if not j > 0.0:
            raise InvalidDeformationError(f"det(F) = {j:.6g} is not positive")
        f.setflags(write=False)
        object.__setattr__(self, "entries", f)
        object.__setattr__(self, "j", j)

    @property
    def c(self) -> np.ndarray:
        """Right Cauchy-Green tensor C = F^T F."""
        return self.entries.T @ self.entries

    @property
    def c_bar(self) -> np.ndarray:
        return self.j ** (-2.0 / 3.0) * self.c

    @property
    def f_bar(self) -> np.ndarray:
        return self.j ** (-1.0 / 3.0) * self.entries


def as_deformation(f) -> DeformationGradient:
    if isinstance(f, DeformationGradient):
        return f
    return DeformationGradient(f)


@dataclass(frozen=True)
class Invariants:
    i1: float
    i2: float
    i3: float


@dataclass(frozen=True)
class PrincipalStretches:
    """Principal stretches sorted in descending order."""

    l1: float
    l2: float
    l3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.l1, self.l2, self.l3])

    def deviatoric(self) -> np.ndarray:
        lam = self.as_array()
        return lam * np.prod(lam) ** (-1.0 / 3.0)


@dataclass(frozen=True)
class LameParameters:
    mu: float
    lam: float


def lame_from_young_poisson(e: float, nu: float) -> LameParameters:
    """Convert Young's modulus and Poisson ratio to the Lame pair (mu, lambda)."""
    if not e > 0.0:
        raise ParameterError(f"Young's modulus must be positive, got {e}")
    if nu >= 0.5:
        raise IncompressibleLimitError(
            f"Poisson ratio {nu} reaches the incompressible limit; lambda diverges"
        )
    if not nu > 0.0:
        raise ParameterError(f"Poisson ratio must be positive, got {nu}")
    mu = e / (2.0 * (1.0 + nu))
    lam = nu * e / ((1.0 + nu) * (1.0 - 2.0 * nu))
    return LameParameters(mu=mu, lam=lam)


# ---------------------------------------------------------------------------
# material models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ogden1:
    """First-order Ogden model with volumetric penalty U(J) = kappa/2 (ln J)^2."""

    c1: float
    m1: float
    kappa: float

    family: ClassVar[str] = "ogden"
    param_names: ClassVar[tuple] = ("m1", "c1", "kappa")

    def __post_init__(self):
        if not self.c1 > 0.0:
            raise ParameterError(f"Ogden c1 must be positive, got {self.c1}")
        if not self.kappa > 0.0:
            raise ParameterError(f"Ogden kappa must be positive, got {self.kappa}")
        if self.m1 == 0.0:
            raise ParameterError("Ogden m1 must be non-zero")

    @property
    def shear_modulus(self) -> float:
        return self.c1 / 2.0

    def scaled(self, k: float) -> "Ogden1":
        return Ogden1(c1=k * self.c1, m1=self.m1, kappa=k * self.kappa)

    def as_dict(self) -> dict:
        return {"m1": self.m1, "c1": self.c1, "kappa": self.kappa}

    # isochoric response along analytic paths; stretch/gamma may be arrays
    def _uniaxial(self, lam):
        c, m = self.c1, self.m1
        return c / m * (lam**m - lam ** (-m / 2.0))

    def _equibiaxial(self, lam):
        c, m = self.c1, self.m1
        return c / m * (lam**m - lam ** (-2.0 * m))

    def _shear(self, g):
        c, m = self.c1, self.m1
        s = np.sqrt(1.0 + g * g / 4.0)
        l1 = g / 2.0 + s
        return c / m * (l1**m - l1 ** (-m)) / (2.0 * s)


@dataclass(frozen=True)
class Yeoh3:
    """Third-order Yeoh model in the deviatoric first invariant; no volumetric term."""

    c1: float
    c2: float
    c3: float

    family: ClassVar[str] = "yeoh"
    param_names: ClassVar[tuple] = ("c1", "c2", "c3")

    def __post_init__(self):
        if not self.c1 > 0.0:
            raise ParameterError(f"Yeoh c1 must be positive, got {self.c1}")

    @property
    def shear_modulus(self) -> float:
        return 2.0 * self.c1

    def scaled(self, k: float) -> "Yeoh3":
        return Yeoh3(c1=k * self.c1, c2=k * self.c2, c3=k * self.c3)

    def as_dict(self) -> dict:
        return {"c1": self.c1, "c2": self.c2, "c3": self.c3}

    def dw_di1(self, t):
        """dW/dI1 at t = I1 - 3."""
        return self.c1 + 2.0 * self.c2 * t + 3.0 * self.c3 * t * t

    def _uniaxial(self, lam):
        t = lam * lam + 2.0 / lam - 3.0
        return 2.0 * (lam * lam - 1.0 / lam) * self.dw_di1(t)

    def _equibiaxial(self, lam):
        t = 2.0 * lam * lam + lam ** (-4.0) - 3.0
        return 2.0 * (lam * lam - lam ** (-4.0)) * self.dw_di1(t)

    def _shear(self, g):
        return 2.0 * g * self.dw_di1(g * g)


@dataclass(frozen=True)
class NeoHookean:
    """Compressible Neo-Hookean model given by Young's modulus and Poisson ratio."""

    e: float
    nu: float

    family: ClassVar[str] = "neohookean"
    param_names: ClassVar[tuple] = ("e", "nu")

    def __post_init__(self):
        if not self.e > 0.0:
            raise ParameterError(f"Neo-Hookean E must be positive, got {self.e}")
        if not 0.0 < self.nu < 0.5:
            raise ParameterError(f"Neo-Hookean nu must lie in (0, 0.5), got {self.nu}")

    @property
    def lame(self) -> LameParameters:
        return lame_from_young_poisson(self.e, self.nu)

    @property
    def shear_modulus(self) -> float:
        return self.lame.mu

    @classmethod
    def from_shear_modulus(cls, mu: float, nu: float = 0.45) -> "NeoHookean":
        return cls(e=2.0 * mu * (1.0 + nu), nu=nu)

    def scaled(self, k: float) -> "NeoHookean":
        return NeoHookean(e=k * self.e, nu=self.nu)

    def as_dict(self) -> dict:
        return {"e": self.e, "nu": self.nu}

    def _uniaxial(self, lam):
        return self.lame.mu * (lam * lam - 1.0 / lam)

    def _equibiaxial(self, lam):
        return self.lame.mu * (lam * lam - lam ** (-4.0))

    def _shear(self, g):
        return self.lame.mu * g


MaterialModel = Union[Ogden1, Yeoh3, NeoHookean]

MODEL_FAMILIES = {cls.family: cls for cls in (Ogden1, Yeoh3, NeoHookean)}


def model_from_params(family: str, params: dict) -> MaterialModel:
    """Build a model of the named family from a ``{name: value}`` mapping."""
    try:
        cls = MODEL_FAMILIES[family]
    except KeyError:
        raise ParameterError(
            f"unknown model family {family!r}; expected one of {sorted(MODEL_FAMILIES)}"
        ) from None
    missing = [p for p in cls.param_names if p not in params]
    if missing:
        raise ParameterError(f"{family} model missing parameters {missing}")
    return cls(**{p: float(params[p]) for p in cls.param_names})


# ---------------------------------------------------------------------------
# kinematics
# ---------------------------------------------------------------------------


def compute_invariants(f) -> Invariants:
    """Invariants of C = F^T F."""
    f = as_deformation(f)
    c = f.c
    tr = np.trace(c)
    i2 = 0.5 * (tr * tr - np.trace(c @ c))
    return Invariants(i1=float(tr), i2=float(i2), i3=f.j * f.j)


def _eigh(c):
    try:
        w, v = np.linalg.eigh(c)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symmetric eigensolve failed for C =\n{c}") from exc
    if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
        raise NumericalError(f"C is not positive definite:\n{c}")
    return w, v


def principal_stretches(f) -> PrincipalStretches:
    f = as_deformation(f)
    w, _ = _eigh(f.c)
    lam = np.sqrt(w)[::-1]
    return PrincipalStretches(float(lam[0]), float(lam[1]), float(lam[2]))


def isochoric_i1(f) -> float:
    """Deviatoric first invariant J^(-2/3) I1."""
    f = as_deformation(f)
    return float(f.j ** (-2.0 / 3.0) * np.trace(f.c))


def volumetric_energy(model: MaterialModel, j: float) -> float:
    """Volumetric part U(J) of the energy; zero for Yeoh, which carries none."""
    if isinstance(model, Ogden1):
        return 0.5 * model.kappa * np.log(j) ** 2
    if isinstance(model, NeoHookean):
        lame = model.lame
        return -lame.mu * np.log(j) + 0.5 * lame.lam * np.log(j) ** 2
    return 0.0


def strain_energy(model: MaterialModel, f) -> float:
    """Strain-energy density (MPa) of ``model`` at deformation ``f``."""
    f = as_deformation(f)
    j = f.j
    if isinstance(model, NeoHookean):
        lame = model.lame
        lnj = np.log(j)
        i1 = np.trace(f.c)
        return float(0.5 * lame.mu * (i1 - 3.0) - lame.mu * lnj + 0.5 * lame.lam * lnj * lnj)
    if isinstance(model, Yeoh3):
        t = isochoric_i1(f) - 3.0
        return float(model.c1 * t + model.c2 * t**2 + model.c3 * t**3)
    if isinstance(model, Ogden1):
        w, _ = _eigh(f.c)
        lam_bar = np.sqrt(w) * j ** (-1.0 / 3.0)
        m = model.m1
        iso = model.c1 / m**2 * (np.sum(lam_bar**m) - 3.0)
        return float(iso + volumetric_energy(model, j))
    raise TypeError(f"unsupported material model {type(model).__name__}")


def pk2_stress(model: MaterialModel, f) -> np.ndarray:
    """Second Piola-Kirchhoff stress S = 2 dPsi/dC (MPa)."""
    f = as_deformation(f)
    j = f.j
    if j < _SINGULAR_J:
        raise SingularDeformationError(f"J = {j:.3g} is numerically zero")
    c = f.c
    eye = np.eye(3)
    if isinstance(model, NeoHookean):
        lame = model.lame
        c_inv = np.linalg.inv(c)
        s = lame.mu * (eye - c_inv) + lame.lam * np.log(j) * c_inv
    elif isinstance(model, Yeoh3):
        i1 = np.trace(c)
        t = j ** (-2.0 / 3.0) * i1 - 3.0
        c_inv = np.linalg.inv(c)
        s = 2.0 * model.dw_di1(t) * j ** (-2.0 / 3.0) * (eye - i1 / 3.0 * c_inv)
    elif isinstance(model, Ogden1):
        w, v = _eigh(c)
        lam_bar_m = (np.sqrt(w) * j ** (-1.0 / 3.0)) ** model.m1
        # beta_a = lambda_a dPsi/dlambda_a
        beta = model.c1 / model.m1 * (lam_bar_m - lam_bar_m.mean()) + model.kappa * np.log(j)
        s = (v * (beta / w)) @ v.T
    else:
        raise TypeError(f"unsupported material model {type(model).__name__}")
    return 0.5 * (s + s.T)


def cauchy_stress(model: MaterialModel, f) -> np.ndarray:
    """Cauchy stress, the push-forward J^-1 F S F^T of the PK2 stress."""
    f = as_deformation(f)
    s = pk2_stress(model, f)
    sigma = f.entries @ s @ f.entries.T / f.j
    return 0.5 * (sigma + sigma.T)


# ---------------------------------------------------------------------------
# incompressible homogeneous paths
# ---------------------------------------------------------------------------


def _positive(x, name):
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0.0)):
        raise InvalidDeformationError(f"{name} must be positive")
    return arr


def uniaxial_response(model: MaterialModel, stretch):
    """Axial Cauchy stress under incompressible uniaxial stretch.

    The deformation is ``diag(l, l**-0.5, l**-0.5)`` with the lateral traction
    removed by a hydrostatic pressure, so the axial stress equals
    ``l * dW/dl`` of the isochoric energy along the path. Accepts scalars or
    arrays.
    """
    lam = _positive(stretch, "stretch")
    out = model._uniaxial(lam)
    return float(out) if out.ndim == 0 else out


def equibiaxial_response(model: MaterialModel, stretch):
    """In-plane Cauchy stress under incompressible equibiaxial stretch."""
    lam = _positive(stretch, "stretch")
    out = model._equibiaxial(lam)
    return float(out) if out.ndim == 0 else out


def shear_response(model: MaterialModel, gamma):
    """Shear Cauchy stress under simple shear of amount ``gamma``.

    Evaluated on ``|gamma|`` and signed afterwards, which keeps the response
    exactly odd.
    """
    g = np.asarray(gamma, dtype=float)
    if not np.all(np.isfinite(g)):
        raise InvalidDeformationError("amount of shear must be finite")
    out = np.sign(g) * model._shear(np.abs(g))
    return float(out) if out.ndim == 0 else out


def simple_shear(gamma: float) -> np.ndarray:
    """Deformation gradient of simple shear in the 1-2 plane."""
    f = np.eye(3)
    f[0, 1] = gamma
    return f
