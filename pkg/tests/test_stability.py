import numpy as np
import pytest

from conftest import REF_OGDEN, REF_YEOH
from dualchar.constitutive import NeoHookean, Yeoh3
from dualchar.exceptions import ParameterError
from dualchar.sampling import latin_hypercube, published_region
from dualchar.stability import (
    PATHS,
    StabilityProbe,
    drucker_stable,
    filter_stable,
    stable_mask,
)

CORNER = Yeoh3(c1=1.4e-3, c2=-3e-3, c3=3e-6)


def test_neohookean_region_all_pass():
    s = latin_hypercube(published_region("neohookean"), 250, 0)
    assert all(stable_mask(s.sets))
    assert len(filter_stable(s)) == 250


def test_yeoh_corner_fails_in_shear():
    v = drucker_stable(CORNER)
    assert not v.stable and not v
    assert "simple_shear" in v.violated_paths
    shear = [x for x in v.violations if x.path == "simple_shear"][0]
    assert shear.increment < 0
    # independent oracle: the shear stress 2 gamma W'(gamma^2) must drop somewhere
    g = np.linspace(0, 1.5, 61)
    tau = 2 * g * (CORNER.c1 + 2 * CORNER.c2 * g**2 + 3 * CORNER.c3 * g**4)
    assert np.any(np.diff(tau) < 0)


def test_shear_only_probe_flags_corner():
    v = drucker_stable(CORNER, StabilityProbe(paths=("simple_shear",)))
    assert v.violated_paths == ("simple_shear",)


def test_reference_sets_stable():
    assert drucker_stable(REF_YEOH).stable
    assert drucker_stable(REF_OGDEN).stable


def test_yeoh_sweep_keeps_strict_subset():
    s = latin_hypercube(published_region("yeoh"), 250, 0)
    kept = filter_stable(s)
    assert 0 < len(kept) < 250


def test_filter_preserves_order_and_idempotent():
    s = latin_hypercube(published_region("yeoh"), 60, 5)
    kept = filter_stable(s)
    positions = [s.sets.index(m) for m in kept]
    assert positions == sorted(positions)
    again = filter_stable(kept)
    assert again.sets == kept.sets


def test_refinement_never_rescues():
    probe = StabilityProbe()
    fine = probe.refined(4)
    s = latin_hypercube(published_region("yeoh"), 120, 9)
    for m in s:
        if not drucker_stable(m, probe).stable:
            assert not drucker_stable(m, fine).stable


def test_parallel_mask_matches_serial():
    s = latin_hypercube(published_region("yeoh"), 40, 2)
    assert stable_mask(s.sets, n_jobs=2) == stable_mask(s.sets)


def test_empty_and_mixed():
    assert filter_stable([]) == []
    with pytest.raises(ParameterError):
        filter_stable([REF_YEOH, NeoHookean(0.1, 0.45)])


def test_probe_validation():
    assert StabilityProbe().grid("uniaxial").size == 61
    with pytest.raises(ParameterError):
        StabilityProbe(paths=("torsion",))
    with pytest.raises(ParameterError):
        StabilityProbe(stretch_range=(1.2, 1.8))
    with pytest.raises(ParameterError):
        StabilityProbe(steps=1)
    assert set(PATHS) == {"uniaxial", "equibiaxial", "simple_shear"}
