import pytest

from gammalab.catalog import b3_modules, by_name, z2_modules
from gammalab.errors import LimitExceeded, StructureError
from gammalab.free import (extend_morphism, free_module, partial_morphism_witness,
                           reachable_from_generators, representability, validate_free_module)
from gammalab.semiring import b3, z2_realization


def test_b3_single_generator_depth_two():
    F = free_module(["x"], b3(), depth=2)
    assert F.size == 13
    assert F.status == "bound-exceeded"
    assert validate_free_module(F).passed
    assert F.describe(F.insertion(0)) == "<x>"


def test_empty_generating_set_is_zero():
    F = free_module([], b3(), depth=2)
    assert F.size == 1


def test_depth_one_has_only_sums_of_generators():
    F = free_module(["x", "y"], b3(), depth=1)
    # 0, <x>, <y>, 2<x>, <x>+<y>, 2<y>
    assert F.size == 6


def test_z2_free_module_respects_vanishing_sums():
    # 1 + 1 = 0 in T forces [1,<x>,1] + [1,<x>,1] = 0
    F = free_module(["x"], z2_realization(3), depth=2)
    assert validate_free_module(F).passed
    assert set(range(F.size)) == reachable_from_generators(F)


@pytest.mark.parametrize("S,mods", [(b3(), b3_modules()), (z2_realization(3), z2_modules())],
                         ids=["B3", "Z2"])
def test_representability(S, mods):
    F = free_module(["x", "y"], S, depth=2)
    for M in mods:
        r = representability(F, M)
        assert r.passed, (M.name, r.witnesses)


def test_extension_sends_generator_to_its_image():
    F = free_module(["x"], b3(), depth=2)
    R = by_name(b3_modules(), "R")
    values, report = extend_morphism(F, R, [1])
    assert report.passed
    assert values[F.insertion(0)] == 1
    assert partial_morphism_witness(F, R, values) is None


def test_wrong_values_are_not_a_morphism():
    F = free_module(["x"], b3(), depth=1)
    R = by_name(b3_modules(), "R")
    values = [0] * F.size
    values[F.insertion(0)] = 1       # but 2<x> stays 0 while <x> + <x> = 1 in R
    assert partial_morphism_witness(F, R, values) is not None


def test_limits_and_errors():
    with pytest.raises(LimitExceeded):
        free_module(["x", "y", "z"], b3(), depth=3, limit=100)
    with pytest.raises(StructureError):
        free_module(["x"], b3(), depth=0)
    with pytest.raises(StructureError):
        free_module(["x"], b3(), slot=4)
