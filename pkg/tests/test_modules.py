import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gammalab import naive
from gammalab.catalog import b3_modules, by_name, catalog_morphisms, z2_modules
from gammalab.errors import Obstruction, StructureError
from gammalab.modules import (GammaModule, ModuleMorphism, add_morphisms, biproduct,
                              biproduct_identities, cokernel, compose, compatibility_witness,
                              enumerate_morphisms, find_isomorphism, identity, kernel,
                              regular_module, submodule, validate_bimodule, validate_module,
                              validate_morphism, zero_module, zero_morphism)
from gammalab.monoid import boolean_monoid
from gammalab.semiring import b3, m2b

B3_MODS = b3_modules()
Z2_MODS = z2_modules()


@pytest.mark.parametrize("M", B3_MODS + Z2_MODS, ids=lambda M: f"{M.parent.name}:{M.name}")
def test_catalog_bimodules_validate(M):
    r = validate_bimodule(M)
    assert r.passed, (r.verdicts, r.witnesses)


def test_single_slot_regular_modules():
    for slot in (1, 2, 3):
        R = regular_module(b3(), (slot,))
        assert validate_module(R).passed
        assert all(naive.module_axioms(R, slot).values())


def test_validate_module_needs_slot_for_bimodules():
    with pytest.raises(StructureError):
        validate_module(B3_MODS[1])


def test_matrix_regular_bimodule_is_not_literally_compatible():
    # slot-2 and slot-3 actions of a non-commutative product do not commute
    R = regular_module(m2b(), (2, 3))
    w = compatibility_witness(R, 2, 3)
    assert w is not None
    S = R.parent
    inner_r = S((*w["right_args"], w["m"]), w["right_params"])
    lhs = S((w["left_args"][0], inner_r, w["left_args"][1]), w["left_params"])
    inner_l = S((w["left_args"][0], w["m"], w["left_args"][1]), w["left_params"])
    rhs = S((*w["right_args"], inner_l), w["right_params"])
    assert lhs != rhs
    # each action on its own has no failing law (M2 may be out of scan budget)
    for s in (2, 3):
        assert validate_module(R, s).failed == []


def test_action_table_errors():
    S = b3()
    with pytest.raises(StructureError):
        GammaModule(boolean_monoid(), S, {4: S.mu})
    with pytest.raises(StructureError):
        GammaModule(boolean_monoid(), S, {2: [0, 1, 1]})


def test_morphisms_match_oracle_on_z2():
    for M, N in itertools.product(Z2_MODS, repeat=2):
        assert sorted(f.map for f in enumerate_morphisms(M, N)) == sorted(naive.morphisms(M, N))


def test_validate_morphism_reports_failure():
    R = by_name(B3_MODS, "R")
    bad = ModuleMorphism(R, R, (1, 1))
    r = validate_morphism(bad)
    assert not r.passed


def test_composition_and_sums():
    R = by_name(B3_MODS, "R")
    RR = by_name(B3_MODS, "R+R")
    B = biproduct(R, R)
    f = compose(B.project_left, B.inject_left)
    assert f.map == identity(R).map
    s = add_morphisms(identity(R), zero_morphism(R, R))
    assert s.map == (0, 1)
    assert find_isomorphism(B.module, RR) is not None


def test_kernel_of_projection_is_left_summand():
    R = by_name(B3_MODS, "R")
    B = biproduct(R, R)
    K = kernel(B.project_right)
    assert K.module.size == 2 and K.inclusion.map == B.inject_left.map


def test_cokernel_of_chain_inclusion():
    chain = by_name(B3_MODS, "Chain3")
    R = by_name(B3_MODS, "R")
    cok = cokernel(ModuleMorphism(R, chain, (0, 1)))
    assert cok.module.size == 2 and cok.projection.map == (0, 0, 1)
    assert cok.coset_agrees


def test_submodule_rejects_non_closed_subset():
    RR = by_name(B3_MODS, "R+R")
    with pytest.raises(Obstruction):
        submodule(RR, [0, 1, 2])        # (1,0) + (0,1) = (1,1) is missing


def test_zero_module():
    Z = zero_module(b3(), (2, 3))
    assert Z.size == 1 and validate_bimodule(Z).passed


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(B3_MODS), st.sampled_from(B3_MODS))
def test_biproduct_identities_property(M, N):
    assert biproduct_identities(biproduct(M, N)).passed


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(catalog_morphisms(B3_MODS[:4])))
def test_kernel_then_cokernel(f):
    """The kernel inclusion composes to zero and the cokernel kills the image."""
    K = kernel(f)
    assert compose(f, K.inclusion).is_zero()
    C = cokernel(f)
    assert compose(C.projection, f).is_zero()
