import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gammalab import naive
from gammalab.catalog import b3_modules, by_name, conflations, z2_modules
from gammalab.errors import StructureError
from gammalab.modules import enumerate_morphisms, identity, validate_bimodule, validate_module
from gammalab.monoid import boolean_monoid
from gammalab.tensor import (balanced_maps, check_adjunction, check_hom_left_exact,
                             check_tensor_right_exact, coequalizer_universal_property,
                             internal_hom, multi_tensor, positional_tensor, tensor_map,
                             validate_tensor)

MODS = b3_modules()
R, RR, CHAIN = by_name(MODS, "R"), by_name(MODS, "R+R"), by_name(MODS, "Chain3")


def _agrees_with_oracle(M, N):
    T = positional_tensor(M, N, 3, 2)
    pairs, elements, labels = naive.tensor_partition(M, N, 3, 2)
    U = T.universe
    engine = {tuple(U.digits(x)): T.classes[x] for x in range(U.size)}
    return naive._canonical([engine[tuple(e)] for e in elements]) == labels


def test_small_tensor_sizes():
    assert positional_tensor(R, R, 3, 2).module.size == 2
    assert positional_tensor(CHAIN, CHAIN, 3, 2).module.size == 6
    assert positional_tensor(R, RR, 3, 2).module.size == 4


def test_tensor_of_regular_is_a_bimodule():
    T = positional_tensor(R, R, 3, 2)
    assert T.complete and not T.warnings
    assert validate_bimodule(T.module).passed
    assert validate_tensor(T).passed


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([m for m in MODS if m.size <= 3]),
       st.sampled_from([m for m in MODS if m.size <= 3]))
def test_tensor_matches_oracle(M, N):
    assert _agrees_with_oracle(M, N)


def test_universal_property_on_chain():
    T = positional_tensor(CHAIN, R, 3, 2)
    r = coequalizer_universal_property(T, boolean_monoid())
    assert r.passed and r.info["balanced_maps"] == len(balanced_maps(CHAIN, R, boolean_monoid(),
                                                                     3, 2))


def test_bound_exceeded_is_reported():
    T = positional_tensor(RR, RR, 3, 2, limit=16)
    assert not T.complete and T.module is None
    assert validate_tensor(T).verdicts["additive"] == "unavailable"


def test_multi_tensor_three_factors():
    T = multi_tensor([R, R, R])
    assert T.complete and T.module.size == 2


def test_multi_tensor_needs_balancing_slots():
    with pytest.raises(StructureError):
        multi_tensor([R, R], [(1, 2)])


def test_tensor_map_of_identities():
    T = positional_tensor(CHAIN, R, 3, 2)
    f = tensor_map([identity(CHAIN), None], T, T)
    assert f.map == tuple(range(T.module.size))


def test_internal_hom():
    H = internal_hom(R, R, 3, 2)
    assert H.module.size == 2
    assert validate_module(H.module, 2).passed


@pytest.mark.parametrize("M,N,P", [(R, R, R), (CHAIN, R, RR), (R, CHAIN, CHAIN)],
                         ids=["R,R,R", "Chain3,R,R+R", "R,Chain3,Chain3"])
def test_adjunction_counts(M, N, P):
    r = check_adjunction(M, N, P, 3, 2)
    assert r.passed, (r.verdicts, r.witnesses)
    T = positional_tensor(M, N, 3, 2)
    assert r.info["hom_tensor"] == len(enumerate_morphisms(T.module, P))


def test_exactness_on_nonsplit_conflation():
    c = [c for c in conflations(MODS) if c.name == "R>Chain3>R"][0]
    for M in MODS:
        assert check_hom_left_exact(M, c).passed
        assert check_tensor_right_exact(M, c, 3, 2).passed


def test_z2_tensor_sizes():
    Z = by_name(z2_modules(), "Z")
    T = positional_tensor(Z, Z, 3, 2)
    assert T.module.size == 2 and _agrees_with_oracle(Z, Z)
