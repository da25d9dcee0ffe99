import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gammalab import naive
from gammalab.errors import LimitExceeded, StructureError
from gammalab.monoid import boolean_monoid
from gammalab.semiring import (GammaIdeal, GammaSemiring, SemiringHom, b3,
                               build_endomorphism_realization, build_matrix_realization,
                               enumerate_ideals, is_gamma_ideal, is_prime, m2b, prime_spectrum,
                               quotient_semiring, scalar_product_semiring, symmetry_witness,
                               validate_gamma_semiring, validate_homomorphism, z2_realization)


@pytest.mark.parametrize("S", [b3(), b3(gamma_unit_only=True), z2_realization(3),
                               z2_realization(4), scalar_product_semiring("z2", 2)],
                         ids=lambda S: S.name)
def test_known_semirings_pass(S):
    r = validate_gamma_semiring(S)
    assert r.passed, r.verdicts
    assert {k: v == "pass" for k, v in r.verdicts.items()} == naive.semiring_axioms(S)


def test_b3_is_symmetric_and_matrices_are_not():
    assert symmetry_witness(b3()) == "fully symmetric"
    w = symmetry_witness(m2b())
    S = m2b()
    ys = list(w["args"])
    i, j = w["swap"][0] - 1, w["swap"][1] - 1
    ys[i], ys[j] = ys[j], ys[i]
    # the witness replays
    assert S(w["args"], w["params"]) != S(ys, w["params"])


def test_shape_errors():
    B = boolean_monoid()
    with pytest.raises(StructureError):
        GammaSemiring(B, B, 3, np.zeros((2, 2, 2, 2)))
    with pytest.raises(StructureError):
        GammaSemiring(B, B, 1, np.zeros(2))
    with pytest.raises(StructureError):
        GammaSemiring(B, B, 2, np.full((2, 2, 2), 5))


def test_matrix_realization_limit():
    with pytest.raises(LimitExceeded):
        build_matrix_realization("boolean", 3, 3)


def test_endomorphism_realization_passes():
    S = build_endomorphism_realization(boolean_monoid(), 3, [(0, 1)])
    assert validate_gamma_semiring(S).passed


cells = st.tuples(st.tuples(*[st.integers(0, 1)] * 3), st.tuples(*[st.integers(0, 1)] * 2))


@settings(max_examples=32, deadline=None)
@given(cells)
def test_single_cell_flips_agree_with_oracle(cell):
    xs, gs = cell
    S = b3()
    mutant = S.with_entry(xs, gs, 1 - S(xs, gs))
    r = validate_gamma_semiring(mutant)
    oracle = naive.semiring_axioms(mutant)
    assert {k: v == "pass" for k, v in r.verdicts.items()} == oracle
    # only the all-zero operation survives a flip
    assert r.passed == ((xs, gs) == ((1, 1, 1), (1, 1)))


def test_ideals_and_spectrum():
    S = b3()
    assert [sorted(I.members) for I in enumerate_ideals(S)] == [[0], [0, 1]]
    assert prime_spectrum(S) == []
    # with Gamma = {0, 1}, [1,1,1]_{0,0} = 0 lies in {0} with no argument in it
    assert is_prime(S, GammaIdeal(frozenset({0}), S)) is not None
    U = b3(gamma_unit_only=True)
    assert [sorted(P.members) for P in prime_spectrum(U)] == [[0]]
    assert is_gamma_ideal(S, {1}).passed is False


def test_spectrum_matches_scanner_on_z2():
    S = z2_realization(3)
    assert [set(P.members) for P in prime_spectrum(S)] == \
        [set(P) for P in naive.prime_ideals(S)]


def test_quotient_by_whole_carrier():
    S = b3()
    Q, hom = quotient_semiring(S, GammaIdeal(frozenset({0, 1}), S))
    assert Q.T.size == 1
    assert validate_gamma_semiring(Q).passed
    assert validate_homomorphism(hom).passed


def test_identity_homomorphism_and_a_bad_one():
    S = b3()
    assert validate_homomorphism(SemiringHom(S, S, (0, 1), (0, 1))).passed
    assert not validate_homomorphism(SemiringHom(S, S, (1, 0), (0, 1))).passed
