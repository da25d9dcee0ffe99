import pytest

from gammalab.catalog import (b3_modules, by_name, conflations, non_kernel_mono,
                              nonsplit_chain_conflation, z2_modules)
from gammalab.errors import Obstruction
from gammalab.exact import (certify, check_quillen_instance, identity_conflations, is_deflation,
                            is_inflation, make_conflation, pullback, pullback_universal_property,
                            pushout, pushout_universal_property, split_conflation)
from gammalab.modules import ModuleMorphism, enumerate_morphisms

MODS = b3_modules()
R, CHAIN = by_name(MODS, "R"), by_name(MODS, "Chain3")


def test_catalog_conflations_are_certified():
    for mods in (MODS, z2_modules()):
        for c in conflations(mods):
            assert c.certified, (c.name, c.report.witnesses)


def test_nonsplit_conflation():
    c = nonsplit_chain_conflation()
    assert c.certified
    A, B, C = c.objects
    assert B.size == 3 and A.size == C.size == 2


def test_non_kernel_mono_is_not_an_inflation():
    m = non_kernel_mono()
    assert m.is_injective()
    assert not is_inflation(m)


def test_make_conflation_rejects_bad_pair():
    i = ModuleMorphism(R, CHAIN, (0, 1))
    p = ModuleMorphism(CHAIN, R, (0, 1, 1))      # kills nothing, so p.i != 0
    assert not certify(i, p).passed
    with pytest.raises(Obstruction):
        make_conflation(i, p)


def test_identity_and_split_conflations():
    for c in identity_conflations(CHAIN):
        assert c.certified
    c = split_conflation(R, R)
    assert is_inflation(c.inflation) and is_deflation(c.deflation)


def test_pushout_and_pullback_universal_properties():
    c = nonsplit_chain_conflation()
    i, p = c.inflation, c.deflation
    A, B, C = c.objects
    tests = [M for M in MODS if M.size <= 3]
    for f in enumerate_morphisms(A, CHAIN):
        sq = pushout(i, f)
        assert sq.report.passed
        assert pushout_universal_property(i, f, sq, tests).passed
    for g in enumerate_morphisms(CHAIN, C):
        sq = pullback(p, g)
        assert sq.report.passed
        assert pullback_universal_property(p, g, sq, tests).passed


def test_quillen_on_small_catalog_excludes_non_kernel_mono():
    mods = [M for M in MODS if M.size <= 3]
    r = check_quillen_instance(conflations(mods), mods, monos=[non_kernel_mono()])
    assert r.passed, r.witnesses
    assert len(r.info["excluded"]) == 1
    assert r.info["excluded"][0]["status"] == "not admissible - excluded"
