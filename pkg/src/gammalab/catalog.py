"""Small named bimodules, morphisms and conflations used by sweeps and tests.

Every module here acts at slots 2 and 3 (left and right for n = 3).
"""
from __future__ import annotations

from .exact import Conflation, identity_conflations, make_conflation, split_conflation
from .modules import (GammaModule, ModuleMorphism, biproduct, enumerate_morphisms,
                      module_from_function, regular_module, zero_module)
from .monoid import boolean_monoid, chain_monoid, z2_monoid
from .semiring import GammaSemiring, b3, z2_realization

SLOTS = (2, 3)


def _zero_action(carrier, S, name):
    return module_from_function(carrier, S, SLOTS, lambda s, xs, m, gs: carrier.zero, name)


def scalar_module(carrier, S: GammaSemiring, name=None) -> GammaModule:
    """m is kept when every argument and parameter is the unit, killed otherwise.

    This is a module over the Boolean product semiring whenever the carrier
    addition is idempotent.
    """
    T, G = S.T, S.Gamma

    def fn(slot, xs, m, gs):
        # Boolean product: the unit is 1 in both T and Gamma (or Gamma={1})
        alive = all(x == 1 for x in xs) and (G.size == 1 or all(g == 1 for g in gs))
        return m if alive else carrier.zero

    return module_from_function(carrier, S, SLOTS, fn, name)


def _pair(M, N, name):
    B = biproduct(M, N, name).module
    B.name = name
    return B


def b3_modules(S: GammaSemiring | None = None) -> list[GammaModule]:
    S = b3() if S is None else S
    R = regular_module(S, SLOTS, "R")
    return [
        zero_module(S, SLOTS),
        R,
        _pair(R, R, "R+R"),
        _zero_action(boolean_monoid(), S, "Bool0"),
        _zero_action(z2_monoid(), S, "Z2_0"),
        scalar_module(chain_monoid(2), S, "Chain3"),
        _pair(_zero_action(z2_monoid(), S, "Z2_0"), _zero_action(boolean_monoid(), S, "Bool0"),
              "Z2_0+Bool0"),
    ]


def z2_modules(S: GammaSemiring | None = None) -> list[GammaModule]:
    S = z2_realization(3) if S is None else S
    R = regular_module(S, SLOTS, "Z")
    return [
        zero_module(S, SLOTS),
        R,
        _pair(R, R, "Z+Z"),
        _zero_action(boolean_monoid(), S, "Bool0"),
    ]


def by_name(modules, name) -> GammaModule:
    for M in modules:
        if M.name == name:
            return M
    raise KeyError(name)


def nonsplit_chain_conflation(S: GammaSemiring | None = None) -> Conflation:
    """R -> Chain3 -> R: 1 goes to 1, and 1 collapses to 0 in the quotient.

    Chain3 has three elements so it is not R+R; the sequence does not split.
    """
    S = b3() if S is None else S
    R = regular_module(S, SLOTS, "R")
    chain = scalar_module(chain_monoid(2), S, "Chain3")
    i = ModuleMorphism(R, chain, (0, 1))
    p = ModuleMorphism(chain, R, (0, 0, 1))
    return make_conflation(i, p, "R>Chain3>R")


def non_kernel_mono(S: GammaSemiring | None = None) -> ModuleMorphism:
    """R -> Chain3 sending 1 to the top: injective but not a kernel."""
    S = b3() if S is None else S
    R = regular_module(S, SLOTS, "R")
    chain = scalar_module(chain_monoid(2), S, "Chain3")
    return ModuleMorphism(R, chain, (0, 2))


def conflations(modules, include_nonsplit=True) -> list[Conflation]:
    """Identity conflations of every nonzero module, split ones on nonzero pairs,
    and (over B3) the non-split chain sequence."""
    out = []
    nonzero = [M for M in modules if M.size > 1]
    for M in nonzero:
        for c, tag in zip(identity_conflations(M), ("0>M>M", "M>M>0")):
            c.name = f"{tag}[{M.name}]"
            out.append(c)
    small = [M for M in nonzero if M.size <= 2]
    for A in small:
        for C in small:
            out.append(split_conflation(A, C, f"{A.name}>{A.name}+{C.name}>{C.name}"))
    if include_nonsplit and modules and modules[0].parent.name == "B3":
        out.append(nonsplit_chain_conflation(modules[0].parent))
    return out


def catalog_morphisms(modules, limit=2 ** 12):
    """Every morphism between every ordered pair of catalog modules."""
    out = []
    for M in modules:
        for N in modules:
            out.extend(enumerate_morphisms(M, N, limit=limit))
    return out


__all__ = ["SLOTS", "b3_modules", "z2_modules", "scalar_module", "by_name", "conflations",
           "nonsplit_chain_conflation", "non_kernel_mono",
           "catalog_morphisms"]
