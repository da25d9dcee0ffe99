from hypothesis import given, settings, strategies as st

from gammalab import naive
from gammalab.catalog import b3_modules
from gammalab.modules import enumerate_morphisms
from gammalab.monoid import chain_monoid, cyclic_group_monoid
from gammalab.semiring import b3


def test_set_partitions_are_bell_numbers():
    assert [sum(1 for _ in naive.set_partitions(range(k))) for k in range(6)] == \
        [1, 1, 2, 5, 15, 52]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([chain_monoid(3), cyclic_group_monoid(4)]), st.data())
def test_matrix_and_partition_oracles_agree(M, data):
    pairs = data.draw(st.lists(st.tuples(st.integers(0, M.size - 1),
                                         st.integers(0, M.size - 1)), max_size=3))
    assert naive.smallest_congruence_by_matrix(M.size, M.add, pairs) == \
        naive.smallest_congruence_by_partitions(M.add, pairs)


def test_morphism_oracle_matches_engine():
    mods = b3_modules()
    for M in mods:
        for N in mods:
            engine = sorted(tuple(f.map) for f in enumerate_morphisms(M, N))
            assert engine == sorted(naive.morphisms(M, N))


def test_b3_axioms_by_loops():
    assert naive.semiring_axioms(b3()) == {"A1": True, "A2": True, "A3": True}
    R = b3_modules()[1]
    assert all(naive.module_axioms(R, 2).values())


def test_bracketing_replay():
    R = b3_modules()[1]
    w = {"reference": "[t,[t,m,t],t]", "other": "[[t,t,t],m,t]",
         "leaves": [1, 1, 1, 1, 1], "params": [1, 1, 1, 1]}
    assert naive.evaluate_bracketing(R, 2, w["reference"], w["leaves"], w["params"]) == 1
    assert not naive.replay_m2(R, 2, w)
