"""World-space enumeration, encodings, and exact per-world statistics."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from relmarg.data import GlobalExample
from relmarg.errors import CapExceededError, DomainError, VocabularyError
from relmarg.logic import evaluate, holds, parse_formula
from relmarg.stats import MODEL_B, ModelA, statistic
from relmarg.worlds import DEFAULT_ATOM_CAP, enumerate_worlds


def test_unconstrained_space_has_all_bit_patterns():
    space = enumerate_worlds(["a", "b"], {"e": 2})
    assert len(space) == 2 ** 4
    assert list(space.worlds) == list(range(16))


def test_atom_order_is_deterministic():
    space = enumerate_worlds(["a", "b"], {"r": 1, "e": 2})
    labels = [(a.pred, a.args) for a in space.atoms]
    assert labels == [
        ("e", ("a", "a")),
        ("e", ("a", "b")),
        ("e", ("b", "a")),
        ("e", ("b", "b")),
        ("r", ("a",)),
        ("r", ("b",)),
    ]


def test_hard_rules_filter_matches_brute_force():
    rule = parse_formula("forall X, Y: X = Y | e(X,Y) | e(Y,X)")
    space = enumerate_worlds(["a", "b", "c"], {"e": 2}, [rule])
    # brute filter over all 2^9 worlds
    free = enumerate_worlds(["a", "b", "c"], {"e": 2})
    expected = [
        int(bits)
        for bits in free.worlds
        if holds(rule, free.world_atoms(int(bits)), free.constants)
    ]
    assert list(space.worlds) == expected
    assert 0 < len(space) < len(free)


def test_hard_rule_validation():
    with pytest.raises(DomainError):
        enumerate_worlds(["a"], {"r": 1}, [parse_formula("r(X)")])
    with pytest.raises(DomainError):
        enumerate_worlds(["a"], {"r": 1}, [parse_formula("r(zz)")])
    with pytest.raises(DomainError):
        enumerate_worlds(["a", "a"], {"r": 1})


def test_cap_guards_enumeration():
    # 3 constants, arity 3: 27 atoms > 24
    with pytest.raises(CapExceededError) as exc:
        enumerate_worlds(["a", "b", "c"], {"t": 3})
    assert exc.value.size == 27
    assert exc.value.cap == DEFAULT_ATOM_CAP
    # explicit cap override admits it
    space = enumerate_worlds(["a", "b", "c"], {"e": 2}, cap=9)
    assert len(space) == 2 ** 9


def test_encode_and_round_trip():
    space = enumerate_worlds(["a", "b"], {"r": 1})
    ex = GlobalExample(["a", "b"], [("r", ("b",))], {"r": 1})
    bits = space.encode(ex)
    assert space.world_atoms(bits) == ex.atoms
    assert space.world_example(bits) == ex
    assert space.world_index(bits) == bits  # unconstrained: index == pattern
    assert space.contains(bits)


def test_encode_rejects_foreign_input():
    space = enumerate_worlds(["a", "b"], {"r": 1})
    with pytest.raises(DomainError):
        space.encode(GlobalExample(["a", "c"], [("r", ("a",))], {"r": 1}))
    with pytest.raises(DomainError):
        space.encode([("e", ("a", "b"))])


def test_world_index_reports_filtered_patterns():
    rule = parse_formula("forall X: r(X)")
    space = enumerate_worlds(["a", "b"], {"r": 1}, [rule])
    assert len(space) == 1
    with pytest.raises(DomainError, match="hard rules"):
        space.world_index(0)


def test_count_matrix_against_per_world_statistics():
    space = enumerate_worlds(["a", "b", "c"], {"e": 2})
    per_kind = {
        ModelA(2): [
            parse_formula("exists X, Y: X != Y & e(X,Y)"),
            parse_formula("forall X, Y: ~e(X,Y) | e(Y,X)"),
        ],
        MODEL_B: [
            parse_formula("forall X, Y: ~e(X,Y) | e(Y,X)"),
            parse_formula("forall X, Y: X = Y | e(X,Y)"),
        ],
    }
    for kind, formulas in per_kind.items():
        counts = space.count_matrix(formulas, kind)
        norms = space.normalizers(formulas, kind)
        # spot-check an eighth of the worlds against the public statistic
        for idx in range(0, len(space), 8):
            ex = space.world_example(int(space.worlds[idx]))
            for j, f in enumerate(formulas):
                expected = statistic(f, ex, kind)
                assert Fraction(int(counts[idx, j]), int(norms[j])) == expected


def test_feature_vector_is_exact():
    space = enumerate_worlds(["a", "b", "c"], {"e": 2})
    f = parse_formula("exists X, Y: X != Y & e(X,Y)")
    ex = GlobalExample(["a", "b", "c"], [("e", ("a", "b"))], {"e": 2})
    vec = space.feature_vector(ex, [f], ModelA(2))
    assert vec == (Fraction(1, 3),)
    vec_b = space.feature_vector(ex, [parse_formula("forall X, Y: ~e(X,Y)")], MODEL_B)
    assert vec_b == (Fraction(5, 6),)


def test_normalizers():
    space = enumerate_worlds(["a", "b", "c", "d"], {"r": 1})
    f1 = parse_formula("forall X: r(X)")
    f2 = parse_formula("forall X, Y: r(X) | r(Y)")
    assert list(space.normalizers([f1, f2], MODEL_B)) == [4, 12]
    assert list(space.normalizers([f1], ModelA(2))) == [6]
    with pytest.raises(DomainError):
        space.normalizers([f1], ModelA(5))


def test_count_matrix_validates_formulas():
    space = enumerate_worlds(["a", "b"], {"r": 1})
    with pytest.raises(DomainError):
        space.count_matrix([parse_formula("r(X)")], MODEL_B)
    # arity conflict with the space's vocabulary
    with pytest.raises(VocabularyError):
        space.count_matrix([parse_formula("forall X, Y: r(X, Y)")], MODEL_B)


def test_count_matrix_is_cached():
    space = enumerate_worlds(["a", "b"], {"r": 1})
    formulas = (parse_formula("forall X: r(X)"),)
    first = space.count_matrix(formulas, MODEL_B)
    assert space.count_matrix(formulas, MODEL_B) is first


def test_statistics_sum_identity_over_space():
    # summing a width-k subset count over all unconstrained worlds factorises:
    # each subset contributes (number of worlds whose restriction satisfies f)
    # = sat_k * 2^(atoms outside the subset)
    space = enumerate_worlds(["a", "b", "c"], {"r": 1})
    f = parse_formula("exists X: r(X)")
    counts = space.count_matrix([f], ModelA(2))
    total = int(counts.sum())
    per_subset = 0
    for subset in itertools.combinations("abc", 2):
        sat = sum(
            1
            for bits in range(4)
            if evaluate(
                f,
                GlobalExample(
                    subset,
                    [("r", (c,)) for i, c in enumerate(subset) if bits >> i & 1],
                    {"r": 1},
                ),
            )
        )
        per_subset += sat * 2  # one atom outside each 2-subset
    assert total == per_subset


def test_worlds_array_dtype_and_order():
    space = enumerate_worlds(["a", "b", "c"], {"r": 1})
    assert space.worlds.dtype == np.int64
    assert list(space.worlds) == sorted(space.worlds)
