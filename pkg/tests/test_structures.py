"""Structures, fragments, canonical forms, and the facts file format."""

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relmarg.data import (
    GlobalExample,
    GroundAtom,
    as_local,
    canonicalize,
    format_facts,
    fragment,
    is_isomorphic,
    local_class,
    parse_facts,
)
from relmarg.errors import DomainError, FactsSyntaxError


def test_atoms_coerce_from_pairs():
    ex = GlobalExample(["a", "b"], [("e", ("a", "b"))])
    assert GroundAtom("e", ("a", "b")) in ex.atoms


def test_constants_keep_order_and_reject_duplicates():
    ex = GlobalExample(["b", "a"], [])
    assert ex.constants == ("b", "a")
    with pytest.raises(DomainError):
        GlobalExample(["a", "a"], [])


def test_atoms_must_use_known_constants():
    with pytest.raises(DomainError):
        GlobalExample(["a"], [("e", ("a", "zz"))])


def test_vocabulary_collects_arities():
    ex = GlobalExample(["a", "b"], [("e", ("a", "b")), ("r", ("a",))])
    assert ex.vocabulary() == {"e": 2, "r": 1}


def test_fragment_restricts_atoms_and_keeps_vocabulary():
    ex = GlobalExample(
        ["a", "b", "c"],
        [("e", ("a", "b")), ("e", ("b", "c")), ("r", ("c",))],
    )
    sub = fragment(ex, ["a", "b"])
    assert sub.constants == ("a", "b")
    assert sub.atoms == frozenset({GroundAtom("e", ("a", "b"))})
    # vocabulary survives even when no atom of a predicate remains
    assert sub.vocabulary()["r"] == 1


def test_fragment_keeps_base_constant_order():
    ex = GlobalExample(["a", "b", "c"], [])
    assert fragment(ex, ["c", "a"]).constants == ("a", "c")


def test_fragment_rejects_unknown_constants():
    ex = GlobalExample(["a"], [])
    with pytest.raises(DomainError):
        fragment(ex, ["q"])


# ---------------------------------------------------------------------------
# canonical forms

def _relabelings(example: GlobalExample):
    n = len(example.constants)
    for perm in itertools.permutations(range(1, n + 1)):
        mapping = dict(zip(example.constants, (str(i) for i in perm)))
        yield GlobalExample(
            sorted(mapping.values()),
            [(a.pred, tuple(mapping[c] for c in a.args)) for a in example.atoms],
        )


def test_canonical_form_is_relabeling_invariant():
    ex = GlobalExample(["x", "y", "z"], [("e", ("x", "y")), ("e", ("y", "z"))])
    forms = {canonicalize(as_local(g)) for g in _relabelings(ex)}
    assert len(forms) == 1


def test_class_size_counts_distinct_labelings():
    # single directed edge on two constants: two labelings, no symmetry
    edge = GlobalExample(["x", "y"], [("e", ("x", "y"))])
    cf = canonicalize(as_local(edge))
    assert cf.class_size == 2
    # symmetric pair: the swap is an automorphism
    both = GlobalExample(["x", "y"], [("e", ("x", "y")), ("e", ("y", "x"))])
    assert canonicalize(as_local(both)).class_size == 1
    empty = GlobalExample(["x", "y"], [])
    assert canonicalize(as_local(empty)).class_size == 1


def test_class_sizes_sum_to_labelings():
    # over all 2-constant graphs, class_size = k!/|Aut|
    for bits in range(16):
        atoms = []
        pairs = [("x", "x"), ("x", "y"), ("y", "x"), ("y", "y")]
        for i, pair in enumerate(pairs):
            if bits >> i & 1:
                atoms.append(("e", pair))
        cf = canonicalize(as_local(GlobalExample(["x", "y"], atoms)))
        assert math.factorial(2) % cf.class_size == 0


def test_local_class_realizes_every_labeling():
    ex = GlobalExample(["a", "b", "c"], [("e", ("a", "b"))])
    cls = local_class(ex, ["a", "b"])
    assert len(cls) == 2


def test_is_isomorphic_matches_brute_force():
    a = GlobalExample(["x", "y", "z"], [("e", ("x", "y")), ("e", ("y", "z"))])
    b = GlobalExample(["p", "q", "r"], [("e", ("q", "r")), ("e", ("p", "q"))])
    c = GlobalExample(["p", "q", "r"], [("e", ("q", "r")), ("e", ("q", "p"))])
    assert is_isomorphic(a, b)
    assert not is_isomorphic(a, c)
    assert not is_isomorphic(a, GlobalExample(["x", "y"], [("e", ("x", "y"))]))


def test_canonicalize_width_cap():
    wide = GlobalExample([f"c{i}" for i in range(9)], [])
    with pytest.raises(Exception):
        canonicalize(as_local(wide))


# ---------------------------------------------------------------------------
# facts format

def test_parse_facts_full_form():
    text = """# friendships
@constants alice, bob, eve
fr(alice,bob).
fr(bob, alice)
sm(alice)
"""
    ex = parse_facts(text)
    assert ex.constants == ("alice", "bob", "eve")
    assert GroundAtom("fr", ("bob", "alice")) in ex.atoms
    assert len(ex.atoms) == 3


def test_parse_facts_without_directive_collects_constants():
    ex = parse_facts("e(a,b)\ne(b,c)\n")
    assert set(ex.constants) == {"a", "b", "c"}


def test_parse_facts_reports_line_numbers():
    with pytest.raises(FactsSyntaxError) as exc:
        parse_facts("e(a,b)\ne(a,\n")
    assert exc.value.line == 2


def test_parse_facts_rejects_arity_conflicts():
    with pytest.raises(FactsSyntaxError):
        parse_facts("e(a,b)\ne(a)\n")


def test_format_parse_facts_round_trip():
    ex = GlobalExample(
        ["alice", "bob", "eve"],
        [("fr", ("alice", "bob")), ("sm", ("alice",))],
    )
    again = parse_facts(format_facts(ex))
    assert again.constants == ex.constants
    assert again.atoms == ex.atoms


@st.composite
def random_examples(draw):
    n = draw(st.integers(min_value=1, max_value=4))
    consts = [f"c{i}" for i in range(n)]
    atoms = []
    for c in consts:
        if draw(st.booleans()):
            atoms.append(("r", (c,)))
    for c1, c2 in itertools.product(consts, repeat=2):
        if draw(st.booleans()):
            atoms.append(("e", (c1, c2)))
    return GlobalExample(consts, atoms)


@settings(max_examples=200, deadline=None)
@given(random_examples())
def test_facts_round_trip_random(ex):
    again = parse_facts(format_facts(ex))
    assert again.constants == ex.constants
    assert again.atoms == ex.atoms


@settings(max_examples=100, deadline=None)
@given(random_examples())
def test_canonical_form_stable_under_constant_shuffle(ex):
    relabeled = next(iter(_relabelings(ex)))
    assert canonicalize(as_local(ex)) == canonicalize(as_local(relabeled))
    assert is_isomorphic(ex, relabeled)
