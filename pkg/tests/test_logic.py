"""Parser, printer, and evaluator tests, cross-checked against a standalone
ground-expansion oracle."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relmarg.data import GlobalExample
from relmarg.errors import DomainError, FormulaSyntaxError, VocabularyError
from relmarg.logic import (
    And,
    Const,
    Eq,
    Exists,
    Forall,
    Not,
    Or,
    PredAtom,
    Predicate,
    Var,
    apply_substitution,
    constants_of,
    evaluate,
    format_formula,
    free_vars,
    holds,
    is_proper,
    parse_formula,
    quantifier_free,
    strip_foralls,
    unsatisfied_rules,
    vars_of,
    vocabulary_of,
)


def oracle(f, true_atoms, domain, env):
    """Reference evaluator: grounds quantifiers by explicit enumeration and
    looks atoms up in a set of (pred, arg names) pairs."""
    if isinstance(f, Forall):
        names = [v.name for v in f.vars]
        return all(
            oracle(f.body, true_atoms, domain, {**env, **dict(zip(names, combo))})
            for combo in itertools.product(domain, repeat=len(names))
        )
    if isinstance(f, Exists):
        names = [v.name for v in f.vars]
        return any(
            oracle(f.body, true_atoms, domain, {**env, **dict(zip(names, combo))})
            for combo in itertools.product(domain, repeat=len(names))
        )
    if isinstance(f, And):
        return all(oracle(p, true_atoms, domain, env) for p in f.parts)
    if isinstance(f, Or):
        return any(oracle(p, true_atoms, domain, env) for p in f.parts)
    if isinstance(f, Not):
        return not oracle(f.sub, true_atoms, domain, env)
    if isinstance(f, Eq):
        left = env[f.left.name] if isinstance(f.left, Var) else f.left.name
        right = env[f.right.name] if isinstance(f.right, Var) else f.right.name
        return left == right
    names = tuple(
        env[t.name] if isinstance(t, Var) else t.name for t in f.args
    )
    return (f.pred.name, names) in true_atoms


# ---------------------------------------------------------------------------
# parsing

def test_parse_builds_expected_tree():
    f = parse_formula("forall X, Y: ~fr(X,Y) | sm(Y)")
    assert isinstance(f, Forall)
    assert f.vars == (Var("X"), Var("Y"))
    assert isinstance(f.body, Or)
    neg, pos = f.body.parts
    assert isinstance(neg, Not) and isinstance(neg.sub, PredAtom)
    assert pos == PredAtom(Predicate("sm", 1), (Var("Y"),))


def test_conjunction_binds_tighter_than_disjunction():
    f = parse_formula("r(a) | r(b) & r(c)")
    assert isinstance(f, Or)
    assert isinstance(f.parts[1], And)


def test_negation_binds_tightest():
    f = parse_formula("~r(a) & r(b)")
    assert isinstance(f, And)
    assert isinstance(f.parts[0], Not)


def test_implication_desugars_to_disjunction():
    f = parse_formula("r(a) -> r(b)")
    assert f == Or((Not(PredAtom(Predicate("r", 1), (Const("a"),))),
                    PredAtom(Predicate("r", 1), (Const("b"),))))
    assert format_formula(f) == "~r(a) | r(b)"


def test_inequality_desugars_and_resugars():
    f = parse_formula("a != b")
    assert f == Not(Eq(Const("a"), Const("b")))
    assert format_formula(f) == "a != b"


def test_quantifier_prefix_scopes_to_the_end():
    f = parse_formula("exists X: r(X) & s(X)")
    assert isinstance(f, Exists)
    assert isinstance(f.body, And)


def test_parentheses_override_precedence():
    f = parse_formula("(r(a) | r(b)) & r(c)")
    assert isinstance(f, And)
    assert isinstance(f.parts[0], Or)


def test_case_distinguishes_variables_from_constants():
    f = parse_formula("e(X, bob)")
    assert f.args == (Var("X"), Const("bob"))


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("forall X r(X)", "expected ':'"),
        ("r(a", "expected ')'"),
        ("a = ", "expected a term"),
        ("!r(a)", "unexpected character '!'"),
        ("forall: r(X)", "expected a variable"),
        ("", "expected"),
        ("r(a) &", "expected"),
        ("forall x: r(x)", "expected a variable"),
    ],
)
def test_syntax_errors_carry_positions(text, fragment):
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula(text)
    assert fragment in str(exc.value)
    assert exc.value.line == 1
    assert exc.value.col >= 1


def test_arity_conflict_is_rejected_at_parse_time():
    with pytest.raises(FormulaSyntaxError, match="arity"):
        parse_formula("r(a) & r(a,b)")


def test_predicates_cannot_be_applied_to_nothing():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("r()")


# ---------------------------------------------------------------------------
# printing

@pytest.mark.parametrize(
    "text",
    [
        "r(a)",
        "a = b",
        "a != b",
        "~r(a)",
        "r(a) & r(b) & r(c)",
        "r(a) | r(b)",
        "a = b | r(a) & ~r(b)",
        "(r(a) | r(b)) & r(c)",
        "forall X, Y: ~fr(X,Y) | sm(X) | sm(Y)",
        "exists X: r(X) & ~(s(X) | t(X))",
        "forall X: exists Y: e(X,Y)",
    ],
)
def test_print_parse_fixpoint(text):
    f = parse_formula(text)
    printed = format_formula(f)
    assert parse_formula(printed) == f
    assert format_formula(parse_formula(printed)) == printed


# ---------------------------------------------------------------------------
# structure helpers

def test_variable_and_constant_collection():
    f = parse_formula("forall X: e(X, a) | (exists Y: e(Y, b))")
    assert vars_of(f) == frozenset({Var("X"), Var("Y")})
    assert constants_of(f) == frozenset({"a", "b"})
    assert free_vars(f) == frozenset()


def test_free_vars_of_open_formula():
    f = parse_formula("e(X, Y) & r(X)")
    assert free_vars(f) == frozenset({Var("X"), Var("Y")})
    assert not quantifier_free(parse_formula("forall X: r(X)"))
    assert quantifier_free(f)


def test_strip_foralls():
    vs, matrix = strip_foralls(parse_formula("forall X, Y: e(X,Y)"))
    assert vs == (Var("X"), Var("Y"))
    assert isinstance(matrix, PredAtom)


def test_vocabulary_of_merges_arities():
    f = parse_formula("forall X: r(X) | e(X, X)")
    assert vocabulary_of(f) == {"r": 1, "e": 2}


def test_apply_substitution_grounds_variables():
    f = parse_formula("e(X, Y)")
    grounded = apply_substitution(f, {Var("X"): Const("a"), Var("Y"): Const("b")})
    assert format_formula(grounded) == "e(a,b)"


# ---------------------------------------------------------------------------
# evaluation

FRIENDS = GlobalExample(
    ["alice", "bob", "eve"],
    [
        ("fr", ("alice", "bob")),
        ("fr", ("bob", "alice")),
        ("fr", ("bob", "eve")),
        ("fr", ("eve", "bob")),
        ("sm", ("alice",)),
    ],
)


@pytest.mark.parametrize(
    "text, want",
    [
        ("sm(alice)", True),
        ("sm(bob)", False),
        ("exists X: sm(X)", True),
        ("forall X: sm(X)", False),
        ("forall X, Y: ~fr(X,Y) | fr(Y,X)", True),
        ("exists X, Y: X != Y & fr(X,Y) & sm(X)", True),
        ("forall X: exists Y: fr(X,Y) & sm(Y)", False),
        ("forall X: exists Y: fr(X,Y) | X = Y", True),
        ("alice = alice", True),
        ("alice != alice", False),
    ],
)
def test_evaluate_on_fixed_structure(text, want):
    assert evaluate(parse_formula(text), FRIENDS) is want


def test_evaluate_requires_closed_formula():
    with pytest.raises(DomainError, match="closed"):
        evaluate(parse_formula("sm(X)"), FRIENDS)


def test_evaluate_rejects_unknown_constants():
    with pytest.raises(DomainError):
        evaluate(parse_formula("sm(zoe)"), FRIENDS)


def test_evaluate_rejects_arity_mismatch_with_structure():
    with pytest.raises(VocabularyError):
        evaluate(parse_formula("exists X, Y: sm(X,Y)"), FRIENDS)


def test_holds_accepts_environment_for_free_variables():
    atoms = FRIENDS.atoms
    domain = FRIENDS.constants
    body = parse_formula("fr(X, Y)")
    assert holds(body, atoms, domain, env={"X": "alice", "Y": "bob"})
    assert not holds(body, atoms, domain, env={"X": "alice", "Y": "eve"})


def test_unsatisfied_rules_filters():
    rules = [parse_formula("exists X: sm(X)"), parse_formula("forall X: sm(X)")]
    bad = unsatisfied_rules(rules, FRIENDS)
    assert bad == [rules[1]]


# ---------------------------------------------------------------------------
# properness

@pytest.mark.parametrize(
    "text, want",
    [
        ("forall X, Y: X = Y | e(X,Y)", True),
        ("forall X: r(X)", True),
        ("forall X, Y: r(X) | r(Y)", False),
        ("forall X, Y: X != Y | e(X,Y)", False),
        ("forall X, Y, Z: X = Y | Y = Z | X = Z | e(X,Y)", True),
        ("forall X, Y, Z: X = Y | e(X,Z)", False),
    ],
)
def test_is_proper(text, want):
    assert is_proper(parse_formula(text)) is want


# ---------------------------------------------------------------------------
# randomized cross-checks

_VOCAB_ATOMS = st.one_of(
    st.builds(
        PredAtom,
        st.just(Predicate("r", 1)),
        st.tuples(st.sampled_from([Var("X"), Var("Y"), Const("a"), Const("b")])),
    ),
    st.builds(
        PredAtom,
        st.just(Predicate("e", 2)),
        st.tuples(
            st.sampled_from([Var("X"), Var("Y"), Const("a"), Const("b")]),
            st.sampled_from([Var("X"), Var("Y"), Const("a"), Const("b")]),
        ),
    ),
    st.builds(
        Eq,
        st.sampled_from([Var("X"), Var("Y"), Const("a"), Const("b")]),
        st.sampled_from([Var("X"), Var("Y"), Const("a"), Const("b")]),
    ),
)

_MATRIX = st.recursive(
    _VOCAB_ATOMS,
    lambda sub: st.one_of(
        st.builds(Not, sub),
        st.builds(lambda a, b: And((a, b)), sub, sub),
        st.builds(lambda a, b: Or((a, b)), sub, sub),
    ),
    max_leaves=8,
)


@st.composite
def closed_formulas(draw):
    matrix = draw(_MATRIX)
    opened = sorted(free_vars(matrix), key=lambda v: v.name)
    if not opened:
        return matrix
    quant = draw(st.sampled_from([Forall, Exists]))
    return quant(tuple(opened), matrix)


@st.composite
def structures(draw):
    domain = ("a", "b", "c")[: draw(st.integers(min_value=2, max_value=3))]
    atoms = []
    for c in domain:
        if draw(st.booleans()):
            atoms.append(("r", (c,)))
    for c1 in domain:
        for c2 in domain:
            if draw(st.booleans()):
                atoms.append(("e", (c1, c2)))
    return GlobalExample(domain, atoms)


@settings(max_examples=300, deadline=None)
@given(closed_formulas(), structures())
def test_evaluate_matches_ground_expansion_oracle(f, example):
    true_atoms = {(a.pred, a.args) for a in example.atoms}
    want = oracle(f, true_atoms, example.constants, {})
    assert evaluate(f, example) is want


@settings(max_examples=300, deadline=None)
@given(closed_formulas())
def test_printed_form_reparses_to_the_same_tree(f):
    printed = format_formula(f)
    assert format_formula(parse_formula(printed)) == printed
