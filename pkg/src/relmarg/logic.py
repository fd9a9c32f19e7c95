"""Function-free first-order formulas: syntax tree, parser, printer, evaluation.

Grammar (precedence from loose to tight: quantifier prefix, ->, |, &, ~)::

    formula := quant* expr
    quant   := ("forall" | "exists") var ("," var)* ":"
    expr    := impl
    impl    := disj ("->" disj)?
    disj    := conj ("|" conj)*
    conj    := unary ("&" unary)*
    unary   := "~" unary | "(" formula ")" | atom
    atom    := pred "(" term ("," term)* ")" | term "=" term | term "!=" term

Identifiers starting with an upper-case letter are variables, lower-case
identifiers are constants or predicate names.  ``a -> b`` desugars to
``~a | b`` and ``a != b`` to ``~(a = b)`` at parse time, so the tree has no
implication or inequality nodes.  Equality is decided by name identity
(unique-names assumption).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .data import GroundAtom
from .errors import (
    CapExceededError,
    DomainError,
    FormulaSyntaxError,
    VocabularyError,
)

PROPERNESS_ATOM_CAP = 20


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


Term = Var | Const


@dataclass(frozen=True)
class Predicate:
    name: str
    arity: int


@dataclass(frozen=True)
class PredAtom:
    pred: Predicate
    args: tuple[Term, ...]

    def __post_init__(self):
        if len(self.args) != self.pred.arity:
            raise DomainError(
                f"atom {self.pred.name} expects {self.pred.arity} arguments, got {len(self.args)}"
            )


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Forall:
    vars: tuple[Var, ...]
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    vars: tuple[Var, ...]
    body: "Formula"


Formula = PredAtom | Eq | Not | And | Or | Forall | Exists

_KEYWORDS = ("forall", "exists")


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<arrow>->)"
    r"|(?P<neq>!=)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<sym>[(),:~&|=])"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # ident | arrow | neq | sym | eof
    value: str
    line: int
    col: int


def _tokenize(text: str, source: str) -> list[_Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source
            )
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            tokens.append(_Token(kind, value, line, pos - line_start + 1))
        line += value.count("\n")
        if "\n" in value:
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], source: str, vocab: Mapping[str, int] | None):
        self.tokens = tokens
        self.pos = 0
        self.source = source
        self.vocab = vocab
        self.seen_arity: dict[str, int] = {}

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise FormulaSyntaxError(message, tok.line, tok.col, self.source)

    def expect(self, value: str) -> _Token:
        tok = self.peek()
        if tok.value != value:
            shown = tok.value or "end of input"
            self.fail(f"expected {value!r}, found {shown!r}")
        return self.next()

    def parse(self) -> Formula:
        f = self.formula()
        if self.peek().kind != "eof":
            self.fail(f"unexpected trailing input {self.peek().value!r}")
        return f

    def formula(self) -> Formula:
        tok = self.peek()
        if tok.kind == "ident" and tok.value in _KEYWORDS:
            self.next()
            vs = [self.variable()]
            while self.peek().value == ",":
                self.next()
                vs.append(self.variable())
            self.expect(":")
            body = self.formula()
            node = Forall if tok.value == "forall" else Exists
            return node(tuple(vs), body)
        return self.impl()

    def variable(self) -> Var:
        tok = self.peek()
        if tok.kind != "ident" or not tok.value[0].isupper():
            self.fail("expected a variable (upper-case identifier)")
        self.next()
        return Var(tok.value)

    def impl(self) -> Formula:
        left = self.disj()
        if self.peek().kind == "arrow":
            self.next()
            right = self.disj()
            return Or((Not(left), right))
        return left

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.peek().value == "|":
            self.next()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self) -> Formula:
        parts = [self.unary()]
        while self.peek().value == "&":
            self.next()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.value == "~":
            self.next()
            return Not(self.unary())
        if tok.value == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind != "ident":
            shown = tok.value or "end of input"
            self.fail(f"expected an atom, found {shown!r}")
        if tok.value in _KEYWORDS:
            self.fail(f"{tok.value!r} is a reserved keyword")
        self.next()
        if tok.value[0].islower() and self.peek().value == "(":
            return self.pred_atom(tok)
        left = Var(tok.value) if tok.value[0].isupper() else Const(tok.value)
        op = self.peek()
        if op.value == "=":
            self.next()
            return Eq(left, self.term())
        if op.kind == "neq":
            self.next()
            return Not(Eq(left, self.term()))
        self.fail("expected '(' (predicate atom) or '='/'!=' (equality atom)", op)

    def pred_atom(self, name_tok: _Token) -> PredAtom:
        self.expect("(")
        args = [self.term()]
        while self.peek().value == ",":
            self.next()
            args.append(self.term())
        self.expect(")")
        arity = len(args)
        name = name_tok.value
        seen = self.seen_arity.setdefault(name, arity)
        if seen != arity:
            self.fail(f"predicate {name!r} used with arity {arity} and {seen}", name_tok)
        if self.vocab is not None:
            declared = self.vocab.get(name)
            if declared is None:
                self.fail(f"predicate {name!r} is not in the declared vocabulary", name_tok)
            if declared != arity:
                self.fail(
                    f"predicate {name!r} has declared arity {declared}, used with {arity}",
                    name_tok,
                )
        return PredAtom(Predicate(name, arity), tuple(args))

    def term(self) -> Term:
        tok = self.peek()
        if tok.kind != "ident" or tok.value in _KEYWORDS:
            shown = tok.value or "end of input"
            self.fail(f"expected a term, found {shown!r}")
        self.next()
        return Var(tok.value) if tok.value[0].isupper() else Const(tok.value)


def parse_formula(
    text: str, vocab: Mapping[str, int] | None = None, source: str = "<formula>"
) -> Formula:
    """Parse ``text`` into a formula tree.

    When ``vocab`` (predicate name -> arity) is given, predicate uses are
    checked against it.  Errors carry line and column numbers.
    """
    f = _Parser(_tokenize(text, source), source, vocab).parse()
    _check_bindings(f, frozenset(), source)
    return f


def _check_bindings(f: Formula, bound: frozenset[str], source: str):
    # a variable may be bound at most once on any root-to-leaf path
    if isinstance(f, (Forall, Exists)):
        names = [v.name for v in f.vars]
        for n in names:
            if n in bound or names.count(n) > 1:
                raise FormulaSyntaxError(f"variable {n} is bound twice", 1, 1, source)
        _check_bindings(f.body, bound | frozenset(names), source)
    elif isinstance(f, Not):
        _check_bindings(f.sub, bound, source)
    elif isinstance(f, (And, Or)):
        for p in f.parts:
            _check_bindings(p, bound, source)


# ---------------------------------------------------------------------------
# printing

def _prec(f: Formula) -> int:
    if isinstance(f, (PredAtom, Eq)):
        return 5
    if isinstance(f, Not):
        return 5 if isinstance(f.sub, Eq) else 4
    if isinstance(f, And):
        return 3
    if isinstance(f, Or):
        return 2
    return 1  # quantifiers


def _fmt(f: Formula, minp: int) -> str:
    if isinstance(f, PredAtom):
        s = f"{f.pred.name}({','.join(t.name for t in f.args)})"
    elif isinstance(f, Eq):
        s = f"{f.left.name} = {f.right.name}"
    elif isinstance(f, Not) and isinstance(f.sub, Eq):
        s = f"{f.sub.left.name} != {f.sub.right.name}"
    elif isinstance(f, Not):
        s = "~" + _fmt(f.sub, 4)
    elif isinstance(f, And):
        s = " & ".join(_fmt(p, 4) for p in f.parts)
    elif isinstance(f, Or):
        s = " | ".join(_fmt(p, 3) for p in f.parts)
    elif isinstance(f, (Forall, Exists)):
        word = "forall" if isinstance(f, Forall) else "exists"
        s = f"{word} {', '.join(v.name for v in f.vars)}: {_fmt(f.body, 1)}"
    else:
        raise TypeError(f"not a formula: {f!r}")
    return f"({s})" if _prec(f) < minp else s


def format_formula(f: Formula) -> str:
    """Render ``f`` so that ``parse_formula(format_formula(f))`` returns ``f``."""
    return _fmt(f, 1)


for _node in (PredAtom, Eq, Not, And, Or, Forall, Exists):
    _node.__str__ = format_formula


# ---------------------------------------------------------------------------
# structural queries

def _walk(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from _walk(f.sub)
    elif isinstance(f, (And, Or)):
        for p in f.parts:
            yield from _walk(p)
    elif isinstance(f, (Forall, Exists)):
        yield from _walk(f.body)


def vars_of(f: Formula) -> frozenset[Var]:
    """All variables occurring in ``f``, bound or free."""
    out = set()
    for g in _walk(f):
        if isinstance(g, PredAtom):
            out.update(t for t in g.args if isinstance(t, Var))
        elif isinstance(g, Eq):
            out.update(t for t in (g.left, g.right) if isinstance(t, Var))
        elif isinstance(g, (Forall, Exists)):
            out.update(g.vars)
    return frozenset(out)


def bound_vars(f: Formula) -> frozenset[Var]:
    out = set()
    for g in _walk(f):
        if isinstance(g, (Forall, Exists)):
            out.update(g.vars)
    return frozenset(out)


def free_vars(f: Formula) -> frozenset[Var]:
    if isinstance(f, PredAtom):
        return frozenset(t for t in f.args if isinstance(t, Var))
    if isinstance(f, Eq):
        return frozenset(t for t in (f.left, f.right) if isinstance(t, Var))
    if isinstance(f, Not):
        return free_vars(f.sub)
    if isinstance(f, (And, Or)):
        return frozenset().union(*(free_vars(p) for p in f.parts))
    return free_vars(f.body) - frozenset(f.vars)


def constants_of(f: Formula) -> frozenset[str]:
    out = set()
    for g in _walk(f):
        if isinstance(g, PredAtom):
            out.update(t.name for t in g.args if isinstance(t, Const))
        elif isinstance(g, Eq):
            out.update(t.name for t in (g.left, g.right) if isinstance(t, Const))
    return frozenset(out)


def vocabulary_of(f: Formula) -> dict[str, int]:
    """Predicate name -> arity used in ``f``; raises on inconsistent use."""
    vocab: dict[str, int] = {}
    for g in _walk(f):
        if isinstance(g, PredAtom):
            seen = vocab.setdefault(g.pred.name, g.pred.arity)
            if seen != g.pred.arity:
                raise VocabularyError(
                    f"predicate {g.pred.name!r} used with arities {seen} and {g.pred.arity}"
                )
    return vocab


def merge_vocabulary(*vocabs: Mapping[str, int]) -> dict[str, int]:
    merged: dict[str, int] = {}
    for vocab in vocabs:
        for name, arity in vocab.items():
            seen = merged.setdefault(name, arity)
            if seen != arity:
                raise VocabularyError(
                    f"predicate {name!r} declared with arities {seen} and {arity}"
                )
    return merged


def quantifier_free(f: Formula) -> bool:
    return not any(isinstance(g, (Forall, Exists)) for g in _walk(f))


def strip_foralls(f: Formula) -> tuple[tuple[Var, ...], Formula]:
    """Split a leading universal prefix from its matrix."""
    vs: list[Var] = []
    while isinstance(f, Forall):
        vs.extend(f.vars)
        f = f.body
    return tuple(vs), f


# ---------------------------------------------------------------------------
# substitution

def is_injective(theta: Mapping[Var, Const]) -> bool:
    values = list(theta.values())
    return len(set(values)) == len(values)


def apply_substitution(f: Formula, theta: Mapping[Var, Const]) -> Formula:
    """Replace covered variable occurrences by their constants.

    Quantified variables covered by ``theta`` are removed from their prefix;
    the quantifier survives over the remaining ones (and is dropped when none
    remain).
    """
    for target in theta.values():
        if not isinstance(target, Const):
            raise DomainError("substitution targets must be constants")

    def sub_term(t: Term) -> Term:
        return theta.get(t, t) if isinstance(t, Var) else t

    def go(g: Formula) -> Formula:
        if isinstance(g, PredAtom):
            return PredAtom(g.pred, tuple(sub_term(t) for t in g.args))
        if isinstance(g, Eq):
            return Eq(sub_term(g.left), sub_term(g.right))
        if isinstance(g, Not):
            return Not(go(g.sub))
        if isinstance(g, And):
            return And(tuple(go(p) for p in g.parts))
        if isinstance(g, Or):
            return Or(tuple(go(p) for p in g.parts))
        remaining = tuple(v for v in g.vars if v not in theta)
        body = go(g.body)
        if not remaining:
            return body
        return type(g)(remaining, body)

    return go(f)


# ---------------------------------------------------------------------------
# evaluation

def holds(
    f: Formula,
    atoms: frozenset[GroundAtom],
    domain: Iterable[str],
    env: dict[str, str] | None = None,
) -> bool:
    """Raw Tarskian evaluation engine, no validation.

    Quantifiers range over ``domain``; a predicate atom is true iff the
    corresponding ground atom is in ``atoms``.  Free variables must be covered
    by ``env`` (variable name -> constant name).
    """
    dom = tuple(domain)
    env = {} if env is None else env

    def ev(g: Formula) -> bool:
        if isinstance(g, PredAtom):
            names = tuple(env[t.name] if isinstance(t, Var) else t.name for t in g.args)
            return GroundAtom(g.pred.name, names) in atoms
        if isinstance(g, Eq):
            l = env[g.left.name] if isinstance(g.left, Var) else g.left.name
            r = env[g.right.name] if isinstance(g.right, Var) else g.right.name
            return l == r
        if isinstance(g, Not):
            return not ev(g.sub)
        if isinstance(g, And):
            return all(ev(p) for p in g.parts)
        if isinstance(g, Or):
            return any(ev(p) for p in g.parts)
        names = [v.name for v in g.vars]
        want = isinstance(g, Exists)
        for combo in itertools.product(dom, repeat=len(names)):
            for n, c in zip(names, combo):
                env[n] = c
            if ev(g.body) == want:
                for n in names:
                    del env[n]
                return want
        for n in names:
            env.pop(n, None)
        return not want

    return ev(f)


def evaluate(f: Formula, example) -> bool:
    """Whether the closed formula ``f`` holds in ``example`` (a GlobalExample).

    Quantifiers range over ``example.constants``; equality is name identity.
    """
    if free_vars(f):
        names = sorted(v.name for v in free_vars(f))
        raise DomainError(f"formula is not closed (free: {', '.join(names)})")
    unknown = constants_of(f) - set(example.constants)
    if unknown:
        raise DomainError(f"unknown constant(s): {', '.join(sorted(unknown))}")
    merge_vocabulary(vocabulary_of(f), example.vocabulary())
    return holds(f, example.atoms, example.constants)


def unsatisfied_rules(rules: Iterable[Formula], example) -> list[Formula]:
    """The subset of ``rules`` that ``example`` violates."""
    return [r for r in rules if not evaluate(r, example)]


# ---------------------------------------------------------------------------
# properness

def _set_partitions(items: tuple) -> Iterator[list[list]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def _eval_ground(f: Formula, truth: Mapping[PredAtom, bool]) -> bool:
    if isinstance(f, PredAtom):
        return truth[f]
    if isinstance(f, Eq):
        return f.left.name == f.right.name
    if isinstance(f, Not):
        return not _eval_ground(f.sub, truth)
    if isinstance(f, And):
        return all(_eval_ground(p, truth) for p in f.parts)
    return any(_eval_ground(p, truth) for p in f.parts)


def _is_tautology(ground: Formula, max_atoms: int) -> bool:
    atoms = sorted(
        {g for g in _walk(ground) if isinstance(g, PredAtom)},
        key=lambda a: (a.pred.name, tuple(t.name for t in a.args)),
    )
    if len(atoms) > max_atoms:
        raise CapExceededError(
            f"properness truth table needs {len(atoms)} distinct atoms (cap {max_atoms})",
            len(atoms),
            max_atoms,
        )
    for values in itertools.product((False, True), repeat=len(atoms)):
        if not _eval_ground(ground, dict(zip(atoms, values))):
            return False
    return True


def is_proper(f: Formula, max_atoms: int = PROPERNESS_ATOM_CAP) -> bool:
    """Whether every non-injective grounding of ``f``'s matrix is trivially true.

    ``f`` must be a universally quantified formula with a quantifier-free
    matrix.  Non-injective substitutions are grouped by the variable partition
    they induce; for each non-trivial partition the collapsed matrix must be a
    propositional tautology once equality literals are resolved.
    """
    vs, body = strip_foralls(f)
    if not vs or not quantifier_free(body):
        raise DomainError(
            "properness is defined for universally quantified formulas with a quantifier-free matrix"
        )
    if len(vs) < 2:
        return True
    body_consts = sorted(constants_of(body))
    for partition in _set_partitions(vs):
        if all(len(block) == 1 for block in partition):
            continue
        # a block may collapse onto a fresh constant or onto one named in the
        # matrix; distinct blocks always denote distinct constants
        options: list[list[str]] = []
        for i in range(len(partition)):
            options.append([f"__fresh_{i}__"] + body_consts)
        for targets in itertools.product(*options):
            if len(set(targets)) != len(targets):
                continue
            theta = {
                v: Const(target)
                for block, target in zip(partition, targets)
                for v in block
            }
            if not _is_tautology(apply_substitution(body, theta), max_atoms):
                return False
    return True
