"""Relational structures: global examples, fragments, local examples.

A global example is a finite relational structure (A, C): a set of ground
atoms A over an ordered constant set C.  A fragment keeps the atoms whose
constants all lie inside a chosen subset.  Local examples are fragments
re-labelled onto the canonical constants 1..k; their isomorphism classes are
represented by a lexicographically minimal canonical form.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import CapExceededError, DomainError, FactsSyntaxError, VocabularyError

ISO_WIDTH_CAP = 8

_NAME_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_ATOM_RE = re.compile(r"([a-z][A-Za-z0-9_]*)\(([^()]*)\)\s*\.?\Z")


@dataclass(frozen=True)
class GroundAtom:
    pred: str
    args: tuple[str, ...]

    def __str__(self):
        return f"{self.pred}({','.join(self.args)})"


@dataclass(frozen=True)
class GlobalExample:
    """Ground atoms over an ordered constant set, plus an optional declared vocabulary.

    The declared vocabulary lets atom-free predicates exist (an empty structure
    over a unary predicate is a legal model); it is merged with the vocabulary
    inferred from the atoms.
    """

    constants: tuple[str, ...]
    atoms: frozenset[GroundAtom] = frozenset()
    # excluded from equality and hashing: the declared vocabulary widens the
    # signature but never changes which atoms hold
    vocab: Mapping[str, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "constants", tuple(self.constants))
        object.__setattr__(
            self,
            "atoms",
            frozenset(
                a if isinstance(a, GroundAtom) else GroundAtom(a[0], tuple(a[1]))
                for a in self.atoms
            ),
        )
        if self.vocab is not None:
            object.__setattr__(self, "vocab", dict(self.vocab))
        if len(set(self.constants)) != len(self.constants):
            raise DomainError("duplicate constants")
        cset = set(self.constants)
        arity: dict[str, int] = dict(self.vocab or {})
        for atom in sorted(self.atoms, key=lambda a: (a.pred, a.args)):
            for arg in atom.args:
                if arg not in cset:
                    raise DomainError(f"atom {atom} uses constant {arg!r} outside the constant set")
            seen = arity.setdefault(atom.pred, len(atom.args))
            if seen != len(atom.args):
                raise VocabularyError(
                    f"predicate {atom.pred!r} used with arities {seen} and {len(atom.args)}"
                )

    def vocabulary(self) -> dict[str, int]:
        vocab = dict(self.vocab or {})
        for atom in self.atoms:
            vocab[atom.pred] = len(atom.args)
        return vocab

    def index(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.constants)}

    def __str__(self):
        atoms = ", ".join(str(a) for a in sorted(self.atoms, key=lambda a: (a.pred, a.args)))
        return f"({{{atoms}}}, {{{', '.join(self.constants)}}})"


def fragment(example: GlobalExample, subset: Iterable[str]) -> GlobalExample:
    """The substructure induced by ``subset``: atoms whose constants all lie in it.

    The returned constant set is ``subset`` in the order of ``example``.
    """
    chosen = set(subset)
    unknown = chosen - set(example.constants)
    if unknown:
        raise DomainError(f"unknown constant(s): {', '.join(sorted(unknown))}")
    kept = tuple(c for c in example.constants if c in chosen)
    atoms = frozenset(a for a in example.atoms if all(arg in chosen for arg in a.args))
    # the substructure keeps the full signature, including predicates whose
    # atoms were all dropped
    return GlobalExample(kept, atoms, example.vocabulary())


# ---------------------------------------------------------------------------
# local examples and canonical forms

LocalAtom = tuple[str, tuple[int, ...]]


@dataclass(frozen=True)
class LocalExample:
    """A width-k structure over the canonical constants 1..k."""

    width: int
    atoms: frozenset[LocalAtom] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "atoms", frozenset(self.atoms))
        for pred, args in self.atoms:
            if not all(1 <= a <= self.width for a in args):
                raise DomainError(f"local atom {pred}{args} outside width {self.width}")

    def __str__(self):
        atoms = ", ".join(
            f"{p}({','.join(map(str, args))})" for p, args in sorted(self.atoms)
        )
        return f"({{{atoms}}}, width {self.width})"


@dataclass(frozen=True)
class CanonicalForm:
    """Lexicographically minimal relabelling of a local example's atom set."""

    width: int
    atoms: tuple[LocalAtom, ...]
    automorphisms: int

    @property
    def class_size(self) -> int:
        # distinct labelled members of the isomorphism class
        return math.factorial(self.width) // self.automorphisms


def _check_width(width: int):
    if width > ISO_WIDTH_CAP:
        raise CapExceededError(
            f"isomorphism search over width {width} exceeds cap {ISO_WIDTH_CAP}",
            width,
            ISO_WIDTH_CAP,
        )


def canonicalize(local: LocalExample) -> CanonicalForm:
    """Canonical form and automorphism count of ``local``.

    Minimizes the sorted atom tuple over all k! relabellings; the number of
    relabellings attaining the minimum equals the automorphism group size.
    """
    _check_width(local.width)
    order = range(1, local.width + 1)
    best: tuple[LocalAtom, ...] | None = None
    hits = 0
    for perm in itertools.permutations(order):
        relabel = dict(zip(order, perm))
        image = tuple(
            sorted((p, tuple(relabel[a] for a in args)) for p, args in local.atoms)
        )
        if best is None or image < best:
            best, hits = image, 1
        elif image == best:
            hits += 1
    return CanonicalForm(local.width, best, hits)


def as_local(example: GlobalExample) -> LocalExample:
    """Relabel a global example onto 1..k following its constant order."""
    _check_width(len(example.constants))
    relabel = {c: i for i, c in enumerate(example.constants, start=1)}
    atoms = frozenset((a.pred, tuple(relabel[arg] for arg in a.args)) for a in example.atoms)
    return LocalExample(len(example.constants), atoms)


def local_class(example: GlobalExample, subset: Iterable[str]) -> frozenset[LocalExample]:
    """All local examples isomorphic to the fragment over ``subset``.

    Every bijection subset -> {1..k} contributes one labelling; the class size
    is k! divided by the fragment's automorphism count.
    """
    frag = fragment(example, subset)
    k = len(frag.constants)
    _check_width(k)
    out = set()
    for perm in itertools.permutations(range(1, k + 1)):
        relabel = dict(zip(frag.constants, perm))
        atoms = frozenset(
            (a.pred, tuple(relabel[arg] for arg in a.args)) for a in frag.atoms
        )
        out.add(LocalExample(k, atoms))
    return frozenset(out)


def is_isomorphic(a: GlobalExample, b: GlobalExample, cap: int = ISO_WIDTH_CAP) -> bool:
    """Exhaustive isomorphism test between two global examples (width-capped)."""
    if len(a.constants) != len(b.constants):
        return False
    if len(a.constants) > cap:
        raise CapExceededError(
            f"isomorphism search over width {len(a.constants)} exceeds cap {cap}",
            len(a.constants),
            cap,
        )
    if len(a.atoms) != len(b.atoms):
        return False
    for perm in itertools.permutations(b.constants):
        relabel = dict(zip(a.constants, perm))
        image = {GroundAtom(t.pred, tuple(relabel[arg] for arg in t.args)) for t in a.atoms}
        if image == b.atoms:
            return True
    return False


# ---------------------------------------------------------------------------
# facts files

def parse_facts(text: str, source: str = "<facts>") -> GlobalExample:
    """Parse a facts file: one ground atom per line, ``@constants`` directive,
    ``#`` comments, optional trailing periods."""
    constants: list[str] = []
    seen = set()

    def intern(name: str, lineno: int):
        if not _NAME_RE.match(name):
            raise FactsSyntaxError(f"bad constant name {name!r}", lineno, source)
        if name not in seen:
            seen.add(name)
            constants.append(name)

    atoms = []
    arity: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("@constants"):
            rest = line[len("@constants") :].strip().rstrip(".")
            for name in filter(None, (n.strip() for n in rest.split(","))):
                intern(name, lineno)
            continue
        m = _ATOM_RE.match(line)
        if m is None:
            raise FactsSyntaxError(f"cannot parse {line!r} as a ground atom", lineno, source)
        pred, arg_text = m.group(1), m.group(2)
        args = tuple(a.strip() for a in arg_text.split(","))
        if not args or any(not a for a in args):
            raise FactsSyntaxError(f"bad argument list in {line!r}", lineno, source)
        first = arity.setdefault(pred, len(args))
        if first != len(args):
            raise FactsSyntaxError(
                f"predicate {pred!r} used with arity {len(args)}, earlier {first}",
                lineno,
                source,
            )
        for arg in args:
            intern(arg, lineno)
        atoms.append(GroundAtom(pred, args))
    return GlobalExample(tuple(constants), frozenset(atoms))


def format_facts(example: GlobalExample) -> str:
    """Render to the facts format; the directive pins the constant order."""
    lines = [f"@constants {', '.join(example.constants)}"]
    lines.extend(str(a) for a in sorted(example.atoms, key=lambda a: (a.pred, a.args)))
    return "\n".join(lines) + "\n"


def read_facts(path) -> GlobalExample:
    with open(path, encoding="utf-8") as fh:
        return parse_facts(fh.read(), source=str(path))


def write_facts(path, example: GlobalExample):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_facts(example))
