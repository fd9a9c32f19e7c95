"""Relational marginal statistics over global examples, exact in rationals.

Two sampling models, and the asymmetry between them is the whole point:

* Model A (fragment statistics): draw a uniformly random size-k subset S of
  the constants and ask whether the closed formula holds classically in the
  fragment over S.  Quantifiers range over all of S, so non-injective
  variable assignments (X and Y naming the same constant) count.
* Model B (substitution statistics): a formula ``forall V1..Vk: body`` is
  scored by the fraction of injective substitutions of V1..Vk into the full
  constant set whose grounded body holds.  Only injective assignments count,
  and only universally quantified formulas are admitted.

All statistics are computed by exhaustive enumeration and returned as
``fractions.Fraction``; convert at the boundary if floats are wanted.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .data import CanonicalForm, GlobalExample, as_local, canonicalize, fragment
from .errors import DomainError, FormulaSyntaxError
from .logic import (
    Formula,
    Var,
    constants_of,
    format_formula,
    free_vars,
    holds,
    merge_vocabulary,
    parse_formula,
    quantifier_free,
    strip_foralls,
    vars_of,
    vocabulary_of,
)


@dataclass(frozen=True)
class ModelA:
    """Fragment statistics at a fixed subset width."""

    width: int

    def __post_init__(self):
        if self.width < 1:
            raise DomainError("Model A width must be at least 1")


@dataclass(frozen=True)
class ModelB:
    """Injective-substitution statistics; width is per formula (its variable count)."""


MODEL_B = ModelB()
ModelKind = ModelA | ModelB


def formula_width(kind: ModelKind, f: Formula) -> int:
    """Subset width used by Model A, variable count used by Model B."""
    if isinstance(kind, ModelA):
        return kind.width
    return len(vars_of(f))


def _validate_formula(f: Formula, example: GlobalExample):
    if free_vars(f):
        raise DomainError(f"formula is not closed: {format_formula(f)}")
    if constants_of(f):
        raise DomainError(f"formula must be constant-free: {format_formula(f)}")
    merge_vocabulary(vocabulary_of(f), example.vocabulary())


def universal_parts(f: Formula) -> tuple[tuple[Var, ...], Formula]:
    """Prefix variables and matrix of a universally quantified formula.

    Raises unless ``f`` is a chain of universal quantifiers over every
    variable, with a quantifier-free matrix; Model B statistics are not
    defined for anything else.
    """
    vs, matrix = strip_foralls(f)
    if not vs or not quantifier_free(matrix) or vars_of(matrix) - set(vs):
        raise DomainError(
            "Model B statistics require a universally quantified formula "
            f"with a quantifier-free matrix, got: {format_formula(f)}"
        )
    return vs, matrix


# ---------------------------------------------------------------------------
# Model A

def count_fragments_satisfying(f: Formula, example: GlobalExample, k: int) -> int:
    """Number of size-k constant subsets whose fragment satisfies ``f``."""
    _validate_formula(f, example)
    if not 1 <= k <= len(example.constants):
        raise DomainError(f"width {k} outside 1..{len(example.constants)}")
    return count_fragments_over(f, example.atoms, example.constants, k)


def count_fragments_over(f, atoms, constants, k) -> int:
    # atoms within a subset agree with the fragment's atoms, so evaluating
    # over the subset as domain avoids building fragment objects
    return sum(1 for s in itertools.combinations(constants, k) if holds(f, atoms, s))


def prob_model_a(f: Formula, example: GlobalExample, k: int) -> Fraction:
    """Probability that the fragment over a uniform size-k subset satisfies ``f``."""
    count = count_fragments_satisfying(f, example, k)
    return Fraction(count, math.comb(len(example.constants), k))


def marginal_distribution_a(example: GlobalExample, k: int) -> dict[CanonicalForm, Fraction]:
    """Distribution over canonical width-k local examples induced by Model A.

    Each size-k subset contributes 1/C(n,k) of mass to the isomorphism class
    of its fragment; within a class the mass splits uniformly over the
    ``class_size`` labellings.
    """
    n = len(example.constants)
    if not 1 <= k <= n:
        raise DomainError(f"width {k} outside 1..{n}")
    dist: dict[CanonicalForm, Fraction] = {}
    share = Fraction(1, math.comb(n, k))
    for subset in itertools.combinations(example.constants, k):
        cf = canonicalize(as_local(fragment(example, subset)))
        dist[cf] = dist.get(cf, Fraction(0)) + share
    return dist


# ---------------------------------------------------------------------------
# Model B

def count_true_groundings(f: Formula, example: GlobalExample) -> int:
    """Number of injective groundings of the matrix that hold in ``example``."""
    _validate_formula(f, example)
    vs, matrix = universal_parts(f)
    if len(vs) > len(example.constants):
        raise DomainError(
            f"formula has {len(vs)} variables but the domain has {len(example.constants)} constants"
        )
    return count_injective_groundings(matrix, vs, example.atoms, example.constants)


def count_injective_groundings(matrix, vs, atoms, constants) -> int:
    names = [v.name for v in vs]
    count = 0
    for combo in itertools.permutations(constants, len(names)):
        if holds(matrix, atoms, (), env=dict(zip(names, combo))):
            count += 1
    return count


def num_injective_substitutions(domain_size: int, var_count: int) -> int:
    return math.perm(domain_size, var_count)


def prob_model_b(f: Formula, example: GlobalExample) -> Fraction:
    """Fraction of injective substitutions under which the matrix holds."""
    vs, _ = universal_parts(f)
    count = count_true_groundings(f, example)
    return Fraction(count, num_injective_substitutions(len(example.constants), len(vs)))


# ---------------------------------------------------------------------------
# shared entry points

def statistic(f: Formula, example: GlobalExample, kind: ModelKind) -> Fraction:
    """The marginal statistic of ``f`` under the chosen model."""
    if isinstance(kind, ModelA):
        return prob_model_a(f, example, kind.width)
    return prob_model_b(f, example)


def monte_carlo_estimate(
    f: Formula,
    example: GlobalExample,
    kind: ModelKind,
    samples: int,
    rng: random.Random,
) -> Fraction:
    """Unbiased sampling estimate of ``statistic(f, example, kind)``."""
    _validate_formula(f, example)
    if samples < 1:
        raise DomainError("sample count must be positive")
    constants = example.constants
    hits = 0
    if isinstance(kind, ModelA):
        if not 1 <= kind.width <= len(constants):
            raise DomainError(f"width {kind.width} outside 1..{len(constants)}")
        for _ in range(samples):
            subset = rng.sample(constants, kind.width)
            if holds(f, example.atoms, subset):
                hits += 1
    else:
        vs, matrix = universal_parts(f)
        names = [v.name for v in vs]
        if len(names) > len(constants):
            raise DomainError("more variables than constants")
        for _ in range(samples):
            combo = rng.sample(constants, len(names))
            if holds(matrix, example.atoms, (), env=dict(zip(names, combo))):
                hits += 1
    return Fraction(hits, samples)


# ---------------------------------------------------------------------------
# constraint sets

@dataclass(frozen=True)
class MarginalConstraint:
    """A formula paired with its target marginal value.

    ``theta`` is an exact ``Fraction`` when given as p/q and a float when
    given as a decimal.
    """

    formula: Formula
    theta: Fraction | float

    def __post_init__(self):
        if free_vars(self.formula):
            raise DomainError(f"constraint formula is not closed: {format_formula(self.formula)}")
        if constants_of(self.formula):
            raise DomainError(
                f"constraint formula must be constant-free: {format_formula(self.formula)}"
            )
        if not 0 <= self.theta <= 1:
            raise DomainError(f"theta {self.theta} outside [0, 1]")


def parse_theta(text: str) -> Fraction:
    """Exact parse of a probability literal: ``p/q``, integer, or decimal
    (decimals convert exactly, so ``0.4`` means 2/5, not the nearest float)."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"bad theta value {text!r}: {exc}") from None


def parse_constraints(text: str, source: str = "<constraints>") -> list[MarginalConstraint]:
    """Parse a constraint file: ``theta ; formula`` lines, or a JSON array of
    objects with ``formula`` and ``theta`` fields."""
    stripped = text.lstrip()
    if stripped.startswith("["):
        try:
            entries = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormulaSyntaxError(f"bad JSON: {exc.msg}", exc.lineno, exc.colno, source)
        out = []
        for entry in entries:
            theta = entry["theta"]
            theta = parse_theta(theta) if isinstance(theta, str) else float(theta)
            out.append(MarginalConstraint(parse_formula(entry["formula"], source=source), theta))
        return out
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ";" not in line:
            raise FormulaSyntaxError("expected 'theta ; formula'", lineno, 1, source)
        theta_text, formula_text = line.split(";", 1)
        f = parse_formula(formula_text.strip(), source=f"{source}:{lineno}")
        out.append(MarginalConstraint(f, parse_theta(theta_text)))
    return out


def format_constraints(constraints: Iterable[MarginalConstraint]) -> str:
    lines = [f"{c.theta} ; {format_formula(c.formula)}" for c in constraints]
    return "\n".join(lines) + "\n"


def read_constraints(path) -> list[MarginalConstraint]:
    with open(path, encoding="utf-8") as fh:
        return parse_constraints(fh.read(), source=str(path))


def parse_formulas(text: str, source: str = "<formulas>") -> list[Formula]:
    """One formula per line, ``#`` comments; used for hard-rule files."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse_formula(line, source=f"{source}:{lineno}"))
    return out


def read_formulas(path) -> list[Formula]:
    with open(path, encoding="utf-8") as fh:
        return parse_formulas(fh.read(), source=str(path))
