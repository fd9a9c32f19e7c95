"""Estimating statistics of a large structure from a sampled substructure.

The workflow mirrors the intended use: a ground-truth structure is too big to
observe, a uniformly sampled size-m fragment is available, and the statistic
at a target domain size is estimated from the fragment's periodic expansion.
`run_error_experiment` measures the absolute estimation error over repeated
draws and compares it against the closed-form expectation bound

    1 - ((m-k+1)/m)^(k-1)  +  sqrt((1 + 2 log 2) / (4 floor(m/k)))

whose first term is the expansion distortion and whose second is the sampling
term; floor(m/k) plays the role of an effective sample size.

`disjoint_sample_estimator` is the index-set sampling process used to prove
the sampling term: index sets drawn from an abstract universe, their union
mapped injectively into the observed constants, one indicator per set.  It
matches the direct subset estimator in distribution, which the test suite
checks exhaustively on tiny structures.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .data import GlobalExample, GroundAtom, fragment
from .errors import DomainError
from .expansion import expand
from .logic import Formula, evaluate, holds
from .stats import ModelA, ModelKind, formula_width, statistic, universal_parts


def sample_subexample(example: GlobalExample, m: int, rng: random.Random) -> GlobalExample:
    """Fragment on a uniformly chosen size-m constant subset."""
    n = len(example.constants)
    if not 0 <= m <= n:
        raise DomainError(f"sample size {m} outside 0..{n}")
    return fragment(example, rng.sample(example.constants, m))


def adjusted_estimate(
    example: GlobalExample, f: Formula, kind: ModelKind, target_size: int
) -> Fraction:
    """Statistic of the fragment's expansion, leveled to reach ``target_size``.

    The expansion level is ceil(target_size / |constants|), so the expanded
    domain is at least as large as the target; level 1 (no growth) when the
    fragment already reaches it.
    """
    n = len(example.constants)
    if n == 0:
        raise DomainError("cannot estimate from an empty structure")
    if target_size < 1:
        raise DomainError(f"target size {target_size} must be positive")
    level = max(1, math.ceil(target_size / n))
    return statistic(f, expand(example, level), kind)


def effective_sample_size(m: int, k: int) -> int:
    if k < 1:
        raise DomainError(f"width {k} must be positive")
    if m < 0:
        raise DomainError(f"sample size {m} must be non-negative")
    return m // k


def expected_error_bound(m: int, k: int, interior: bool = False) -> float:
    """Closed-form bound on the expected absolute estimation error.

    ``interior`` selects the sharper variant that applies when the statistic
    is read off the fragment itself with no expansion step (the distortion
    term drops).
    """
    if not 1 <= k <= m:
        raise DomainError(f"need 1 <= width <= sample size, got k={k}, m={m}")
    sampling = math.sqrt((1.0 + 2.0 * math.log(2.0)) / (4.0 * (m // k)))
    if interior:
        return sampling
    distortion = 1.0 - ((m - k + 1) / m) ** (k - 1)
    return distortion + sampling


def disjoint_sample_estimator(
    example: GlobalExample,
    f: Formula,
    kind: ModelKind,
    rng: random.Random,
    universe_size: int | None = None,
) -> Fraction:
    """One draw of the index-set estimator.

    floor(n/k) index sets of size k are sampled from {1..universe_size}
    (defaulting to n = |constants|, the case where the observed structure is
    the whole universe), their union is mapped into the constants by a
    uniform injective function, and the returned value is the mean of one
    satisfaction indicator per set: fragment satisfaction for subset
    statistics, substitution satisfaction for the injective-grounding kind,
    whose index sets are ordered.
    """
    constants = example.constants
    n = len(constants)
    k = formula_width(kind, f)
    if not 1 <= k <= n:
        raise DomainError(f"width {k} outside 1..{n}")
    universe = n if universe_size is None else universe_size
    if universe < n:
        raise DomainError(f"universe size {universe} below |constants| = {n}")
    q = n // k
    ordered = not isinstance(kind, ModelA)
    index_sets = [tuple(rng.sample(range(universe), k)) for _ in range(q)]
    union = sorted(set(itertools.chain.from_iterable(index_sets)))
    image = rng.sample(constants, len(union))
    g = dict(zip(union, image))
    hits = 0
    if ordered:
        vs, matrix = universal_parts(f)
        for idx in index_sets:
            env = {v.name: g[i] for v, i in zip(vs, idx)}
            hits += holds(matrix, example.atoms, constants, env)
    else:
        for idx in index_sets:
            hits += evaluate(f, fragment(example, (g[i] for i in idx)))
    return Fraction(hits, q)


def random_structure(
    n: int,
    vocabulary: Mapping[str, int],
    density: float,
    rng: random.Random,
) -> GlobalExample:
    """Seeded generator of ground-truth structures: constants c1..cn, each
    possible atom included independently with probability ``density``."""
    if n < 1:
        raise DomainError(f"domain size {n} must be positive")
    if not 0.0 <= density <= 1.0:
        raise DomainError(f"density {density} outside [0, 1]")
    constants = tuple(f"c{i}" for i in range(1, n + 1))
    atoms = []
    for pred in sorted(vocabulary):
        for args in itertools.product(constants, repeat=vocabulary[pred]):
            if rng.random() < density:
                atoms.append(GroundAtom(pred, args))
    return GlobalExample(constants, atoms, dict(vocabulary))


@dataclass(frozen=True)
class ExperimentConfig:
    """One estimation experiment: repeatedly sample a size-m fragment of the
    ground truth and score the expansion-adjusted estimate at the target
    domain size against the exact ground-truth statistic."""

    ground_truth: GlobalExample
    sample_size: int
    target_size: int
    formulas: tuple[Formula, ...]
    kind: ModelKind
    trials: int = 100
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "formulas", tuple(self.formulas))
        if not self.formulas:
            raise DomainError("no formulas to estimate")
        if self.trials < 1:
            raise DomainError(f"trials {self.trials} must be >= 1")
        total = len(self.ground_truth.constants)
        if not 1 <= self.sample_size <= total:
            raise DomainError(
                f"sample size {self.sample_size} outside 1..{total}"
            )
        if self.target_size < 1:
            raise DomainError(f"target size {self.target_size} must be positive")
        for f in self.formulas:
            k = formula_width(self.kind, f)
            if k > self.sample_size:
                raise DomainError(
                    f"width {k} exceeds the sample size {self.sample_size}"
                )


@dataclass(frozen=True)
class ErrorReport:
    """Per-formula outcome of an error experiment."""

    formula: Formula
    width: int
    trial_errors: tuple[Fraction, ...]
    mean_error: Fraction
    bound: float
    effective_sample_size: int
    passed: bool


def _thread_count() -> int:
    raw = os.environ.get("RELMARG_THREADS", "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"RELMARG_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise DomainError(f"RELMARG_THREADS must be >= 1, got {value}")
    return value


def _map_trials(fn: Callable[[int], tuple], trials: int) -> list[tuple]:
    """Run trials, in a thread pool when RELMARG_THREADS asks for one; the
    result order is by trial index either way."""
    workers = _thread_count()
    if workers == 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials)))


def run_error_experiment(cfg: ExperimentConfig) -> tuple[ErrorReport, ...]:
    """Measure |exact ground-truth statistic - adjusted estimate| over
    ``cfg.trials`` independent draws, one report per formula.

    Every trial derives its own RNG from (seed, trial index), so reports are
    reproducible regardless of thread scheduling; errors are exact rationals
    and the reduction is order-independent.
    """
    exact = [statistic(f, cfg.ground_truth, cfg.kind) for f in cfg.formulas]

    def one_trial(t: int) -> tuple[Fraction, ...]:
        rng = random.Random(f"{cfg.seed}:{t}")
        sub = sample_subexample(cfg.ground_truth, cfg.sample_size, rng)
        return tuple(
            abs(exact[i] - adjusted_estimate(sub, f, cfg.kind, cfg.target_size))
            for i, f in enumerate(cfg.formulas)
        )

    rows = _map_trials(one_trial, cfg.trials)
    reports = []
    for i, f in enumerate(cfg.formulas):
        errors = tuple(row[i] for row in rows)
        mean = sum(errors, Fraction(0)) / len(errors)
        k = formula_width(cfg.kind, f)
        bound = expected_error_bound(cfg.sample_size, k)
        reports.append(
            ErrorReport(
                f,
                k,
                errors,
                mean,
                bound,
                effective_sample_size(cfg.sample_size, k),
                float(mean) <= bound,
            )
        )
    return tuple(reports)
