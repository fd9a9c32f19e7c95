"""Max-entropy distributions over world spaces, fitted through the dual.

The model family is log-linear in the unnormalized statistic counts

    P(world) = exp(sum_i w_i * s_i(world)) / Z(w),

and fitting marginal targets theta_i means maximizing the concave dual

    g(w) = sum_i w_i * theta_i * N_i - log Z(w)

where N_i is the statistic normalizer (subset count or substitution count).
The gradient is theta_i * N_i - E_w[s_i], so a stationary point matches the
targets exactly.  Weights that run away signal a target on or outside the
marginal polytope; the raised error carries the hull diagnosis.

A deliberately independent primal oracle (mirror ascent on the penalized
entropy objective, plus an exact projection onto the constraint plane) is
kept around to cross-check the dual route.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .data import GlobalExample
from .errors import CapExceededError, DomainError, InfeasibleError, NotRealizableError
from .logic import Formula
from .polytope import realizability_check
from .stats import MarginalConstraint, ModelKind, statistic
from .worlds import WorldSpace, enumerate_worlds

PRIMAL_WORLD_CAP = 1 << 16
WEIGHT_CAP = 50.0


@dataclass
class MaxEntModel:
    kind: ModelKind
    constraints: tuple[MarginalConstraint, ...]
    space: WorldSpace
    weights: np.ndarray
    log_partition: float
    iterations: int
    grad_norm: float
    achieved_marginals: tuple[float, ...]
    realizable: bool = True

    @property
    def formulas(self) -> tuple[Formula, ...]:
        return tuple(c.formula for c in self.constraints)


@dataclass
class ExplicitDistribution:
    """A probability vector aligned with ``space.worlds``; entries may be
    floats or exact Fractions."""

    space: WorldSpace
    probs: tuple

    def __post_init__(self):
        self.probs = tuple(self.probs)
        if len(self.probs) != len(self.space):
            raise DomainError(
                f"{len(self.probs)} probabilities for {len(self.space)} worlds"
            )
        if any(p < 0 for p in self.probs):
            raise DomainError("negative probability")
        total = sum(self.probs)
        exact = all(isinstance(p, (Fraction, int)) for p in self.probs)
        if exact and total != 1:
            raise DomainError(f"probabilities sum to {total}, not 1")
        if not exact and abs(float(total) - 1.0) > 1e-9:
            raise DomainError(f"probabilities sum to {float(total)}, not 1")

    def as_floats(self) -> np.ndarray:
        return np.array([float(p) for p in self.probs], dtype=float)

    def entropy(self) -> float:
        p = self.as_floats()
        nz = p[p > 0]
        return float(-(nz * np.log(nz)).sum())


def _features(constraints, space, kind):
    formulas = tuple(c.formula for c in constraints)
    counts = space.count_matrix(formulas, kind).astype(float)
    norms = space.normalizers(formulas, kind).astype(float)
    theta = np.array([float(c.theta) for c in constraints], dtype=float)
    return counts, norms, theta


def dual_objective(
    w: Sequence[float], constraints: Sequence[MarginalConstraint], space: WorldSpace, kind: ModelKind
) -> tuple[float, np.ndarray]:
    """Value and gradient of the concave dual at ``w``."""
    if len(space) == 0:
        raise DomainError("empty world space (hard rules unsatisfiable)")
    counts, norms, theta = _features(constraints, space, kind)
    w = np.asarray(w, dtype=float)
    scores = counts @ w
    lse = float(logsumexp(scores))
    p = np.exp(scores - lse)
    value = float(w @ (theta * norms)) - lse
    grad = theta * norms - counts.T @ p
    return value, grad


def solve_maxent(
    constraints: Sequence[MarginalConstraint],
    space: WorldSpace,
    kind: ModelKind,
    tol: float = 1e-9,
    max_iter: int = 20000,
    weight_cap: float = WEIGHT_CAP,
) -> MaxEntModel:
    """Fit weights by gradient ascent on the dual, finished with damped Newton.

    The ascent phase uses an Armijo line search whose trial step starts from
    the previously accepted step and is expanded while the test keeps passing,
    so flat exponential tails (targets on or near the polytope boundary)
    overrun the weight cap quickly instead of creeping.  Armijo compares dual
    values, which lose resolution once the gradient is ~1e-8, so the ascent
    only carries the iterate to 1e-6; damped Newton steps (the Hessian is the
    feature covariance), accepted on gradient-norm decrease, close the gap to
    ``tol``.
    """
    constraints = tuple(constraints)
    if not constraints:
        raise DomainError("no constraints to fit")
    if len(space) == 0:
        raise DomainError("empty world space (hard rules unsatisfiable)")
    counts, norms, theta = _features(constraints, space, kind)
    target = theta * norms

    def value_at(w: np.ndarray) -> float:
        return float(w @ target) - float(logsumexp(counts @ w))

    def grad_at(w: np.ndarray) -> np.ndarray:
        scores = counts @ w
        p = np.exp(scores - logsumexp(scores))
        return target - counts.T @ p

    ascent_tol = max(tol, 1e-6)
    w = np.zeros(len(constraints))
    step = 1.0
    iterations = 0
    for _ in range(max_iter):
        grad = grad_at(w)
        if float(np.abs(grad).max()) < ascent_tol:
            break
        iterations += 1
        value = value_at(w)
        gg = float(grad @ grad)
        t = max(step, 1.0)
        # backtrack to an acceptable step, then expand while it keeps helping
        while t > 1e-18 and value_at(w + t * grad) < value + 1e-4 * t * gg:
            t *= 0.5
        if t <= 1e-18:
            break
        while t < 2**40 and 1e-4 * t * gg > 1e-13 * (1.0 + abs(value)):
            t2 = 2.0 * t
            v2 = value_at(w + t2 * grad)
            if v2 < value + 1e-4 * t2 * gg or v2 <= value_at(w + t * grad):
                break
            t = t2
        w = w + t * grad
        step = t
        if float(np.abs(w).max()) > weight_cap:
            _raise_not_realizable(constraints, space, kind, weight_cap)
    grad = grad_at(w)
    grad_norm = float(np.abs(grad).max())
    for _ in range(200):
        if grad_norm < tol:
            break
        iterations += 1
        scores = counts @ w
        p = np.exp(scores - logsumexp(scores))
        mean = counts.T @ p
        cov = (counts * p[:, None]).T @ counts - np.outer(mean, mean)
        cov[np.diag_indices_from(cov)] += 1e-14 * (1.0 + cov.diagonal())
        direction = np.linalg.solve(cov, grad)
        accepted = False
        for _ in range(60):
            trial = grad_at(w + direction)
            if float(np.abs(trial).max()) < grad_norm:
                w = w + direction
                grad, grad_norm = trial, float(np.abs(trial).max())
                accepted = True
                break
            direction = direction / 2.0
        if not accepted:
            break
        if float(np.abs(w).max()) > weight_cap:
            _raise_not_realizable(constraints, space, kind, weight_cap)
    if grad_norm >= tol:
        _raise_not_realizable(constraints, space, kind, weight_cap, stalled=True)
    scores = counts @ w
    lse = float(logsumexp(scores))
    p = np.exp(scores - lse)
    grad = target - counts.T @ p
    achieved = tuple(float(x) for x in (counts.T @ p) / norms)
    return MaxEntModel(
        kind,
        constraints,
        space,
        w,
        lse,
        iterations,
        float(np.abs(grad).max()),
        achieved,
    )


def _raise_not_realizable(constraints, space, kind, weight_cap, stalled=False):
    theta = [c.theta for c in constraints]
    verdict = realizability_check(theta, [c.formula for c in constraints], space, kind)
    if verdict.realizable:
        reason = (
            "the dual stalled before reaching the gradient tolerance"
            if stalled
            else f"weights exceeded the cap {weight_cap}"
        )
        message = (
            f"no finite-weight model: {reason}; the target lies on the polytope "
            f"boundary (hull distance {verdict.distance:.3g}), so only distributions "
            "without full support match it; estimate the targets from a noisy "
            "expansion to move them inside"
        )
    else:
        message = (
            f"target marginals are not realizable at domain size "
            f"{len(space.constants)}: hull distance {verdict.distance:.6g}"
        )
    raise NotRealizableError(
        message, [float(t) for t in theta], verdict.distance, verdict.realizable
    )


def model_probability(model: MaxEntModel, world) -> float:
    """Probability the fitted model assigns to one world of its space."""
    bits = world if isinstance(world, int) else model.space.encode(world)
    idx = model.space.world_index(bits)
    counts = model.space.count_matrix(model.formulas, model.kind)
    return float(math.exp(float(counts[idx] @ model.weights) - model.log_partition))


def model_distribution(model: MaxEntModel) -> ExplicitDistribution:
    counts = model.space.count_matrix(model.formulas, model.kind)
    scores = counts.astype(float) @ model.weights
    p = np.exp(scores - logsumexp(scores))
    p = p / p.sum()
    return ExplicitDistribution(model.space, tuple(float(x) for x in p))


# ---------------------------------------------------------------------------
# primal oracle

def primal_solve_oracle(
    constraints: Sequence[MarginalConstraint],
    space: WorldSpace,
    kind: ModelKind,
    tol: float = 1e-8,
) -> ExplicitDistribution:
    """Independent primal route: maximize entropy subject to the marginal
    constraints directly over the probability simplex.

    Mirror (exponentiated-gradient) ascent on an increasingly penalized
    objective, warm-started across the penalty schedule, then an exact
    Euclidean projection onto the affine constraint set.  Infeasible targets
    show up as a residual that refuses to shrink.
    """
    constraints = tuple(constraints)
    if len(space) == 0:
        raise DomainError("empty world space (hard rules unsatisfiable)")
    if len(space) > PRIMAL_WORLD_CAP:
        raise CapExceededError(
            f"primal oracle supports up to {PRIMAL_WORLD_CAP} worlds, got {len(space)}",
            len(space),
            PRIMAL_WORLD_CAP,
        )
    counts, norms, theta = _features(constraints, space, kind)
    a = (counts / norms).T  # h x W, rows are normalized statistics
    n_worlds = a.shape[1]
    if n_worlds == 1:
        residual = float(np.abs(a[:, 0] - theta).max())
        if residual > 1e-9:
            raise InfeasibleError(f"single-world space misses the target by {residual:.3g}")
        return ExplicitDistribution(space, (1.0,))
    sigma_sq = float(np.linalg.eigvalsh(a @ a.T).max())
    p = np.full(n_worlds, 1.0 / n_worlds)
    residual = float(np.abs(a @ p - theta).max())
    for mu in (1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8):
        eta = 1.0 / (mu * sigma_sq + 1.0)
        for _ in range(4000):
            r = a @ p - theta
            grad = mu * (a.T @ r)
            z = (np.log(np.maximum(p, 1e-300)) - eta * grad) / (1.0 + eta)
            z -= z.max()
            new_p = np.exp(z)
            new_p /= new_p.sum()
            moved = float(np.abs(new_p - p).sum())
            p = new_p
            if moved < 1e-15:
                break
        new_residual = float(np.abs(a @ p - theta).max())
        if new_residual > 1e-3 and new_residual > 0.9 * residual and mu >= 1e4:
            raise InfeasibleError(
                f"feasibility phase stalled at residual {new_residual:.6g}; "
                "the targets are not realizable over this world space"
            )
        residual = new_residual
    if residual > 1e-3:
        raise InfeasibleError(
            f"feasibility phase did not converge (residual {residual:.6g})"
        )
    # exact projection onto {A p = theta, sum p = 1}
    b = np.vstack([a, np.ones(n_worlds)])
    c = np.concatenate([theta, [1.0]])
    y, *_ = np.linalg.lstsq(b @ b.T, b @ p - c, rcond=None)
    p = p - b.T @ y
    if p.min() < -1e-6:
        raise InfeasibleError(
            f"projection left the simplex (min coordinate {p.min():.3g}); "
            "the targets sit outside the polytope"
        )
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    final = float(np.abs(a @ p - theta).max())
    if final > max(tol, 1e-9):
        raise InfeasibleError(f"projected distribution misses the target by {final:.3g}")
    return ExplicitDistribution(space, tuple(float(x) for x in p))


# ---------------------------------------------------------------------------
# duality check

@dataclass(frozen=True)
class DualityReport:
    theta: tuple
    weights: tuple[float, ...]
    dual_value: float
    log_likelihood: float
    grad_inf_norm: float
    realizable: bool
    hull_distance: float
    boundary: bool
    advice: str | None

    @property
    def passed(self) -> bool:
        return self.realizable and self.grad_inf_norm < 1e-6


def log_likelihood_duality_check(
    train: GlobalExample,
    formulas: Sequence[Formula],
    kind: ModelKind,
    space: WorldSpace,
) -> DualityReport:
    """Fit the training example's own statistics and confirm the dual optimum
    is the maximum-likelihood point: the log-likelihood gradient of the
    training world must vanish at the returned weights.

    A training world whose statistics sit on the polytope boundary has no
    finite-weight maximum-likelihood model; that case is reported, not raised,
    together with the hull diagnosis.
    """
    if set(train.constants) != set(space.constants):
        raise DomainError(
            "training example and world space must share one constant set "
            f"({len(train.constants)} vs {len(space.constants)} constants)"
        )
    formulas = tuple(formulas)
    theta = tuple(statistic(f, train, kind) for f in formulas)
    constraints = tuple(MarginalConstraint(f, t) for f, t in zip(formulas, theta))
    try:
        model = solve_maxent(constraints, space, kind)
    except NotRealizableError as exc:
        return DualityReport(
            theta,
            (),
            float("nan"),
            float("nan"),
            float("inf"),
            False,
            exc.distance,
            exc.boundary,
            str(exc),
        )
    counts, norms, _ = _features(constraints, space, kind)
    train_counts = counts[space.world_index(space.encode(train))]
    scores = counts @ model.weights
    lse = float(logsumexp(scores))
    p = np.exp(scores - lse)
    ll = float(train_counts @ model.weights) - lse
    ll_grad = train_counts - counts.T @ p
    dual_value = float(model.weights @ (np.array([float(t) for t in theta]) * norms)) - lse
    return DualityReport(
        theta,
        tuple(float(x) for x in model.weights),
        dual_value,
        ll,
        float(np.abs(ll_grad).max()),
        True,
        0.0,
        False,
        None,
    )


# ---------------------------------------------------------------------------
# exact shrinking

def shrink_distribution(dist: ExplicitDistribution, m: int) -> ExplicitDistribution:
    """Push a distribution on size-n worlds down to size m by sampling a
    uniform size-m constant subset and relabelling the fragment onto the
    first m constants.  Exact when the input probabilities are exact; all
    width-<=m marginal statistics are preserved.
    """
    src = dist.space
    n = len(src.constants)
    if not 1 <= m <= n:
        raise DomainError(f"target size {m} outside 1..{n}")
    target_constants = src.constants[:m]
    target = enumerate_worlds(target_constants, src.vocabulary)
    zero = Fraction(0) if all(isinstance(p, (Fraction, int)) for p in dist.probs) else 0.0
    out = [zero] * len(target)
    denom = math.comb(n, m)
    for idx, p in enumerate(dist.probs):
        if p == 0:
            continue
        share = p / denom if isinstance(zero, float) else p * Fraction(1, denom)
        atoms = src.world_atoms(int(src.worlds[idx]))
        for combo in itertools.combinations(src.constants, m):
            chosen = set(combo)
            relabel = dict(zip(combo, target_constants))
            frag = [
                type(a)(a.pred, tuple(relabel[arg] for arg in a.args))
                for a in atoms
                if all(arg in chosen for arg in a.args)
            ]
            out[target.world_index(target.encode(frag))] += share
    return ExplicitDistribution(target, tuple(out))


def distribution_statistic(dist: ExplicitDistribution, f: Formula, kind: ModelKind):
    """Mixture statistic E_dist[statistic(f, world)]; exact for exact inputs."""
    total = 0
    for idx, p in enumerate(dist.probs):
        if p == 0:
            continue
        total += p * statistic(f, dist.space.world_example(int(dist.space.worlds[idx])), kind)
    return total


def total_variation(a: ExplicitDistribution, b: ExplicitDistribution) -> float:
    if a.space is not b.space and not np.array_equal(a.space.worlds, b.space.worlds):
        raise DomainError("distributions live on different world spaces")
    return 0.5 * float(np.abs(a.as_floats() - b.as_floats()).sum())
