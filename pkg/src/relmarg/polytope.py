"""Relational marginal polytopes: realizable statistic vectors over a world space.

The polytope is the convex hull of the per-world normalized statistic
vectors; a target vector is realizable by some distribution over worlds iff
it lies in the hull.  Distances are computed with a nearest-point iteration
over the vertex set (Frank-Wolfe steps with away steps and an affine polish
on the active support), so membership queries are reliable down to the 1e-8
declaration threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError
from .logic import Formula
from .stats import ModelKind
from .worlds import WorldSpace

MEMBERSHIP_TOL = 1e-8
GAP_TOL = 1e-10


@dataclass(frozen=True)
class MarginalPolytope:
    formulas: tuple[Formula, ...]
    kind: ModelKind
    domain_size: int
    vertices: tuple[tuple[Fraction, ...], ...]
    generators: tuple[int, ...]  # one witness world per distinct vertex

    @property
    def dim(self) -> int:
        return len(self.formulas)

    def rank(self) -> int:
        """Rank of the vertex set around its centroid (dim iff full-dimensional)."""
        if not self.vertices or self.dim == 0:
            return 0
        v = np.array(self.vertices, dtype=float)
        return int(np.linalg.matrix_rank(v - v.mean(axis=0), tol=1e-12))

    def full_dimensional(self) -> bool:
        return self.rank() == self.dim


def polytope_vertices(
    formulas: Sequence[Formula], space: WorldSpace, kind: ModelKind
) -> MarginalPolytope:
    """Candidate vertex set: distinct normalized statistic vectors over the space.

    Interior duplicates are kept; membership tests do not care.
    """
    formulas = tuple(formulas)
    if len(space) == 0:
        raise DomainError("empty world space (hard rules unsatisfiable)")
    counts = space.count_matrix(formulas, kind)
    norms = space.normalizers(formulas, kind)
    seen: dict[tuple[Fraction, ...], int] = {}
    for idx, bits in enumerate(space.worlds):
        vec = tuple(Fraction(int(c), int(n)) for c, n in zip(counts[idx], norms))
        if vec not in seen:
            seen[vec] = int(bits)
    return MarginalPolytope(
        formulas,
        kind,
        len(space.constants),
        tuple(seen.keys()),
        tuple(seen.values()),
    )


def _affine_polish(vs: np.ndarray, p: np.ndarray, weights: dict[int, float], x: np.ndarray):
    """Minimize over the affine hull of the active vertices; accept the result
    only if it stays a convex combination and does not increase the distance."""
    active = sorted(weights)
    base = vs[active[0]]
    if len(active) == 1:
        return x, weights
    d = (vs[active[1:]] - base).T
    alpha, *_ = np.linalg.lstsq(d, p - base, rcond=None)
    lam = np.concatenate(([1.0 - alpha.sum()], alpha))
    if lam.min() < -1e-10:
        return x, weights
    lam = np.clip(lam, 0.0, None)
    total = lam.sum()
    if total <= 0:
        return x, weights
    lam /= total
    candidate = (lam[None, :] @ vs[active]).ravel()
    if np.linalg.norm(candidate - p) <= np.linalg.norm(x - p) + 1e-15:
        new_weights = {a: float(l) for a, l in zip(active, lam) if l > 1e-15}
        if new_weights:
            return candidate, new_weights
    return x, weights


def hull_distance(
    point: Sequence[float],
    polytope: MarginalPolytope,
    gap_tol: float = GAP_TOL,
    max_iter: int = 20000,
) -> float:
    """Euclidean distance from ``point`` to the convex hull of the vertices."""
    if len(point) != polytope.dim:
        raise DomainError(
            f"point has dimension {len(point)}, polytope has {polytope.dim}"
        )
    if polytope.dim == 0:
        return 0.0
    p = np.array([float(c) for c in point], dtype=float)
    vs = np.array(polytope.vertices, dtype=float)
    start = int(np.argmin(((vs - p) ** 2).sum(axis=1)))
    x = vs[start].copy()
    weights: dict[int, float] = {start: 1.0}
    for it in range(max_iter):
        g = x - p
        scores = vs @ g
        s = int(np.argmin(scores))
        here = float(g @ x)
        gap = here - float(scores[s])
        if gap < gap_tol:
            break
        away = max(weights, key=lambda i: scores[i])
        if gap >= float(scores[away]) - here or len(weights) == 1:
            direction = vs[s] - x
            t_max = 1.0
            target, is_fw = s, True
        else:
            direction = x - vs[away]
            wa = weights[away]
            t_max = wa / (1.0 - wa) if wa < 1.0 else 1.0
            target, is_fw = away, False
        denom = float(direction @ direction)
        if denom <= 0:
            break
        t = min(max(-float(g @ direction) / denom, 0.0), t_max)
        if t <= 0:
            break
        x = x + t * direction
        if is_fw:
            weights = {i: w * (1.0 - t) for i, w in weights.items()}
            weights[target] = weights.get(target, 0.0) + t
        else:
            weights = {i: w * (1.0 + t) for i, w in weights.items()}
            weights[target] -= t
        weights = {i: w for i, w in weights.items() if w > 1e-15}
        if (it + 1) % 50 == 0:
            x, weights = _affine_polish(vs, p, weights, x)
    x, _ = _affine_polish(vs, p, weights, x)
    return float(np.linalg.norm(x - p))


def is_member(point: Sequence[float], polytope: MarginalPolytope) -> bool:
    return hull_distance(point, polytope) < MEMBERSHIP_TOL


@dataclass(frozen=True)
class EtaVerdict:
    """Probe-based interiority verdict: rejection is sound, acceptance only
    says that no probe left the hull."""

    inside: bool
    eta: float
    rejected_direction: tuple[float, ...] | None
    probes_checked: int


def eta_interior(
    point: Sequence[float],
    eta: float,
    polytope: MarginalPolytope,
    probes: int = 16,
    seed: int = 0,
) -> EtaVerdict:
    """Check that the eta-ball around ``point`` sits inside the hull, by probing
    the 2*dim coordinate directions plus ``probes`` random unit directions."""
    if eta < 0:
        raise DomainError("eta must be non-negative")
    d = polytope.dim
    if d == 0:
        return EtaVerdict(True, eta, None, 0)
    p = np.array([float(c) for c in point], dtype=float)
    directions = []
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        directions.extend((e, -e))
    rng = np.random.default_rng(seed)
    for _ in range(probes):
        v = rng.standard_normal(d)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            directions.append(v / norm)
    checked = 0
    for direction in directions:
        checked += 1
        if hull_distance(p + eta * direction, polytope) >= MEMBERSHIP_TOL:
            return EtaVerdict(False, eta, tuple(float(c) for c in direction), checked)
    return EtaVerdict(True, eta, None, checked)


def interiority_margin(m: int, k: int, l: int, eta: float) -> float:
    """Margin at size m that keeps an l-coordinate target eta-interior at every
    larger size: each coordinate moves at most the width-k shift bound under
    domain growth, so the vector moves at most sqrt(l) times that."""
    if not 1 <= k <= m:
        raise DomainError(f"width {k} outside 1..{m}")
    if l < 1:
        raise DomainError("level must be at least 1")
    if eta < 0:
        raise DomainError("eta must be non-negative")
    return eta + math.sqrt(l) * float(1 - Fraction(m - k + 1, m) ** (k - 1))


@dataclass(frozen=True)
class RealizabilityVerdict:
    realizable: bool
    distance: float
    polytope: MarginalPolytope


def realizability_check(
    theta: Sequence, formulas: Sequence[Formula], space: WorldSpace, kind: ModelKind
) -> RealizabilityVerdict:
    """Whether the target vector is a mixture of world statistics, with the
    hull distance as diagnosis."""
    polytope = polytope_vertices(formulas, space, kind)
    distance = hull_distance([float(t) for t in theta], polytope)
    return RealizabilityVerdict(distance < MEMBERSHIP_TOL, distance, polytope)
