"""Marginal targets that no distribution can meet.

"Every 2-subset contains one marked and one unmarked constant" is satisfiable
on two constants and impossible on three: some pair must agree.  The marginal
polytope makes this quantitative, and the solver reports the same geometry
when asked for the impossible fit.
"""

from fractions import Fraction

from relmarg import (
    MarginalConstraint,
    ModelA,
    NotRealizableError,
    enumerate_worlds,
    eta_interior,
    hull_distance,
    polytope_vertices,
    realizability_check,
    solve_maxent,
)
from relmarg.logic import parse_formula

mixed = parse_formula("exists X, Y: X != Y & r(X) & ~r(Y)")

for n in (2, 3):
    space = enumerate_worlds([f"c{i}" for i in range(1, n + 1)], {"r": 1})
    verdict = realizability_check([Fraction(1)], [mixed], space, ModelA(2))
    poly = verdict.polytope
    print(f"size {n}: vertices {sorted(v[0] for v in poly.vertices)}")
    print(f"  target 1 realizable: {verdict.realizable} (distance {verdict.distance:.6f})")

space3 = enumerate_worlds(["c1", "c2", "c3"], {"r": 1})
try:
    solve_maxent([MarginalConstraint(mixed, Fraction(1))], space3, ModelA(2))
except NotRealizableError as exc:
    print(f"\nsolver refuses: {exc}")
    print(f"  boundary case: {exc.boundary}, hull distance {exc.distance:.6f}")

# a target inside the polytope can still sit too close to a face for comfort;
# the eta probe flags that before any solving happens
poly3 = polytope_vertices([mixed], space3, ModelA(2))
for theta in (Fraction(1, 3), Fraction(3, 5), Fraction(33, 50)):
    deep = eta_interior([theta], 0.05, poly3)
    print(f"theta {str(theta):>5}: distance {hull_distance([theta], poly3):.4f},"
          f" 0.05-interior {deep.inside}")
