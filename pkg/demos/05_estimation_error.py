"""How wrong is a statistic estimated from a small sample?

A 12-constant ground truth is hidden; only 6-constant fragments are observed.
Each fragment is expanded back to size 12 and the statistic read off the
expansion.  Repeating this 500 times measures the mean absolute error, which
the closed-form bound must dominate.  Wider formulas cost more: the effective
sample size is floor(m/k) and the expansion distortion grows with k.
"""

import random

from relmarg import (
    MODEL_B,
    ExperimentConfig,
    effective_sample_size,
    expected_error_bound,
    random_structure,
    run_error_experiment,
)
from relmarg.logic import parse_formula

truth = random_structure(12, {"r": 1, "e": 2}, 0.3, random.Random(77))

formulas = (
    parse_formula("forall X: r(X)"),
    parse_formula("forall X, Y: ~e(X,Y) | e(Y,X)"),
    parse_formula("forall X, Y, Z: ~e(X,Y) | ~e(Y,Z) | e(X,Z)"),
)
cfg = ExperimentConfig(
    ground_truth=truth,
    sample_size=6,
    target_size=12,
    formulas=formulas,
    kind=MODEL_B,
    trials=500,
    seed=23,
)

print(f"{'width':>5} {'eff. n':>6} {'mean error':>11} {'bound':>8}")
for report in run_error_experiment(cfg):
    print(
        f"{report.width:>5} {report.effective_sample_size:>6}"
        f" {float(report.mean_error):>11.4f} {report.bound:>8.4f}"
        f"  {'ok' if report.passed else 'VIOLATED'}"
    )

# the bound itself, away from any data: sampling term plus distortion term
print()
for m in (6, 12, 24, 48):
    parts = ", ".join(f"k={k}: {expected_error_bound(m, k):.3f}" for k in (1, 2, 3))
    print(f"m={m:>2} ({effective_sample_size(m, 3)} disjoint width-3 blocks)  {parts}")
