"""
Three ways to drop: rules, MFs, memberships
===========================================

Each drop variant perturbs the rule base differently during training.
This script shows the structural difference on one example, then trains
the full method once per variant for a quick comparison.
"""

import numpy as np

from tskfuzzy import (
    DropMask,
    TrainConfig,
    apply_preprocessor,
    firing_levels,
    fit_preprocessor,
    init_model_from_data,
    make_synthetic,
    split,
    train,
)

data = make_synthetic(1500, seed=7)
train_raw, test_raw = split(data, 0.7, np.random.default_rng(0))
pre = fit_preprocessor(train_raw)
train_set = apply_preprocessor(pre, train_raw)
test_set = apply_preprocessor(pre, test_raw)

model = init_model_from_data(train_set.X, 2)
x = train_set.X[0]
base = firing_levels(model, x)
R, M = model.num_rules, model.num_inputs
print(f"grid: {M} inputs x 2 MFs -> {R} rules")

# Dropping a rule zeroes its firing level: that rule simply disappears.
keep = np.ones(R, dtype=bool)
keep[0] = False
f = firing_levels(model, x, DropMask("rule", keep))
print(f"drop rule 0:        {np.sum(f != base):2d} firing level(s) changed (to zero)")

# Dropping one shared MF replaces its grade by 1 wherever it appears,
# shortening the antecedent of 2^(M-1) rules at once.
keep = np.ones((M, 2), dtype=bool)
keep[0, 0] = False
f = firing_levels(model, x, DropMask("mf", keep))
print(f"drop MF (0,0):      {np.sum(f != base):2d} firing level(s) changed")

# Dropping a single membership slot touches exactly one rule.
keep = np.ones((R, M), dtype=bool)
keep[0, 0] = False
f = firing_levels(model, x, DropMask("membership", keep))
print(f"drop slot (r0, x1): {np.sum(f != base):2d} firing level(s) changed")

print("\ntraining with each variant (identical seeds and batches):")
for variant in ("rule", "mf", "membership", "none"):
    cfg = TrainConfig(drop_variant=variant, iterations=150, seed=5)
    _, hist = train(cfg, train_set, test_set)
    print(f"  {variant:<10} best test RMSE {hist.test_rmse.min():.4f} "
          f"(final {hist.test_rmse[-1]:.4f})")
