"""
Training the full method on the bundled problem
===============================================

One end-to-end run: load the synthetic regression problem, preprocess it
the standard way (z-scores, centered target), train with mini-batch
gradient descent + l2 + DropRule + bounded adaptive rates, and compare
against the closed-form ridge baseline.
"""

import numpy as np

from tskfuzzy import (
    TrainConfig,
    apply_preprocessor,
    fit_preprocessor,
    make_synthetic,
    predict,
    ridge_fit,
    ridge_predict,
    split,
    train,
)

data = make_synthetic(1500, seed=7)
print(f"dataset: {data.n} examples, {data.num_features} features, target std {data.y.std():.2f}")

train_raw, test_raw = split(data, 0.7, np.random.default_rng(0))
pre = fit_preprocessor(train_raw)            # fitted on the training split only
train_set = apply_preprocessor(pre, train_raw)
test_set = apply_preprocessor(pre, test_raw)

config = TrainConfig(seed=1)                 # stock full-method settings
model, history = train(config, train_set, test_set)

print(f"\ntrained {config.iterations} iterations in {history.seconds:.1f}s")
print("iteration   train RMSE   test RMSE   mean rate")
for k in (1, 10, 50, 100, 250, 500):
    print(f"{k:9d}   {history.train_rmse[k-1]:10.4f}   {history.test_rmse[k-1]:9.4f}"
          f"   {history.mean_lr[k-1]:9.5f}")
print(f"best test RMSE {history.test_rmse.min():.4f} at iteration {history.test_rmse.argmin()+1}")

linear = ridge_fit(train_set.X, train_set.y, 0.05)
ridge_rmse = np.sqrt(np.mean((test_set.y - ridge_predict(linear, test_set.X)) ** 2))
print(f"ridge baseline test RMSE: {ridge_rmse:.4f}")

# Spot-check a few test rows against the truth.
rows = test_set.X[:5]
print("\nsample predictions:", np.round(predict(model, rows), 3))
print("sample targets:    ", np.round(test_set.y[:5], 3))
