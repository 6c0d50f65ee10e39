"""Independent brute-force oracles used by the test suite.

Everything here is written with plain Python loops and scalar math on
purpose: these functions must not share code paths with the package so that
agreement between the two is meaningful evidence.
"""

import math

import numpy as np


# ---------------------------------------------------------------------------
# transfer functions (scalar, pure python)

def ramp(slope):
    def f(x):
        return max(-1.0, min(1.0, slope * x))
    return f


def sign_fn(x):
    if x > 0:
        return 1.0
    if x < 0:
        return -1.0
    return 0.0


def identity_fn(x):
    return max(-1.0, min(1.0, x))


def spread(f, values):
    """sup f(v) - inf f(v) over the observed values."""
    fv = [f(v) for v in values]
    return max(fv) - min(fv)


# ---------------------------------------------------------------------------
# goodness estimators by triple / double loop enumeration

def pair_goodness_values(K, labels, f, w_pair):
    """Per-point conditional mean of w(x', x'') f(K(x,x') - K(x,x''))."""
    n = len(labels)
    out = []
    for x in range(n):
        total, count = 0.0, 0
        for a in range(n):
            if labels[a] != labels[x]:
                continue
            for b in range(n):
                if labels[b] == labels[x]:
                    continue
                total += w_pair(a, b) * f(K[x][a] - K[x][b])
                count += 1
        out.append(total / count)
    return out


def bbs_gaps(K, labels, w_point):
    """Per-point weighted same-class mean minus other-class mean."""
    n = len(labels)
    out = []
    for x in range(n):
        same, ns, other, no = 0.0, 0, 0.0, 0
        for a in range(n):
            if labels[a] == labels[x]:
                same += w_point(a) * K[x][a]
                ns += 1
            else:
                other += w_point(a) * K[x][a]
                no += 1
        out.append(same / ns - other / no)
    return out


def sign_goodness_values(D, labels, w_point):
    """Per-point conditional mean of w(x')w(x'') sgn(d(x,x'') - d(x,x'))."""
    n = len(labels)
    out = []
    for x in range(n):
        total, count = 0.0, 0
        for a in range(n):
            if labels[a] != labels[x]:
                continue
            for b in range(n):
                if labels[b] == labels[x]:
                    continue
                total += w_point(a) * w_point(b) * sign_fn(D[x][b] - D[x][a])
                count += 1
        out.append(total / count)
    return out


def hinge_of(t, margin=1.0):
    return max(0.0, 1.0 - t / margin)


def logistic_of(t):
    return math.log1p(math.exp(-abs(t))) + max(0.0, -t)


# ---------------------------------------------------------------------------
# trainer oracles

def hinge_objective(Z, y, w, C):
    """0.5 ||w||^2 + C sum_i max(0, 1 - y_i <w, z_i>), plain loops."""
    reg = 0.5 * sum(v * v for v in w)
    total = 0.0
    for i in range(len(y)):
        m = y[i] * sum(Z[i][j] * w[j] for j in range(len(w)))
        total += max(0.0, 1.0 - m)
    return reg + C * total


def grid_min_hinge_2d(Z, y, C, lo=-5.0, hi=5.0, step=1e-2):
    """Grid-search minimum of the hinge objective over w in [lo, hi]^2.

    Vectorized for speed but algorithmically independent of the trainer.
    """
    grid = np.arange(lo, hi + step / 2, step)
    W = np.stack(np.meshgrid(grid, grid), axis=-1).reshape(-1, 2)
    Z = np.asarray(Z)
    y = np.asarray(y)
    best = np.inf
    for start in range(0, len(W), 100_000):
        block = W[start:start + 100_000]
        margins = y[:, None] * (Z @ block.T)
        objective = (0.5 * (block * block).sum(axis=1)
                     + C * np.maximum(0.0, 1.0 - margins).sum(axis=0))
        best = min(best, float(objective.min()))
    return best


def logistic_objective_np(Z, y, w, C):
    margins = np.asarray(y) * (np.asarray(Z) @ np.asarray(w))
    return 0.5 * float(np.dot(w, w)) + C * float(np.logaddexp(0.0, -margins).sum())


# ---------------------------------------------------------------------------
# landmark selection oracle

def greedy_step_is_optimal(K, selected, chosen, remaining, mode="similarity"):
    """Check that `chosen` minimizes (or maximizes, distance mode) the total
    kernel value to `selected` among `remaining`, with smallest-index ties."""
    def total(i):
        return sum(K[i][j] for j in selected)

    best = None
    for i in sorted(remaining):
        t = total(i)
        if best is None:
            best = (t, i)
        elif mode == "similarity" and t < best[0] - 1e-15:
            best = (t, i)
        elif mode == "distance" and t > best[0] + 1e-15:
            best = (t, i)
    return best[1] == chosen or abs(total(chosen) - best[0]) <= 1e-12
