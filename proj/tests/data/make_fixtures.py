#!/usr/bin/env python3
"""Regenerates the synthetic fixtures in this directory.

None of these files are the original datasets. Each is built to match the
published marginal counts that the loader and acceptance tests check:

  eies_messages.csv   32-node directed message counts
  newcomb/week_XX.txt 15 weekly 17x17 rank-preference matrices
  achard_corr.txt     90-region correlation matrix
"""

import os

import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))


def eies(rng):
    n = 32
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    assert len(pairs) == 992
    # Value buckets: 532 zeros, 202 in 1..10, 58 in 11..20, 167 in 21..100, 33 in 101..
    zeros = [0] * 532
    low = list(rng.integers(1, 11, 202))
    mid = list(rng.integers(11, 21, 58))
    high = list(rng.integers(21, 101, 167))
    top = list(rng.integers(101, 400, 33))

    def steer(vals, lo, hi, total):
        vals = [int(v) for v in vals]
        k = 0
        while sum(vals) != total:
            idx = k % len(vals)
            if sum(vals) < total and vals[idx] < hi:
                vals[idx] += 1
            elif sum(vals) > total and vals[idx] > lo:
                vals[idx] -= 1
            k += 1
        return vals

    # Low group (< 21): 792 pairs with mean 2.2 -> sum 1742.
    mid = steer(mid, 11, 20, 870)
    low = steer(low, 1, 10, 1742 - 870)
    # High group (>= 21): 200 pairs with mean 76.7 -> sum 15340.
    top = steer(top, 101, 399, 6600)
    high = steer(high, 21, 100, 15340 - 6600)
    values = zeros + low + mid + high + top
    rng.shuffle(values)
    with open(os.path.join(HERE, "eies_messages.csv"), "w") as f:
        f.write("# Synthetic stand-in with the EIES message-count marginals.\n")
        f.write("# nodes: 32\n# directed: 1\n# unit: messages\n")
        for (i, j), v in zip(pairs, values):
            if v > 0:
                f.write(f"{i},{j},{v}\n")


def newcomb(rng):
    n, weeks = 17, 15
    out = os.path.join(HERE, "newcomb")
    os.makedirs(out, exist_ok=True)
    # Stable latent attraction plus weekly drift.
    base = rng.normal(size=(n, n))
    for w in range(weeks):
        score = base + 0.6 * rng.normal(size=(n, n)) * (1.0 - w / weeks)
        with open(os.path.join(out, f"week_{w + 1:02d}.txt"), "w") as f:
            for i in range(n):
                others = [j for j in range(n) if j != i]
                order = sorted(others, key=lambda j: -score[i, j])
                pref = {j: r + 1 for r, j in enumerate(order)}
                f.write(" ".join("-" if j == i else str(pref[j]) for j in range(n)) + "\n")


def achard(rng):
    n, t = 90, 400
    # Smooth spatial factors over a ring of regions plus a global factor.
    pos = np.linspace(0, 2 * np.pi, n, endpoint=False)
    loads = [0.335 * np.ones(n)]
    for k in range(1, 6):
        loads.append(0.43 * np.cos(k * pos + rng.uniform(0, 2 * np.pi)))
    l = np.array(loads)
    x = rng.normal(size=(t, l.shape[0])) @ l + rng.normal(size=(t, n))
    c = np.corrcoef(x, rowvar=False)
    np.fill_diagonal(c, 1.0)
    for tau in (0.22, 0.26):
        deg = ((c >= tau).sum() - n) / n
        print(f"achard: tau={tau} mean degree {deg:.2f}")
    with open(os.path.join(HERE, "achard_corr.txt"), "w") as f:
        f.write("# Synthetic 90-region correlation matrix.\n")
        for row in c:
            f.write(" ".join(f"{v:.6f}" for v in row) + "\n")


if __name__ == "__main__":
    eies(np.random.default_rng(1977))
    newcomb(np.random.default_rng(1956))
    achard(np.random.default_rng(2006))
