#!/usr/bin/env python3
"""Generate frozen LP test fixtures solved by scipy.linprog (HiGHS).

Writes a Rust source fragment with (model, expected optimum) tuples used by
the bundled simplex tests. Run once; output is committed so the tests have
no Python dependency.
"""
import numpy as np
from scipy.optimize import linprog

rng = np.random.default_rng(20260810)

cases = []
for case_idx in range(12):
    n = rng.integers(2, 7)
    m = rng.integers(1, 6)
    # random sparse-ish rows
    A = np.round(rng.uniform(-3, 3, size=(m, n)) * (rng.random((m, n)) < 0.8), 3)
    # ensure no all-zero row
    for i in range(m):
        if not A[i].any():
            A[i, rng.integers(0, n)] = 1.0
    senses = rng.choice(["le", "ge", "eq"], size=m, p=[0.5, 0.3, 0.2])
    # pick an interior point to guarantee feasibility
    lo = np.round(rng.uniform(-2, 0.5, size=n), 3)
    hi = lo + np.round(rng.uniform(0.5, 4, size=n), 3)
    # some infinite uppers
    inf_up = rng.random(n) < 0.25
    x0 = lo + (hi - lo) * rng.random(n)
    act = A @ x0
    b = np.empty(m)
    for i in range(m):
        if senses[i] == "le":
            b[i] = act[i] + abs(rng.normal()) * 0.5
        elif senses[i] == "ge":
            b[i] = act[i] - abs(rng.normal()) * 0.5
        else:
            b[i] = act[i]
    c = np.round(rng.uniform(-5, 5, size=n), 3)
    # keep objective bounded: positive cost on infinite-upper vars
    for j in range(n):
        if inf_up[j] and c[j] <= 0:
            c[j] = abs(c[j]) + 0.1

    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for i in range(m):
        if senses[i] == "le":
            A_ub.append(A[i]); b_ub.append(b[i])
        elif senses[i] == "ge":
            A_ub.append(-A[i]); b_ub.append(-b[i])
        else:
            A_eq.append(A[i]); b_eq.append(b[i])
    bounds = [(lo[j], None if inf_up[j] else hi[j]) for j in range(n)]
    res = linprog(c, A_ub=np.array(A_ub) if A_ub else None,
                  b_ub=np.array(b_ub) if b_ub else None,
                  A_eq=np.array(A_eq) if A_eq else None,
                  b_eq=np.array(b_eq) if b_eq else None,
                  bounds=bounds, method="highs")
    assert res.status == 0, (case_idx, res)
    cases.append((c, A, senses, b, lo, hi, inf_up, res.fun))

print("// Frozen LP fixtures: optima computed with an independent solver.")
print("// (c, rows: (coeffs, sense, rhs), bounds lo/hi, expected objective)")
print("pub const LP_FIXTURES: &[LpFixture] = &[")
for (c, A, senses, b, lo, hi, inf_up, fun) in cases:
    m, n = A.shape
    rows = []
    for i in range(m):
        coefs = ", ".join(f"{float(A[i, j])!r}" for j in range(n))
        s = {"le": "Sense::Le", "ge": "Sense::Ge", "eq": "Sense::Eq"}[senses[i]]
        rows.append(f"(&[{coefs}], {s}, {float(b[i])!r})")
    his = ", ".join("f64::INFINITY" if inf_up[j] else f"{float(hi[j])!r}" for j in range(n))
    print("    LpFixture {")
    print(f"        cost: &[{', '.join(repr(float(v)) for v in c)}],")
    print(f"        rows: &[{', '.join(rows)}],")
    print(f"        lower: &[{', '.join(repr(float(v)) for v in lo)}],")
    print(f"        upper: &[{his}],")
    print(f"        expected: {float(fun)!r},")
    print("    },")
print("];")
