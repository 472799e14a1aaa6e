"""Eigen-decomposition of real symmetric 3x3 matrices.

The closed-form trigonometric solution of the characteristic cubic is used
when the eigenvalues are well separated. Its acos step loses about half the
digits near a double root, so close gaps (below GAP_TOL relative) hand over to
cyclic Jacobi rotations outright. Otherwise the closed-form eigenvectors seed
a short Jacobi polish.
"""

from __future__ import annotations

import math

import numpy as np

GAP_TOL = 1e-6


def _det3(b: np.ndarray) -> float:
    return float(
        b[0, 0] * (b[1, 1] * b[2, 2] - b[1, 2] * b[2, 1])
        - b[0, 1] * (b[1, 0] * b[2, 2] - b[1, 2] * b[2, 0])
        + b[0, 2] * (b[1, 0] * b[2, 1] - b[1, 1] * b[2, 0])
    )


def _closed_form_values(a: np.ndarray) -> np.ndarray:
    p1 = a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2
    q = np.trace(a) / 3.0
    p2 = (a[0, 0] - q) ** 2 + (a[1, 1] - q) ** 2 + (a[2, 2] - q) ** 2 + 2.0 * p1
    if p2 == 0.0:
        return np.array([q, q, q])
    p = math.sqrt(p2 / 6.0)
    b = (a - q * np.eye(3)) / p
    r = min(1.0, max(-1.0, _det3(b) / 2.0))
    phi = math.acos(r) / 3.0
    l1 = q + 2.0 * p * math.cos(phi)
    l3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    return np.array([l1, 3.0 * q - l1 - l3, l3])


def _null_vector(a: np.ndarray, lam: float) -> np.ndarray:
    rows = a - lam * np.eye(3)
    crosses = [np.cross(rows[0], rows[1]), np.cross(rows[0], rows[2]), np.cross(rows[1], rows[2])]
    best = max(crosses, key=lambda v: float(v @ v))
    return best / np.linalg.norm(best)


def jacobi_eigh(a: np.ndarray, sweeps: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi; returns (eigenvalues, eigenvector columns), unsorted."""
    a = np.array(a, dtype=float)
    v = np.eye(3)
    for _ in range(sweeps):
        off = a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2
        if off <= 1e-300 or off <= (np.finfo(float).eps * np.abs(a).max()) ** 2 * 1e-4:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            diff = a[q, q] - a[p, p]
            if abs(a[p, q]) <= 1e-20 * abs(diff) or abs(a[p, q]) < np.finfo(float).tiny:
                # below rounding of the diagonal: treat as already rotated away
                a[p, q] = a[q, p] = 0.0
                continue
            theta = diff / (2.0 * a[p, q])
            t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            g = np.eye(3)
            g[p, p] = g[q, q] = c
            g[p, q] = s
            g[q, p] = -s
            a = g.T @ a @ g
            v = v @ g
    return np.diag(a).copy(), v


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    for c in v:
        if abs(c) > 1e-12:
            return v if c > 0 else -v
    return v


def eigh3(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and eigenvector columns of a symmetric 3x3 matrix.

    Each eigenvector has its first non-negligible component positive. Equal
    eigenvalues are ordered by their eigenvectors, lexicographically largest first.
    """
    a = np.asarray(a, dtype=float)
    a = 0.5 * (a + a.T)
    scale = float(np.abs(a).max())
    if scale == 0.0:
        return np.zeros(3), np.eye(3)
    # work on a / scale so the cross products cannot underflow or overflow
    a = a / scale
    vals = _closed_form_values(a)
    gaps = np.abs(np.diff(np.sort(vals)))
    if np.all(gaps > GAP_TOL):
        vecs = np.column_stack([_null_vector(a, lam) for lam in vals])
        # the trig roots carry ~sqrt(eps) error; a Jacobi pass on the nearly
        # diagonal Q^T A Q restores full precision in one or two sweeps
        q, r = np.linalg.qr(vecs)
        q = q * np.sign(np.diag(r))
        vals, w = jacobi_eigh(q.T @ a @ q)
        vecs = q @ w
    else:
        vals, vecs = jacobi_eigh(a)
    vecs = np.column_stack([_canonical_sign(vecs[:, k]) for k in range(3)])

    order = sorted(range(3), key=lambda k: -vals[k])
    groups: list[list[int]] = []
    for k in order:
        if groups and vals[groups[-1][0]] - vals[k] <= 1e-12:
            groups[-1].append(k)
        else:
            groups.append([k])
    order = [k for g in groups for k in sorted(g, key=lambda k: tuple(-vecs[:, k]))]
    return scale * vals[order], vecs[:, order]
