"""Independent test oracles: brute-force norms and grid-refined span distances.

Deliberately self-contained (own densification, own norms) so they share no
code path with the library routines they check.
"""

from __future__ import annotations

import numpy as np

from lindyn import SeqVector, Space


def dense_norm(space: Space, arr: np.ndarray) -> float:
    mags = np.abs(np.asarray(arr))
    if mags.size == 0:
        return 0.0
    if space.kind == "c0":
        return float(mags.max())
    return float((mags ** space.p).sum() ** (1.0 / space.p))


def densify(x: SeqVector, basis: list[SeqVector]) -> tuple[np.ndarray, np.ndarray]:
    top = max([x.max_index] + [v.max_index for v in basis]) + 1
    xd = x.to_dense(top)
    V = np.column_stack([v.to_dense(top) for v in basis]) if basis else np.zeros((top, 0))
    return xd, V


def grid_distance(
    x: SeqVector,
    basis: list[SeqVector],
    rounds: int = 20,
    pts: int = 7,
) -> float:
    """Distance to the span by recentering grid search over the coefficients.

    Real and imaginary parts of each coefficient are scanned on a shrinking
    grid around the current best point; the norm is evaluated directly, so no
    solver is involved.  Intended for small spans (1-2 basis vectors).
    """
    basis = [v for v in basis if not v.is_zero]
    if not basis:
        return x.norm()
    xd, V = densify(x, basis)
    m = V.shape[1]
    xnorm = dense_norm(x.space, xd)
    col_norms = np.abs(V).max(axis=0)
    radii = 3.0 * xnorm / col_norms  # optimum coefficients are boxed well inside
    center = np.zeros(2 * m)
    best = xnorm

    for _ in range(rounds):
        axes = [
            np.linspace(center[k] - radii[k // 2], center[k] + radii[k // 2], pts)
            for k in range(2 * m)
        ]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij")).reshape(2 * m, -1)
        coeffs = mesh[0::2] + 1j * mesh[1::2]  # (m, n_combos)
        resid = xd[:, None] - V @ coeffs
        mags = np.abs(resid)
        if x.space.kind == "c0":
            vals = mags.max(axis=0)
        else:
            vals = (mags ** x.space.p).sum(axis=0) ** (1.0 / x.space.p)
        k = int(np.argmin(vals))
        if vals[k] < best:
            best = float(vals[k])
            center = mesh[:, k]
        radii = radii * 0.45
    return best


def svd_l2_distance(xd: np.ndarray, V: np.ndarray) -> float:
    """l2 span distance via an SVD projector (independent of the Gram route)."""
    u, s, _ = np.linalg.svd(V, full_matrices=False)
    rank = int((s > s.max() * 1e-12).sum()) if s.size else 0
    Q = u[:, :rank]
    return float(np.linalg.norm(xd - Q @ (Q.conj().T @ xd)))


def random_seq_vector(
    rng: np.random.Generator,
    space: Space,
    max_index: int = 12,
    size: int = 5,
    scale: float = 1.0,
) -> SeqVector:
    size = min(size, max_index + 1)
    support = rng.choice(max_index + 1, size=size, replace=False)
    values = scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))
    return SeqVector.from_pairs(space, zip((int(i) for i in support), values))


def parabolic_automorphism(t: float, sigma: complex = 1 + 0j):
    """Exact parabolic automorphism fixing the boundary point sigma.

    Conjugates the half-plane translation w -> w + t back to the disk; the
    trace-squared over determinant is exactly 4 by construction.
    """
    from lindyn import DiskAutomorphism, MoebiusMap

    m = MoebiusMap(2j - t, t, -t, t + 2j)  # fixes +1
    rotated = MoebiusMap(m.a, sigma * m.b, m.c / sigma, m.d)
    return DiskAutomorphism.from_moebius(rotated)
