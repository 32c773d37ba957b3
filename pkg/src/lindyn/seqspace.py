"""Finite-support vectors of l^p (1 <= p < inf) and c_0, and distances to spans.

Vectors are immutable sparse sequences over the complex field.  Every
operation in this package maps finite support to finite support, so no
truncation is ever applied.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import cvxpy as cp
import numpy as np

__all__ = [
    "Space",
    "SeqVector",
    "Subspace",
    "SpaceMismatchError",
    "dist_to_span",
]

DEFAULT_TOL = 1e-9


class SpaceMismatchError(ValueError):
    """Raised when vectors from different ambient spaces are combined."""


@dataclass(frozen=True)
class Space:
    """Ambient space tag: l^p for a real exponent p >= 1, or c_0."""

    kind: str  # "lp" | "c0"
    p: float | None = None

    def __post_init__(self) -> None:
        if self.kind == "lp":
            if self.p is None or not (self.p >= 1):
                raise ValueError(f"l^p requires an exponent p >= 1, got {self.p}")
            object.__setattr__(self, "p", float(self.p))
        elif self.kind == "c0":
            if self.p is not None:
                raise ValueError("c0 carries no exponent")
        else:
            raise ValueError(f"unknown space kind {self.kind!r}")

    @classmethod
    def lp(cls, p: float) -> "Space":
        return cls("lp", p)

    @classmethod
    def c0(cls) -> "Space":
        return cls("c0")

    @property
    def is_sup_norm(self) -> bool:
        return self.kind == "c0"

    def norm_of(self, values: Iterable[complex]) -> float:
        """Norm of a finite coefficient family in this space."""
        mags = [abs(v) for v in values]
        if not mags:
            return 0.0
        if self.kind == "c0":
            return max(mags)
        p = self.p
        if p == 1:
            return math.fsum(mags)
        if p == 2:
            return math.sqrt(math.fsum(m * m for m in mags))
        return math.fsum(m**p for m in mags) ** (1.0 / p)

    def __str__(self) -> str:
        if self.kind == "c0":
            return "c0"
        p = self.p
        return f"l{int(p)}" if float(p).is_integer() else f"l{p:g}"

    @classmethod
    def parse(cls, text: str) -> "Space":
        text = text.strip().lower()
        if text == "c0":
            return cls.c0()
        if text.startswith("l"):
            return cls.lp(float(text[1:]))
        raise ValueError(f"cannot parse space {text!r} (expected e.g. l1, l2, c0)")


@dataclass(frozen=True)
class SeqVector:
    """Finitely supported vector, stored as (index, value) pairs.

    Invariants: indices are strictly increasing non-negative integers and no
    stored value is zero; the zero vector has an empty coordinate tuple.
    """

    space: Space
    coords: tuple[tuple[int, complex], ...] = ()

    def __post_init__(self) -> None:
        prev = -1
        for idx, val in self.coords:
            if not isinstance(idx, int) or idx < 0:
                raise ValueError(f"coordinate index must be a non-negative int, got {idx!r}")
            if idx <= prev:
                raise ValueError("coordinate indices must be strictly increasing")
            if val == 0:
                raise ValueError("zero values must not be stored")
            prev = idx

    @classmethod
    def from_pairs(cls, space: Space, pairs: Iterable[tuple[int, complex]]) -> "SeqVector":
        """Build a vector from unordered pairs, merging duplicates, dropping zeros."""
        acc: dict[int, complex] = {}
        for idx, val in pairs:
            acc[int(idx)] = acc.get(int(idx), 0j) + complex(val)
        coords = tuple((i, acc[i]) for i in sorted(acc) if acc[i] != 0)
        return cls(space, coords)

    @classmethod
    def from_values(cls, space: Space, values: Sequence[complex], start: int = 0) -> "SeqVector":
        return cls.from_pairs(space, ((start + i, v) for i, v in enumerate(values)))

    @classmethod
    def basis(cls, space: Space, index: int) -> "SeqVector":
        """Canonical basis vector e_index."""
        return cls(space, ((int(index), 1 + 0j),))

    @classmethod
    def zero(cls, space: Space) -> "SeqVector":
        return cls(space, ())

    @property
    def is_zero(self) -> bool:
        return not self.coords

    @property
    def max_index(self) -> int:
        """Largest support index; -1 for the zero vector."""
        return self.coords[-1][0] if self.coords else -1

    def value_at(self, index: int) -> complex:
        for idx, val in self.coords:
            if idx == index:
                return val
            if idx > index:
                break
        return 0j

    def norm(self) -> float:
        return self.space.norm_of(v for _, v in self.coords)

    def to_dense(self, length: int | None = None) -> np.ndarray:
        n = self.max_index + 1 if length is None else length
        if self.max_index >= n:
            raise ValueError(f"support reaches index {self.max_index}, beyond length {n}")
        out = np.zeros(n, dtype=complex)
        for idx, val in self.coords:
            out[idx] = val
        return out

    def _require_same_space(self, other: "SeqVector") -> None:
        if self.space != other.space:
            raise SpaceMismatchError(f"{self.space} vs {other.space}")

    def __add__(self, other: "SeqVector") -> "SeqVector":
        self._require_same_space(other)
        return SeqVector.from_pairs(self.space, (*self.coords, *other.coords))

    def __sub__(self, other: "SeqVector") -> "SeqVector":
        return self + (-other)

    def __neg__(self) -> "SeqVector":
        return SeqVector(self.space, tuple((i, -v) for i, v in self.coords))

    def __mul__(self, scalar: complex) -> "SeqVector":
        scalar = complex(scalar)
        if scalar == 0:
            return SeqVector.zero(self.space)
        return SeqVector(self.space, tuple((i, scalar * v) for i, v in self.coords))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {v:g}" for i, v in self.coords) or "0"
        return f"SeqVector({self.space}; {body})"


@dataclass(frozen=True)
class Subspace:
    """Span of finitely many vectors; zero or repeated entries are tolerated."""

    vectors: tuple[SeqVector, ...]

    def __post_init__(self) -> None:
        spaces = {v.space for v in self.vectors}
        if len(spaces) > 1:
            raise SpaceMismatchError(f"mixed spaces in subspace: {spaces}")

    @property
    def space(self) -> Space | None:
        return self.vectors[0].space if self.vectors else None


def _as_vectors(span: Subspace | Sequence[SeqVector] | SeqVector) -> tuple[SeqVector, ...]:
    if isinstance(span, Subspace):
        return span.vectors
    if isinstance(span, SeqVector):
        return (span,)
    return tuple(span)


def _densify(x: SeqVector, basis: Sequence[SeqVector]) -> tuple[np.ndarray, np.ndarray]:
    support = sorted({i for i, _ in x.coords}.union(*({i for i, _ in v.coords} for v in basis)))
    pos = {idx: k for k, idx in enumerate(support)}
    xd = np.zeros(len(support), dtype=complex)
    for idx, val in x.coords:
        xd[pos[idx]] = val
    V = np.zeros((len(support), len(basis)), dtype=complex)
    for j, v in enumerate(basis):
        for idx, val in v.coords:
            V[pos[idx], j] = val
    return xd, V


def _gram_distance(xd: np.ndarray, V: np.ndarray) -> float:
    # Normal equations G c = V* x, solved with a pseudo-inverse so zero or
    # linearly dependent basis vectors are harmless.
    G = V.conj().T @ V
    rhs = V.conj().T @ xd
    coeffs = np.linalg.pinv(G) @ rhs
    return float(np.linalg.norm(xd - V @ coeffs))


def _convex_distance(xd: np.ndarray, V: np.ndarray, space: Space, tol: float) -> float:
    # Minimize the residual p-norm (or sup norm) over complex coefficients.
    # The objective is convex, so the conic solver's optimum is global.
    d, m = V.shape
    coeffs = cp.Variable(m, complex=True)
    bound = cp.Variable(d, nonneg=True)
    resid = xd - V @ coeffs
    constraints = [cp.abs(resid) <= bound]
    if space.is_sup_norm:
        objective = cp.max(bound)
    elif space.p == 1:
        objective = cp.sum(bound)
    else:
        objective = cp.pnorm(bound, space.p)
    problem = cp.Problem(cp.Minimize(objective), constraints)
    solver_tol = min(tol * 1e-2, 1e-12)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        problem.solve(
            solver=cp.CLARABEL,
            tol_gap_abs=solver_tol,
            tol_gap_rel=solver_tol,
            tol_feas=solver_tol,
        )
    if problem.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        raise RuntimeError(f"convex distance solve failed with status {problem.status}")
    return max(float(problem.value), 0.0)


def dist_to_span(
    x: SeqVector,
    span: Subspace | Sequence[SeqVector] | SeqVector,
    tol: float = DEFAULT_TOL,
    method: str = "auto",
) -> float:
    """Distance from x to the linear span of the given vectors.

    For p = 2 the Gram normal equations give the exact (up to float) answer;
    every other norm goes through convex minimization over the coefficients,
    accurate to within ``tol`` of the global optimum.  ``method`` may force
    ``"gram"`` (p = 2 only) or ``"convex"``; ``"auto"`` picks per space.
    An empty or all-zero span yields ``x.norm()``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    vectors = _as_vectors(span)
    for v in vectors:
        if v.space != x.space:
            raise SpaceMismatchError(f"{v.space} vs {x.space}")
    basis = [v for v in vectors if not v.is_zero]
    if not basis:
        return x.norm()
    if method == "auto":
        method = "gram" if (x.space.kind == "lp" and x.space.p == 2) else "convex"
    if method == "gram" and not (x.space.kind == "lp" and x.space.p == 2):
        raise ValueError("the Gram path is exact only for p = 2")
    if x.is_zero:
        return 0.0
    xd, V = _densify(x, basis)
    if method == "gram":
        return _gram_distance(xd, V)
    if method == "convex":
        return _convex_distance(xd, V, x.space, tol)
    raise ValueError(f"unknown method {method!r}")
