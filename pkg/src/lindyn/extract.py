"""Greedy extraction of orbit exponents whose span provably misses the start vector.

After rescaling x so that both its norm and its distance to span{Tx} exceed 1,
exponents are chosen one at a time, always the smallest candidate keeping
dist(x, span of chosen iterates) > 1 + margin.  A completed trace is a
non-density certificate: x stays at distance >= 1 from the closed span, so the
span is not the whole space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .seqspace import SeqVector, Space, Subspace, dist_to_span
from .shiftops import BackwardShift

__all__ = [
    "MatrixOp",
    "LinearOp",
    "StartPreconditionError",
    "SearchCapExceededError",
    "ExtractionTrace",
    "normalize_start",
    "select_next",
    "extract_subsequence",
    "verify_trace",
]

DEFAULT_SEARCH_CAP = 10_000
DEFAULT_ETA = 0.5
DEFAULT_MARGIN = 1e-9
DEFAULT_TOL = 1e-9

# Final closed-span claim is "distance >= 1"; allow this much float slack.
FINAL_SLACK = 1e-9
# Recomputed distances must match recorded ones this closely (relative).
DIST_MATCH_REL = 1e-6


class StartPreconditionError(ValueError):
    """The start vector cannot be normalized (zero, or x and Tx dependent)."""


class SearchCapExceededError(RuntimeError):
    """No qualifying exponent at or below the search cap."""

    def __init__(self, cap: int, chosen: tuple[int, ...]):
        super().__init__(f"no exponent in ({chosen[-1]}, {cap}] keeps the distance above 1")
        self.cap = cap
        self.chosen = chosen


@dataclass(frozen=True, eq=False)
class MatrixOp:
    """A d x d complex matrix acting on vectors supported in [0, d)."""

    matrix: np.ndarray
    space: Space

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, v: SeqVector) -> SeqVector:
        dense = v.to_dense(self.dim)
        return SeqVector.from_values(self.space, self.matrix @ dense)


LinearOp = Union[BackwardShift, MatrixOp]


@dataclass(frozen=True)
class ExtractionTrace:
    """Record of one greedy run; status is completed, searchCapExceeded, or precondFailed."""

    status: str
    scale: float | None
    x: SeqVector | None  # the rescaled start vector
    exponents: tuple[int, ...]
    step_distances: tuple[float, ...]
    final_distance: float | None
    requested_terms: int
    search_cap: int
    eta: float
    margin: float
    failure: str | None = None


class _Iterates:
    """Unit-normalized orbit T^n x, computed incrementally.

    Distances to spans are scale-invariant in each basis vector, so iterates
    are renormalized to unit norm; this keeps long scans (cap 10^4) clear of
    overflow and underflow without changing any distance.
    """

    def __init__(self, op: LinearOp, x: SeqVector):
        self.op = op
        self._units: list[SeqVector] = [x]  # position n holds a unit vector along T^n x

    def unit(self, n: int) -> SeqVector:
        while len(self._units) <= n:
            nxt = self.op.apply(self._units[-1])
            norm = nxt.norm()
            if norm > 0:
                nxt = (1.0 / norm) * nxt
            self._units.append(nxt)
        return self._units[n]

    def span_units(self, exponents: Sequence[int]) -> list[SeqVector]:
        return [self.unit(n) for n in exponents]


def normalize_start(
    op: LinearOp,
    x: SeqVector,
    eta: float = DEFAULT_ETA,
    tol: float = DEFAULT_TOL,
) -> tuple[float, SeqVector]:
    """Rescale x so that ||s x|| > 1 and dist(s x, span{T(s x)}) > 1.

    s = (1 + eta) * max(1/||x||, 1/d) with d = dist(x, span{Tx}); both
    postconditions then hold with slack factor (1 + eta).
    """
    if not (eta > 0):
        raise ValueError("eta must be positive")
    if x.is_zero:
        raise StartPreconditionError("start vector is zero")
    d = dist_to_span(x, [op.apply(x)], tol)
    if d <= tol:
        raise StartPreconditionError(
            f"x and Tx are linearly dependent (distance {d:.3e} <= tol {tol:.0e})"
        )
    scale = (1.0 + eta) * max(1.0 / x.norm(), 1.0 / d)
    return scale, scale * x


def _select_next(
    cache: _Iterates,
    x: SeqVector,
    chosen: Sequence[int],
    search_cap: int,
    margin: float,
    tol: float,
) -> tuple[int, float]:
    basis = cache.span_units(chosen)
    for n in range(chosen[-1] + 1, search_cap + 1):
        d = dist_to_span(x, basis + [cache.unit(n)], tol)
        if d > 1.0 + margin:
            return n, d
    raise SearchCapExceededError(search_cap, tuple(chosen))


def select_next(
    op: LinearOp,
    x: SeqVector,
    chosen: Sequence[int],
    search_cap: int = DEFAULT_SEARCH_CAP,
    margin: float = DEFAULT_MARGIN,
    tol: float = DEFAULT_TOL,
) -> int:
    """Smallest n past the chosen exponents keeping dist(x, grown span) > 1 + margin."""
    chosen = tuple(chosen)
    if not chosen:
        raise ValueError("chosen must contain at least the exponent 1")
    n, _ = _select_next(_Iterates(op, x), x, chosen, search_cap, margin, tol)
    return n


def extract_subsequence(
    op: LinearOp,
    x: SeqVector,
    terms: int,
    search_cap: int = DEFAULT_SEARCH_CAP,
    eta: float = DEFAULT_ETA,
    margin: float = DEFAULT_MARGIN,
    tol: float = DEFAULT_TOL,
) -> ExtractionTrace:
    """Run the full greedy construction for ``terms`` exponents (n_1 = 1 always).

    Failures are reported in the trace status with whatever partial progress
    was made; they are observable, never silent.
    """
    if terms < 1:
        raise ValueError("at least one exponent is required")

    def trace(status, scale=None, xs=None, exps=(), dists=(), final=None, failure=None):
        return ExtractionTrace(
            status=status,
            scale=scale,
            x=xs,
            exponents=tuple(exps),
            step_distances=tuple(dists),
            final_distance=final,
            requested_terms=terms,
            search_cap=search_cap,
            eta=eta,
            margin=margin,
            failure=failure,
        )

    try:
        scale, xs = normalize_start(op, x, eta, tol)
    except StartPreconditionError as err:
        return trace("precondFailed", failure=str(err))

    cache = _Iterates(op, xs)
    exponents = [1]
    distances = [dist_to_span(xs, cache.span_units(exponents), tol)]
    if distances[0] <= 1.0 + margin:
        return trace(
            "precondFailed", scale, xs, exponents, distances,
            failure=f"normalized start distance {distances[0]} fails the 1 + margin bar "
                    "(eta must exceed margin)",
        )
    while len(exponents) < terms:
        try:
            n, d = _select_next(cache, xs, exponents, search_cap, margin, tol)
        except SearchCapExceededError as err:
            final = dist_to_span(xs, cache.span_units(exponents), tol)
            return trace("searchCapExceeded", scale, xs, exponents, distances, final, str(err))
        exponents.append(n)
        distances.append(d)
    final = dist_to_span(xs, cache.span_units(exponents), tol)
    return trace("completed", scale, xs, exponents, distances, final)


def verify_trace(op: LinearOp, trace: ExtractionTrace, tol: float = DEFAULT_TOL) -> bool:
    """Independently recheck a completed trace; True iff the certificate stands.

    Recomputes every step distance (they must match the record and stay above
    1), rechecks that each exponent is the smallest qualifying candidate, and
    recomputes the final distance, which must be >= 1 up to float slack.
    """
    if trace.status != "completed":
        raise ValueError(f"only completed traces can be verified, got {trace.status!r}")
    if trace.x is None or trace.scale is None or trace.final_distance is None:
        return False
    exps = trace.exponents
    if len(exps) != len(trace.step_distances) or not exps or exps[0] != 1:
        return False
    if any(b <= a for a, b in zip(exps, exps[1:])):
        return False
    if not trace.x.norm() > 1.0 - FINAL_SLACK:
        return False

    cache = _Iterates(op, trace.x)

    def matches(recorded: float, recomputed: float) -> bool:
        return abs(recomputed - recorded) <= DIST_MATCH_REL * max(1.0, abs(recorded))

    for k in range(len(exps)):
        d = dist_to_span(trace.x, cache.span_units(exps[: k + 1]), tol)
        if not matches(trace.step_distances[k], d):
            return False
        if not d > 1.0 - FINAL_SLACK:
            return False
        if k > 0:
            # Smallest-n rule: every skipped candidate must have failed the bar.
            basis = cache.span_units(exps[:k])
            for n in range(exps[k - 1] + 1, exps[k]):
                skipped = dist_to_span(trace.x, basis + [cache.unit(n)], tol)
                if skipped > 1.0 + trace.margin:
                    return False
    final = dist_to_span(trace.x, cache.span_units(exps), tol)
    if not matches(trace.final_distance, final):
        return False
    return final >= 1.0 - FINAL_SLACK
