"""Weighted backward shifts: application, iterates, and minimum-norm preimages.

A weight sequence is a finite prefix plus an explicit tail rule, so its exact
infimum and supremum are certifiable.  A table with no tail rule errors when
indexed past its end instead of silently extending.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .seqspace import SeqVector, Space, SpaceMismatchError

__all__ = [
    "WeightIndexError",
    "ConstantTail",
    "ExhaustedTail",
    "RationalTail",
    "GeometricTail",
    "WeightSeq",
    "BackwardShift",
]


class WeightIndexError(IndexError):
    """A weight beyond the end of a tail-less table was requested."""

    def __init__(self, index: int, available: int):
        super().__init__(
            f"weight w_{index} requested, but only w_1..w_{available} are defined "
            "(table has no tail rule)"
        )
        self.index = index
        self.available = available


@dataclass(frozen=True)
class ConstantTail:
    """w_n = value for every n past the prefix."""

    value: float


@dataclass(frozen=True)
class ExhaustedTail:
    """No rule past the prefix; indexing past the end is an explicit error."""


@dataclass(frozen=True)
class RationalTail:
    """w_n = base + slope / n past the prefix (monotone, exact limit ``base``)."""

    base: float
    slope: float


@dataclass(frozen=True)
class GeometricTail:
    """w_n = scale * ratio**n past the prefix; requires 0 < ratio <= 1."""

    scale: float
    ratio: float


Tail = Union[ConstantTail, ExhaustedTail, RationalTail, GeometricTail]


@dataclass(frozen=True)
class WeightSeq:
    """Positive bounded weight sequence w_1, w_2, ... with exact infimum.

    ``prefix`` holds w_1..w_N explicitly; ``tail`` defines every later term.
    """

    prefix: tuple[float, ...] = ()
    tail: Tail = ExhaustedTail()

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(float(w) for w in self.prefix))
        for w in self.prefix:
            if not (w > 0) or not math.isfinite(w):
                raise ValueError(f"weights must be positive finite reals, got {w}")
        tail = self.tail
        start = len(self.prefix) + 1  # first tail index
        if isinstance(tail, ExhaustedTail):
            if not self.prefix:
                raise ValueError("a tail-less weight table needs at least one entry")
        elif isinstance(tail, ConstantTail):
            if not (tail.value > 0) or not math.isfinite(tail.value):
                raise ValueError(f"constant tail value must be positive, got {tail.value}")
        elif isinstance(tail, RationalTail):
            first = tail.base + tail.slope / start
            if tail.base < 0 or not (first > 0):
                raise ValueError(
                    f"rational tail {tail.base} + {tail.slope}/n is not positive from n={start}"
                )
        elif isinstance(tail, GeometricTail):
            if not (tail.scale > 0):
                raise ValueError("geometric tail scale must be positive")
            if not (0 < tail.ratio <= 1):
                raise ValueError(
                    "geometric tail ratio must lie in (0, 1]; larger ratios are unbounded"
                )
        else:
            raise TypeError(f"unknown tail rule {tail!r}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, value: float) -> "WeightSeq":
        return cls((), ConstantTail(float(value)))

    @classmethod
    def table(cls, values: Iterable[float], tail_constant: float | None = None) -> "WeightSeq":
        """Finite table; with a ``tail_constant`` it extends, otherwise it errors past the end."""
        tail: Tail = ConstantTail(float(tail_constant)) if tail_constant is not None else ExhaustedTail()
        return cls(tuple(values), tail)

    @classmethod
    def rational(cls, base: float, slope: float) -> "WeightSeq":
        """w_n = base + slope/n for all n >= 1."""
        return cls((), RationalTail(float(base), float(slope)))

    @classmethod
    def geometric(cls, scale: float, ratio: float) -> "WeightSeq":
        """w_n = scale * ratio**n for all n >= 1."""
        return cls((), GeometricTail(float(scale), float(ratio)))

    # -- access ------------------------------------------------------------

    def weight(self, n: int) -> float:
        """The weight w_n (1-based)."""
        if n < 1:
            raise ValueError(f"weights are indexed from 1, got {n}")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        tail = self.tail
        if isinstance(tail, ConstantTail):
            return tail.value
        if isinstance(tail, RationalTail):
            return tail.base + tail.slope / n
        if isinstance(tail, GeometricTail):
            return tail.scale * tail.ratio**n
        raise WeightIndexError(n, len(self.prefix))

    def materialize(self, count: int) -> np.ndarray:
        """w_1..w_count as an array; errors if a tail-less table is too short."""
        if count < 0:
            raise ValueError("count must be non-negative")
        if count > len(self.prefix) and isinstance(self.tail, ExhaustedTail):
            raise WeightIndexError(count, len(self.prefix))
        out = np.empty(count, dtype=float)
        k = min(count, len(self.prefix))
        out[:k] = self.prefix[:k]
        if count > k:
            if isinstance(self.tail, ConstantTail):
                out[k:] = self.tail.value
            else:
                # scalar path keeps materialize bit-identical to weight()
                out[k:] = [self.weight(n) for n in range(k + 1, count + 1)]
        return out

    def product(self, lo: int, hi: int) -> float:
        """Product of w_lo .. w_hi (empty product = 1)."""
        result = 1.0
        for n in range(lo, hi + 1):
            result *= self.weight(n)
        return result

    # -- exact bounds ------------------------------------------------------

    def _tail_inf(self) -> tuple[float, bool] | None:
        """(infimum, attained) of the tail part, or None if the tail is empty."""
        start = len(self.prefix) + 1
        tail = self.tail
        if isinstance(tail, ExhaustedTail):
            return None
        if isinstance(tail, ConstantTail):
            return tail.value, True
        if isinstance(tail, RationalTail):
            if tail.slope > 0:
                return tail.base, False  # decreasing toward the limit
            return tail.base + tail.slope / start, True
        if tail.ratio == 1:
            return tail.scale, True
        return 0.0, False  # strictly decreasing to zero

    @property
    def inf_value(self) -> float:
        """Exact infimum over the whole (infinite) sequence."""
        best = min(self.prefix) if self.prefix else math.inf
        tail = self._tail_inf()
        if tail is not None:
            best = min(best, tail[0])
        return best

    @property
    def inf_attained(self) -> bool:
        """Whether some w_n actually equals the infimum."""
        inf = self.inf_value
        if self.prefix and min(self.prefix) == inf:
            return True
        tail = self._tail_inf()
        return tail is not None and tail[0] == inf and tail[1]

    @property
    def sup_value(self) -> float:
        """Exact supremum (finite: the sequence is bounded by construction)."""
        best = max(self.prefix) if self.prefix else 0.0
        start = len(self.prefix) + 1
        tail = self.tail
        if isinstance(tail, ConstantTail):
            best = max(best, tail.value)
        elif isinstance(tail, RationalTail):
            first = tail.base + tail.slope / start
            best = max(best, first if tail.slope >= 0 else tail.base)
        elif isinstance(tail, GeometricTail):
            best = max(best, tail.scale * tail.ratio**start)
        return best


@dataclass(frozen=True)
class BackwardShift:
    """B e_0 = 0 and B e_n = w_n e_{n-1} on l^p or c_0."""

    weights: WeightSeq
    space: Space

    def _check(self, v: SeqVector) -> None:
        if v.space != self.space:
            raise SpaceMismatchError(f"vector lives in {v.space}, shift acts on {self.space}")

    def apply(self, v: SeqVector) -> SeqVector:
        """B v: coordinate i of the result is w_{i+1} * v_{i+1}."""
        self._check(v)
        pairs = [(i - 1, self.weights.weight(i) * val) for i, val in v.coords if i >= 1]
        return SeqVector.from_pairs(self.space, pairs)

    def apply_iterate(self, n: int, v: SeqVector) -> SeqVector:
        """B^n v via the closed weight products (n = 0 is the identity)."""
        if n < 0:
            raise ValueError("iterate count must be non-negative")
        self._check(v)
        if n == 0:
            return v
        pairs = [
            (i - n, self.weights.product(i - n + 1, i) * val)
            for i, val in v.coords
            if i >= n
        ]
        return SeqVector.from_pairs(self.space, pairs)

    def min_norm_preimage(self, y: SeqVector, n: int = 1) -> SeqVector:
        """The z of minimal norm with B^n z = y.

        The n free coordinates z_0..z_{n-1} are zero and
        z_{i+n} = y_i / (w_{i+1} ... w_{i+n}); zeroing the free coordinates is
        norm-minimal in every l^p and in c_0 simultaneously.
        """
        if n < 0:
            raise ValueError("preimage order must be non-negative")
        self._check(y)
        if n == 0:
            return y
        pairs = [
            (i + n, val / self.weights.product(i + 1, i + n))
            for i, val in y.coords
        ]
        return SeqVector.from_pairs(self.space, pairs)

    def kernel_index(self, v: SeqVector) -> int:
        """Smallest n with B^n v = 0 (0 for the zero vector)."""
        self._check(v)
        return v.max_index + 1
