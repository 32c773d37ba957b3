"""Strong supercyclicity classification and constructive hypercyclicity witnesses.

A weighted backward shift is never invertible (e_0 is in the kernel) and its
generalized kernel is structurally dense, so strong supercyclicity reduces to
surjectivity, i.e. the weights being bounded away from zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .seqspace import SeqVector
from .shiftops import BackwardShift, WeightIndexError
from .epsilon import epsilon_closed_form

__all__ = [
    "StrongClassification",
    "HCWitness",
    "WitnessSearch",
    "classify",
    "strong_hc_witness",
]

DEFAULT_N_CAP = 200


@dataclass(frozen=True)
class StrongClassification:
    surjective: bool
    dense_generalized_kernel: bool
    strongly_supercyclic: bool
    scalar_threshold: float  # 1/epsilon; +inf when epsilon = 0


@dataclass(frozen=True)
class HCWitness:
    """u within radius r of the center, pushed exactly onto the target by (cB)^n."""

    n: int
    u: SeqVector
    residual: float


@dataclass(frozen=True)
class WitnessSearch:
    status: str  # "found" | "inconclusive"
    witness: HCWitness | None
    scalar_magnitude: float
    threshold: float
    n_cap: int
    reason: str | None = None


def classify(shift: BackwardShift) -> StrongClassification:
    """Surjectivity, kernel density, and the scalar threshold for the shift.

    Finitely supported vectors are dense and each one is annihilated by a
    finite power of the shift, so the generalized kernel is always dense.
    """
    eps = epsilon_closed_form(shift)
    surjective = eps > 0
    return StrongClassification(
        surjective=surjective,
        dense_generalized_kernel=True,
        strongly_supercyclic=surjective,
        scalar_threshold=(1.0 / eps) if eps > 0 else math.inf,
    )


def strong_hc_witness(
    shift: BackwardShift,
    c: complex,
    u0: SeqVector,
    r: float,
    v: SeqVector,
    n_cap: int = DEFAULT_N_CAP,
) -> WitnessSearch:
    """Search for the smallest n and u = u0 + p with (c B)^n u = v, ||p|| < r.

    Exponents start at the kernel index of u0, so (cB)^n kills u0 and the
    perturbation p = c^{-n} * min_norm_preimage(v, n) reconstructs v exactly.
    Exceeding the cap is reported as inconclusive, never as impossible: for
    |c| above the 1/epsilon threshold the perturbation shrinks geometrically,
    but favorable weight products can succeed below the threshold too.
    """
    if v.is_zero:
        raise ValueError("the target vector must be nonzero")
    if not (r > 0):
        raise ValueError("the neighborhood radius must be positive")
    c = complex(c)
    eps = epsilon_closed_form(shift)
    threshold = (1.0 / eps) if eps > 0 else math.inf

    def outcome(status, witness, reason=None):
        return WitnessSearch(status, witness, abs(c), threshold, n_cap, reason)

    start = shift.kernel_index(u0)
    for n in range(start, n_cap + 1):
        if n == 0:
            p = v  # (cB)^0 u = u, so u must be v itself; reachable only for u0 = 0
        elif c == 0:
            return outcome("inconclusive", None, "zero scalar reaches no nonzero target")
        else:
            try:
                p = (c ** (-n)) * shift.min_norm_preimage(v, n)
            except WeightIndexError as err:
                return outcome("inconclusive", None, f"weight table exhausted: {err}")
        if p.norm() < r:
            u = u0 + p
            residual = ((c**n) * shift.apply_iterate(n, u) - v).norm()
            return outcome("found", HCWitness(n=n, u=u, residual=residual))

    side = "at or below" if abs(c) <= threshold else "above"
    return outcome(
        "inconclusive",
        None,
        f"no exponent up to {n_cap} worked; |c| is {side} the threshold {threshold:g}",
    )
