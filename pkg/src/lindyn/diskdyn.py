"""Disk automorphisms, weighted composition operators, and obstruction witnesses.

Functions are compared pointwise on finite sample grids inside the disk (a
desk-scale stand-in for the compact-open topology); Moebius compositions are
kept in exact closed form rather than truncated coefficient expansions.
"""

from __future__ import annotations

import cmath
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MoebiusMap",
    "DiskAutomorphism",
    "FixedPointInfo",
    "denjoy_wolff_by_iteration",
    "AnalyticFn",
    "Polynomial",
    "PointProduct",
    "MoebiusFn",
    "Reciprocal",
    "Composition",
    "Product",
    "VanishingWeightError",
    "certified_reciprocal",
    "unit_disk_grid",
    "WeightedCompOp",
    "ObstructionReport",
    "obstruction_report",
]

DISC_TOL = 1e-12
ZERO_TOL = 1e-12
_SELF_MAP_BOUNDARY_SAMPLES = 360


def _mat_power(m: np.ndarray, n: int) -> np.ndarray:
    """Renormalized binary power of a 2x2 Moebius matrix (n >= 0).

    Moebius maps are scale-invariant in their matrix, so renormalizing by the
    largest entry after each multiply prevents overflow at huge exponents.
    """

    def norm(x: np.ndarray) -> np.ndarray:
        return x / np.abs(x).max()

    result = np.eye(2, dtype=complex)
    base = norm(np.asarray(m, dtype=complex))
    while n:
        if n & 1:
            result = norm(result @ base)
        base = norm(base @ base)
        n >>= 1
    return result


@dataclass(frozen=True)
class MoebiusMap:
    """General Moebius transformation z -> (a z + b) / (c z + d)."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.a * self.d - self.b * self.c == 0:
            raise ValueError("degenerate Moebius matrix (zero determinant)")

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "MoebiusMap":
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def __call__(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """self after other (matrix product)."""
        return MoebiusMap.from_matrix(self.matrix @ other.matrix)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def iterate(self, n: int) -> "MoebiusMap":
        if n < 0:
            return self.inverse().iterate(-n)
        return MoebiusMap.from_matrix(_mat_power(self.matrix, n))


@dataclass(frozen=True)
class FixedPointInfo:
    """Fixed-point configuration and the distinguished (Denjoy-Wolff) point."""

    kind: str  # "identity" | "elliptic" | "parabolic" | "hyperbolic"
    interior_fixed: complex | None
    boundary_fixed: tuple[complex, ...]
    denjoy_wolff: complex | None
    derivative_at_dw: float | None
    near_parabolic: bool = False


@dataclass(frozen=True)
class DiskAutomorphism:
    """phi(z) = e^{i theta} (z - alpha) / (1 - conj(alpha) z) with |alpha| < 1."""

    theta: float
    alpha: complex = 0j

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", float(math.remainder(self.theta, math.tau)))
        object.__setattr__(self, "alpha", complex(self.alpha))
        if not abs(self.alpha) < 1:
            raise ValueError(f"alpha must lie inside the open disk, got |alpha|={abs(self.alpha)}")

    @classmethod
    def rotation(cls, theta: float) -> "DiskAutomorphism":
        return cls(theta, 0j)

    @classmethod
    def from_moebius(cls, m: MoebiusMap, tol: float = 1e-8) -> "DiskAutomorphism":
        """Recover the canonical (theta, alpha) form from a Moebius matrix."""
        if m.d == 0:
            raise ValueError("not a disk automorphism (d entry vanishes)")
        unit = m.a / m.d
        alpha = -(m.c / m.d).conjugate()
        if abs(abs(unit) - 1) > tol or not abs(alpha) < 1:
            raise ValueError("matrix does not describe a disk automorphism")
        return cls(cmath.phase(unit), alpha)

    @property
    def is_identity(self) -> bool:
        return self.theta == 0.0 and self.alpha == 0

    @property
    def moebius(self) -> MoebiusMap:
        u = cmath.exp(1j * self.theta)
        return MoebiusMap(u, -u * self.alpha, -self.alpha.conjugate(), 1)

    def __call__(self, z):
        u = cmath.exp(1j * self.theta)
        return u * (z - self.alpha) / (1 - self.alpha.conjugate() * z)

    def compose(self, other: "DiskAutomorphism") -> "DiskAutomorphism":
        """self after other; automorphisms form a group, so this stays canonical."""
        return DiskAutomorphism.from_moebius(self.moebius.compose(other.moebius))

    def inverse(self) -> "DiskAutomorphism":
        return DiskAutomorphism.from_moebius(self.moebius.inverse())

    def iterate(self, n: int) -> "DiskAutomorphism":
        """n-fold composition in closed form (renormalized matrix power).

        Large non-elliptic powers converge to a boundary constant; when float
        resolution can no longer separate |alpha| from 1, alpha is clamped to
        the closest representable interior point.
        """
        if n == 0:
            return DiskAutomorphism(0.0, 0j)
        if n < 0:
            return self.inverse().iterate(-n)
        m = _mat_power(self.moebius.matrix, n)
        unit = m[0, 0] / m[1, 1]
        alpha = -(m[1, 0] / m[1, 1]).conjugate()
        mag = abs(alpha)
        if mag >= 1:
            alpha *= math.nextafter(1.0, 0.0) / mag
        return DiskAutomorphism(cmath.phase(unit), alpha)

    def fixed_points(self, disc_tol: float = DISC_TOL) -> FixedPointInfo:
        """Solve the fixed-point quadratic exactly and classify the map.

        The discriminant of the (determinant-normalized) trace separates the
        classes; inputs within ``disc_tol`` of the parabolic boundary are
        reported as parabolic with ``near_parabolic`` set instead of being
        force-classified.
        """
        if self.is_identity:
            return FixedPointInfo("identity", None, (), None, None)
        m = self.moebius
        a, b, c, d = m.a, m.b, m.c, m.d
        det = a * d - b * c

        def deriv(z: complex) -> float:
            return abs(det) / abs(c * z + d) ** 2

        if self.alpha == 0:  # rotation, theta != 0
            return FixedPointInfo("elliptic", 0j, (), 0j, 1.0)
        disc = ((a + d) ** 2 / det).real - 4.0
        sq = cmath.sqrt((a - d) ** 2 + 4 * b * c)
        z1 = ((a - d) + sq) / (2 * c)
        z2 = ((a - d) - sq) / (2 * c)
        if abs(disc) <= disc_tol:
            z0 = (a - d) / (2 * c)
            return FixedPointInfo(
                "parabolic", None, (z0,), z0, deriv(z0), near_parabolic=(disc != 0.0)
            )
        if disc < 0:
            interior = z1 if abs(z1) < abs(z2) else z2
            return FixedPointInfo("elliptic", interior, (), interior, deriv(interior))
        d1, d2 = deriv(z1), deriv(z2)
        attracting, repelling = (z1, z2) if d1 < d2 else (z2, z1)
        return FixedPointInfo(
            "hyperbolic", None, (attracting, repelling), attracting, min(d1, d2)
        )


def denjoy_wolff_by_iteration(
    phi: DiskAutomorphism | MoebiusMap,
    tol: float = 1e-8,
    start: complex = 0j,
    max_doublings: int = 60,
) -> complex:
    """Limit of the orbit of ``start``, found by repeated matrix squaring.

    Independent of the fixed-point solver: only squares the coefficient
    matrix, which reaches exponent 2^k after k steps, so even the slow 1/n
    convergence of parabolic maps is resolved.  Raises if the orbit does not
    settle (e.g. for elliptic maps, which have no attracting point).
    """
    m = phi.moebius.matrix if isinstance(phi, DiskAutomorphism) else phi.matrix
    m = m / np.abs(m).max()

    def value(mat: np.ndarray) -> complex:
        return complex((mat[0, 0] * start + mat[0, 1]) / (mat[1, 0] * start + mat[1, 1]))

    prev = value(m)
    for _ in range(max_doublings):
        m = m @ m
        m = m / np.abs(m).max()
        cur = value(m)
        if abs(cur - prev) <= tol / 4:
            return cur
        prev = cur
    raise RuntimeError("orbit did not converge (is the map elliptic?)")


# ---------------------------------------------------------------------------
# Analytic functions on the disk, evaluable pointwise (scalars or arrays).


class AnalyticFn(ABC):
    """A function of the disk, evaluable at any point or array of points."""

    @abstractmethod
    def __call__(self, z):
        ...


@dataclass(frozen=True)
class Polynomial(AnalyticFn):
    """Coefficients in ascending order: coeffs[k] multiplies z^k."""

    coeffs: tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    def __call__(self, z):
        result = 0j
        for c in reversed(self.coeffs):
            result = result * z + c
        return result


def constant_fn(value: complex) -> Polynomial:
    return Polynomial((value,))


@dataclass(frozen=True)
class PointProduct(AnalyticFn):
    """prod_j (z - r_j) over the given roots."""

    roots: tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "roots", tuple(complex(r) for r in self.roots))

    def __call__(self, z):
        result = np.ones_like(z, dtype=complex) if isinstance(z, np.ndarray) else 1j * 0 + 1
        for r in self.roots:
            result = result * (z - r)
        return result


@dataclass(frozen=True)
class MoebiusFn(AnalyticFn):
    """A Moebius map viewed as an analytic function."""

    map: MoebiusMap | DiskAutomorphism

    def __call__(self, z):
        return self.map(z)


@dataclass(frozen=True)
class Reciprocal(AnalyticFn):
    """1/f; build through ``certified_reciprocal`` to certify nonvanishing."""

    fn: AnalyticFn

    def __call__(self, z):
        return 1.0 / self.fn(z)


@dataclass(frozen=True)
class Composition(AnalyticFn):
    """outer o inner, with a Moebius inner map."""

    outer: AnalyticFn
    inner: MoebiusMap | DiskAutomorphism

    def __call__(self, z):
        return self.outer(self.inner(z))


@dataclass(frozen=True)
class Product(AnalyticFn):
    factors: tuple[AnalyticFn, ...]

    def __call__(self, z):
        result = np.ones_like(z, dtype=complex) if isinstance(z, np.ndarray) else 1j * 0 + 1
        for f in self.factors:
            result = result * f(z)
        return result


class VanishingWeightError(ValueError):
    """A weight function vanishes at a sample-grid point."""

    def __init__(self, point: complex, value: complex):
        super().__init__(f"weight vanishes at grid point {point} (value {value})")
        self.point = point
        self.value = value


def unit_disk_grid(total: int = 200, radii: tuple[float, ...] = (0.3, 0.6, 0.9)) -> np.ndarray:
    """The origin plus equally spaced points on concentric sample circles."""
    if total < 1 + len(radii):
        raise ValueError("grid too small for the requested circles")
    per, extra = divmod(total - 1, len(radii))
    points = [0j]
    for k, r in enumerate(radii):
        count = per + (1 if k < extra else 0)
        angles = 2 * np.pi * np.arange(count) / count
        points.extend(r * np.exp(1j * angles))
    return np.asarray(points, dtype=complex)


def _first_grid_zero(fn: AnalyticFn, grid: np.ndarray, zero_tol: float) -> tuple[complex, complex] | None:
    values = np.asarray(fn(grid))
    hits = np.flatnonzero(np.abs(values) <= zero_tol)
    if hits.size:
        k = int(hits[0])
        return complex(grid[k]), complex(values[k])
    return None


def certified_reciprocal(fn: AnalyticFn, grid: np.ndarray, zero_tol: float = ZERO_TOL) -> Reciprocal:
    """1/fn after certifying fn does not vanish on the sample grid."""
    hit = _first_grid_zero(fn, grid, zero_tol)
    if hit is not None:
        raise VanishingWeightError(*hit)
    return Reciprocal(fn)


@dataclass(frozen=True)
class WeightedCompOp:
    """C f = w * (f o phi) for a weight w and a Moebius self-map phi of the disk."""

    weight: AnalyticFn
    symbol: DiskAutomorphism | MoebiusMap

    def __post_init__(self) -> None:
        if isinstance(self.symbol, DiskAutomorphism):
            return  # automorphisms are self-maps by construction
        # Spot-check the self-map property on boundary samples and the grid.
        boundary = np.exp(2j * np.pi * np.arange(_SELF_MAP_BOUNDARY_SAMPLES) / _SELF_MAP_BOUNDARY_SAMPLES)
        if np.abs(self.symbol(boundary)).max() > 1 + 1e-9:
            raise ValueError("symbol does not map the disk into itself")
        if np.abs(self.symbol(unit_disk_grid())).max() >= 1:
            raise ValueError("symbol does not map the disk into itself")

    def apply(self, f: AnalyticFn) -> AnalyticFn:
        return Product((self.weight, Composition(f, self.symbol)))

    def iterate(self, n: int, f: AnalyticFn) -> AnalyticFn:
        """C^n f from the closed product formula, never by n-fold application:
        w * (w o phi_1) * ... * (w o phi_{n-1}) * (f o phi_n)."""
        if n < 0:
            raise ValueError("iterate count must be non-negative")
        if n == 0:
            return f
        factors: list[AnalyticFn] = [self.weight]
        factors.extend(Composition(self.weight, self.symbol.iterate(k)) for k in range(1, n))
        factors.append(Composition(f, self.symbol.iterate(n)))
        return Product(tuple(factors))

    def inverse(self, grid: np.ndarray | None = None, zero_tol: float = ZERO_TOL) -> "WeightedCompOp":
        """The inverse operator, with weight (1/w) o phi^{-1} and symbol phi^{-1}.

        Requires an automorphism symbol and a weight certified nonvanishing on
        the sample grid.
        """
        if not isinstance(self.symbol, DiskAutomorphism):
            raise TypeError("only automorphism symbols can be inverted")
        grid = unit_disk_grid() if grid is None else grid
        rho = self.symbol.inverse()
        psi = Composition(certified_reciprocal(self.weight, grid, zero_tol), rho)
        return WeightedCompOp(psi, rho)


@dataclass(frozen=True)
class ObstructionReport:
    """Orbit values pinned at zero against a target of constant value one.

    ``values[n-1]`` is the n-th orbit evaluation at the distinguished point;
    the gap |0 - 1| to the target never shrinks, which is the witnessed
    obstruction.  Certification covers exponents 1..certified_up_to only.
    """

    case: str  # "weight-zero" | "elliptic" | "boundary"
    target_value: float
    gap: float
    certified_up_to: int
    values: tuple[complex, ...]
    max_abs_value: float
    note: str
    offending_point: complex | None = None
    fixed_point: complex | None = None
    symbol_class: str | None = None
    denjoy_wolff: complex | None = None
    orbit_points: tuple[complex, ...] | None = None


def _orbit(map_, z0: complex, count: int) -> list[complex]:
    points = [complex(z0)]
    for _ in range(count):
        points.append(complex(map_(points[-1])))
    return points


def _pinned_values(weight_fn, f: AnalyticFn, orbit: list[complex], count: int) -> list[complex]:
    # values[n-1] = prod_{k<n} weight_fn(orbit[k]) * f(orbit[n])
    values = []
    prefix = 1 + 0j
    for n in range(1, count + 1):
        prefix *= complex(weight_fn(orbit[n - 1]))
        values.append(prefix * complex(f(orbit[n])))
    return values


def obstruction_report(
    weight: AnalyticFn,
    phi: DiskAutomorphism,
    n_powers: int = 50,
    orbit_length: int = 20,
    grid: np.ndarray | None = None,
    zero_tol: float = ZERO_TOL,
) -> ObstructionReport:
    """Build the computable obstruction witness for the pair (w, phi).

    If w vanishes at a grid point, every forward-orbit value there is zero,
    which already blocks approximation of the constant-one target.  Otherwise
    the inverse pair (psi, rho) is formed and a test function vanishing along
    the relevant rho-orbit pins the first orbit values at zero: f(z) = z - a
    at an interior fixed point a of rho, or a finite zero product over
    rho_1(0)..rho_M(0) when the Denjoy-Wolff point sits on the boundary.
    """
    if phi.is_identity:
        raise ValueError("the identity symbol is unsupported")
    grid = unit_disk_grid() if grid is None else grid

    hit = _first_grid_zero(weight, grid, zero_tol)
    if hit is not None:
        z0, w0 = hit
        orbit = _orbit(phi, z0, n_powers)
        values = _pinned_values(weight, constant_fn(1.0), orbit, n_powers)
        return ObstructionReport(
            case="weight-zero",
            target_value=1.0,
            gap=1.0,
            certified_up_to=n_powers,
            values=tuple(values),
            max_abs_value=max(abs(v) for v in values),
            note=(
                f"weight vanishes at {z0}, so every orbit value there is 0 while "
                f"the target constant has value 1; certified for exponents 1..{n_powers}"
            ),
            offending_point=z0,
        )

    rho = phi.inverse()
    psi = Composition(certified_reciprocal(weight, grid, zero_tol), rho)
    info = rho.fixed_points()
    if info.kind == "elliptic":
        a = info.interior_fixed
        orbit = _orbit(rho, a, n_powers)
        f = Polynomial((-a, 1))  # z - a
        values = _pinned_values(psi, f, orbit, n_powers)
        return ObstructionReport(
            case="elliptic",
            target_value=1.0,
            gap=1.0,
            certified_up_to=n_powers,
            values=tuple(values),
            max_abs_value=max(abs(v) for v in values),
            note=(
                f"evaluation at the interior fixed point {a} annihilates every orbit "
                f"element of z - a while the target constant has value 1; certified "
                f"for exponents 1..{n_powers}"
            ),
            fixed_point=a,
        )

    orbit = _orbit(rho, 0j, orbit_length)
    f = PointProduct(tuple(orbit[1:]))
    values = _pinned_values(psi, f, orbit, orbit_length)
    return ObstructionReport(
        case="boundary",
        target_value=1.0,
        gap=1.0,
        certified_up_to=orbit_length,
        values=tuple(values),
        max_abs_value=max(abs(v) for v in values),
        note=(
            f"the test function vanishes on the inverse orbit of 0 through step "
            f"{orbit_length}, so those orbit values are 0 while the target constant "
            f"has value 1; the finite zero product certifies exponents "
            f"1..{orbit_length} only"
        ),
        symbol_class=info.kind,
        denjoy_wolff=info.denjoy_wolff,
        orbit_points=tuple(orbit[1:]),
    )
