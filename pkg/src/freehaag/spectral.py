"""Number-operator semigroup bounds and radial Brown-measure norm ratios."""

from __future__ import annotations

import csv
import math
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

NORMALIZATION_TOL = 1e-6


# Ornstein-Uhlenbeck bounds -----------------------------------------------

def ou_kernel_bound(t: float, C_a: float) -> float:
    """``C_a·e^{−t}/(1−e^{−2t})``."""
    if not t > 0:
        raise ValueError("t must be positive")
    return C_a * math.exp(-t) / -math.expm1(-2 * t)


def scaled_kernel(t: float) -> float:
    """``t·e^{−t}/(1−e^{−2t}) = t/(2 sinh t)``; decreasing with limit 1/2 at 0."""
    if not t > 0:
        raise ValueError("t must be positive")
    if t > 700:
        return 0.0
    if t < 1e-3:
        t2 = t * t
        return 0.5 - t2 / 12 * (1 - 7 * t2 / 60)
    return t / (2 * math.sinh(t))


def default_grid(points: int = 10_000, lo: float = 1e-8, hi: float = 10.0) -> np.ndarray:
    """Log-spaced grid on ``[lo, hi]``."""
    return np.geomspace(lo, hi, points)


def parse_grid(spec: str) -> np.ndarray:
    """``"lo:hi:count"`` (log-spaced) or a comma-separated list of times."""
    spec = spec.strip()
    if ":" in spec:
        lo, hi, count = spec.split(":")
        return default_grid(int(count), float(lo), float(hi))
    return np.array([float(x) for x in spec.split(",") if x.strip()])


@dataclass(frozen=True)
class UltracontractivityReport:
    C_a: float
    points: int
    sup_scaled: float
    argsup: float
    decreasing: bool
    bound_holds: bool
    worst_margin: float

    @property
    def sup_in_range(self) -> bool:
        return 0.5 - 1e-6 <= self.sup_scaled <= 0.5

    @property
    def passed(self) -> bool:
        return self.sup_in_range and self.decreasing and self.bound_holds

    def to_json(self) -> dict:
        return {"kind": "ultracontractivity", "verdict": "pass" if self.passed else "fail",
                "C_a_float": self.C_a, "points": self.points, "sup_scaled_float": self.sup_scaled,
                "argsup_float": self.argsup, "sup_in_range": self.sup_in_range,
                "decreasing": self.decreasing, "bound_holds": self.bound_holds,
                "worst_margin_float": self.worst_margin}


def verify_ultracontractivity(C_a: float, grid: Sequence[float] | None = None) -> UltracontractivityReport:
    """Check ``ou_kernel_bound(t) ≤ C_a/(2t)`` on the grid and that
    ``t ↦ t·e^{−t}/(1−e^{−2t})`` is decreasing there with supremum in ``[1/2−1e−6, 1/2]``."""
    ts = sorted(float(t) for t in (default_grid() if grid is None else grid))
    if not ts or ts[0] <= 0:
        raise ValueError("grid must be a nonempty subset of (0, inf)")
    vals = [scaled_kernel(t) for t in ts]
    # monotonicity up to a few ulps of rounding in sinh
    decreasing = all(b <= a * (1 + 1e-15) for a, b in zip(vals, vals[1:]))
    # C_a·k(t) ≤ C_a/(2t) is checked as t·k(t) ≤ 1/2, where C_a cancels
    margins = [0.5 - v for v in vals]
    i = max(range(len(vals)), key=vals.__getitem__)
    worst = min(margins)
    return UltracontractivityReport(C_a, len(ts), vals[i], ts[i], decreasing, worst >= 0, worst)


@dataclass(frozen=True)
class LevelDecomposition:
    """Levels ``n`` with the 2-norms ``‖h_n‖₂`` of the components of ``h``."""

    levels: tuple[tuple[int, float], ...]

    def __post_init__(self):
        seen = set()
        for n, norm in self.levels:
            if n < 0 or norm < 0:
                raise ValueError("levels and norms must be non-negative")
            if n in seen:
                raise ValueError(f"level {n} repeated")
            seen.add(n)

    @classmethod
    def from_mapping(cls, levels: dict[int, float]) -> "LevelDecomposition":
        return cls(tuple(sorted((int(n), float(v)) for n, v in levels.items())))

    @property
    def h_norm2(self) -> float:
        return math.hypot(*(v for _, v in self.levels))


@dataclass(frozen=True)
class LevelBound:
    level_sum: float
    closed_form: float

    @property
    def consistent(self) -> bool:
        return self.level_sum <= self.closed_form * (1 + 1e-12) + 1e-300


def semigroup_level_bound(h: LevelDecomposition, t: float, C_a: float) -> LevelBound:
    """``Σ_n C_a√n e^{−nt}‖h_n‖₂`` and its Cauchy–Schwarz majorant
    ``C_a·e^{−t}/(1−e^{−2t})·‖h‖₂`` (using ``Σ n e^{−2nt} = e^{−2t}/(1−e^{−2t})²``)."""
    if not t > 0:
        raise ValueError("t must be positive")
    level_sum = math.fsum(C_a * math.sqrt(n) * math.exp(-n * t) * v for n, v in h.levels)
    closed = ou_kernel_bound(t, C_a) * h.h_norm2
    out = LevelBound(level_sum, closed)
    assert out.consistent, f"level sum {level_sum} exceeds closed form {closed}"
    return out


# Brown measure ratios ------------------------------------------------------

def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10,
                     max_depth: int = 40) -> float:
    """Adaptive Simpson quadrature with absolute tolerance ``tol``."""
    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6 * (fa + 4 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = (a + b) / 2
        lm, rm = (a + m) / 2, (m + b) / 2
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        delta = left + right - whole
        if depth >= max_depth or abs(delta) <= 15 * tol:
            return left + right + delta / 15
        return (rec(a, m, fa, flm, fm, left, tol / 2, depth + 1)
                + rec(m, b, fm, frm, fb, right, tol / 2, depth + 1))

    if b < a:
        return -adaptive_simpson(f, b, a, tol, max_depth)
    if a == b:
        return 0.0
    fa, fb, fm = f(a), f(b), f((a + b) / 2)
    return rec(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 0)


@dataclass(frozen=True)
class RadialDensity:
    """Rotation-invariant density ``f(r) dr dθ`` on the annulus ``r₀ ≤ r ≤ R``."""

    inner_radius: float
    outer_radius: float
    density: Callable[[float], float]
    name: str = "custom"
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self):
        if self.inner_radius < 0 or not self.outer_radius > self.inner_radius:
            raise ValueError("need 0 <= r0 < R")

    def integrate(self, g: Callable[[float], float]) -> float:
        """``∫_{r₀}^{R} g(r) f(r) dr`` split at breakpoints."""
        pts = [self.inner_radius, *[p for p in self.breakpoints
                                    if self.inner_radius < p < self.outer_radius],
               self.outer_radius]
        total = 0.0
        for a, b in zip(pts, pts[1:]):
            total += adaptive_simpson(lambda r: g(r) * self.density(r), a, b)
        return total

    def mass(self) -> float:
        return 2 * math.pi * self.integrate(lambda r: 1.0)

    def check(self) -> None:
        mass = self.mass()
        if abs(mass - 1) > NORMALIZATION_TOL:
            raise ValueError(f"density {self.name!r} has total mass {mass}, not 1")


def uniform_disc(R: float = 1.0) -> RadialDensity:
    """Uniform measure on the disc of radius R: ``f(r) = r/(πR²)``."""
    return RadialDensity(0.0, R, lambda r: r / (math.pi * R * R), f"disc({R})")


def annulus(r0: float, R: float) -> RadialDensity:
    """Constant radial density ``f = 1/(2π(R − r₀))`` on ``[r₀, R]``."""
    c = 1 / (2 * math.pi * (R - r0))
    return RadialDensity(r0, R, lambda r: c, f"annulus({r0},{R})")


def tabulated_density(rs: Sequence[float], fs: Sequence[float], name: str = "table") -> RadialDensity:
    """Linear interpolation of sampled ``(r, f(r))`` values."""
    rs, fs = [float(x) for x in rs], [float(y) for y in fs]
    if len(rs) < 2 or any(b <= a for a, b in zip(rs, rs[1:])):
        raise ValueError("need at least two strictly increasing radii")
    if any(y < 0 for y in fs):
        raise ValueError("density values must be non-negative")

    def f(r: float) -> float:
        i = min(max(bisect_right(rs, r) - 1, 0), len(rs) - 2)
        w = (r - rs[i]) / (rs[i + 1] - rs[i])
        return fs[i] + w * (fs[i + 1] - fs[i])

    return RadialDensity(rs[0], rs[-1], f, name, tuple(rs[1:-1]))


def load_density_csv(path: str | Path) -> RadialDensity:
    """CSV of ``r,f`` rows (a header line is skipped if it does not parse)."""
    rs, fs = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                r, v = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                if rs:
                    raise ValueError(f"bad density row {row!r}")
                continue
            rs.append(r)
            fs.append(v)
    return tabulated_density(rs, fs, Path(path).name)


def brown_ratio(nu: RadialDensity, n: int) -> float:
    """``‖zⁿ‖_∞/‖zⁿ‖₂ = Rⁿ / (2π∫ r^{2n} f(r) dr)^{1/2}``, computed on ``r/R``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    nu.check()
    R = nu.outer_radius
    second = 2 * math.pi * nu.integrate(lambda r: (r / R) ** (2 * n))
    return 1 / math.sqrt(second)


@dataclass(frozen=True)
class SqrtFit:
    ns: tuple[int, ...]
    ratios: tuple[float, ...]

    @property
    def constants(self) -> list[float]:
        return [x / math.sqrt(n) for n, x in zip(self.ns, self.ratios)]

    @property
    def lower(self) -> float:
        return min(self.constants)

    @property
    def upper(self) -> float:
        return max(self.constants)

    @property
    def rho(self) -> float:
        """Geometric mean of ``ratio/√n``."""
        cs = self.constants
        return math.exp(sum(math.log(c) for c in cs) / len(cs))

    @property
    def spread(self) -> float:
        return self.upper / self.lower

    def within(self, factor: float) -> bool:
        return self.spread <= factor

    def to_json(self) -> dict:
        return {"rows": [{"n": n, "ratio_float": x, "ratio_over_sqrt_n_float": c}
                         for n, x, c in zip(self.ns, self.ratios, self.constants)],
                "rho_float": self.rho, "lower_float": self.lower, "upper_float": self.upper,
                "spread_float": self.spread}


def sqrt_fit(nu: RadialDensity, ns: Sequence[int]) -> SqrtFit:
    """Tabulate ``brown_ratio(n)/√n`` over ``ns``."""
    ns = tuple(int(n) for n in ns)
    return SqrtFit(ns, tuple(brown_ratio(nu, n) for n in ns))
