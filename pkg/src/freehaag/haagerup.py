"""Finite-m checks of the Haagerup-type norm inequalities.

The operator norm is a limit and is never computed.  Every verdict compares a
``2m``-norm ``‖T‖₂ₘ = φ[(TT*)^m]^{1/2m}`` (a lower bound for ``‖T‖``) against
a right-hand side.  Whenever both sides have rational ``2m``-th powers the
comparison is exact; otherwise floats are compared with tolerance ``1e-9``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cumulants import (GaussianRational, ParticleTensor, abs_cumulant_sum, format_rational,
                        particle_moment, two_norm)
from .models import RDiagonalModel
from .partitions import fuss_catalan

TOLERANCE = 1e-9
SQRT_E = math.sqrt(math.e)


def root_float(x: Fraction, k: int) -> float:
    """``x^{1/k}`` for a non-negative rational, safe for huge numerators."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("root of a negative number")
    if x == 0:
        return 0.0
    return math.exp((math.log(x.numerator) - math.log(x.denominator)) / k)


@dataclass(frozen=True)
class InequalityRow:
    m: int
    lhs_power: Fraction
    lhs_float: float
    rhs_float: float
    rhs_power: Optional[Fraction] = None
    tolerance: float = 0.0

    @property
    def exact(self) -> bool:
        return self.rhs_power is not None

    @property
    def slack(self) -> float:
        if self.exact:
            # sign comes from the exact comparison, size from the floats
            diff = self.rhs_power - self.lhs_power
            gap = abs(self.rhs_float - self.lhs_float)
            return gap if diff >= 0 else -max(gap, 5e-324)
        return self.rhs_float - self.lhs_float + self.tolerance

    @property
    def passed(self) -> bool:
        if self.exact:
            return self.rhs_power >= self.lhs_power
        return self.slack >= 0

    def to_json(self) -> dict:
        out = {"m": self.m, "lhs_power": format_rational(self.lhs_power)}
        if self.exact:
            out["rhs_power"] = format_rational(self.rhs_power)
            out["slack_power"] = format_rational(self.rhs_power - self.lhs_power)
        out["lhs_float"] = self.lhs_float
        out["rhs_float"] = self.rhs_float
        out["slack_float"] = self.slack
        out["pass"] = self.passed
        return out


@dataclass(frozen=True)
class InequalityReport:
    """Rows indexed by ``m``; ``lhs_power`` is ``‖T‖₂ₘ^{2m}``."""

    kind: str
    model: str
    n: int
    rows: tuple[InequalityRow, ...]
    extra: dict = field(default_factory=dict)
    monotone: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        out = {"kind": self.kind, "model": self.model, "n": self.n, "verdict": self.verdict,
               "rows": [r.to_json() for r in self.rows]}
        if self.monotone is not None:
            out["monotone_in_m"] = self.monotone
        out.update(self.extra)
        return out

    def csv_rows(self) -> list[dict]:
        return [{"model": self.model, "n": self.n, "m": r.m,
                 "lhs_power": format_rational(r.lhs_power), "lhs_float": r.lhs_float,
                 "rhs_float": r.rhs_float, "slack_float": r.slack, "pass": r.passed}
                for r in self.rows]


def moments_monotone(powers: Sequence[Fraction]) -> bool:
    """Exact check that ``P_m^{1/2m}`` is nondecreasing, via ``P_m^{m+1} ≤ P_{m+1}^m``."""
    for m, (a, b) in enumerate(zip(powers, powers[1:]), start=1):
        if a ** (m + 1) > b ** m:
            return False
    return True


# main lemma ---------------------------------------------------------------

def main_lemma_bound(a: RDiagonalModel, n: int, m: int, ceiling: int | None = None) -> float:
    """``[Σ_{π∈NC*(n,m)} |κ_π|]^{1/2m} / ‖a‖₂ⁿ``."""
    s = abs_cumulant_sum(a.seq, n, m, ceiling=ceiling)
    return root_float(s / a.two_norm_sq ** (n * m), 2 * m)


def verify_main_lemma(a: RDiagonalModel, T: ParticleTensor, m_max: int, jobs: int = 1,
                      ceiling: int | None = None) -> InequalityReport:
    """``‖T‖₂ₘ ≤ main_lemma_bound(a, n, m)·‖T‖₂`` for ``m = 1..m_max``.

    Compared exactly as ``φ[(TT*)^m] ≤ S·(Σ|λ|²)^m`` with ``S`` the absolute
    cumulant sum.
    """
    n = T.n
    N = T.norm2_coeffs()
    rows = []
    powers = []
    for m in range(1, m_max + 1):
        lhs = particle_moment(a.seq, T, m, jobs=jobs, ceiling=ceiling)
        rhs = abs_cumulant_sum(a.seq, n, m, ceiling=ceiling) * N ** m
        powers.append(lhs)
        rows.append(InequalityRow(m, lhs, root_float(lhs, 2 * m), root_float(rhs, 2 * m), rhs))
    return InequalityReport("main_lemma", a.name, n, tuple(rows), monotone=moments_monotone(powers))


# strong Haagerup ----------------------------------------------------------

@dataclass(frozen=True)
class HaagerupConstant:
    value: float
    regime: str
    op_norm_tag: str

    def to_json(self) -> dict:
        return {"C_a_float": self.value, "regime": self.regime, "op_norm": self.op_norm_tag}


def haagerup_constant(a: RDiagonalModel) -> HaagerupConstant:
    op = a.require_op_norm()
    norm = float(op.value)
    if a.seq.nonnegative():
        value = SQRT_E * norm / a.two_norm
        regime = f"nonnegative (verified to K_max={a.seq.K_max})"
    else:
        value = 2 ** 10 * SQRT_E * norm ** 2 / float(a.two_norm_sq)
        regime = "general"
    return HaagerupConstant(value, regime, op.tag)


def verify_strong_haagerup(a: RDiagonalModel, T: ParticleTensor, m_max: int, jobs: int = 1,
                           ceiling: int | None = None,
                           constant: HaagerupConstant | None = None) -> InequalityReport:
    """``‖T‖₂ₘ ≤ C_a·√n·‖T‖₂`` for ``m = 1..m_max`` plus the growth of ``‖T‖₂ₘ`` in m."""
    c = constant or haagerup_constant(a)
    n = T.n
    rhs = c.value * math.sqrt(n) * math.sqrt(two_norm(a.seq, T))
    rows, powers = [], []
    for m in range(1, m_max + 1):
        lhs = particle_moment(a.seq, T, m, jobs=jobs, ceiling=ceiling)
        powers.append(lhs)
        rows.append(InequalityRow(m, lhs, root_float(lhs, 2 * m), rhs, tolerance=TOLERANCE))
    return InequalityReport("strong_haagerup", a.name, n, tuple(rows),
                            extra={"constant": c.to_json()}, monotone=moments_monotone(powers))


def circular_closed_form_check(n: int, m_max: int) -> InequalityReport:
    """``C^{(n)}_m^{1/2m} ≤ √e·√(n+1)`` using the Fuss-Catalan closed form for ``‖cⁿ‖₂ₘ``."""
    rhs = SQRT_E * math.sqrt(n + 1)
    rows, powers = [], []
    for m in range(1, m_max + 1):
        p = Fraction(fuss_catalan(n, m))
        powers.append(p)
        rows.append(InequalityRow(m, p, root_float(p, 2 * m), rhs, tolerance=TOLERANCE))
    return InequalityReport("circular_closed_form", "circular", n, tuple(rows),
                            monotone=moments_monotone(powers))


def circular_power_norm(n: int) -> Fraction:
    """``‖cⁿ‖² = (n+1)^{n+1}/nⁿ``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Fraction((n + 1) ** (n + 1), n ** n)


def larsen_power_bound(a: RDiagonalModel, n: int) -> float:
    """``√e·√n·‖a‖·‖a‖₂^{n−1}``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return SQRT_E * math.sqrt(n) * float(a.require_op_norm().value) * a.two_norm ** (n - 1)


# Haar sharpness -------------------------------------------------------------

def sum_of_generators(k: int) -> ParticleTensor:
    """``T_k = u₁ + … + u_k`` as a 1-particle tensor."""
    idx = tuple(str(i) for i in range(1, k + 1))
    return ParticleTensor(1, idx, {(i,): 1 for i in idx})


@dataclass(frozen=True)
class SharpnessReport:
    k: int
    two_norm_sq: Fraction
    powers: tuple[Fraction, ...]
    target: float

    @property
    def norms(self) -> list[float]:
        return [root_float(p, 2 * m) for m, p in enumerate(self.powers, start=1)]

    @property
    def monotone(self) -> bool:
        return moments_monotone(self.powers)

    @property
    def bounded(self) -> bool:
        return all(x <= self.target + TOLERANCE for x in self.norms)

    @property
    def ratio_target(self) -> float:
        """``‖T_k‖/‖T_k‖₂ = 2√((k−1)/k)``."""
        return self.target / math.sqrt(self.two_norm_sq)

    @property
    def ratio_exceeds_sqrt_e(self) -> bool:
        return self.ratio_target > SQRT_E

    @property
    def passed(self) -> bool:
        ok = self.two_norm_sq == self.k and self.monotone and self.bounded
        if self.k == 2 and len(self.powers) >= 2:
            ok = ok and self.powers[1] == 6
        return ok

    def to_json(self) -> dict:
        return {
            "kind": "sharpness_haar",
            "k": self.k,
            "verdict": "pass" if self.passed else "fail",
            "two_norm_sq": format_rational(self.two_norm_sq),
            "rows": [{"m": m, "moment": format_rational(p), "norm_float": x}
                     for m, (p, x) in enumerate(zip(self.powers, self.norms), start=1)],
            "monotone_in_m": self.monotone,
            "bounded_by_target": self.bounded,
            "target_float": self.target,
            "ratio_target_float": self.ratio_target,
            "ratio_exceeds_sqrt_e": self.ratio_exceeds_sqrt_e,
        }


def sharpness_haar(k: int, m_max: int, a: RDiagonalModel | None = None, jobs: int = 1,
                   ceiling: int | None = None) -> SharpnessReport:
    """Moments of ``u₁+…+u_k`` against the operator norm ``2√(k−1)``."""
    from .models import haar_unitary

    if k < 2:
        raise ValueError("k must be >= 2")
    a = a or haar_unitary()
    T = sum_of_generators(k)
    powers = tuple(particle_moment(a.seq, T, m, jobs=jobs, ceiling=ceiling)
                   for m in range(1, m_max + 1))
    return SharpnessReport(k, two_norm(a.seq, T), powers, 2 * math.sqrt(k - 1))


# random tensors -------------------------------------------------------------

def random_tensor(rng: random.Random, n: int, alphabet: int = 2, max_terms: int = 4,
                  max_den: int = 4, complex_coeffs: bool = True) -> ParticleTensor:
    """Small-denominator rational tensor with at most ``max_terms`` words."""
    idx = tuple(str(i) for i in range(1, alphabet + 1))
    terms = rng.randint(1, max_terms)
    coeffs: dict = {}
    for _ in range(terms):
        word = tuple(rng.choice(idx) for _ in range(n))
        re = Fraction(rng.randint(-max_den, max_den), rng.randint(1, max_den))
        im = Fraction(rng.randint(-max_den, max_den), rng.randint(1, max_den)) if complex_coeffs else 0
        coeffs[word] = coeffs.get(word, GaussianRational()) + GaussianRational(re, im)
    if not any(coeffs.values()):
        coeffs[tuple(idx[0] for _ in range(n))] = GaussianRational(1)
    return ParticleTensor(n, idx, coeffs)


def tensor_corpus(seed: int, count: int = 100, n_max: int = 3) -> list[ParticleTensor]:
    """Deterministic corpus cycling through ``n = 1..n_max``."""
    rng = random.Random(seed)
    return [random_tensor(rng, 1 + i % n_max) for i in range(count)]
