"""Built-in R-diagonal models, the domination construction and two
independent moment oracles (free-group words and Chebyshev polynomials)."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .cumulants import DeterminingSequence, StarWord, as_star_word, format_rational, parse_rational
from .errors import CapabilityError
from .partitions import catalan

DEFAULT_K_MAX = 32


@dataclass(frozen=True)
class OpNorm:
    """``‖a‖`` stored as an exact value or a certified upper bound."""

    value: Fraction
    exact: bool

    @property
    def tag(self) -> str:
        return "value" if self.exact else "upper_bound"


@dataclass(frozen=True)
class RDiagonalModel:
    name: str
    seq: DeterminingSequence
    two_norm_sq: Fraction
    op_norm: Optional[OpNorm] = None

    def __post_init__(self):
        object.__setattr__(self, "two_norm_sq", Fraction(self.two_norm_sq))
        if self.two_norm_sq <= 0:
            raise ValueError("two_norm_sq must be positive")
        if self.seq.alpha(1) != self.two_norm_sq:
            raise ValueError("alpha(1) must equal the squared 2-norm")
        if self.op_norm is not None and self.op_norm.value ** 2 < self.two_norm_sq:
            raise ValueError("operator norm bound is below the 2-norm")

    @property
    def two_norm(self) -> float:
        return math.sqrt(self.two_norm_sq)

    def require_op_norm(self) -> OpNorm:
        if self.op_norm is None:
            raise CapabilityError(f"model {self.name!r} has no operator norm data")
        return self.op_norm

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "alpha": [format_rational(x) for x in self.seq.alpha_values],
            "two_norm_sq": format_rational(self.two_norm_sq),
        }
        if self.seq.experimental:
            out["beta"] = [format_rational(x) for x in self.seq.beta_values]
        if self.op_norm is not None:
            out["op_norm"] = {self.op_norm.tag: format_rational(self.op_norm.value)}
        return out

    @classmethod
    def from_json(cls, data) -> "RDiagonalModel":
        if isinstance(data, str):
            data = json.loads(data)
        alpha = [parse_rational(x) for x in data["alpha"]]
        beta = [parse_rational(x) for x in data["beta"]] if "beta" in data else None
        op = None
        if "op_norm" in data:
            raw = data["op_norm"]
            if "value" in raw:
                op = OpNorm(parse_rational(raw["value"]), True)
            elif "upper_bound" in raw:
                op = OpNorm(parse_rational(raw["upper_bound"]), False)
            else:
                raise ValueError("op_norm needs a 'value' or 'upper_bound' key")
        return cls(str(data["name"]), DeterminingSequence(alpha, beta),
                   parse_rational(data["two_norm_sq"]), op)


def load_model(path: str | Path) -> RDiagonalModel:
    with open(path) as fh:
        return RDiagonalModel.from_json(json.load(fh))


def save_model(model: RDiagonalModel, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(model.to_json(), fh, indent=2)
        fh.write("\n")


def circular(K_max: int = DEFAULT_K_MAX) -> RDiagonalModel:
    seq = DeterminingSequence.from_rule(lambda k: 1 if k == 1 else 0, K_max)
    return RDiagonalModel("circular", seq, Fraction(1), OpNorm(Fraction(2), True))


def haar_unitary(K_max: int = DEFAULT_K_MAX) -> RDiagonalModel:
    seq = DeterminingSequence.from_rule(lambda k: (-1) ** (k - 1) * catalan(k - 1), K_max)
    return RDiagonalModel("haar", seq, Fraction(1), OpNorm(Fraction(1), True))


def _round_up(x: float) -> Fraction:
    return Fraction(math.nextafter(x, math.inf))


def _b_from_lambda_sq(gamma: Fraction, lam_sq: Fraction, K_max: int, name: str) -> RDiagonalModel:
    seq = DeterminingSequence.from_rule(lambda k: gamma * lam_sq ** k, K_max)
    # ‖b‖ ≤ 2λ(1 + √(γ/2))², evaluated in floats and nudged up a few ulps
    lam = math.sqrt(lam_sq)
    bound = 2 * lam * (1 + math.sqrt(gamma / 2)) ** 2
    for _ in range(4):
        bound = math.nextafter(bound, math.inf)
    op = OpNorm(_round_up(bound), False)
    # the 2-norm check inside the model needs op² ≥ γλ²; always true for this bound
    return RDiagonalModel(name, seq, gamma * lam_sq, op)


def b_model(gamma, lam, K_max: int = DEFAULT_K_MAX) -> RDiagonalModel:
    """R-diagonal element with ``alpha(k) = beta(k) = γ·λ^{2k}``."""
    gamma, lam = Fraction(gamma), Fraction(lam)
    if gamma <= 0 or lam <= 0:
        raise ValueError("gamma and lambda must be positive")
    return _b_from_lambda_sq(gamma, lam * lam, K_max,
                             f"b({format_rational(gamma)},{format_rational(lam)})")


@dataclass(frozen=True)
class DominatingParameters:
    lam_sq: Fraction
    gamma: Fraction

    @property
    def lam(self) -> float:
        return math.sqrt(self.lam_sq)


def dominating_parameters(a: RDiagonalModel) -> DominatingParameters:
    """``λ = 2⁸‖a‖²/‖a‖₂`` and ``γ = ‖a‖₂²/λ²``, kept exact through ``λ²``."""
    op = a.require_op_norm().value
    lam_sq = Fraction(2 ** 16) * op ** 4 / a.two_norm_sq
    return DominatingParameters(lam_sq, a.two_norm_sq / lam_sq)


def dominating_model(a: RDiagonalModel, K_max: int | None = None) -> RDiagonalModel:
    """Positive-cumulant model b with ``α₁[b] = α₁[a]`` dominating ``a``'s cumulants."""
    K = a.seq.K_max if K_max is None else K_max
    p = dominating_parameters(a)
    b = _b_from_lambda_sq(p.gamma, p.lam_sq, K, f"dominating({a.name})")
    report = cumulant_growth_bound(a, min(K, a.seq.K_max))
    if not report.passed:
        raise ValueError(f"model {a.name!r} violates the cumulant growth bound")
    for row in report.rows[1:]:
        assert b.seq.alpha(row.k) >= row.bound, f"b does not dominate at k={row.k}"
    return b


@dataclass(frozen=True)
class GrowthRow:
    k: int
    alpha_abs: Fraction
    beta_abs: Fraction
    bound: Fraction

    @property
    def margin(self) -> Fraction:
        return self.bound - max(self.alpha_abs, self.beta_abs)


@dataclass(frozen=True)
class GrowthReport:
    model: str
    rows: tuple[GrowthRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.margin >= 0 for r in self.rows)

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "verdict": "pass" if self.passed else "fail",
            "rows": [{"k": r.k, "alpha_abs": format_rational(r.alpha_abs),
                      "beta_abs": format_rational(r.beta_abs), "bound": format_rational(r.bound),
                      "margin": format_rational(r.margin)} for r in self.rows],
        }


def cumulant_growth_bound(a: RDiagonalModel, K: int) -> GrowthReport:
    """Check ``|alpha(k)|, |beta(k)| ≤ (1/2)(2⁴‖a‖)^{2k}`` for ``k = 1..K``."""
    op = a.require_op_norm().value
    if K > a.seq.K_max:
        raise ValueError(f"K={K} exceeds K_max={a.seq.K_max}")
    rows = []
    for k in range(1, K + 1):
        bound = Fraction(1, 2) * (16 * op) ** (2 * k)
        rows.append(GrowthRow(k, abs(a.seq.alpha(k)), abs(a.seq.beta(k)), bound))
    return GrowthReport(a.name, tuple(rows))


BUILTIN_MODELS = {
    "circular": circular,
    "haar": haar_unitary,
    "b11": lambda K_max=DEFAULT_K_MAX: b_model(1, 1, K_max),
}


def builtin_model(name: str, K_max: int = DEFAULT_K_MAX) -> RDiagonalModel:
    if name in BUILTIN_MODELS:
        return BUILTIN_MODELS[name](K_max)
    if name.startswith("b(") and name.endswith(")"):
        g, l = name[2:-1].split(",")
        return b_model(parse_rational(g), parse_rational(l), K_max)
    raise KeyError(f"unknown model {name!r}")


# oracles -----------------------------------------------------------------

def free_group_moment_oracle(w) -> int:
    """Trace of a word in free Haar unitaries: 1 iff it reduces to the identity."""
    stack: list[tuple[str, bool]] = []
    for letter in as_star_word(w):
        if stack and stack[-1][0] == letter[0] and stack[-1][1] != letter[1]:
            stack.pop()
        else:
            stack.append(letter)
    return 0 if stack else 1


def chebyshev_polynomial(n: int) -> list[int]:
    """Coefficients (lowest degree first) of ``P_n`` with ``P_{k+1} = x·P_k − P_{k−1}``."""
    prev, cur = [1], [0, 1]
    if n == 0:
        return prev
    for _ in range(n - 1):
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return cur


def _poly_mul(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def semicircle_moment(k: int) -> int:
    return 0 if k % 2 else catalan(k // 2)


def chebyshev_moment_oracle(n: int, m: int) -> Fraction:
    """``φ(P_n(s)^{2m})`` for a variance-1 semicircular ``s``."""
    if n < 0 or m < 0:
        raise ValueError("n and m must be non-negative")
    p = chebyshev_polynomial(n)
    power = [1]
    for _ in range(2 * m):
        power = _poly_mul(power, p)
    return Fraction(sum(c * semicircle_moment(k) for k, c in enumerate(power)))
