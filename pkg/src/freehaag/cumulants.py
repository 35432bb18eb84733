"""Exact free cumulant machinery for R-diagonal families.

Scalars are :class:`fractions.Fraction`; complex tensor coefficients are
:class:`GaussianRational` pairs.  Blocks are read in increasing position order
(the linear convention): an even alternating block of length ``2k`` evaluates
to ``alpha(k)`` when its first letter is plain and ``beta(k)`` when starred.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable, Iterable, Mapping, Sequence, Union

from ._parallel import exact_sum
from .errors import TruncationError
from .partitions import Partition, interval, mobius
from .patterns import alternating_partitions, enumerate_alternating_partitions, pattern

Rational = Union[int, Fraction]
StarWord = tuple[tuple[str, bool], ...]


def parse_rational(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(str(text).strip())


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __add__(self, other):
        other = _gq(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _gq(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        other = _gq(other)
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({format_rational(self.re)}, {format_rational(self.im)})"


def _gq(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, complex):
        return GaussianRational(Fraction(x.real), Fraction(x.imag))
    return GaussianRational(Fraction(x), Fraction(0))


# determining sequences ---------------------------------------------------

@dataclass(frozen=True)
class DeterminingSequence:
    """Alternating cumulants ``alpha(k) = κ₂ₖ[a,a*,…]``, ``beta(k) = κ₂ₖ[a*,a,…]``
    for ``k = 1..K_max``.  Orders beyond ``K_max`` raise :class:`TruncationError`."""

    alpha_values: tuple[Fraction, ...]
    beta_values: tuple[Fraction, ...] = field(default=None)

    def __post_init__(self):
        a = tuple(Fraction(x) for x in self.alpha_values)
        b = a if self.beta_values is None else tuple(Fraction(x) for x in self.beta_values)
        if not a:
            raise ValueError("a determining sequence needs at least alpha(1)")
        if len(a) != len(b):
            raise ValueError("alpha and beta must be given to the same order")
        object.__setattr__(self, "alpha_values", a)
        object.__setattr__(self, "beta_values", b)

    @classmethod
    def from_rule(cls, alpha: Callable[[int], Rational], K_max: int,
                  beta: Callable[[int], Rational] | None = None) -> "DeterminingSequence":
        a = tuple(Fraction(alpha(k)) for k in range(1, K_max + 1))
        b = None if beta is None else tuple(Fraction(beta(k)) for k in range(1, K_max + 1))
        return cls(a, b)

    @property
    def K_max(self) -> int:
        return len(self.alpha_values)

    @property
    def experimental(self) -> bool:
        """Non-tracial data (alpha ≠ beta); block readings are convention-dependent."""
        return self.alpha_values != self.beta_values

    def _get(self, values, k: int, name: str) -> Fraction:
        if k < 1:
            raise ValueError(f"{name}({k}) is undefined")
        if k > len(values):
            raise TruncationError(f"{name}({k}) requested beyond K_max={len(values)}")
        return values[k - 1]

    def alpha(self, k: int) -> Fraction:
        return self._get(self.alpha_values, k, "alpha")

    def beta(self, k: int) -> Fraction:
        return self._get(self.beta_values, k, "beta")

    def nonnegative(self) -> bool:
        return all(x >= 0 for x in self.alpha_values + self.beta_values)


def kappa_block(seq: DeterminingSequence, block_word: Sequence[bool]) -> Fraction:
    """Cumulant of one block given its star flags in position order."""
    size = len(block_word)
    if size < 1:
        raise ValueError("empty block")
    if size > 2 * seq.K_max:
        raise TruncationError(f"block of length {size} exceeds 2*K_max={2 * seq.K_max}")
    if size % 2:
        return Fraction(0)
    if any(x == y for x, y in zip(block_word, block_word[1:])):
        return Fraction(0)
    k = size // 2
    return seq.beta(k) if block_word[0] else seq.alpha(k)


def _flags(word) -> tuple[bool, ...]:
    if hasattr(word, "stars"):
        return tuple(word.stars)
    out = []
    for x in word:
        out.append(x[1] if isinstance(x, tuple) else bool(x))
    return tuple(out)


def kappa_pi(seq: DeterminingSequence, word, pi: Partition) -> Fraction:
    """Product of block cumulants of ``pi`` over a word (PatternWord, star flags or StarWord)."""
    stars = _flags(word)
    if pi.ground_size != len(stars):
        raise ValueError("partition does not match the word length")
    out = Fraction(1)
    for b in pi.blocks:
        out *= kappa_block(seq, [stars[x - 1] for x in b])
        if not out:
            return out
    return out


def _kappa_sum_chunk(seq: DeterminingSequence, stars, pis: list[Partition]) -> Fraction:
    return sum((kappa_pi(seq, stars, p) for p in pis), Fraction(0))


def _chunks(it, size=256):
    buf = []
    for x in it:
        buf.append(x)
        if len(buf) == size:
            yield buf
            buf = []
    if buf:
        yield buf


def moment_from_cumulants(seq: DeterminingSequence, n: int, m: int, jobs: int = 1,
                          ceiling: int | None = None) -> Fraction:
    """``φ[(aⁿ (a*)ⁿ)^m]`` as the sum of κ_π over NC*(n, m)."""
    if n * m > seq.K_max:
        raise TruncationError(f"n*m={n * m} exceeds K_max={seq.K_max}")
    stars = pattern(n, m).stars
    pis = enumerate_alternating_partitions(n, m, ceiling=ceiling)
    return exact_sum(partial(_kappa_sum_chunk, seq, stars), _chunks(pis), Fraction(0), jobs, 1)


def abs_cumulant_sum(seq: DeterminingSequence, n: int, m: int,
                     ceiling: int | None = None) -> Fraction:
    """``Σ_{π∈NC*(n,m)} |κ_π[a_{n,m}]|``."""
    if n * m > seq.K_max:
        raise TruncationError(f"n*m={n * m} exceeds K_max={seq.K_max}")
    stars = pattern(n, m).stars
    return sum((abs(kappa_pi(seq, stars, p))
                for p in enumerate_alternating_partitions(n, m, ceiling=ceiling)), Fraction(0))


# moments <-> cumulants ---------------------------------------------------

MomentFunctional = Callable[[StarWord], Fraction]


def as_star_word(word) -> StarWord:
    if hasattr(word, "stars"):
        return tuple(("1", s) for s in word.stars)
    out = []
    for x in word:
        if isinstance(x, tuple):
            out.append((str(x[0]), bool(x[1])))
        else:
            out.append(("1", bool(x)))
    return tuple(out)


def cumulants_from_moments(phi: MomentFunctional, word, pi: Partition,
                           mobius_method: str = "factorized") -> Fraction:
    """``κ_π[word] = Σ_{σ≤π} φ_σ[word]·μ(σ, π)``.

    ``word`` is a StarWord, a PatternWord or a plain list of star flags (read as
    a single-index word).  ``mobius_method`` selects the Möbius evaluation; the
    factorised form is the default because it is O(n) per σ.
    """
    w = as_star_word(word)
    if pi.ground_size != len(w):
        raise ValueError("partition does not match the word length")
    cache: dict[tuple[int, ...], Fraction] = {}

    def phi_block(b):
        if b not in cache:
            cache[b] = Fraction(phi(tuple(w[x - 1] for x in b)))
        return cache[b]

    total = Fraction(0)
    for sigma in interval(Partition.zero(len(w)), pi):
        val = Fraction(1)
        for b in sigma.blocks:
            val *= phi_block(b)
            if not val:
                break
        if val:
            total += val * mobius(sigma, pi, method=mobius_method)
    return total


def _family_lookup(family):
    if isinstance(family, DeterminingSequence):
        return lambda idx: family
    return lambda idx: family[idx]


def mixed_moment(family: Union[DeterminingSequence, Mapping[str, DeterminingSequence]],
                 w: StarWord) -> Fraction:
    """``φ(a_{w₁}^{ε₁} ⋯)`` for ∗-free R-diagonal elements indexed by the word's letters.

    Sums κ over non-crossing partitions whose blocks are single-index, even and
    alternating; all other partitions contribute zero.
    """
    w = as_star_word(w)
    if not w:
        return Fraction(1)
    if len(w) % 2:
        return Fraction(0)
    # every admissible block is balanced, so an unbalanced index admits no partition
    tally: dict[str, int] = {}
    for i, s in w:
        tally[i] = tally.get(i, 0) + (1 if s else -1)
    if any(tally.values()):
        return Fraction(0)
    get = _family_lookup(family)
    stars = [s for _, s in w]
    colors = [i for i, _ in w]
    total = Fraction(0)
    for pi in alternating_partitions(stars, colors):
        val = Fraction(1)
        for b in pi.blocks:
            val *= kappa_block(get(colors[b[0] - 1]), [stars[x - 1] for x in b])
            if not val:
                break
        total += val
    return total


def moment_functional(family) -> MomentFunctional:
    """Memoised :func:`mixed_moment` as a MomentFunctional."""
    cache: dict = {}

    def phi(w: StarWord) -> Fraction:
        key = as_star_word(w)
        if key not in cache:
            cache[key] = mixed_moment(family, key)
        return cache[key]

    return phi


# particle tensors --------------------------------------------------------

@dataclass(frozen=True)
class ParticleTensor:
    """Coefficients ``λ_w`` of ``T = Σ_w λ_w a_{w₁}⋯a_{wₙ}`` (finitely supported)."""

    n: int
    index_set: tuple[str, ...]
    coeffs: Mapping[tuple[str, ...], GaussianRational]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("particle tensors need n >= 1")
        idx = tuple(str(i) for i in self.index_set)
        if len(set(idx)) != len(idx):
            raise ValueError("index_set has duplicates")
        clean = {}
        for word, c in self.coeffs.items():
            word = tuple(str(i) for i in word)
            if len(word) != self.n:
                raise ValueError(f"word {word} does not have length {self.n}")
            if any(i not in idx for i in word):
                raise ValueError(f"word {word} uses indices outside {idx}")
            c = _gq(c)
            if c:
                clean[word] = clean.get(word, GaussianRational()) + c
        object.__setattr__(self, "index_set", idx)
        object.__setattr__(self, "coeffs", dict(sorted((w, c) for w, c in clean.items() if c)))

    def norm2_coeffs(self) -> Fraction:
        return sum((c.abs2() for c in self.coeffs.values()), Fraction(0))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "index_set": list(self.index_set),
            "coeffs": [{"word": list(w), "re": format_rational(c.re), "im": format_rational(c.im)}
                       for w, c in self.coeffs.items()],
        }

    @classmethod
    def from_json(cls, data) -> "ParticleTensor":
        if isinstance(data, str):
            data = json.loads(data)
        coeffs: dict = {}
        for entry in data["coeffs"]:
            w = tuple(str(i) for i in entry["word"])
            c = GaussianRational(parse_rational(entry.get("re", "0")),
                                 parse_rational(entry.get("im", "0")))
            coeffs[w] = coeffs.get(w, GaussianRational()) + c
        return cls(int(data["n"]), tuple(data["index_set"]), coeffs)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def two_norm(seq: DeterminingSequence, T: ParticleTensor) -> Fraction:
    """``‖T‖₂² = (Σ|λ_w|²)·α₁ⁿ`` (returned squared, exact)."""
    return T.norm2_coeffs() * seq.alpha(1) ** T.n


def _contract(n: int, m: int, T: ParticleTensor, pi: Partition) -> GaussianRational:
    """Σ over index assignments constant on the blocks of ``pi`` of
    ``Π λ_{i(ℓ)} · Π conj(λ_{j(ℓ)})``.

    Groups are visited left to right; each group's candidate words are looked
    up by the slots already fixed by earlier groups, so only consistent
    partial assignments are ever expanded.
    """
    own = {x: bi for bi, b in enumerate(pi.blocks) for x in b}
    # slot t of a plain group holds i_t; slot t of a starred group holds j_{n-1-t}
    groups = []
    for g in range(2 * m):
        base = g * n
        if g % 2 == 0:
            blocks = [own[base + 1 + t] for t in range(n)]
        else:
            blocks = [own[base + n - t] for t in range(n)]
        groups.append((g % 2 == 1, blocks))
    support = [(w, c) for w, c in T.coeffs.items()]
    seen: set[int] = set()
    plans = []
    for star, blocks in groups:
        known = [t for t in range(n) if blocks[t] in seen]
        fresh = [t for t in range(n) if blocks[t] not in seen]
        table: dict[tuple, list] = {}
        for w, c in support:
            # a block can appear only once per group, so no intra-group check is needed
            table.setdefault(tuple(w[t] for t in known), []).append(
                (w, c.conjugate() if star else c))
        plans.append((blocks, known, fresh, table))
        seen.update(blocks)

    assign: dict[int, str] = {}
    total_re, total_im = Fraction(0), Fraction(0)

    def rec(g: int, re: Fraction, im: Fraction):
        nonlocal total_re, total_im
        if g == len(plans):
            total_re += re
            total_im += im
            return
        blocks, known, fresh, table = plans[g]
        key = tuple(assign[blocks[t]] for t in known)
        for w, c in table.get(key, ()):
            for t in fresh:
                assign[blocks[t]] = w[t]
            rec(g + 1, re * c.re - im * c.im, re * c.im + im * c.re)
        for t in fresh:
            assign.pop(blocks[t], None)

    rec(0, Fraction(1), Fraction(0))
    return GaussianRational(total_re, total_im)


def _particle_chunk(seq: DeterminingSequence, T: ParticleTensor, n: int, m: int,
                    stars, pis: list[Partition]) -> GaussianRational:
    total = GaussianRational()
    for p in pis:
        k = kappa_pi(seq, stars, p)
        if k:
            total = total + _contract(n, m, T, p) * k
    return total


def particle_moment(seq: DeterminingSequence, T: ParticleTensor, m: int, jobs: int = 1,
                    ceiling: int | None = None) -> Fraction:
    """``‖T‖₂ₘ^{2m} = Σ_{π∈NC*(n,m)} κ_π[a_{n,m}]·S(π, T)`` with S the block contraction."""
    n = T.n
    if m < 1:
        raise ValueError("m must be >= 1")
    if n * m > seq.K_max:
        raise TruncationError(f"n*m={n * m} exceeds K_max={seq.K_max}")
    if not T.coeffs:
        return Fraction(0)
    stars = pattern(n, m).stars
    pis = enumerate_alternating_partitions(n, m, ceiling=ceiling)
    total = exact_sum(partial(_particle_chunk, seq, T, n, m, stars), _chunks(pis, 32),
                      GaussianRational(), jobs, 1)
    if total.im != 0:
        raise ArithmeticError(f"2m-th moment has non-zero imaginary part {total.im}")
    return total.re


def brute_force_particle_moment(seq: DeterminingSequence, T: ParticleTensor, m: int) -> Fraction:
    """Literal multinomial expansion of ``φ[(TT*)^m]`` over all support words.

    Each mixed moment is evaluated by summing κ_π·δ over *all* of NC(2nm)
    with δ checked block by block.  Exponential; meant as a test oracle.
    """
    from itertools import product

    from .partitions import enumerate_nc

    n = T.n
    support = list(T.coeffs.items())
    size = 2 * n * m
    all_nc = list(enumerate_nc(size, ceiling=size))
    total = GaussianRational()
    for choice in product(support, repeat=2 * m):
        coeff = GaussianRational(1)
        letters: list[tuple[str, bool]] = []
        for g, (w, c) in enumerate(choice):
            if g % 2 == 0:
                coeff = coeff * c
                letters.extend((i, False) for i in w)
            else:
                coeff = coeff * c.conjugate()
                letters.extend((i, True) for i in reversed(w))
        mom = Fraction(0)
        for pi in all_nc:
            val = Fraction(1)
            for b in pi.blocks:
                if len({letters[x - 1][0] for x in b}) > 1:
                    val = Fraction(0)
                    break
                val *= kappa_block(seq, [letters[x - 1][1] for x in b])
                if not val:
                    break
            mom += val
        total = total + coeff * mom
    if total.im != 0:
        raise ArithmeticError("non-real moment")
    return total.re
