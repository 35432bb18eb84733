"""Non-crossing partitions of {1..n}: canonical form, lattice order, Möbius function,
Catalan/Fuss-Catalan counts and multichains.

All enumerators are deterministic generators.  The block containing the smallest
unassigned element is chosen first, with candidate blocks in lexicographic order,
so every stream can be split by prefix and consumed independently.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_left
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import DEFAULT_NC_CEILING, SizeError, resolve_ceiling

Block = tuple[int, ...]


@dataclass(frozen=True)
class Partition:
    """A set partition of ``{1..ground_size}`` in canonical form.

    Blocks are strictly increasing tuples, ordered by their minimum, so two
    partitions are equal exactly when they have the same blocks.
    """

    ground_size: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        n = self.ground_size
        if n < 0:
            raise ValueError(f"ground size must be non-negative, got {n}")
        seen = []
        for b in self.blocks:
            if not b or any(x >= y for x, y in zip(b, b[1:])):
                raise ValueError(f"block {b} is empty or not strictly increasing")
            seen.extend(b)
        if sorted(seen) != list(range(1, n + 1)):
            raise ValueError(f"blocks {self.blocks} do not partition 1..{n}")
        if any(a[0] > b[0] for a, b in zip(self.blocks, self.blocks[1:])):
            raise ValueError("blocks are not ordered by their minimum")

    @classmethod
    def _trusted(cls, n: int, blocks: tuple[Block, ...]) -> "Partition":
        p = object.__new__(cls)
        object.__setattr__(p, "ground_size", n)
        object.__setattr__(p, "blocks", blocks)
        return p

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> "Partition":
        bs = [tuple(sorted(b)) for b in blocks]
        bs.sort(key=lambda b: b[0] if b else 0)
        if n is None:
            n = sum(len(b) for b in bs)
        return cls(n, tuple(bs))

    @classmethod
    def zero(cls, n: int) -> "Partition":
        return cls._trusted(n, tuple((i,) for i in range(1, n + 1)))

    @classmethod
    def one(cls, n: int) -> "Partition":
        return cls._trusted(n, (tuple(range(1, n + 1)),) if n else ())

    def owner(self) -> dict[int, Block]:
        """Map each element to the block containing it."""
        return {x: b for b in self.blocks for x in b}

    def same_block(self, p: int, q: int) -> bool:
        own = self.owner()
        return own[p] is own[q]

    @property
    def is_pairing(self) -> bool:
        return all(len(b) == 2 for b in self.blocks)

    def restrict(self, positions: Iterable[int]) -> list[Block]:
        keep = set(positions)
        out = []
        for b in self.blocks:
            r = tuple(x for x in b if x in keep)
            if r:
                out.append(r)
        return out

    # serialisation -------------------------------------------------------

    def to_text(self) -> str:
        return "{" + "|".join(",".join(map(str, b)) for b in self.blocks) + "}"

    @classmethod
    def from_text(cls, text: str) -> "Partition":
        s = text.strip()
        if not (s.startswith("{") and s.endswith("}")):
            raise ValueError(f"not a partition text form: {text!r}")
        body = s[1:-1].strip()
        if not body:
            return cls(0, ())
        blocks = [tuple(int(x) for x in part.split(",")) for part in body.split("|")]
        p = cls.from_blocks(blocks)
        if p.to_text() != s:
            raise ValueError(f"partition text {text!r} is not in canonical form")
        return p

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]] | str) -> "Partition":
        if isinstance(data, str):
            data = json.loads(data)
        p = cls.from_blocks(data)
        if p.to_json() != [list(b) for b in data]:
            raise ValueError("partition JSON is not in canonical form")
        return p

    def __str__(self):
        return self.to_text()


def pairing(pairs: Iterable[tuple[int, int]], n: int | None = None) -> Partition:
    """Build a partition from 2-element blocks, checking that every block is a pair."""
    p = Partition.from_blocks(pairs, n)
    if not p.is_pairing:
        raise ValueError(f"{p} is not a pair partition")
    return p


@dataclass(frozen=True)
class Multichain:
    """A weakly increasing sequence Φ₁ ≤ … ≤ Φₙ of non-crossing partitions of {1..m}."""

    m: int
    chain: tuple[Partition, ...]

    def __post_init__(self):
        if not self.chain:
            raise ValueError("a multichain needs at least one partition")
        for phi in self.chain:
            if phi.ground_size != self.m:
                raise ValueError(f"{phi} is not a partition of 1..{self.m}")
            if not is_noncrossing(phi):
                raise ValueError(f"{phi} is crossing")
        for lo, hi in zip(self.chain, self.chain[1:]):
            if not leq(lo, hi):
                raise ValueError(f"chain is not monotone: {lo} is not below {hi}")

    @classmethod
    def _trusted(cls, m: int, chain: tuple[Partition, ...]) -> "Multichain":
        mc = object.__new__(cls)
        object.__setattr__(mc, "m", m)
        object.__setattr__(mc, "chain", chain)
        return mc

    @property
    def length(self) -> int:
        return len(self.chain)

    def to_text(self) -> list[str]:
        return [p.to_text() for p in self.chain]


def is_noncrossing(p: Partition) -> bool:
    """True iff no ``a < b < c < d`` has ``a ~ c``, ``b ~ d`` in different blocks."""
    own = p.owner()
    last = {b: b[-1] for b in p.blocks}
    stack: list[Block] = []
    for x in range(1, p.ground_size + 1):
        b = own[x]
        if x == b[0]:
            if len(b) > 1:
                stack.append(b)
            continue
        if not stack or stack[-1] is not b:
            return False
        if x == last[b]:
            stack.pop()
    return True


def catalan(n: int) -> int:
    """``(1/n)·binom(2n, n-1)``, with ``catalan(0) = 1``."""
    if n < 0:
        raise ValueError("catalan needs n >= 0")
    if n == 0:
        return 1
    return math.comb(2 * n, n - 1) // n


def fuss_catalan(n: int, m: int) -> int:
    """Number of length-n multichains in NC(m): ``(1/m)·binom(m(n+1), m-1)``."""
    if n < 1 or m < 1:
        raise ValueError("fuss_catalan needs n, m >= 1")
    num = math.comb(m * (n + 1), m - 1)
    assert num % m == 0
    return num // m


def leq(sigma: Partition, pi: Partition) -> bool:
    """Reverse-refinement order: every block of ``sigma`` lies inside a block of ``pi``."""
    if sigma.ground_size != pi.ground_size:
        raise ValueError(
            f"ground sizes differ: {sigma.ground_size} vs {pi.ground_size}")
    own = pi.owner()
    return all(all(own[x] is own[b[0]] for x in b) for b in sigma.blocks)


# enumeration kernel ------------------------------------------------------

def _lex_subsets(items: Sequence[Block]) -> Iterator[list[Block]]:
    yield []
    for i, x in enumerate(items):
        for rest in _lex_subsets(items[i + 1:]):
            yield [x] + rest


def _split(segment: Block, block: Block, owner: dict[int, Block]) -> list[Block] | None:
    gaps: list[list[int]] = [[] for _ in block]
    chosen = set(block)
    for x in segment:
        if x in chosen:
            continue
        own = owner[x]
        g = bisect_left(block, own[0]) - 1
        if x == own[0] and bisect_left(block, own[-1]) - 1 != g:
            return None
        gaps[g].append(x)
    return [tuple(g) for g in gaps if g]


def _coarsenings(segments: list[Block], owner: dict[int, Block],
                 acc: list[Block]) -> Iterator[list[Block]]:
    if not segments:
        yield acc
        return
    seg, rest = segments[0], segments[1:]
    first = owner[seg[0]]
    others: list[Block] = []
    seen = {first}
    for x in seg:
        b = owner[x]
        if b not in seen:
            seen.add(b)
            others.append(b)
    for chosen in _lex_subsets(others):
        block = tuple(sorted(first + sum(chosen, ())))
        gaps = _split(seg, block, owner)
        if gaps is None:
            continue
        yield from _coarsenings(gaps + rest, owner, acc + [block])


def _finish(n: int, blocks: list[Block]) -> Partition:
    return Partition._trusted(n, tuple(sorted(blocks)))


def enumerate_nc(n: int, ceiling: int | None = None) -> Iterator[Partition]:
    """Stream NC(n); ``catalan(n)`` elements in a fixed order."""
    limit = resolve_ceiling(ceiling, DEFAULT_NC_CEILING)
    if n < 1:
        raise ValueError("enumerate_nc needs n >= 1")
    if n > limit:
        raise SizeError(f"NC({n}) exceeds the enumeration ceiling {limit}")
    owner = {i: (i,) for i in range(1, n + 1)}
    for blocks in _coarsenings([tuple(range(1, n + 1))], owner, []):
        yield _finish(n, blocks)


def interval(sigma: Partition, pi: Partition) -> Iterator[Partition]:
    """All non-crossing τ with ``sigma ≤ τ ≤ pi``; both ends are included."""
    if not leq(sigma, pi):
        raise ValueError(f"{sigma} is not below {pi}")
    owner = sigma.owner()
    for blocks in _coarsenings(list(pi.blocks), owner, []):
        yield _finish(sigma.ground_size, blocks)


# Möbius function ---------------------------------------------------------

@lru_cache(maxsize=None)
def _mobius_rec(sigma: Partition, pi: Partition) -> int:
    if sigma == pi:
        return 1
    total = 0
    for tau in interval(sigma, pi):
        if tau != pi:
            total += _mobius_rec(sigma, tau)
    return -total


def _kreweras_cycle_lengths(blocks: list[Block]) -> list[int]:
    elems = sorted(x for b in blocks for x in b)
    k = len(elems)
    idx = {x: i for i, x in enumerate(elems)}
    nxt = [0] * k
    for b in blocks:
        for a, c in zip(b, b[1:] + b[:1]):
            nxt[idx[a]] = idx[c]
    inv = [0] * k
    for i, j in enumerate(nxt):
        inv[j] = i
    perm = [inv[(i + 1) % k] for i in range(k)]
    lengths, seen = [], [False] * k
    for i in range(k):
        if not seen[i]:
            c, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                c += 1
            lengths.append(c)
    return lengths


def mobius_factorized(sigma: Partition, pi: Partition) -> int:
    """Möbius function via the Kreweras factorisation of ``[sigma, pi]``.

    Each block W of ``pi`` contributes ``μ(0, K(sigma|W))``, a product of signed
    Catalan numbers over the blocks of the Kreweras complement.
    """
    if not leq(sigma, pi):
        raise ValueError(f"{sigma} is not below {pi}")
    out = 1
    for w in pi.blocks:
        for size in _kreweras_cycle_lengths(sigma.restrict(w)):
            out *= (-1) ** (size - 1) * catalan(size - 1)
    return out


def mobius(sigma: Partition, pi: Partition, method: str = "recursive") -> int:
    """Möbius function μ(σ, π) of the lattice NC(n).

    The default is the plain poset recursion ``μ(σ,π) = -Σ_{σ≤τ<π} μ(σ,τ)``,
    memoised on ``(σ, π)``.  ``method="factorized"`` uses the Kreweras
    product formula instead; the two are cross-checked in the test-suite.
    """
    if sigma.ground_size != pi.ground_size:
        raise ValueError("ground sizes differ")
    if not (is_noncrossing(sigma) and is_noncrossing(pi)):
        raise ValueError("mobius is defined on non-crossing partitions")
    if not leq(sigma, pi):
        raise ValueError(f"{sigma} is not below {pi}")
    if method == "recursive":
        return _mobius_rec(sigma, pi)
    if method == "factorized":
        return mobius_factorized(sigma, pi)
    raise ValueError(f"unknown method {method!r}")


def clear_caches() -> None:
    _mobius_rec.cache_clear()


# multichains -------------------------------------------------------------

def _chains_above(start: Partition, length: int) -> Iterator[tuple[Partition, ...]]:
    if length == 0:
        yield ()
        return
    top = Partition.one(start.ground_size)
    for nxt in interval(start, top):
        for rest in _chains_above(nxt, length - 1):
            yield (nxt,) + rest


def enumerate_multichains(n: int, m: int, ceiling: int | None = None) -> Iterator[Multichain]:
    """Stream all multichains Φ₁ ≤ … ≤ Φₙ in NC(m); there are ``fuss_catalan(n, m)``."""
    limit = resolve_ceiling(ceiling, DEFAULT_NC_CEILING)
    if n < 1 or m < 1:
        raise ValueError("enumerate_multichains needs n, m >= 1")
    if m > limit or n * m > 2 * limit:
        raise SizeError(f"multichains ({n}, {m}) exceed the enumeration ceiling {limit}")
    for first in enumerate_nc(m, ceiling=limit):
        for rest in _chains_above(first, n - 1):
            yield Multichain._trusted(m, (first,) + rest)
