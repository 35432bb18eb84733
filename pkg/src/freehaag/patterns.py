"""The alternating word ``(aⁿ (a*)ⁿ)^m`` and the partition families built on it.

Positions run over ``1..2nm``.  The word consists of ``m`` repetitions of a
group of ``n`` plain letters followed by a group of ``n`` starred letters.
Plain groups carry labels ``n, n-1, …, 1`` and starred groups ``1, …, n``;
``c(ℓ, j)`` / ``c*(ℓ, j)`` address the letter with label ``j`` in the ℓ-th
plain / starred group.

Three families are enumerated directly by backtracking on the smallest
unmatched position:

* star pairings: non-crossing pairings joining a plain letter to a starred one;
* alternating partitions: non-crossing partitions whose blocks have even size
  and alternate plain/starred when read left to right;
* no-intrablock pairings: non-crossing pairings never joining two letters of
  the same ``n``-group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DEFAULT_PATTERN_CEILING, DEFAULT_STAR_PAIRING_CEILING, SizeError, resolve_ceiling
from .partitions import Block, Partition, is_noncrossing


@dataclass(frozen=True)
class Letter:
    position: int
    group: int
    label: int
    star: bool


@dataclass(frozen=True)
class PatternWord:
    n: int
    m: int
    letters: tuple[Letter, ...]

    @property
    def size(self) -> int:
        return 2 * self.n * self.m

    @property
    def stars(self) -> tuple[bool, ...]:
        return tuple(l.star for l in self.letters)

    def address(self, position: int) -> tuple[int, int, bool]:
        """``(group, label, star)`` of a position."""
        l = self.letters[position - 1]
        return l.group, l.label, l.star

    def position(self, group: int, label: int, star: bool) -> int:
        n = self.n
        if not (1 <= group <= self.m and 1 <= label <= n):
            raise ValueError(f"bad address ({group}, {label}, {star}) for n={n}, m={self.m}")
        base = 2 * (group - 1) * n
        return base + n + label if star else base + n + 1 - label

    def n_group(self, position: int) -> int:
        """Index ``0..2m-1`` of the length-n run containing ``position``."""
        return (position - 1) // self.n

    def to_symbols(self) -> list[str]:
        return [f"a{l.label}*" if l.star else f"a{l.label}" for l in self.letters]


def pattern(n: int, m: int) -> PatternWord:
    if n < 1 or m < 1:
        raise ValueError("pattern needs n, m >= 1")
    letters = []
    pos = 1
    for g in range(1, m + 1):
        for j in range(n, 0, -1):
            letters.append(Letter(pos, g, j, False))
            pos += 1
        for j in range(1, n + 1):
            letters.append(Letter(pos, g, j, True))
            pos += 1
    return PatternWord(n, m, tuple(letters))


@dataclass(frozen=True)
class StarPairing:
    """A non-crossing pairing of ``pattern(n, m)`` joining plain to starred letters."""

    n: int
    m: int
    pairing: Partition

    def __post_init__(self):
        word = pattern(self.n, self.m)
        if self.pairing.ground_size != word.size:
            raise ValueError("pairing size does not match the pattern")
        if not self.pairing.is_pairing:
            raise ValueError(f"{self.pairing} is not a pair partition")
        if not is_noncrossing(self.pairing):
            raise ValueError(f"{self.pairing} is crossing")
        for p, q in self.pairing.blocks:
            if word.letters[p - 1].star == word.letters[q - 1].star:
                raise ValueError(f"pair ({p},{q}) joins two letters of the same kind")

    @classmethod
    def _trusted(cls, n: int, m: int, pairing: Partition) -> "StarPairing":
        sp = object.__new__(cls)
        object.__setattr__(sp, "n", n)
        object.__setattr__(sp, "m", m)
        object.__setattr__(sp, "pairing", pairing)
        return sp

    def partner(self) -> dict[int, int]:
        out = {}
        for p, q in self.pairing.blocks:
            out[p] = q
            out[q] = p
        return out

    def to_text(self) -> str:
        return f"({self.n},{self.m}) {self.pairing.to_text()}"

    @classmethod
    def from_text(cls, text: str) -> "StarPairing":
        head, _, body = text.strip().partition(" ")
        n, m = (int(x) for x in head.strip("()").split(","))
        return cls(n, m, Partition.from_text(body))

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "pairing": self.pairing.to_text()}


def _check_size(n: int, m: int, ceiling: int | None,
                default: int = DEFAULT_PATTERN_CEILING) -> None:
    if n < 1 or m < 1:
        raise ValueError("need n, m >= 1")
    limit = resolve_ceiling(ceiling, default)
    if 2 * n * m > limit:
        raise SizeError(f"word length {2 * n * m} exceeds the enumeration ceiling {limit}")


# pairing backtracker -----------------------------------------------------

def _pairings(segments: list[Block], allowed, balanced, acc: list[Block]) -> Iterator[list[Block]]:
    if not segments:
        yield acc
        return
    seg, rest = segments[0], segments[1:]
    p = seg[0]
    for i in range(1, len(seg), 2):
        q = seg[i]
        if not allowed(p, q):
            continue
        inner, outer = seg[1:i], seg[i + 1:]
        if not (balanced(inner) and balanced(outer)):
            continue
        nxt = [s for s in (inner, outer) if s]
        yield from _pairings(nxt + rest, allowed, balanced, acc + [(p, q)])


def _star_balance(stars: Sequence[bool]):
    def balanced(seg: Block) -> bool:
        s = sum(1 for x in seg if stars[x - 1])
        return 2 * s == len(seg)
    return balanced


def enumerate_star_pairings(n: int, m: int, ceiling: int | None = None) -> Iterator[StarPairing]:
    """Stream NC₂*(n, m).  Every pair is checked to join equal labels."""
    _check_size(n, m, ceiling, DEFAULT_STAR_PAIRING_CEILING)
    word = pattern(n, m)
    stars = word.stars
    labels = [l.label for l in word.letters]
    size = word.size

    def allowed(p, q):
        return stars[p - 1] != stars[q - 1]

    for pairs in _pairings([tuple(range(1, size + 1))], allowed, _star_balance(stars), []):
        for p, q in pairs:
            if labels[p - 1] != labels[q - 1]:
                raise AssertionError(f"star pairing joins labels {labels[p-1]} and {labels[q-1]}")
        yield StarPairing._trusted(n, m, Partition._trusted(size, tuple(sorted(pairs))))


def enumerate_no_intrablock_pairings(n: int, m: int,
                                     ceiling: int | None = None) -> Iterator[Partition]:
    """Stream 𝒯(n, m): non-crossing pairings with no pair inside one n-group."""
    _check_size(n, m, ceiling)
    size = 2 * n * m

    def allowed(p, q):
        return (p - 1) // n != (q - 1) // n

    def balanced(seg):
        return len(seg) % 2 == 0

    for pairs in _pairings([tuple(range(1, size + 1))], allowed, balanced, []):
        yield Partition._trusted(size, tuple(sorted(pairs)))


# alternating partitions --------------------------------------------------

def _alternating(segments: list[Block], stars: Sequence[bool], colors: Sequence,
                 acc: list[Block]) -> Iterator[list[Block]]:
    if not segments:
        yield acc
        return
    seg, rest = segments[0], segments[1:]
    p = seg[0]
    color = colors[p - 1]

    def balanced(part: Sequence[int]) -> bool:
        tally: dict = {}
        for x in part:
            key = colors[x - 1]
            tally[key] = tally.get(key, 0) + (1 if stars[x - 1] else -1)
        return not any(tally.values())

    # grow the block of p left to right: block[-1] -> q needs the gap between balanced
    def grow(block: list[int], gaps: list[Block], start: int):
        if len(block) % 2 == 0:
            tail = seg[start:]
            if balanced(tail):
                nxt = [g for g in gaps if g] + ([tuple(tail)] if tail else [])
                yield block, nxt
        want = not stars[block[-1] - 1]
        for i in range(start, len(seg)):
            q = seg[i]
            if stars[q - 1] != want or colors[q - 1] != color:
                continue
            gap = seg[start:i]
            if len(gap) % 2 or not balanced(gap):
                continue
            yield from grow(block + [q], gaps + [tuple(gap)], i + 1)

    for block, nxt in grow([p], [], 1):
        yield from _alternating(nxt + rest, stars, colors, acc + [tuple(block)])


def alternating_partitions(stars: Sequence[bool], colors: Sequence | None = None) -> Iterator[Partition]:
    """Non-crossing partitions of a starred word whose blocks are even, alternating
    and (when ``colors`` is given) single-coloured."""
    size = len(stars)
    if colors is None:
        colors = [0] * size
    if size == 0:
        yield Partition(0, ())
        return
    for blocks in _alternating([tuple(range(1, size + 1))], list(stars), list(colors), []):
        yield Partition._trusted(size, tuple(sorted(blocks)))


def enumerate_alternating_partitions(n: int, m: int,
                                     ceiling: int | None = None) -> Iterator[Partition]:
    """Stream NC*(n, m)."""
    _check_size(n, m, ceiling)
    yield from alternating_partitions(pattern(n, m).stars)


def is_alternating(block: Sequence[int], stars: Sequence[bool]) -> bool:
    if len(block) % 2:
        return False
    flags = [stars[x - 1] for x in block]
    return all(a != b for a, b in zip(flags, flags[1:]))
