"""Bijection between star pairings NC₂*(n, m) and length-n multichains in NC(m).

``phi_map`` sends a star pairing to ``(Φ₁, …, Φₙ)`` where Φⱼ groups together
the ``m`` columns linked through label-``j`` pairs (each plain letter c(k, j)
identified with its starred twin c*(k, j)).  ``q_map`` rebuilds the pairing
by "fattening" each block of Φⱼ.
"""

from __future__ import annotations

from .partitions import Multichain, Partition, is_noncrossing, leq
from .patterns import PatternWord, StarPairing, pattern


def _validated_star_pairing(pi: StarPairing) -> tuple[PatternWord, dict[int, int]]:
    word = pattern(pi.n, pi.m)
    partner = pi.partner()
    for p, q in pi.pairing.blocks:
        lp, lq = word.letters[p - 1], word.letters[q - 1]
        if lp.star == lq.star or lp.label != lq.label:
            raise ValueError(f"pair ({p},{q}) is not a label-preserving star pair")
    return word, partner


def phi_map(pi: StarPairing) -> Multichain:
    """Forward map: star pairing -> multichain (Φ₁ ≤ … ≤ Φₙ)."""
    if not isinstance(pi, StarPairing):
        raise ValueError("phi_map expects a StarPairing")
    word, partner = _validated_star_pairing(pi)
    n, m = pi.n, pi.m
    chain = []
    for j in range(1, n + 1):
        parent = list(range(m + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for k in range(1, m + 1):
            q = partner[word.position(k, j, False)]
            k2 = word.letters[q - 1].group
            a, b = find(k), find(k2)
            if a != b:
                parent[max(a, b)] = min(a, b)
        comps: dict[int, list[int]] = {}
        for k in range(1, m + 1):
            comps.setdefault(find(k), []).append(k)
        chain.append(Partition._trusted(m, tuple(sorted(tuple(v) for v in comps.values()))))
    for phi in chain:
        assert is_noncrossing(phi), f"Φ {phi} is crossing"
    for lo, hi in zip(chain, chain[1:]):
        assert leq(lo, hi), f"chain not monotone at {lo} -> {hi}"
    return Multichain._trusted(m, tuple(chain))


def q_map(chain: Multichain, check: bool = True) -> StarPairing:
    """Inverse ("fattening") map: multichain -> star pairing.

    For each block ``{k₁ < … < k_r}`` of Φⱼ the pairs are
    ``c(k₁,j)~c*(k_r,j)`` and ``c(k_i,j)~c*(k_{i-1},j)`` for ``i ≥ 2``.
    With ``check`` the result is re-validated as a member of NC₂*(n, m).
    """
    if not isinstance(chain, Multichain):
        raise ValueError("q_map expects a Multichain")
    for lo, hi in zip(chain.chain, chain.chain[1:]):
        if not leq(lo, hi):
            raise ValueError(f"chain is not monotone: {lo} is not below {hi}")
    n, m = chain.length, chain.m
    word = pattern(n, m)
    pairs = []
    for j, phi in enumerate(chain.chain, start=1):
        for block in phi.blocks:
            pairs.append((word.position(block[0], j, False), word.position(block[-1], j, True)))
            for prev, cur in zip(block, block[1:]):
                pairs.append((word.position(cur, j, False), word.position(prev, j, True)))
    blocks = tuple(sorted(tuple(sorted(p)) for p in pairs))
    part = Partition._trusted(word.size, blocks)
    if check:
        return StarPairing(n, m, part)
    return StarPairing._trusted(n, m, part)


def connectedness(pi: StarPairing, j: int, k: int, star: bool) -> set[int]:
    """Columns reachable from column ``k`` along label-``j`` pairs.

    A plain start walks ``c(k,j) -> c*(k₁,j) ~ c(k₁,j) -> c*(k₂,j) …`` and
    requires ``k₁ > k`` (initially increasing); a starred start walks the other
    way from ``c*(k,j)`` and requires ``k₁ < k``.  ``k`` itself is excluded.

    Every reached ``k' > k`` must be reached along a strictly monotone column
    sequence (decreasing for a plain start, increasing for a starred one);
    this is asserted.
    """
    word, partner = _validated_star_pairing(pi)
    if not (1 <= j <= pi.n and 1 <= k <= pi.m):
        raise ValueError(f"bad address j={j}, k={k}")
    out: set[int] = set()
    cur = k
    path: list[int] = []
    while True:
        q = partner[word.position(cur, j, star)]
        nxt = word.letters[q - 1].group
        if not path:
            if (not star and nxt <= k) or (star and nxt >= k):
                return out
        if nxt == k:
            break
        path.append(nxt)
        out.add(nxt)
        cur = nxt
    for i, kp in enumerate(path):
        if kp > k:
            seq = path[: i + 1]
            if not star:
                ok = all(a > b for a, b in zip(seq, seq[1:]))
            else:
                ok = all(a < b for a, b in zip(seq, seq[1:]))
            assert ok, f"non-monotone connecting sequence {seq} from column {k}"
    return out
