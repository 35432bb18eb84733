import itertools
import json
import random

import pytest
from hypothesis import given, strategies as st

from freehaag.errors import SizeError
from freehaag.partitions import (Multichain, Partition, catalan, enumerate_multichains,
                                 enumerate_nc, fuss_catalan, interval, is_noncrossing, leq,
                                 mobius, mobius_factorized, pairing)

from strategies import nc_partitions, set_partitions


def P(*blocks):
    return Partition.from_blocks(blocks)


def brute_set_partitions(n):
    """All set partitions of 1..n via restricted growth strings."""
    def rgs(prefix, k):
        if len(prefix) == n:
            yield prefix
            return
        for v in range(k + 1):
            yield from rgs(prefix + [v], max(k, v + 1))
    for s in rgs([], 0):
        groups = {}
        for pos, v in enumerate(s, start=1):
            groups.setdefault(v, []).append(pos)
        yield Partition.from_blocks(groups.values(), n)


def crossing_brute(p):
    own = {x: i for i, b in enumerate(p.blocks) for x in b}
    n = p.ground_size
    for a, b, c, d in itertools.combinations(range(1, n + 1), 4):
        if own[a] == own[c] and own[b] == own[d] and own[a] != own[b]:
            return True
    return False


class TestPartitionType:
    def test_canonical_form_sorts_blocks(self):
        p = Partition.from_blocks([(3, 2), (4, 1)])
        assert p.blocks == ((1, 4), (2, 3))

    @pytest.mark.parametrize("blocks, n", [([(1, 2), (2, 3)], 3), ([(1,)], 2), ([(2, 1)], None)])
    def test_rejects_bad_blocks(self, blocks, n):
        with pytest.raises(ValueError):
            Partition(n or 2, tuple(blocks))

    def test_text_round_trip(self):
        p = P((1, 4), (2, 3))
        assert p.to_text() == "{1,4|2,3}"
        assert Partition.from_text("{1,4|2,3}") == p

    def test_non_canonical_text_rejected(self):
        with pytest.raises(ValueError):
            Partition.from_text("{2,3|1,4}")

    @given(set_partitions())
    def test_serialisations_round_trip(self, p):
        assert Partition.from_text(p.to_text()) == p
        assert Partition.from_json(json.dumps(p.to_json())) == p
        assert Partition.from_text(str(p)).to_text() == p.to_text()

    def test_pairing_requires_pairs(self):
        assert pairing([(1, 4), (2, 3)]).is_pairing
        with pytest.raises(ValueError):
            pairing([(1, 2, 3)])


class TestNonCrossing:
    def test_examples(self):
        assert not is_noncrossing(P((1, 3), (2, 4)))
        assert is_noncrossing(P((1, 4), (2, 3)))
        assert is_noncrossing(Partition.one(6))

    @given(set_partitions(n_max=9))
    def test_agrees_with_quadruple_search(self, p):
        assert is_noncrossing(p) == (not crossing_brute(p))


class TestCounting:
    def test_catalan_values(self):
        assert [catalan(k) for k in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]

    def test_fuss_catalan_values(self):
        assert fuss_catalan(3, 4) == 140
        assert all(fuss_catalan(n, 1) == 1 for n in range(1, 10))
        assert all(fuss_catalan(1, m) == catalan(m) for m in range(1, 15))

    def test_catalan_recurrence(self):
        for n in range(1, 30):
            assert catalan(n) == sum(catalan(i) * catalan(n - 1 - i) for i in range(n))


class TestEnumeration:
    @pytest.mark.parametrize("n", range(1, 11))
    def test_counts_match_catalan(self, n):
        items = list(enumerate_nc(n))
        assert len(items) == catalan(n)
        assert len(set(items)) == len(items)

    @pytest.mark.parametrize("n", range(1, 8))
    def test_equals_filtered_set_partitions(self, n):
        brute = {p for p in brute_set_partitions(n) if not crossing_brute(p)}
        assert set(enumerate_nc(n)) == brute

    def test_order_is_lexicographic_in_block_of_one(self):
        assert [p.to_text() for p in enumerate_nc(3)] == [
            "{1|2|3}", "{1|2,3}", "{1,2|3}", "{1,2,3}", "{1,3|2}"]

    def test_order_is_deterministic(self):
        assert list(enumerate_nc(7)) == list(enumerate_nc(7))

    def test_ceiling(self, monkeypatch):
        with pytest.raises(SizeError):
            list(enumerate_nc(17))
        with pytest.raises(SizeError):
            list(enumerate_nc(5, ceiling=4))
        monkeypatch.setenv("FREEHAAG_CEILING", "3")
        with pytest.raises(SizeError):
            list(enumerate_nc(4))

    @given(st.data())
    def test_interval_is_the_filtered_lattice(self, data):
        n = data.draw(st.integers(1, 7))
        lattice = list(enumerate_nc(n))
        sigma = data.draw(st.sampled_from(lattice))
        pi = data.draw(st.sampled_from([p for p in lattice if leq(sigma, p)]))
        expected = [t for t in lattice if leq(sigma, t) and leq(t, pi)]
        assert sorted(interval(sigma, pi), key=str) == sorted(expected, key=str)

    @given(nc_partitions(n_max=8))
    def test_generated_partitions_are_enumerated(self, p):
        assert p in set(enumerate_nc(p.ground_size))


class TestOrder:
    def test_examples(self):
        assert leq(Partition.zero(4), P((1, 3), (2,), (4,)))
        assert not leq(Partition.one(4), P((1, 2), (3, 4)))
        assert leq(P((1, 2), (3,), (4,)), P((1, 2, 4), (3,)))

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            leq(Partition.zero(3), Partition.zero(4))

    @pytest.mark.parametrize("n", range(1, 7))
    def test_partial_order_axioms(self, n):
        lat = list(enumerate_nc(n))
        for a in lat:
            assert leq(a, a)
        for a, b in itertools.product(lat, repeat=2):
            if leq(a, b) and leq(b, a):
                assert a == b
        if n <= 5:
            for a, b, c in itertools.product(lat, repeat=3):
                if leq(a, b) and leq(b, c):
                    assert leq(a, c)


class TestMobius:
    def test_examples(self):
        assert mobius(Partition.zero(3), Partition.one(3)) == 2
        assert mobius(Partition.zero(4), Partition.one(4)) == -5
        p = P((1, 4), (2, 3))
        assert mobius(p, p) == 1

    @pytest.mark.parametrize("n", range(1, 10))
    def test_bottom_to_top(self, n):
        assert mobius(Partition.zero(n), Partition.one(n)) == (-1) ** (n - 1) * catalan(n - 1)

    def test_rejects_unordered_pair(self):
        with pytest.raises(ValueError):
            mobius(Partition.one(3), Partition.zero(3))
        with pytest.raises(ValueError):
            mobius(P((1, 3), (2, 4)), Partition.one(4))

    def test_zeta_inversion(self):
        rng = random.Random(5)
        for _ in range(50):
            n = rng.randint(1, 8)
            lat = list(enumerate_nc(n))
            sigma = rng.choice(lat)
            pi = rng.choice([p for p in lat if leq(sigma, p)])
            total = sum(mobius(tau, pi) for tau in interval(sigma, pi))
            assert total == (1 if sigma == pi else 0)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_bound_against_top(self, n):
        top = Partition.one(n)
        for s in enumerate_nc(n):
            assert abs(mobius_factorized(s, top)) <= 4 ** (n - 1)

    @pytest.mark.parametrize("n", range(1, 8))
    def test_factorised_agrees_with_recursion(self, n):
        lat = list(enumerate_nc(n))
        rng = random.Random(n)
        pairs = [(s, p) for s in lat for p in lat if leq(s, p)]
        for s, p in rng.sample(pairs, min(len(pairs), 300)):
            assert mobius(s, p) == mobius(s, p, method="factorized")

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            mobius(Partition.zero(2), Partition.one(2), method="magic")


class TestMultichains:
    def test_examples(self):
        assert len(list(enumerate_multichains(2, 2))) == 3
        assert len(list(enumerate_multichains(3, 4))) == 140
        assert [c.chain[0] for c in enumerate_multichains(1, 4)] == list(enumerate_nc(4))

    @pytest.mark.parametrize("n, m", [(n, m) for n in range(1, 13) for m in range(1, 13)
                                      if n * m <= 12])
    def test_counts(self, n, m):
        chains = list(enumerate_multichains(n, m))
        assert len(chains) == fuss_catalan(n, m)
        assert len(set(chains)) == len(chains)

    def test_validation(self):
        lo, hi = Partition.zero(3), Partition.one(3)
        Multichain(3, (lo, hi))
        with pytest.raises(ValueError):
            Multichain(3, (hi, lo))
        with pytest.raises(ValueError):
            Multichain(4, (P((1, 3), (2, 4)),))
