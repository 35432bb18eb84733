import json
from fractions import Fraction as F

import pytest

from freehaag.errors import CapabilityError
from freehaag.models import (RDiagonalModel, b_model, builtin_model, chebyshev_moment_oracle,
                             chebyshev_polynomial, circular, cumulant_growth_bound,
                             dominating_model, dominating_parameters, free_group_moment_oracle,
                             haar_unitary, load_model, save_model)
from freehaag.cumulants import DeterminingSequence, abs_cumulant_sum, moment_from_cumulants
from freehaag.partitions import catalan
from freehaag.patterns import enumerate_no_intrablock_pairings


def w(*letters):
    return tuple((str(i), s) for i, s in letters)


class TestBuiltins:
    def test_circular(self):
        c = circular()
        assert c.seq.alpha(1) == 1 and c.seq.alpha(3) == 0
        assert c.op_norm.value == 2 and c.op_norm.exact
        assert c.two_norm_sq == 1

    def test_haar(self):
        h = haar_unitary()
        assert [h.seq.alpha(k) for k in (1, 2, 4)] == [1, -1, -5]
        assert all(h.seq.alpha(k) == (-1) ** (k - 1) * catalan(k - 1) for k in range(1, 33))
        assert h.op_norm.value == 1

    def test_b_model(self):
        b = b_model(1, 1)
        assert all(b.seq.alpha(k) == 1 for k in range(1, 33))
        assert b.two_norm_sq == 1
        assert b_model(F(1, 4), 2).seq.alpha(2) == 4
        assert not b.op_norm.exact

    def test_b_model_bound_is_rounded_up(self):
        for g, l in [(1, 1), (F(1, 4), 2), (3, F(1, 7))]:
            b = b_model(g, l)
            exact_sq_lower = 4 * F(l) ** 2  # (2λ)² ≤ bound² always
            assert b.op_norm.value ** 2 >= exact_sq_lower
            assert float(b.op_norm.value) >= 2 * float(l) * (1 + (float(g) / 2) ** 0.5) ** 2

    def test_b_model_validation(self):
        with pytest.raises(ValueError):
            b_model(0, 1)

    def test_builtin_lookup(self):
        assert builtin_model("haar").name == "haar"
        assert builtin_model("b(1/4,2)").seq.alpha(2) == 4
        with pytest.raises(KeyError):
            builtin_model("poisson")

    def test_inconsistent_model_rejected(self):
        with pytest.raises(ValueError):
            RDiagonalModel("x", DeterminingSequence((2,)), F(1))


class TestDomination:
    def test_haar_parameters(self):
        p = dominating_parameters(haar_unitary())
        assert p.lam_sq == 256 ** 2 and p.gamma == F(1, 65536)
        b = dominating_model(haar_unitary())
        assert b.seq.alpha(1) == 1
        assert b.seq.alpha(2) == 65536

    @pytest.mark.parametrize("a", [haar_unitary(), circular(), b_model(F(1, 2), F(3, 2))],
                             ids=["haar", "circular", "b"])
    def test_dominates(self, a):
        b = dominating_model(a)
        assert b.two_norm_sq == a.two_norm_sq
        for k in range(2, a.seq.K_max + 1):
            bound = F(1, 2) * (16 * a.op_norm.value) ** (2 * k)
            assert b.seq.alpha(k) >= bound >= abs(a.seq.alpha(k))

    def test_cumulant_sums_are_dominated(self):
        a = haar_unitary()
        b = dominating_model(a)
        for n, m in [(n, m) for n in range(1, 7) for m in range(1, 7) if 2 * n * m <= 12]:
            assert abs_cumulant_sum(a.seq, n, m) <= moment_from_cumulants(b.seq, n, m)

    def test_needs_operator_norm(self):
        a = RDiagonalModel("bare", DeterminingSequence((1, 0)), F(1))
        with pytest.raises(CapabilityError):
            dominating_model(a)


class TestGrowthBound:
    @pytest.mark.parametrize("a", [haar_unitary(), circular(), dominating_model(haar_unitary())],
                             ids=["haar", "circular", "dominating"])
    def test_passes(self, a):
        assert cumulant_growth_bound(a, 4).passed

    def test_detects_violation(self):
        bad = RDiagonalModel("bad", DeterminingSequence((1, 10 ** 6)), F(1), None)
        bad = RDiagonalModel("bad", bad.seq, F(1), haar_unitary().op_norm)
        rep = cumulant_growth_bound(bad, 2)
        assert not rep.passed
        assert rep.to_json()["verdict"] == "fail"


class TestModelFiles:
    def test_round_trip(self, tmp_path):
        for i, m in enumerate((circular(4), haar_unitary(5), b_model(F(1, 3), 2, 4))):
            path = tmp_path / f"model{i}.json"
            save_model(m, path)
            assert load_model(path) == m

    def test_beta_defaults_to_alpha(self):
        m = RDiagonalModel.from_json(json.dumps(
            {"name": "x", "alpha": ["1", "-1/2"], "two_norm_sq": "1", "op_norm": {"value": "3/2"}}))
        assert m.seq.beta(2) == F(-1, 2) and not m.seq.experimental

    def test_upper_bound_tag(self):
        m = RDiagonalModel.from_json({"name": "x", "alpha": ["1"], "beta": ["1"],
                                      "two_norm_sq": "1", "op_norm": {"upper_bound": "5"}})
        assert m.op_norm.tag == "upper_bound"


class TestFreeGroupOracle:
    def test_examples(self):
        assert free_group_moment_oracle(w((1, False), (1, True))) == 1
        assert free_group_moment_oracle(w((1, False), (2, True))) == 0
        assert free_group_moment_oracle(w((1, False), (2, True), (2, False), (1, True))) == 1
        assert free_group_moment_oracle(()) == 1

    def test_no_cyclic_reduction(self):
        # u1* u2 u1 reduces to nothing only cyclically, not as a group element
        assert free_group_moment_oracle(w((1, True), (2, False), (1, False))) == 0


class TestChebyshev:
    def test_polynomials(self):
        assert chebyshev_polynomial(0) == [1]
        assert chebyshev_polynomial(2) == [-1, 0, 1]
        assert chebyshev_polynomial(3) == [0, -2, 0, 1]

    def test_examples(self):
        assert chebyshev_moment_oracle(1, 2) == 2
        assert all(chebyshev_moment_oracle(n, 1) == 1 for n in range(8))

    @pytest.mark.parametrize("n, m", [(n, m) for n in range(1, 8) for m in range(1, 8)
                                      if 2 * n * m <= 14])
    def test_matches_no_intrablock_pairings(self, n, m):
        assert chebyshev_moment_oracle(n, m) == sum(1 for _ in enumerate_no_intrablock_pairings(n, m))

    def test_roots_increase_towards_n_plus_one(self):
        roots = [float(chebyshev_moment_oracle(2, m)) ** (1 / (2 * m)) for m in range(1, 40)]
        assert all(a < b < 3 for a, b in zip(roots, roots[1:]))
