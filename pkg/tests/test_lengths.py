import math

import numpy as np
import pytest

from arccover import (Harmonic, LengthSequenceError, LogOverN,
                      PowerLaw, Schedule, ScheduleError, TableSequence,
                      block_sequence, choose_schedule, covering_series,
                      estimate_covering_exponent, estimate_delta, eval_length,
                      parse_lengths, rare_block_sum, shepp_series)

EULER_GAMMA = 0.5772156649015329


class TestEval:
    def test_log_over_n_formula(self):
        assert eval_length(LogOverN(2.0), 7) == pytest.approx(2 * math.log(7) / 7, rel=1e-15)
        assert eval_length(LogOverN(2.0), 7) == pytest.approx(0.5559, abs=1e-4)

    def test_log_over_n_first_value(self):
        L = LogOverN(1.0)
        assert L.ell(1) == L.ell(2) == math.log(2) / 2

    def test_harmonic(self):
        assert eval_length(Harmonic(1.0), 4) == 0.25

    def test_power(self):
        assert eval_length(PowerLaw(1.0, 0.5), 16) == pytest.approx(0.25)

    def test_vectorized(self):
        L = Harmonic(1.0)
        got = L.ell(np.array([1.0, 2.0, 4.0]))
        assert np.allclose(got, [1.0 - 1e-9, 0.5, 0.25])

    def test_clamp_keeps_below_one(self):
        assert Harmonic(1.5).ell(1) < 1.0
        assert Harmonic(1.5).clamped
        assert not Harmonic(0.5).clamped
        assert LogOverN(12.0).ell(3) < 1.0

    def test_non_increasing(self):
        # ln(n)/n rises from n=2 to n=3 before decaying, so the logn family
        # is scanned from n=3; all other rules are monotone from n=1
        ns = np.arange(3, 5000, dtype=float)
        for L in (LogOverN(2.5), Harmonic(1.5), PowerLaw(2.0, 0.7)):
            assert np.all(np.diff(L.ell(ns)) <= 0)
        table = TableSequence((0.5, 0.5, 0.25, 0.1))
        assert np.all(np.diff(table.ell(np.arange(1, 5, dtype=float))) <= 0)

    def test_rejects_bad_parameters(self):
        with pytest.raises(LengthSequenceError):
            LogOverN(0.0)
        with pytest.raises(LengthSequenceError):
            PowerLaw(1.0, -0.5)
        with pytest.raises(LengthSequenceError):
            TableSequence((0.2, 0.5))
        with pytest.raises(LengthSequenceError):
            TableSequence((1.2,))

    def test_index_guards(self):
        with pytest.raises(LengthSequenceError):
            Harmonic(1.0).ell(0)
        with pytest.raises(LengthSequenceError):
            Harmonic(1.0).ell(2 ** 60)
        with pytest.raises(LengthSequenceError):
            TableSequence((0.5, 0.4)).ell(3)


class TestDelta:
    @pytest.mark.parametrize("c", [0.3, 0.5, 1.0, 2.5])
    def test_log_over_n_exact(self, c):
        assert estimate_delta(LogOverN(c), (10, 10 ** 6)) == pytest.approx(c, abs=1e-12)

    def test_log_over_n_exact_from_three(self):
        # the ratio n ell(n)/ln n is identically c from n = 3 on
        assert estimate_delta(LogOverN(0.7), (3, 500)) == pytest.approx(0.7, abs=1e-12)

    def test_harmonic_min_at_top(self):
        got = estimate_delta(Harmonic(3.0), (10, 10 ** 6))
        assert got == pytest.approx(3.0 / math.log(10 ** 6), rel=1e-12)

    def test_power_min_at_bottom(self):
        # ratio n^0.5 / ln n increases over [10, 1e6], so the min sits at n_lo
        got = estimate_delta(PowerLaw(1.0, 0.5), (10, 10 ** 6))
        assert got == pytest.approx(math.sqrt(10) / math.log(10), rel=1e-12)
        assert got == pytest.approx(1.373, abs=1e-3)

    def test_range_validation(self):
        with pytest.raises(LengthSequenceError):
            estimate_delta(Harmonic(1.0), (1, 100))
        with pytest.raises(LengthSequenceError):
            estimate_delta(Harmonic(1.0), (50, 50))


class TestCoveringExponent:
    def test_harmonic_near_one(self):
        # sum_{s<=N} 1/s = ln N + gamma + o(1), so the ratio at N=1e5 is
        # about 1 + gamma/ln(1e5); sample ranges near the top see ~1.05
        got = estimate_covering_exponent(Harmonic(1.0), (90_000, 100_000))
        want = 1.0 + EULER_GAMMA / math.log(100_000)
        assert got == pytest.approx(want, abs=2e-3)
        assert got == pytest.approx(1.05, abs=5e-3)

    def test_harmonic_trends_to_one(self):
        near = estimate_covering_exponent(Harmonic(1.0), (90_000, 100_000))
        far = estimate_covering_exponent(Harmonic(1.0), (900_000, 1_000_000))
        assert 1.0 < far < near

    def test_log_over_n_divergent_trend(self):
        got = estimate_covering_exponent(LogOverN(1.0), (10, 10 ** 5))
        # independent oracle: direct accumulation of every term
        direct = np.cumsum(LogOverN(1.0).ell(np.arange(1, 10 ** 5 + 1, dtype=float)))
        want = direct[-1] / math.log(10 ** 5)
        assert got == pytest.approx(want, rel=1e-12)
        assert got == pytest.approx(5.76, abs=0.05)
        assert estimate_covering_exponent(LogOverN(1.0), (10, 10 ** 4)) < got

    def test_exact_prefix_sums(self):
        for L in (Harmonic(0.7), LogOverN(0.9), PowerLaw(1.0, 0.4)):
            ns = np.array([1.0, 2.0, 17.0, 1000.0])
            direct = np.cumsum(L.ell(np.arange(1, 1001, dtype=float)))
            got = L.partial_sums(ns)
            want = direct[[0, 1, 16, 999]]
            assert np.allclose(got, want, rtol=1e-12)


class TestBlocks:
    def test_definition(self):
        L2 = block_sequence(Harmonic(1.0), Schedule((2, 4)))
        assert L2.ell(3) == 0.25 and L2.ell(4) == 0.25
        assert L2.ell(1) == 0.5 and L2.ell(2) == 0.5

    def test_block_end_equals_base(self):
        L = LogOverN(0.7)
        sched = Schedule((5, 30, 200))
        L2 = block_sequence(L, sched)
        for nk in sched.indices:
            assert L2.ell(nk) == L.ell(nk)

    def test_blockwise_sum_identity(self):
        L = Harmonic(1.0)
        sched = Schedule((2, 4, 9, 33))
        L2 = block_sequence(L, sched)
        idx = np.array(sched.indices, dtype=float)
        prev = np.concatenate(([0.0], idx[:-1]))
        want = np.cumsum((idx - prev) * L.ell(idx))
        got = L2.partial_sums(idx)
        assert np.allclose(got, want, rtol=1e-15)
        # and against brute-force term-by-term evaluation
        brute = np.cumsum(L2.ell(np.arange(1, 34, dtype=float)))
        assert np.allclose(got, brute[idx.astype(int) - 1], rtol=1e-12)

    def test_shrinks_lengths_pointwise(self):
        L = Harmonic(0.9)
        L2 = block_sequence(L, Schedule((3, 10, 50, 400)))
        ns = np.arange(1, 500, dtype=float)
        assert np.all(L2.ell(ns) <= L.ell(ns) + 1e-15)

    def test_beyond_schedule_falls_back(self):
        L = Harmonic(1.0)
        L2 = block_sequence(L, Schedule((2, 4)))
        assert L2.ell(10) == L.ell(10)
        got = L2.partial_sums(np.array([6.0]))
        want = 1.0 + 0.5 + L.ell(5) + L.ell(6)  # blocks (0,2],(2,4] then base
        assert got == pytest.approx(want, rel=1e-15)

    def test_schedule_validation(self):
        with pytest.raises(LengthSequenceError):
            Schedule((1, 5))
        with pytest.raises(LengthSequenceError):
            Schedule((5, 5))
        with pytest.raises(LengthSequenceError):
            Schedule(())


class TestChooseSchedule:
    def test_single_block(self):
        assert choose_schedule(Harmonic(1.0), 0.5, 1).indices == (2,)

    def test_log_rule_small_sum(self):
        L = LogOverN(0.5)
        sched = choose_schedule(L, 0.9, 4)
        total = rare_block_sum(L, sched, 0.9)
        # direct summation oracle
        direct = sum(prev * L.ell(nk) ** 0.9 for prev, nk in
                     zip((0,) + sched.indices[:-1], sched.indices))
        assert total == pytest.approx(direct, rel=1e-12)
        assert total < 1.0

    def test_per_term_margins(self):
        # harmonic lengths force n_k ~ n_{k-1}^2 growth, so the 1e15 index
        # cap supports four blocks at alpha = 0.5
        L = Harmonic(1.0)
        sched = choose_schedule(L, 0.5, 4)
        for k, (prev, nk) in enumerate(zip((0,) + sched.indices[:-1], sched.indices), start=1):
            assert prev * L.ell(nk) ** 0.5 <= 2.0 ** -k + 1e-12

    def test_infeasible_raises_with_diagnostic(self):
        with pytest.raises(ScheduleError, match="n_6"):
            choose_schedule(LogOverN(0.9), 0.9, 6)

    def test_alpha_validation(self):
        with pytest.raises(LengthSequenceError):
            choose_schedule(Harmonic(1.0), 1.5, 3)


class TestCoveringSeries:
    def test_fast_decay_convergent(self):
        # terms ~ n^(beta - c d) / (c ln n)^beta = n^-1.5 / (5 ln n)
        res = covering_series(LogOverN(5.0), beta=1.0, d=0.5, N=10 ** 6)
        assert res.verdict == "convergent"

    def test_slow_decay_divergent(self):
        # c d - beta = 0.5 <= 1
        res = covering_series(LogOverN(3.0), beta=1.0, d=0.5, N=10 ** 6)
        assert res.verdict == "divergent"

    def test_constant_terms_divergent(self):
        # harmonic lengths with beta = 0: terms are exp(-c d), constant
        res = covering_series(Harmonic(0.8), beta=0.0, d=0.5, N=10 ** 5)
        assert res.verdict == "divergent"
        assert res.term_slope == pytest.approx(0.0, abs=1e-6)

    def test_partial_sums_exact(self):
        L = LogOverN(2.0)
        res = covering_series(L, beta=1.0, d=0.5, N=1000)
        ns = np.arange(1, 1001, dtype=float)
        ell = L.ell(ns)
        terms = (1.0 / ell) * np.exp(-ns * 0.5 * ell)
        direct = np.cumsum(terms)
        for cp, ps in zip(res.checkpoints, res.partial_sums):
            assert ps == pytest.approx(direct[cp - 1], rel=1e-10)

    def test_parameter_validation(self):
        with pytest.raises(LengthSequenceError):
            covering_series(Harmonic(1.0), beta=1.0, d=1.5, N=100)
        with pytest.raises(LengthSequenceError):
            covering_series(Harmonic(1.0), beta=-1.0, d=0.5, N=100)


class TestSheppSeries:
    def test_subcritical_convergent(self):
        assert shepp_series(Harmonic(0.5), 10 ** 6).verdict == "convergent"

    def test_critical_divergent(self):
        assert shepp_series(Harmonic(1.0), 10 ** 6).verdict == "divergent"

    def test_supercritical_divergent(self):
        assert shepp_series(Harmonic(1.5), 10 ** 6).verdict == "divergent"

    def test_terms_match_theory(self):
        # term_n = exp(sum ell) / n^2 ~ e^(c gamma) n^(c-2) for harmonic(c)
        res = shepp_series(Harmonic(1.5), 10 ** 5)
        assert res.term_slope == pytest.approx(-0.5, abs=0.01)

    def test_log_space_guard(self):
        # prefix sums reach ~240 by n = 1e6; linear-space terms would overflow
        res = shepp_series(LogOverN(2.5), 10 ** 5)
        assert res.verdict == "divergent"
        assert np.isfinite(res.log_partial_sums).all()


class TestParse:
    def test_rules(self):
        assert isinstance(parse_lengths("logn:2.5"), LogOverN)
        assert isinstance(parse_lengths("harmonic:0.5"), Harmonic)
        assert isinstance(parse_lengths("power:1:0.5"), PowerLaw)

    def test_table_file(self, tmp_path):
        path = tmp_path / "lens.csv"
        path.write_text("0.5\n0.25\n0.125\n")
        L = parse_lengths(f"table:{path}")
        assert isinstance(L, TableSequence)
        assert L.ell(2) == 0.25

    def test_errors(self):
        for bad in ("logn:x", "nope:1", "table:/missing.csv"):
            with pytest.raises(LengthSequenceError):
                parse_lengths(bad)
