"""Tests for the exact cylindric-plane-partition machinery."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cylpeak import combinatorics as cb
from cylpeak.errors import DomainError
from cylpeak.kernels import ModelParams


def random_cylpp(rng, n, max_part=6):
    """Rejection-sample a valid cyclic chain with bounded parts."""
    while True:
        mu = tuple(
            sorted((int(rng.integers(1, max_part + 1)) for _ in range(rng.integers(0, 3))), reverse=True)
        )
        chain = [mu]
        ok = True
        for _ in range(n):  # ascend
            cur = chain[-1]
            nxt = []
            prev_hi = max_part
            for i in range(len(cur) + 1):
                lo = cur[i] if i < len(cur) else 0
                hi = min(prev_hi, cur[i - 1] if i >= 1 else max_part)
                if hi < lo:
                    ok = False
                    break
                v = int(rng.integers(lo, hi + 1))
                nxt.append(v)
                prev_hi = v
            if not ok:
                break
            chain.append(tuple(x for x in nxt if x))
        if not ok:
            continue
        for step in range(n):  # descend
            cur = chain[-1]
            nxt = []
            for i in range(len(cur)):
                lo = cur[i + 1] if i + 1 < len(cur) else 0
                v = int(rng.integers(lo, cur[i] + 1))
                nxt.append(v)
            chain.append(tuple(x for x in nxt if x))
        if chain[-1] != mu:
            continue
        try:
            return cb.CylindricPlanePartition(n=n, seq=tuple(chain))
        except DomainError:
            continue


class TestInterlacing:
    def test_examples(self):
        assert cb.interlaces((2, 1), (3, 1))
        assert not cb.interlaces((3,), (2,))
        assert cb.interlaces((), (5,))
        assert not cb.interlaces((), (1, 1))

    @given(st.lists(st.integers(1, 9), max_size=4))
    @settings(max_examples=100, deadline=None)
    def test_reflexive_on_equal(self, parts):
        p = tuple(sorted(parts, reverse=True))
        assert cb.interlaces(p, p)


class TestWeights:
    def test_figure_exponents(self):
        # trace 11, seam 3, volume 44 at N = 3 gives a^8 q^35
        class Fake:
            trace, seam, volume, n = 11, 3, 44, 3

        params = ModelParams(a=0.7, q=0.6, n=3)
        w = cb.weight_tsv(Fake(), params)
        assert w == pytest.approx(0.7**8 * 0.6**35, rel=1e-12)

    def test_empty_weight_is_one(self):
        empty = cb.CylindricPlanePartition(n=2, seq=((), (), (), (), ()))
        params = ModelParams(a=0.3, q=0.4, n=2)
        assert cb.weight_tsv(empty, params) == 1.0
        assert cb.weight_schur(empty, params) == 1.0

    def test_hand_example_n1(self):
        one = cb.CylindricPlanePartition(n=1, seq=((1,), (1,), (1,)))
        params = ModelParams(a=0.5, q=0.3, n=1)
        assert cb.weight_tsv(one, params) == pytest.approx(0.3, rel=1e-12)
        assert cb.weight_schur(one, params) == pytest.approx(0.3, rel=1e-12)

    def test_weight_equivalence_random_suite(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            n = int(rng.integers(1, 5))
            cpp = random_cylpp(rng, n)
            params = ModelParams(
                a=float(rng.uniform(0.1, 1.0)), q=float(rng.uniform(0.05, 0.9)), n=n
            )
            w1 = cb.weight_tsv(cpp, params)
            w2 = cb.weight_schur(cpp, params)
            assert w2 == pytest.approx(w1, rel=1e-12)


class TestPartitionFunction:
    def test_n1_a1(self):
        z = cb.partition_function(ModelParams(a=1.0, q=0.5, n=1))
        assert z == pytest.approx(11.9906, abs=2e-4)

    def test_n1_formula(self):
        params = ModelParams(a=0.5, q=0.3, n=1)
        from cylpeak.special import q_pochhammer_inf

        expect = 1.0 / (q_pochhammer_inf(0.3, 0.3) * q_pochhammer_inf(0.15, 0.3))
        assert cb.partition_function(params) == pytest.approx(expect, rel=1e-11)
        assert cb.partition_function(params) == pytest.approx(2.0501, abs=2e-4)

    def test_against_enumeration(self):
        params = ModelParams(a=0.3, q=0.2, n=1)
        mass = cb.total_enumerated_mass(params, 30)
        z = cb.partition_function(params)
        assert mass / z == pytest.approx(1.0, abs=1e-6)


class TestEnumeration:
    def test_n1_volume2(self):
        params = ModelParams(a=0.5, q=0.5, n=1)
        objs = list(cb.enumerate_cylpp(params, 2))
        seqs = {o.seq for o in objs}
        # ((), (1,1), ()) is excluded: a two-row column is not a horizontal strip
        assert seqs == {
            ((), (), ()),
            ((), (1,), ()),
            ((), (2,), ()),
            ((1,), (1,), (1,)),
        }

    def test_volume_zero(self):
        params = ModelParams(a=0.5, q=0.5, n=2)
        objs = list(cb.enumerate_cylpp(params, 0))
        assert len(objs) == 1 and objs[0].volume == 0

    def test_all_valid_and_unique(self):
        params = ModelParams(a=0.5, q=0.5, n=2)
        objs = list(cb.enumerate_cylpp(params, 8))
        assert len({o.seq for o in objs}) == len(objs)
        for o in objs:
            assert o.volume <= 8  # constructor re-validates interlacing

    def test_dp_matches_direct_enumeration(self):
        params = ModelParams(a=0.45, q=0.35, n=2)
        direct = sum(cb.weight_tsv(o, params) for o in cb.enumerate_cylpp(params, 12))
        assert cb.total_enumerated_mass(params, 12) == pytest.approx(direct, rel=1e-12)
        params3 = ModelParams(a=0.6, q=0.3, n=3)
        direct3 = sum(cb.weight_tsv(o, params3) for o in cb.enumerate_cylpp(params3, 9))
        assert cb.total_enumerated_mass(params3, 9) == pytest.approx(direct3, rel=1e-12)

    def test_peak_dp_matches_direct(self):
        params = ModelParams(a=0.45, q=0.35, n=2)
        masses = {}
        for o in cb.enumerate_cylpp(params, 12):
            masses[o.peak] = masses.get(o.peak, 0.0) + cb.weight_tsv(o, params)
        dp = cb._peak_masses(params, 12)
        assert set(dp) == set(masses)
        for k in masses:
            assert dp[k] == pytest.approx(masses[k], rel=1e-12)


class TestPeakPmf:
    def test_peak_zero_probability(self):
        params = ModelParams(a=0.5, q=0.3, n=1)
        pmf = cb.exact_peak_pmf(params, 30)
        assert pmf.support[0][0] == 0
        assert pmf.support[0][1] == pytest.approx(1.0 / cb.partition_function(params), rel=1e-9)
        assert pmf.support[0][1] == pytest.approx(0.4878, abs=1e-4)

    def test_mass_plus_tail_is_one(self):
        pmf = cb.exact_peak_pmf(ModelParams(a=0.3, q=0.2, n=1), 30)
        assert pmf.total() == pytest.approx(1.0, abs=1e-9)

    def test_tail_shrinks_with_volume(self):
        params = ModelParams(a=0.3, q=0.2, n=1)
        tails = [cb.exact_peak_pmf(params, v).tail_bound for v in (10, 20, 40)]
        assert tails[0] > tails[1] > tails[2]
        assert tails[2] < 1e-6


class TestAuxLaws:
    def test_shift_symmetric(self):
        pmf = cb.shift_pmf(ModelParams(a=0.5, q=0.5, n=1))
        d = dict(pmf.support)
        assert d[0] == pytest.approx(0.33214, abs=1e-5)
        for m in (1, 2, 3):
            assert d[m] == pytest.approx(d[-m], rel=1e-14)
        assert pmf.total() == pytest.approx(1.0, abs=1e-12)

    def test_chi_cdf(self):
        params = ModelParams(a=0.5, q=0.5, n=1)
        assert cb.chi_cdf(0, params) == pytest.approx(0.288788, abs=1e-6)
        vals = [cb.chi_cdf(m, params) for m in range(12)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        assert vals[-1] == pytest.approx(1.0, abs=1e-3)

    def test_chi_pmf_sums(self):
        pmf = cb.chi_pmf(ModelParams(a=0.5, q=0.5, n=1))
        assert pmf.total() == pytest.approx(1.0, abs=1e-12)

    def test_convolve_identity(self):
        p = cb.Pmf(support=[(0, 0.4), (2, 0.6)])
        delta0 = cb.Pmf(support=[(0, 1.0)])
        assert cb.convolve_pmf(p, delta0).support == p.support

    def test_convolve_deltas(self):
        d1 = cb.Pmf(support=[(1, 1.0)])
        d2 = cb.Pmf(support=[(2, 1.0)])
        assert cb.convolve_pmf(d1, d2).support == [(3, 1.0)]

    def test_convolve_bernoulli(self):
        b = cb.Pmf(support=[(0, 0.5), (1, 0.5)])
        out = cb.convolve_pmf(b, b)
        assert out.support == [(0, 0.25), (1, 0.5), (2, 0.25)]

    def test_pmf_json_roundtrip(self):
        p = cb.Pmf(support=[(0, 0.25), (3, 0.7)], tail_bound=0.05)
        q = cb.Pmf.from_json(p.to_json())
        assert q.support == p.support and q.tail_bound == p.tail_bound
