import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl_paramp.errors import ParameterError, TruncationError
from dunkl_paramp.fock import ModelParams
from dunkl_paramp.stats import (
    StatRecord,
    bogoliubov_oracle_statistics,
    closed_form_statistics,
    g2,
    g2_standard,
    g2_vacuum_standard,
    intermediate_checks,
    mandel_q,
    mandel_q_standard,
    mean_photon,
    oracle_statistics,
    photon_variance,
)

STATS = ("mean_n", "variance", "mandel_q", "g2")
ns = st.integers(0, 12)
mus = st.floats(-0.49, 3.0)
rs = st.floats(0.0, 1.5)


def _oracle(n, mu, r, **kw):
    return oracle_statistics(n, ModelParams(mu=mu, dim=256), r=r, **kw)


def _assert_close(a: StatRecord, b: StatRecord, tol):
    for name in STATS:
        x, y = getattr(a, name), getattr(b, name)
        if x is None or y is None:
            assert x is None and y is None, name
        else:
            assert abs(x - y) < tol, (name, x, y)


class TestMean:
    @pytest.mark.parametrize("mu", [-0.3, 0.0, 0.7])
    def test_unsqueezed_vacuum(self, mu):
        assert mean_photon(0, mu, 0.0) == 0.0

    def test_vacuum(self):
        assert mean_photon(0, 0.5, 1.0) == pytest.approx(2 * math.sinh(1.0) ** 2, abs=1e-14)
        assert mean_photon(0, 0.5, 1.0) == pytest.approx(2.76220, abs=1e-5)

    def test_against_oracle(self):
        expected = math.cosh(0.5) ** 2 * 2 + math.sinh(0.5) ** 2 * 3.6
        assert mean_photon(2, 0.3, 0.5) == pytest.approx(expected, abs=1e-14)
        assert _oracle(2, 0.3, 0.5).mean_n == pytest.approx(expected, abs=1e-8)


class TestVariance:
    @pytest.mark.parametrize("mu", [0.0, 0.5, 2.0])
    def test_vacuum(self, mu):
        r = 0.4
        expected = 0.5 * math.sinh(2 * r) ** 2 * (1 + 2 * mu)
        assert photon_variance(0, mu, r) == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("n", [0, 1, 5])
    def test_number_state(self, n):
        assert photon_variance(n, 0.3, 0.0) == 0.0

    def test_against_oracle(self):
        assert _oracle(3, 0.25, 0.4).variance == pytest.approx(photon_variance(3, 0.25, 0.4), abs=1e-8)


class TestMandelQ:
    @pytest.mark.parametrize("mu", [0.0, 0.5, 2.0])
    def test_vacuum(self, mu):
        assert mandel_q(0, mu, 1.0) == pytest.approx(math.cosh(2.0), abs=1e-12)
        assert mandel_q(0, mu, 1.0) == pytest.approx(3.76220, abs=1e-5)

    def test_unsqueezed_vacuum_undefined(self):
        assert mandel_q(0, 0.3, 0.0) is None

    def test_undeformed_three_ways(self):
        r = 0.5
        direct = math.sinh(1.0) ** 2 / 4 * (2 * 1 + 3 * 4) / (
            2 * math.cosh(r) ** 2 + 3 * math.sinh(r) ** 2
        ) - 1
        assert mandel_q(2, 0.0, r) == pytest.approx(direct, abs=1e-12)
        assert mandel_q_standard(2, r) == pytest.approx(direct, abs=1e-12)
        assert _oracle(2, 0.0, r).mandel_q == pytest.approx(direct, abs=1e-8)

    def test_number_state(self):
        assert mandel_q(3, 0.4, 0.0) == pytest.approx(-1.0)


class TestG2:
    def test_vacuum_undeformed(self):
        assert g2(0, 0.0, 1.0) == pytest.approx(1 / math.tanh(1.0) ** 2 + 2, abs=1e-12)
        assert g2(0, 0.0, 1.0) == pytest.approx(3.72407, abs=1e-5)

    @pytest.mark.parametrize("r", [0.01, 0.3, 1.0, 3.0])
    def test_vacuum_bunched(self, r):
        assert g2(0, 0.0, r) >= 3.0

    def test_against_oracle(self):
        assert _oracle(1, 0.5, 0.6).g2 == pytest.approx(g2(1, 0.5, 0.6), abs=1e-7)

    def test_undefined(self):
        assert g2(0, 1.0, 0.0) is None

    def test_depends_on_mu(self):
        assert abs(g2(0, 1.0, 0.5) - g2(0, 0.0, 0.5)) > 1e-3


class TestOracle:
    def test_trivial(self):
        rec = oracle_statistics(0, ModelParams(mu=0.4))
        assert rec.mean_n == 0 and rec.variance == 0
        assert rec.mandel_q is None and rec.g2 is None
        assert rec.provenance == "oracle"

    def test_from_pump(self):
        rec = oracle_statistics(0, ModelParams(mu=0.5, f_mag=0.3))
        assert rec.r == pytest.approx(0.5 * math.atanh(0.6))
        assert rec.mandel_q == pytest.approx(1.25, abs=1e-10)
        assert rec.tail_mass <= 1e-8

    def test_large_state(self):
        rec = oracle_statistics(4, ModelParams(mu=1.0, dim=512), r=0.5)
        _assert_close(rec, closed_form_statistics(4, 1.0, 0.5), 1e-7)

    def test_auto_scaling(self):
        rec = oracle_statistics(3, ModelParams(mu=0.25, dim=16), r=1.6, start_dim=64)
        assert rec.tail_mass <= 1e-8
        _assert_close(rec, closed_form_statistics(3, 0.25, 1.6), 1e-6)

    def test_rejects_when_capped(self):
        with pytest.raises(TruncationError, match="tail mass"):
            oracle_statistics(0, ModelParams(), r=2.5, start_dim=32, max_dim=64)

    def test_bad_n(self):
        with pytest.raises(ParameterError):
            oracle_statistics(-1, ModelParams())

    @pytest.mark.parametrize("n", [0, 1, 4, 6])
    @pytest.mark.parametrize("mu", [0.0, 0.25, 1.0])
    def test_two_oracles_agree(self, n, mu):
        a = _oracle(n, mu, 0.35)
        b = bogoliubov_oracle_statistics(n, mu, 0.35, phi=0.0)
        _assert_close(a, b, 1e-8)

    def test_bogoliubov_oracle_phase_free(self):
        a = bogoliubov_oracle_statistics(2, 0.5, 0.7, phi=0.0)
        b = bogoliubov_oracle_statistics(2, 0.5, 0.7, phi=1.3)
        _assert_close(a, b, 1e-10)


class TestIntermediate:
    def test_k0_square(self):
        rep = intermediate_checks(1, 0.3)
        num, closed = rep["4<K0^2>"]
        assert closed == pytest.approx(3.24)
        assert num == pytest.approx(3.24, abs=1e-12)

    def test_vacuum_pairs(self):
        assert intermediate_checks(0, 0.7)["4<K+K->"] == (0.0, 0.0)

    def test_raising_pairs(self):
        num, closed = intermediate_checks(2, 0.5)["4<K-K+>"]
        assert closed == 16 and num == pytest.approx(16, abs=1e-12)

    @given(n=ns, mu=mus)
    @settings(max_examples=30, deadline=None)
    def test_residual(self, n, mu):
        assert intermediate_checks(n, mu)["max_residual"] < 1e-12 * max(1.0, (n + 2 * abs(mu)) ** 2)


@given(n=ns, mu=mus, r=rs)
def test_physical_ranges(n, mu, r):
    rec = closed_form_statistics(n, mu, r)
    assert rec.mean_n >= 0 and rec.variance >= 0
    if rec.mandel_q is not None:
        assert rec.mandel_q >= -1 - 1e-12
        assert rec.g2 >= -1e-12


@given(r=st.floats(0.01, 2.0), mu=mus)
def test_vacuum_q_independent_of_mu(r, mu):
    assert mandel_q(0, mu, r) == pytest.approx(mandel_q(0, 0.0, r), abs=1e-12 * math.cosh(2 * r))
    assert mandel_q(0, mu, r) > 1


@given(n=ns, r=st.floats(0.01, 1.5))
def test_undeformed_limits(n, r):
    assert mandel_q(n, 0.0, r) == pytest.approx(mandel_q_standard(n, r), rel=1e-12, abs=1e-12)
    assert g2(n, 0.0, r) == pytest.approx(g2_standard(n, r), rel=1e-12, abs=1e-12)


@given(r=st.floats(0.05, 2.0))
def test_vacuum_g2_limit(r):
    assert g2(0, 0.0, r) == pytest.approx(g2_vacuum_standard(r), rel=1e-12)
    assert g2_vacuum_standard(r) >= 3


def test_record_fields():
    rec = closed_form_statistics(1, 0.2, 0.3)
    assert tuple(rec.as_dict()) == StatRecord.FIELDS
    assert rec.provenance == "closed_form" and rec.tail_mass is None
