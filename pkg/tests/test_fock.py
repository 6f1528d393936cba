import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl_paramp.errors import ParameterError
from dunkl_paramp.fock import (
    ModelParams,
    apply,
    build_annihilation,
    build_casimir,
    build_creation,
    build_number,
    build_reflection,
    build_su11_generators,
    dumps_matrix,
    dunkl_number,
    expectation,
    fock_state,
    loads_matrix,
    parity_signs,
    tail_mass,
)

from oracles import analytic_generators, dn

mus = st.floats(min_value=-0.49, max_value=5.0, allow_nan=False)


@pytest.mark.parametrize(
    "n, mu, expected",
    [(0, 0.7, 0.0), (3, 0.25, 3.5), (4, 0.25, 4.0), (1, 0.5, 2.0), (2, 0.5, 2.0)],
)
def test_dunkl_number_examples(n, mu, expected):
    assert dunkl_number(n, mu) == expected


def test_dunkl_number_rejects_negative_n():
    with pytest.raises(ParameterError):
        dunkl_number(-1, 0.3)


@given(n=st.integers(0, 10_000), mu=mus)
def test_dunkl_number_matches_formula(n, mu):
    assert dunkl_number(n, mu) == pytest.approx(n + mu * (1 - (-1) ** n), abs=1e-12)


class TestModelParams:
    def test_defaults(self):
        p = ModelParams()
        assert p.dim == 128 and p.omega == 1.0 and p.f == 0

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(mu=-0.5),
            dict(mu=-0.7),
            dict(omega=0.0),
            dict(f_mag=-0.1),
            dict(dim=7),
            dict(dim=2),
            dict(mu=float("nan")),
        ],
    )
    def test_rejects(self, kwargs):
        with pytest.raises(ParameterError):
            ModelParams(**kwargs)

    def test_phase_wrapped(self):
        p = ModelParams(f_mag=0.2, f_phase=2 * math.pi + 0.5)
        assert p.f_phase == pytest.approx(0.5)
        assert p.f == pytest.approx(0.2 * np.exp(0.5j))

    def test_rabi_frequency(self):
        assert ModelParams(f_mag=0.3).rabi_frequency == pytest.approx(1.6)

    def test_unstable_is_constructible(self):
        p = ModelParams(f_mag=0.5)
        assert not p.is_stable


class TestLadder:
    def test_annihilation_entries(self):
        a = build_annihilation(ModelParams(mu=0.5, dim=8))
        assert a[0, 1] == pytest.approx(math.sqrt(2))
        assert a[1, 2] == pytest.approx(math.sqrt(2))
        assert a[0, 2] == 0
        nz = np.argwhere(a != 0)
        assert np.all(nz[:, 1] - nz[:, 0] == 1)

    def test_annihilation_reproduces_kminus(self):
        # a^2 / 2 against the closed-form action of K- entry by entry
        p = ModelParams(mu=0.5, dim=16)
        a = build_annihilation(p)
        _, _, km = analytic_generators(0.5, 16)
        np.testing.assert_allclose(0.5 * a @ a, km, atol=1e-14)

    def test_creation_entries(self):
        assert build_creation(ModelParams(mu=0.0, dim=8))[1, 0] == pytest.approx(1.0)
        ad = build_creation(ModelParams(mu=0.5, dim=8))
        assert ad[1, 0] == pytest.approx(math.sqrt(2))
        assert ad[0, 1] == 0

    @given(mu=mus, half=st.integers(2, 40))
    @settings(max_examples=40)
    def test_creation_is_exact_adjoint(self, mu, half):
        p = ModelParams(mu=mu, dim=2 * half)
        assert np.array_equal(build_creation(p), build_annihilation(p).conj().T)

    def test_matrices_real(self):
        p = ModelParams(mu=0.3, dim=12)
        for m in (build_annihilation(p), build_number(p), *build_su11_generators(p)):
            assert np.all(m.imag == 0)


class TestReflection:
    def test_small(self):
        np.testing.assert_array_equal(build_reflection(2), np.diag([1, -1]))

    def test_involution_and_trace(self):
        r = build_reflection(128)
        np.testing.assert_array_equal(r @ r, np.eye(128))
        assert np.trace(r) == 0

    @given(mu=mus, half=st.integers(2, 30))
    @settings(max_examples=30)
    def test_anticommutes_with_a(self, mu, half):
        p = ModelParams(mu=mu, dim=2 * half)
        a = build_annihilation(p)
        r = build_reflection(p.dim)
        assert np.abs(r @ a + a @ r).max() < 1e-12


@given(mu=mus, half=st.integers(2, 40))
@settings(max_examples=40)
def test_deformed_commutator_diagonal(mu, half):
    p = ModelParams(mu=mu, dim=2 * half)
    a = build_annihilation(p)
    ad = a.conj().T
    comm = np.diag(a @ ad - ad @ a).real
    expected = 1 + 2 * mu * parity_signs(p.dim)
    assert np.abs(comm[:-1] - expected[:-1]).max() < 1e-12


@given(mu=mus, half=st.integers(2, 40))
@settings(max_examples=40)
def test_number_operator(mu, half):
    p = ModelParams(mu=mu, dim=2 * half)
    n_op = build_number(p)
    expected = np.array([dn(n, mu) for n in range(p.dim)])
    np.testing.assert_allclose(np.diag(n_op).real, expected, atol=1e-12)
    assert np.abs(n_op - np.diag(np.diag(n_op))).max() == 0
    k0, _, _ = build_su11_generators(p)
    alt = 2 * k0 - 0.5 * np.eye(p.dim) - mu * build_reflection(p.dim)
    assert np.abs((alt - n_op)[:-1, :-1]).max() < 1e-12


class TestGenerators:
    def test_examples(self):
        k0, kp, km = build_su11_generators(ModelParams(mu=0.3, dim=8))
        assert k0[0, 0] == pytest.approx(0.4)
        assert km[0, 2] == pytest.approx(0.894427190999916, abs=1e-12)
        _, kp0, _ = build_su11_generators(ModelParams(mu=0.0, dim=8))
        assert kp0[2, 0] == pytest.approx(0.7071067811865476, abs=1e-12)

    @pytest.mark.parametrize("mu", [-0.4, 0.0, 0.3, 1.7])
    @pytest.mark.parametrize("dim", [4, 9 + 1, 64])
    def test_match_closed_form_actions(self, mu, dim):
        built = build_su11_generators(ModelParams(mu=mu, dim=dim))
        for m, ref in zip(built, analytic_generators(mu, dim)):
            np.testing.assert_allclose(m, ref, atol=1e-12)

    def test_k0_edge_is_analytic(self):
        p = ModelParams(mu=0.45, dim=10)
        a = build_annihilation(p)
        raw = 0.25 * (a.conj().T @ a + a @ a.conj().T)
        k0, _, _ = build_su11_generators(p)
        assert k0[9, 9] == pytest.approx(0.5 * (dn(9, 0.45) + 0.5 - 0.45))
        assert raw[9, 9] != pytest.approx(k0[9, 9])


class TestCasimir:
    @pytest.mark.parametrize("n, expected", [(0, -0.2275), (1, -0.1275)])
    def test_examples(self, n, expected):
        c = build_casimir(ModelParams(mu=0.2, dim=16))
        assert c[n, n].real == pytest.approx(expected, abs=1e-14)

    def test_undeformed(self):
        c = build_casimir(ModelParams(mu=0.0, dim=16))
        np.testing.assert_allclose(np.diag(c)[:12].real, -3 / 16, atol=1e-14)


class TestStates:
    def test_fock_state(self):
        v = fock_state(3, 8)
        assert v[3] == 1 and np.count_nonzero(v) == 1
        with pytest.raises(ParameterError):
            fock_state(8, 8)

    def test_expectations(self):
        assert expectation(build_reflection(8), fock_state(3, 8)) == pytest.approx(-1)
        k0, _, _ = build_su11_generators(ModelParams(mu=0.1, dim=8))
        assert expectation(k0, fock_state(2, 8)) == pytest.approx(1.3)

    def test_vacuum_annihilated(self):
        a = build_annihilation(ModelParams(dim=8))
        np.testing.assert_array_equal(apply(a, fock_state(0, 8)), np.zeros(8))

    def test_dim_mismatch(self):
        with pytest.raises(ParameterError):
            apply(np.eye(4), fock_state(0, 8))
        with pytest.raises(ParameterError):
            expectation(np.eye(4), fock_state(0, 8))

    def test_tail_mass(self):
        v = np.ones(20) / math.sqrt(20)
        assert tail_mass(v) == pytest.approx(0.1)
        assert tail_mass(fock_state(0, 20)) == 0


def test_matrix_text_roundtrip():
    _, kp, _ = build_su11_generators(ModelParams(mu=0.37, dim=6))
    m = kp + 1j * np.arange(36).reshape(6, 6) / 7
    text = dumps_matrix(m)
    assert text.splitlines()[0] == "6"
    np.testing.assert_array_equal(loads_matrix(text), m)
