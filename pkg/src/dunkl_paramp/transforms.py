"""Tilting (su(1,1) displacement) and Bogoliubov diagonalization of the amplifier."""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .amplifier import build_hamiltonian_su11, closed_form_spectrum
from .errors import TruncationError
from .fock import (
    ModelParams,
    build_annihilation,
    build_reflection,
    build_su11_generators,
    fock_state,
    k0_eigenvalues,
    tail_mass,
)
from .linalg import expm, max_abs

TANH_WARN = 0.95
TAIL_LIMIT = 1e-8
INTERIOR_SPREAD = 4.5


@dataclass(frozen=True)
class SqueezeParams:
    """Squeezing parameters shared by the tilting and Bogoliubov routes.

    ``tau`` is the tilting rapidity, ``r = tau / 2`` the Bogoliubov rapidity,
    ``phi`` the phase and ``xi = -tau e^{-i phi} / 2`` the displacement argument.
    """

    tau: float
    r: float
    phi: float
    xi: complex

    @classmethod
    def from_tau(cls, tau: float, phi: float) -> "SqueezeParams":
        return cls(tau=tau, r=0.5 * tau, phi=phi, xi=-0.5 * tau * cmath.exp(-1j * phi))

    @classmethod
    def from_r(cls, r: float, phi: float = 0.0) -> "SqueezeParams":
        return cls.from_tau(2.0 * r, phi)

    @property
    def u(self) -> float:
        return math.cosh(self.r)

    @property
    def v(self) -> complex:
        return cmath.exp(-1j * self.phi) * math.sinh(self.r)

    @property
    def zeta(self) -> complex:
        return -math.tanh(0.5 * self.tau) * cmath.exp(-1j * self.phi)


def _warn_strong(tau: float):
    if abs(math.tanh(tau)) > TANH_WARN:
        warnings.warn(
            f"tanh(tau) = {math.tanh(tau):.6f} > {TANH_WARN}: truncation error grows "
            "quickly; check tail mass and D-doubling",
            RuntimeWarning,
            stacklevel=3,
        )


def solve_squeeze(params: ModelParams) -> SqueezeParams:
    """Squeezing that removes the pair terms: ``tanh(tau) = 2|f|/omega``, ``phi = theta``."""
    params.require_stable()
    tau = math.atanh(2.0 * params.f_mag / params.omega)
    _warn_strong(tau)
    return SqueezeParams.from_tau(tau, params.f_phase)


def displacement_generator(sq: SqueezeParams, params: ModelParams) -> np.ndarray:
    """Anti-Hermitian ``xi K+ - xi* K-``."""
    _, kp, km = build_su11_generators(params)
    return sq.xi * kp - sq.xi.conjugate() * km


def displacement_operator(sq: SqueezeParams, params: ModelParams) -> np.ndarray:
    """``D(xi) = exp(xi K+ - xi* K-)`` on the truncated basis.

    Refuses with :class:`TruncationError` when the squeezed vacuum ``D|0>``
    already carries more than ``1e-8`` probability in the top tenth of the basis.
    """
    _warn_strong(sq.tau)
    d = expm(displacement_generator(sq, params))
    leak = tail_mass(d[:, 0])
    if leak > TAIL_LIMIT:
        raise TruncationError(
            f"squeezed vacuum tail mass {leak:.3g} > {TAIL_LIMIT:g} at dim={params.dim}; "
            "raise dim or reduce the squeezing"
        )
    return d


def trusted_interior(tau: float, dim: int) -> int:
    """Number of leading levels on which similarity-transformed operators are exact.

    ``D(xi)`` stretches level ``n`` to roughly ``e^{|tau|} n`` with a tail of
    width ``~ e^{|tau|/2} sqrt(dim)``; levels whose image reaches the cut are
    excluded. The constant is calibrated against D-doubling for
    ``tanh(tau) <= 0.9`` and is deliberately conservative.
    """
    t = abs(tau)
    keep = math.exp(-t) * (dim - INTERIOR_SPREAD * math.exp(0.5 * t) * math.sqrt(dim))
    return max(0, min(dim, math.floor(keep)))


def _require_interior(tau: float, dim: int) -> int:
    k = trusted_interior(tau, dim)
    if k < 1:
        raise TruncationError(
            f"no trusted interior at dim={dim} for tau={tau:.4g}; raise dim"
        )
    return k


class TiltResult(NamedTuple):
    tilted: np.ndarray
    offdiag_residual: float
    diagonal_residual: float
    interior: int
    doubling_change: float


def _tilted(params: ModelParams, sq: SqueezeParams) -> np.ndarray:
    d = displacement_operator(sq, params)
    return d.conj().T @ build_hamiltonian_su11(params) @ d


def tilt_hamiltonian(
    params: ModelParams,
    phase_offset: float = 0.0,
    verify_doubling: bool = True,
) -> TiltResult:
    """``D+ H D`` with the solved squeezing, and its residuals on the trusted interior.

    ``offdiag_residual`` is the max off-diagonal modulus on the interior,
    ``diagonal_residual`` the max relative deviation of the diagonal from
    ``Omega K0``. ``phase_offset`` shifts ``phi`` away from ``theta`` (negative
    control). With ``verify_doubling`` the interior block is recomputed at
    ``2 dim`` and the max change is reported; otherwise it is ``nan``.
    """
    sq = solve_squeeze(params)
    if phase_offset:
        sq = SqueezeParams.from_tau(sq.tau, sq.phi + phase_offset)
    k = _require_interior(sq.tau, params.dim)
    tilted = _tilted(params, sq)
    block = tilted[:k, :k]
    offdiag = max_abs(block - np.diag(np.diag(block)))
    target = params.rabi_frequency * k0_eigenvalues(params.dim, params.mu)[:k]
    diag_rel = float(np.max(np.abs(np.diag(block) - target) / np.abs(target)))
    change = math.nan
    if verify_doubling:
        big = _tilted(params.with_dim(2 * params.dim), sq)
        change = max_abs(big[:k, :k] - block)
    return TiltResult(tilted, offdiag, diag_rel, k, change)


def bogoliubov_operators(sq: SqueezeParams, params: ModelParams):
    """``b = u a + v a+`` with ``u = cosh r``, ``v = e^{-i phi} sinh r``; returns ``(b, b+)``."""
    if abs(sq.u**2 - abs(sq.v) ** 2 - 1.0) > 1e-12 * sq.u**2:
        raise ValueError("Bogoliubov coefficients violate |u|^2 - |v|^2 = 1")
    a = build_annihilation(params)
    ad = a.conj().T
    b = sq.u * a + sq.v * ad
    return b, b.conj().T.copy()


def inverse_bogoliubov(b: np.ndarray, b_dag: np.ndarray, sq: SqueezeParams) -> np.ndarray:
    """``a = u* b - v b+``."""
    return np.conj(sq.u) * b - sq.v * b_dag


def bogoliubov_coefficients(params: ModelParams, sq: SqueezeParams):
    """Coefficients ``(A, B, C)`` of ``b+ b``, ``b^2`` and the constant after substitution."""
    u, v, f, w = sq.u, sq.v, params.f, params.omega
    vc = v.conjugate()
    coef_a = w * (u**2 + abs(v) ** 2) - 2 * f * u * v - 2 * f.conjugate() * u * vc
    coef_b = f * u**2 + f.conjugate() * vc**2 - w * u * vc
    coef_c = w * abs(v) ** 2 - f * u * v - f.conjugate() * u * vc
    return coef_a, coef_b, coef_c


class BogoliubovResult(NamedTuple):
    h_quasi: np.ndarray
    residual: float
    coefficient_residual: float
    interior: int


def quasi_hamiltonian(params: ModelParams, sq: SqueezeParams) -> np.ndarray:
    """``Omega (b+ b + 1/2 + mu R) / 2``."""
    b, bd = bogoliubov_operators(sq, params)
    r = build_reflection(params.dim)
    eye = np.eye(params.dim)
    return 0.5 * params.rabi_frequency * (bd @ b + 0.5 * eye + params.mu * r)


def bogoliubov_diagonal_form(params: ModelParams) -> BogoliubovResult:
    """Quasiparticle Hamiltonian and its agreement with ``H_mu`` on the trusted interior.

    ``coefficient_residual`` is ``|B|`` for the solved ``r`` and ``phi = theta``.
    """
    sq = solve_squeeze(params)
    k = _require_interior(sq.tau, params.dim)
    hq = quasi_hamiltonian(params, sq)
    resid = max_abs((hq - build_hamiltonian_su11(params))[:k, :k])
    _, coef_b, _ = bogoliubov_coefficients(params, sq)
    return BogoliubovResult(hq, resid, abs(coef_b), k)


class QuasiSpectrum(NamedTuple):
    energies: np.ndarray
    rel_error: float
    ladder_residual: float
    interior: int


def bogoliubov_spectrum(params: ModelParams) -> QuasiSpectrum:
    """Energies of the quasiparticle form in its own number basis ``D(xi)|n>``.

    Uses the tilting displacement with ``tau = 2 r``: ``D+ b D`` must equal ``a``
    (``ladder_residual``) and the diagonal of ``D+ H'' D`` must equal ``E_n``.
    """
    sq = solve_squeeze(params)
    k = _require_interior(sq.tau, params.dim)
    d = displacement_operator(sq, params)
    dd = d.conj().T
    b, _ = bogoliubov_operators(sq, params)
    a = build_annihilation(params)
    ladder = max_abs((dd @ b @ d - a)[:k, :k])
    energies = np.diag(dd @ quasi_hamiltonian(params, sq) @ d)[:k]
    closed = closed_form_spectrum(params, k)
    rel = float(np.max(np.abs(energies - closed) / closed))
    return QuasiSpectrum(energies.real, rel, ladder, k)


def squeezed_number_state(n: int, sq: SqueezeParams, params: ModelParams) -> np.ndarray:
    """``|zeta, n> = D(xi)|n>``."""
    return displacement_operator(sq, params) @ fock_state(n, params.dim)
