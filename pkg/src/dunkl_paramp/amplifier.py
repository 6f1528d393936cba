"""Dunkl parametric-amplifier Hamiltonian and its spectrum."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import SU11_MARGIN, commutator, interior_residual
from .errors import ParityError
from .fock import (
    ModelParams,
    build_annihilation,
    build_number,
    build_reflection,
    build_su11_generators,
    parity_signs,
)
from .linalg import eigvalsh_tridiagonal, max_abs

PARITY_TOL = 1e-10


def build_hamiltonian_ladder(params: ModelParams) -> np.ndarray:
    """``omega a+ a + f a^2 + f* (a+)^2``. Stability is not required here."""
    a = build_annihilation(params)
    ad = a.conj().T
    f = params.f
    return params.omega * (ad @ a) + f * (a @ a) + f.conjugate() * (ad @ ad)


def build_hamiltonian_su11(params: ModelParams) -> np.ndarray:
    """``2 omega K0 + 2 f K- + 2 f* K+``.

    Equals the ladder form plus ``omega (1/2 + mu R)`` on the whole basis.
    """
    k0, kp, km = build_su11_generators(params)
    f = params.f
    return 2 * params.omega * k0 + 2 * f * km + 2 * f.conjugate() * kp


def ladder_offset(params: ModelParams) -> np.ndarray:
    """Per-level difference ``omega (1/2 + mu (-1)^n)`` between the two forms."""
    return params.omega * (0.5 + params.mu * parity_signs(params.dim))


def closed_form_spectrum(params: ModelParams, count: int) -> np.ndarray:
    """``E_n = Omega (n + mu + 1/2) / 2`` for ``n < count``."""
    omega_mu = params.rabi_frequency
    return 0.5 * omega_mu * (np.arange(count) + params.mu + 0.5)


def parity_decompose(m: np.ndarray, tol: float = PARITY_TOL):
    """Split a parity-conserving operator into its even and odd blocks."""
    dim = m.shape[0]
    r = build_reflection(dim)
    resid = max_abs(m @ r - r @ m)
    if resid > tol:
        raise ParityError(f"parity not conserved: max |[M, R]| = {resid:.3g}")
    return m[0::2, 0::2].copy(), m[1::2, 1::2].copy()


def _sector_eigenvalues(block: np.ndarray, first: int, theta: float) -> np.ndarray:
    """Eigenvalues of one parity block, which is tridiagonal in ``m``.

    Conjugating by ``diag(exp(i n theta / 2))`` makes the couplings real so a
    real symmetric tridiagonal solver applies. Falls back to a dense Hermitian
    solve if the block is not tridiagonal or the gauge leaves imaginary parts.
    """
    size = block.shape[0]
    n = first + 2 * np.arange(size)
    gauge = np.exp(0.5j * theta * n)
    g = gauge[:, None] * block * gauge.conj()[None, :]
    diag = g.diagonal()
    off = g.diagonal(1)
    scale = max(1.0, max_abs(g))
    banded = np.triu(g, 2)
    tridiagonal = max_abs(banded) <= 1e-14 * scale
    real = max_abs(diag.imag) <= 1e-13 * scale and max_abs(off.imag) <= 1e-13 * scale
    if tridiagonal and real:
        return eigvalsh_tridiagonal(diag.real, off.real)
    return np.linalg.eigvalsh(block)


@dataclass
class SpectrumResult:
    """Numerical spectrum next to the closed form.

    ``eigenvalues`` are ascending with ``parity_labels`` (+1 even, -1 odd).
    ``closed_form`` holds ``E_n`` for every level; ``max_rel_error`` covers the
    lowest ``trusted_count`` levels only, matched by sorted order per sector.
    """

    eigenvalues: np.ndarray
    parity_labels: np.ndarray
    closed_form: np.ndarray
    trusted_count: int
    max_rel_error: float
    even: np.ndarray = field(repr=False)
    odd: np.ndarray = field(repr=False)
    omega: float = 1.0
    mu: float = 0.0

    def level_matched(self) -> np.ndarray:
        """Numerical eigenvalue assigned to level ``n`` (even ``n`` from the even sector)."""
        out = np.empty(self.even.size + self.odd.size)
        out[0::2] = self.even
        out[1::2] = self.odd
        return out

    @property
    def ladder_eigenvalues(self) -> np.ndarray:
        """Spectrum of the ladder-form Hamiltonian (offset removed per sector)."""
        return self.eigenvalues - self.omega * (0.5 + self.mu * self.parity_labels)

    def interleaves(self, count: int | None = None) -> bool:
        """``even_m < odd_m < even_{m+1}`` over the first ``count`` levels."""
        count = self.trusted_count if count is None else count
        levels = self.level_matched()[:count]
        return bool(np.all(np.diff(levels) > 0))

    def gaps(self, count: int | None = None) -> np.ndarray:
        count = self.trusted_count if count is None else count
        return np.diff(self.level_matched()[:count])


def numerical_spectrum(params: ModelParams, trusted_count: int | None = None) -> SpectrumResult:
    """Diagonalize the su(1,1)-form Hamiltonian sector by sector."""
    params.require_stable()
    dim = params.dim
    h = build_hamiltonian_su11(params)
    even_block, odd_block = parity_decompose(h)
    even = _sector_eigenvalues(even_block, 0, params.f_phase)
    odd = _sector_eigenvalues(odd_block, 1, params.f_phase)

    closed = closed_form_spectrum(params, dim)
    trusted = dim // 4 if trusted_count is None else int(trusted_count)
    matched = np.empty(dim)
    matched[0::2] = even
    matched[1::2] = odd
    rel = np.abs(matched[:trusted] - closed[:trusted]) / np.abs(closed[:trusted])
    max_rel = float(rel.max()) if trusted else 0.0

    values = np.concatenate([even, odd])
    labels = np.concatenate([np.ones(even.size), -np.ones(odd.size)])
    order = np.argsort(values, kind="stable")
    return SpectrumResult(
        eigenvalues=values[order],
        parity_labels=labels[order],
        closed_form=closed,
        trusted_count=trusted,
        max_rel_error=max_rel,
        even=even,
        odd=odd,
        omega=params.omega,
        mu=params.mu,
    )


def number_commutator(params: ModelParams) -> np.ndarray:
    return commutator(build_hamiltonian_ladder(params), build_number(params))


def check_number_nonconservation(params: ModelParams) -> float:
    """Residual of ``[H, N] = 4 f K- - 4 f* K+`` on the margin-4 interior.

    Returns ``inf`` if the pump is on but ``[H, N]`` vanishes, which would mean
    the pair terms are missing.
    """
    _, kp, km = build_su11_generators(params)
    f = params.f
    hn = number_commutator(params)
    resid = interior_residual(hn - (4 * f * km - 4 * f.conjugate() * kp), SU11_MARGIN)
    if params.f_mag > 0 and max_abs(hn) == 0.0:
        return math.inf
    return resid


def check_parity_conservation(params: ModelParams) -> float:
    """``max |[H, R]|`` for both Hamiltonian forms (no interior needed)."""
    r = build_reflection(params.dim)
    return max(
        max_abs(commutator(build_hamiltonian_ladder(params), r)),
        max_abs(commutator(build_hamiltonian_su11(params), r)),
    )
