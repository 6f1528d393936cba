"""Numerical checks of the deformed Heisenberg and su(1,1) identities.

Products of truncated ladder matrices are wrong only within a few levels of
the top of the basis. Each check therefore measures its residual on the
leading block left after removing ``margin`` top levels, where the margin is
the ladder-step reach of the identity under test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import (
    ModelParams,
    bargmann_indices,
    build_annihilation,
    build_casimir,
    build_reflection,
    build_su11_generators,
    parity_signs,
)
from .linalg import max_abs

HEISENBERG_MARGIN = 2
REFLECTION_MARGIN = 1
SU11_MARGIN = 4
TOLERANCE = 1e-10


@dataclass(frozen=True)
class InteriorBlock:
    """Leading block of ``matrix`` with the top ``margin`` levels removed."""

    matrix: np.ndarray
    margin: int

    def __post_init__(self):
        if not 0 <= self.margin < self.matrix.shape[0]:
            raise ValueError(
                f"margin {self.margin} leaves no interior in dim {self.matrix.shape[0]}"
            )

    @property
    def size(self) -> int:
        return self.matrix.shape[0] - self.margin

    @property
    def block(self) -> np.ndarray:
        k = self.size
        return self.matrix[:k, :k]

    def max_abs(self) -> float:
        return max_abs(self.block)


def interior_residual(diff: np.ndarray, margin: int) -> float:
    return InteriorBlock(diff, margin).max_abs()


def commutator(x, y):
    return x @ y - y @ x


def anticommutator(x, y):
    return x @ y + y @ x


def check_deformed_heisenberg(params: ModelParams, margin: int = HEISENBERG_MARGIN) -> float:
    """Max residual of ``[a,a+] = 1 + 2 mu R`` and ``[a,R] = 2aR``, ``[a+,R] = 2a+R``.

    The reflection identities are measured with margin 1. Passing ``margin=0``
    exposes the truncation corner, where the residual equals ``[dim]_mu``.
    """
    a = build_annihilation(params)
    ad = a.conj().T
    r = build_reflection(params.dim)
    eye = np.eye(params.dim)
    heis = interior_residual(commutator(a, ad) - (eye + 2 * params.mu * r), margin)
    refl_margin = min(margin, REFLECTION_MARGIN)
    ar = interior_residual(commutator(a, r) - 2 * a @ r, refl_margin)
    adr = interior_residual(commutator(ad, r) - 2 * ad @ r, refl_margin)
    return max(heis, ar, adr)


def check_su11(params: ModelParams) -> float:
    """Max residual over ``[K0,K+] = K+``, ``[K0,K-] = -K-``, ``[K-,K+] = 2K0``."""
    k0, kp, km = build_su11_generators(params)
    return max(
        interior_residual(commutator(k0, kp) - kp, SU11_MARGIN),
        interior_residual(commutator(k0, km) + km, SU11_MARGIN),
        interior_residual(commutator(km, kp) - 2 * k0, SU11_MARGIN),
    )


def casimir_target(params: ModelParams) -> np.ndarray:
    """``mu^2/4 - mu (-1)^n / 4 - 3/16`` per level."""
    mu = params.mu
    return mu**2 / 4 - mu * parity_signs(params.dim) / 4 - 3.0 / 16


def bargmann_target(params: ModelParams) -> np.ndarray:
    """``k (k - 1)`` with ``k = k_plus`` on even levels, ``k_minus`` on odd."""
    kp, km = bargmann_indices(params.mu)
    k = np.where(parity_signs(params.dim) > 0, kp, km)
    return k * (k - 1)


def check_casimir_spectrum(params: ModelParams) -> float:
    """Casimir matrix against its analytic diagonal and the Bargmann form."""
    c = build_casimir(params)
    diff_formula = c - np.diag(casimir_target(params))
    diff_bargmann = c - np.diag(bargmann_target(params))
    return max(
        interior_residual(diff_formula, SU11_MARGIN),
        interior_residual(diff_bargmann, SU11_MARGIN),
    )


def check_casimir_commutes(params: ModelParams, relative: bool = True) -> float:
    """Max ``|[C, G]|`` over the generators on the margin-4 interior.

    ``C`` is a difference of products of size ``~dim^2``, so rounding in
    ``[C, G]`` grows like ``dim^3``. With ``relative`` the residual is divided
    by ``max|K0|^2 * max|G|`` on the interior, which keeps it dimension-free.
    """
    gens = build_su11_generators(params)
    c = build_casimir(params)
    k = params.dim - SU11_MARGIN
    k0_scale = max_abs(gens[0][:k, :k]) ** 2
    worst = 0.0
    for g in gens:
        resid = interior_residual(commutator(c, g), SU11_MARGIN)
        if relative:
            resid /= max(1.0, k0_scale * max_abs(g[:k, :k]))
        worst = max(worst, resid)
    return worst


def check_anticommutator(params: ModelParams) -> float:
    """``{K+,K-} = 2 K0^2 - 2 C``."""
    k0, kp, km = build_su11_generators(params)
    c = build_casimir(params)
    diff = anticommutator(kp, km) - 2 * k0 @ k0 + 2 * c
    return interior_residual(diff, SU11_MARGIN)


CHECKS = {
    "deformed_heisenberg": check_deformed_heisenberg,
    "su11": check_su11,
    "casimir_spectrum": check_casimir_spectrum,
    "anticommutator": check_anticommutator,
}


def run_all(params: ModelParams) -> dict:
    """Residual of every algebra check, keyed by name."""
    return {name: check(params) for name, check in CHECKS.items()}
