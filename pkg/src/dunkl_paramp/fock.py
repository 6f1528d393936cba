"""Truncated Fock-space matrices for the Dunkl oscillator.

Every operator is a dense complex ``(dim, dim)`` numpy array indexed as
``M[bra, ket]`` over the basis ``|0>, ..., |dim-1>``. States are complex
vectors of length ``dim``.

The Dunkl ladder operators act as

    a |n>  = sqrt([n]_mu)   |n-1>
    a+|n>  = sqrt([n+1]_mu) |n+1>

with the Dunkl number ``[n]_mu = n + mu (1 - (-1)^n)``. Products of truncated
matrices are exact except near the top of the basis. Identity checks should
be restricted to an interior block (see :mod:`dunkl_paramp.algebra`).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InstabilityError, ParameterError

DEFAULT_DIM = 128
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the amplifier plus the Fock truncation.

    Attributes
    ----------
    mu : float
        Dunkl deformation, must exceed -1/2.
    omega : float
        Field frequency (hbar = 1), positive.
    f_mag : float
        Pump magnitude ``|f|``, non-negative.
    f_phase : float
        Pump phase ``theta``; reduced into ``[0, 2 pi)``.
    dim : int
        Fock truncation ``D``; even and at least 4.
    """

    mu: float = 0.0
    omega: float = 1.0
    f_mag: float = 0.0
    f_phase: float = 0.0
    dim: int = DEFAULT_DIM

    def __post_init__(self):
        for name in ("mu", "omega", "f_mag", "f_phase"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if not self.mu > -0.5:
            raise ParameterError(f"mu must be > -1/2, got {self.mu!r}")
        if not self.omega > 0:
            raise ParameterError(f"omega must be > 0, got {self.omega!r}")
        if self.f_mag < 0:
            raise ParameterError(f"f_mag must be >= 0, got {self.f_mag!r}")
        if isinstance(self.dim, bool) or int(self.dim) != self.dim:
            raise ParameterError(f"dim must be an integer, got {self.dim!r}")
        if self.dim < 4 or self.dim % 2:
            raise ParameterError(f"dim must be even and >= 4, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "f_phase", float(self.f_phase) % TWO_PI)

    @property
    def f(self) -> complex:
        """Complex pump ``|f| e^{i theta}``."""
        return cmath.rect(self.f_mag, self.f_phase)

    @property
    def is_stable(self) -> bool:
        return self.omega > 2.0 * self.f_mag

    def require_stable(self) -> None:
        if not self.is_stable:
            raise InstabilityError(self.omega, self.f_mag)

    @property
    def rabi_frequency(self) -> float:
        """Generalized Rabi frequency ``2 sqrt(omega^2 - 4|f|^2)``."""
        self.require_stable()
        return 2.0 * math.sqrt(self.omega**2 - 4.0 * self.f_mag**2)

    def with_dim(self, dim: int) -> "ModelParams":
        return ModelParams(self.mu, self.omega, self.f_mag, self.f_phase, dim)


def _check_mu(mu):
    if not mu > -0.5:
        raise ParameterError(f"mu must be > -1/2, got {mu!r}")


def dunkl_number(n: int, mu: float) -> float:
    """Return ``[n]_mu``: ``n`` for even ``n``, ``n + 2 mu`` for odd ``n``."""
    if int(n) != n or n < 0:
        raise ParameterError(f"Dunkl number needs an integer n >= 0, got {n!r}")
    _check_mu(mu)
    n = int(n)
    return float(n + 2.0 * mu) if n % 2 else float(n)


def dunkl_numbers(dim: int, mu: float) -> np.ndarray:
    """Vector ``[0]_mu, ..., [dim-1]_mu``."""
    _check_mu(mu)
    n = np.arange(dim, dtype=float)
    return n + 2.0 * mu * (np.arange(dim) % 2)


def parity_signs(dim: int) -> np.ndarray:
    """``(-1)^n`` for ``n = 0..dim-1``."""
    return np.where(np.arange(dim) % 2, -1.0, 1.0)


def build_annihilation(params: ModelParams) -> np.ndarray:
    """Dunkl annihilation operator with ``a[n-1, n] = sqrt([n]_mu)``."""
    dim = params.dim
    a = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(1, dim)
    a[idx - 1, idx] = np.sqrt(dunkl_numbers(dim, params.mu)[1:])
    return a


def build_creation(params: ModelParams) -> np.ndarray:
    return build_annihilation(params).conj().T.copy()


def build_reflection(dim: int) -> np.ndarray:
    """Parity operator ``diag(+1, -1, +1, ...)``."""
    return np.diag(parity_signs(dim)).astype(complex)


def build_number(params: ModelParams) -> np.ndarray:
    """``N_mu = a+ a``; diagonal ``[n]_mu`` on the full basis."""
    a = build_annihilation(params)
    return a.conj().T @ a


def k0_eigenvalues(dim: int, mu: float) -> np.ndarray:
    """Analytic diagonal of ``K0``: ``([n]_mu + 1/2 + mu (-1)^n) / 2``."""
    return 0.5 * (dunkl_numbers(dim, mu) + 0.5 + mu * parity_signs(dim))


def build_su11_generators(params: ModelParams):
    """Return ``(K0, Kplus, Kminus)`` built from the ladder matrices.

    ``K0 = (a+ a + a a+)/4`` except its last diagonal entry, which is set
    analytically because the truncated ``a a+`` misses the ``[dim]_mu`` term.
    """
    a = build_annihilation(params)
    ad = a.conj().T
    k0 = 0.25 * (ad @ a + a @ ad)
    last = params.dim - 1
    k0[last, last] = k0_eigenvalues(params.dim, params.mu)[last]
    kplus = 0.5 * (ad @ ad)
    kminus = 0.5 * (a @ a)
    return k0, kplus, kminus


def build_casimir(params: ModelParams) -> np.ndarray:
    """``C = K0^2 - K0 - K+ K-``."""
    k0, kp, km = build_su11_generators(params)
    return k0 @ k0 - k0 - kp @ km


def bargmann_indices(mu: float):
    """``(k_plus, k_minus)`` for the even and odd sectors."""
    _check_mu(mu)
    return 0.25 + 0.5 * mu, 0.75 + 0.5 * mu


# ---------------------------------------------------------------------------
# state arithmetic

def fock_state(n: int, dim: int) -> np.ndarray:
    if int(n) != n or not 0 <= n < dim:
        raise ParameterError(f"Fock label n={n!r} outside basis of size {dim}")
    v = np.zeros(dim, dtype=complex)
    v[int(n)] = 1.0
    return v


def _check_dims(m: np.ndarray, v: np.ndarray):
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParameterError(f"operator must be square, got shape {m.shape}")
    if v.shape != (m.shape[1],):
        raise ParameterError(
            f"dimension mismatch: operator {m.shape} vs state {v.shape}"
        )


def apply(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    _check_dims(m, v)
    return m @ v


def expectation(m: np.ndarray, v: np.ndarray) -> complex:
    """``<v|M|v>`` (no normalization applied)."""
    _check_dims(m, v)
    return complex(np.vdot(v, m @ v))


def norm(v: np.ndarray) -> float:
    return float(np.linalg.norm(v))


def tail_mass(v: np.ndarray, fraction: float = 0.1) -> float:
    """Summed ``|amplitude|^2`` over the top ``fraction`` of basis indices."""
    dim = v.shape[0]
    count = max(1, math.ceil(fraction * dim))
    return float(np.sum(np.abs(v[dim - count:]) ** 2))


# ---------------------------------------------------------------------------
# debug serialization: "dim" header line then one row per line of "re im" pairs

def dumps_matrix(m: np.ndarray) -> str:
    lines = [str(m.shape[0])]
    for row in np.asarray(m, dtype=complex):
        lines.append(" ".join(f"{z.real:.17g} {z.imag:.17g}" for z in row))
    return "\n".join(lines) + "\n"


def loads_matrix(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    dim = int(lines[0])
    if len(lines) != dim + 1:
        raise ValueError(f"expected {dim} rows, found {len(lines) - 1}")
    m = np.empty((dim, dim), dtype=complex)
    for i, line in enumerate(lines[1:]):
        vals = np.array(line.split(), dtype=float)
        if vals.size != 2 * dim:
            raise ValueError(f"row {i}: expected {2 * dim} numbers, found {vals.size}")
        m[i] = vals[0::2] + 1j * vals[1::2]
    return m
