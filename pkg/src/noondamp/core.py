"""Damped two-mode NOON state: coefficients, characteristic function, matrix form.

Basis ordering for every dense matrix in this package is fixed as::

    [|00>, |10>, ..., |N0>, |01>, ..., |0N>, |NN>]

so a state on N photons lives in a (2N + 2)-dimensional space.  The |NN>
row/column is always zero for the damped state itself; it is only occupied
by the separable comparison states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MAX_PHOTONS = 30


@dataclass(frozen=True)
class DampingParams:
    """Physical inputs, given as dimensionless products with the elapsed time.

    ``gamma_amp_*`` are amplitude-damping rates and ``gamma_phase_*`` dephasing
    rates.  With ``time=1`` (the default) the rates are read directly as the
    products Gamma*t and gamma*t.
    """

    n_photons: int
    gamma_amp_1: float = 0.0
    gamma_amp_2: float = 0.0
    gamma_phase_1: float = 0.0
    gamma_phase_2: float = 0.0
    time: float = 1.0

    def __post_init__(self):
        if isinstance(self.n_photons, bool) or int(self.n_photons) != self.n_photons:
            raise ValueError(f"n_photons must be an integer, got {self.n_photons!r}")
        if not 1 <= self.n_photons <= MAX_PHOTONS:
            raise ValueError(f"n_photons must be in [1, {MAX_PHOTONS}], got {self.n_photons}")
        for name in ("gamma_amp_1", "gamma_amp_2", "gamma_phase_1", "gamma_phase_2", "time"):
            value = getattr(self, name)
            if not (value >= 0.0) or math.isnan(value):
                raise ValueError(f"{name} must be non-negative, got {value!r}")

    @classmethod
    def symmetric(cls, n_photons: int, amp_t: float = 0.0, phase_t: float = 0.0) -> "DampingParams":
        """Equal damping on both modes, specified by the products Gamma*t, gamma*t."""
        return cls(n_photons, amp_t, amp_t, phase_t, phase_t, 1.0)

    @property
    def mean_amp(self) -> float:
        return 0.5 * (self.gamma_amp_1 + self.gamma_amp_2)

    @property
    def mean_phase(self) -> float:
        return 0.5 * (self.gamma_phase_1 + self.gamma_phase_2)

    # products actually entering the formulas
    @property
    def amp_t(self) -> tuple[float, float]:
        return self.gamma_amp_1 * self.time, self.gamma_amp_2 * self.time

    @property
    def mean_amp_t(self) -> float:
        return self.mean_amp * self.time

    @property
    def mean_phase_t(self) -> float:
        return self.mean_phase * self.time

    @property
    def is_symmetric(self) -> bool:
        return self.gamma_amp_1 == self.gamma_amp_2


@dataclass(frozen=True)
class DampedNoonCoefficients:
    """Compact form of the damped state.

    ``c_a[m-1]`` is the weight of |m0> and ``c_b[m-1]`` that of |0m>, for
    m = 1..N; ``c_off`` couples |N0> and |0N>.
    """

    n_photons: int
    c_00: float
    c_a: tuple[float, ...]
    c_b: tuple[float, ...]
    c_off: float

    def __post_init__(self):
        n = self.n_photons
        if len(self.c_a) != n or len(self.c_b) != n:
            raise ValueError("c_a and c_b must each hold n_photons entries")

    @property
    def c_N0(self) -> float:
        return self.c_a[-1]

    @property
    def c_0N(self) -> float:
        return self.c_b[-1]

    @property
    def trace(self) -> float:
        return self.c_00 + math.fsum(self.c_a) + math.fsum(self.c_b)

    def is_symmetric(self, tol: float = 0.0) -> bool:
        return all(abs(a - b) <= tol for a, b in zip(self.c_a, self.c_b))

    def validate(self, tol: float = 1e-12) -> None:
        entries = (self.c_00, *self.c_a, *self.c_b, self.c_off)
        if any(not (-tol <= x <= 1 + tol) for x in entries):
            raise ValueError("coefficients must lie in [0, 1]")
        if abs(self.trace - 1.0) > tol:
            raise ValueError(f"coefficients do not have unit trace ({self.trace!r})")
        if self.c_off**2 > self.c_N0 * self.c_0N + tol:
            raise ValueError("coherence block is not positive semidefinite")


def evolve_coefficients(p: DampingParams) -> DampedNoonCoefficients:
    """Closed-form state at time ``p.time`` in coefficient form."""
    n = p.n_photons
    amp1, amp2 = p.amp_t
    c_a = _mode_weights(n, amp1)
    c_b = _mode_weights(n, amp2)
    lost1 = -math.expm1(-amp1)
    lost2 = -math.expm1(-amp2)
    # vacuum term appears once in each mode's binomial sum
    c_00 = 0.5 * (lost1**n + lost2**n)
    c_off = 0.5 * math.exp(-n * p.mean_amp_t - n * n * p.mean_phase_t)
    return DampedNoonCoefficients(n, c_00, c_a, c_b, c_off)


def _mode_weights(n: int, amp_t: float) -> tuple[float, ...]:
    kept = math.exp(-amp_t)
    lost = -math.expm1(-amp_t)
    return tuple(0.5 * math.comb(n, m) * lost ** (n - m) * kept**m for m in range(1, n + 1))


def basis_labels(n: int) -> list[tuple[int, int]]:
    """Occupation numbers (n_a, n_b) for each basis index."""
    return [(0, 0)] + [(m, 0) for m in range(1, n + 1)] + [(0, m) for m in range(1, n + 1)] + [(n, n)]


def index_a(m: int) -> int:
    """Matrix index of |m0> (m >= 1)."""
    return m


def index_b(n: int, m: int) -> int:
    """Matrix index of |0m> (m >= 1)."""
    return n + m


@dataclass
class FockDensityMatrix:
    """Dense real symmetric matrix over the truncated two-mode basis."""

    n_photons: int
    entries: np.ndarray
    basis: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.basis:
            self.basis = basis_labels(self.n_photons)
        dim = 2 * self.n_photons + 2
        if self.entries.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got {self.entries.shape}")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def to_matrix(c: DampedNoonCoefficients) -> FockDensityMatrix:
    n = c.n_photons
    rho = np.zeros((2 * n + 2, 2 * n + 2))
    rho[0, 0] = c.c_00
    for m in range(1, n + 1):
        rho[index_a(m), index_a(m)] = c.c_a[m - 1]
        rho[index_b(n, m), index_b(n, m)] = c.c_b[m - 1]
    rho[index_a(n), index_b(n, n)] = rho[index_b(n, n), index_a(n)] = c.c_off
    return FockDensityMatrix(n, rho)


def laguerre(n: int, x: float) -> float:
    """L_n(x) as the finite sum with exact binomials."""
    return math.fsum(math.comb(n, m) * (-x) ** m / math.factorial(m) for m in range(n + 1))


def assoc_laguerre(n: int, alpha: int, x: float) -> float:
    return math.fsum(
        math.comb(n + alpha, n - m) * (-x) ** m / math.factorial(m) for m in range(n + 1)
    )


def characteristic_function(p: DampingParams, mu1: complex, mu2: complex) -> complex:
    """chi(mu) = Tr[rho D(mu1) (x) D(mu2)] of the damped state."""
    n = p.n_photons
    amp1, amp2 = p.amp_t
    r1, r2 = abs(mu1) ** 2, abs(mu2) ** 2
    gauss = math.exp(-0.5 * (r1 + r2))
    diag = laguerre(n, r1 * math.exp(-amp1)) + laguerre(n, r2 * math.exp(-amp2))
    decay = math.exp(-n * p.mean_amp_t - n * n * p.mean_phase_t)
    m1, m2 = complex(mu1), complex(mu2)
    coh = ((-m1.conjugate() * m2) ** n + (-m1 * m2.conjugate()) ** n) / math.factorial(n)
    return 0.5 * gauss * (diag + decay * coh)


def noon_characteristic_function(n: int, mu1: complex, mu2: complex) -> complex:
    """Characteristic function of the undamped NOON state."""
    r1, r2 = abs(mu1) ** 2, abs(mu2) ** 2
    m1, m2 = complex(mu1), complex(mu2)
    coh = ((-m1.conjugate() * m2) ** n + (-m1 * m2.conjugate()) ** n) / math.factorial(n)
    return 0.5 * math.exp(-0.5 * (r1 + r2)) * (laguerre(n, r1) + laguerre(n, r2) + coh)


def displacement_matrix_element(m: int, n: int, mu: complex) -> complex:
    """<m|D(mu)|n> for a single mode."""
    if m < 0 or n < 0:
        raise ValueError("Fock indices must be non-negative")
    mu = complex(mu)
    x = abs(mu) ** 2
    gauss = math.exp(-0.5 * x)
    if m >= n:
        k = m - n
        pref = math.sqrt(math.factorial(n) / math.factorial(m))
        return pref * mu**k * gauss * assoc_laguerre(n, k, x)
    k = n - m
    pref = math.sqrt(math.factorial(m) / math.factorial(n))
    return pref * (-mu.conjugate()) ** k * gauss * assoc_laguerre(m, k, x)


def characteristic_from_matrix(rho: FockDensityMatrix, mu1: complex, mu2: complex) -> complex:
    """Tr[rho D(mu1) (x) D(mu2)] summed element by element over the dense matrix."""
    labels = rho.basis
    d1 = {}
    d2 = {}
    total = 0j
    for j, (ja, jb) in enumerate(labels):
        for k, (ka, kb) in enumerate(labels):
            r = rho.entries[j, k]
            if r == 0.0:
                continue
            if (ka, ja) not in d1:
                d1[ka, ja] = displacement_matrix_element(ka, ja, mu1)
            if (kb, jb) not in d2:
                d2[kb, jb] = displacement_matrix_element(kb, jb, mu2)
            total += r * d1[ka, ja] * d2[kb, jb]
    return total

