"""Closed-form entanglement quantities of the damped NOON state (bits)."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Optional

from .core import DampedNoonCoefficients, DampingParams, evolve_coefficients

SYMMETRY_TOL = 1e-14


class UnsupportedCaseError(ValueError):
    """Closed form does not cover the input; use :mod:`noondamp.oracle` instead."""


def xlog2x(x: float) -> float:
    return x * math.log2(x) if x > 0.0 else 0.0


def binary_entropy(eps: float) -> float:
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"binary_entropy needs a probability, got {eps!r}")
    return -xlog2x(eps) - xlog2x(1.0 - eps)


@dataclass(frozen=True)
class SeparableEdgeState:
    """Separable state of the edge family: diagonal plus a |N0>,|0N> coherence.

    The coherence must satisfy ``d_off**2 == d_00 * d_NN``.
    """

    n_photons: int
    d_00: float
    d_a: tuple[float, ...]
    d_b: tuple[float, ...]
    d_off: float
    d_NN: float

    @property
    def d_N0(self) -> float:
        return self.d_a[-1]

    @property
    def d_0N(self) -> float:
        return self.d_b[-1]

    @property
    def trace(self) -> float:
        return self.d_00 + math.fsum(self.d_a) + math.fsum(self.d_b) + self.d_NN

    def edge_residual(self) -> float:
        return self.d_off**2 - self.d_00 * self.d_NN


def _require_symmetric(c: DampedNoonCoefficients) -> None:
    scale = max(max(c.c_a), max(c.c_b), 1e-300)
    if not c.is_symmetric(SYMMETRY_TOL * scale):
        raise UnsupportedCaseError(
            "asymmetric amplitude damping has no closed form; "
            "use noondamp.oracle.minimize_relative_entropy"
        )


def extremal_separable_state(c: DampedNoonCoefficients) -> SeparableEdgeState:
    """Minimizer of the relative entropy for symmetric amplitude damping."""
    _require_symmetric(c)
    n = c.n_photons
    c00, cn, cc = c.c_00, c.c_N0, c.c_off
    if cc > cn * (1 + 1e-12):
        raise ValueError("coherence exceeds the |N0> weight")
    if c00 == 0.0:
        d00 = d_nn = d = 0.0
    else:
        s = cn + c00
        # (s - cc)(s + cc) with s - cc = c00 + (cn - cc); avoids cancellation when c00 is tiny
        lo = c00 + max(cn - cc, 0.0)
        hi = s + cc
        d00 = s * (s / hi) * (c00 / lo)
        d_nn = cc * (cc / hi) * (c00 / lo)
        d = cc * (s / hi) * (c00 / lo)
    d_edge = cn - d_nn
    d_a = tuple(c.c_b[:-1]) + (d_edge,)
    return SeparableEdgeState(n, d00, d_a, d_a, d, d_nn)


def relative_entropy_of_entanglement(c: DampedNoonCoefficients) -> float:
    """Closed-form E_r, symmetric amplitude damping only."""
    _require_symmetric(c)
    s = c.c_00 + c.c_N0
    if s <= 0.0:
        return 0.0
    eps = min((s + c.c_off) / (2.0 * s), 1.0)
    return 2.0 * s * (1.0 - binary_entropy(eps))


def relative_entropy_trace_form(c: DampedNoonCoefficients, sigma: SeparableEdgeState) -> float:
    """Sum over the non-cancelling eigen-terms of Tr rho(log rho - log sigma).

    Only valid for a sigma sharing rho's eigenbasis outside the |00>,|NN>
    subspace, i.e. the symmetric extremal state.
    """

    def term(x: float, y: float) -> float:
        if x <= 0.0:
            return 0.0
        if y <= 0.0:
            return math.inf
        return x * math.log2(x / y)

    c_plus, c_minus = c.c_N0 + c.c_off, c.c_N0 - c.c_off
    if c_minus <= 8 * sys.float_info.epsilon * c_plus:
        c_minus = 0.0  # rounding residue of an exactly rank-1 block
    d_plus, d_minus = sigma.d_N0 + sigma.d_off, sigma.d_N0 - sigma.d_off
    return term(c.c_00, sigma.d_00) + term(c_plus, d_plus) + term(c_minus, d_minus)


def eof_upper_bound(c: DampedNoonCoefficients) -> float:
    """Entanglement of the |N0>,|0N> block weighted by its population."""
    p = c.c_N0 + c.c_0N
    if p <= 0.0:
        return 0.0
    conc = min(2.0 * c.c_off / p, 1.0)
    return p * binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - conc * conc)))


def coherence_block_eigenvalues(c: DampedNoonCoefficients) -> tuple[float, float]:
    mean = 0.5 * (c.c_N0 + c.c_0N)
    half_gap = math.hypot(0.5 * (c.c_N0 - c.c_0N), c.c_off)
    return mean + half_gap, max(mean - half_gap, 0.0)


def coherent_information(c: DampedNoonCoefficients) -> float:
    """Closed block-eigenvalue expression for the coherent information.

    Matches the hashing quantity S(b) - S(ab) only when c_00 = 0; see
    :func:`coherent_information_exact` for the entropy-difference form.
    """
    c_plus, c_minus = coherence_block_eigenvalues(c)
    s_b = math.fsum(c.c_b)
    return (
        -xlog2x(c.c_N0)
        - xlog2x(s_b)
        + math.fsum(xlog2x(x) for x in c.c_b[:-1])
        + xlog2x(c_plus)
        + xlog2x(c_minus)
    )


def coherent_information_exact(c: DampedNoonCoefficients) -> float:
    """S(rho_b) - S(rho) from the known spectrum of the coefficient form."""
    c_plus, c_minus = coherence_block_eigenvalues(c)
    neg_s_ab = (
        xlog2x(c.c_00)
        + math.fsum(xlog2x(x) for x in c.c_a[:-1])
        + math.fsum(xlog2x(x) for x in c.c_b[:-1])
        + xlog2x(c_plus)
        + xlog2x(c_minus)
    )
    # mode b: vacuum collects |00> and every |m0>
    s_b = -xlog2x(c.c_00 + math.fsum(c.c_a)) - math.fsum(xlog2x(x) for x in c.c_b)
    return s_b + neg_s_ab


def distillable_entanglement_dephasing(n: int, gamma_t: float) -> float:
    """Exact distillable entanglement when only dephasing acts."""
    if n < 1 or gamma_t < 0:
        raise ValueError("need n >= 1 and gamma_t >= 0")
    return 1.0 - binary_entropy(0.5 + 0.5 * math.exp(-n * n * gamma_t))


@dataclass(frozen=True)
class EntanglementReport:
    e_r: float
    e_f_upper: float
    i_c: float
    i_c_exact: float
    e_d_exact: Optional[float]
    c_plus: float
    c_minus: float
    d_plus: float
    d_minus: float


def entanglement_report(p: DampingParams) -> EntanglementReport:
    """All closed-form measures at one symmetric parameter point."""
    c = evolve_coefficients(p)
    sigma = extremal_separable_state(c)
    e_d = None
    if p.gamma_amp_1 == 0.0 and p.gamma_amp_2 == 0.0:
        e_d = distillable_entanglement_dephasing(p.n_photons, p.mean_phase_t)
    return EntanglementReport(
        e_r=relative_entropy_of_entanglement(c),
        e_f_upper=eof_upper_bound(c),
        i_c=coherent_information(c),
        i_c_exact=coherent_information_exact(c),
        e_d_exact=e_d,
        c_plus=c.c_N0 + c.c_off,
        c_minus=c.c_N0 - c.c_off,
        d_plus=sigma.d_N0 + sigma.d_off,
        d_minus=sigma.d_N0 - sigma.d_off,
    )
