"""Phase estimation with the damped state: direct use vs. distill-then-measure.

The measured observable is A = |N0><0N| + |0N><N0|.  "Resolution" is 1/deviation.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

from .core import DampedNoonCoefficients, DampingParams, evolve_coefficients
from .measures import (
    binary_entropy,
    coherent_information,
    distillable_entanglement_dephasing,
    relative_entropy_of_entanglement,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetrologyPoint:
    phi: float
    exp_A: float
    delta_A: float
    delta_phi: float  # math.inf where sin(N phi) = 0
    strategy: str = "direct"


@dataclass(frozen=True)
class StrategyComparison:
    delta_phi_best: float
    delta_phi_dl: float
    delta_phi_du: float
    delta_phi_d: Optional[float] = None
    ratio: Optional[float] = None


def expectation_A(c: DampedNoonCoefficients, phi: float) -> float:
    return 2.0 * c.c_off * math.cos(c.n_photons * phi)


def second_moment_A(c: DampedNoonCoefficients) -> float:
    # A^2 projects onto span{|N0>, |0N>}
    return c.c_N0 + c.c_0N


def _direct_parts(p: DampingParams, phi: float) -> tuple[float, float]:
    n = p.n_photons
    amp1, amp2 = p.amp_t
    decay = math.exp(-n * p.mean_amp_t - n * n * p.mean_phase_t)
    var = 0.5 * (math.exp(-n * amp1) + math.exp(-n * amp2)) - decay**2 * math.cos(n * phi) ** 2
    slope = n * decay * abs(math.sin(n * phi))
    return math.sqrt(max(var, 0.0)), slope


def phase_deviation(p: DampingParams, phi: float) -> float:
    """Error propagation for A; ``math.inf`` where the signal slope vanishes."""
    num, slope = _direct_parts(p, phi)
    if slope == 0.0 or slope < 1e-300:
        return math.inf
    return num / slope


def metrology_point(p: DampingParams, phi: float) -> MetrologyPoint:
    c = evolve_coefficients(p)
    num, _ = _direct_parts(p, phi)
    return MetrologyPoint(phi, expectation_A(c, phi), num, phase_deviation(p, phi))


def best_phase_deviation(p: DampingParams) -> float:
    n = p.n_photons
    amp1, amp2 = p.amp_t
    return math.exp(n * n * p.mean_phase_t) * math.sqrt(0.5 * (math.exp(n * amp1) + math.exp(n * amp2))) / n


def distillation_phase_deviation(n: int, e_d: float) -> float:
    """Mixture of Heisenberg-limited (prob. e_d) and shot-noise-limited runs."""
    if not 0.0 <= e_d <= 1.0:
        raise ValueError(f"distillation rate must lie in [0, 1], got {e_d!r}")
    return math.sqrt(e_d / n**2 + (1.0 - e_d) / n)


def clamp_rate(value: float, name: str = "rate") -> float:
    if value < 0.0 or value > 1.0:
        clamped = min(max(value, 0.0), 1.0)
        log.info("clamping %s %.6g to %.6g for use as a distillation rate", name, value, clamped)
        return clamped
    return value


def deviation_bounds_amplitude(
    p: Optional[DampingParams] = None,
    *,
    n: Optional[int] = None,
    e_r: Optional[float] = None,
    i_c: Optional[float] = None,
) -> tuple[float, float]:
    """(lower, upper) deviation of the distillation strategy.

    Either pass symmetric ``p`` (closed-form measures) or give ``n``, ``e_r``
    and ``i_c`` directly, e.g. from the numeric minimizer.
    """
    if p is not None:
        c = evolve_coefficients(p)
        n = p.n_photons
        e_r = relative_entropy_of_entanglement(c)
        i_c = coherent_information(c)
    if n is None or e_r is None or i_c is None:
        raise ValueError("need either params or n, e_r and i_c")
    lower = distillation_phase_deviation(n, clamp_rate(e_r, "E_r"))
    upper = distillation_phase_deviation(n, clamp_rate(i_c, "I_c"))
    return lower, upper


def performance_ratio_dephasing(n: int, gamma_t: float) -> float:
    """(distill deviation / best direct deviation)^2 without amplitude damping."""
    if n < 1 or gamma_t < 0:
        raise ValueError("need n >= 1 and gamma_t >= 0")
    h = binary_entropy(0.5 + 0.5 * math.exp(-n * n * gamma_t))
    return (1.0 + (n - 1) * h) * math.exp(-2.0 * n * n * gamma_t)


def compare_strategies(p: DampingParams) -> StrategyComparison:
    best = best_phase_deviation(p)
    lower, upper = deviation_bounds_amplitude(p)
    if p.gamma_amp_1 == 0.0 and p.gamma_amp_2 == 0.0:
        e_d = distillable_entanglement_dephasing(p.n_photons, p.mean_phase_t)
        return StrategyComparison(
            best, lower, upper,
            distillation_phase_deviation(p.n_photons, e_d),
            performance_ratio_dephasing(p.n_photons, p.mean_phase_t),
        )
    return StrategyComparison(best, lower, upper)
