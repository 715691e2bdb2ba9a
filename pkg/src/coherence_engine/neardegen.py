"""Dynamics of the nearly degenerate V-type three-level system.

The excited levels sit at omega1 and omega2 = omega1 + delta with a
splitting small against omega1.  Keeping the slowly oscillating
cross-channel terms (instead of dropping them by a strict secular
approximation) yields a coherence-vector equation of the same affine
shape as the degenerate case, but with rates evaluated at the two
transition frequencies and an extra coupling of strength delta between
the symmetric and antisymmetric coherences.

The equation is written for the dressed combinations
rho_plus/minus = (e^{-i delta t} rho21 +- e^{i delta t} rho12)/2 of the
interaction-picture state.  Those combinations equal the plain
Schroedinger-picture coherences, so the generator here is
time-independent and acts on the ordinary coherence vector; the
off-diagonal -i*delta entries are exactly the commutator of the excited
splitting.

The reduced description is trusted only inside the window
tau_S << t << 1/delta (tau_S = 1/omega1); integrations beyond
t * delta = 0.3 emit a warning on the module logger.  At very late
times the cross terms average out and the system thermalizes as two
independent two-level systems.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .bath import BathSpec, RatePair, rate_derivative, rates_at
from .bloch import DensityMatrix
from .dynamics import ALIGNED_TOL, CoherenceVector, GeneratorMatrix
from .numerics import SolverConfig, integrate_ode

logger = logging.getLogger(__name__)

VALIDITY_WINDOW_LIMIT = 0.3


@dataclass(frozen=True)
class NearDegenerateSystem:
    """Excited levels at omega1 and omega2 >= omega1 with a small splitting.

    The guard ratio bounds delta / omega1; the default 0.1 keeps the
    perturbative treatment honest but can be widened deliberately.
    """

    omega1: float
    omega2: float
    max_delta_ratio: float = 0.1

    def __post_init__(self) -> None:
        if not (self.omega1 > 0.0 and self.omega2 > 0.0):
            raise ValueError("both excited energies must be positive")
        if self.omega2 < self.omega1:
            raise ValueError("omega2 must not be below omega1")
        if self.delta / self.omega1 >= self.max_delta_ratio:
            raise ValueError(
                f"splitting ratio {self.delta / self.omega1:.3g} exceeds "
                f"guard {self.max_delta_ratio:.3g}"
            )

    @property
    def delta(self) -> float:
        return self.omega2 - self.omega1


class DressedCoherenceVector(CoherenceVector):
    """Coherence vector built from the dressed coherence combinations.

    Carries the same four real components and reconstruction rules as
    CoherenceVector; the dressing phases cancel between the interaction
    picture and the splitting, so no extra bookkeeping is needed to
    undress at a given time.
    """


@dataclass(frozen=True)
class PerturbationCoefficients:
    """Initial-condition combinations entering the first-order correction.

    All six are dimensionless functions of the initial data (a, b, c, d),
    the Boltzmann factor x, the base emission rate, and the differential
    rates.
    """

    a1: float
    a2: float
    a3: float
    b1: float
    b2: float
    b3: float


def perturbation_coefficients(
    init: Tuple[float, float, float, float],
    base_rates: RatePair,
    diff_rates: RatePair,
    x: float,
) -> PerturbationCoefficients:
    """Closed-form coefficient set for the splitting correction.

    base_rates holds the emission/absorption pair at omega1 and
    diff_rates the difference quotients across the splitting.
    """
    a, b, c, _d = (float(v) for v in init)
    g = base_rates.gamma_plus
    dgp, dgm = diff_rates.gamma_plus, diff_rates.gamma_minus
    big_a = 1.0 + x
    big_b = 1.0 + 2.0 * x
    return PerturbationCoefficients(
        a1=(2.0 * dgm * (1.0 + b + 2.0 * c) - dgp * (1.0 + 2.0 * x - b - 2.0 * c))
        / (4.0 * g * big_a),
        a2=dgp * (1.0 - 2.0 * a - b) / (2.0 * g),
        a3=(2.0 * dgm + dgp) * (big_b * b - 1.0 - 2.0 * c) / (4.0 * g * big_a),
        b1=(dgp - dgm) * (1.0 + b + 2.0 * c) / (2.0 * g * big_a),
        b2=dgp * (2.0 * a + b - 1.0) / (2.0 * g),
        b3=(dgp + dgm) * (1.0 + 2.0 * c - big_b * b) / (2.0 * g * big_a),
    )


def neardegenerate_generator(
    system: NearDegenerateSystem, bath: BathSpec
) -> GeneratorMatrix:
    """Affine generator of the dressed coherence-vector equation.

    Reduces entrywise to the degenerate generator when the splitting
    vanishes; for delta > 0 the (rho_plus, rho_minus) pair is coupled by
    -i delta.  The constant vector keeps the base-frequency emission
    rate.
    """
    r1 = rates_at(bath, system.omega1)
    r2 = rates_at(bath, system.omega2)
    p = bath.alignment
    delta = system.delta
    gp1, gm1 = r1.gamma_plus, r1.gamma_minus
    gp2, gm2 = r2.gamma_plus, r2.gamma_minus
    matrix = np.array(
        [
            [-gp2, gm2, -p * gp1, 0.0],
            [gp2 - gp1, -(gp1 + gm1 + gm2), p * (gp1 + gp2), 0.0],
            [0.5 * p * (gp1 - gp2), 0.5 * p * (gp1 + gm1 + gm2),
             -0.5 * (gp1 + gp2), -1j * delta],
            [0.0, 0.0, -1j * delta, -0.5 * (gp1 + gp2)],
        ],
        dtype=complex,
    )
    constant = np.array([0.0, -gp1, 0.5 * p * gp1, 0.0], dtype=complex)
    return GeneratorMatrix(matrix, constant)


def _warn_outside_window(t: float, system: NearDegenerateSystem) -> None:
    product = t * system.delta
    if product > VALIDITY_WINDOW_LIMIT:
        logger.warning(
            "reduced dynamics used outside its validity window: "
            "t * delta = %.3g exceeds %.3g (t=%.6g, delta=%.6g, tau_S=%.6g)",
            product,
            VALIDITY_WINDOW_LIMIT,
            t,
            system.delta,
            1.0 / system.omega1,
        )


def evolve_neardegenerate(
    pi0: CoherenceVector,
    system: NearDegenerateSystem,
    bath: BathSpec,
    t: float,
    tol: float = 1e-10,
) -> DressedCoherenceVector:
    """Integrate the dressed coherence-vector equation for a time t."""
    if t < 0.0:
        raise ValueError("evolution time must be non-negative")
    _warn_outside_window(t, system)
    gen = neardegenerate_generator(system, bath)
    m_real, b_real = gen.real_form()
    y0 = pi0.as_array()
    if t == 0.0:
        return DressedCoherenceVector.from_array(y0)

    def rhs(_t: float, y: np.ndarray) -> np.ndarray:
        return m_real @ y - b_real

    cfg = SolverConfig(abs_tol=tol, rel_tol=tol, max_iter=10 ** 6)
    sol = integrate_ode(rhs, y0, (0.0, t), cfg)
    return DressedCoherenceVector.from_array(sol.y[:, -1].real)


def _zeroth_order(t, init, x: float, g: float) -> np.ndarray:
    """Aligned degenerate solution as the real 4-vector (r22, r00, r+, d)."""
    a, b, c, d = init
    t = np.asarray(t, dtype=float)
    big_a = 1.0 + x
    big_b = 1.0 + 2.0 * x
    slow = np.exp(-g * t)
    fast = np.exp(-2.0 * big_a * g * t)
    r22 = (
        (1.0 + 2.0 * x - b - 2.0 * c)
        + 2.0 * big_a * (2.0 * a + b - 1.0) * slow
        + (1.0 + 2.0 * c - big_b * b) * fast
    ) / (4.0 * big_a)
    r00 = ((1.0 + b + 2.0 * c) + (-1.0 - 2.0 * c + big_b * b) * fast) / (2.0 * big_a)
    rp = ((-1.0 + big_b * (b + 2.0 * c)) + (1.0 + 2.0 * c - big_b * b) * fast) / (
        4.0 * big_a
    )
    return np.array([r22, r00, rp, d * slow])


def _first_order(
    t,
    init,
    x: float,
    g: float,
    diff: RatePair,
    coeffs: PerturbationCoefficients,
) -> np.ndarray:
    """First-order splitting correction (per unit delta), by direct solution.

    The correction obeys the degenerate equation driven by the source
    M1 . Pi(t), whose components split into constant, slow (e^{-g t}),
    and fast (e^{-2(1+x) g t}) parts.  Solving by variation of
    parameters gives constant responses, resonant t e^{-g t} terms from
    slow sources hitting the slow eigenmode, and mixed responses from
    the fast sources; the (rho00, rho_plus) block additionally mixes the
    two decay modes, handled through the combinations
    y1 + 2 y2 (pure slow) and x-weighted sums (pure fast).
    """
    a, b, c, d = init
    t = np.asarray(t, dtype=float)
    dgp = diff.gamma_plus
    big_a = 1.0 + x
    big_b = 1.0 + 2.0 * x
    p1 = (2.0 * a + b - 1.0) / 2.0
    c2 = (1.0 + 2.0 * c - big_b * b) / (4.0 * big_a)
    t_inf = (-1.0 + big_b * (b + 2.0 * c)) / (4.0 * big_a)
    s_inf = (1.0 + b + 2.0 * c) / (2.0 * big_a)

    # Source amplitudes for the population-transfer sector.  The five
    # transient/initial-asymmetry amplitudes reduce to the closed-form
    # coefficient set; the constant source mixes the steady populations
    # with the Boltzmann-weighted emission derivative.
    s0_inf = g * coeffs.a1
    s0_1 = g * coeffs.a2
    s0_2 = g * coeffs.a3
    s1_inf = (x * dgp - diff.gamma_minus) * s_inf
    s1_1 = g * coeffs.b2
    s1_2 = g * coeffs.b3

    s3_inf = -t_inf
    s3_1 = -(dgp / 2.0) * d
    s3_2 = -c2

    slow = np.exp(-g * t)
    fast = np.exp(-2.0 * big_a * g * t)

    alpha = (d / (2.0 * big_a * g)) * (1.0 - slow)
    e_inf = s1_inf / 2.0
    e_1 = dgp * p1 / 2.0 - d / (2.0 * big_a)
    e_2 = s1_2 / 2.0
    beta_inf = e_inf / (2.0 * big_a * g)
    beta_1 = e_1 / (big_b * g)
    beta_2 = -beta_inf - beta_1
    beta = beta_inf + beta_1 * slow + (beta_2 + e_2 * t) * fast

    y1 = 2.0 * alpha + 2.0 * beta
    y2 = big_b * alpha - beta
    y3 = (
        (s3_inf / g) * (1.0 - slow)
        + s3_1 * t * slow
        - (s3_2 / (big_b * g)) * (fast - slow)
    )

    f_inf = -d / (2.0 * big_a) + big_b * s1_inf / (4.0 * big_a) + s0_inf
    f_1 = -dgp * p1 / 2.0
    f_2 = -big_b * s1_inf / (4.0 * big_a) - e_1 + s0_2
    f_r = big_b * g * e_2
    denom = big_b * g
    h = -f_inf / g + f_2 / denom + f_r / denom ** 2
    y0 = (
        f_inf / g
        + h * slow
        + f_1 * t * slow
        - (f_2 / denom) * fast
        - (f_r / denom) * (t + 1.0 / denom) * fast
    )
    return np.array([y0, y1, y2, y3])


def perturbative_solution(
    init: Tuple[float, float, float, float],
    system: NearDegenerateSystem,
    bath: BathSpec,
    t: float,
) -> DressedCoherenceVector:
    """Dressed coherence vector to first order in the splitting.

    Valid for aligned dipoles.  The zeroth order is the degenerate
    closed-form solution; the correction integrates the source produced
    by the generator's splitting derivative, with differential rates
    taken as difference quotients across the actual splitting.  The
    correction vanishes identically at t = 0.
    """
    if abs(bath.alignment - 1.0) > ALIGNED_TOL:
        raise ValueError("perturbative solution requires alignment = 1")
    if t < 0.0:
        raise ValueError("time must be non-negative")
    a, b, c, d = (float(v) for v in init)
    CoherenceVector(a, b, c, d).to_density().validate()
    _warn_outside_window(t, system)
    base = rates_at(bath, system.omega1)
    g = base.gamma_plus
    x = math.exp(-bath.beta * system.omega1)
    zeroth = _zeroth_order(t, (a, b, c, d), x, g)
    delta = system.delta
    if delta == 0.0:
        return DressedCoherenceVector.from_array(zeroth)
    diff = rate_derivative(bath, system.omega1, delta)
    coeffs = perturbation_coefficients((a, b, c, d), base, diff, x)
    first = _first_order(t, (a, b, c, d), x, g, diff, coeffs)
    return DressedCoherenceVector.from_array(zeroth + delta * first)


def thermalize_independent(
    rho: DensityMatrix, system: NearDegenerateSystem, bath: BathSpec
) -> DensityMatrix:
    """Late-time limit under independent decay channels.

    Once the cross terms have averaged out, each excited level
    equilibrates separately and every coherence decays, leaving the
    diagonal Gibbs state with weights (e^{-beta omega2}, e^{-beta
    omega1}, 1)/Z regardless of the input state.
    """
    rho.validate()
    w2 = math.exp(-bath.beta * system.omega2)
    w1 = math.exp(-bath.beta * system.omega1)
    z = 1.0 + w1 + w2
    return DensityMatrix(np.diag([w2 / z, w1 / z, 1.0 / z]))


def _channel_ops() -> Tuple[list, list]:
    ket2 = np.array([1.0, 0.0, 0.0])
    ket1 = np.array([0.0, 1.0, 0.0])
    ket0 = np.array([0.0, 0.0, 1.0])
    lower = [np.outer(ket0, ket1), np.outer(ket0, ket2)]
    raise_ = [np.outer(ket1, ket0), np.outer(ket2, ket0)]
    return lower, raise_


def nonsecular_rhs_matrix(
    rho: np.ndarray, system: NearDegenerateSystem, bath: BathSpec
) -> np.ndarray:
    """Full master-equation right-hand side with non-secular cross terms.

    Operator form of the generator behind neardegenerate_generator,
    written directly on 3x3 matrices: the free commutator, a standard
    dissipator per channel at its own frequency, and alignment-weighted
    cross terms built from the generalized jump structures
    Q(a, b) = a rho b - b a rho and P(a, b) = a rho b - rho b a.  In the
    stationary frame the oscillating phases of the cross terms cancel
    against the splitting commutator, so no explicit time dependence
    remains.  Used as an independent route to validate the reduced
    4-vector dynamics.
    """
    h = np.diag([system.omega2, system.omega1, 0.0]).astype(complex)
    lower, raise_ = _channel_ops()
    rates = [rates_at(bath, system.omega1), rates_at(bath, system.omega2)]
    out = -1j * (h @ rho - rho @ h)
    for i in range(2):
        gp, gm = rates[i].gamma_plus, rates[i].gamma_minus
        a, b = lower[i], raise_[i]
        anti = b @ a
        out += gp * (a @ rho @ b - 0.5 * (anti @ rho + rho @ anti))
        anti = a @ b
        out += gm * (b @ rho @ a - 0.5 * (anti @ rho + rho @ anti))
    half_p = 0.5 * bath.alignment
    for k in range(2):
        kp = 1 - k
        gp, gm = rates[k].gamma_plus, rates[k].gamma_minus
        # Emission: Q(lower_k, raise_kp) and P(lower_kp, raise_k).
        a, b = lower[k], raise_[kp]
        out += half_p * gp * (a @ rho @ b - b @ a @ rho)
        a, b = lower[kp], raise_[k]
        out += half_p * gp * (a @ rho @ b - rho @ b @ a)
        # Absorption: Q(raise_k, lower_kp) and P(raise_kp, lower_k).
        a, b = raise_[k], lower[kp]
        out += half_p * gm * (a @ rho @ b - b @ a @ rho)
        a, b = raise_[kp], lower[k]
        out += half_p * gm * (a @ rho @ b - rho @ b @ a)
    return out


def independent_rhs_matrix(
    rho: np.ndarray, system: NearDegenerateSystem, bath: BathSpec
) -> np.ndarray:
    """Late-time master-equation right-hand side (cross terms dropped)."""
    h = np.diag([system.omega2, system.omega1, 0.0]).astype(complex)
    lower, raise_ = _channel_ops()
    rates = [rates_at(bath, system.omega1), rates_at(bath, system.omega2)]
    out = -1j * (h @ rho - rho @ h)
    for i in range(2):
        gp, gm = rates[i].gamma_plus, rates[i].gamma_minus
        a, b = lower[i], raise_[i]
        anti = b @ a
        out += gp * (a @ rho @ b - 0.5 * (anti @ rho + rho @ anti))
        anti = a @ b
        out += gm * (b @ rho @ a - 0.5 * (anti @ rho + rho @ anti))
    return out
