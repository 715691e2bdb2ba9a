"""Open dynamics of the degenerate V-type three-level system.

The excited states |2> and |1> share the energy omega and both decay to
the ground state |0> through dipole transitions whose cross-coupling is
set by the bath alignment p.  The full Bloch dynamics splits into three
decoupled sectors: the excited populations and excited-excited
coherences {q1, q2, q7, q8}, and two sectors of ground-excited
coherences that only decay.  On the first sector the motion closes on
the coherence vector Pi = (rho22, rho00, rho_plus, rho_minus) and takes
the affine form dPi/dt = M Pi - b.

Sign convention: with the generator written as dPi/dt = M Pi - b, every
eigenvalue of M has a non-positive real part; for |p| < 1 all real
parts are strictly negative and the state relaxes to the Gibbs fixed
point M^{-1} b.  (Descriptions of this system sometimes quote the
eigenvalues of -M instead, which flips the sign of the statement; the
convention here is fixed by checking the analytic aligned solution
against direct integration.)  At |p| = 1 the generator becomes singular
and a one-parameter family of coherent steady states appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .bath import BathSpec, cross_rates, rates_at
from .bloch import BlochVector, DensityMatrix, from_bloch, to_bloch
from .numerics import SolverConfig, integrate_ode
from .thermo import l1_coherence

TRACE_DRIFT_TOL = 1e-12
ALIGNED_TOL = 1e-12
CONDITION_GUARD = 1e12


@dataclass(frozen=True)
class DegenerateSystem:
    """Two degenerate excited levels at energy omega above the ground state."""

    omega: float

    def __post_init__(self) -> None:
        if not self.omega > 0.0:
            raise ValueError("omega must be positive")


@dataclass(frozen=True)
class CoherenceVector:
    """The 4-vector (rho22, rho00, rho_plus, rho_minus) of the closed sector.

    rho_plus = (rho21 + rho12)/2 is real for Hermitian states and
    rho_minus = (rho21 - rho12)/2 is purely imaginary; the latter is
    stored through its imaginary part rho_minus_im, so all four fields
    are real.  Range checks live in validate(), not the constructor, so
    integrator iterates with tiny constraint violations stay
    representable.
    """

    rho22: float
    rho00: float
    rho_plus: float
    rho_minus_im: float = 0.0

    @property
    def rho11(self) -> float:
        return 1.0 - self.rho22 - self.rho00

    @property
    def rho21(self) -> complex:
        return self.rho_plus + 1j * self.rho_minus_im

    @property
    def rho12(self) -> complex:
        return self.rho_plus - 1j * self.rho_minus_im

    @property
    def rho_minus(self) -> complex:
        return 1j * self.rho_minus_im

    def as_array(self) -> np.ndarray:
        return np.array([self.rho22, self.rho00, self.rho_plus, self.rho_minus_im])

    def validate(self, tol: float = 1e-9) -> "CoherenceVector":
        if not -tol <= self.rho22 <= 1.0 + tol:
            raise ValueError(f"rho22 = {self.rho22!r} outside [0, 1]")
        if not -tol <= self.rho00 <= 1.0 + tol:
            raise ValueError(f"rho00 = {self.rho00!r} outside [0, 1]")
        if self.rho22 + self.rho00 > 1.0 + tol:
            raise ValueError("rho22 + rho00 exceeds 1")
        return self

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "CoherenceVector":
        r22, r00, rp, d = (float(v) for v in values)
        return cls(r22, r00, rp, d)

    @classmethod
    def from_density(cls, rho: DensityMatrix) -> "CoherenceVector":
        m = rho.matrix
        return cls(
            rho22=float(m[0, 0].real),
            rho00=float(m[2, 2].real),
            rho_plus=float(m[0, 1].real),
            rho_minus_im=float(m[0, 1].imag),
        )

    def to_density(self) -> DensityMatrix:
        m = np.zeros((3, 3), dtype=complex)
        m[0, 0] = self.rho22
        m[1, 1] = self.rho11
        m[2, 2] = self.rho00
        m[0, 1] = self.rho21
        m[1, 0] = self.rho12
        return DensityMatrix(m)


@dataclass(frozen=True)
class GeneratorMatrix:
    """Affine generator (M, b) of the coherence-vector equation.

    dPi/dt = matrix . Pi - constant.  The matrix acts on the complex
    vector (rho22, rho00, rho_plus, rho_minus); for the degenerate
    system it is real, while the near-degenerate generator carries
    imaginary couplings between rho_plus and rho_minus.
    """

    matrix: np.ndarray
    constant: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        c = np.array(self.constant, dtype=complex)
        if m.shape != (4, 4) or c.shape != (4,):
            raise ValueError("generator needs a 4x4 matrix and a 4-vector")
        m.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "constant", c)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.matrix)

    def is_singular(self, tol: float = 1e-12) -> bool:
        return bool(np.min(np.abs(self.eigenvalues())) < tol)

    def real_form(self) -> Tuple[np.ndarray, np.ndarray]:
        """The generator rewritten on the real vector (r22, r00, r+, d).

        Substituting rho_minus = i d amounts to conjugating by
        diag(1, 1, 1, i): column 4 picks up a factor i and row 4 a
        factor -i, which turns the -i delta couplings of the
        near-degenerate generator into the real pair (+delta, -delta).
        """
        transform = np.diag([1.0, 1.0, 1.0, 1j])
        inverse = np.diag([1.0, 1.0, 1.0, -1j])
        m_real = inverse @ self.matrix @ transform
        b_real = inverse @ self.constant
        if np.max(np.abs(m_real.imag)) > 1e-14 or np.max(np.abs(b_real.imag)) > 1e-14:
            raise ValueError("generator has no real form on (r22, r00, r+, d)")
        return m_real.real.copy(), b_real.real.copy()


def coherence_generator(system: DegenerateSystem, bath: BathSpec) -> GeneratorMatrix:
    """The affine generator of the degenerate coherence-vector equation."""
    pair = rates_at(bath, system.omega)
    gp, gm = pair.gamma_plus, pair.gamma_minus
    p = bath.alignment
    matrix = np.array(
        [
            [-gp, gm, -p * gp, 0.0],
            [0.0, -(gp + 2.0 * gm), 2.0 * p * gp, 0.0],
            [0.0, 0.5 * p * (gp + 2.0 * gm), -gp, 0.0],
            [0.0, 0.0, 0.0, -gp],
        ]
    )
    constant = np.array([0.0, -gp, 0.5 * p * gp, 0.0])
    return GeneratorMatrix(matrix, constant)


def _bloch_rhs_array(
    q: np.ndarray, omega: float, gp: float, gm: float, p: float
) -> np.ndarray:
    q1, q2, q3, q4, q5, q6, q7, q8 = q
    pop = q7 + q8
    drive = gm * p * (1.0 - pop)
    damp = p * (1.0 + 0.5 * pop)
    dq = np.empty(8, dtype=complex)
    dq[0] = drive - gp * (q1 + damp)
    dq[1] = drive - gp * (q2 + damp)
    dq[2] = -1j * omega * q3 - 0.5 * gp * (q3 + p * q5) - gm * q3
    dq[3] = 1j * omega * q4 - 0.5 * gp * (q4 + p * q6) - gm * q4
    dq[4] = -1j * omega * q5 - 0.5 * gp * (q5 + p * q3) - gm * q5
    dq[5] = 1j * omega * q6 - 0.5 * gp * (q6 + p * q4) - gm * q6
    dq[6] = gm * (1.0 - pop) - gp * (1.0 + q7 + 0.5 * p * (q1 + q2))
    dq[7] = gm * (1.0 - pop) - gp * (1.0 + q8 + 0.5 * p * (q1 + q2))
    return dq


def bloch_rhs(q: BlochVector, system: DegenerateSystem, bath: BathSpec) -> BlochVector:
    """Time derivative of the full 8-component Bloch vector.

    The sectors {q1, q2, q7, q8}, {q3, q5}, and {q4, q6} evolve
    independently; the last two carry the ground-excited coherences and
    admit only decaying solutions.
    """
    pair = rates_at(bath, system.omega)
    dq = _bloch_rhs_array(
        q.as_array(), system.omega, pair.gamma_plus, pair.gamma_minus, bath.alignment
    )
    return BlochVector.from_array(dq)


def _sigma_ops() -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Lowering and raising operators for the two decay channels.

    Channel index 0 is the |1> <-> |0> transition and index 1 is
    |2> <-> |0>, matching the row order of the cross-rate matrices.
    """
    ket2 = np.array([1.0, 0.0, 0.0])
    ket1 = np.array([0.0, 1.0, 0.0])
    ket0 = np.array([0.0, 0.0, 1.0])
    lower = [np.outer(ket0, ket1), np.outer(ket0, ket2)]
    raise_ = [np.outer(ket1, ket0), np.outer(ket2, ket0)]
    return lower, raise_


def gksl_rhs_matrix(
    rho: np.ndarray, system: DegenerateSystem, bath: BathSpec
) -> np.ndarray:
    """Full master-equation right-hand side in operator form.

    Builds -i[H, rho] plus the degenerate dissipator with emission terms
    sigma_-(i) rho sigma_+(j) and absorption terms
    sigma_+(i) rho sigma_-(j), weighted by the cross-rate matrices.
    Serves as an independent route against which the componentwise Bloch
    equations are checked.
    """
    h = np.diag([system.omega, system.omega, 0.0]).astype(complex)
    gamma_plus, gamma_minus = cross_rates(bath, system.omega)
    lower, raise_ = _sigma_ops()
    out = -1j * (h @ rho - rho @ h)
    for i in range(2):
        for j in range(2):
            jump = lower[i] @ rho @ raise_[j]
            anti = raise_[j] @ lower[i]
            out += gamma_plus[i, j] * (jump - 0.5 * (anti @ rho + rho @ anti))
            jump = raise_[i] @ rho @ lower[j]
            anti = lower[j] @ raise_[i]
            out += gamma_minus[i, j] * (jump - 0.5 * (anti @ rho + rho @ anti))
    return out


def evolve(
    rho0: DensityMatrix,
    system: DegenerateSystem,
    bath: BathSpec,
    t: float,
    tol: float = 1e-10,
    fixed_steps: int | None = None,
) -> DensityMatrix:
    """Numerically evolve a state for a time t under the Bloch equations.

    Adaptive Runge-Kutta 5(4) by default; fixed_steps forces a classical
    fixed-step RK4 walk.  The Bloch layout conserves the trace
    identically, which is asserted on the result.
    """
    if t < 0.0:
        raise ValueError("evolution time must be non-negative")
    if t == 0.0:
        return rho0
    q0 = to_bloch(rho0).as_array()
    pair = rates_at(bath, system.omega)

    def rhs(_t: float, q: np.ndarray) -> np.ndarray:
        return _bloch_rhs_array(
            q, system.omega, pair.gamma_plus, pair.gamma_minus, bath.alignment
        )

    cfg = SolverConfig(abs_tol=tol, rel_tol=tol, max_iter=10 ** 6)
    sol = integrate_ode(rhs, q0, (0.0, t), cfg, fixed_steps=fixed_steps)
    rho_t = from_bloch(BlochVector.from_array(sol.y[:, -1]))
    drift = abs(rho_t.trace - 1.0)
    if drift > TRACE_DRIFT_TOL:
        raise RuntimeError(f"trace drifted by {drift:.3e} during evolution")
    return rho_t


def evolve_trajectory(
    rho0: DensityMatrix,
    system: DegenerateSystem,
    bath: BathSpec,
    times: Sequence[float],
    tol: float = 1e-10,
) -> List[DensityMatrix]:
    """States along a time grid, from one dense-output integration."""
    times = [float(t) for t in times]
    if any(t < 0.0 for t in times) or any(
        t2 < t1 for t1, t2 in zip(times, times[1:])
    ):
        raise ValueError("times must be non-negative and non-decreasing")
    q0 = to_bloch(rho0).as_array()
    pair = rates_at(bath, system.omega)

    def rhs(_t: float, q: np.ndarray) -> np.ndarray:
        return _bloch_rhs_array(
            q, system.omega, pair.gamma_plus, pair.gamma_minus, bath.alignment
        )

    cfg = SolverConfig(abs_tol=tol, rel_tol=tol, max_iter=10 ** 6)
    horizon = times[-1] if times else 0.0
    if horizon == 0.0:
        return [from_bloch(BlochVector.from_array(q0)) for _ in times]
    sol = integrate_ode(rhs, q0, (0.0, horizon), cfg)
    states = []
    for t in times:
        q = sol.at(t) if t > 0.0 else q0
        states.append(from_bloch(BlochVector.from_array(q)))
    return states


_ENTRY_LABELS = ("22", "21", "20", "12", "11", "10", "02", "01", "00")
_ENTRY_INDEX = {
    "22": (0, 0),
    "21": (0, 1),
    "20": (0, 2),
    "12": (1, 0),
    "11": (1, 1),
    "10": (1, 2),
    "02": (2, 0),
    "01": (2, 1),
    "00": (2, 2),
}


def trajectory_columns() -> List[str]:
    cols = ["t"]
    for label in _ENTRY_LABELS:
        cols.append(f"re_rho{label}")
        cols.append(f"im_rho{label}")
    cols.append("c_l1")
    cols.append("min_eigenvalue")
    return cols


def trajectory_rows(
    times: Sequence[float], states: Iterable[DensityMatrix]
) -> List[List[float]]:
    """Rows matching trajectory_columns for CSV emission."""
    rows = []
    for t, state in zip(times, states):
        row = [float(t)]
        for label in _ENTRY_LABELS:
            z = state.matrix[_ENTRY_INDEX[label]]
            row.extend([float(z.real), float(z.imag)])
        row.append(l1_coherence(state))
        row.append(state.min_eigenvalue())
        rows.append(row)
    return rows


def analytic_evolution_aligned(
    init: Tuple[float, float, float, float],
    system: DegenerateSystem,
    bath: BathSpec,
    t,
):
    """Closed-form aligned-dipole evolution of (rho22, rho00, rho12).

    For perfectly aligned dipoles the coherence-vector equation has the
    explicit solution below, parameterized by the initial data
    rho22(0) = a, rho00(0) = b, rho_plus(0) = c, rho_minus(0) = i d and
    x = exp(-beta omega).  Accepts a scalar or array of times and
    returns (rho22, rho00, rho12) with rho12 complex.
    """
    if abs(bath.alignment - 1.0) > ALIGNED_TOL:
        raise ValueError("closed-form evolution requires alignment = 1")
    a, b, c, d = (float(v) for v in init)
    CoherenceVector(a, b, c, d).to_density().validate()
    pair = rates_at(bath, system.omega)
    g = pair.gamma_plus
    x = math.exp(-bath.beta * system.omega)
    t = np.asarray(t, dtype=float)
    big_a = 1.0 + x
    big_b = 1.0 + 2.0 * x
    slow = np.exp(-g * t)
    fast = np.exp(-2.0 * big_a * g * t)
    rho22 = (
        (1.0 + 2.0 * x - b - 2.0 * c)
        + 2.0 * big_a * (2.0 * a + b - 1.0) * slow
        + (1.0 + 2.0 * c - big_b * b) * fast
    ) / (4.0 * big_a)
    rho00 = ((1.0 + b + 2.0 * c) + (-1.0 - 2.0 * c + big_b * b) * fast) / (
        2.0 * big_a
    )
    rho_plus = (
        (-1.0 + big_b * (b + 2.0 * c)) + (1.0 + 2.0 * c - big_b * b) * fast
    ) / (4.0 * big_a)
    rho12 = rho_plus - 1j * d * slow
    if rho22.ndim == 0:
        return float(rho22), float(rho00), complex(rho12)
    return rho22, rho00, rho12


def _aligned_steady_vector(b: float, c: float, x: float) -> np.ndarray:
    big_a = 1.0 + x
    big_b = 1.0 + 2.0 * x
    r22 = (1.0 + 2.0 * x - b - 2.0 * c) / (4.0 * big_a)
    r00 = (1.0 + b + 2.0 * c) / (2.0 * big_a)
    rp = (-1.0 + big_b * (b + 2.0 * c)) / (4.0 * big_a)
    return np.array([r22, r00, rp, 0.0])


def steady_state(
    system: DegenerateSystem,
    bath: BathSpec,
    init: Tuple[float, float, float, float],
) -> DensityMatrix:
    """Long-time state of the coherence sector.

    For |alignment| < 1 the generator is invertible and the fixed point
    is the Gibbs state, independent of the initial data.  For aligned
    dipoles the generator is singular and the steady state retains a
    memory of the initial (rho00, rho_plus); anti-aligned dipoles map
    onto the aligned case by flipping the sign of rho_plus, which is a
    conjugation by diag(1, -1) on the excited subspace.  Alignments
    within the condition-number guard of +-1 route to the analytic
    branch to avoid catastrophic cancellation in the linear solve.
    """
    a, b, c, d = (float(v) for v in init)
    p = bath.alignment
    x = math.exp(-bath.beta * system.omega)
    use_aligned = abs(abs(p) - 1.0) <= ALIGNED_TOL
    if not use_aligned:
        gen = coherence_generator(system, bath)
        m_real, b_real = gen.real_form()
        if np.linalg.cond(m_real) > CONDITION_GUARD:
            use_aligned = True
        else:
            vec = np.linalg.solve(m_real, b_real)
            return CoherenceVector.from_array(vec).to_density()
    sign = 1.0 if p >= 0.0 else -1.0
    vec = _aligned_steady_vector(b, sign * c, x)
    vec[2] *= sign
    return CoherenceVector.from_array(vec).to_density()
