"""Work extraction from stationary coherence of the degenerate V system.

Two cyclic protocols operate on states confined to the subspace spanned
by the populations and the excited-excited coherence.

The repeated protocol rotates the coherence into a population
imbalance, lifts the emptied level, lets the split system thermalize,
extracts work by lowering the level back, and finally lets the aligned
degenerate bath rebuild a (smaller) stationary coherence.  Each round
consumes part of the coherence; the shift sequence is optimized round
by round and converges to zero, with the state approaching the ordinary
Gibbs state.

The single-shot protocol maps a general subspace state onto an
effective three-level Gibbs state of mismatched frequencies, then
harvests the mismatch by quasistatic level sweeps.  Its net work
saturates the free-energy difference of the initial state exactly.

Work bookkeeping is explicit: every step carries separate non-negative
work_in and work_out entries, and a ledger totals them.  Energies are
measured in units of the reference transition frequency times hbar, so
"lowering a level by w with population p" extracts p*w.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .bath import BathSpec
from .bloch import DensityMatrix
from .dynamics import ALIGNED_TOL, DegenerateSystem, steady_state
from .neardegen import NearDegenerateSystem, thermalize_independent
from .numerics import SolverConfig, integrate_1d, lambert_w_principal
from .thermo import l1_coherence

WORK_TOL = 1e-15
SHIFT_ROOT_TOL = 1e-13


@dataclass(frozen=True)
class ProtocolStep:
    """One ledger entry: what happened, what it cost, what it paid."""

    label: str
    work_in: float
    work_out: float
    coherence_before: float
    coherence_after: float
    state_before: DensityMatrix
    state_after: DensityMatrix

    def __post_init__(self) -> None:
        if self.work_in < 0.0 or self.work_out < 0.0:
            raise ValueError("work entries must be non-negative")

    @property
    def net_work(self) -> float:
        return self.work_out - self.work_in


@dataclass
class ProtocolLedger:
    """Ordered step record with running work totals."""

    steps: List[ProtocolStep] = field(default_factory=list)

    def append(self, step: ProtocolStep) -> None:
        self.steps.append(step)

    def extend(self, other: "ProtocolLedger") -> None:
        self.steps.extend(other.steps)

    @property
    def net_work(self) -> float:
        return math.fsum(s.work_out - s.work_in for s in self.steps)

    @property
    def final_state(self) -> DensityMatrix:
        if not self.steps:
            raise ValueError("empty ledger has no final state")
        return self.steps[-1].state_after

    def to_json_dict(self) -> dict:
        return {
            "steps": [
                {
                    "label": s.label,
                    "work_in": s.work_in,
                    "work_out": s.work_out,
                    "coherence_before": s.coherence_before,
                    "coherence_after": s.coherence_after,
                    "state": s.state_after.to_json(),
                }
                for s in self.steps
            ],
            "net_work": self.net_work,
        }

    def csv_rows(self) -> Tuple[List[str], List[List[float]]]:
        header = [
            "step",
            "work_in",
            "work_out",
            "coherence_before",
            "coherence_after",
        ]
        rows = []
        for idx, s in enumerate(self.steps):
            rows.append(
                [
                    float(idx),
                    s.work_in,
                    s.work_out,
                    s.coherence_before,
                    s.coherence_after,
                ]
            )
        return header, rows


@dataclass(frozen=True)
class GeneralInitialState:
    """Subspace state written as a ground weight plus an excited qubit.

    The excited 2x2 block is (1 - b)(I + n . sigma)/2 with Bloch vector
    n of length n_norm and polar angles (theta, phi); b is the ground
    population.  Any such state is physical by construction.
    """

    b: float
    n_norm: float
    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.b <= 1.0:
            raise ValueError("ground population must lie in [0, 1]")
        if not 0.0 <= self.n_norm <= 1.0:
            raise ValueError("Bloch vector length must lie in [0, 1]")

    def bloch_vector(self) -> np.ndarray:
        st, ct = math.sin(self.theta), math.cos(self.theta)
        return self.n_norm * np.array(
            [st * math.cos(self.phi), st * math.sin(self.phi), ct]
        )

    def to_density(self) -> DensityMatrix:
        nx, ny, nz = self.bloch_vector()
        w = 1.0 - self.b
        block = 0.5 * w * np.array(
            [[1.0 + nz, nx - 1j * ny], [nx + 1j * ny, 1.0 - nz]], dtype=complex
        )
        m = np.zeros((3, 3), dtype=complex)
        m[:2, :2] = block
        m[2, 2] = self.b
        return DensityMatrix(m)

    @classmethod
    def from_density(cls, rho: DensityMatrix) -> "GeneralInitialState":
        rho.validate()
        m = rho.matrix
        if abs(m[0, 2]) > 1e-12 or abs(m[1, 2]) > 1e-12:
            raise ValueError("state has coherence with the ground level")
        b = float(m[2, 2].real)
        w = 1.0 - b
        if w <= 1e-15:
            return cls(b=1.0, n_norm=0.0, theta=0.0, phi=0.0)
        nz = float((m[0, 0] - m[1, 1]).real) / w
        nx = 2.0 * float(m[0, 1].real) / w
        ny = -2.0 * float(m[0, 1].imag) / w
        norm = math.sqrt(nx * nx + ny * ny + nz * nz)
        if norm < 1e-15:
            return cls(b=b, n_norm=0.0, theta=0.0, phi=0.0)
        theta = math.acos(max(-1.0, min(1.0, nz / norm)))
        phi = math.atan2(ny, nx)
        return cls(b=b, n_norm=min(norm, 1.0), theta=theta, phi=phi)


@dataclass(frozen=True)
class RoundPlan:
    """Level bookkeeping for one round of the repeated protocol."""

    index: int
    shift: float
    lifted_level: float
    partition: float

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError("round index starts at 1")
        if self.shift <= 0.0:
            raise ValueError("shift must be positive")

    @classmethod
    def build(cls, index: int, shift: float, beta: float, omega: float) -> "RoundPlan":
        lifted = omega + shift
        z = 1.0 + math.exp(-beta * omega) + math.exp(-beta * lifted)
        return cls(index=index, shift=shift, lifted_level=lifted, partition=z)


@dataclass(frozen=True)
class RoundResult:
    """Per-round series entry of the repeated protocol driver."""

    plan: RoundPlan
    work_in: float
    work_out: float
    coherence_after: float

    @property
    def net_work(self) -> float:
        return self.work_out - self.work_in


def coherence_unitary(theta: float, phi: float) -> np.ndarray:
    """Energy-preserving rotation diagonalizing an excited-block qubit.

    Acts only inside the degenerate excited doublet, so it commutes with
    any Hamiltonian that is proportional to the identity there.  For a
    state whose excited Bloch vector points along (theta, phi), the
    conjugated state is diagonal with the larger population on the
    middle level.
    """
    half = 0.5 * theta
    return np.array(
        [
            [-math.sin(half), math.cos(half) * np.exp(-1j * phi), 0.0],
            [math.cos(half) * np.exp(1j * phi), math.sin(half), 0.0],
            [0.0, 0.0, 1.0],
        ],
        dtype=complex,
    )


_SQRT_HALF = 1.0 / math.sqrt(2.0)
# Rotation used by the repeated protocol: sends the symmetric excited
# superposition to the middle level and the antisymmetric one to the top.
ROUND_ROTATION = np.array(
    [
        [_SQRT_HALF, -_SQRT_HALF, 0.0],
        [_SQRT_HALF, _SQRT_HALF, 0.0],
        [0.0, 0.0, 1.0],
    ],
    dtype=complex,
)


def _conjugate(u: np.ndarray, rho: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(u @ rho.matrix @ u.conj().T)


def _require_aligned(bath: BathSpec) -> None:
    if abs(bath.alignment - 1.0) > ALIGNED_TOL:
        raise ValueError("protocol requires a fully aligned bath")


def protocol_initial_state(beta: float, omega: float) -> DensityMatrix:
    """Stationary state reached from the ground state under full alignment.

    Carries the largest stationary coherence available at the given
    temperature and is the natural charged state for both protocols.
    """
    system = DegenerateSystem(omega=omega)
    bath = BathSpec(beta=beta, alignment=1.0)
    return steady_state(system, bath, (0.0, 1.0, 0.0, 0.0))


def _step(
    label: str,
    before: DensityMatrix,
    after: DensityMatrix,
    work_in: float = 0.0,
    work_out: float = 0.0,
) -> ProtocolStep:
    return ProtocolStep(
        label=label,
        work_in=work_in,
        work_out=work_out,
        coherence_before=l1_coherence(before),
        coherence_after=l1_coherence(after),
        state_before=before,
        state_after=after,
    )


def protocol1_round(
    state: DensityMatrix,
    omega: float,
    beta: float,
    shift: float,
    bath: BathSpec,
) -> Tuple[ProtocolLedger, DensityMatrix]:
    """Execute one round of the repeated extraction protocol.

    Steps: rotate the coherence into populations, lift the emptied top
    level by the shift, thermalize at the split frequencies, lower the
    level back while extracting, and let the aligned degenerate bath
    restore a stationary state.  Thermalizations are taken in their
    long-time limits.
    """
    if shift <= 0.0:
        raise ValueError("level shift must be positive")
    _require_aligned(bath)
    state.validate()

    ledger = ProtocolLedger()
    rotated = _conjugate(ROUND_ROTATION, state)
    ledger.append(_step("rotate", state, rotated))

    lifted_level = omega + shift
    pop_top = max(float(rotated.matrix[0, 0].real), 0.0)
    ledger.append(_step("lift", rotated, rotated, work_in=shift * pop_top))

    split = NearDegenerateSystem(
        omega1=omega, omega2=lifted_level, max_delta_ratio=math.inf
    )
    thermal = thermalize_independent(rotated, split, bath)
    ledger.append(_step("thermalize-split", rotated, thermal))

    extracted = shift * float(thermal.matrix[0, 0].real)
    ledger.append(_step("extract", thermal, thermal, work_out=extracted))

    init = (
        float(thermal.matrix[0, 0].real),
        float(thermal.matrix[2, 2].real),
        0.0,
        0.0,
    )
    final = steady_state(DegenerateSystem(omega=omega), bath, init)
    ledger.append(_step("rebuild-coherence", thermal, final))
    return ledger, final


def optimal_shift_round1(beta: float, omega: float) -> float:
    """Optimal first-round shift, in closed form.

    The stationarity condition for the first round (no population on
    the lifted level) solves with the principal Lambert branch:
    shift = (1/beta) [1 + W(1/((1 + e^{beta omega}) e))].
    """
    if beta <= 0.0 or omega <= 0.0:
        raise ValueError("inverse temperature and frequency must be positive")
    arg = 1.0 / ((1.0 + math.exp(beta * omega)) * math.e)
    return (1.0 + lambert_w_principal(arg)) / beta


def _round_work(shift: float, pre_population: float, beta: float, omega: float) -> float:
    """Net work of a round as a function of the shift."""
    x = math.exp(-beta * omega)
    u = math.exp(-beta * shift)
    z = 1.0 + x + x * u
    return shift * (x * u / z - pre_population)


def _shift_upper_bound(pre_population: float, beta: float, omega: float) -> float:
    """Largest shift with positive net work; non-positive means none."""
    x = math.exp(-beta * omega)
    if pre_population <= 0.0:
        return math.inf
    ratio = x * (1.0 - pre_population) / ((1.0 + x) * pre_population)
    if ratio <= 1.0:
        return 0.0
    return math.log(ratio) / beta


def _stationarity(shift: float, pre_population: float, beta: float, omega: float):
    """Stationarity residual of the round work and its derivative."""
    x = math.exp(-beta * omega)
    u = math.exp(-beta * shift)
    z = 1.0 + x + x * u
    big_a = 1.0 + x
    h = x * u * z - pre_population * z * z - beta * shift * x * u * big_a
    du = -beta * x * u
    dz = du
    dh = (
        du * z
        + x * u * dz
        - 2.0 * pre_population * z * dz
        - beta * x * u * big_a
        - beta * shift * du * big_a
    )
    return h, dh


def _optimal_shift_for_population(
    pre_population: float, beta: float, omega: float
) -> Optional[float]:
    """Shift maximizing the round work for a given pre-lift population.

    Returns None when no positive-work shift exists, which signals that
    the repeated protocol has exhausted the state.
    """
    if pre_population <= 0.0:
        return optimal_shift_round1(beta, omega)
    hi = _shift_upper_bound(pre_population, beta, omega)
    if hi <= 0.0:
        return None
    lo = 0.0
    h_lo, _ = _stationarity(1e-14 * hi, pre_population, beta, omega)
    h_hi, _ = _stationarity(hi * (1.0 - 1e-14), pre_population, beta, omega)
    if h_lo <= 0.0 or h_hi >= 0.0:
        return None
    shift = 0.5 * hi
    for _ in range(200):
        h, dh = _stationarity(shift, pre_population, beta, omega)
        if h > 0.0:
            lo = shift
        else:
            hi = shift
        step = h / dh if dh != 0.0 else 0.0
        candidate = shift - step
        if not (lo < candidate < hi):
            candidate = 0.5 * (lo + hi)
        if abs(candidate - shift) <= SHIFT_ROOT_TOL * max(1.0, abs(shift)):
            shift = candidate
            break
        shift = candidate
    return shift


def optimal_shift_next(prev: RoundPlan, beta: float, omega: float) -> Optional[float]:
    """Optimal shift for the round following prev, or None at exhaustion.

    After a completed round the rotated population on the top level is
    (1 - 1/Z_prev)/2; the next shift is the stationary point of the net
    round work inside the positive-work interval.
    """
    pre_population = 0.5 * (1.0 - 1.0 / prev.partition)
    return _optimal_shift_for_population(pre_population, beta, omega)


def run_protocol1(
    initial: DensityMatrix,
    omega: float,
    beta: float,
    bath: BathSpec,
    max_rounds: int = 64,
    shift_floor: float = 1e-6,
) -> Tuple[ProtocolLedger, List[RoundResult]]:
    """Drive the repeated protocol until the optimal shift collapses.

    Shifts are chosen per round from the actual pre-lift population.
    The driver stops before executing a round whose optimal shift falls
    below the floor, when no positive-work shift exists, or after
    max_rounds rounds.
    """
    if max_rounds < 1:
        raise ValueError("at least one round is required")
    if shift_floor < 0.0:
        raise ValueError("shift floor must be non-negative")
    _require_aligned(bath)
    initial.validate()

    ledger = ProtocolLedger()
    results: List[RoundResult] = []
    state = initial
    for index in range(1, max_rounds + 1):
        m = state.matrix
        pre_population = float(
            (0.5 * (m[0, 0] + m[1, 1]) - 0.5 * (m[0, 1] + m[1, 0])).real
        )
        shift = _optimal_shift_for_population(max(pre_population, 0.0), beta, omega)
        if shift is None or shift < shift_floor:
            break
        round_ledger, state = protocol1_round(state, omega, beta, shift, bath)
        prefix = f"round {index}: "
        for s in round_ledger.steps:
            ledger.append(
                ProtocolStep(
                    label=prefix + s.label,
                    work_in=s.work_in,
                    work_out=s.work_out,
                    coherence_before=s.coherence_before,
                    coherence_after=s.coherence_after,
                    state_before=s.state_before,
                    state_after=s.state_after,
                )
            )
        results.append(
            RoundResult(
                plan=RoundPlan.build(index, shift, beta, omega),
                work_in=math.fsum(s.work_in for s in round_ledger.steps),
                work_out=math.fsum(s.work_out for s in round_ledger.steps),
                coherence_after=l1_coherence(state),
            )
        )
    return ledger, results


def _shift_work(population: float, w_from: float, w_to: float) -> float:
    """Signed work from suddenly moving one level, positive = extracted.

    An unpopulated level moves for free even when the target sits at
    infinity, so the zero-population case short-circuits.
    """
    if population == 0.0:
        return 0.0
    return population * (w_from - w_to)


def quasistatic_work(
    beta: float,
    omega_from: float,
    omega_to: float,
    fixed_other_level: float,
    mode: str = "single-level-sweep",
) -> float:
    """Work from an infinitely slow level sweep against the bath.

    In single-level-sweep mode one level moves from omega_from to
    omega_to while the other stays at fixed_other_level; in
    both-levels-sweep mode the two (degenerate) levels move together
    and fixed_other_level is ignored.  Positive values mean extracted
    work.  Effective level energies may be non-positive or infinite;
    the partition-function expressions stay well defined.
    """
    if beta <= 0.0:
        raise ValueError("inverse temperature must be positive")
    if mode == "single-level-sweep":
        other = math.exp(-beta * fixed_other_level)

        def log_partition(w: float) -> float:
            return math.log(1.0 + other + math.exp(-beta * w))

    elif mode == "both-levels-sweep":

        def log_partition(w: float) -> float:
            return math.log(1.0 + 2.0 * math.exp(-beta * w))

    else:
        raise ValueError(f"unknown sweep mode: {mode!r}")
    if omega_from == omega_to:
        return 0.0
    return (log_partition(omega_to) - log_partition(omega_from)) / beta


def quasistatic_work_quadrature(
    beta: float,
    omega_from: float,
    omega_to: float,
    fixed_other_level: float,
    mode: str = "single-level-sweep",
    config: Optional[SolverConfig] = None,
) -> float:
    """Quadrature route to quasistatic_work, for cross-checks.

    Integrates the instantaneous thermal population of the moving
    level(s) over the sweep.  Supports an infinite omega_from through
    the integrator's improper-integral handling.
    """
    if beta <= 0.0:
        raise ValueError("inverse temperature must be positive")
    if mode == "single-level-sweep":
        other = math.exp(-beta * fixed_other_level)

        def population(w: float) -> float:
            boltz = math.exp(-beta * w)
            return boltz / (1.0 + other + boltz)

    elif mode == "both-levels-sweep":

        def population(w: float) -> float:
            boltz = math.exp(-beta * w)
            return 2.0 * boltz / (1.0 + 2.0 * boltz)

    else:
        raise ValueError(f"unknown sweep mode: {mode!r}")
    return integrate_1d(population, omega_to, omega_from, config)


def discretized_quasistatic(
    beta: float,
    omega_from: float,
    omega_to: float,
    fixed_other_level: float,
    n_steps: int,
    mode: str = "single-level-sweep",
) -> float:
    """Staircase version of the quasistatic sweep with n_steps stages.

    Each stage thermalizes fully at the current frequency and then
    shifts the level(s) suddenly by (omega_to - omega_from)/n_steps,
    booking population times shift.  Converges to the quasistatic value
    with error O(1/n_steps).
    """
    if n_steps < 1:
        raise ValueError("need at least one staircase step")
    if beta <= 0.0:
        raise ValueError("inverse temperature must be positive")
    if mode == "single-level-sweep":
        other = math.exp(-beta * fixed_other_level)

        def population(w: float) -> float:
            boltz = math.exp(-beta * w)
            return boltz / (1.0 + other + boltz)

    elif mode == "both-levels-sweep":

        def population(w: float) -> float:
            boltz = math.exp(-beta * w)
            return 2.0 * boltz / (1.0 + 2.0 * boltz)

    else:
        raise ValueError(f"unknown sweep mode: {mode!r}")
    h = (omega_to - omega_from) / n_steps
    total = 0.0
    for k in range(n_steps):
        w = omega_from + k * h
        total -= population(w) * h
    return total


def _matching_frequency(beta: float, population: float, ground: float) -> float:
    """Level energy giving the population/ground ratio a Gibbs form."""
    if population == 0.0:
        return math.inf
    return -math.log(population / ground) / beta


def protocol2(
    init: GeneralInitialState,
    omega: float,
    beta: float,
    bath: BathSpec,
    work_mode: str = "closed",
) -> ProtocolLedger:
    """Run the single-shot extraction cycle on a general subspace state.

    Rotates the excited qubit diagonal, reshapes the spectrum so the
    state is an exact Gibbs state of effective frequencies, then sweeps
    the levels quasistatically back to degeneracy at the physical
    frequency.  The net work saturates the free-energy difference of
    the initial state.  work_mode selects closed-form sweep works or an
    independent quadrature route.
    """
    if init.b == 0.0:
        raise ValueError("matching requires a nonzero ground population")
    if work_mode not in ("closed", "quadrature"):
        raise ValueError(f"unknown work mode: {work_mode!r}")
    if beta <= 0.0 or omega <= 0.0:
        raise ValueError("inverse temperature and frequency must be positive")
    _require_aligned(bath)

    ledger = ProtocolLedger()
    rho = init.to_density()
    rotation = coherence_unitary(init.theta, init.phi)
    diagonal = _conjugate(rotation, rho)
    ledger.append(_step("rotate", rho, diagonal))

    p0 = init.b
    p1 = 0.5 * (1.0 - init.b) * (1.0 + init.n_norm)
    p2 = 0.5 * (1.0 - init.b) * (1.0 - init.n_norm)
    omega1 = _matching_frequency(beta, p1, p0)
    omega2 = _matching_frequency(beta, p2, p0)

    w_lower = _shift_work(p1, omega, omega1)
    ledger.append(
        _step(
            "match-middle-level",
            diagonal,
            diagonal,
            work_in=max(-w_lower, 0.0),
            work_out=max(w_lower, 0.0),
        )
    )
    w_raise = _shift_work(p2, omega2, omega)
    ledger.append(
        _step(
            "match-top-level",
            diagonal,
            diagonal,
            work_in=max(w_raise, 0.0),
            work_out=max(-w_raise, 0.0),
        )
    )

    if work_mode == "closed":
        w_sweep_down = quasistatic_work(beta, omega2, omega1, omega1)
        w_sweep_up = quasistatic_work(beta, omega1, omega, 0.0, "both-levels-sweep")
    else:
        w_sweep_down = quasistatic_work_quadrature(beta, omega2, omega1, omega1)
        w_sweep_up = quasistatic_work_quadrature(
            beta, omega1, omega, 0.0, "both-levels-sweep"
        )

    u1 = math.exp(-beta * omega1)
    z1 = 1.0 + 2.0 * u1
    merged = DensityMatrix(np.diag([u1 / z1, u1 / z1, 1.0 / z1]))
    ledger.append(
        _step(
            "sweep-to-common-level",
            diagonal,
            merged,
            work_in=max(-w_sweep_down, 0.0),
            work_out=max(w_sweep_down, 0.0),
        )
    )

    x = math.exp(-beta * omega)
    z = 1.0 + 2.0 * x
    final = DensityMatrix(np.diag([x / z, x / z, 1.0 / z]))
    ledger.append(
        _step(
            "sweep-to-physical-level",
            merged,
            final,
            work_in=max(-w_sweep_up, 0.0),
            work_out=max(w_sweep_up, 0.0),
        )
    )
    return ledger
