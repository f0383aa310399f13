"""
Exact phase dependence of multi-photon interference fringes.

A phase shift phi acts as U(phi) = exp(-i phi J3).  The output amplitude for an
input J1 eigenstate |m_psi> and a detected output |m> is the fixed-bra form

    <m; J1| U(phi) |m_psi; J1> = sum_k <m|m3_k> <m3_k|m_psi> exp(-i phi m3_k),

a spectral sum over the J3 eigenvalues.  Every phi-derivative multiplies the
k-th term by -i m3_k, so derivatives, weak values and the residual of the
per-fringe differential equation are evaluated without finite differences.
The matrix exponential and a Runge-Kutta integration of the fringe equation
are kept as independent oracles.
"""
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np
from scipy import integrate, linalg

from .conf import fringelab_settings
from .exceptions import (
    InvalidConfigurationError,
    InvalidPhaseError,
    NonRealizableTraceError,
    StepSizeUnderflowError,
)
from .spin_algebra import TwoModeConfig, build_operator_set, j1_eigenbasis, photon_number

logger = logging.getLogger(__name__)

REALIZATION_TOLERANCE = 1e-9
# a global phase this close to the imaginary axis is taken to lie on it
PHASE_AXIS_TOLERANCE = 1e-12
ODE_SPAN_MARGIN = 0.05
SIN_ZERO = 1e-12


# --------------------------------------------------------------------------
# Phase grids
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PhaseGrid:
    """Strictly increasing, finite phases (radians) inside [-pi, pi]."""
    phi_values: np.ndarray

    def __post_init__(self):
        values = np.array(self.phi_values, dtype=float).reshape(-1)
        if values.size == 0:
            raise InvalidConfigurationError('a phase grid needs at least one point')
        if not np.all(np.isfinite(values)):
            raise InvalidConfigurationError('phase grid values must be finite')
        if np.any(np.diff(values) <= 0):
            raise InvalidConfigurationError('phase grid values must be strictly increasing')
        if values[0] < -math.pi - 1e-12 or values[-1] > math.pi + 1e-12:
            raise InvalidPhaseError('phase grid must lie within [-pi, pi] (phases are in radians)')
        values.setflags(write=False)
        object.__setattr__(self, 'phi_values', values)

    @classmethod
    def linspace(cls, start, stop, count):
        """``count`` equally spaced phases from ``start`` to ``stop``, both ends included."""
        return cls(np.linspace(start, stop, int(count)))

    @classmethod
    def open_interval(cls, start, stop, count):
        """``count`` equally spaced phases strictly inside (start, stop)."""
        return cls(np.linspace(start, stop, int(count) + 2)[1:-1])

    @classmethod
    def default(cls):
        """The GRID_POINTS-point open grid over (0, pi) used when a run gives no range."""
        return cls.open_interval(0.0, math.pi, fringelab_settings.GRID_POINTS)

    def __len__(self):
        return self.phi_values.size


# --------------------------------------------------------------------------
# Superposition inputs (path basis)
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SuperpositionInput:
    """
    A pure N-photon input given by its components over J3 eigenstates |m3>.

    ``components`` is a sequence of (m3, coefficient) pairs; coefficients must
    be normalized.  Use ``SuperpositionInput.normalized`` to rescale.
    """
    N: int
    components: tuple

    def __post_init__(self):
        n = photon_number(self.N)
        object.__setattr__(self, 'N', n)
        cleaned = []
        seen = set()
        for m3, coefficient in self.components:
            twice = 2.0 * float(m3)
            if abs(twice - round(twice)) > 1e-9 or abs(twice) > n or (round(twice) - n) % 2:
                raise InvalidConfigurationError(
                    f'm3 = {m3!r} is not a J3 eigenvalue for N = {n}'
                )
            key = int(round(twice))
            if key in seen:
                raise InvalidConfigurationError(f'm3 = {m3!r} listed twice')
            seen.add(key)
            cleaned.append((key / 2, complex(coefficient)))
        norm = sum(abs(c) ** 2 for _, c in cleaned)
        if abs(norm - 1.0) > 1e-12:
            raise InvalidConfigurationError(
                f'superposition must be normalized: sum |c|^2 = {norm:.15g}'
            )
        object.__setattr__(self, 'components', tuple(sorted(cleaned, reverse=True)))

    @classmethod
    def normalized(cls, N, components):
        """Build a superposition from unnormalized (m3, coefficient) pairs."""
        components = list(components)
        norm = math.sqrt(sum(abs(complex(c)) ** 2 for _, c in components))
        if norm == 0:
            raise InvalidConfigurationError('superposition has no weight')
        return cls(N, tuple((m3, complex(c) / norm) for m3, c in components))

    def state_vector(self):
        """Components in the J3 basis, index k <-> m3 = N/2 - k."""
        vector = np.zeros(self.N + 1, dtype=complex)
        for m3, coefficient in self.components:
            vector[int(round(self.N / 2 - m3))] = coefficient
        return vector

    @property
    def is_path_symmetric(self):
        """True iff <m3|psi> = conj(<-m3|psi>) for every m3."""
        vector = self.state_vector()
        return bool(np.max(np.abs(vector - np.conj(vector[::-1]))) < 1e-12)


def path_pair_state(N, m3):
    """The constant-periodicity state (|m3> + |-m3>)/sqrt(2); |0> when m3 = 0."""
    if m3 == 0:
        return SuperpositionInput(N, ((0.0, 1.0),))
    weight = 1 / math.sqrt(2)
    return SuperpositionInput(N, ((m3, weight), (-m3, weight)))


def noon_state(N):
    """(|N/2> + |-N/2>)/sqrt(2), the path pair with the most fringes."""
    return path_pair_state(N, photon_number(N) / 2)


@dataclass(frozen=True)
class SuperpositionProjection:
    """A superposition input paired with the detected output half-difference m."""
    input: SuperpositionInput
    m: float

    def __post_init__(self):
        j1_eigenbasis(build_operator_set(self.input.N)).index(self.m)

    @property
    def N(self):
        """Photon number of the input state."""
        return self.input.N


AmplitudeSource = Union[TwoModeConfig, SuperpositionProjection]


# --------------------------------------------------------------------------
# Spectral sums
# --------------------------------------------------------------------------

def _spectral_terms(source):
    """(m3 values, coefficients <m|m3><m3|psi>) of the spectral sum."""
    ops = build_operator_set(source.N)
    basis = j1_eigenbasis(ops)
    bra = np.conj(basis.vector(source.m))
    if isinstance(source, TwoModeConfig):
        ket = basis.vector(source.m_psi)
    elif isinstance(source, SuperpositionProjection):
        ket = source.input.state_vector()
    else:
        raise InvalidConfigurationError(f'cannot evaluate amplitudes for {type(source).__name__}')
    return ops.j3_eigenvalues, bra * ket


def _check_phase(phi):
    phi = np.asarray(phi, dtype=float)
    if not np.all(np.isfinite(phi)):
        raise InvalidPhaseError('phase must be finite')
    return phi


def evaluate_amplitudes(source, phi, order=0):
    """
    d^order/dphi^order <m|psi(phi)> for scalar or array phi.

    order = 0 is the amplitude itself; order 1 and 2 give the analytic phase
    derivatives used by the weak values and the fringe equation.
    """
    phi = _check_phase(phi)
    m3, coefficients = _spectral_terms(source)
    weights = coefficients * (-1j * m3) ** order
    phases = np.exp(-1j * np.multiply.outer(phi, m3))
    return phases @ weights


def amplitude(config, phi):
    """<m; J1| exp(-i phi J3) |m_psi; J1> for one phase."""
    return complex(evaluate_amplitudes(config, float(_check_phase(phi))))


def probability_distribution(N, m_psi, phi):
    """
    P(m; phi) for every output m, ordered N/2, N/2 - 1, ..., -N/2.
    """
    config = TwoModeConfig(N, m_psi, m_psi)
    phi = float(_check_phase(phi))
    ops = build_operator_set(config.N)
    basis = j1_eigenbasis(ops)
    evolved = np.exp(-1j * phi * ops.j3_eigenvalues) * basis.vector(config.m_psi)
    return np.abs(basis.vectors.conj().T @ evolved) ** 2


def superposition_amplitude(state, m, phi):
    """<m; J1| exp(-i phi J3) |state> for a superposition input."""
    source = SuperpositionProjection(state, m)
    return complex(evaluate_amplitudes(source, float(_check_phase(phi))))


def matrix_exponential_amplitude(config, phi):
    """
    Oracle for ``amplitude``: exp(-i phi J3) by scipy's scaling-and-squaring
    Pade expm on the full matrix, sandwiched between J1 eigenvectors.
    """
    ops = build_operator_set(config.N)
    basis = j1_eigenbasis(ops)
    unitary = linalg.expm(-1j * float(phi) * ops.j3)
    return complex(basis.vector(config.m).conj() @ unitary @ basis.vector(config.m_psi))


# --------------------------------------------------------------------------
# Traces and realization
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AmplitudeTrace:
    """
    Amplitudes <m|psi(phi)> on a grid together with their real representation
    amplitudes[k] = global_phase * realized[k].
    """
    source: AmplitudeSource
    grid: PhaseGrid
    amplitudes: np.ndarray
    global_phase: complex
    realized: np.ndarray

    @property
    def config(self):
        """The source of the trace (kept under the name commands use)."""
        return self.source

    @property
    def probabilities(self):
        """|<m|psi(phi)>|^2 on the grid."""
        return np.abs(self.amplitudes) ** 2

    def realized_at(self, phi):
        """Realized amplitude at arbitrary phases, with this trace's global phase."""
        return (np.conj(self.global_phase) * evaluate_amplitudes(self.source, phi)).real

    def realized_derivative_at(self, phi):
        """
        Derivative of the realized amplitude with respect to phi.

        Args:
            phi: a phase or array of phases in radians.

        Returns:
            The real part of conj(global_phase) times the raw derivative.
        """
        return (np.conj(self.global_phase) * evaluate_amplitudes(self.source, phi, order=1)).real


def realize_amplitudes(source, grid, amplitudes):
    """
    Split raw amplitudes into one constant global phase and real values.

    The global phase is the phase of the largest-modulus amplitude, taken
    modulo pi so that it lies in the half-plane Re > 0 (or on the positive
    imaginary axis).  An all-real trace therefore keeps global phase 1 and its
    own signs.  Path symmetric inputs always pass; anything else raises
    ``NonRealizableTraceError``.
    """
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if amplitudes.shape != grid.phi_values.shape:
        raise InvalidConfigurationError('one amplitude per grid point is required')
    if np.max(np.abs(amplitudes) ** 2) > 1 + 1e-12:
        raise NonRealizableTraceError('amplitude modulus exceeds one')

    peak = int(np.argmax(np.abs(amplitudes)))
    if abs(amplitudes[peak]) == 0:
        global_phase = 1 + 0j
    else:
        global_phase = complex(amplitudes[peak] / abs(amplitudes[peak]))
        if global_phase.real < -PHASE_AXIS_TOLERANCE or (
                abs(global_phase.real) <= PHASE_AXIS_TOLERANCE and global_phase.imag < 0):
            global_phase = -global_phase

    rotated = np.conj(global_phase) * amplitudes
    residual = float(np.max(np.abs(rotated.imag)))
    if residual >= REALIZATION_TOLERANCE:
        raise NonRealizableTraceError(
            f'non-realizable trace: imaginary residual {residual:.3g} after removing '
            f'the global phase (phase convention error or non-path-symmetric input)'
        )
    realized = rotated.real.copy()
    amplitudes = amplitudes.copy()
    realized.setflags(write=False)
    amplitudes.setflags(write=False)
    logger.debug('realized %d amplitudes, global phase %s, residual %.2e',
                 len(grid), global_phase, residual)
    return AmplitudeTrace(source, grid, amplitudes, global_phase, realized)


def compute_trace(source, grid=None):
    """Evaluate and realize the amplitudes of ``source`` on ``grid``."""
    grid = grid if grid is not None else PhaseGrid.default()
    return realize_amplitudes(source, grid, evaluate_amplitudes(source, grid.phi_values))


# --------------------------------------------------------------------------
# Weak values
# --------------------------------------------------------------------------

class WeakValue(NamedTuple):
    """A weak value and whether its denominator was too small to trust."""
    value: complex
    singular: bool


def _weak_value(source, phi, order, scale):
    phi = float(_check_phase(phi))
    denominator = complex(evaluate_amplitudes(source, phi))
    # d^n/dphi^n <m|psi> = (-i)^n <m|J3^n|psi>
    numerator = complex(evaluate_amplitudes(source, phi, order=order)) / (-1j) ** order
    singular = abs(denominator) < fringelab_settings.SINGULARITY_THRESHOLD * scale
    if singular:
        logger.debug('weak value of J3^%d singular at phi=%.6f for %s', order, phi, source)
    with np.errstate(divide='ignore', invalid='ignore'):
        value = numerator / denominator if denominator != 0 else complex(np.nan, np.nan)
    return WeakValue(value, singular)


def weak_value_j3(source, phi, scale=1.0):
    """<m|J3|psi(phi)> / <m|psi(phi)>, flagged singular near fringe zeros."""
    return _weak_value(source, phi, 1, scale)


def weak_value_j3sq(source, phi, scale=1.0):
    """<m|J3^2|psi(phi)> / <m|psi(phi)>, flagged singular near fringe zeros."""
    return _weak_value(source, phi, 2, scale)


def superposition_weak_value_j3sq(state, m, phi, scale=1.0):
    """Weak value of J3^2 for a superposition input; its root is the local |dS/dphi|."""
    return weak_value_j3sq(SuperpositionProjection(state, m), phi, scale)


@dataclass(frozen=True, eq=False)
class WeakValueTrace:
    """Weak values of J3 and J3^2 on a grid, with a singular flag per point."""
    source: AmplitudeSource
    grid: PhaseGrid
    j3_weak: np.ndarray
    j3sq_weak: np.ndarray
    singular_flags: np.ndarray


def weak_value_trace(source, grid=None):
    """Weak values of J3 and J3^2 on a grid, flagged relative to the grid maximum."""
    grid = grid if grid is not None else PhaseGrid.default()
    phi = grid.phi_values
    denominator = evaluate_amplitudes(source, phi)
    first = evaluate_amplitudes(source, phi, order=1) / (-1j)
    second = evaluate_amplitudes(source, phi, order=2) / (-1j) ** 2
    scale = np.max(np.abs(denominator))
    singular = np.abs(denominator) < fringelab_settings.SINGULARITY_THRESHOLD * scale
    with np.errstate(divide='ignore', invalid='ignore'):
        j3_weak = np.where(denominator != 0, first / denominator, np.nan + 0j)
        j3sq_weak = np.where(denominator != 0, second / denominator, np.nan + 0j)
    if singular.any():
        logger.debug('%d of %d grid points flagged singular for %s',
                     int(singular.sum()), len(grid), source)
    return WeakValueTrace(source, grid, j3_weak, j3sq_weak, singular)


# --------------------------------------------------------------------------
# The per-fringe differential equation
# --------------------------------------------------------------------------

def _require_off_axis(phi):
    phi = float(_check_phase(phi))
    if abs(math.sin(phi)) < SIN_ZERO:
        raise InvalidPhaseError(
            f'phi = {phi:g} is a multiple of pi, where cot(phi) is singular'
        )
    return phi


def fringe_potential(config, phi):
    """N(N+2)/4 - (m_psi^2 - 2 cos(phi) m_psi m + m^2) / sin^2(phi)."""
    phi = np.asarray(phi, dtype=float)
    casimir = config.N * (config.N + 2) / 4
    quadratic = config.m_psi ** 2 - 2 * np.cos(phi) * config.m_psi * config.m + config.m ** 2
    return casimir - quadratic / np.sin(phi) ** 2


def verify_weak_identity(config, phi):
    """
    |<J3^2>_w + i cot(phi) <J3>_w - fringe_potential| at one phase.

    The relation between the weak values and the eigenvalues m_psi, m holds
    exactly, so the residual only measures floating point error.
    """
    phi = _require_off_axis(phi)
    j3 = weak_value_j3(config, phi)
    j3sq = weak_value_j3sq(config, phi)
    residual = j3sq.value + 1j * (math.cos(phi) / math.sin(phi)) * j3.value \
        - fringe_potential(config, phi)
    return float(abs(residual))


def ode_residual(config, phi):
    """
    |f'' + cot(phi) f' + fringe_potential * f| for f = <m|psi(phi)>, with the
    derivatives taken from the spectral sum.
    """
    phi = _require_off_axis(phi)
    value = complex(evaluate_amplitudes(config, phi))
    first = complex(evaluate_amplitudes(config, phi, order=1))
    second = complex(evaluate_amplitudes(config, phi, order=2))
    residual = second + (math.cos(phi) / math.sin(phi)) * first \
        + float(fringe_potential(config, phi)) * value
    return float(abs(residual))


@dataclass(frozen=True, eq=False)
class IntegratedTrace:
    """Realized amplitude and its derivative obtained by integrating the fringe equation."""
    config: TwoModeConfig
    grid: PhaseGrid
    realized: np.ndarray
    derivative: np.ndarray
    spectral: object  # AmplitudeTrace used for the initial conditions, or None


def ode_solve_oracle(config, phi_span, points=201, initial=None, rtol=1e-10, atol=1e-12):
    """
    Integrate the real second order fringe equation with an adaptive
    Runge-Kutta scheme (DOP853) across ``phi_span``.

    Unless ``initial`` = (value, derivative) is given, the integration starts
    from the exact realized amplitude and its analytic derivative.
    """
    start, stop = (float(value) for value in phi_span)
    if not start < stop:
        raise InvalidPhaseError('phi_span must be increasing')
    for singular in (-math.pi, 0.0, math.pi):
        if start - ODE_SPAN_MARGIN < singular < stop + ODE_SPAN_MARGIN:
            raise InvalidPhaseError(
                f'phi_span {start:g}..{stop:g} must stay {ODE_SPAN_MARGIN} rad away from '
                f'phi = {singular:g}, where the fringe equation is singular'
            )

    grid = PhaseGrid.linspace(start, stop, points)
    spectral = None
    if initial is None:
        spectral = compute_trace(config, grid)
        initial = (spectral.realized[0], float(spectral.realized_derivative_at(start)))

    def rhs(phi, y):
        value, slope = y
        return [slope, -math.cos(phi) / math.sin(phi) * slope - float(fringe_potential(config, phi)) * value]

    solution = integrate.solve_ivp(
        rhs, (start, stop), [float(initial[0]), float(initial[1])],
        method='DOP853', t_eval=grid.phi_values, rtol=rtol, atol=atol,
    )
    if solution.status != 0:
        raise StepSizeUnderflowError(
            f'fringe equation integration failed over {start:g}..{stop:g}: {solution.message}'
        )
    logger.debug('integrated fringe equation for %s with %d evaluations', config, solution.nfev)
    return IntegratedTrace(config, grid, solution.y[0], solution.y[1], spectral)
