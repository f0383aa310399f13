"""
Semiclassical separation of a fringe into action and envelope.

Writing <m|psi(phi)> = 2 A(phi) cos(S(phi)) and keeping the leading orders in
hbar turns the fringe equation into

    dS/dphi = -J3(m, m_psi, phi)                    (Hamilton-Jacobi form)
    J3^2    = L^2 - (m_psi^2 - 2 cos(phi) m_psi m + m^2) / sin^2(phi)
    A^2     = rho0 / |sin(phi) J3|,  rho0 = 1/(2 pi),

where L^2 is the squared length of the J-vector, N(N+2)/4 ('exact') or
((N+1)/2)^2 ('shifted').  J3 is the classical intensity difference between the
paths; where J3^2 < 0 the amplitude is evanescent and only classified here.

A classical random-phase model provides an independent Monte-Carlo oracle
for the envelope: uniformly distributed input phase differences produce an
output distribution with density 2 A^2.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import integrate, optimize

from .bracketing import bracketed_roots
from .conf import LENGTH_CONVENTIONS, fringelab_settings, thread_count
from .exact_evolution import PhaseGrid, compute_trace
from .exceptions import InvalidConfigurationError, InvalidPhaseError, OutsideSupportError
from .spin_algebra import photon_number

logger = logging.getLogger(__name__)

RHO0 = 1 / (2 * math.pi)
QUAD_TOLERANCE = 1e-11
SUPPORT_SAMPLES = 4096
EDGE_OFFSET = 1e-15


def vector_length_squared(N, length=None):
    """Squared J-vector length: N(N+2)/4 ('exact') or ((N+1)/2)^2 ('shifted')."""
    n = photon_number(N)
    length = length or fringelab_settings.LENGTH_CONVENTION
    if length not in LENGTH_CONVENTIONS:
        raise InvalidConfigurationError(
            f'length convention must be one of {LENGTH_CONVENTIONS}, got {length!r}'
        )
    return n * (n + 2) / 4 if length == 'exact' else ((n + 1) / 2) ** 2


def _safe_ratio(numerator, denominator):
    """numerator / denominator with 0/0 taken as 0 (removable singularities)."""
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = numerator / denominator
    if numerator == 0:
        return np.zeros_like(ratio)
    return ratio


def classical_j3_squared(N, m_psi, m, phi, length=None):
    """
    Radicand of the classical J3 (vectorized, even in phi).

    The quadratic form is evaluated as
    (m_psi - m)^2 / (4 sin^2(phi/2)) + (m_psi + m)^2 / (4 cos^2(phi/2)),
    which stays finite at phi = 0 when m = m_psi and at phi = pi when
    m = -m_psi.  Elsewhere on sin(phi) = 0 the radicand is -inf.
    """
    phi = np.abs(np.asarray(phi, dtype=float))
    half = phi / 2
    quadratic = _safe_ratio((m_psi - m) ** 2, 4 * np.sin(half) ** 2) \
        + _safe_ratio((m_psi + m) ** 2, 4 * np.cos(half) ** 2)
    return vector_length_squared(N, length) - quadratic


class ClassicalJ3(NamedTuple):
    """|J3| in units of hbar; for evanescent phases the magnitude of the imaginary value."""
    magnitude: float
    evanescent: bool


def classical_j3(N, m_psi, m, phi, length=None):
    """Classical intensity difference between the paths for one phase."""
    radicand = float(classical_j3_squared(N, m_psi, m, phi, length))
    if not math.isfinite(radicand):
        raise InvalidPhaseError(
            f'classical J3 is singular at phi = {float(phi):g} for m_psi = {m_psi:g}, m = {m:g}'
        )
    return ClassicalJ3(math.sqrt(abs(radicand)), radicand < 0)


def classical_support(N, m_psi, m, length=None, samples=SUPPORT_SAMPLES):
    """
    Maximal phase intervals within [0, pi] where J3^2 >= 0, as (low, high) pairs.

    The support is symmetric under phi -> -phi; only the positive side is
    returned.  Endpoints come from bisection on the radicand.
    """
    length = length or fringelab_settings.LENGTH_CONVENTION
    vector_length_squared(N, length)
    return list(_support(N, float(m_psi), float(m), length, samples, fringelab_settings.ZERO_XTOL))


@lru_cache(maxsize=256)
def _support(N, m_psi, m, length, samples, xtol):
    def radicand(phi):
        return float(classical_j3_squared(N, m_psi, m, phi, length))

    x = np.linspace(0.0, math.pi, samples + 2)[1:-1]
    values = classical_j3_squared(N, m_psi, m, x, length)
    lower_limit = radicand(0.0)
    upper_limit = radicand(math.pi)

    # close the sample set with points just inside the interval ends
    x = np.concatenate(([EDGE_OFFSET], x, [math.pi - EDGE_OFFSET]))
    values = np.concatenate(([radicand(EDGE_OFFSET)], values, [radicand(math.pi - EDGE_OFFSET)]))
    edges = bracketed_roots(radicand, x, values, xtol)

    intervals = []
    start = 0.0 if values[0] >= 0 and math.isfinite(lower_limit) else None
    for edge in edges:
        if start is None:
            start = edge
        else:
            intervals.append((start, edge))
            start = None
    if start is not None:
        end = math.pi if math.isfinite(upper_limit) and upper_limit >= 0 else float(x[-1])
        intervals.append((start, end))
    logger.debug('classical support for N=%s, m_psi=%g, m=%g: %s', N, m_psi, m, intervals)
    return tuple(intervals)


def _interval_containing(intervals, phi):
    for low, high in intervals:
        if low <= phi <= high:
            return low, high
    return None


def _require_support(N, m_psi, m, phi, length, margin=0.0):
    intervals = classical_support(N, m_psi, m, length)
    interval = _interval_containing(intervals, abs(float(phi)))
    if interval is None or not (interval[0] + margin <= abs(phi) <= interval[1] - margin):
        raise OutsideSupportError(
            f'phi = {float(phi):g} is outside the classical support {intervals} '
            f'(margin {margin:g}) for N = {N}, m_psi = {m_psi:g}, m = {m:g}'
        )
    return interval


def _j3_integrand(N, m_psi, m, length):
    def integrand(phi):
        return math.sqrt(max(float(classical_j3_squared(N, m_psi, m, phi, length)), 0.0))
    return integrand


def action(N, m_psi, m, phi, reference_phi, reference_action, length=None):
    """
    S(phi) = S(reference_phi) - integral of J3 from reference_phi to phi.

    Both phases must share one support interval and one sign; the action is
    taken as even in phi.
    """
    if phi * reference_phi < 0:
        raise InvalidPhaseError('phi and reference_phi must lie on the same side of phi = 0')
    interval = _require_support(N, m_psi, m, phi, length)
    if _interval_containing([interval], abs(float(reference_phi))) is None:
        raise OutsideSupportError('reference_phi must lie in the same support interval as phi')
    integral, _ = integrate.quad(
        _j3_integrand(N, m_psi, m, length), abs(reference_phi), abs(phi),
        epsabs=QUAD_TOLERANCE, epsrel=QUAD_TOLERANCE, limit=200,
    )
    return reference_action - integral


def envelope(N, m_psi, m, phi, length=None):
    """A(phi) = sqrt(rho0 / |sin(phi) J3|), strictly inside the support."""
    _require_support(N, m_psi, m, phi, length)
    j3 = classical_j3(N, m_psi, m, phi, length)
    denominator = abs(math.sin(phi)) * j3.magnitude
    if j3.evanescent or denominator == 0:
        raise OutsideSupportError(f'envelope is undefined at the support edge phi = {float(phi):g}')
    return math.sqrt(RHO0 / denominator)


def classical_density(N, m_psi, m, phi, length=None):
    """2 A^2: the random-phase probability of detecting m."""
    return 2 * envelope(N, m_psi, m, phi, length) ** 2


def continuity_residual(N, m_psi, m, phi, length=None):
    """
    d/dphi (sin(phi) A^2 dS/dphi) from analytic derivatives of the closed forms.

    With A^2 = rho0/(sin J3) and S' = -J3 the bracket is the constant -rho0.
    """
    _require_support(N, m_psi, m, phi, length)
    phi = abs(float(phi))
    sin, cos = math.sin(phi), math.cos(phi)
    j3 = classical_j3(N, m_psi, m, phi, length).magnitude
    if sin == 0 or j3 == 0:
        raise OutsideSupportError(f'continuity residual is undefined at phi = {phi:g}')

    # R = L^2 - q(phi)/sin^2, dR/dphi = -(q' sin - 2 q cos) / sin^3
    q = m_psi ** 2 - 2 * cos * m_psi * m + m ** 2
    dq = 2 * sin * m_psi * m
    d_radicand = -(dq * sin - 2 * q * cos) / sin ** 3
    dj3 = d_radicand / (2 * j3)

    a_sq = RHO0 / (sin * j3)
    d_a_sq = -RHO0 * (cos * j3 + sin * dj3) / (sin * j3) ** 2
    ds = -j3
    d2s = -dj3
    return cos * a_sq * ds + sin * d_a_sq * ds + sin * a_sq * d2s


# --------------------------------------------------------------------------
# Action constant, approximate amplitude and curves
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ActionAnchor:
    """S(phi) = action at phi; ``method`` records how the constant was fixed."""
    phi: float
    action: float
    method: str


def peak_phase(N, m_psi, m, interval, length=None):
    """Phase of maximal classical J3 inside one support interval."""
    low, high = interval
    result = optimize.minimize_scalar(
        lambda phi: -float(classical_j3_squared(N, m_psi, m, phi, length)),
        bounds=(low, high), method='bounded', options={'xatol': 1e-10},
    )
    return float(result.x)


def calibrate_anchor(config, interval=None, length=None):
    """
    Fix the integration constant of the action.

    For m = m_psi = 0 the 50:50 beam-splitter parity fixes S(pi/2) = -N pi/4.
    Otherwise S is anchored at the peak of J3 and chosen so that the nearest
    zero of cos(S) coincides with the nearest zero of the exact amplitude.
    This is a calibration against exact numerics, not a prediction.
    """
    length = length or fringelab_settings.LENGTH_CONVENTION
    interval = tuple(interval) if interval is not None else None
    return _anchor(config, interval, length,
                   fringelab_settings.GRID_POINTS, fringelab_settings.ZERO_XTOL)


@lru_cache(maxsize=256)
def _anchor(config, interval, length, grid_points, xtol):
    N, m_psi, m = config.N, config.m_psi, config.m
    if m_psi == 0 and m == 0:
        return ActionAnchor(math.pi / 2, -N * math.pi / 4, 'beam-splitter parity')

    if interval is None:
        intervals = classical_support(N, m_psi, m, length)
        if not intervals:
            raise OutsideSupportError(f'no classical support for {config}')
        interval = max(intervals, key=lambda iv: classical_j3_squared(
            N, m_psi, m, peak_phase(N, m_psi, m, iv, length), length))
    anchor_phi = peak_phase(N, m_psi, m, interval, length)

    low, high = interval
    grid = PhaseGrid.open_interval(low, high, grid_points)
    trace = compute_trace(config, grid)
    zeros = bracketed_roots(lambda phi: float(trace.realized_at(phi)), grid.phi_values,
                            trace.realized, xtol)
    if not zeros:
        logger.warning('no exact zero inside %s for %s; action constant left at 0', interval, config)
        return ActionAnchor(anchor_phi, 0.0, 'uncalibrated')

    nearest = min(zeros, key=lambda zero: abs(zero - anchor_phi))
    integral, _ = integrate.quad(
        _j3_integrand(N, m_psi, m, length), anchor_phi, nearest,
        epsabs=QUAD_TOLERANCE, epsrel=QUAD_TOLERANCE, limit=200,
    )
    logger.debug('anchored action for %s at phi=%.6f using exact zero %.6f',
                 config, anchor_phi, nearest)
    return ActionAnchor(anchor_phi, math.pi / 2 + integral, 'nearest exact zero')


def mirror_sign(m_psi, m):
    """Parity (-1)^(m - m_psi) relating the realized amplitude at -phi and phi."""
    return -1.0 if int(round(m - m_psi)) % 2 else 1.0


def approx_amplitude(config, phi, length=None, margin=None, anchor=None):
    """
    2 A(phi) cos(S(phi)) inside the classical support.

    Phases closer than ``margin`` to a support edge are rejected; the
    evanescent branch is not modelled.
    """
    N, m_psi, m = config.N, config.m_psi, config.m
    margin = fringelab_settings.SUPPORT_MARGIN if margin is None else margin
    interval = _require_support(N, m_psi, m, phi, length, margin)
    anchor = anchor or calibrate_anchor(config, interval, length)
    magnitude = abs(float(phi))
    s = action(N, m_psi, m, magnitude, anchor.phi, anchor.action, length)
    value = 2 * envelope(N, m_psi, m, magnitude, length) * math.cos(s)
    return value if phi >= 0 else mirror_sign(m_psi, m) * value


@dataclass(frozen=True, eq=False)
class SemiclassicalCurve:
    """
    Classical J3, action, envelope and approximate amplitude on a grid.

    Entries outside the support (and, for the approximation, within the edge
    margin) are NaN.
    """
    config: object
    grid: PhaseGrid
    j3_classical: np.ndarray
    evanescent: np.ndarray
    action: np.ndarray
    envelope: np.ndarray
    approximation: np.ndarray
    support: list
    anchors: list
    length: str
    rho0: float = field(default=RHO0)

    @property
    def in_support(self):
        """Mask of grid points where the classical orbit reaches the output."""
        return ~self.evanescent

    @property
    def peak_envelope(self):
        """4 A^2, the envelope of the fringe maxima."""
        return 4 * self.envelope ** 2


def _cumulative_action(integrand, anchor, phis):
    """Action at sorted ``phis`` integrating outward from the anchor point."""
    result = np.empty(phis.size)
    above = np.flatnonzero(phis >= anchor.phi)
    below = np.flatnonzero(phis < anchor.phi)[::-1]
    for indices in (above, below):
        current_phi, current = anchor.phi, anchor.action
        for k in indices:
            piece, _ = integrate.quad(integrand, current_phi, phis[k],
                                      epsabs=QUAD_TOLERANCE, epsrel=QUAD_TOLERANCE, limit=200)
            current -= piece
            current_phi = phis[k]
            result[k] = current
    return result


def semiclassical_curve(config, grid=None, length=None, margin=None):
    """Assemble the SemiclassicalCurve of a configuration on a phase grid."""
    grid = grid if grid is not None else PhaseGrid.default()
    length = length or fringelab_settings.LENGTH_CONVENTION
    margin = fringelab_settings.SUPPORT_MARGIN if margin is None else margin
    N, m_psi, m = config.N, config.m_psi, config.m

    phi = grid.phi_values
    magnitude = np.abs(phi)
    radicand = classical_j3_squared(N, m_psi, m, phi, length)
    with np.errstate(divide='ignore', invalid='ignore'):
        j3 = np.sqrt(np.abs(radicand))
        envelope_values = np.where(
            radicand > 0, np.sqrt(RHO0 / (np.abs(np.sin(phi)) * j3)), np.nan)
    envelope_values[~np.isfinite(envelope_values)] = np.nan
    j3[~np.isfinite(j3)] = np.nan

    support = classical_support(N, m_psi, m, length)
    action_values = np.full(phi.size, np.nan)
    approximation = np.full(phi.size, np.nan)
    anchors = []
    integrand = _j3_integrand(N, m_psi, m, length)
    signs = np.where(phi < 0, mirror_sign(m_psi, m), 1.0)
    for interval in support:
        low, high = interval
        inside = np.flatnonzero((magnitude >= low) & (magnitude <= high) & (radicand >= 0))
        if inside.size == 0:
            continue
        anchor = calibrate_anchor(config, interval, length)
        anchors.append(anchor)
        order = inside[np.argsort(magnitude[inside], kind='stable')]
        action_values[order] = _cumulative_action(integrand, anchor, magnitude[order])
        usable = order[(magnitude[order] >= low + margin) & (magnitude[order] <= high - margin)]
        approximation[usable] = signs[usable] * 2 * envelope_values[usable] \
            * np.cos(action_values[usable])

    return SemiclassicalCurve(
        config=config,
        grid=grid,
        j3_classical=j3,
        evanescent=radicand < 0,
        action=action_values,
        envelope=envelope_values,
        approximation=approximation,
        support=support,
        anchors=anchors,
        length=length,
    )


def approximation_error(config, grid, length=None, margin=None):
    """
    Largest |2A cos S - exact realized amplitude| over the grid points where
    the approximation is defined, after aligning the overall sign (the
    realized trace is only fixed up to sign).
    """
    trace = compute_trace(config, grid)
    curve = semiclassical_curve(config, grid, length, margin)
    usable = np.isfinite(curve.approximation)
    if not usable.any():
        raise OutsideSupportError(f'no grid point inside the usable support for {config}')
    approx = curve.approximation[usable]
    exact = trace.realized[usable]
    sign = 1.0 if np.dot(approx, exact) >= 0 else -1.0
    return float(np.max(np.abs(sign * approx - exact)))


# --------------------------------------------------------------------------
# Classical random-phase oracle
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalPhaseModel:
    """
    Classical J-vector of fixed length with J1 = m_psi and a uniformly random
    phase theta in the J2-J3 plane.
    """
    N: int
    m_psi: float
    length: str = 'shifted'

    def __post_init__(self):
        object.__setattr__(self, 'N', photon_number(self.N))
        if abs(self.m_psi) > self.vector_length:
            raise InvalidConfigurationError(
                f'|m_psi| = {abs(self.m_psi):g} exceeds the vector length {self.vector_length:g}'
            )

    @property
    def vector_length(self):
        """Length of the classical angular momentum vector."""
        return math.sqrt(vector_length_squared(self.N, self.length))

    @property
    def radius(self):
        """Radius of the precession circle about the J1 axis."""
        return math.sqrt(self.vector_length ** 2 - self.m_psi ** 2)

    def output(self, theta, phi):
        """J_phi = cos(phi) J1 - sin(phi) J2 for the sampled phases theta."""
        j2 = self.radius * np.cos(theta)
        return math.cos(phi) * self.m_psi - math.sin(phi) * j2


@dataclass(frozen=True, eq=False)
class ClassicalHistogram:
    """Monte-Carlo counts of the classical output J_phi, one bin per integer step of m."""
    N: int
    m_psi: float
    phi: float
    sample_count: int
    seed: int
    vector_length: float
    m_values: np.ndarray
    counts: np.ndarray

    @property
    def frequencies(self):
        """Counts divided by the number of samples."""
        return self.counts / self.sample_count

    @property
    def standard_errors(self):
        """Binomial standard error of each frequency."""
        p = self.frequencies
        return np.sqrt(p * (1 - p) / self.sample_count)


def _histogram_chunk(model, phi, edges, seed_sequence, size):
    rng = np.random.default_rng(seed_sequence)
    theta = rng.uniform(0.0, 2 * math.pi, size)
    counts, _ = np.histogram(model.output(theta, phi), bins=edges)
    return counts


def classical_envelope_oracle(N, m_psi, phi, sample_count, seed=0, length='shifted'):
    """
    Monte-Carlo histogram of classical random-phase interference over unit
    bins centred on m = N/2, ..., -N/2.

    Samples are drawn in fixed-size chunks, each from its own substream
    spawned from ``seed``; integer counts are summed, so the result depends on
    (seed, sample_count) only, not on the number of worker threads.  Mass near
    the turning points piles up in the outermost occupied bins.
    """
    model = ClassicalPhaseModel(N, m_psi, length)
    if sample_count < 10 ** 4:
        raise InvalidConfigurationError(f'sample_count must be at least 10^4, got {sample_count}')
    phi = float(phi)
    if not math.isfinite(phi):
        raise InvalidPhaseError('phase must be finite')

    n = model.N
    edges = np.arange(n + 2) - (n + 1) / 2
    chunk = int(fringelab_settings.MC_CHUNK_SIZE)
    sizes = [chunk] * (sample_count // chunk)
    if sample_count % chunk:
        sizes.append(sample_count % chunk)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))

    logger.debug('classical oracle: %d samples in %d chunks for N=%d, phi=%.6f',
                 sample_count, len(sizes), n, phi)
    with ThreadPoolExecutor(max_workers=thread_count()) as executor:
        partial = executor.map(
            lambda job: _histogram_chunk(model, phi, edges, *job), zip(streams, sizes))
        counts = np.sum(list(partial), axis=0)

    return ClassicalHistogram(
        N=n,
        m_psi=m_psi,
        phi=phi,
        sample_count=sample_count,
        seed=seed,
        vector_length=model.vector_length,
        m_values=(n / 2 - np.arange(n + 1)),
        counts=counts[::-1].astype(np.int64),
    )
