"""
Fringe observables of exact traces and their semiclassical interpretation.

A fringe is the stretch between two consecutive zeros of the output
probability.  Its width gives an experimental path intensity difference
|J3|_exp = pi / width, which is compared with the classical J3 of the same
input/output combination.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .bracketing import bracketed_roots
from .conf import fringelab_settings
from .exact_evolution import PhaseGrid, compute_trace
from .exceptions import InvalidConfigurationError
from .semiclassical import (
    classical_j3_squared,
    classical_support,
    peak_phase,
    semiclassical_curve,
)
from .spin_algebra import TwoModeConfig, photon_number

logger = logging.getLogger(__name__)

ZERO_PROBABILITY_RATIO = 1e-12


def find_probability_zeros(trace, interval=None, strict=True):
    """
    Zeros of P(m; phi) within ``interval`` as sign changes of the realized
    amplitude, refined by bisection on the exact amplitude.
    """
    phi = trace.grid.phi_values
    values = trace.realized
    if interval is not None:
        low, high = interval
        if low < phi[0] - 1e-12 or high > phi[-1] + 1e-12:
            raise InvalidConfigurationError(
                f'interval {low:g}..{high:g} exceeds the trace coverage {phi[0]:g}..{phi[-1]:g}'
            )
        mask = (phi >= low) & (phi <= high)
        phi, values = phi[mask], values[mask]

    zeros = bracketed_roots(lambda x: float(trace.realized_at(x)), phi, values,
                            fringelab_settings.ZERO_XTOL, strict=strict)
    peak = float(np.max(values ** 2)) if values.size else 0.0
    for zero in zeros:
        probability = float(trace.realized_at(zero)) ** 2
        if probability > ZERO_PROBABILITY_RATIO * peak:
            logger.warning('zero at phi=%.10f leaves P=%.3g (peak %.3g) for %s',
                           zero, probability, peak, trace.source)
    return zeros


class FringeWidths(NamedTuple):
    """Fringe widths, |J3|_exp = pi / width, and a note when no fringe is complete."""
    widths: list
    j3_exp: list
    note: str


def fringe_widths_and_j3(zeros):
    """Widths between consecutive zeros and |J3|_exp = pi / width (units of hbar)."""
    zeros = [float(zero) for zero in zeros]
    if len(zeros) < 2:
        return FringeWidths([], [], f'{len(zeros)} zero(s): no complete fringe')
    widths = [high - low for low, high in zip(zeros, zeros[1:])]
    if any(width <= 0 for width in widths):
        raise InvalidConfigurationError('zeros must be strictly increasing')
    return FringeWidths(widths, [math.pi / width for width in widths], '')


class EqualCasePrediction(NamedTuple):
    """Predicted zeros and fringe widths for m_psi = m = 0."""
    N: int
    minima: list          # predicted zeros in (0, pi)
    all_minima: list      # predicted zeros in (-pi, pi)
    count: int
    interior_width: float
    edge_width: float


def equal_case_predictions(N):
    """
    Semiclassical zeros for equal photon numbers in input and output
    (m_psi = m = 0): phi = 3 pi/(2(N+1)), 7 pi/(2(N+1)), ...
    """
    n = photon_number(N)
    if n % 2:
        raise InvalidConfigurationError(
            f'equal input photon numbers need an even N, got N = {n}'
        )
    minima = [(4 * k + 3) * math.pi / (2 * (n + 1)) for k in range(n // 2)]
    return EqualCasePrediction(
        N=n,
        minima=minima,
        all_minima=sorted([-phi for phi in minima] + minima),
        count=n,
        interior_width=2 * math.pi / (n + 1),
        edge_width=3 * math.pi / (n + 1),
    )


def count_zeros(config, points=None):
    """Number of probability zeros of an exact trace over (-pi, pi)."""
    points = points or 2 * fringelab_settings.GRID_POINTS
    trace = compute_trace(config, PhaseGrid.open_interval(-math.pi, math.pi, points))
    return len(find_probability_zeros(trace))


def matching_phases(N, m_psi, m, j3_value, length=None):
    """Every support phase in (0, pi) where classical J3 equals ``j3_value``."""
    target = float(j3_value) ** 2
    roots = []
    for low, high in classical_support(N, m_psi, m, length):
        x = np.linspace(low, high, 2049)[1:-1]
        values = classical_j3_squared(N, m_psi, m, x, length) - target

        def difference(phi):
            return float(classical_j3_squared(N, m_psi, m, phi, length)) - target

        roots.extend(bracketed_roots(difference, x, values, fringelab_settings.ZERO_XTOL))
    return sorted(roots)


def maximal_j3(N, m_psi, m, length=None):
    """Largest classical J3 over the support (0 when the support is empty)."""
    best = 0.0
    for interval in classical_support(N, m_psi, m, length):
        peak = peak_phase(N, m_psi, m, interval, length)
        best = max(best, math.sqrt(max(float(classical_j3_squared(N, m_psi, m, peak, length)), 0.0)))
    return best


@dataclass(frozen=True)
class FringeComparison:
    """One exact fringe next to the classical phase with the same |J3|."""
    start: float
    end: float
    width: float
    j3_exp: float
    center: float
    matching_phase: Optional[float]
    offset: Optional[float]
    inside_fringe: bool
    exceeds_maximum: bool
    candidates: tuple = ()


@dataclass(frozen=True, eq=False)
class FringeReport:
    """Fringe statistics of one trace and how they compare with the classical J3."""
    config: TwoModeConfig
    zeros: list
    widths: list
    j3_exp: list
    theory_match: list
    support: list
    max_j3: float
    length: str
    notes: list = field(default_factory=list)


def compare_report(config, trace=None, curve=None, length=None, j3_exp=None):
    """
    Measure every fringe of an exact trace and locate, for each, the phase
    where the classical J3 reproduces its |J3|_exp.

    Args:
        config: the TwoModeConfig being analysed.
        trace: an exact trace of ``config``; computed on the default grid when omitted.
        curve: a semiclassical curve on the same grid as ``trace``.
        length: vector length convention, used only when ``curve`` is omitted.
        j3_exp: optional |J3|_exp values, one per fringe, to match instead of
            the measured pi / width (for example published values).  The
            measured values are kept in the report notes.

    Returns:
        A FringeReport.
    """
    trace = trace if trace is not None else compute_trace(config)
    if curve is not None:
        if len(curve.grid) != len(trace.grid) or not np.allclose(
                curve.grid.phi_values, trace.grid.phi_values, rtol=0, atol=1e-12):
            raise InvalidConfigurationError('trace and curve must share one phase grid')
        length = curve.length
    else:
        curve = semiclassical_curve(config, trace.grid, length)
        length = curve.length

    N, m_psi, m = config.N, config.m_psi, config.m
    support = list(curve.support)
    notes = [f'classical support: ' + ', '.join(f'{low:.6f}..{high:.6f}' for low, high in support)
             if support else 'classical support is empty']
    evanescent = curve.evanescent & (trace.probabilities > 1e-12)
    if evanescent.any():
        notes.append(
            f'evanescent tail: {int(evanescent.sum())} grid points with P > 1e-12 outside the support'
        )

    all_zeros = find_probability_zeros(trace)
    radicand = classical_j3_squared(N, m_psi, m, np.asarray(all_zeros, dtype=float), length)
    zeros = [zero for zero, value in zip(all_zeros, radicand) if value >= 0]
    for zero in sorted(set(all_zeros) - set(zeros)):
        notes.append(f'zero at phi={zero:.6f} lies outside the support; excluded from fringe statistics')

    fringe_widths = fringe_widths_and_j3(zeros)
    if fringe_widths.note:
        notes.append(fringe_widths.note)
    if j3_exp is not None:
        j3_exp = [float(value) for value in j3_exp]
        if len(j3_exp) != len(fringe_widths.widths):
            raise InvalidConfigurationError(
                f'{len(j3_exp)} |J3|_exp value(s) given for {len(fringe_widths.widths)} fringe(s)')
        notes.append('matching supplied |J3|_exp; measured: '
                     + ', '.join(f'{value:.4f}' for value in fringe_widths.j3_exp))
        fringe_widths = fringe_widths._replace(j3_exp=j3_exp)
    max_j3 = maximal_j3(N, m_psi, m, length)

    matches = []
    for low, high, width, j3 in zip(zeros, zeros[1:], fringe_widths.widths, fringe_widths.j3_exp):
        center = (low + high) / 2
        candidates = [phi * sign for phi in matching_phases(N, m_psi, m, j3, length)
                      for sign in ((1, -1) if center < 0 else (1,))]
        candidates = [phi for phi in candidates if phi * center >= 0]
        exceeds = j3 > max_j3
        if exceeds:
            logger.warning('fringe %.4f..%.4f of %s: |J3|_exp=%.4f exceeds the classical maximum %.4f',
                           low, high, config, j3, max_j3)
        if candidates:
            best = min(candidates, key=lambda phi: abs(phi - center))
            matches.append(FringeComparison(
                start=low, end=high, width=width, j3_exp=j3, center=center,
                matching_phase=best, offset=best - center, inside_fringe=low <= best <= high,
                exceeds_maximum=exceeds, candidates=tuple(candidates),
            ))
        else:
            matches.append(FringeComparison(
                start=low, end=high, width=width, j3_exp=j3, center=center,
                matching_phase=None, offset=None, inside_fringe=False, exceeds_maximum=exceeds,
            ))

    return FringeReport(
        config=config,
        zeros=zeros,
        widths=fringe_widths.widths,
        j3_exp=fringe_widths.j3_exp,
        theory_match=matches,
        support=support,
        max_j3=max_j3,
        length=length,
        notes=notes,
    )
