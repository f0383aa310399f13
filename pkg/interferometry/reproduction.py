"""
Regenerate the published fringe figures and check every quoted number.

``reproduce`` writes one CSV per figure plus ``summary.json`` with the golden
checks.  Figure grids are fixed so that repeated runs are byte-identical.
"""
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import golden
from .exact_evolution import PhaseGrid, compute_trace
from .export import csv_text, render_json, write_text
from .fringe_analysis import (
    compare_report,
    count_zeros,
    equal_case_predictions,
    find_probability_zeros,
    fringe_widths_and_j3,
    matching_phases,
    maximal_j3,
)
from .semiclassical import (
    approximation_error,
    classical_density,
    classical_envelope_oracle,
    classical_j3,
    classical_j3_squared,
    classical_support,
    semiclassical_curve,
)
from .serializer import GoldenSummarySerializer
from .spin_algebra import TwoModeConfig

logger = logging.getLogger(__name__)

FIGURE_POINTS = 2048
FIGURE_LENGTH = 'shifted'


@dataclass(frozen=True)
class Figure:
    """One figure: its file name, what it plots and for which configurations."""
    name: str
    kind: str           # 'amplitude', 'rates' or 'j3'
    configs: tuple
    title: str


FIGURES = (
    Figure('fig1a', 'amplitude', (golden.EQUAL_8,), 'exact and approximate amplitude, 8 photons'),
    Figure('fig1b', 'amplitude', (golden.EQUAL_16,), 'exact and approximate amplitude, 16 photons'),
    Figure('fig2a', 'rates', (golden.EQUAL_8,), 'count rates for equal photon numbers, 8 photons'),
    Figure('fig2b', 'rates', (golden.EQUAL_16,), 'count rates for equal photon numbers, 16 photons'),
    Figure('fig3', 'j3', (golden.CROSS_8, golden.CROSS_16), '|J3| for 2m_psi = 0, 2m = N/2'),
    Figure('fig4a', 'rates', (golden.CROSS_8,), 'count rates for 2m = N/2, 8 photons'),
    Figure('fig4b', 'rates', (golden.CROSS_16,), 'count rates for 2m = N/2, 16 photons'),
    Figure('fig5', 'j3', (golden.SELF_8, golden.SELF_16), '|J3| for 2m_psi = 2m = N/2'),
    Figure('fig6a', 'rates', (golden.SELF_8,), 'count rates for 2m_psi = 2m = N/2, 8 photons'),
    Figure('fig6b', 'rates', (golden.SELF_16,), 'count rates for 2m_psi = 2m = N/2, 16 photons'),
)


def figure_grid():
    """The FIGURE_POINTS open grid over (-pi, pi) shared by all figures."""
    # an even point count keeps phi = 0 off the grid
    return PhaseGrid.open_interval(-math.pi, math.pi, FIGURE_POINTS)


def aligned_approximation(trace, curve):
    """The approximate amplitude with its overall sign matched to the realized trace."""
    approximation = curve.approximation
    usable = np.isfinite(approximation)
    if usable.any() and np.dot(approximation[usable], trace.realized[usable]) < 0:
        return -approximation
    return approximation


def relative_j3(config, phi, length=FIGURE_LENGTH):
    """Classical |J3| divided by (N+1)/2, NaN where evanescent."""
    radicand = classical_j3_squared(config.N, config.m_psi, config.m, phi, length)
    magnitude = np.sqrt(np.clip(np.nan_to_num(radicand, neginf=-1.0), 0.0, None))
    return np.where(radicand >= 0, magnitude / ((config.N + 1) / 2), np.nan)


def figure_columns(figure, grid=None):
    """
    Columns of one figure CSV.

    Args:
        figure: the Figure to tabulate.
        grid: phase grid, ``figure_grid()`` when omitted.

    Returns:
        ``{column name: values}`` starting with ``phi``.  Amplitude figures
        hold the realized amplitude and the sign-aligned 2 A cos S, rate
        figures P(m; phi) and 4 A^2, J3 figures |J3| relative to (N+1)/2.
    """
    grid = grid if grid is not None else figure_grid()
    phi = grid.phi_values
    columns = {'phi': phi}

    if figure.kind == 'j3':
        for config in figure.configs:
            columns[f'j3_relative_N{config.N}'] = relative_j3(config, phi)
        return columns

    config, = figure.configs
    trace = compute_trace(config, grid)
    curve = semiclassical_curve(config, grid, FIGURE_LENGTH)
    if figure.kind == 'amplitude':
        columns['exact'] = trace.realized
        columns['approximation'] = aligned_approximation(trace, curve)
    else:
        columns['probability'] = trace.probabilities
        columns['envelope'] = curve.peak_envelope
        columns['in_support'] = curve.in_support.astype(float)
    return columns


# --------------------------------------------------------------------------
# Golden checks
# --------------------------------------------------------------------------

def _zero_checks():
    checks = []
    for config, published in golden.ZEROS.items():
        zeros = find_probability_zeros(compute_trace(config))
        note = '' if len(zeros) == len(published) else f'{len(zeros)} zeros found, {len(published)} published'
        for k, reference in enumerate(published):
            computed = zeros[k] if len(zeros) == len(published) else None
            checks.append(golden.GoldenCheck(
                f'zero[{k}]', 'probability zero (rad)', str(config), reference, computed,
                golden.ZERO_TOLERANCE, note=note))

        widths = fringe_widths_and_j3(zeros)
        for k, reference in enumerate(golden.J3_EXP[config]):
            computed = widths.j3_exp[k] if k < len(widths.j3_exp) else None
            checks.append(golden.GoldenCheck(
                f'j3_exp[{k}]', '|J3|_exp from exact zeros (hbar)', str(config), reference,
                computed, golden.J3_EXP_TOLERANCE))

        converted = fringe_widths_and_j3(np.concatenate(([0.0], np.cumsum(golden.FRINGE_WIDTHS[config]))))
        for k, (reference, computed) in enumerate(zip(golden.J3_EXP[config], converted.j3_exp)):
            checks.append(golden.GoldenCheck(
                f'width_to_j3[{k}]', 'pi / published width (hbar)', str(config), reference,
                computed, golden.WIDTH_CONVERSION_TOLERANCE))
    return checks


def _classical_checks():
    checks = []
    for config, phi, reference in golden.CLASSICAL_J3:
        computed = classical_j3(config.N, config.m_psi, config.m, phi, 'exact').magnitude
        checks.append(golden.GoldenCheck(
            f'classical_j3(phi={phi:.4f})', 'classical |J3| (hbar)', str(config), reference,
            computed, golden.CLASSICAL_J3_TOLERANCE))

    for config, reference in golden.MAXIMAL_J3:
        computed = maximal_j3(config.N, config.m_psi, config.m, 'exact')
        checks.append(golden.GoldenCheck(
            'maximal_j3', 'maximal classical |J3| (hbar)', str(config), reference, computed,
            golden.CLASSICAL_J3_TOLERANCE))

    for config, value, published in golden.MATCHING_PHASES:
        roots = matching_phases(config.N, config.m_psi, config.m, value, 'exact')
        note = golden.KNOWN_DISCREPANCIES.get((config, value), '')
        for reference in published:
            computed = min(roots, key=lambda root: abs(root - reference)) if roots else None
            checks.append(golden.GoldenCheck(
                f'matching_phase(|J3|={value:.2f})', 'phase where classical |J3| matches (rad)',
                str(config), reference, computed, golden.MATCHING_TOLERANCE,
                known_discrepancy=bool(note), note=note))

    for config, index in golden.EXCEEDING_FRINGES:
        report = compare_report(config, length='exact')
        computed = float(report.theory_match[index].exceeds_maximum) \
            if index < len(report.theory_match) else None
        checks.append(golden.GoldenCheck(
            f'fringe[{index}] exceeds maximum', 'flag (1 = exceeds)', str(config), 1.0,
            computed, 0.0))
    return checks


def _equal_case_checks():
    checks = []
    for n in golden.EQUAL_CASE_PHOTONS:
        config = TwoModeConfig(n, 0, 0)
        prediction = equal_case_predictions(n)
        checks.append(golden.GoldenCheck(
            'zero_count', 'zeros over (-pi, pi)', str(config), float(prediction.count),
            float(count_zeros(config)), 0.0))

        zeros = find_probability_zeros(compute_trace(config))
        checks.append(golden.GoldenCheck(
            'first_minimum', 'first zero in (0, pi) (rad)', str(config), prediction.minima[0],
            zeros[0] if zeros else None, golden.FIRST_MINIMUM_TOLERANCE))

        if n == 16:
            spacings = np.diff(zeros)
            deviation = float(np.max(np.abs(spacings / prediction.interior_width - 1))) \
                if spacings.size else None
            checks.append(golden.GoldenCheck(
                'interior_spacing', 'max relative deviation from 2 pi/(N+1)', str(config), 0.0,
                deviation, golden.SPACING_RELATIVE_TOLERANCE))
        if n == 6:
            spacing = float(np.mean(np.diff(zeros))) if len(zeros) > 1 else None
            checks.append(golden.GoldenCheck(
                'interior_spacing', 'mean zero spacing (rad)', str(config),
                golden.SIX_PHOTON_SPACING, spacing,
                golden.SPACING_RELATIVE_TOLERANCE * golden.SIX_PHOTON_SPACING))
    return checks


def _envelope_checks(seed, samples):
    checks = []
    low, high = golden.APPROXIMATION_RANGE
    for config, tolerance in golden.APPROXIMATION_TOLERANCES:
        error = approximation_error(config, PhaseGrid.linspace(low, high, 401),
                                    golden.APPROXIMATION_LENGTH)
        checks.append(golden.GoldenCheck(
            'approximation_error', f'max |2A cos S - exact| on [{low:g}, {high:g}]', str(config), 0.0,
            error, tolerance))

    histogram = classical_envelope_oracle(golden.ENVELOPE_MC_N, golden.ENVELOPE_MC_M_PSI,
                                          golden.ENVELOPE_MC_PHI, samples, seed)
    worst = 0.0
    for m, frequency in zip(histogram.m_values, histogram.frequencies):
        if abs(m) > golden.ENVELOPE_MC_INTERIOR:
            continue
        density = classical_density(histogram.N, histogram.m_psi, float(m), histogram.phi, 'shifted')
        error = math.sqrt(density * (1 - density) / samples)
        worst = max(worst, abs(frequency - density) / error)
    checks.append(golden.GoldenCheck(
        'classical_mc_interior_bins', 'max |frequency - 2A^2| in standard errors',
        f'N={histogram.N}, m_psi={histogram.m_psi:g}, phi={histogram.phi:.6f}', 0.0, worst,
        golden.ENVELOPE_MC_STANDARD_ERRORS, note=f'seed={seed}, samples={samples}'))
    return checks


def evaluate_golden(seed=0, samples=golden.ENVELOPE_MC_SAMPLES):
    """Run every golden check; failures that are not known discrepancies are logged as warnings."""
    checks = _zero_checks() + _classical_checks() + _equal_case_checks() \
        + _envelope_checks(seed, samples)
    for check in checks:
        if not check.passed:
            level = logging.INFO if check.known_discrepancy else logging.WARNING
            logger.log(level, 'golden check %s for %s: reference %g, computed %s (tolerance %g)',
                       check.name, check.config, check.reference, check.computed, check.tolerance)
    return checks


def support_notes():
    """Where the classical support starts, next to the rougher arcsin(m/(N+1)) estimate."""
    notes = []
    for config in (golden.CROSS_8, golden.CROSS_16):
        (low, _), *_ = classical_support(config.N, config.m_psi, config.m, 'exact')
        notes.append(
            f'{config}: classical support starts at phi = {low:.4f} '
            f'(sin phi = 2m/sqrt(N(N+2))); arcsin(m/(N+1)) would give {math.asin(config.m / (config.N + 1)):.4f}'
        )
    return notes


@dataclass(frozen=True)
class Reproduction:
    """Files written by ``reproduce`` and the checks behind summary.json."""
    files: list
    checks: list


def reproduce(out_dir, seed=0, samples=golden.ENVELOPE_MC_SAMPLES):
    """
    Write every figure CSV and summary.json into ``out_dir``.

    Args:
        out_dir: target directory, created when missing.
        seed: seed of the Monte-Carlo envelope check.
        samples: Monte-Carlo sample count.

    Returns:
        A Reproduction with the written paths and the golden checks.
    """
    out_dir = Path(out_dir)
    files = []
    grid = figure_grid()
    for figure in FIGURES:
        logger.debug('computing %s: %s', figure.name, figure.title)
        files.append(write_text(out_dir / f'{figure.name}.csv', csv_text(figure_columns(figure, grid))))

    checks = evaluate_golden(seed, samples)
    passed = sum(check.passed for check in checks)
    known = sum(check.known_discrepancy and not check.passed for check in checks)
    summary = {
        'total': len(checks),
        'passed': passed,
        'known_discrepancies': known,
        'unexpected_failures': len(checks) - passed - known,
        'checks': [dict(vars(check), passed=check.passed) for check in checks],
        'notes': support_notes(),
        'files': [path.name for path in files],
    }
    files.append(write_text(out_dir / 'summary.json',
                            render_json(GoldenSummarySerializer(summary).data)))
    return Reproduction(files, checks)
