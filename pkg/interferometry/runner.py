"""
Execution of validated run specifications.

Every management command builds a ``RunSpec`` through ``RunSpecSerializer``
and hands it to ``run``, which computes the requested quantities and renders
them as CSV or JSON.  Without an output path the rendered text is returned
for the caller to print.
"""
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .exact_evolution import PhaseGrid, compute_trace, weak_value_trace
from .export import csv_text, render_json, write_text
from .fringe_analysis import compare_report
from .reproduction import aligned_approximation, reproduce
from .semiclassical import classical_envelope_oracle, semiclassical_curve
from .serializer import HistogramSerializer, TraceTableSerializer
from .spin_algebra import TwoModeConfig

logger = logging.getLogger(__name__)

DEFAULT_RESULTS_DIR = 'results'


@dataclass(frozen=True)
class RunSpec:
    """A validated run: which command, on what configuration and where the output goes."""
    command: str
    N: Optional[int] = None
    input_diff: int = 0
    output_diff: int = 0
    phi_min: float = 0.0
    phi_max: float = math.pi
    phi: Optional[float] = None
    samples: Optional[int] = None
    seed: int = 0
    output_path: Optional[str] = None
    format: str = 'csv'
    length: Optional[str] = None

    @property
    def config(self):
        """The TwoModeConfig named by the photon-number differences."""
        return TwoModeConfig.from_differences(self.N, self.input_diff, self.output_diff)

    @property
    def grid(self):
        """``samples`` phases strictly inside (phi_min, phi_max)."""
        return PhaseGrid.open_interval(self.phi_min, self.phi_max, self.samples)


@dataclass(frozen=True)
class RunResult:
    """Files written, text for stdout and notes produced by one run."""
    files: list = field(default_factory=list)
    text: Optional[str] = None
    notes: list = field(default_factory=list)


def _fringes(spec):
    config, grid = spec.config, spec.grid
    trace = compute_trace(config, grid)
    curve = semiclassical_curve(config, grid, spec.length)
    columns = {
        'phi': grid.phi_values,
        'probability': trace.probabilities,
        'envelope': curve.peak_envelope,
        'in_support': curve.in_support.astype(float),
    }
    report = compare_report(config, trace, curve) if spec.format == 'json' else None
    return columns, curve.length, report


def _weak_values(spec):
    config, grid = spec.config, spec.grid
    weak = weak_value_trace(config, grid)
    columns = {
        'phi': grid.phi_values,
        're_j3_weak': weak.j3_weak.real,
        'im_j3_weak': weak.j3_weak.imag,
        're_j3sq_weak': weak.j3sq_weak.real,
        'im_j3sq_weak': weak.j3sq_weak.imag,
        'singular': weak.singular_flags.astype(float),
    }
    return columns, None, None


def _envelope(spec):
    config, grid = spec.config, spec.grid
    curve = semiclassical_curve(config, grid, spec.length)
    j3 = np.where(curve.evanescent, np.nan, curve.j3_classical)
    columns = {
        'phi': grid.phi_values,
        'j3_classical': j3,
        'envelope': curve.envelope,
        'density': 2 * curve.envelope ** 2,
        'peak_envelope': curve.peak_envelope,
        'in_support': curve.in_support.astype(float),
    }
    return columns, curve.length, None


def _semiclassical(spec):
    config, grid = spec.config, spec.grid
    trace = compute_trace(config, grid)
    curve = semiclassical_curve(config, grid, spec.length)
    approximation = aligned_approximation(trace, curve)
    columns = {
        'phi': grid.phi_values,
        'exact': trace.realized,
        'approximation': approximation,
        'action': curve.action,
        'envelope': curve.envelope,
        'probability': trace.probabilities,
        'approx_probability': approximation ** 2,
    }
    return columns, curve.length, None


TRACE_COMMANDS = {
    'fringes': _fringes,
    'weak-values': _weak_values,
    'envelope': _envelope,
    'semiclassical': _semiclassical,
}


def _emit(spec, text):
    if spec.output_path is None:
        return RunResult(text=text)
    return RunResult(files=[write_text(spec.output_path, text)])


def _run_trace(spec):
    columns, length, report = TRACE_COMMANDS[spec.command](spec)
    logger.debug('%s: %d phases for %s', spec.command, len(columns['phi']), spec.config)
    if spec.format == 'csv':
        return _emit(spec, csv_text(columns))
    payload = {
        'command': spec.command,
        'config': spec.config,
        'length': length,
        'columns': columns,
        'report': report,
    }
    return _emit(spec, render_json(TraceTableSerializer(payload).data))


def _run_classical_mc(spec):
    length = spec.length or 'shifted'
    histogram = classical_envelope_oracle(spec.N, spec.input_diff / 2, spec.phi, spec.samples,
                                          spec.seed, length)
    data = HistogramSerializer(histogram, context={'length': length}).data
    if spec.format == 'json':
        return _emit(spec, render_json(data))
    columns = {
        name: [row[name] if row[name] is not None else math.nan for row in data['bins']]
        for name in ('m', 'count', 'frequency', 'standard_error', 'density')
    }
    return _emit(spec, csv_text(columns))


def _run_reproduction(spec):
    out_dir = Path(spec.output_path or DEFAULT_RESULTS_DIR)
    kwargs = {'seed': spec.seed}
    if spec.samples is not None:
        kwargs['samples'] = spec.samples
    reproduction = reproduce(out_dir, **kwargs)
    failed = [check for check in reproduction.checks if not check.passed]
    known = sum(check.known_discrepancy for check in failed)
    notes = [
        f'{len(reproduction.checks) - len(failed)} of {len(reproduction.checks)} golden checks passed'
        f' ({known} known discrepancies, {len(failed) - known} unexpected failures)'
    ]
    return RunResult(files=reproduction.files, notes=notes)


def run(spec):
    """Execute one validated RunSpec and return its RunResult."""
    if spec.command == 'classical-mc':
        return _run_classical_mc(spec)
    if spec.command == 'reproduce-paper':
        return _run_reproduction(spec)
    return _run_trace(spec)
