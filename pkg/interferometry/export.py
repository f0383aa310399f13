"""
CSV and JSON writers for simulation results.

CSV files have a header row, a fixed column order, ``%.<digits>g`` numbers
(12 significant digits by default) and LF line endings; undefined values are
written as ``nan``.  JSON is rendered by DRF's JSONRenderer with two-space
indentation, so payloads must already be serializer output (no NaN).
"""
import csv
import io
import logging
from pathlib import Path

from rest_framework.renderers import JSONRenderer

from .conf import fringelab_settings

logger = logging.getLogger(__name__)


def format_number(value, digits=None):
    """
    Format one CSV cell with %g and a fixed number of significant digits.

    Args:
        value: a number; NaN and infinities come out as ``nan``, ``inf``.
        digits: significant digits, defaulting to the CSV_SIGNIFICANT_DIGITS setting.

    Returns:
        The formatted string (``1.0`` becomes ``1``).
    """
    digits = digits or fringelab_settings.CSV_SIGNIFICANT_DIGITS
    return f'%.{digits}g' % float(value)


def csv_text(columns):
    """Render ``{name: sequence}`` as CSV text, columns in insertion order."""
    names = list(columns)
    lengths = {len(columns[name]) for name in names}
    if len(lengths) > 1:
        raise ValueError(f'CSV columns differ in length: {sorted(lengths)}')

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(names)
    for row in zip(*(columns[name] for name in names)):
        writer.writerow([format_number(value) for value in row])
    return buffer.getvalue()


def render_json(data):
    """
    Render serializer output as indented JSON text with a trailing newline.

    Args:
        data: plain Python data, already free of NaN and infinities.

    Returns:
        A UTF-8 string, two-space indented.
    """
    rendered = JSONRenderer().render(data, renderer_context={'indent': 2})
    return rendered.decode('utf-8') + '\n'


def write_text(path, text):
    """Write ``text`` to ``path`` (creating parent directories) and return the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8', newline='') as handle:
        handle.write(text)
    logger.info('wrote %s (%d bytes)', path, len(text.encode('utf-8')))
    return path
