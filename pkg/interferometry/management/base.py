# Shared plumbing for the simulation management commands.
#
# Each command only declares its RunSpec name; argument parsing, validation
# through RunSpecSerializer, error translation and output live here.
import argparse
import math

from django.core.management.base import BaseCommand, CommandError

from interferometry.exceptions import InvalidConfigurationError, NumericalError
from interferometry.runner import run
from interferometry.serializer import FORMATS, RunSpecSerializer

INVALID_ARGUMENTS = 2
NUMERICAL_FAILURE = 3

DEGREE_MARKERS = ('deg', 'degree', 'degrees', '°')


def radians(value):
    """argparse type for phases: plain radians, no degree suffixes."""
    text = str(value).strip().lower()
    if text.endswith(DEGREE_MARKERS):
        raise argparse.ArgumentTypeError(
            f'{value!r}: phases are given in radians; degree input is not accepted')
    try:
        number = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{value!r} is not a phase in radians') from None
    if not math.isfinite(number):
        raise argparse.ArgumentTypeError(f'{value!r}: phase must be finite')
    return number


def format_errors(errors):
    """Flatten serializer errors into one line per violated invariant."""
    lines = []
    for name, messages in errors.items():
        if isinstance(messages, dict):
            messages = [f'{key}: {value}' for key, value in messages.items()]
        for message in messages:
            lines.append(str(message) if name == 'non_field_errors' else f'{name}: {message}')
    return '\n'.join(lines)


class SimulationCommand(BaseCommand):
    """
    Base class for the commands that wrap ``interferometry.runner.run``.

    Exit status 2 means invalid arguments (the message names the violated
    invariant), 3 a numerical failure.
    """
    run_command = None
    uses_trace_options = True

    def add_arguments(self, parser):
        """Options shared by every command; trace commands also get an output difference and phase range."""
        parser.add_argument('--photons', dest='N', type=int,
                            help='Total photon number N')
        parser.add_argument('--input-diff', type=int, default=0,
                            help='Input photon-number difference 2*m_psi (default: 0)')
        if self.uses_trace_options:
            parser.add_argument('--output-diff', type=int, default=0,
                                help='Output photon-number difference 2*m (default: 0)')
            parser.add_argument('--phi-min', type=radians, default=0.0,
                                help='Lower end of the phase range in radians (default: 0)')
            parser.add_argument('--phi-max', type=radians, default=math.pi,
                                help='Upper end of the phase range in radians (default: pi)')
        parser.add_argument('--samples', type=int,
                            help='Number of phase points (Monte-Carlo samples for classical_mc)')
        parser.add_argument('--seed', type=int, default=0,
                            help='Random seed (default: 0)')
        parser.add_argument('--length', choices=['exact', 'shifted'],
                            help='J-vector length convention for semiclassical quantities')
        parser.add_argument('--out', dest='output_path',
                            help='Output file (written to stdout when omitted)')
        parser.add_argument('--format', choices=FORMATS, default='csv',
                            help='Output format (default: csv)')

    def spec_data(self, options):
        """The options that were given, keyed for RunSpecSerializer."""
        names = ('N', 'input_diff', 'output_diff', 'phi_min', 'phi_max', 'phi',
                 'samples', 'seed', 'output_path', 'format', 'length')
        data = {name: options[name] for name in names if options.get(name) is not None}
        data['command'] = self.run_command
        return data

    def handle(self, *args, **options):
        """
        Validate the options, run the command and write its output.

        Raises:
            CommandError: exit status 2 for invalid arguments, 3 for numerical failures.
        """
        serializer = RunSpecSerializer(data=self.spec_data(options))
        if not serializer.is_valid():
            raise CommandError(format_errors(serializer.errors), returncode=INVALID_ARGUMENTS)
        spec = serializer.save()

        try:
            result = run(spec)
        except InvalidConfigurationError as exc:
            raise CommandError(str(exc), returncode=INVALID_ARGUMENTS) from exc
        except NumericalError as exc:
            raise CommandError(f'numerical failure: {exc}', returncode=NUMERICAL_FAILURE) from exc

        if result.text is not None:
            self.stdout.write(result.text, ending='')
        for path in result.files:
            self.stdout.write(self.style.SUCCESS(f'Wrote {path}'))
        for note in result.notes:
            self.stdout.write(note)
