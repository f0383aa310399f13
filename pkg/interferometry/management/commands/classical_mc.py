from interferometry.management.base import SimulationCommand, radians


class Command(SimulationCommand):
    """
    Monte-Carlo histogram of classical random-phase interference.

    Usage:
        python manage.py classical_mc --photons 16 --input-diff 0 --phi 1.5708 \\
            --samples 1000000 --seed 42 --format json

    The histogram depends only on (seed, samples), so repeated runs are
    byte-identical whatever FRINGELAB_THREADS says.
    """

    help = ('Sample classical random-phase interference and compare it with 2 A^2 '
            '(run name: classical-mc, command classical_mc)')
    run_command = 'classical-mc'
    uses_trace_options = False

    def add_arguments(self, parser):
        """Adds --phi, the single phase the histogram is taken at."""
        super().add_arguments(parser)
        parser.add_argument('--phi', type=radians,
                            help='Phase shift in radians')
