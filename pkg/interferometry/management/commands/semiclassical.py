from interferometry.management.base import SimulationCommand


class Command(SimulationCommand):
    """
    Exact realized amplitude next to the approximation 2 A cos S.

    Usage:
        python manage.py semiclassical --photons 16 --phi-min 0.4 --phi-max 2.7
    """

    help = ('Compare the exact amplitude with its action/envelope approximation '
            '(run name: semiclassical)')
    run_command = 'semiclassical'
