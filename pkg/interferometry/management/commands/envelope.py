from interferometry.management.base import SimulationCommand


class Command(SimulationCommand):
    """
    Classical |J3|, envelope A, density 2 A^2 and peak envelope 4 A^2.

    Usage:
        python manage.py envelope --photons 16 --output-diff 8 --length shifted
    """

    help = ('Tabulate the classical path intensity difference and envelope functions '
            '(run name: envelope)')
    run_command = 'envelope'
