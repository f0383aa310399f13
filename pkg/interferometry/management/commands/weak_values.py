from interferometry.management.base import SimulationCommand


class Command(SimulationCommand):
    """
    Weak values of J3 and J3^2 along the phase, with singular points flagged.

    Usage:
        python manage.py weak_values --photons 16 --output-diff 8 --format json
    """

    help = ('Compute the weak values of J3 and J3^2 for an input/output combination '
            '(run name: weak-values, command weak_values)')
    run_command = 'weak-values'
