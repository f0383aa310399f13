from interferometry.management.base import SimulationCommand


class Command(SimulationCommand):
    """
    Regenerate the ten fringe figures and check the published numbers.

    Usage:
        python manage.py reproduce_paper --out results/

    Writes fig1a.csv ... fig6b.csv and summary.json into the output directory
    (default: results/).  --samples and --seed control the Monte-Carlo check.
    """

    help = ('Write the figure data and a golden-number summary to a directory '
            '(run name: reproduce-paper, command reproduce_paper)')
    run_command = 'reproduce-paper'
    uses_trace_options = False
