from interferometry.management.base import SimulationCommand


class Command(SimulationCommand):
    """
    Exact count rates P(m; phi) with the classical envelope 4 A^2.

    Usage:
        python manage.py fringes --photons 8 --input-diff 0 --output-diff 4 --samples 4096

    CSV columns: phi, probability, envelope, in_support.  The JSON form adds
    the fringe report (zeros, widths, |J3|_exp and the matching phases).
    """

    help = ('Compute exact multi-photon interference fringes and their classical envelope '
            '(run name: fringes)')
    run_command = 'fringes'
