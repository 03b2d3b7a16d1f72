import logging

from flask import Blueprint

from sheafbetti.commands.common import build_config, reports_errors, run_options
from sheafbetti.commands.datafiles import emit, load_gv
from sheafbetti.engine.solver import omega_hat, solve_all

logger = logging.getLogger(__name__)

compute_bp = Blueprint('compute', __name__, cli_group=None)


@compute_bp.cli.command('compute')
@run_options
@reports_errors
def compute(**options):
    """Omega_d and Omega-hat_d for d <= dmax from GV invariants."""
    config = build_config('compute', options)
    gv = load_gv(config.gv_path)
    omegas = solve_all(gv, config.dmax, config.rhs_method)
    hats = [omega_hat(omega) for omega in omegas]

    records = []
    for omega, hat in zip(omegas, hats):
        records.append({
            'd': omega.d,
            'omega': omega.to_dict(),
            'omega_hat': hat.to_dict()['coeffs'],
        })
    payload = {'surface': gv.surface, 'method': config.rhs_method, 'rows': records}
    rows = [{
        'd': record['d'],
        'omega_hat': record['omega_hat'],
        'omega_lowest_half_exponent': record['omega']['lowest_half_exponent'],
        'omega_betti': record['omega']['betti'],
    } for record in records]
    lines = [f"{record['d']}: {' '.join(record['omega_hat'])}" for record in records]
    emit(config, payload, rows, lines)
