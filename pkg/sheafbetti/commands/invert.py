import logging

from flask import Blueprint

from sheafbetti.commands.common import build_config, reports_errors, run_options
from sheafbetti.commands.datafiles import emit, load_golden
from sheafbetti.engine.solver import invert_to_gv
from sheafbetti.errors import InputError

logger = logging.getLogger(__name__)

invert_bp = Blueprint('invert', __name__, cli_group=None)


@invert_bp.cli.command('invert')
@run_options
@reports_errors
def invert(**options):
    """GV invariants for d <= dmax from golden Omega-hat rows."""
    config = build_config('invert', options)
    hats = [hat for hat in load_golden(config.golden_path) if hat.d <= config.dmax]
    present = {hat.d for hat in hats}
    missing = [d for d in range(1, config.dmax + 1) if d not in present]
    if missing:
        raise InputError(f"Golden rows missing for degrees {missing}", missing=missing)

    gv = invert_to_gv(hats, config.rhs_method, provenance=f"inverted from {config.golden_path}")
    payload = gv.to_dict()
    rows = payload['entries']
    lines = [f"{d}: {' '.join(str(n) for n in gv.row(d))}" for d in gv.degrees]
    emit(config, payload, rows, lines)
