"""The verify command: every enabled check for every applicable degree."""
import logging
from dataclasses import dataclass, field

import click
from flask import Blueprint

from sheafbetti.commands.common import build_config, reports_errors, run_options
from sheafbetti.commands.datafiles import emit, load_golden, load_gv, load_refined
from sheafbetti.engine import asymptotics, refinedhn, solver
from sheafbetti.errors import InputError, RouteMismatch
from sheafbetti.models import TruncatedCheckReport

logger = logging.getLogger(__name__)

verify_bp = Blueprint('verify', __name__, cli_group=None)

RECURSION_LEVEL = 2

# Smallest degree each check is stated for
MIN_DEGREE = {
    'z-identities': 4,
    'leading': 6,
    'second-order': 4,
    'low-range': 5,
    'recursion': RECURSION_LEVEL + 2,
}


@dataclass
class VerifyData:
    gv: object
    hats: dict
    trunc: int
    method: str
    refined: dict = field(default_factory=dict)
    _omegas: dict = None
    _p_table: dict = None

    def omegas(self):
        if self._omegas is None:
            dmax = max(self.hats)
            self._omegas = {o.d: o for o in solver.solve_all(self.gv, dmax, self.method)}
        return self._omegas

    def p_table(self):
        if self._p_table is None:
            self._p_table = refinedhn.p_table_from_hats(self.hats.values())
        return self._p_table


def _structure(d, data):
    omega = data.omegas()[d]
    golden = solver.omega_from_hat(data.hats[d])
    return [
        solver.structure_report(d, data.gv, omega),
        TruncatedCheckReport.verdict('golden-match', d, omega.poly == golden.poly),
    ]


def _bracket(d, data):
    omega = solver.omega_from_hat(data.hats[d])
    return [TruncatedCheckReport.verdict('bracket', d, solver.integrality_bracket(d, data.gv, omega))]


def _three_divides(d, data):
    if d % 3:
        return []
    return [solver.three_divides_check(data.hats[d])]


def _z_identities(d, data):
    reports = [asymptotics.z_difference_check(d, data.trunc)]
    if d >= 5:
        reports.append(asymptotics.zprime_combination_check(d, data.trunc))
    return reports


def _refined(d, data):
    pref = data.refined.get(d)
    if pref is None:
        return []
    reports = [refinedhn.refined_specialization_check(pref, data.hats[d]),
               refinedhn.refined_divisibility_check(pref)]
    if d >= 2:
        reports.append(refinedhn.refined_recursion_check(d, 0, data.refined))
    return reports


CHECKS = {
    'structure': _structure,
    'bracket': _bracket,
    '3d-divisibility': _three_divides,
    'gv-leading': lambda d, data: [asymptotics.gv_leading_check(d, data.gv, data.trunc)],
    'xy-bounds': lambda d, data: [asymptotics.xy_bounds_check(d, data.gv, data.hats)],
    'z-identities': _z_identities,
    'leading': lambda d, data: [asymptotics.leading_check(d, data.hats[d])],
    'second-order': lambda d, data: [asymptotics.second_order_check(d, data.hats[d])],
    'low-range': lambda d, data: [asymptotics.low_range_check(d, data.hats[d])],
    'recursion': lambda d, data: [
        refinedhn.unrefined_recursion_check(d, RECURSION_LEVEL, data.p_table())],
    'refined': _refined,
}


def _complete_gv(gv, hats, method):
    """The supplied GV rows, extended by inversion when they stop below dmax."""
    dmax = max(hats)
    if gv.max_degree >= dmax:
        return gv
    inverted = solver.invert_to_gv([hats[d] for d in range(1, dmax + 1)], method)
    for d in gv.degrees:
        if d <= dmax and gv.row(d) != inverted.row(d):
            raise RouteMismatch('Supplied GV row disagrees with the inverted one', d=d,
                                supplied=list(gv.row(d)), inverted=list(inverted.row(d)))
    logger.info('GV rows %s..%s taken from inversion', gv.max_degree + 1, dmax)
    return inverted


def run_checks(config):
    hats = {hat.d: hat for hat in load_golden(config.golden_path) if hat.d <= config.dmax}
    missing = [d for d in range(1, config.dmax + 1) if d not in hats]
    if missing:
        raise InputError(f"Golden rows missing for degrees {missing}", missing=missing)
    gv = _complete_gv(load_gv(config.gv_path), hats, config.rhs_method)
    refined = load_refined(config.refined_path) if 'refined' in config.checks else {}
    data = VerifyData(gv, hats, config.trunc, config.rhs_method, refined)

    reports = []
    for name in config.checks:
        for d in range(max(1, MIN_DEGREE.get(name, 1)), config.dmax + 1):
            reports.extend(CHECKS[name](d, data))
    return reports


def _line(report):
    if report.passed:
        through = f" through y^{report.order}" if report.order else ''
        return f"PASS {report.name} d={report.d}{through}"
    if report.mismatch_exponent is None:
        return f"FAIL {report.name} d={report.d}"
    return (f"FAIL {report.name} d={report.d} at y^{report.mismatch_exponent}: "
            f"expected {report.expected}, got {report.actual}")


@verify_bp.cli.command('verify')
@run_options
@reports_errors
def verify(**options):
    """Run the selected checks; exit 1 when any of them fails."""
    config = build_config('verify', options)
    reports = run_checks(config)
    passed = all(reports)
    payload = {'pass': passed, 'reports': [report.to_dict() for report in reports]}
    rows = [{key: value for key, value in report.to_dict().items() if key != 'notes'}
            for report in reports]
    lines = [_line(report) for report in reports]
    lines.append(f"{sum(1 for r in reports if r)}/{len(reports)} passed")
    emit(config, payload, rows, lines)
    if not passed:
        logger.warning('%s checks failed', sum(1 for r in reports if not r))
        click.get_current_context().exit(1)
