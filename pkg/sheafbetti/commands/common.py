"""Options, configuration and error reporting shared by every command."""
import functools
import json
import logging

import click
from flask import current_app

from sheafbetti.errors import SheafBettiError
from sheafbetti.forms import RunConfigForm
from sheafbetti.forms.run_forms import expand_checks

logger = logging.getLogger(__name__)


def run_options(command):
    """The common flags; anything omitted falls back to the app config."""
    options = [
        click.option('--gv', 'gv', type=click.Path(), help='GV invariants (JSON).'),
        click.option('--golden', 'golden', type=click.Path(), help='Omega-hat rows (JSON).'),
        click.option('--refined', 'refined', type=click.Path(), help='Refined polynomials (JSON).'),
        click.option('--dmax', 'dmax', type=int, help='Largest degree.'),
        click.option('--method', 'method', help='trees, functional or both.'),
        click.option('--check', 'check', help='NAME[,NAME...] or all.'),
        click.option('--trunc', 'trunc', type=int, help='Truncation order for series checks.'),
        click.option('--format', 'output_format', help='json, csv or text.'),
        click.option('--out', 'out', type=click.Path(), help='Write here instead of stdout.'),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _pick(value, default):
    return default if value is None else value


def build_config(command, options):
    """Validate the options through RunConfigForm; exit 2 on any field error."""
    config = current_app.config
    refined_path = _pick(options.get('refined'), config.get('REFINED_DATA_PATH'))
    requested = options.get('check') or ('all' if command == 'verify' else '')
    checks = expand_checks(requested)
    if 'all' in requested.split(',') and not refined_path:
        checks = [name for name in checks if name != 'refined']
    form = RunConfigForm(data={
        'command': command,
        'gv_path': _pick(options.get('gv'), config['GV_DATA_PATH']),
        'golden_path': _pick(options.get('golden'), config['GOLDEN_DATA_PATH']),
        'refined_path': refined_path,
        'dmax': _pick(options.get('dmax'), config['DEFAULT_DMAX']),
        'rhs_method': _pick(options.get('method'), config['RHS_METHOD']),
        'checks': checks,
        'trunc': _pick(options.get('trunc'), config['TRUNCATION_ORDER']),
        'output_format': _pick(options.get('output_format'), config['OUTPUT_FORMAT']),
        'out': options.get('out'),
    })
    if not form.validate():
        for name, errors in sorted(form.errors.items()):
            for error in errors:
                click.echo(f"{name}: {error}", err=True)
        click.get_current_context().exit(2)
    return form.to_run_config()


def reports_errors(command):
    """Turn a SheafBettiError into its JSON report on stderr and its exit status."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except SheafBettiError as exc:
            logger.error('%s: %s', type(exc).__name__, exc.message)
            click.echo(json.dumps(exc.report(), indent=2, sort_keys=True), err=True)
            click.get_current_context().exit(exc.exit_code)
    return wrapper
