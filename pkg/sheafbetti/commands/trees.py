from flask import Blueprint
import click

from sheafbetti.commands.common import build_config, reports_errors, run_options
from sheafbetti.commands.datafiles import emit, load_gv
from sheafbetti.engine.treesum import aut_order, contribution_laurent, enumerate_trees, format_tree

trees_bp = Blueprint('trees', __name__, cli_group=None)


@trees_bp.cli.command('trees')
@click.option('--d', 'degree', type=int, required=True, help='Tree degree.')
@run_options
@reports_errors
def trees(degree, **options):
    """Every rooted tree of degree d with |Aut| and its contribution."""
    options['dmax'] = degree
    config = build_config('trees', options)
    gv = load_gv(config.gv_path)
    records = []
    for tree in enumerate_trees(config.dmax):
        records.append({
            'tree': format_tree(tree),
            'aut': aut_order(tree),
            'contribution': contribution_laurent(tree, gv).to_text(),
        })
    payload = {'d': config.dmax, 'count': len(records), 'trees': records}
    lines = [f"{r['tree']}\t|Aut|={r['aut']}\t{r['contribution']}" for r in records]
    emit(config, payload, records, lines)
