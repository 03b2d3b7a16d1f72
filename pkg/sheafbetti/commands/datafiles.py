"""Reading the JSON data files and writing reports in json, csv or text."""
import csv
import io
import json
import logging

import click

from sheafbetti.errors import DataFileError
from sheafbetti.engine.exactalg import format_coefficient
from sheafbetti.models import GVTable, OmegaHat, RefinedPolynomial

logger = logging.getLogger(__name__)


def _read_json(path):
    try:
        with open(path, encoding='utf-8') as handle:
            return json.load(handle)
    except OSError as exc:
        raise DataFileError(f"Cannot read {path}: {exc.strerror}", path=path) from exc
    except json.JSONDecodeError as exc:
        raise DataFileError(f"{path}:{exc.lineno}: {exc.msg}", path=path, line=exc.lineno) from exc


def _integer(value, path, where):
    if isinstance(value, bool):
        raise DataFileError(f"{path}: {where} is not an integer", path=path, entry=where)
    if isinstance(value, int):
        return value
    try:
        return int(str(value).strip())
    except ValueError as exc:
        raise DataFileError(f"{path}: {where} is not an integer: {value!r}", path=path,
                            entry=where) from exc


def _list_of_objects(document, path, key=None):
    rows = document.get(key) if key and isinstance(document, dict) else document
    if not isinstance(rows, list) or not all(isinstance(row, dict) for row in rows):
        raise DataFileError(f"{path}: expected a list of objects", path=path)
    if not rows:
        raise DataFileError(f"{path}: no rows", path=path)
    return rows


def load_gv(path):
    """GVTable from {"surface", "provenance", "entries": [{"d", "g", "n"}]}."""
    document = _read_json(path)
    if not isinstance(document, dict):
        raise DataFileError(f"{path}: expected a JSON object", path=path)
    entries = []
    for index, entry in enumerate(_list_of_objects(document, path, 'entries')):
        where = f"entries[{index}]"
        try:
            entries.append((_integer(entry['g'], path, where + '.g'),
                            _integer(entry['d'], path, where + '.d'),
                            _integer(entry['n'], path, where + '.n')))
        except KeyError as exc:
            raise DataFileError(f"{path}: {where} lacks {exc.args[0]!r}", path=path, entry=where) from exc
    table = GVTable.from_entries(entries, surface=document.get('surface', 'P2'),
                                 provenance=document.get('provenance', ''))
    logger.info('loaded GV rows %s from %s', table.degrees, path)
    return table


def load_golden(path):
    """Omega-hat rows from [{"d", "coeffs"}], sorted by degree."""
    hats = {}
    for index, row in enumerate(_list_of_objects(_read_json(path), path)):
        where = f"[{index}]"
        d = _integer(row.get('d'), path, where + '.d')
        coeffs = row.get('coeffs')
        if not isinstance(coeffs, list) or not coeffs:
            raise DataFileError(f"{path}: {where}.coeffs must be a nonempty list", path=path, entry=where)
        if d in hats:
            raise DataFileError(f"{path}: degree {d} appears twice", path=path, entry=where)
        hats[d] = OmegaHat.from_coefficients(
            d, [_integer(c, path, f"{where}.coeffs[{j}]") for j, c in enumerate(coeffs)])
    return [hats[d] for d in sorted(hats)]


def load_refined(path):
    """Refined polynomials from [{"d", "terms": [{"q", "t", "c"}]}], keyed by degree."""
    table = {}
    for index, row in enumerate(_list_of_objects(_read_json(path), path)):
        where = f"[{index}]"
        d = _integer(row.get('d'), path, where + '.d')
        terms = []
        for j, term in enumerate(row.get('terms') or []):
            spot = f"{where}.terms[{j}]"
            terms.append((_integer(term.get('q'), path, spot + '.q'),
                          _integer(term.get('t'), path, spot + '.t'),
                          _integer(term.get('c'), path, spot + '.c')))
        try:
            table[d] = RefinedPolynomial.from_terms(d, terms)
        except ValueError as exc:
            raise DataFileError(f"{path}: {where}: {exc}", path=path, entry=where) from exc
    return table


def _cell(value):
    if isinstance(value, (list, tuple)):
        return ' '.join(_cell(item) for item in value)
    if value is None:
        return ''
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    return format_coefficient(value)


def render(payload, rows, lines, output_format):
    """One string per format; orderings come from the caller and are stable."""
    if output_format == 'json':
        return json.dumps(payload, indent=2, sort_keys=True) + '\n'
    if output_format == 'csv':
        buffer = io.StringIO()
        columns = []
        for row in rows:
            columns.extend(key for key in row if key not in columns)
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _cell(row.get(key)) for key in columns})
        return buffer.getvalue()
    return '\n'.join(lines) + '\n'


def emit(config, payload, rows, lines):
    """Write the rendered output to --out or stdout."""
    text = render(payload, rows, lines, config.output_format)
    if config.out:
        with open(config.out, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
        logger.info('wrote %s', config.out)
    else:
        click.echo(text, nl=False)
