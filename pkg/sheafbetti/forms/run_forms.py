import os
from dataclasses import dataclass

from wtforms import Form, IntegerField, SelectField, SelectMultipleField, StringField
from wtforms.validators import DataRequired, NumberRange, ValidationError

from sheafbetti.engine.solver import RHS_METHODS

CHECK_NAMES = (
    'structure', 'bracket', '3d-divisibility', 'gv-leading', 'xy-bounds', 'z-identities',
    'leading', 'second-order', 'low-range', 'recursion', 'refined',
)
OUTPUT_FORMATS = ('json', 'csv', 'text')
COMMANDS = ('compute', 'invert', 'verify', 'trees')


@dataclass(frozen=True)
class RunConfig:
    """Validated options for one command run."""

    command: str
    gv_path: str
    golden_path: str
    refined_path: str
    dmax: int
    rhs_method: str
    checks: tuple
    trunc: int
    output_format: str
    out: str

    def __repr__(self):
        return f"RunConfig('{self.command}', dmax={self.dmax})"


def expand_checks(value):
    """'all' or a comma-separated list of names into a list."""
    if not value:
        return []
    names = [name.strip() for name in value.split(',') if name.strip()]
    if 'all' in names:
        return list(CHECK_NAMES)
    return names


class RunConfigForm(Form):
    command = SelectField('Command', choices=[(c, c) for c in COMMANDS], validators=[DataRequired()])
    gv_path = StringField('GV file')
    golden_path = StringField('Golden Omega-hat file')
    refined_path = StringField('Refined data file')
    dmax = IntegerField('Maximal degree', validators=[DataRequired(), NumberRange(min=1)])
    rhs_method = SelectField('RHS method', choices=[(m, m) for m in RHS_METHODS],
                             validators=[DataRequired()])
    checks = SelectMultipleField('Checks', choices=[(c, c) for c in CHECK_NAMES])
    trunc = IntegerField('Truncation order', validators=[DataRequired(), NumberRange(min=1)])
    output_format = SelectField('Output format', choices=[(f, f) for f in OUTPUT_FORMATS],
                                validators=[DataRequired()])
    out = StringField('Output path')

    def validate_gv_path(self, gv_path):
        """The forward commands read GV data."""
        if self.command.data in ('compute', 'verify', 'trees'):
            if not gv_path.data:
                raise ValidationError('A GV file is required.')
            if not os.path.isfile(gv_path.data):
                raise ValidationError(f"No such file: {gv_path.data}")

    def validate_golden_path(self, golden_path):
        if self.command.data in ('invert', 'verify'):
            if not golden_path.data:
                raise ValidationError('A golden Omega-hat file is required.')
            if not os.path.isfile(golden_path.data):
                raise ValidationError(f"No such file: {golden_path.data}")

    def validate_refined_path(self, refined_path):
        if 'refined' in (self.checks.data or []):
            if not refined_path.data:
                raise ValidationError('The refined check needs --refined.')
            if not os.path.isfile(refined_path.data):
                raise ValidationError(f"No such file: {refined_path.data}")

    def to_run_config(self):
        return RunConfig(
            command=self.command.data,
            gv_path=self.gv_path.data or None,
            golden_path=self.golden_path.data or None,
            refined_path=self.refined_path.data or None,
            dmax=self.dmax.data,
            rhs_method=self.rhs_method.data,
            checks=tuple(self.checks.data or ()),
            trunc=self.trunc.data,
            output_format=self.output_format.data,
            out=self.out.data or None,
        )
