"""Exception hierarchy shared by the engine and the command line.

Input problems map to exit status 2, violated identities to exit status 3.
Each error carries a ``details`` mapping that is written out verbatim as the
structured failure report.
"""


class SheafBettiError(Exception):
    exit_code = 1

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def report(self):
        return {
            'error': type(self).__name__,
            'message': self.message,
            'details': {key: _plain(value) for key, value in sorted(self.details.items())},
        }


class InputError(SheafBettiError, ValueError):
    exit_code = 2


class DataFileError(InputError):
    def __init__(self, message, path=None, line=None, **details):
        super().__init__(message, path=path, line=line, **details)
        self.path = path
        self.line = line


class MissingGV(InputError):
    def __init__(self, d):
        super().__init__(f"No Gopakumar-Vafa row for degree {d}", d=d)
        self.d = d


class MissingRefinedData(InputError):
    def __init__(self, d):
        super().__init__(f"No refined Poincare polynomial for degree {d}", d=d)
        self.d = d


class UnsupportedGcd(InputError):
    def __init__(self, d, chi):
        super().__init__(
            f"Stack series for (d, chi) = ({d}, {chi}) needs a plethystic convention plug-in",
            d=d, chi=chi)


class InvariantViolation(SheafBettiError, ArithmeticError):
    exit_code = 3


class NotDivisible(InvariantViolation):
    pass


class NegativeCoefficient(InvariantViolation):
    pass


class NonPolynomialContribution(InvariantViolation):
    pass


class NonIntegerGV(InvariantViolation):
    pass


class DegreeBoundViolated(InvariantViolation):
    pass


class RouteMismatch(InvariantViolation):
    pass


class ImaginaryResidue(InvariantViolation):
    pass


def _plain(value):
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    return str(value)
