"""Exception hierarchy shared by every module."""


class HHError(Exception):
    """Base class for all hhcalc errors."""


class ParseError(HHError):
    pass


class ShapeError(HHError):
    pass


class InvalidGroupTable(HHError):
    pass


class AntipodeRequired(HHError):
    pass


class SizeLimit(HHError):
    pass


class StabilityViolation(HHError):
    """A subspace that theory says is d-stable was not (implementation bug)."""


class ValidationFailure(HHError):
    def __init__(self, report):
        self.report = report
        super().__init__(str(report))


class OracleFailure(HHError):
    def __init__(self, check: str, degree=None, witness=None):
        self.check = check
        self.degree = degree
        self.witness = witness
        super().__init__(f"{check} failed at degree {degree}: witness {witness}")
