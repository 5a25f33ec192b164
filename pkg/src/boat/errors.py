"""Exception hierarchy.

``ValidationError`` covers bad requests (flags, schemas, field names);
``DataError`` covers problems with the data itself. The CLI maps them to
exit codes 1 and 2.
"""


class BoatError(Exception):
    pass


class ValidationError(BoatError):
    pass


class DataError(BoatError):
    pass


class SchemaSyntaxError(ValidationError):
    def __init__(self, message, line=None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"schema syntax error: {where}{message}")


class MissingRoleError(ValidationError):
    def __init__(self, role):
        self.role = role
        super().__init__(f"missing role: {role!r} is not bound to any field")


class DuplicateFieldError(ValidationError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"duplicate field: {name!r}")


class MoneyParseError(ValidationError, ValueError):
    pass


class UnparseableMoneyError(MoneyParseError):
    def __init__(self, raw):
        self.raw = raw
        super().__init__(f"unparseable money value: {raw!r}")


class NegativeMoneyError(MoneyParseError):
    def __init__(self, raw):
        self.raw = raw
        super().__init__(f"negative money value: {raw!r}")


class HeaderMismatchError(DataError):
    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__("header mismatch: missing column(s) " + ", ".join(repr(m) for m in self.missing))


class FieldNotFoundError(ValidationError, KeyError):
    def __init__(self, name):
        self.name = name
        super().__init__(name)

    def __str__(self):
        return f"field not found: {self.name!r}"


class PredicateTypeError(ValidationError, TypeError):
    pass


class AggregateOnTextError(ValidationError, TypeError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"numeric operation on text field {name!r}")


class NonPositiveBinWidthError(ValidationError, ValueError):
    pass


class InvalidBinCountError(ValidationError, ValueError):
    pass


class EmptyColumnError(DataError, ValueError):
    pass


class InvalidPercentileError(ValidationError, ValueError):
    pass


class UndefinedBaselineError(ValidationError, ValueError):
    pass


class EmptyCohortError(DataError):
    def __init__(self, predicate):
        self.predicate = predicate
        super().__init__(f"empty cohort: no rows with a cost value match {predicate}")


class EmptyResultError(DataError):
    pass


class InconsistentSeriesError(ValidationError, ValueError):
    pass


class ProfileValidationError(ValidationError, ValueError):
    pass


class SnapshotError(DataError):
    pass
