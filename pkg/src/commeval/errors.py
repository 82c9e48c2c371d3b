"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An operation received inputs violating its preconditions."""


class ParseError(ValueError):
    """An input file could not be parsed (CLI exit code 2)."""


class MismatchError(ValueError):
    """Inputs parse individually but disagree semantically, e.g. different
    node universes (CLI exit code 3)."""
