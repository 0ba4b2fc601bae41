"""Exception hierarchy for gvascope."""


class GvascopeError(ValueError):
    """Base class for every error raised by this package."""


class AccountsParseError(GvascopeError):
    """Raised when delimited input cannot be turned into an accounts panel.

    ``row`` is the 1-based data row (the header is row 0) and ``column`` the
    header name of the offending cell, when known.
    """

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)


class UnknownYearError(GvascopeError):
    def __init__(self, year, available=()):
        self.year = year
        self.available = tuple(available)
        super().__init__(f"unknown year {year}; panel has {list(self.available)}")


class DegenerateFitError(GvascopeError):
    """Raised when a regression is requested on too few or constant regressors."""


class DetectionError(GvascopeError):
    pass
