"""Exception types shared across the package."""

from __future__ import annotations


class YBError(Exception):
    """Base class for all errors raised by this package."""


class CapExceeded(YBError):
    """A configured search or closure limit was hit."""


class GroupTooLarge(CapExceeded):
    pass


class CarrierTooLarge(CapExceeded):
    pass


class SearchSpaceTooLarge(CapExceeded):
    pass


# -- solutions ---------------------------------------------------------------


class SolutionError(YBError, ValueError):
    """A candidate pair of tables is not a valid solution."""


class OutOfRangeEntry(SolutionError):
    def __init__(self, table: str, x: int, y: int, value: int):
        super().__init__(f"{table}[{x}][{y}] = {value} is out of range")
        self.table, self.x, self.y, self.value = table, x, y, value


class NonBijectiveRow(SolutionError):
    def __init__(self, table: str, x: int):
        super().__init__(f"row {x} of {table} is not a permutation")
        self.table, self.x = table, x


class BraidFailure(SolutionError):
    def __init__(self, x: int, y: int, z: int):
        super().__init__(f"braid relation fails on ({x}, {y}, {z})")
        self.witness = (x, y, z)


class NotInvolutive(SolutionError):
    def __init__(self, x: int, y: int):
        super().__init__(f"r(r({x}, {y})) != ({x}, {y})")
        self.witness = (x, y)


class NotAbelian(YBError, ValueError):
    pass


# -- braces ------------------------------------------------------------------


class BraceError(YBError, ValueError):
    """A candidate pair of Cayley tables is not a skew brace."""


class NotAGroup(BraceError):
    def __init__(self, table: str, reason: str, witness: tuple[int, ...] = ()):
        super().__init__(f"{table} table is not a group: {reason} at {witness}")
        self.table, self.reason, self.witness = table, reason, witness


class BraceAxiomFailure(BraceError):
    def __init__(self, a: int, b: int, c: int):
        super().__init__(f"a o (b + c) != a o b - a + a o c for (a, b, c) = ({a}, {b}, {c})")
        self.witness = (a, b, c)


class NotAnIdeal(BraceError):
    pass


class SizeMismatch(BraceError):
    pass


class BadParameters(YBError, ValueError):
    pass


class NotACycleBase(YBError, ValueError):
    pass


class NotInTransitiveCycleBase(YBError, ValueError):
    pass


class ConditionViolated(YBError, ValueError):
    pass


# -- truncated ring / classification -----------------------------------------


class ModulusMismatch(YBError, ValueError):
    pass


class MatrixNotInNormalForm(YBError, ValueError):
    pass


class WrongType(YBError, ValueError):
    pass


class BadAutomorphismSeed(YBError, ValueError):
    pass


class Unsupported(YBError):
    pass
