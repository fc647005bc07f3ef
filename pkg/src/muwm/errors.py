"""Exception hierarchy shared by every module.

Each exception carries the CLI exit code it maps to (see docs/FORMATS.md).
"""

from __future__ import annotations

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_HYPOTHESIS = 4
EXIT_FORMAT = 5


class MuwmError(Exception):
    exit_code = EXIT_INVALID

    @property
    def name(self) -> str:
        return type(self).__name__


# matrixcore
class BadEntry(MuwmError):
    pass


class NonDiagonalProduct(MuwmError):
    pass


class UnequalDiagonal(MuwmError):
    pass


class DimensionMismatch(MuwmError):
    pass


class NonSquareScale(MuwmError):
    pass


class TooFewMembers(MuwmError):
    pass


class InexactDivision(MuwmError):
    pass


class NotMuwmParams(MuwmError):
    pass


class BadParams(MuwmError):
    pass


class NotQuasiUnbiased(MuwmError):
    """A pair of family members fails the quasi-unbiased predicate."""

    def __init__(self, i: int, j: int, detail: str = ""):
        self.pair = (i, j)
        super().__init__(f"members {i} and {j} are not quasi-unbiased{': ' + detail if detail else ''}")


# spherical
class DuplicateVector(MuwmError):
    pass


class BadAlphabet(MuwmError):
    pass


class BadInnerProducts(MuwmError):
    pass


class BadNorm(MuwmError):
    pass


class NotAntipodal(MuwmError):
    pass


class BadDecomposition(MuwmError):
    pass


class NoDecomposition(MuwmError):
    exit_code = EXIT_HYPOTHESIS

    def __init__(self, message: str, nodes: int = 0, candidates: int = 0):
        self.nodes = nodes
        self.candidates = candidates
        super().__init__(message)


class InexactFrameCoordinates(MuwmError):
    pass


class WrongPartCount(MuwmError):
    pass


# codes
class EvenModulus(MuwmError):
    pass


class UnsupportedM(MuwmError):
    exit_code = EXIT_USAGE


class TooLarge(MuwmError):
    exit_code = EXIT_USAGE


class NotSubcode(MuwmError):
    pass


class HypothesisFailed(MuwmError):
    exit_code = EXIT_HYPOTHESIS


class LiftFailure(MuwmError):
    exit_code = EXIT_HYPOTHESIS


# lattice
class BadSpec(MuwmError):
    exit_code = EXIT_USAGE


class OddD(MuwmError):
    exit_code = EXIT_USAGE


class SearchTimeout(MuwmError):
    exit_code = EXIT_BUDGET

    def __init__(self, message: str, nodes: int):
        self.nodes = nodes
        super().__init__(message)


# bounds
class DegenerateD(MuwmError):
    exit_code = EXIT_USAGE


class ExpansionMismatch(MuwmError):
    def __init__(self, message: str, computed=None, stated=None):
        self.computed = computed
        self.stated = stated
        super().__init__(message)


# formats
class FormatError(MuwmError):
    exit_code = EXIT_FORMAT
