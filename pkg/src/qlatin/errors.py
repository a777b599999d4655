"""Exception hierarchy shared by all qlatin modules."""


class QlatinError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(QlatinError):
    """Operands live in vector spaces of different dimensions."""


class NotUnit(QlatinError):
    """A vector failed the unit-norm check."""


class NotUnitary(QlatinError):
    """A matrix failed the unitarity check."""


class ShapeError(QlatinError):
    """A grid has the wrong shape or inconsistent row lengths."""


class SpecMismatch(QlatinError):
    """Two holey designs do not share the same hole structure."""


class NotPrimePower(QlatinError):
    """The requested field order is not a prime power."""


class TooMany(QlatinError):
    """More mutually orthogonal squares requested than the field provides."""


class DiagonalNotTransversal(QlatinError):
    """The diagonal does not contain every symbol exactly once."""


class ArityMismatch(QlatinError):
    """The two MOLS families have different lengths."""


class NoSuitableLambda(QlatinError):
    """No field element satisfies the self-orthogonality conditions."""


class InvalidTemplate(QlatinError):
    """A search template is internally inconsistent."""


class Unavailable(QlatinError):
    """Every construction strategy failed; an honest gap, not a fallback."""


class KnownNonexistent(QlatinError):
    """The requested design is known not to exist."""


class BadResidue(QlatinError):
    """Triple-system order not congruent to 1 or 3 mod 6."""


class BasisNotOrthonormal(QlatinError):
    """A lift basis failed the orthonormality check."""


class NotAQls(QlatinError):
    """Input failed the quantum Latin square axioms."""


class ToleranceAmbiguity(QlatinError):
    """Phase-equality classes are not cleanly separated at the tolerance."""


class SizeMismatch(QlatinError):
    """Filler order does not match the hole it should fill."""


class ProviderUnavailable(QlatinError):
    """A required ingredient design could not be provided."""


class AssemblyConflict(QlatinError):
    """Two blocks claimed the same cell; the input PBD is invalid."""


class VerificationFailed(QlatinError):
    """A construction produced a square that failed its own certificate."""


class NotCOILS(QlatinError):
    """Input is not a conjugate orthogonal incomplete Latin square."""


class RouteUnavailable(QlatinError):
    """Existence verdict is Yes but no local construction route succeeded."""


class UnknownId(QlatinError):
    """Unknown catalog identifier."""


class UnknownKind(QlatinError):
    """Unknown design kind."""


class CorruptRecord(QlatinError):
    """A stored record failed re-verification or hashing on load."""


class NotFound(QlatinError):
    """Search exhausted its budget or proved the template infeasible.

    ``reason`` is ``"budget-exhausted"`` or ``"proven-infeasible"``.
    """

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}{': ' + detail if detail else ''}")
