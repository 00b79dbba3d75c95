"""Exception hierarchy shared by all modules.

Every error raised on purpose by the engine derives from :class:`GenredError`.
The CLI maps :class:`InputError` subclasses to exit status 2.
"""


class GenredError(Exception):
    """Base class of all engine errors."""


class InputError(GenredError):
    """Malformed or inconsistent user input."""


class ParseError(InputError):
    """Text or JSON input could not be parsed."""


class InvariantError(InputError):
    """A constructed value violates a structural invariant."""


class DivisionByZero(GenredError, ZeroDivisionError):
    """Division by an identically vanishing scalar or rational function."""


class PoleAtPoint(GenredError):
    """A denominator vanishes (below tolerance) at an evaluation point."""


class NotIsotropic(GenredError):
    """A splitting or subspace that must be isotropic is not."""


class FrameNotIsotropic(NotIsotropic):
    """A frame supplied for an eigenbundle is not isotropic."""


class NotReducible(GenredError):
    """The reduction data does not produce an isotropic kernel."""


class RealIndexNonzero(GenredError):
    """Reduced structure fails the real-index-zero criterion.

    ``witness`` holds a vector of ``J K~ ∩ K~^perp`` outside ``K~``.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConditionViolated(GenredError):
    """A hypothesis of a reduction theorem fails; ``which`` names it."""

    def __init__(self, message, which=None):
        super().__init__(message)
        self.which = which


class SingularB(GenredError):
    """The b-block is singular so the cross-check route is unavailable."""


class ModuleAxiomViolation(GenredError):
    """A Lie algebra module action violates the module axioms."""


class NotSymplectic(GenredError):
    """Symplectic data is not closed, not nondegenerate or not preserved."""


class NotEquivariant(GenredError):
    """Shift data for an action equivalence is not equivariant."""


class NotHamiltonian(GenredError):
    """An action is not of the form rho(a) = D(f_a); ``residual`` holds the defect."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InconsistentConnection(GenredError):
    """The supplied curvature does not match the supplied connection form."""


class DegenerateLeadingTerm(GenredError):
    """The leading scalar of a contracted spinor vanishes identically."""


class ChartDegenerate(GenredError):
    """A form restricts to zero on the requested affine chart."""


class PointOnLocus(GenredError):
    """The requested point lies on the type-change locus."""
