"""Exception and warning types shared across the package."""


class DivbarError(Exception):
    """Base class for all package-specific errors."""


class NonPositive(DivbarError):
    """A parameter that must be positive (or a count that must be >= 1) is not."""


class NegativeVolatility(DivbarError):
    """sigma < 0."""


class NetProfitViolation(DivbarError):
    """Premium rate does not exceed the expected claim rate (c <= lambda/mu)."""


class LengthMismatch(DivbarError):
    """A permutation and an increment series disagree on n."""


class EmptyEnsemble(DivbarError):
    """A contrast was requested over zero quasi-paths."""


class SchemeMismatch(DivbarError):
    """Paths in an ensemble do not share a single sampling scheme."""


class DomainError(DivbarError):
    """An argument lies outside the mathematical domain of the operation."""


class DegenerateRoots(DivbarError):
    """The Lundberg cubic has (nearly) coincident roots, or the scale-function
    identities failed at construction."""


class NoDiffusion(DivbarError):
    """sigma = 0 is outside the scope of the closed-form oracle."""


class BracketNotFound(DivbarError):
    """No sign change of W'' was found while scanning for the optimal barrier."""


class ParseError(DivbarError):
    """A config file is malformed or missing a required key."""


class ValidationError(DivbarError):
    """A parsed config violates an invariant (named in the message)."""


class HFLTWarning(UserWarning):
    """The sampling scheme is far from the high-frequency long-horizon regime
    (h small, T = n*h large) that the estimator's consistency relies on."""


class AssumptionWarning(UserWarning):
    """An asymptotic-rate assumption (e.g. n/alpha -> 0) is violated at the
    given finite sizes.  Advisory only; the computation proceeds."""
