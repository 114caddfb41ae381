"""Exception taxonomy shared by all modules.

Every error that a caller might want to dispatch on (CLI exit codes, retry
loops, certificate handling) gets its own class.  Anything not listed here is
a plain bug and is allowed to surface as ValueError/ZeroDivisionError.
"""


class HyperrankError(Exception):
    pass


# --- exact algebra ---------------------------------------------------------

class BothZero(HyperrankError):
    """gcd of two zero polynomials."""


class ZeroPolynomial(HyperrankError):
    pass


class LeadingCoeffVanishes(HyperrankError):
    """Reduction mod p killed the leading coefficient."""


class NotCoprime(HyperrankError):
    """Hensel input factors share a root mod p."""


class NonUnitInverse(HyperrankError):
    """Division by a non-unit in a truncated p-adic ring."""


class PrecisionExhausted(HyperrankError):
    """A result would need more p-adic digits than are carried."""


class FactorSearchInconclusive(HyperrankError):
    """Rational factor reconstruction ran out of budget."""


# --- spectra ---------------------------------------------------------------

class CommutativityViolated(HyperrankError):
    def __init__(self, i, j):
        super().__init__(f"generators {i} and {j} do not commute")
        self.pair = (i, j)


class RankDeficient(HyperrankError):
    """A generator is singular; the action does not extend to the solenoid."""


class RootFindingFailure(HyperrankError):
    """Numerical eigenvalue clustering could not be certified at the working tolerance."""


# --- ergodicity ------------------------------------------------------------

class NotFound(HyperrankError):
    """Search exhausted its budget without a hit (inconclusive, not a certificate)."""

    def __init__(self, message, budget=None):
        super().__init__(message)
        self.budget = budget


class HypothesisViolated(HyperrankError):
    """A stated hypothesis of a search routine failed; carries the witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NoErgodicSubgroupFound(HyperrankError):
    def __init__(self, obstructions, budget):
        super().__init__(
            f"no ergodic Z^2 subgroup within budget {budget}; "
            f"{len(obstructions)} candidate directions obstructed")
        self.obstructions = obstructions
        self.budget = budget


# --- solenoid --------------------------------------------------------------

class LeavesDualLattice(HyperrankError):
    """A mode (or its image) has a denominator outside the prime set S."""


class DegenerateFit(HyperrankError):
    """Too few nonzero correlation entries to fit a rate."""


class NonErgodic(HyperrankError):
    """Operation requires an ergodic matrix; carries the certificate."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


# --- nilpotent -------------------------------------------------------------

class ScalarMismatch(HyperrankError):
    """Structure constants are not integral for the requested scalar ring."""


class NotAnAutomorphism(HyperrankError):
    pass


class SplittingNotDirect(HyperrankError):
    """Claimed subspace splitting fails to be direct / spanning."""


class NotSubalgebra(HyperrankError):
    pass


class NotDirectSum(HyperrankError):
    pass


# --- conjugacy -------------------------------------------------------------

class NotExpanding(HyperrankError):
    pass


class NoConvergence(HyperrankError):
    def __init__(self, budget, history):
        super().__init__(
            f"fixed-point sweep did not reach tolerance in {budget} sweeps "
            f"(last residual {history[-1]:.3e})")
        self.budget = budget
        self.history = history


class DegenerateField(HyperrankError):
    """Displacement field is constant; no regularity exponent to estimate."""


# --- cli -------------------------------------------------------------------

class ParseError(HyperrankError):
    pass
