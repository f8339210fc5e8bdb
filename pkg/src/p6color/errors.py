"""Exception types shared across the package."""


class P6ColorError(Exception):
    pass


class InvalidInstance(P6ColorError):
    """Input fails an axiom or a format check.

    ``axiom`` names the failed condition ("A".."F" for the precoloring
    axioms, or a short tag for format problems) and ``witness`` holds the
    offending vertex or vertex set when there is one.
    """

    def __init__(self, axiom, message, witness=None):
        super().__init__(f"[{axiom}] {message}")
        self.axiom = axiom
        self.witness = witness


class BudgetExceeded(P6ColorError):
    """A branch collection grew past the configured member cap."""


class InvariantViolation(P6ColorError):
    """An internal guarantee failed; the answer cannot be trusted."""


class OracleLimitExceeded(P6ColorError):
    pass


class RequiresCompanionReduction(NotImplementedError):
    """Raised by the general entry point that needs the seed-finding reduction."""
