"""Exception hierarchy shared by every zetaforge module."""


class ZetaforgeError(Exception):
    """Base class for all library errors."""


class InputError(ZetaforgeError, ValueError):
    """Malformed spec, polynomial text, or out-of-range parameter."""


class BudgetExceeded(ZetaforgeError):
    """Raised by the pre-flight estimate when an enumeration would exceed the cap."""

    def __init__(self, required, budget, what="enumeration"):
        self.required = int(required)
        self.budget = int(budget)
        super().__init__(
            f"{what} needs {self.required} evaluations, budget is {self.budget}"
        )


class ReconstructionError(ZetaforgeError):
    """Pade system singular, or guard coefficients disagree."""


class WeightError(ZetaforgeError):
    """A reciprocal root or factor could not be assigned to a single weight."""


class SingularClassError(ZetaforgeError):
    """A residue class with no unit partial derivative was met during integration."""

    def __init__(self, residue):
        self.residue = tuple(int(v) for v in residue)
        super().__init__(f"singular residue class {self.residue}: no unit partial")


class FitError(ZetaforgeError):
    """No integer polynomial in q is consistent with the supplied counts."""
