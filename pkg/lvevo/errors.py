"""Exception hierarchy for lvevo.

Everything raised on purpose by the package derives from :class:`LvevoError`.
Errors about bad numbers or bad input also derive from :class:`ValueError`;
errors about a computation that could not finish derive from
:class:`RuntimeError`.
"""

from __future__ import annotations

from typing import Any


class LvevoError(Exception):
    """Base class for all lvevo errors."""


# --------------------------------------------------------------------------- #
#  Algebra (lv-core)
# --------------------------------------------------------------------------- #
class NotViable(LvevoError, ValueError):
    """A prey trait cannot support the predator (or has beta <= 1)."""


class Singular(LvevoError, ValueError):
    """A closed form hit a zero denominator."""


class NotCoexisting(LvevoError, ValueError):
    """The requested types have no strictly positive joint equilibrium."""


class DegenerateTie(LvevoError, ValueError):
    """Exact tie that the model excludes (equal birth rates, equal ratios)."""


class DomainError(LvevoError, ValueError):
    """Argument outside the mathematical domain (e.g. log of a zero density)."""


class OutOfDomain(LvevoError, ValueError):
    """Rate function evaluated at a speed it is not defined for here."""


class StiffnessError(LvevoError, RuntimeError):
    """The ODE integrator could not take a step."""


# --------------------------------------------------------------------------- #
#  Simulation
# --------------------------------------------------------------------------- #
class BudgetExceeded(LvevoError, RuntimeError):
    """A particle system outgrew its budget.

    ``partial`` holds the state reached when the budget was hit so the caller
    can still report it.
    """

    def __init__(self, message: str, partial: Any = None) -> None:
        super().__init__(message)
        self.partial = partial


class Extinct(LvevoError, RuntimeError):
    """Every replicate of a killed branching random walk died out."""


# --------------------------------------------------------------------------- #
#  Analysis / IO
# --------------------------------------------------------------------------- #
class InsufficientData(LvevoError, ValueError):
    """An estimator did not get enough points."""


class ParseError(LvevoError, ValueError):
    """Malformed event log. ``line`` is 1-based and counts the header."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class ConfigError(LvevoError, ValueError):
    """Invalid experiment configuration. ``field`` names the culprit."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field
