"""Enumeration budgets.

Every exhaustive routine predicts its term count up front and refuses to run
when the count exceeds the budget.  Nothing is ever silently truncated.
"""

from __future__ import annotations

import os
import re

from .errors import BudgetExceeded, ParameterError

ENV_VAR = "RAMSEY_BUDGET"

DEFAULT_TERM_BUDGET = 2**26  # trigonometric sums, P enumeration
DEFAULT_GRAPH_BUDGET = 2**28  # labeled-graph enumeration, parity-kernel walks

_POWER = re.compile(r"^\s*2\s*(?:\^|\*\*)\s*(\d+)\s*$")


def parse_budget(text: str | int) -> int:
    """Parse ``"67108864"``, ``"2^26"`` or ``"2**26"``."""
    if isinstance(text, int):
        value = text
    else:
        m = _POWER.match(text)
        if m:
            value = 2 ** int(m.group(1))
        else:
            try:
                value = int(text.strip())
            except ValueError:
                raise ParameterError(f"unparseable budget {text!r}") from None
    if value < 1:
        raise ParameterError(f"budget must be positive, got {value}")
    return value


def resolve(budget: int | None, default: int) -> int:
    if budget is not None:
        return parse_budget(budget)
    env = os.environ.get(ENV_VAR)
    if env:
        return parse_budget(env)
    return default


def term_budget(budget: int | None = None) -> int:
    return resolve(budget, DEFAULT_TERM_BUDGET)


def graph_budget(budget: int | None = None) -> int:
    return resolve(budget, DEFAULT_GRAPH_BUDGET)


def require(what: str, terms: int, budget: int) -> None:
    if terms > budget:
        raise BudgetExceeded(what, terms, budget)
