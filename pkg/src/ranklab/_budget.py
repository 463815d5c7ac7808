"""Work budget for exact enumerations.

Everything in this package is computed exactly, so the only runaway risk is
combinatorial size.  Operations that enumerate (tuple scans, difference
multisets, digit sweeps) estimate their elementary unit count up front and
charge it against a budget read from the ``RANKLAB_BUDGET`` environment
variable (default 5,000,000 units).  Exceeding the budget raises
:class:`~ranklab.errors.BudgetExceeded` instead of silently degrading to an
approximation.
"""

from __future__ import annotations

import os

from .errors import BudgetExceeded

DEFAULT_BUDGET = 5_000_000

__all__ = ["DEFAULT_BUDGET", "enumeration_budget", "charge"]


def enumeration_budget() -> int:
    """Current budget in enumeration units (env override, else default)."""
    raw = os.environ.get("RANKLAB_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_BUDGET
    return value if value > 0 else DEFAULT_BUDGET


def charge(units: int, what: str) -> None:
    """Refuse up front if *what* would cost more than the budget allows."""
    budget = enumeration_budget()
    if units > budget:
        raise BudgetExceeded(what, units, budget)
