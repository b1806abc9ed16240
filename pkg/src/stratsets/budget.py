"""Node-count search budgets with explicit exhaustion.

Budgets are counts of search nodes, not wall-clock time, so runs are
reproducible.  Exhaustion raises; callers report the "unknown" verdict.
"""

from __future__ import annotations


class BudgetExceeded(RuntimeError):
    def __init__(self, limit: int):
        super().__init__(f"search budget of {limit} nodes exhausted")
        self.limit = limit


class Budget:
    __slots__ = ("limit", "used")

    def __init__(self, limit: int | None):
        self.limit = limit
        self.used = 0

    @classmethod
    def unlimited(cls) -> "Budget":
        return cls(None)

    def charge(self, n: int = 1) -> None:
        self.used += n
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(self.limit)

    def __repr__(self):
        cap = "inf" if self.limit is None else str(self.limit)
        return f"Budget(used={self.used}, limit={cap})"
