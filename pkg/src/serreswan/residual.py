from __future__ import annotations

from typing import NamedTuple


class Check(NamedTuple):
    """A residual compared against a tolerance."""

    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol
