"""Enumeration budget shared by every brute-force routine.

The budget caps the number of objects any single enumeration may visit.  It
defaults to 2**24 and can be overridden with the ``NETCODE_BUDGET``
environment variable or lifted entirely inside :func:`unlimited`.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from typing import Iterator

from .errors import EnumerationBudgetExceeded

DEFAULT_BUDGET = 1 << 24

_forced = False


def enumeration_budget() -> int:
    raw = os.environ.get("NETCODE_BUDGET")
    if raw is None or raw.strip() == "":
        return DEFAULT_BUDGET
    try:
        value = int(float(raw))
    except ValueError as exc:
        raise ValueError(f"NETCODE_BUDGET must be a number, got {raw!r}") from exc
    if value < 1:
        raise ValueError("NETCODE_BUDGET must be positive")
    return value


def check_budget(count: int, what: str) -> None:
    """Raise if visiting ``count`` objects would exceed the budget."""
    if _forced:
        return
    limit = enumeration_budget()
    if count > limit:
        raise EnumerationBudgetExceeded(
            f"{what}: {count} objects exceeds enumeration budget {limit} "
            "(set NETCODE_BUDGET or use --force)"
        )


def within_budget(count: int) -> bool:
    return _forced or count <= enumeration_budget()


@contextmanager
def unlimited() -> Iterator[None]:
    global _forced
    previous = _forced
    _forced = True
    try:
        yield
    finally:
        _forced = previous
