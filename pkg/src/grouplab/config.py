"""Default budgets and their environment-variable overrides.

Every limit here is a safety rail, not a semantic constant: callers may pass
explicit values to any operation that takes one.  Environment variables are
read at call time so test harnesses can override them per-process.
"""

import os
from dataclasses import dataclass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def catalog_limit() -> int:
    return _env_int("GROUPLAB_CATALOG_LIMIT", 16)


def max_order() -> int:
    return _env_int("GROUPLAB_MAX_ORDER", 16)


def node_limit() -> int:
    return _env_int("GROUPLAB_NODE_LIMIT", 50_000)


def var_limit() -> int:
    return _env_int("GROUPLAB_VAR_LIMIT", 4)


def solve_order_limit() -> int:
    return _env_int("GROUPLAB_SOLVE_ORDER_LIMIT", 24)


def sym_bound() -> int:
    # extendability witness search also tries S_k for k up to this bound
    return _env_int("GROUPLAB_SYM_BOUND", 5)


def product_limit() -> int:
    return _env_int("GROUPLAB_PRODUCT_LIMIT", 4096)


def prefix_limit() -> int:
    return _env_int("GROUPLAB_PREFIX_LIMIT", 64)


@dataclass(frozen=True)
class Budget:
    """Search budget for extendability checking and game legality."""

    max_order: int = None
    node_limit: int = None
    sym_bound: int = None

    def resolved(self) -> "Budget":
        return Budget(
            max_order=self.max_order if self.max_order is not None else max_order(),
            node_limit=self.node_limit if self.node_limit is not None else node_limit(),
            sym_bound=self.sym_bound if self.sym_bound is not None else sym_bound(),
        )
