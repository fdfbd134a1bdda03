"""Bushy-tree combinatorics: bigness, forcing steps and splitting checks."""

from ._bushy import (  # noqa: F401
    BoundedSpace,
    BushyTree,
    DomainError,
    FString,
    Functional,
    InvariantError,
    ParseError,
    StringSet,
    WidthSpec,
    check_allowance,
    force_value,
    is_big,
    is_big_oracle,
    k_closure,
    kurtz_run,
    measure_oracle,
    random_allowance,
)
