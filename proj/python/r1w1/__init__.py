"""Simulation, exhaustive verification and message-passing transformation of
self-stabilizing algorithms that write their closed neighborhood."""

from ._r1w1 import (
    ContractError,
    Graph,
    GraphError,
    StateSpaceTooLarge,
    enabled_rules,
    generate,
    run,
    transform,
    verify,
    winner_probability,
)

__all__ = [
    "ContractError",
    "Graph",
    "GraphError",
    "StateSpaceTooLarge",
    "enabled_rules",
    "generate",
    "run",
    "transform",
    "verify",
    "winner_probability",
]
