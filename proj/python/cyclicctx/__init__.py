"""Contextuality checks, measures and epistemic-probability estimates for
cyclic systems of 0/1 random variables."""

from ._core import (
    CtxError,
    CyclicSystem,
    MarginalSpec,
    __version__,
    bound_table,
    check,
    check_exact,
    contextuality_measure,
    demibox_contains,
    epsilon_upper_bound,
    estimate_epsilon,
    estimate_epsilon_tilde,
    load_system,
    noncontextuality_measure,
    parse_document,
    verify,
)

__all__ = [
    "CtxError",
    "CyclicSystem",
    "MarginalSpec",
    "__version__",
    "bound_table",
    "check",
    "check_exact",
    "contextuality_measure",
    "demibox_contains",
    "epsilon_upper_bound",
    "estimate_epsilon",
    "estimate_epsilon_tilde",
    "load_system",
    "noncontextuality_measure",
    "parse_document",
    "verify",
]
