from ._core import (
    AnalysisError,
    ClosedForm,
    Program,
    closed_form,
    combinations,
    invariants,
    run_cli,
    sensitivity,
    simulate,
)

__all__ = [
    "AnalysisError",
    "ClosedForm",
    "Program",
    "closed_form",
    "combinations",
    "invariants",
    "run_cli",
    "sensitivity",
    "simulate",
]
