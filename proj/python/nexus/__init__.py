"""Python access to the nexus core: bundle loading, validation, gas days,
adequacy runs, contingency lists and the command line."""

from ._nexus import (
    EXIT_CLEAN,
    EXIT_FINDINGS,
    EXIT_STUDY_FAILED,
    EXIT_USAGE,
    Contingency,
    Finding,
    Scenario,
    adequacy,
    enumerate_contingencies,
    gas_day,
    load_scenario,
    run_cli,
    validate,
)

__all__ = [
    "EXIT_CLEAN",
    "EXIT_FINDINGS",
    "EXIT_STUDY_FAILED",
    "EXIT_USAGE",
    "Contingency",
    "Finding",
    "Scenario",
    "adequacy",
    "enumerate_contingencies",
    "gas_day",
    "load_scenario",
    "run_cli",
    "validate",
]
