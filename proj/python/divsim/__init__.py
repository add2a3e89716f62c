"""Discrete incremental voting on graphs: simulator, exact oracle, bounds."""

from ._core import (
    Graph,
    azuma_tail,
    bound_report,
    coupled_run,
    div_update,
    epsilon_schedule,
    exact_win_distribution,
    horizons,
    restart_tail,
    run_experiment,
    run_experiment_file,
    simulate,
    spectral_summary,
)

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "azuma_tail",
    "bound_report",
    "coupled_run",
    "div_update",
    "epsilon_schedule",
    "exact_win_distribution",
    "horizons",
    "restart_tail",
    "run_experiment",
    "run_experiment_file",
    "simulate",
    "spectral_summary",
]
