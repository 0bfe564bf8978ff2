"""Scenario runner for the step, pick-and-place, tracking and controller-comparison experiments."""

from .metrics import DeviationStats, Metrics, NeverRises, StepMetrics, compute_step_metrics
from .runner import (COLUMNS, ScenarioError, SimResult, Table1Row, UnstableSimulation, format_table1,
                     metrics_from_table, read_csv_table, run_pick_place_trials, run_scenario, run_table1,
                     run_tracking, run_trials, step_probe)
from .scenario import Scenario, Waypoint, load_scenario, load_scenario_file, shipped_scenario_text

__all__ = [
    "COLUMNS", "DeviationStats", "Metrics", "NeverRises", "Scenario", "ScenarioError", "SimResult",
    "StepMetrics", "Table1Row", "UnstableSimulation", "Waypoint", "compute_step_metrics", "format_table1",
    "load_scenario", "load_scenario_file", "metrics_from_table", "read_csv_table", "run_pick_place_trials",
    "run_scenario", "run_table1", "run_tracking", "run_trials", "shipped_scenario_text", "step_probe",
]
