"""Two-opinion target set selection: simulation, exact solvers and instance generators."""

from otss.instance import Graph, Instance, Solution, parse_instance, serialize_instance
from otss.process import simulate, step, verify_solution

__all__ = [
    "Graph",
    "Instance",
    "Solution",
    "parse_instance",
    "serialize_instance",
    "simulate",
    "step",
    "verify_solution",
]

__version__ = "0.1.0"
