"""Outer approximation for parabolic optimal control with switching constraints."""

from ._switchocp import (
    InstanceSpec,
    desired_control,
    enumerate_vertices,
    format_spec,
    objective_and_gradient,
    parse_spec,
    read_spec,
    run,
    separate,
    separate_bruteforce,
    shift_count,
    write_spec,
)

__all__ = [
    "InstanceSpec",
    "desired_control",
    "enumerate_vertices",
    "format_spec",
    "objective_and_gradient",
    "parse_spec",
    "read_spec",
    "run",
    "separate",
    "separate_bruteforce",
    "shift_count",
    "write_spec",
]
