"""Layered robot-behavior runtime: config, behavior DSL, scheduler and simulation."""

from ._robosync import (
    BindError,
    ConfigError,
    LayeringError,
    MalformedLog,
    ParseError,
    RobosyncError,
    TraceError,
    adapt_priority,
    assign_base_priorities,
    bind,
    build_tasks,
    compute_stats,
    default_priorities,
    dump_ast,
    eval_condition,
    evaluate_safety,
    format_program,
    gate_significant,
    jerk_level,
    parse_config,
    run,
    touch_level,
    validate,
)

__all__ = [
    "BindError",
    "ConfigError",
    "LayeringError",
    "MalformedLog",
    "ParseError",
    "RobosyncError",
    "TraceError",
    "adapt_priority",
    "assign_base_priorities",
    "bind",
    "build_tasks",
    "compute_stats",
    "default_priorities",
    "dump_ast",
    "eval_condition",
    "evaluate_safety",
    "format_program",
    "gate_significant",
    "jerk_level",
    "parse_config",
    "run",
    "touch_level",
    "validate",
]
