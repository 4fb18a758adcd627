"""
Mocknet - endpoints simulados com falhas injetadas e o oráculo correspondente
"""

from .certificates import generate_self_signed, write_certificates
from .oracle import expected_outcome, expected_report, expected_reports_by_phase, probe_offsets, random_plan
from .plan_parser import load_plan, parse_plan, render_plan
from .server import GroundTruthEntry, MockEndpoint, build_server_context, serve, window_rng

__all__ = [
    "GroundTruthEntry",
    "MockEndpoint",
    "build_server_context",
    "expected_outcome",
    "expected_report",
    "expected_reports_by_phase",
    "generate_self_signed",
    "load_plan",
    "parse_plan",
    "probe_offsets",
    "random_plan",
    "render_plan",
    "serve",
    "window_rng",
    "write_certificates",
]
