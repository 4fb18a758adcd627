"""
Módulo TLS Scan - enumeração de cipher suites e scores de segurança
"""

from .classification import SuiteTable, classify_suite, load_suite_table, score_suite
from .scanner import enumerate_suites, scan_endpoint
from .scoring import score_bounds, score_server

__all__ = [
    "SuiteTable",
    "classify_suite",
    "enumerate_suites",
    "load_suite_table",
    "scan_endpoint",
    "score_bounds",
    "score_server",
    "score_suite",
]
