"""
Análise offline dos logs de registros e scans
"""

from .availability import (
    availability,
    availability_of_records,
    daily_availability,
    overall_accessibility,
    ping_loss_distribution,
    slow_requests,
)
from .comparison import compare_runs, relative_change, size_changes
from .failover import failover_ratios
from .latency import geofactor, histogram, latency_stats, nearest_rank, resample_daily, vantage_means
from .loader import expand_log_paths, find_gaps, load_scans, load_series, select_series
from .pipeline import AnalysisResult, AnalysisSettings, ComparisonResult, analyze, compare
from .report_writer import render_index, render_plots, write_comparison, write_report
from .security import cross_vantage_lag, lasting_changes, mean_scores, score_series, suite_census

__all__ = [
    "AnalysisResult",
    "AnalysisSettings",
    "ComparisonResult",
    "analyze",
    "availability",
    "availability_of_records",
    "compare",
    "compare_runs",
    "cross_vantage_lag",
    "daily_availability",
    "expand_log_paths",
    "failover_ratios",
    "find_gaps",
    "geofactor",
    "histogram",
    "lasting_changes",
    "latency_stats",
    "load_scans",
    "load_series",
    "mean_scores",
    "nearest_rank",
    "overall_accessibility",
    "ping_loss_distribution",
    "relative_change",
    "render_index",
    "render_plots",
    "resample_daily",
    "score_series",
    "select_series",
    "size_changes",
    "slow_requests",
    "suite_census",
    "vantage_means",
    "write_comparison",
    "write_report",
]
