"""
Módulo Monitoring - Sistema de monitoramento e coleta de métricas
"""

from .metrics_collector import MetricsCollector

__all__ = ["MetricsCollector"]
