"""
Módulo Probe - medições ICMP, HTTP e HTTPS e classificação de resultados
"""

from .classifier import classify_outcome
from .echo import EchoResult, SystemPingBackend, UdpEchoBackend
from .prober import ProbeSettings, http_probe, ping_probe, probe_endpoint

__all__ = [
    "EchoResult",
    "ProbeSettings",
    "SystemPingBackend",
    "UdpEchoBackend",
    "classify_outcome",
    "http_probe",
    "ping_probe",
    "probe_endpoint",
]
