"""
API de saúde do runner: /health (HTML), /health.json e /metrics.

Serve o snapshot em memória; nunca espera por medições em andamento.
"""

import html
import logging
from datetime import UTC, datetime

import humanize
from fastapi import FastAPI
from fastapi.responses import HTMLResponse, Response
from prometheus_client import CONTENT_TYPE_LATEST

from config.constants import APP_NAME, APP_VERSION
from models.run_config import HealthSnapshot
from monitoring.metrics_collector import MetricsCollector
from runner.health import HealthState

logger = logging.getLogger("apiq")


def _format_timestamp(timestamp_ms: int) -> str:
    return datetime.fromtimestamp(timestamp_ms / 1000, tz=UTC).strftime("%Y-%m-%d %H:%M:%S UTC")


def render_health_html(snapshot: HealthSnapshot) -> str:
    rows = []
    for status in snapshot.series:
        age = humanize.naturaldelta(status.age_s or 0.0)
        css = ' class="stale"' if status.stale else ""
        rows.append(
            f"<tr{css}><td>{html.escape(status.endpoint_id)}</td><td>{status.protocol.value}</td>"
            f"<td>{_format_timestamp(status.timestamp_ms)}</td><td>{status.outcome_class.value}</td>"
            f"<td>{status.latency_ms:.1f}</td><td>{age}{' (parada)' if status.stale else ''}</td></tr>"
        )
    body = "\n".join(rows) or '<tr><td colspan="6">Nenhuma medição ainda</td></tr>'

    faults = "".join(f"<li>{html.escape(fault)}</li>" for fault in snapshot.faults)
    scan_errors = "".join(
        f"<li>{html.escape(endpoint)}: {html.escape(detail)}</li>"
        for endpoint, detail in snapshot.last_scan_errors.items()
    )
    return f"""<!DOCTYPE html>
<html><head><meta charset="utf-8"><title>{APP_NAME} - {html.escape(snapshot.vantage)}</title>
<style>td,th{{padding:2px 8px;text-align:left}} tr.stale{{background:#fdd}}</style></head>
<body>
<h1>{APP_NAME} @ {html.escape(snapshot.vantage)}</h1>
<p>Intervalo: {snapshot.probe_interval_s}s &middot; em execução há {humanize.naturaldelta(snapshot.uptime_s)}</p>
<table>
<tr><th>Endpoint</th><th>Protocolo</th><th>Última medição</th><th>Resultado</th>
<th>Latência (ms)</th><th>Idade</th></tr>
{body}
</table>
<h2>Falhas do runner</h2><ul>{faults or "<li>nenhuma</li>"}</ul>
<h2>Falhas de scan TLS</h2><ul>{scan_errors or "<li>nenhuma</li>"}</ul>
</body></html>
"""


def create_app(state: HealthState, metrics: MetricsCollector | None = None) -> FastAPI:
    """Fábrica do app; o runner serve com uvicorn no mesmo event loop"""
    app = FastAPI(title=f"{APP_NAME} health", version=APP_VERSION)

    @app.get("/health", response_class=HTMLResponse)
    async def health_page():
        return HTMLResponse(render_health_html(state.snapshot()))

    @app.get("/health.json", response_model=HealthSnapshot)
    async def health_json():
        return state.snapshot()

    @app.get("/metrics")
    async def prometheus_metrics():
        if metrics is None:
            return Response(content=b"", media_type=CONTENT_TYPE_LATEST)
        return Response(content=metrics.render(), media_type=CONTENT_TYPE_LATEST)

    @app.get("/")
    async def root():
        return {"name": APP_NAME, "version": APP_VERSION, "endpoints": ["/health", "/health.json", "/metrics"]}

    return app
