"""
Ponto de entrada `apiq`: run, scan, analyze, compare, mock e report
"""

import argparse
import asyncio
import logging
import signal
import sys
from collections.abc import Sequence
from pathlib import Path

import pandas as pd
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from config.constants import (
    APP_NAME,
    APP_VERSION,
    DEFAULT_ALIGNMENT_WINDOW_S,
    DEFAULT_GAP_THRESHOLD,
    DEFAULT_HISTOGRAM_BIN_MS,
    DEFAULT_LASTING_MIN_REL_CHANGE,
    DEFAULT_LASTING_PERSISTENCE,
    DEFAULT_PROBE_INTERVAL_S,
    EXIT_BAD_INPUT,
    EXIT_FAILURE,
    EXIT_OK,
)
from config.logging_config import LOG_FILE, setup_logging
from models.errors import (
    ConfigurationError,
    FaultPlanError,
    InsufficientVantagesError,
    MalformedRecordError,
    NoDataError,
)

logger = logging.getLogger("apiq")
console = Console()

BAD_INPUT_ERRORS = (
    ConfigurationError,
    FaultPlanError,
    NoDataError,
    InsufficientVantagesError,
    MalformedRecordError,
    FileNotFoundError,
    ValidationError,
)


def _fraction(value: float | None) -> str:
    return "-" if value is None else f"{value:.4f}"


def _number(value: float | None) -> str:
    return "-" if value is None else f"{value:.1f}"


def emit(title: str, columns: list[str], rows: list[list], output_format: str) -> None:
    """Resumo em tabela rich ou CSV na saída padrão"""
    if output_format == "csv":
        pd.DataFrame(rows, columns=columns).to_csv(sys.stdout, index=False, lineterminator="\n")
        return
    table = Table(title=title, show_header=True, header_style="bold cyan")
    for index, column in enumerate(columns):
        table.add_column(column, justify="left" if index == 0 else "right")
    for row in rows:
        table.add_row(*(str(cell) for cell in row))
    console.print(table)


def _analysis_settings(args: argparse.Namespace):
    from analysis.pipeline import AnalysisSettings

    return AnalysisSettings(
        expected_interval_s=args.interval,
        gap_threshold=args.gap_threshold,
        alignment_window_s=args.window,
        bin_width_ms=args.bin_width,
        min_rel_change=args.min_rel_change,
        persistence=args.persistence,
        exclude_endpoints=list(args.exclude_endpoint or []),
    )


def _load_run_config(path: str | None):
    from config.system_config import load_configuration

    return load_configuration(path, fallback=path is None)


def cmd_run(args: argparse.Namespace) -> int:
    from runner.daemon import ProbeDaemon

    config = _load_run_config(args.config)
    daemon = ProbeDaemon(config, serve_health=not args.no_health)
    asyncio.run(daemon.run())
    return EXIT_OK if not daemon.health.snapshot().faults else EXIT_FAILURE


async def _scan(args: argparse.Namespace) -> list:
    from runner.daemon import ProbeDaemon
    from runner.scheduler import PeriodicWorker

    config = _load_run_config(args.config)
    daemon = ProbeDaemon(config, serve_health=False)
    if not daemon.https_endpoints:
        raise ConfigurationError("Nenhum endpoint HTTPS na configuração")
    if args.once:
        return await daemon.scan_all()

    results: list = []

    async def action() -> None:
        results[:] = await daemon.scan_all()

    worker = PeriodicWorker("tls-scan", config.scan_interval_s, 0, action)
    loop = asyncio.get_running_loop()
    for sig in (signal.SIGINT, signal.SIGTERM):
        loop.add_signal_handler(sig, worker.stopping.set)
    await worker.run()
    return results


def cmd_scan(args: argparse.Namespace) -> int:
    from models.cipher import ScanFailure
    from runner.record_log import encode_scan

    results = asyncio.run(_scan(args))
    rows = []
    for result in results:
        if isinstance(result, ScanFailure):
            rows.append([result.endpoint_id, "-", 0, result.detail])
        else:
            rows.append([result.endpoint_id, f"{result.server_score:.6f}", len(result.suites), result.detail or "ok"])
            logger.debug(encode_scan(result))
    emit("Scans TLS", ["endpoint", "server_score", "suites", "detail"], rows, args.format)
    return EXIT_FAILURE if any(isinstance(r, ScanFailure) for r in results) else EXIT_OK


def _availability_rows(result) -> list[list]:
    rows = []
    for key, report in sorted(result.availability.items(), key=lambda item: item[0].label()):
        latency = result.latency.get(key)
        rows.append(
            [
                key.label(),
                report.denominator.get("records", 0),
                _fraction(report.pingability),
                _fraction(report.accessibility),
                _fraction(report.successability),
                _number(latency.p50 if latency else None),
                _number(latency.p90 if latency else None),
            ]
        )
    return rows


def cmd_analyze(args: argparse.Namespace) -> int:
    from analysis.pipeline import analyze
    from analysis.report_writer import write_report

    result = analyze(args.logs, _analysis_settings(args))
    index = write_report(result, args.out, deterministic=args.deterministic)
    emit(
        "Disponibilidade e latência",
        ["series", "records", "pingability", "accessibility", "successability", "p50_ms", "p90_ms"],
        _availability_rows(result),
        args.format,
    )
    if result.strategies and args.format == "table":
        emit(
            "Estratégias de failover",
            ["strategy", "min", "max", "avg"],
            [
                [strategy.value, _fraction(o.min), _fraction(o.max), _fraction(o.avg)]
                for strategy, o in sorted(result.strategies.items(), key=lambda item: item[0].value)
            ],
            args.format,
        )
    if result.quarantined:
        logger.warning(f"⚠️ {result.quarantined} linhas em quarentena (ignoradas na análise)")
    if args.format == "table":
        console.print(f"Relatório: {index}")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    from analysis.pipeline import analyze, compare
    from analysis.report_writer import write_comparison

    settings = _analysis_settings(args)
    comparison = compare(analyze(args.run_a, settings), analyze(args.run_b, settings))
    index = write_comparison(comparison, args.out)
    runs = comparison.runs
    rows = [
        [
            f"{d.endpoint_id}/{d.protocol.value}@{d.vantage}",
            _number(d.p90_a),
            _number(d.p90_b),
            _fraction(d.p90_rel_change),
            _fraction(d.stddev_rel_change),
        ]
        for d in runs.deltas
    ]
    rows += [[label, "-", "-", "discontinued", "-"] for label in runs.discontinued]
    rows += [[label, "-", "-", "new", "-"] for label in runs.new]
    emit("Comparação p90", ["series", "p90_a", "p90_b", "p90_change", "stddev_change"], rows, args.format)
    if args.format == "table":
        console.print(
            f"p90: aumento em {runs.p90_increases}, queda em {runs.p90_decreases}, estável em {runs.p90_flat}, "
            f"indefinido em {runs.p90_undefined}. "
            f"Relatório: {index}"
        )
    return EXIT_OK


def cmd_mock(args: argparse.Namespace) -> int:
    from mocknet.plan_parser import load_plan
    from mocknet.server import serve
    from models.fault_plan import FaultPlan

    plan = load_plan(args.plan)
    updates = {}
    if args.tls_preference:
        updates["tls_preference"] = tuple(name.strip() for name in args.tls_preference.split(",") if name.strip())
    if args.seed is not None:
        updates["seed"] = args.seed
    if updates:
        plan = FaultPlan.model_validate(plan.model_dump() | updates)

    async def main() -> None:
        stop = asyncio.Event()
        loop = asyncio.get_running_loop()
        for sig in (signal.SIGINT, signal.SIGTERM):
            loop.add_signal_handler(sig, stop.set)
        await serve(
            plan,
            args.port,
            host=args.host,
            tls_port=args.tls_port,
            echo_port=args.echo_port,
            ground_truth_path=args.ground_truth,
            stop_event=stop,
        )

    asyncio.run(main())
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    from analysis.report_writer import render_index, render_plots

    out_dir = Path(args.report_dir)
    if not out_dir.is_dir():
        raise FileNotFoundError(f"Diretório de relatório não encontrado: {out_dir}")
    plots = render_plots(out_dir, deterministic=args.deterministic)
    index = render_index(out_dir)
    console.print(f"{len(plots)} gráficos re-renderizados. Índice: {index}")
    return EXIT_OK


def _add_analysis_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--interval", type=int, default=DEFAULT_PROBE_INTERVAL_S, help="Intervalo esperado (s)")
    parser.add_argument("--gap-threshold", type=float, default=DEFAULT_GAP_THRESHOLD)
    parser.add_argument("--window", type=int, default=DEFAULT_ALIGNMENT_WINDOW_S, help="Janela de alinhamento (s)")
    parser.add_argument("--bin-width", type=float, default=DEFAULT_HISTOGRAM_BIN_MS, help="Largura do bin (ms)")
    parser.add_argument("--min-rel-change", type=float, default=DEFAULT_LASTING_MIN_REL_CHANGE)
    parser.add_argument("--persistence", type=int, default=DEFAULT_LASTING_PERSISTENCE)
    parser.add_argument("--exclude-endpoint", action="append", metavar="ID", help="Repetível")


def resolve_log_file(args: argparse.Namespace) -> Path | None:
    """Log JSON no diretório de saída do comando; run, scan e mock usam o arquivo padrão no cwd"""
    if args.no_log_file:
        return None
    if args.log_file is not None:
        return args.log_file
    out = getattr(args, "out", None)
    if out is not None:
        Path(out).mkdir(parents=True, exist_ok=True)
        return Path(out) / LOG_FILE.name
    report_dir = getattr(args, "report_dir", None)
    if report_dir is not None and Path(report_dir).is_dir():
        return Path(report_dir) / LOG_FILE.name
    return LOG_FILE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=APP_NAME, description="Benchmark de qualidade de APIs web")
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument(
        "--log-file", type=Path, default=None, help="Log JSON rotativo (padrão: <out>/apiq.log ou ./apiq.log)"
    )
    common.add_argument("--no-log-file", action="store_true", help="Só log no console")
    common.add_argument("--format", choices=["table", "csv"], default="table", help="Formato do resumo")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", parents=[common], help="Daemon de medições de um vantage")
    run.add_argument("--config", help="Arquivo YAML de configuração")
    run.add_argument("--no-health", action="store_true", help="Não expõe o endpoint de saúde")
    run.set_defaults(handler=cmd_run)

    scan = subparsers.add_parser("scan", parents=[common], help="Scans de cipher suites TLS")
    scan.add_argument("--config", help="Arquivo YAML de configuração")
    scan.add_argument("--once", action="store_true", help="Um único scan de cada endpoint HTTPS")
    scan.set_defaults(handler=cmd_scan)

    analyze = subparsers.add_parser("analyze", parents=[common], help="Análise offline dos logs")
    analyze.add_argument("logs", nargs="+", help="Arquivos ou diretórios de log")
    analyze.add_argument("--out", required=True, help="Diretório do relatório")
    analyze.add_argument("--deterministic", action="store_true", help="Gráficos byte a byte reproduzíveis")
    _add_analysis_flags(analyze)
    analyze.set_defaults(handler=cmd_analyze)

    compare = subparsers.add_parser("compare", parents=[common], help="Compara duas execuções")
    compare.add_argument("--run-a", nargs="+", required=True, help="Logs da execução A")
    compare.add_argument("--run-b", nargs="+", required=True, help="Logs da execução B")
    compare.add_argument("--out", required=True, help="Diretório das tabelas de comparação")
    _add_analysis_flags(compare)
    compare.set_defaults(handler=cmd_compare)

    mock = subparsers.add_parser("mock", parents=[common], help="Endpoint simulado guiado por plano de falhas")
    mock.add_argument("--plan", required=True, help="Arquivo de plano")
    mock.add_argument("--port", type=int, required=True, help="Porta HTTP")
    mock.add_argument("--host", default="127.0.0.1")
    mock.add_argument("--tls-port", type=int, help="Porta HTTPS")
    mock.add_argument("--echo-port", type=int, help="Porta do eco UDP")
    mock.add_argument("--tls-preference", help="Suites em ordem de preferência, separadas por vírgula")
    mock.add_argument("--seed", type=int, help="Seed das perdas de pacotes")
    mock.add_argument("--ground-truth", type=Path, help="Arquivo do ground truth gravado no encerramento")
    mock.set_defaults(handler=cmd_mock)

    report = subparsers.add_parser("report", parents=[common], help="Re-renderiza gráficos e índice de um relatório")
    report.add_argument("report_dir")
    report.add_argument("--deterministic", action="store_true")
    report.set_defaults(handler=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(getattr(logging, args.log_level), resolve_log_file(args))
    try:
        return args.handler(args)
    except BAD_INPUT_ERRORS as e:
        logger.error(f"❌ {str(e)}")
        return EXIT_BAD_INPUT
    except KeyboardInterrupt:
        logger.info("Interrompido")
        return EXIT_OK
    except Exception as e:
        logger.error(f"❌ Erro inesperado: {str(e)}", exc_info=True)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
