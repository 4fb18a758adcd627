import logging
from pathlib import Path

import pytest

from mocknet import load_plan, parse_plan, render_plan
from models.errors import FaultPlanError
from models.fault_plan import (
    DropTlsBehavior,
    OkBehavior,
    PacketLossBehavior,
    ResetBehavior,
    StatusBehavior,
    TimeoutBehavior,
)

logger = logging.getLogger("apiq")

PLAN = """
# plano completo
@seed 42
@tls_preference ECDHE-RSA-AES256-SHA384,ECDHE-ECDSA-AES128-SHA,RC4-SHA
0,60,OK(200,1024,10)
60,60,STATUS(503)   # indisponível
120,30,TIMEOUT
150,30,RESET
180,30,DROP_TLS
210,60,PACKET_LOSS(0.4)
300,10,OK
"""


def test_parse_full_grammar():
    """Todos os comportamentos e diretivas"""
    plan = parse_plan(PLAN)
    assert plan.seed == 42
    assert plan.tls_preference == ("ECDHE-RSA-AES256-SHA384", "ECDHE-ECDSA-AES128-SHA", "RC4-SHA")
    assert [window.behavior for window in plan.windows] == [
        OkBehavior(status=200, body_bytes=1024, delay_ms=10),
        StatusBehavior(code=503),
        TimeoutBehavior(),
        ResetBehavior(),
        DropTlsBehavior(),
        PacketLossBehavior(fraction=0.4),
        OkBehavior(),
    ]
    assert plan.windows[1].start_offset_s == 60
    assert plan.windows[1].end_offset_s == 120
    assert plan.has_packet_loss
    assert plan.span_s == 310


def test_ok_partial_arguments():
    plan = parse_plan("0,5,OK(404)\n5,5,OK(200,0)\n")
    assert plan.windows[0].behavior == OkBehavior(status=404)
    assert plan.windows[1].behavior == OkBehavior(status=200, body_bytes=0)


@pytest.mark.parametrize(
    ("text", "fragment"),
    [
        ("0,10,EXPLODE\n", "linha 1"),
        ("0,10,STATUS\n", "linha 1"),
        ("0,10,STATUS(999)\n", "linha 1"),
        ("0,10,TIMEOUT(5)\n", "linha 1"),
        ("0,10,PACKET_LOSS(1.5)\n", "linha 1"),
        ("0,10,OK(1,2,3,4)\n", "linha 1"),
        ("# ok\n0,10\n", "linha 2"),
        ("@seed abc\n", "linha 1"),
        ("@color blue\n", "linha 1"),
    ],
)
def test_parse_errors_name_the_line(text, fragment):
    with pytest.raises(FaultPlanError) as excinfo:
        parse_plan(text)
    assert fragment in str(excinfo.value)


def test_overlapping_windows_rejected():
    with pytest.raises(FaultPlanError):
        parse_plan("0,10,TIMEOUT\n5,10,RESET\n")


def test_render_is_accepted_by_parser():
    """render_plan produz texto equivalente"""
    plan = parse_plan(PLAN)
    text = render_plan(plan)
    assert "0,60,OK(200,1024,10)" in text
    assert "210,60,PACKET_LOSS(0.4)" in text
    assert parse_plan(text) == plan


def test_load_plan(tmp_path: Path):
    path = tmp_path / "plan.txt"
    path.write_text("0,1,RESET\n", encoding="utf-8")
    assert load_plan(path).windows[0].behavior == ResetBehavior()
    with pytest.raises(FileNotFoundError):
        load_plan(tmp_path / "missing.txt")
    logger.info("✅ Gramática do plano de falhas verificada")
