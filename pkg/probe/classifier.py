"""
Classificação de resultados de medição na taxonomia de disponibilidade
"""

from models.errors import MalformedRecordError
from models.probe_record import FailureKind, OutcomeClass, ProbeOutcome

_FAILURE_CLASSES = {
    FailureKind.TIMEOUT: OutcomeClass.NO_RESPONSE,
    FailureKind.DISCONNECT: OutcomeClass.NO_RESPONSE,
    FailureKind.NO_ECHO: OutcomeClass.NO_RESPONSE,
    FailureKind.DNS: OutcomeClass.DNS_FAILURE,
    FailureKind.CONNECT: OutcomeClass.CONNECT_FAILURE,
    FailureKind.TLS: OutcomeClass.TLS_FAILURE,
}


def classify_outcome(
    status_code: int | None = None, failure_kind: FailureKind | None = None, detail: str = ""
) -> ProbeOutcome:
    """
    Função pura e total: código de status OU tipo de falha -> ProbeOutcome.

    Raises:
        MalformedRecordError: se ambos/nenhum forem informados ou o código estiver fora de 100-599
    """
    if (status_code is None) == (failure_kind is None):
        raise MalformedRecordError("Informe exatamente um entre status_code e failure_kind")

    if failure_kind is not None:
        return ProbeOutcome(outcome_class=_FAILURE_CLASSES[FailureKind(failure_kind)], detail=detail)

    if isinstance(status_code, bool) or not isinstance(status_code, int) or not 100 <= status_code <= 599:
        raise MalformedRecordError(f"status_code fora de 100-599: {status_code!r}")

    if 200 <= status_code <= 399:
        outcome_class = OutcomeClass.SUCCESS
    elif 400 <= status_code <= 499:
        outcome_class = OutcomeClass.CLIENT_ERROR
    elif 500 <= status_code <= 599:
        outcome_class = OutcomeClass.SERVER_ERROR
    else:
        # 1xx final não é resposta utilizável
        return ProbeOutcome(outcome_class=OutcomeClass.NO_RESPONSE, detail=detail or f"informational {status_code}")
    return ProbeOutcome(outcome_class=outcome_class, status_code=status_code, detail=detail)
