"""
Score de segurança do servidor: soma das suites ponderada por 1/rank
"""

from collections.abc import Sequence
from fractions import Fraction

from config.constants import KEY_LENGTH_MODIFIER
from models.cipher import CipherSuiteInfo
from models.errors import EmptySuiteListError


def score_server(suites: Sequence[CipherSuiteInfo | float]) -> float:
    """
    S_S = sum(score_i / rank_i), rank começando em 1 (ordem de preferência do servidor).

    Aceita CipherSuiteInfo ou scores já calculados.

    Raises:
        EmptySuiteListError: lista vazia (servidor sem suites é falha de scan)
    """
    if not suites:
        raise EmptySuiteListError("Lista de suites vazia")
    total = 0.0
    for rank, suite in enumerate(suites, start=1):
        score = suite.score if isinstance(suite, CipherSuiteInfo) else float(suite)
        total += score / rank
    return total


def harmonic(n: int) -> float:
    return float(sum(Fraction(1, k) for k in range(1, n + 1)))


def score_bounds(n: int) -> tuple[float, float]:
    """Limites de S_S para n suites: [-H(n), H(n) * 1.1]"""
    if n < 1:
        raise EmptySuiteListError("score_bounds exige n >= 1")
    h = harmonic(n)
    return -h, h * (1 + KEY_LENGTH_MODIFIER)
