"""
Exceções do domínio apiq
"""


class ConfigurationError(ValueError):
    """Configuração inválida (arquivo, variáveis de ambiente ou parâmetros)"""

    pass


class IcmpPermissionError(ConfigurationError):
    """Sem privilégio para enviar ICMP; aborta a execução, nunca vira falha do endpoint"""

    pass


class MalformedRecordError(ValueError):
    """Registro ou linha de log que não respeita o formato esperado"""

    pass


class UnknownSuiteError(KeyError):
    """Cipher suite ausente da tabela de classificação"""

    def __init__(self, suite_name: str):
        super().__init__(suite_name)
        self.suite_name = suite_name

    def __str__(self) -> str:
        return f"UNKNOWN_SUITE: {self.suite_name}"


class EmptySuiteListError(ValueError):
    """Lista de suites vazia; servidor sem suites é falha de scan"""

    pass


class NoDataError(ValueError):
    """Não há registros suficientes para calcular a métrica"""

    pass


class InsufficientVantagesError(ValueError):
    """Menos pontos de medição do que a métrica exige"""

    pass


class FaultPlanError(ValueError):
    """Plano de falhas inválido"""

    pass


class NonDeterministicPlanError(FaultPlanError):
    """Plano com PACKET_LOSS sem seed não permite calcular o oráculo"""

    pass


class ScanUnreachableError(ConnectionError):
    """Endpoint TLS inalcançável; vira registro de falha de scan, nunca lista vazia"""

    pass
