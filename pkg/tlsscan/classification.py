"""
Tabela de classificação de cipher suites e score por suite (baseScore + keyLengthModifier)
"""

import csv
import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from config.constants import KEY_LENGTH_MODIFIER, STRONG_CIPHER_BITS
from models.cipher import CipherSuiteInfo, KeyExchange
from models.errors import UnknownSuiteError

logger = logging.getLogger("apiq")

DEFAULT_SUITE_TABLE = Path(__file__).resolve().parent.parent / "config" / "cipher_suites.csv"

WEAK_CIPHER_FAMILIES = frozenset({"RC4", "DES", "3DES", "NULL", "RC2"})
WEAK_MACS = frozenset({"MD5"})
_EPHEMERAL = (KeyExchange.ECDHE, KeyExchange.DHE)


@dataclass(frozen=True)
class SuiteComponents:
    name: str
    key_exchange: KeyExchange
    cipher_bits: int
    cipher_family: str
    mac: str

    @property
    def is_export(self) -> bool:
        return self.name.upper().startswith("EXP")


def base_score(components: SuiteComponents) -> int:
    """
    Fraqueza domina, depois forward secrecy:
    -1 para RC4/DES/3DES/NULL/RC2, exportação ou MAC MD5; 0 sem PFS; 1 com troca efêmera
    """
    if (
        components.cipher_family.upper() in WEAK_CIPHER_FAMILIES
        or components.mac.upper() in WEAK_MACS
        or components.is_export
    ):
        return -1
    if components.key_exchange in _EPHEMERAL:
        return 1
    return 0


def key_length_modifier(components: SuiteComponents) -> float:
    # aplicado também a suites fracas
    return KEY_LENGTH_MODIFIER if components.cipher_bits >= STRONG_CIPHER_BITS else 0.0


class SuiteTable:
    """
    Mapeamento nome -> componentes, carregado de um arquivo CSV.
    Suites novas são linhas novas no arquivo, não código.
    """

    def __init__(self, components: dict[str, SuiteComponents], source: Path | None = None):
        self._components = components
        self.source = source

    @classmethod
    def load(cls, path: str | Path = DEFAULT_SUITE_TABLE) -> "SuiteTable":
        """
        Lê o arquivo `name,key_exchange,cipher_bits,cipher_family,mac` (comentários com #).

        Raises:
            ValueError: linha com número de campos ou valores inválidos
        """
        path = Path(path)
        components: dict[str, SuiteComponents] = {}
        with open(path, encoding="utf-8", newline="") as f:
            rows = (line for line in f if line.strip() and not line.lstrip().startswith("#"))
            for line_number, row in enumerate(csv.reader(rows), start=1):
                if len(row) != 5:
                    raise ValueError(f"{path}: linha {line_number} deve ter 5 campos, tem {len(row)}")
                name, exchange, bits, family, mac = (value.strip() for value in row)
                try:
                    entry = SuiteComponents(name, KeyExchange(exchange), int(bits), family, mac)
                except ValueError as e:
                    raise ValueError(f"{path}: linha {line_number} inválida ({name}): {str(e)}")
                if name in components:
                    logger.warning(f"⚠️ Suite repetida na tabela, mantendo a última: {name}")
                components[name] = entry
        logger.debug(f"Tabela de suites carregada: {len(components)} entradas de {path}")
        return cls(components, source=path)

    def __contains__(self, name: str) -> bool:
        return name in self._components

    def __len__(self) -> int:
        return len(self._components)

    @property
    def names(self) -> list[str]:
        return sorted(self._components)

    def components(self, name: str) -> SuiteComponents:
        try:
            return self._components[name]
        except KeyError:
            raise UnknownSuiteError(name) from None

    def classify(self, name: str) -> CipherSuiteInfo:
        """
        Raises:
            UnknownSuiteError: suite fora da tabela (nunca pontuada como 0)
        """
        parts = self.components(name)
        return CipherSuiteInfo(
            name=parts.name,
            key_exchange=parts.key_exchange,
            cipher_family=parts.cipher_family,
            cipher_bits=parts.cipher_bits,
            mac=parts.mac,
            base_score=base_score(parts),
            key_length_modifier=key_length_modifier(parts),
        )


@lru_cache(maxsize=8)
def _cached_table(path: Path) -> SuiteTable:
    return SuiteTable.load(path)


def load_suite_table(path: str | Path | None = None) -> SuiteTable:
    """Tabela padrão (ou alternativa), carregada uma única vez por caminho"""
    return _cached_table(Path(path).resolve() if path else DEFAULT_SUITE_TABLE)


def classify_suite(name: str, table: SuiteTable | None = None) -> CipherSuiteInfo:
    return (table or load_suite_table()).classify(name)


def score_suite(name: str, table: SuiteTable | None = None) -> float:
    """S_CS de uma suite pelo nome OpenSSL"""
    return classify_suite(name, table).score
