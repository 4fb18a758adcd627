"""
Certificados autoassinados para o TLS do mocknet (RSA e ECDSA)
"""

import datetime
import ipaddress
import logging
from pathlib import Path
from typing import Literal

from cryptography import x509
from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import ec, rsa
from cryptography.x509.oid import NameOID

logger = logging.getLogger("apiq")

KeyType = Literal["rsa", "ecdsa"]

DEFAULT_HOSTNAMES = ("localhost", "127.0.0.1")
CERT_VALIDITY_DAYS = 30


def _private_key(key_type: KeyType):
    if key_type == "rsa":
        return rsa.generate_private_key(public_exponent=65537, key_size=2048)
    if key_type == "ecdsa":
        return ec.generate_private_key(ec.SECP256R1())
    raise ValueError(f"Tipo de chave inválido: {key_type}")


def _subject_alternative_names(hostnames: tuple[str, ...]) -> x509.SubjectAlternativeName:
    names: list[x509.GeneralName] = []
    for hostname in hostnames:
        try:
            names.append(x509.IPAddress(ipaddress.ip_address(hostname)))
        except ValueError:
            names.append(x509.DNSName(hostname))
    return x509.SubjectAlternativeName(names)


def generate_self_signed(
    key_type: KeyType = "rsa", hostnames: tuple[str, ...] = DEFAULT_HOSTNAMES
) -> tuple[bytes, bytes]:
    """Retorna (certificado PEM, chave privada PEM)"""
    key = _private_key(key_type)
    name = x509.Name([x509.NameAttribute(NameOID.COMMON_NAME, hostnames[0])])
    now = datetime.datetime.now(datetime.UTC)
    certificate = (
        x509.CertificateBuilder()
        .subject_name(name)
        .issuer_name(name)
        .public_key(key.public_key())
        .serial_number(x509.random_serial_number())
        .not_valid_before(now - datetime.timedelta(days=1))
        .not_valid_after(now + datetime.timedelta(days=CERT_VALIDITY_DAYS))
        .add_extension(_subject_alternative_names(hostnames), critical=False)
        .add_extension(x509.BasicConstraints(ca=True, path_length=None), critical=True)
        .sign(key, hashes.SHA256())
    )
    cert_pem = certificate.public_bytes(serialization.Encoding.PEM)
    key_pem = key.private_bytes(
        encoding=serialization.Encoding.PEM,
        format=serialization.PrivateFormat.TraditionalOpenSSL,
        encryption_algorithm=serialization.NoEncryption(),
    )
    return cert_pem, key_pem


def write_certificates(
    directory: str | Path, hostnames: tuple[str, ...] = DEFAULT_HOSTNAMES
) -> dict[str, tuple[Path, Path]]:
    """
    Gera um par RSA e um ECDSA em `directory`.
    Ambos são carregados no contexto do servidor para que suites ECDSA também negociem.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    pairs: dict[str, tuple[Path, Path]] = {}
    for key_type in ("rsa", "ecdsa"):
        cert_pem, key_pem = generate_self_signed(key_type, hostnames)
        cert_path = directory / f"mock_{key_type}.crt"
        key_path = directory / f"mock_{key_type}.key"
        cert_path.write_bytes(cert_pem)
        key_path.write_bytes(key_pem)
        key_path.chmod(0o600)
        pairs[key_type] = (cert_path, key_path)
    logger.debug(f"Certificados do mocknet gerados em {directory}")
    return pairs
