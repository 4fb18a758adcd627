"""
Interface de linha de comando do apiq
"""

from .main import build_parser, main

__all__ = ["build_parser", "main"]
