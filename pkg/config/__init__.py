"""
Configuração, constantes e logging do apiq
"""
