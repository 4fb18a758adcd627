"""
Atalho para `python main.py <subcomando>`; equivalente ao executável `apiq`
"""

import sys

from cli.main import main

if __name__ == "__main__":
    sys.exit(main())
