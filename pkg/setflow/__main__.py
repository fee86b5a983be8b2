"""``python -m setflow ...`` equivale a ``python app.py ...``."""

import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from app import cli  # noqa: E402

if __name__ == '__main__':
    cli(prog_name='setflow')
