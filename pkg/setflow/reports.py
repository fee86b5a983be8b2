"""Escrita dos artefatos de execução: CSV da trajetória e relatório JSON."""

import csv
import json
import logging
from pathlib import Path

from setflow.comparison import to_jsonable

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.12g'


def format_float(value) -> str:
    return FLOAT_FORMAT % float(value)


def write_trajectory_csv(path, trajectory) -> Path:
    """Cabeçalho ``t,V,perimeter,W0..,dH_ref``; vírgula, LF, ``%.12g``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8', newline='') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(trajectory.columns())
        for row in trajectory.to_rows():
            writer.writerow([format_float(x) for x in row])
    logger.debug('[Reports] %s: %d linhas', path.name, len(trajectory))
    return path


def dumps_report(report) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def write_json_report(path, report) -> Path:
    """UTF-8, chaves ordenadas; sem carimbos de tempo para manter a saída determinística."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_report(report), encoding='utf-8')
    return path
