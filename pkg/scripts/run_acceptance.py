import sys
import os
from pathlib import Path

# Garantir que o diretório raiz do projeto esteja no PYTHONPATH
ROOT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT_DIR not in sys.path:
    sys.path.insert(0, ROOT_DIR)

from app import create_app
from config import AcceptanceConfig
from config.scenarios import get_builtin_registry
from extensions import current_run
from setflow.reports import write_json_report
from setflow.runner import combine_exit_codes, resolve_targets, run_scenario


def run_acceptance(out_dir) -> dict:
    """Executa todos os cenários embutidos na discretização de aceitação.

    - M=512, dt dos próprios cenários, quadratura poligonal.
    - Escreve ``acceptance_summary.json`` em ``out_dir`` com o status de cada cenário.
    """
    app = create_app(AcceptanceConfig)
    cfg = app.config
    out_dir = Path(out_dir)
    registry = get_builtin_registry()
    names = [b.name for b in registry.list_builtins()]
    scenarios = resolve_targets(names, default_grid_size=cfg['GRID_SIZE'], default_dt=cfg['DT'],
                                default_seed=cfg['DEFAULT_SEED'], registry=registry)
    summary = {'grid_size': cfg['GRID_SIZE'], 'quadrature': cfg['QUADRATURE'], 'scenarios': {}}
    results = []
    for scenario in scenarios:
        token = current_run.set(scenario.name)
        try:
            result = run_scenario(scenario, out_dir, cfg['QUADRATURE'])
        finally:
            current_run.reset(token)
        results.append(result)
        summary['scenarios'][scenario.name] = {
            'status': result.status,
            'exit_code': result.exit_code,
            'failed_checks': [c.name for c in result.checks if not c.passed],
        }
    summary['exit_code'] = combine_exit_codes(r.exit_code for r in results)
    write_json_report(out_dir / 'acceptance_summary.json', summary)
    return summary


if __name__ == '__main__':
    # CLI: python scripts/run_acceptance.py [diretório de saída]
    out = sys.argv[1] if len(sys.argv) > 1 else 'out/acceptance'
    summary = run_acceptance(out)
    print('[Aceitação] Saída:', out)
    for name, row in summary['scenarios'].items():
        print(f'  - {name}: {row["status"]}' + (f' {row["failed_checks"]}' if row['failed_checks'] else ''))
    sys.exit(summary['exit_code'])
