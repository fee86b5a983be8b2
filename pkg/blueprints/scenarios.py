import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click
from flask import Blueprint, current_app

from config.scenarios import get_builtin_registry
from extensions import current_run
from setflow.errors import ScenarioError
from setflow.runner import EXIT_SCHEMA, combine_exit_codes, resolve_targets, run_scenario

# Comandos de topo: `setflow run` e `setflow list`
scenarios_bp = Blueprint('scenarios', __name__, cli_group=None)


def _schema_error(ctx, message):
    click.echo(json.dumps({'error': message, 'code': EXIT_SCHEMA}, ensure_ascii=False), err=True)
    ctx.exit(EXIT_SCHEMA)


@scenarios_bp.cli.command('run')
@click.argument('targets', nargs=-1, required=True)
@click.option('--jobs', '-j', type=click.IntRange(min=1), default=None,
              help='Cenários executados em paralelo (padrão: JOBS da configuração).')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), default=None,
              help='Diretório dos artefatos (padrão: OUTPUT_DIR).')
@click.option('--grid', 'grid_size', type=int, default=None, help='Tamanho M da grade angular.')
@click.option('--dt', type=float, default=None, help='Passo de tempo.')
@click.pass_context
def run(ctx, targets, jobs, out_dir, grid_size, dt):
    """Executa cenários (arquivos JSON ou nomes embutidos) e grava CSV + relatório JSON."""
    cfg = current_app.config
    try:
        scenarios = resolve_targets(targets, grid_size=grid_size, dt=dt,
                                    default_grid_size=cfg['GRID_SIZE'], default_dt=cfg['DT'],
                                    default_seed=cfg['DEFAULT_SEED'], registry=get_builtin_registry())
    except ScenarioError as exc:
        current_app.logger.error('[CLI] cenário inválido: %s', exc)
        _schema_error(ctx, str(exc))
        return

    out = Path(out_dir or cfg['OUTPUT_DIR'])
    quadrature = cfg['QUADRATURE']
    jobs = jobs or cfg['JOBS']

    def worker(scenario):
        token = current_run.set(scenario.name)
        try:
            return run_scenario(scenario, out, quadrature)
        finally:
            current_run.reset(token)

    if jobs > 1 and len(scenarios) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, scenarios))
    else:
        results = [worker(s) for s in scenarios]

    for result in results:
        passed = sum(1 for c in result.checks if c.passed)
        click.echo(f'{result.name}: {result.status} ({passed}/{len(result.checks)} verificações) '
                   f'-> {result.report_path}')
        for check in result.checks:
            if not check.passed:
                click.echo(f'  falhou: {check.name}' + (f' ({check.error})' if check.error else ''))
        if result.error:
            click.echo(f'  erro: {result.error}')

    ctx.exit(combine_exit_codes(r.exit_code for r in results))


@scenarios_bp.cli.command('list')
def list_builtins():
    """Lista os cenários embutidos com uma linha de descrição."""
    for builtin in get_builtin_registry().list_builtins():
        variants = [n for n in builtin.variant_names if n != builtin.name]
        suffix = f" [variantes: {', '.join(variants)}]" if variants else ''
        click.echo(f'{builtin.name}\t{builtin.example}: {builtin.description}{suffix}')
