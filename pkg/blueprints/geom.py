import json
import re

import click
from flask import Blueprint, current_app

from setflow import convex_core as cc
from setflow.errors import SetflowError
from setflow.reports import format_float
from setflow.scenarios import parse_body_spec

# Grupo `setflow geom`: funcionais de corpos dados pela mini-linguagem (ball:1, seg:4, rot90(...))
geom_bp = Blueprint('geom', __name__)

_INTEGRAL = re.compile(r'-?\d+')

quadrature_option = click.option('--quadrature', type=click.Choice(cc.QUADRATURES), default=None,
                                 help='Quadratura da área mista (padrão: QUADRATURE).')
grid_option = click.option('--grid', 'grid_size', type=int, default=None, help='Tamanho M da grade angular.')


def format_value(value) -> str:
    """``%.12g``; valores inteiros ganham ``.0`` (8 -> 8.0)."""
    text = format_float(value)
    return text + '.0' if _INTEGRAL.fullmatch(text) else text


def _settings(grid_size, quadrature):
    cfg = current_app.config
    return grid_size or cfg['GRID_SIZE'], quadrature or cfg['QUADRATURE']


def _bodies(ctx, grid_size, *specs):
    try:
        return [parse_body_spec(spec, grid_size) for spec in specs]
    except (SetflowError, ValueError) as exc:
        click.echo(json.dumps({'error': str(exc), 'code': 2}, ensure_ascii=False), err=True)
        ctx.exit(2)


@geom_bp.cli.command('area')
@click.argument('body')
@grid_option
@quadrature_option
@click.pass_context
def area(ctx, body, grid_size, quadrature):
    """Área V[u]."""
    grid_size, quadrature = _settings(grid_size, quadrature)
    (u,) = _bodies(ctx, grid_size, body)
    click.echo(format_value(cc.area(u, quadrature)))


@geom_bp.cli.command('perimeter')
@click.argument('body')
@grid_option
@quadrature_option
@click.pass_context
def perimeter(ctx, body, grid_size, quadrature):
    """Perímetro (largura média vezes π)."""
    grid_size, quadrature = _settings(grid_size, quadrature)
    (u,) = _bodies(ctx, grid_size, body)
    click.echo(format_value(cc.perimeter(u, quadrature)))


@geom_bp.cli.command('mixed')
@click.argument('first')
@click.argument('second')
@click.option('--report', is_flag=True, help='Mostra também V[u], V[v] e a folga de Brunn–Minkowski.')
@grid_option
@quadrature_option
@click.pass_context
def mixed(ctx, first, second, report, grid_size, quadrature):
    """Área mista V[u, v]."""
    grid_size, quadrature = _settings(grid_size, quadrature)
    u, v = _bodies(ctx, grid_size, first, second)
    if not report:
        click.echo(format_value(cc.mixed_area(u, v, quadrature)))
        return
    result = cc.mixed_area_report(u, v, quadrature)
    for key, value in result.to_dict().items():
        click.echo(f'{key}={format_value(value)}')


@geom_bp.cli.command('hausdorff')
@click.argument('first')
@click.argument('second')
@grid_option
@click.pass_context
def hausdorff(ctx, first, second, grid_size):
    """Distância de Hausdorff d_H(u, v)."""
    grid_size, _ = _settings(grid_size, None)
    u, v = _bodies(ctx, grid_size, first, second)
    click.echo(format_value(cc.hausdorff_distance(u, v)))


@geom_bp.cli.command('hukuhara')
@click.argument('first')
@click.argument('second')
@grid_option
@quadrature_option
@click.pass_context
def hukuhara(ctx, first, second, grid_size, quadrature):
    """Diferença de Hukuhara u ⊖ v, ou "no difference"."""
    grid_size, quadrature = _settings(grid_size, quadrature)
    u, v = _bodies(ctx, grid_size, first, second)
    w = cc.hukuhara_difference(u, v)
    if w is cc.NO_DIFFERENCE:
        click.echo(str(w))
        return
    summary = cc.body_summary(w, quadrature)
    click.echo(' '.join(f'{key}={format_value(summary[key])}' for key in ('area', 'perimeter', 'norm')))


@geom_bp.cli.command('steiner')
@click.argument('first')
@click.argument('second')
@click.option('--rho', type=float, default=1.0, show_default=True, help='Fator ϱ em u + ϱv.')
@click.option('--fit', is_flag=True, help='Ajusta o polinômio de Steiner por amostras de ϱ.')
@grid_option
@quadrature_option
@click.pass_context
def steiner(ctx, first, second, rho, fit, grid_size, quadrature):
    """Área de u + ϱv pelo polinômio de Steiner."""
    grid_size, quadrature = _settings(grid_size, quadrature)
    u, v = _bodies(ctx, grid_size, first, second)
    if rho < 0:
        click.echo(json.dumps({'error': 'ϱ deve ser >= 0', 'code': 2}, ensure_ascii=False), err=True)
        ctx.exit(2)
    click.echo(format_value(cc.steiner_area(u, v, rho, quadrature)))
    if fit:
        c0, c1, c2 = cc.steiner_fit(u, v, [0.0, 0.5, 1.0, 1.5, 2.0], quadrature)
        current_app.logger.debug('[Geom] ajuste de Steiner: %s %s %s', c0, c1, c2)
        click.echo(f'c0={format_value(c0)} c1={format_value(c1)} c2={format_value(c2)}')
