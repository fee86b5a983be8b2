import json

import pytest

from config import AcceptanceConfig
from config.scenarios import get_builtin_registry
from scripts.run_acceptance import run_acceptance
from setflow import convex_core as cc
from setflow.runner import resolve_targets, run_scenario


def test_builtin_runs_on_coarse_grid(runner, tmp_path):
    out = tmp_path / 'out'
    result = runner.invoke(args=['run', 'ex55', '--grid', '64', '--out', str(out)])
    assert result.exit_code == 0, result.output
    report = json.loads((out / 'ex55.json').read_text(encoding='utf-8'))
    assert report['example'] == 'bola pequena instável'
    assert report['comparison']['name'] == 'example55'
    assert all(c['passed'] for c in report['checks'])


@pytest.mark.parametrize('quadrature', cc.QUADRATURES)
@pytest.mark.parametrize('name', ['ex53_k2', 'ex53_k4'])
def test_closed_forms_hold_under_both_quadratures(tmp_path, name, quadrature):
    # as fórmulas usam W_i(0) medidos com a mesma quadratura
    scenario, = resolve_targets([name], grid_size=64, registry=get_builtin_registry())
    result = run_scenario(scenario, tmp_path, quadrature)
    closed = [c for c in result.checks if c.kind == 'closed_form']
    assert closed
    for check in closed:
        assert check.passed, check.details
        assert check.details['max_rel_error'] <= check.details['rel_tol']


def test_acceptance_pins_the_polygonal_rule():
    assert AcceptanceConfig.QUADRATURE == 'polygonal'
    assert AcceptanceConfig.GRID_SIZE == 512
    # quadrado com normais na grade: exato na poligonal, erro O(1/M) na espectral
    square = cc.make_rectangle(1.0, 1.0, grid_size=128)
    assert cc.area(square, 'polygonal') == pytest.approx(1.0, abs=1e-12)
    assert abs(cc.area(square, 'spectral') - 1.0) > 1e-3


@pytest.mark.slow
def test_all_builtins_pass_at_acceptance_discretization(tmp_path):
    summary = run_acceptance(tmp_path)
    failing = {name: row for name, row in summary['scenarios'].items() if row['exit_code'] != 0}
    assert failing == {}
    assert summary['exit_code'] == 0
    assert summary['grid_size'] == 512
    assert summary['quadrature'] == 'polygonal'
    assert set(summary['scenarios']) == {'ex51', 'ex52', 'ex53_k2', 'ex53_k4', 'ex53_k4_instability', 'ex54', 'ex55'}
    assert (tmp_path / 'acceptance_summary.json').exists()
