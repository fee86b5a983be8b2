import ast
import math
from pathlib import Path

import numpy as np
import pytest

import setflow
from config.scenarios import get_builtin_registry
from setflow import convex_core as cc
from setflow import semiflow as sf
from setflow.errors import InvalidBodyError, ScenarioError
from setflow.runner import comparison_system, resolve_targets, validate_scenario
from setflow.scenarios import CheckKind, build_body, parse_body_spec, parse_scenario

M = 64
APPLICATION_PACKAGES = ('app', 'config', 'blueprints', 'extensions', 'scripts')


def _minimal(**overrides):
    data = {
        'schema': 1,
        'name': 'minimal',
        'horizon': 1.0,
        'initial_body': 'ball:1',
        'params': {'A': [[-1.0, 0.0], [0.0, -1.0]]},
    }
    data.update(overrides)
    return data


class TestBodySpecs:

    def test_basic_shapes(self):
        assert np.allclose(parse_body_spec('ball:2', M).values, 2.0)
        assert cc.norm(parse_body_spec('ball:1@0,1', M)) == pytest.approx(2.0)
        assert cc.area(parse_body_spec('square:2', M)) == pytest.approx(4.0)
        assert cc.area(parse_body_spec('rect:2x3', M)) == pytest.approx(6.0)
        assert cc.perimeter(parse_body_spec('seg:4', M)) == pytest.approx(8.0)
        assert cc.area(parse_body_spec('point:1,2', M)) == 0.0

    def test_polygon_and_combinators(self):
        triangle = parse_body_spec('poly:0,0;2,0;0,2', M)
        assert cc.area(triangle) == pytest.approx(2.0, rel=1e-2)
        assert cc.area(parse_body_spec('scale(square:1,3)', M)) == pytest.approx(9.0)
        seg = parse_body_spec('seg:4', M)
        assert cc.mixed_area(seg, parse_body_spec('rot90(seg:4)', M)) == pytest.approx(8.0)

    @pytest.mark.parametrize('spec', ['', 'ball', 'blob:1', 'ball:x', 'rect:2', 'point:1', 'scale(ball:1)'])
    def test_invalid_specs(self, spec):
        with pytest.raises(InvalidBodyError):
            parse_body_spec(spec, M)

    def test_json_bodies(self):
        assert np.allclose(build_body({'type': 'ball', 'radius': 0.5}, M).values, 0.5)
        rect = build_body({'type': 'rectangle', 'width': 2.0, 'height': 1.0}, M)
        assert cc.area(rect) == pytest.approx(2.0)
        values = build_body({'type': 'values', 'grid_size': 32, 'values': [1.0] * 32}, M)
        assert values.grid_size == M
        with pytest.raises(InvalidBodyError):
            build_body({'radius': 1.0}, M)


class TestParseScenario:

    def test_defaults(self):
        scenario = parse_scenario(_minimal(), default_grid_size=M, default_dt=0.05, default_seed=7)
        assert scenario.grid_size == M
        assert scenario.dt == 0.05
        assert scenario.seed == 7
        assert isinstance(scenario.params.source, sf.ZeroSource)
        assert scenario.outputs.csv == 'minimal.csv'
        assert scenario.outputs.report == 'minimal.json'
        assert scenario.checks == []

    def test_explicit_overrides_win_over_file(self):
        scenario = parse_scenario(_minimal(grid_size=32, dt=0.1), grid_size=M, dt=0.01)
        assert scenario.grid_size == M
        assert scenario.dt == 0.01

    def test_checks_and_tracking(self):
        data = _minimal(track={'mixed': {'B': [[0.0, 1.0], [0.0, 0.0]], 'k': 2}, 'hausdorff_to': 'ball:1'},
                        checks=[{'kind': 'certificate', 'name': 'cubic_threshold'},
                                {'kind': 'final_distance', 'max': 0.1, 'label': 'perto'}])
        scenario = parse_scenario(data, default_grid_size=M)
        assert [c.kind for c in scenario.checks] == [CheckKind.CERTIFICATE, CheckKind.FINAL_DISTANCE]
        assert [c.name for c in scenario.checks] == ['certificate:cubic_threshold', 'perto']
        assert list(scenario.functionals()) == ['V', 'perimeter', 'W0', 'W1', 'dH_ref']

    @pytest.mark.parametrize('overrides', [
        {'schema': 2},
        {'horizon': -1.0},
        {'dt': 0.0},
        {'name': 'com espaço'},
        {'params': {'phi': 1.0}},
        {'params': {'A': [[1.0, 2.0]]}},
        {'initial_body': 'ball:-1'},
        {'checks': [{'kind': 'mystery'}]},
        {'checks': [{'kind': 'certificate'}]},
        {'track': {'mixed': {'B': [[1.0, 0.0], [0.0, 1.0]], 'k': 0}}},
        {'grid_size': 15},
        {'extra': True},
    ])
    def test_schema_violations(self, overrides):
        with pytest.raises(ScenarioError):
            parse_scenario(_minimal(**overrides), default_grid_size=M)

    def test_missing_required_field(self):
        data = _minimal()
        del data['horizon']
        with pytest.raises(ScenarioError, match='horizon'):
            parse_scenario(data)


class TestValidation:

    def test_check_requiring_comparison(self):
        scenario = parse_scenario(_minimal(checks=[{'kind': 'wazewski'}]), default_grid_size=M)
        with pytest.raises(ScenarioError, match='comparison'):
            validate_scenario(scenario)

    def test_final_distance_requires_reference(self):
        scenario = parse_scenario(_minimal(checks=[{'kind': 'final_distance'}]), default_grid_size=M)
        with pytest.raises(ScenarioError):
            validate_scenario(scenario)

    def test_unknown_certificate_and_formula(self):
        for check in ({'kind': 'certificate', 'name': 'nope'}, {'kind': 'closed_form', 'formula': 'nope'}):
            scenario = parse_scenario(_minimal(checks=[check]), default_grid_size=M)
            with pytest.raises(ScenarioError):
                validate_scenario(scenario)

    def test_comparison_system_takes_parameters_from_params(self):
        data = _minimal(params={'A': [[-1.0, 0.0], [0.0, -1.0]], 'phi': 1.0,
                                'source': {'kind': 'ball_source', 'psi': 1.0}},
                        comparison={'system': 'example55'})
        system = comparison_system(parse_scenario(data, default_grid_size=M))
        # ξ' = -2ξ + 2√π√ξ em ξ = π
        assert system.rhs(0.0, np.array([math.pi]))[0] == pytest.approx(0.0, abs=1e-12)

    def test_unknown_comparison_system(self):
        scenario = parse_scenario(_minimal(comparison={'system': 'lorenz'}), default_grid_size=M)
        with pytest.raises(ScenarioError):
            comparison_system(scenario)


class TestBuiltinRegistry:

    def test_names_include_variants(self):
        registry = get_builtin_registry()
        names = registry.names()
        assert names[:2] == ['ex51', 'ex52']
        assert {'ex53_k2', 'ex53_k4', 'ex53_k4_instability'} <= set(names)
        assert 'ex53_k4' in registry

    def test_every_builtin_is_valid(self):
        registry = get_builtin_registry()
        targets = [b.name for b in registry.list_builtins()]
        scenarios = resolve_targets(targets, default_grid_size=M, registry=registry)
        assert len(scenarios) == sum(len(b.variants) for b in registry.list_builtins())
        assert all(s.example for s in scenarios)

    def test_get_returns_copies(self):
        registry = get_builtin_registry()
        first = registry.get('ex51')[0]
        first['horizon'] = 99.0
        assert registry.get('ex51')[0]['horizon'] == 10.0

    def test_builtin_names_need_a_registry(self):
        with pytest.raises(ScenarioError, match='ex51'):
            resolve_targets(['ex51'], default_grid_size=M)


def test_library_does_not_import_application_packages():
    package = Path(setflow.__file__).resolve().parent
    offenders = []
    # __main__ é o ponto de entrada da CLI e sobe para a aplicação
    for path in sorted(p for p in package.glob('*.py') if p.name != '__main__.py'):
        tree = ast.parse(path.read_text(encoding='utf-8'))
        for node in ast.walk(tree):
            if isinstance(node, ast.ImportFrom) and node.module:
                modules = [node.module]
            elif isinstance(node, ast.Import):
                modules = [alias.name for alias in node.names]
            else:
                continue
            offenders.extend(f'{path.name}: {m}' for m in modules if m.split('.')[0] in APPLICATION_PACKAGES)
    assert offenders == []
