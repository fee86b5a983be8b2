import json
import math
from pathlib import Path

import pytest

from config import TestingConfig
from setflow.errors import IntegrationError

SCENARIO_DIR = Path(__file__).resolve().parent.parent / 'scenarios'
REACH_BALL = SCENARIO_DIR / 'reach_ball.json'
ESCAPE_BALL = SCENARIO_DIR / 'escape_ball.json'


def _write_scenario(tmp_path, **overrides):
    data = json.loads(REACH_BALL.read_text(encoding='utf-8'))
    data.update(overrides)
    path = tmp_path / f"{data['name']}.json"
    path.write_text(json.dumps(data), encoding='utf-8')
    return path


def _report(out_dir, name):
    return json.loads((Path(out_dir) / f'{name}.json').read_text(encoding='utf-8'))


class TestListCommand:

    def test_lists_every_builtin(self, runner):
        result = runner.invoke(args=['list'])
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert [line.split('\t')[0] for line in lines] == ['ex51', 'ex52', 'ex53', 'ex54', 'ex55']
        assert 'ex53_k4_instability' in lines[2]


class TestGeomCommands:

    def test_area_of_unit_ball(self, runner):
        result = runner.invoke(args=['geom', 'area', 'ball:1'])
        assert result.exit_code == 0
        M = TestingConfig.GRID_SIZE
        assert float(result.output) == pytest.approx(M * math.tan(math.pi / M), rel=1e-11)

    def test_area_with_spectral_quadrature(self, runner):
        result = runner.invoke(args=['geom', 'area', 'ball:1', '--quadrature', 'spectral'])
        assert float(result.output) == pytest.approx(math.pi, rel=1e-11)

    def test_mixed_area_of_orthogonal_segments(self, runner):
        result = runner.invoke(args=['geom', 'mixed', 'seg:4', 'rot90(seg:4)'])
        assert result.exit_code == 0
        assert result.output.strip() == '8.0'

    def test_mixed_report_lists_slack(self, runner):
        result = runner.invoke(args=['geom', 'mixed', 'square:1', 'square:1', '--report'])
        assert result.exit_code == 0
        values = dict(line.split('=') for line in result.output.strip().splitlines())
        assert float(values['V_uv']) == pytest.approx(1.0)
        assert float(values['bm_slack']) == pytest.approx(0.0, abs=1e-9)

    def test_hausdorff_between_balls(self, runner):
        result = runner.invoke(args=['geom', 'hausdorff', 'ball:1', 'ball:2'])
        assert result.output.strip() == '1.0'

    def test_hukuhara_without_difference(self, runner):
        result = runner.invoke(args=['geom', 'hukuhara', 'ball:1', 'ball:2'])
        assert result.exit_code == 0
        assert result.output.strip() == 'no difference'

    def test_hukuhara_of_nested_squares(self, runner):
        result = runner.invoke(args=['geom', 'hukuhara', 'square:3', 'square:1'])
        assert result.exit_code == 0
        assert result.output.strip().startswith('area=4.0 perimeter=8.0')

    def test_steiner_area(self, runner):
        result = runner.invoke(args=['geom', 'steiner', 'square:1', 'square:1', '--rho', '2'])
        assert result.output.strip() == '9.0'

    def test_invalid_body_is_schema_error(self, runner):
        result = runner.invoke(args=['geom', 'area', 'blob:3'])
        assert result.exit_code == 2
        assert '"code": 2' in result.output


class TestRunCommand:

    def test_reach_set_scenario_passes(self, runner, tmp_path):
        out = tmp_path / 'run'
        result = runner.invoke(args=['run', str(REACH_BALL), '--out', str(out)])
        assert result.exit_code == 0, result.output
        assert 'reach_ball: pass (2/2' in result.output

        csv_text = (out / 'reach_ball.csv').read_text(encoding='utf-8')
        assert csv_text.splitlines()[0] == 't,V,perimeter,dH_ref'
        assert '\r' not in csv_text
        report = _report(out, 'reach_ball')
        assert report['status'] == 'pass'
        assert report['trajectory']['completed'] is True
        assert [c['passed'] for c in report['checks']] == [True, True]

    def test_failed_check_exits_with_one(self, runner, tmp_path):
        path = _write_scenario(tmp_path, name='reach_strict',
                               checks=[{'kind': 'final_distance', 'max': 1e-9}])
        result = runner.invoke(args=['run', str(path), '--out', str(tmp_path / 'out')])
        assert result.exit_code == 1
        assert 'falhou: final_distance' in result.output
        assert _report(tmp_path / 'out', 'reach_strict')['status'] == 'fail'

    def test_malformed_json_is_schema_error(self, runner, tmp_path):
        path = tmp_path / 'broken.json'
        path.write_text('{"schema": 1, "name": ', encoding='utf-8')
        result = runner.invoke(args=['run', str(path), '--out', str(tmp_path / 'out')])
        assert result.exit_code == 2
        assert '"code": 2' in result.output
        assert not (tmp_path / 'out').exists()

    def test_unknown_field_is_schema_error(self, runner, tmp_path):
        path = _write_scenario(tmp_path, name='reach_extra', colour='blue')
        result = runner.invoke(args=['run', str(path), '--out', str(tmp_path / 'out')])
        assert result.exit_code == 2
        assert 'colour' in result.output

    def test_unknown_target_is_schema_error(self, runner, tmp_path):
        result = runner.invoke(args=['run', 'ex99', '--out', str(tmp_path)])
        assert result.exit_code == 2

    def test_finite_escape_still_writes_report(self, runner, tmp_path):
        out = tmp_path / 'out'
        result = runner.invoke(args=['run', str(ESCAPE_BALL), '--out', str(out)])
        assert result.exit_code == 3
        report = _report(out, 'escape_ball')
        assert report['status'] == 'blowup'
        assert report['error']
        assert report['trajectory']['completed'] is False
        assert 13.0 < report['trajectory']['escape_time'] < 14.5
        assert (out / 'escape_ball.csv').exists()

    def test_exit_code_is_worst_over_scenarios(self, runner, tmp_path):
        out = tmp_path / 'out'
        result = runner.invoke(args=['run', str(REACH_BALL), str(ESCAPE_BALL), '--out', str(out), '--jobs', '2'])
        assert result.exit_code == 3
        assert (out / 'reach_ball.json').exists()
        assert (out / 'escape_ball.json').exists()

    def test_reports_are_byte_identical_across_runs(self, runner, tmp_path):
        first, second = tmp_path / 'a', tmp_path / 'b'
        assert runner.invoke(args=['run', str(REACH_BALL), '--out', str(first)]).exit_code == 0
        assert runner.invoke(args=['run', str(REACH_BALL), '--out', str(second)]).exit_code == 0
        for name in ('reach_ball.json', 'reach_ball.csv'):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_grid_option_overrides_config(self, runner, tmp_path):
        out = tmp_path / 'out'
        result = runner.invoke(args=['run', str(REACH_BALL), '--out', str(out), '--grid', '64'])
        assert result.exit_code == 0
        assert _report(out, 'reach_ball')['grid_size'] == 64

    def test_duplicate_targets_are_rejected(self, runner, tmp_path):
        result = runner.invoke(args=['run', str(REACH_BALL), str(REACH_BALL), '--out', str(tmp_path)])
        assert result.exit_code == 2

    def test_non_finite_integration_writes_report_without_csv(self, runner, tmp_path, mocker):
        mocker.patch('setflow.semiflow.evolve', side_effect=IntegrationError('valores não finitos em t=0.5'))
        out = tmp_path / 'out'
        result = runner.invoke(args=['run', str(REACH_BALL), '--out', str(out)])
        assert result.exit_code == 3
        report = _report(out, 'reach_ball')
        assert report['status'] == 'blowup'
        assert report['trajectory'] is None
        assert report['checks'] == []
        assert not (out / 'reach_ball.csv').exists()
