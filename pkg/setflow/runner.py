"""
Execução de cenários: evolve → verificações → CSV + relatório JSON.

Códigos de saída: 0 sucesso, 1 verificação falhou, 2 cenário fora do esquema,
3 estouro na integração (relatório escrito com o diagnóstico).
"""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np

from setflow import certificates as cert
from setflow import comparison as cmp
from setflow import convex_core as cc
from setflow import semiflow as sf
from setflow.errors import FiniteEscapeError, IntegrationError, ScenarioError, SetflowError
from setflow.reports import write_json_report, write_trajectory_csv
from setflow.scenarios import (CheckKind, CheckSpec, Scenario, ScenarioRegistry, build_body, load_scenario,
                               parse_scenario)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_SCHEMA = 2
EXIT_BLOWUP = 3

COMPARISON_SYSTEMS = ('example52', 'mixed_area', 'example54', 'example55', 'linear')
NEEDS_SYSTEM = (CheckKind.BOUND_CHECK, CheckKind.PRACTICAL, CheckKind.XI0_STABILITY, CheckKind.WAZEWSKI,
                CheckKind.LYAPUNOV)
CLOSED_FORMS = ('ex53_k2', 'ex53_k4', 'ball_radius', 'ex54_bound')


@dataclass
class CheckResult:
    name: str
    kind: str
    passed: bool
    details: Dict = field(default_factory=dict)
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return cmp.to_jsonable({'name': self.name, 'kind': self.kind, 'passed': self.passed,
                                'details': self.details, 'error': self.error})


@dataclass
class RunResult:
    name: str
    exit_code: int
    csv_path: Optional[Path] = None
    report_path: Optional[Path] = None
    checks: List[CheckResult] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.exit_code == EXIT_OK

    @property
    def status(self) -> str:
        return {EXIT_OK: 'pass', EXIT_FAILED: 'fail', EXIT_BLOWUP: 'blowup'}.get(self.exit_code, 'error')


def combine_exit_codes(codes: Iterable[int]) -> int:
    return max(codes, default=EXIT_OK)


# ---------------------------------------------------------------------------
# Resolução e validação de alvos
# ---------------------------------------------------------------------------

def _phi_psi(scenario: Scenario, spec: Optional[Dict] = None):
    spec = spec or {}
    phi = sf.ScalarFunction.from_dict(spec['phi']) if 'phi' in spec else scenario.params.phi
    if 'psi' in spec:
        psi = sf.ScalarFunction.from_dict(spec['psi'])
    else:
        psi = getattr(scenario.params.source, 'psi', None) or sf.ScalarFunction.constant(0.0)
    return phi, psi


def _operator_B(scenario: Scenario, spec: Optional[Dict] = None) -> cc.LinearOperator2D:
    if spec and 'B' in spec:
        return cc.LinearOperator2D(spec['B'])
    B = getattr(scenario.params.source, 'B', None)
    if B is None and scenario.track.mixed is not None:
        B = scenario.track.mixed[0]
    if B is None:
        raise ScenarioError(f'{scenario.name}: operador B não definido (params.source.B ou track.mixed.B)')
    return B


def comparison_system(scenario: Scenario) -> Optional[cmp.ComparisonSystem]:
    """Sistema de comparação declarado em ``comparison``; φ, ψ, B e tr A vêm do cenário quando omitidos."""
    spec = scenario.comparison
    if not spec:
        return None
    name = spec.get('system')
    if name not in COMPARISON_SYSTEMS:
        raise ScenarioError(f'{scenario.name}: sistema de comparação desconhecido {name!r}')
    try:
        phi, psi = _phi_psi(scenario, spec)
        if name == 'example52':
            return cmp.example52_system(phi, psi)
        if name == 'mixed_area':
            k = spec.get('k') or (scenario.track.mixed[1] if scenario.track.mixed else None)
            if not k:
                raise ScenarioError(f'{scenario.name}: mixed_area requer "k"')
            return cmp.mixed_area_system(phi, psi, int(k))
        if name == 'example54':
            return cmp.example54_system(_operator_B(scenario, spec))
        if name == 'example55':
            return cmp.example55_system(phi, psi, float(spec.get('trA', scenario.params.A.trace)))
        return cmp.linear_system(spec['matrix'])
    except ScenarioError:
        raise
    except (SetflowError, KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f'{scenario.name}: comparison inválido ({exc})') from None


def validate_scenario(scenario: Scenario) -> Optional[cmp.ComparisonSystem]:
    """Verificações de consistência antes de qualquer integração."""
    system = comparison_system(scenario)
    for check in scenario.checks:
        opts = check.options
        if check.kind in NEEDS_SYSTEM and system is None and 'system' not in opts:
            raise ScenarioError(f'{scenario.name}: {check.name} requer a seção "comparison"')
        if check.kind is CheckKind.CLOSED_FORM:
            formula = opts.get('formula')
            if formula not in CLOSED_FORMS:
                raise ScenarioError(f'{scenario.name}: fórmula desconhecida {formula!r}')
            if formula != 'ball_radius' and scenario.track.mixed is None:
                raise ScenarioError(f'{scenario.name}: {formula} requer track.mixed')
        if check.kind is CheckKind.FINAL_DISTANCE and scenario.track.reference is None:
            raise ScenarioError(f'{scenario.name}: final_distance requer track.hausdorff_to')
        if check.kind is CheckKind.CERTIFICATE and opts.get('name') not in CERTIFICATES:
            raise ScenarioError(f'{scenario.name}: certificado desconhecido {opts.get("name")!r}')
        if check.kind is CheckKind.INSTABILITY_SCALING and len(opts.get('N', ())) < 2:
            raise ScenarioError(f'{scenario.name}: instability_scaling requer ao menos dois valores de N')
    return system


def resolve_targets(targets: Iterable[str], grid_size: Optional[int] = None, dt: Optional[float] = None,
                    default_grid_size: int = cc.DEFAULT_GRID_SIZE, default_dt: float = 1e-3,
                    default_seed: int = 0, registry: Optional[ScenarioRegistry] = None) -> List[Scenario]:
    """Arquivos ou nomes do registro → cenários validados; ScenarioError antes de qualquer execução.

    Sem ``registry`` apenas arquivos JSON são aceitos.
    """
    kwargs = dict(grid_size=grid_size, dt=dt, default_grid_size=default_grid_size, default_dt=default_dt,
                  default_seed=default_seed)
    scenarios = []
    for target in targets:
        path = Path(target)
        if path.suffix == '.json' or path.exists():
            scenarios.append(load_scenario(path, **kwargs))
        elif registry is not None and target in registry:
            scenarios.extend(parse_scenario(data, **kwargs) for data in registry.get(target))
        else:
            known = registry.names() if registry is not None else []
            raise ScenarioError(f'cenário não encontrado: {target!r} (arquivo ou um de {known})')
    names = [s.name for s in scenarios]
    duplicated = sorted({n for n in names if names.count(n) > 1})
    if duplicated:
        raise ScenarioError(f'cenários repetidos: {", ".join(duplicated)}')
    for scenario in scenarios:
        validate_scenario(scenario)
    return scenarios


# ---------------------------------------------------------------------------
# Verificações
# ---------------------------------------------------------------------------

@dataclass
class RunContext:
    scenario: Scenario
    trajectory: sf.Trajectory
    system: Optional[cmp.ComparisonSystem]
    quadrature: str
    cache: Dict = field(default_factory=dict)

    def system_for(self, opts: Dict) -> cmp.ComparisonSystem:
        if 'system' not in opts:
            return self.system
        spec = dict(self.scenario.comparison or {})
        spec.update(opts['system'] if isinstance(opts['system'], dict) else {'system': opts['system']})
        return comparison_system(replace(self.scenario, comparison=spec))


def _relative_error(simulated, exact) -> np.ndarray:
    exact = np.asarray(exact, dtype=float)
    return np.abs(np.asarray(simulated) - exact) / np.maximum(np.abs(exact), 1e-12)


def _expect(opts: Dict, value, default=True) -> bool:
    return value == opts.get('expect', default)


def _check_closed_form(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    traj, formula = ctx.trajectory, opts['formula']
    t = traj.times
    rel_tol = float(opts.get('rel_tol', 1e-3))
    area = traj.series('V')
    if formula == 'ball_radius':
        simulated = np.array([float(np.mean(b.values)) for b in traj.bodies])
        limit, rate = float(opts.get('limit', 1.0)), float(opts.get('rate', 1.0))
        r0 = float(opts.get('r0', simulated[0]))
        exact = limit + (r0 - limit) * np.exp(-rate * t)
    elif formula == 'ex54_bound':
        W0, W1 = traj.series('W0')[0], traj.series('W1')[0]
        bound = cert.example54_area_bound(_operator_B(ctx.scenario), W0, W1, t)
        excess = area - bound - rel_tol * np.maximum(1.0, np.abs(bound))
        j = int(np.argmax(excess))
        return CheckResult('', '', bool(excess[j] <= 0.0),
                           {'formula': formula, 'max_excess': float(excess[j]), 'worst_time': float(t[j]),
                            'bound_at_T': float(bound[-1]), 'area_at_T': float(area[-1]), 'rel_tol': rel_tol})
    else:
        k = 2 if formula == 'ex53_k2' else 4
        W = [traj.series(f'W{i}')[0] for i in range(min(k, ctx.scenario.track.mixed[1]))]
        exact = cert.example53_area_k2(W, t) if k == 2 else cert.example53_area_k4(W, t)
        simulated = area
    errors = _relative_error(simulated, exact)
    j = int(np.argmax(errors))
    return CheckResult('', '', bool(errors[j] <= rel_tol),
                       {'formula': formula, 'max_rel_error': float(errors[j]), 'worst_time': float(t[j]),
                        'rel_tol': rel_tol, 'exact_at_T': float(exact[-1]), 'simulated_at_T': float(simulated[-1])})


def _default_functionals(ctx: RunContext) -> List[str]:
    if ctx.scenario.track.mixed is not None:
        return [f'W{i}' for i in range(ctx.scenario.track.mixed[1])]
    return ['V']


def _check_bound(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    names = opts.get('functionals') or _default_functionals(ctx)
    report = cmp.bound_check(ctx.trajectory, ctx.system_for(opts), names,
                             rel_tol=float(opts.get('rel_tol', 1e-4)), lower=bool(opts.get('lower', False)))
    return CheckResult('', '', report.passed, report.to_dict())


def _check_practical(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    measures = None
    if 'a' in opts or 'b' in opts:
        measures = cmp.MeasurePair(a=cmp.HahnFunction.from_dict(opts.get('a')),
                                   b=cmp.HahnFunction.from_dict(opts.get('b')))
    verdict = cmp.check_practical(ctx.system_for(opts), float(opts['lambda']), float(opts['A']),
                                  float(opts.get('T', ctx.scenario.horizon)), measures=measures,
                                  dt=float(opts.get('dt', 1e-2)))
    passed = verdict.kind is cmp.VerdictKind.PRACTICALLY_STABLE
    details = verdict.to_dict()
    if 'xi0_range' in opts:
        lo, hi = (float(x) for x in opts['xi0_range'])
        value = verdict.margins.get('xi0_T', float('nan'))
        in_range = lo <= value <= hi
        details['xi0_in_range'] = in_range
        passed = passed and in_range
    return CheckResult('', '', passed, details)


def _check_xi0(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    verdict = cmp.check_xi0_stability(ctx.system_for(opts), eps_grid=tuple(opts.get('eps_grid', (1e-1, 1e-2, 1e-3))),
                                      T_check=float(opts.get('T_check', 50.0)),
                                      n_directions=int(opts.get('n_directions', 64)), rng=rng)
    expect = opts.get('expect')
    passed = verdict.kind.value == expect if expect else verdict.is_stable
    return CheckResult('', '', passed, verdict.to_dict())


def _check_wazewski(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    result = cmp.check_wazewski(ctx.system_for(opts), sample_box=tuple(opts.get('box', (0.0, 10.0))),
                                n_samples=int(opts.get('n_samples', 2000)), rng=rng)
    return CheckResult('', '', _expect(opts, result.passed), result.to_dict())


def _check_lyapunov(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    result = cmp.lyapunov_quadratic_check(ctx.system_for(opts), beta_weights=opts.get('beta'),
                                          sample_box=tuple(opts.get('box', (1e-3, 10.0))),
                                          n_samples=int(opts.get('n_samples', 4096)), rng=rng)
    return CheckResult('', '', _expect(opts, result.passed), result.to_dict())


def _check_instability_scaling(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    scenario = ctx.scenario
    t_check = float(opts.get('t', 1.0))
    rel_tol = float(opts.get('rel_tol', 0.01))
    target, ratio_tol = float(opts.get('ratio', 4.0)), float(opts.get('ratio_tol', 0.05))
    functionals = {'V': lambda u: cc.area(u, ctx.quadrature)}
    rows = []
    for N in opts['N']:
        u0 = cc.make_segment(float(N), grid_size=scenario.grid_size)
        S = float(sf.evolve(u0, scenario.params, t_check, scenario.dt, functionals).series('V')[-1])
        exact = float(cert.example53_segment_area(N, t_check))
        rows.append({'N': N, 'area': S, 'closed_form': exact, 'rel_error': abs(S - exact) / exact})
    ratios = [b['area'] / a['area'] for a, b in zip(rows, rows[1:])]
    passed = all(r['rel_error'] <= rel_tol for r in rows) and all(abs(q - target) <= ratio_tol for q in ratios)
    return CheckResult('', '', passed, {'t': t_check, 'rows': rows, 'ratios': ratios, 'rel_tol': rel_tol,
                                        'ratio_target': target, 'ratio_tol': ratio_tol,
                                        'verdict': 'unstable' if passed else 'inconclusive',
                                        'measures': ['S', 'S']})


def _check_final_distance(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    d = float(ctx.trajectory.series('dH_ref')[-1])
    limit = float(opts.get('max', 1e-2))
    return CheckResult('', '', d < limit, {'final_distance': d, 'max': limit, 't': float(ctx.trajectory.times[-1])})


# Certificados -------------------------------------------------------------

def _cert_fixed_point(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    phi, psi = _phi_psi(ctx.scenario, opts)
    fp = cert.example51_fixed_point(phi, psi, int(opts.get('n', 2)), grid_size=ctx.scenario.grid_size)
    ctx.cache['fixed_point'] = fp
    details = {'lambda0': fp.lambda0, 'verdict': fp.verdict.to_dict()}
    passed = fp.verdict.kind.value == opts.get('expect', 'stable')
    if fp.u_star is not None:
        rate = sf.volume_rate(fp.u_star, ctx.scenario.params)
        details['volume_rate'] = rate
        passed = passed and abs(rate) <= 1e-6 * max(1.0, cc.area(fp.u_star))
    if 'expect_lambda0' in opts:
        error = abs(fp.lambda0 - float(opts['expect_lambda0']))
        details['lambda0_error'] = error
        passed = passed and error <= float(opts.get('tol', 1e-10))
    return CheckResult('', '', passed, details)


def _linearization(ctx: RunContext, opts: Dict, rng) -> cert.LinearizationReport:
    if 'linearization' in ctx.cache:
        return ctx.cache['linearization']
    if 'at' in opts:
        u_star = build_body(opts['at'], ctx.scenario.grid_size)
    elif 'fixed_point' in ctx.cache and ctx.cache['fixed_point'].u_star is not None:
        u_star = ctx.cache['fixed_point'].u_star
    elif ctx.scenario.track.reference is not None:
        u_star = ctx.scenario.track.reference
    else:
        raise ScenarioError(f'{ctx.scenario.name}: linearize requer "at", ponto fixo ou track.hausdorff_to')
    report = cert.linearize(u_star, ctx.scenario.params, fd_step=float(opts.get('fd_step', cert.DEFAULT_FD_STEP)),
                            rng=rng)
    ctx.cache['linearization'] = report
    return report


def _cert_linearize(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    report = _linearization(ctx, opts, rng)
    details = report.to_dict()
    passed = report.stable == bool(opts.get('expect_stable', True))
    if isinstance(ctx.scenario.params.source, sf.BallSource):
        phi, psi = _phi_psi(ctx.scenario)
        closed = cert.example51_gamma0(phi, psi, report.volume)
        details['closed_form_gamma0'] = closed
        details['closed_form_error'] = abs(report.gamma0 - closed)
    if 'expect_gamma0' in opts:
        error = abs(report.gamma0 - float(opts['expect_gamma0']))
        details['gamma0_error'] = error
        passed = passed and error <= float(opts.get('tol', 1e-3))
    return CheckResult('', '', passed, details)


def _cert_hausdorff(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    report = _linearization(ctx, opts, rng)
    verdict = cert.hausdorff_stability_report(ctx.scenario.params, report, r=float(opts.get('r', 1.0)),
                                              T_check=float(opts.get('T_check', 50.0)), eps_grid=opts.get('eps_grid'),
                                              rng=rng)
    expect = opts.get('expect')
    passed = verdict.kind.value == expect if expect else verdict.is_stable
    return CheckResult('', '', passed, verdict.to_dict())


def _cert_global_existence(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    g_upper = sf.ScalarFunction.from_dict(opts['g_upper'])
    g_lower = sf.ScalarFunction.from_dict(opts.get('g_lower', opts['g_upper']))
    f_plus = sf.ScalarFunction.from_dict(opts['F_plus'])
    bounds = cert.ExistenceBounds(g_upper=g_upper, g_lower=g_lower, F_plus=lambda t, w, V0: f_plus(w))
    report = cert.global_existence_report(ctx.scenario.params, bounds, ctx.scenario.initial_body,
                                          float(opts.get('T', ctx.scenario.horizon)), dt=float(opts.get('dt', 1e-2)),
                                          evolve_dt=ctx.scenario.dt)
    passed = report.finite == bool(opts.get('expect_finite', True))
    if report.norm_check is not None:
        passed = passed and report.norm_check['passed']
    return CheckResult('', '', passed, report.to_dict())


def _cert_example54_mu(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    mu = cert.example54_mu(_operator_B(ctx.scenario, opts))
    details = mu.to_dict()
    details['verdict_source'] = 'sistema de comparação integrado diretamente'
    return CheckResult('', '', True, details)


def _cert_example54_practical(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    result = cert.example54_practical_criterion(_operator_B(ctx.scenario, opts), float(opts.get('lambda', 1.0)),
                                                float(opts.get('A', 100.0)), float(opts.get('T', ctx.scenario.horizon)))
    return CheckResult('', '', bool(result['exact_holds']), result)


def _cert_example55(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    phi, psi = _phi_psi(ctx.scenario, opts)
    verdict = cert.example55_instability(phi, psi, float(opts.get('trA', ctx.scenario.params.A.trace)),
                                         opts.get('s_grid'))
    return CheckResult('', '', verdict.kind.value == opts.get('expect', 'unstable'), verdict.to_dict())


def _cert_ratio_condition(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    phi, psi = _phi_psi(ctx.scenario, opts)
    k = int(opts.get('k') or (ctx.scenario.track.mixed[1] if ctx.scenario.track.mixed else 2))
    result = cert.lyapunov_ratio_condition(phi, psi, k, opts.get('s_grid'))
    return CheckResult('', '', _expect(opts, result.passed), result.to_dict())


def _cert_cubic(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    lam = cert.cubic_lambda_star()
    residual = abs(3 * lam ** 3 + 14 * lam ** 2 - 16)
    return CheckResult('', '', residual < 1e-9 and 0.9 < lam < 1.0, {'lambda_star': lam, 'residual': residual})


CERTIFICATES: Dict[str, Callable] = {
    'example51_fixed_point': _cert_fixed_point,
    'linearize': _cert_linearize,
    'hausdorff_stability': _cert_hausdorff,
    'global_existence': _cert_global_existence,
    'example54_mu': _cert_example54_mu,
    'example54_practical_criterion': _cert_example54_practical,
    'example55_instability': _cert_example55,
    'lyapunov_ratio_condition': _cert_ratio_condition,
    'cubic_lambda_star': _cert_cubic,
}


def _check_certificate(ctx: RunContext, opts: Dict, rng) -> CheckResult:
    return CERTIFICATES[opts['name']](ctx, opts, rng)


CHECKS: Dict[CheckKind, Callable] = {
    CheckKind.CLOSED_FORM: _check_closed_form,
    CheckKind.BOUND_CHECK: _check_bound,
    CheckKind.PRACTICAL: _check_practical,
    CheckKind.XI0_STABILITY: _check_xi0,
    CheckKind.WAZEWSKI: _check_wazewski,
    CheckKind.LYAPUNOV: _check_lyapunov,
    CheckKind.INSTABILITY_SCALING: _check_instability_scaling,
    CheckKind.FINAL_DISTANCE: _check_final_distance,
    CheckKind.CERTIFICATE: _check_certificate,
}


def run_check(ctx: RunContext, check: CheckSpec, index: int) -> CheckResult:
    # um gerador por verificação: a ordem de execução não altera as amostras
    rng = np.random.default_rng([ctx.scenario.seed, index])
    try:
        result = CHECKS[check.kind](ctx, check.options, rng)
    except (SetflowError, ValueError, KeyError) as exc:
        logger.warning('[Runner] %s: %s falhou com erro: %s', ctx.scenario.name, check.name, exc)
        return CheckResult(check.name, check.kind.value, False, {}, error=str(exc))
    result.name, result.kind = check.name, check.kind.value
    level = logging.INFO if result.passed else logging.WARNING
    logger.log(level, '[Runner] %s: %s %s', ctx.scenario.name, check.name, 'ok' if result.passed else 'FALHOU')
    return result


# ---------------------------------------------------------------------------
# Execução
# ---------------------------------------------------------------------------

def _trajectory_summary(traj: Optional[sf.Trajectory], scenario: Scenario, quadrature: str) -> Optional[Dict]:
    if traj is None:
        return None
    return {'csv': scenario.outputs.csv, 'frames': len(traj), 'completed': traj.completed,
            'escape_time': traj.escape_time, 't_end': float(traj.times[-1]),
            'final': cc.body_summary(traj.last, quadrature), 'diagnostics': traj.diagnostics}


def run_scenario(scenario: Scenario, out_dir, quadrature: str = cc.DEFAULT_QUADRATURE) -> RunResult:
    """Executa um cenário já validado e escreve CSV e relatório em ``out_dir``."""
    out_dir = Path(out_dir)
    system = validate_scenario(scenario)
    csv_path = out_dir / scenario.outputs.csv
    report_path = out_dir / scenario.outputs.report
    logger.info('[Runner] %s: T=%g dt=%g M=%d', scenario.name, scenario.horizon, scenario.dt, scenario.grid_size)

    traj, error, checks = None, None, []
    try:
        traj = sf.evolve(scenario.initial_body, scenario.params, scenario.horizon, scenario.dt,
                         scenario.functionals(quadrature))
    except FiniteEscapeError as exc:
        traj, error = exc.trajectory, str(exc)
    except IntegrationError as exc:
        error = str(exc)

    if error is None:
        ctx = RunContext(scenario, traj, system, quadrature)
        checks = [run_check(ctx, check, i) for i, check in enumerate(scenario.checks)]
        exit_code = EXIT_OK if all(c.passed for c in checks) else EXIT_FAILED
    else:
        logger.warning('[Runner] %s: integração interrompida: %s', scenario.name, error)
        exit_code = EXIT_BLOWUP

    if traj is not None:
        write_trajectory_csv(csv_path, traj)
    result = RunResult(scenario.name, exit_code, csv_path if traj is not None else None, report_path, checks, error)
    report = {
        'schema': 1,
        'scenario': scenario.name,
        'example': scenario.example,
        'description': scenario.description,
        'seed': scenario.seed,
        'grid_size': scenario.grid_size,
        'dt': scenario.dt,
        'horizon': scenario.horizon,
        'quadrature': quadrature,
        'params': scenario.params.to_dict(),
        'comparison': system.to_dict() if system is not None else None,
        'status': result.status,
        'exit_code': exit_code,
        'error': error,
        'trajectory': _trajectory_summary(traj, scenario, quadrature),
        'checks': [c.to_dict() for c in checks],
    }
    write_json_report(report_path, report)
    return result


def run_file(path, out_dir, **kwargs) -> List[RunResult]:
    return [run_scenario(s, out_dir) for s in resolve_targets([str(path)], **kwargs)]

