"""
Sistemas de comparação ξ' = g(t, ξ) no cone não negativo.

Os vereditos aqui são evidência amostrada (nunca prova): cada objeto
registra contagem de amostras, margens e a caixa onde a condição de
Wazewski foi verificada.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from setflow import convex_core as cc
from setflow.convex_core import LinearOperator2D
from setflow.errors import IntegrationError, PreconditionError

logger = logging.getLogger(__name__)

SAMPLED_NOTE = ('evidência amostrada; condições de Wazewski verificadas apenas na caixa informada, '
                'não globalmente')
OVERFLOW_GUARD = 1e12
# ξ₀(T)/δ acima de 1 + GROWTH_TOL: trajetórias crescem, veredito instável
GROWTH_TOL = 1e-6


class VerdictKind(Enum):
    STABLE = 'stable'
    ASYMPTOTICALLY_STABLE = 'asymptotically_stable'
    PRACTICALLY_STABLE = 'practically_stable'
    UNSTABLE = 'unstable'
    INCONCLUSIVE = 'inconclusive'


def to_jsonable(value):
    """Converte tipos numpy/enum/dataclass para tipos JSON."""
    if isinstance(value, Enum):
        return value.value
    if hasattr(value, 'to_dict'):
        return to_jsonable(value.to_dict())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        if math.isnan(v):
            return 'nan'
        if math.isinf(v):
            return 'inf' if v > 0 else '-inf'
        return v
    return value


@dataclass
class StabilityVerdict:
    kind: VerdictKind
    margins: Dict = field(default_factory=dict)
    parameters: Dict = field(default_factory=dict)
    samples: int = 0
    note: str = SAMPLED_NOTE

    @property
    def witness(self) -> Dict:
        return {**self.parameters, **self.margins}

    @property
    def is_stable(self) -> bool:
        return self.kind in (VerdictKind.STABLE, VerdictKind.ASYMPTOTICALLY_STABLE, VerdictKind.PRACTICALLY_STABLE)

    def to_dict(self) -> dict:
        return to_jsonable({
            'kind': self.kind.value,
            'margins': self.margins,
            'parameters': self.parameters,
            'samples': self.samples,
            'note': self.note,
        })


@dataclass
class SampledCheck:
    """Resultado de uma verificação amostrada (Wazewski, Lyapunov, condições de razão)."""
    name: str
    passed: bool
    worst: float
    samples: int
    witness: Dict = field(default_factory=dict)
    note: str = SAMPLED_NOTE

    def __bool__(self):
        return bool(self.passed)

    def to_dict(self) -> dict:
        return to_jsonable({
            'name': self.name,
            'passed': self.passed,
            'worst': self.worst,
            'samples': self.samples,
            'witness': self.witness,
            'note': self.note,
        })


# ---------------------------------------------------------------------------
# Sistemas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComparisonSystem:
    """ξ' = g(t, ξ), ξ ∈ ℝ₊^{dim}.

    ``rhs(t, xi)`` aceita xi com shape (dim,) ou (dim, m) e devolve o mesmo shape.
    """
    dim: int
    rhs: Callable
    name: str = 'custom'
    quasimonotone: Optional[bool] = None
    autonomous: bool = True
    parameters: Dict = field(default_factory=dict)

    def __call__(self, xi, t: float = 0.0):
        return np.asarray(self.rhs(t, np.asarray(xi, dtype=float)), dtype=float)

    def to_dict(self) -> dict:
        return to_jsonable({'name': self.name, 'dim': self.dim, 'quasimonotone': self.quasimonotone,
                            'autonomous': self.autonomous, 'parameters': self.parameters})


def _vectorized(f):
    """Avalia f elemento a elemento; ScalarFunction já é vetorizada."""
    if hasattr(f, 'kind') and hasattr(f, 'params'):
        return f
    return np.vectorize(lambda s: float(f(float(s))), otypes=[float])


def _describe(f):
    return f.to_dict() if hasattr(f, 'to_dict') else getattr(f, '__name__', repr(f))


def linear_system(matrix, name: str = 'linear') -> ComparisonSystem:
    M = np.array(matrix, dtype=float)
    dim = M.shape[0]
    off = M - np.diag(np.diag(M))
    return ComparisonSystem(
        dim=dim,
        rhs=lambda t, xi: np.tensordot(M, xi, axes=(1, 0)),
        name=name,
        quasimonotone=bool(np.all(off >= 0)),
        parameters={'matrix': M.tolist()},
    )


def example52_system(phi, psi) -> ComparisonSystem:
    """ξ₀' = -2φ(ξ₀)ξ₀ + 2ψ(ξ₀)ξ₁,  ξ₁' = -2φ(ξ₀)ξ₁  (B² = 0)."""
    f, g = _vectorized(phi), _vectorized(psi)

    def rhs(t, xi):
        p = f(xi[0])
        return np.stack((-2.0 * p * xi[0] + 2.0 * g(xi[0]) * xi[1], -2.0 * p * xi[1]))

    return ComparisonSystem(2, rhs, name='example52', quasimonotone=None,
                            parameters={'phi': _describe(phi), 'psi': _describe(psi)})


def mixed_area_system(phi, psi, k: int) -> ComparisonSystem:
    """Cadeia de W_i = V[u, Bⁱu] para A = -I, F = ψ(V)Bu, Bᵏ = I, |det B| = 1.

    ξ₀' = -2φξ₀ + 2ψξ₁;  ξᵢ' = -2φξᵢ + ψ(ξᵢ₋₁ + ξᵢ₊₁);  ξₖ₋₁' = -2φξₖ₋₁ + ψ(ξₖ₋₂ + ξ₀),
    com φ, ψ avaliados em ξ₀.
    """
    k = int(k)
    if k < 1:
        raise ValueError('k deve ser >= 1')
    f, g = _vectorized(phi), _vectorized(psi)

    def rhs(t, xi):
        p, q = f(xi[0]), g(xi[0])
        if k == 1:
            return np.stack(((-2.0 * p + 2.0 * q) * xi[0],))
        rows = [-2.0 * p * xi[0] + 2.0 * q * xi[1]]
        for i in range(1, k - 1):
            rows.append(-2.0 * p * xi[i] + q * (xi[i - 1] + xi[i + 1]))
        rows.append(-2.0 * p * xi[k - 1] + q * (xi[k - 2] + xi[0]))
        return np.stack(rows)

    return ComparisonSystem(k, rhs, name=f'mixed_area_k{k}', quasimonotone=True,
                            parameters={'k': k, 'phi': _describe(phi), 'psi': _describe(psi)})


def example54_system(B: LinearOperator2D) -> ComparisonSystem:
    """ξ₀' = 2ξ₁,  ξ₁' = 2|det B|ξ₀ + tr B·ξ₁  (A = 0, F = Bu, B² = I)."""
    det, tr = abs(B.det), B.trace
    sys = linear_system([[0.0, 2.0], [2.0 * det, tr]], name='example54')
    return ComparisonSystem(2, sys.rhs, name='example54', quasimonotone=True,
                            parameters={'B': B.to_list(), 'abs_det': det, 'trace': tr})


def example55_system(phi, psi, trA: float) -> ComparisonSystem:
    """ξ₀' = tr A·φ(ξ₀)ξ₀ + 2√π·ψ(ξ₀)√ξ₀ (limite inferior via Brunn–Minkowski)."""
    f, g = _vectorized(phi), _vectorized(psi)
    root_pi = math.sqrt(math.pi)

    def rhs(t, xi):
        x = np.maximum(xi[0], 0.0)
        return np.stack((trA * f(x) * x + 2.0 * root_pi * g(x) * np.sqrt(x),))

    return ComparisonSystem(1, rhs, name='example55', quasimonotone=True,
                            parameters={'trA': trA, 'phi': _describe(phi), 'psi': _describe(psi)})


# ---------------------------------------------------------------------------
# Integração
# ---------------------------------------------------------------------------

@dataclass
class ComparisonTrajectory:
    times: np.ndarray
    values: np.ndarray  # shape (dim, n)
    clamped: int = 0
    blowup_time: Optional[float] = None

    @property
    def finite(self) -> bool:
        return self.blowup_time is None

    @property
    def final(self) -> np.ndarray:
        return self.values[:, -1]

    def component(self, i: int) -> np.ndarray:
        return self.values[i]

    def at(self, t) -> np.ndarray:
        return np.array([np.interp(t, self.times, row) for row in self.values])


def _escape_event(limit):
    def event(t, y):
        return limit - np.max(np.abs(y))
    event.terminal = True
    return event


def integrate(sys: ComparisonSystem, xi0, T: float, dt: float = 1e-2, times=None,
              rtol: float = 1e-9, atol: float = 1e-12, overflow: float = OVERFLOW_GUARD) -> ComparisonTrajectory:
    """RK45 adaptativo (Dormand–Prince) com saída em grade fixa; negativos truncados em 0."""
    xi0 = np.asarray(xi0, dtype=float).reshape(sys.dim)
    if np.any(xi0 < 0):
        raise PreconditionError(f'ξ(0) fora do cone: {xi0.tolist()}')
    if T < 0:
        raise ValueError('T deve ser >= 0')
    if times is None:
        n = max(1, int(math.ceil(T / dt - 1e-9))) if T > 0 else 0
        times = np.linspace(0.0, T, n + 1)
    times = np.asarray(times, dtype=float)
    if T == 0 or times[-1] == 0:
        return ComparisonTrajectory(times[:1], xi0[:, None].copy())

    sol = solve_ivp(lambda t, y: sys.rhs(t, y), (0.0, float(times[-1])), xi0, method='RK45',
                    t_eval=times, rtol=rtol, atol=atol,
                    events=_escape_event(overflow * max(1.0, float(np.max(xi0)))))
    if sol.status == -1:
        raise IntegrationError(f'falha na integração de {sys.name}: {sol.message}')
    values = sol.y
    blowup = None
    if sol.status == 1 and len(sol.t_events[0]):
        blowup = float(sol.t_events[0][0])
        logger.warning('[Comparison] %s: estouro em t=%.6g', sys.name, blowup)
    negative = values < 0
    clamped = int(np.count_nonzero(negative))
    if clamped:
        logger.debug('[Comparison] %s: %d componentes negativas truncadas (min %.3e)',
                     sys.name, clamped, float(values.min()))
        values = np.where(negative, 0.0, values)
    return ComparisonTrajectory(sol.t, values, clamped=clamped, blowup_time=blowup)


def _integrate_batch(sys: ComparisonSystem, X0: np.ndarray, T: float, eps: Optional[float] = None,
                     n_eval: int = 201) -> Tuple[np.ndarray, np.ndarray, bool]:
    """Integra várias condições iniciais de uma vez; X0 shape (dim, m).

    Com ``eps``, para no primeiro instante em que algum ξ₀ atinge eps.
    Retorna (max ξ₀ por coluna, ξ₀ final por coluna, parou_cedo).
    """
    dim, m = X0.shape

    def fun(t, y):
        return np.asarray(sys.rhs(t, y.reshape(dim, m)), dtype=float).reshape(-1)

    events = []
    if eps is not None:
        def hit(t, y):
            return eps - np.max(y.reshape(dim, m)[0])
        hit.terminal = True
        events.append(hit)
    scale = float(np.max(np.abs(X0))) or 1.0
    sol = solve_ivp(fun, (0.0, T), X0.reshape(-1), method='RK45', t_eval=np.linspace(0.0, T, n_eval),
                    rtol=1e-7, atol=1e-12 * scale, events=events or None)
    if sol.status == -1:
        raise IntegrationError(f'falha na integração de {sys.name}: {sol.message}')
    xi0 = sol.y.reshape(dim, m, -1)[0]
    stopped = sol.status == 1
    if stopped:
        return np.full(m, np.inf), np.full(m, np.inf), True
    return xi0.max(axis=1), xi0[:, -1], False


def _sample_directions(dim: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Direções no cone com ‖d‖_∞ = 1, incluindo e₀ e (1,…,1)."""
    D = rng.uniform(0.0, 1.0, size=(dim, n))
    D /= np.maximum(D.max(axis=0), 1e-300)
    extra = np.zeros((dim, 2))
    extra[0, 0] = 1.0
    extra[:, 1] = 1.0
    return np.hstack((extra, D))


def check_xi0_stability(sys: ComparisonSystem, eps_grid: Sequence[float] = (1e-1, 1e-2, 1e-3),
                        T_check: float = 50.0, delta_search: int = 40, n_directions: int = 64,
                        rng: Optional[np.random.Generator] = None, zero_tol: float = 1e-10) -> StabilityVerdict:
    """ξ₀-estabilidade no cone: para cada ε, bisseção do maior δ com ξ₀(t) < ε em [0, T_check]."""
    rng = rng if rng is not None else np.random.default_rng(0)
    g0 = np.asarray(sys.rhs(0.0, np.zeros(sys.dim)), dtype=float)
    if np.max(np.abs(g0)) > zero_tol:
        raise PreconditionError(f'g(0) = {g0.tolist()} ≠ 0: solução trivial inexistente')

    D = _sample_directions(sys.dim, n_directions, rng)
    shrink = 1.0 - 1e-9

    def keeps(delta, eps):
        peak, _, stopped = _integrate_batch(sys, D * delta * shrink, T_check, eps=eps)
        return (not stopped) and bool(np.all(peak < eps))

    table = []
    for eps in sorted(float(e) for e in eps_grid):
        if keeps(eps, eps):
            delta = eps
        else:
            lo, hi = 0.0, eps
            for _ in range(delta_search):
                mid = 0.5 * (lo + hi)
                if keeps(mid, eps):
                    lo = mid
                else:
                    hi = mid
            delta = lo
        table.append([eps, delta])

    samples = D.shape[1] * len(table)
    parameters = {'system': sys.name, 'T_check': T_check, 'eps_grid': [row[0] for row in table],
                  'directions': D.shape[1], 'bisection_steps': delta_search}
    # δ no piso da bisseção conta como δ = 0
    collapsed = [eps for eps, delta in table if delta <= 2.0 * eps * 2.0 ** -delta_search]
    if collapsed:
        return StabilityVerdict(VerdictKind.UNSTABLE,
                                margins={'delta_table': table, 'failed_eps': collapsed[0]},
                                parameters=parameters, samples=samples)

    delta_ref = min(delta for _, delta in table)
    _, final, _ = _integrate_batch(sys, D * delta_ref * shrink, T_check)
    ratio = float(np.max(final) / delta_ref)
    margins = {'delta_table': table, 'final_ratio': ratio}
    if ratio > 1.0 + GROWTH_TOL:
        logger.info('[Comparison] %s: ξ₀(T)/δ = %.3e > 1, solução trivial não é estável', sys.name, ratio)
        return StabilityVerdict(VerdictKind.UNSTABLE, margins=margins, parameters=parameters,
                                samples=samples + D.shape[1],
                                note=f'{SAMPLED_NOTE}; ξ₀ cresce em [0, T_check] a partir de δ(ε)')
    kind = VerdictKind.ASYMPTOTICALLY_STABLE if ratio < 1e-3 else VerdictKind.STABLE
    return StabilityVerdict(kind, margins=margins, parameters=parameters, samples=samples + D.shape[1])


def check_wazewski(sys: ComparisonSystem, sample_box=(0.0, 10.0), n_samples: int = 2000,
                   rng: Optional[np.random.Generator] = None, tol: float = 1e-9) -> SampledCheck:
    """Quasimonotonia amostrada: ξ ≤ η com ξᵢ = ηᵢ ⇒ gᵢ(ξ) ≤ gᵢ(η) + tol."""
    rng = rng if rng is not None else np.random.default_rng(0)
    lo, hi = (np.broadcast_to(np.asarray(b, dtype=float), (sys.dim,)) for b in sample_box)
    xi = rng.uniform(lo[:, None], hi[:, None], size=(sys.dim, n_samples))
    eta = xi + rng.uniform(0.0, 1.0, size=xi.shape) * (hi[:, None] - xi)
    worst, witness = -np.inf, {}
    for i in range(sys.dim):
        eta_i = eta.copy()
        eta_i[i] = xi[i]
        gx = np.asarray(sys.rhs(0.0, xi), dtype=float)[i]
        ge = np.asarray(sys.rhs(0.0, eta_i), dtype=float)[i]
        excess = gx - ge - tol * (1.0 + np.abs(ge))
        j = int(np.argmax(excess))
        if excess[j] > worst:
            worst = float(excess[j])
            witness = {'component': i, 'xi': xi[:, j], 'eta': eta_i[:, j], 'g_xi': gx[j], 'g_eta': ge[j]}
    passed = worst <= 0.0
    if not passed:
        logger.info('[Comparison] %s viola Wazewski na componente %s', sys.name, witness.get('component'))
    return SampledCheck('wazewski', passed, worst, n_samples * sys.dim,
                        witness={**witness, 'box': [lo, hi], 'system': sys.name})


# ---------------------------------------------------------------------------
# Medidas e estabilidade prática
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HahnFunction:
    """Função de classe Hahn: linear c·s ou potência c·sᵖ (c, p > 0)."""
    kind: str = 'linear'
    c: float = 1.0
    p: float = 1.0

    def __post_init__(self):
        if self.kind not in ('linear', 'power'):
            raise ValueError(f'função de Hahn desconhecida: {self.kind!r}')
        if not (self.c > 0 and self.p > 0):
            raise ValueError('função de Hahn requer c > 0 e p > 0')

    def __call__(self, s):
        s = np.maximum(np.asarray(s, dtype=float), 0.0)
        out = self.c * s if self.kind == 'linear' else self.c * np.power(s, self.p)
        return float(out) if np.ndim(out) == 0 else out

    @classmethod
    def from_dict(cls, data) -> 'HahnFunction':
        if data is None:
            return cls()
        return cls(data.get('kind', 'linear'), float(data.get('c', 1.0)), float(data.get('p', 1.0)))

    def to_dict(self) -> dict:
        return {'kind': self.kind, 'c': self.c, 'p': self.p}


@dataclass(frozen=True)
class Measure:
    """Funcional sobre corpos: volume | norm | hausdorff_to(ref) | max_mixed(B, k)."""
    kind: str = 'volume'
    reference: Optional[cc.SupportFunction2D] = None
    B: Optional[LinearOperator2D] = None
    k: int = 2

    def __call__(self, body: cc.SupportFunction2D) -> float:
        if self.kind == 'volume':
            return cc.area(body)
        if self.kind == 'norm':
            return cc.norm(body)
        if self.kind == 'hausdorff_to':
            return cc.hausdorff_distance(body, self.reference)
        if self.kind == 'max_mixed':
            values, current = [cc.area(body)], body
            for _ in range(1, self.k):
                current = cc.linear_image(current, self.B)
                values.append(cc.mixed_area(body, current))
            return float(max(values))
        raise ValueError(f'medida desconhecida: {self.kind!r}')

    def to_dict(self) -> dict:
        out = {'kind': self.kind}
        if self.B is not None:
            out.update(B=self.B.to_list(), k=self.k)
        return out


@dataclass(frozen=True)
class MeasurePair:
    h0: Measure = field(default_factory=Measure)
    h: Measure = field(default_factory=Measure)
    a: HahnFunction = field(default_factory=HahnFunction)
    b: HahnFunction = field(default_factory=HahnFunction)

    def __post_init__(self):
        grid = np.linspace(0.0, 10.0, 101)
        for name in ('a', 'b'):
            f = getattr(self, name)
            vals = np.asarray(f(grid))
            if vals[0] != 0.0 or np.any(np.diff(vals) <= 0):
                raise ValueError(f'{name} deve ser estritamente crescente com {name}(0) = 0')

    def to_dict(self) -> dict:
        return {'h0': self.h0.to_dict(), 'h': self.h.to_dict(), 'a': self.a.to_dict(), 'b': self.b.to_dict()}


def check_practical(sys: ComparisonSystem, lam: float, A_bound: float, T: float,
                    measures: Optional[MeasurePair] = None, dt: float = 1e-2) -> StabilityVerdict:
    """Estabilidade prática (λ, A, T): ξ₀(T; b(λ)·(1,…,1)) < a(A)."""
    if not 0 < lam < A_bound:
        raise PreconditionError(f'requer 0 < λ < A (recebido λ={lam}, A={A_bound})')
    measures = measures or MeasurePair()
    b_lam, a_A = measures.b(lam), measures.a(A_bound)
    parameters = {'lambda': lam, 'A': A_bound, 'T': T, 'b_lambda': b_lam, 'a_A': a_A,
                  'system': sys.name, 'measures': measures.to_dict()}
    if T == 0:
        value, peak = b_lam, b_lam
    else:
        traj = integrate(sys, np.full(sys.dim, b_lam), T, dt)
        if not traj.finite:
            return StabilityVerdict(VerdictKind.UNSTABLE,
                                    margins={'blowup_time': traj.blowup_time, 'margin': float('-inf')},
                                    parameters=parameters, samples=1)
        value, peak = float(traj.values[0, -1]), float(traj.values[0].max())
    margin = a_A - value
    kind = VerdictKind.PRACTICALLY_STABLE if margin > 0 else VerdictKind.INCONCLUSIVE
    return StabilityVerdict(kind, margins={'xi0_T': value, 'xi0_max': peak, 'margin': margin},
                            parameters=parameters, samples=1,
                            note='critério suficiente avaliado na trajetória integrada')


# ---------------------------------------------------------------------------
# Dominância sobre trajetórias do semifluxo
# ---------------------------------------------------------------------------

@dataclass
class BoundReport:
    passed: bool
    max_violation: float
    tolerance: float
    scale: float
    worst_time: float
    worst_component: str
    functional_names: Tuple[str, ...]
    lower: bool = False

    def __bool__(self):
        return bool(self.passed)

    def to_dict(self) -> dict:
        return to_jsonable(dict(self.__dict__))


def bound_check(traj, sys: ComparisonSystem, functional_names: Sequence[str],
                rel_tol: float = 1e-4, lower: bool = False) -> BoundReport:
    """Verifica W_i(t) ≤ ξ_i(t) + tol ao longo da trajetória, com ξ(0) = W(0).

    Com ``lower=True`` verifica a comparação inferior W_i(t) ≥ ξ_i(t) - tol.
    """
    names = tuple(functional_names)
    if len(names) != sys.dim:
        raise ValueError(f'{len(names)} funcionais para sistema de dimensão {sys.dim}')
    W = np.vstack([traj.series(name) for name in names])
    xi0 = np.maximum(W[:, 0], 0.0)
    comp = integrate(sys, xi0, float(traj.times[-1]), times=traj.times)
    n = comp.values.shape[1]
    xi = comp.values
    W = W[:, :n]
    scale = max(1.0, float(np.max(np.abs(xi))), float(np.max(np.abs(W))))
    excess = (xi - W) if lower else (W - xi)
    idx = np.unravel_index(int(np.argmax(excess)), excess.shape)
    max_violation = float(excess[idx])
    tolerance = rel_tol * scale
    return BoundReport(passed=max_violation <= tolerance and comp.finite, max_violation=max_violation,
                       tolerance=tolerance, scale=scale, worst_time=float(traj.times[idx[1]]),
                       worst_component=names[idx[0]], functional_names=names, lower=lower)


def lyapunov_quadratic_check(sys: ComparisonSystem, beta_weights: Optional[Sequence[float]] = None,
                             sample_box=(1e-3, 10.0), n_samples: int = 4096,
                             rng: Optional[np.random.Generator] = None) -> SampledCheck:
    """dV/dt < 0 em amostras do cone perfurado para V = ½Σβᵢξᵢ²."""
    rng = rng if rng is not None else np.random.default_rng(0)
    beta = np.ones(sys.dim) if beta_weights is None else np.asarray(beta_weights, dtype=float)
    if beta.shape != (sys.dim,) or np.any(beta <= 0):
        raise ValueError('pesos β devem ser positivos, um por componente')
    lo, hi = (np.broadcast_to(np.asarray(b, dtype=float), (sys.dim,)) for b in sample_box)
    X = rng.uniform(lo[:, None], hi[:, None], size=(sys.dim, n_samples))
    G = np.asarray(sys.rhs(0.0, X), dtype=float)
    dV = np.sum(beta[:, None] * X * G, axis=0)
    j = int(np.argmax(dV))
    worst = float(dV[j])
    return SampledCheck('lyapunov', worst < 0.0, worst, n_samples,
                        witness={'xi': X[:, j], 'dVdt': worst,
                                 'normalized': worst / float(np.sum(beta * X[:, j] ** 2)),
                                 'beta': beta, 'box': [lo, hi], 'system': sys.name})
