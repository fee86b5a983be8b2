"""
Semifluxo de conjuntos convexos planares.

    u(t) = exp{𝒜 ∫₀ᵗ φ(V[u(s)]) ds} u₀ + ∫₀ᵗ exp{𝒜 ∫ₛᵗ φ(V[u(τ)]) dτ} F(V[u(s)], u(s)) ds

A parte linear exp{𝒜τ}u tem função suporte h_u(e^{Aᵀτ}p) e é aplicada
pelos pontos de contato do corpo (exata para polígonos). A fonte F é uma das formas
paramétricas abaixo.
"""

import logging
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.integrate import cumulative_trapezoid
from scipy.linalg import expm

from setflow import convex_core as cc
from setflow.convex_core import LinearOperator2D, SupportFunction2D
from setflow.errors import (
    FiniteEscapeError,
    GridMismatchError,
    IntegrationError,
    InvalidBodyError,
    PicardDivergenceError,
)

logger = logging.getLogger(__name__)

# Guarda de escape: max|h| > ESCAPE_FACTOR * escala inicial
ESCAPE_FACTOR = 1e6
MAX_STORED_FRAMES = 1000


# ---------------------------------------------------------------------------
# Funções escalares paramétricas (φ, ψ)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalarFunction:
    """Função escalar ℝ₊ → ℝ referenciada por nome + parâmetros.

    kinds:
      constant  {'value': c}
      rational  {'numerator': [a0, a1, ...], 'denominator': [b0, b1, ...]}  (coeficientes crescentes)
      power     {'c': c, 'p': p}                                           c·sᵖ
      table     {'s': [...], 'values': [...]}                              interpolação linear
    """
    kind: str
    params: Mapping = field(default_factory=dict)

    KINDS = ('constant', 'rational', 'power', 'table')

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f'tipo de função desconhecido: {self.kind!r}')
        params = dict(self.params)
        if self.kind == 'constant':
            params.setdefault('value', 1.0)
        elif self.kind == 'rational':
            if not params.get('numerator') or not params.get('denominator'):
                raise ValueError('rational requer "numerator" e "denominator"')
        elif self.kind == 'power':
            params.setdefault('c', 1.0)
            params.setdefault('p', 1.0)
        elif self.kind == 'table':
            s = np.asarray(params.get('s', ()), dtype=float)
            v = np.asarray(params.get('values', ()), dtype=float)
            if s.size < 2 or s.shape != v.shape or np.any(np.diff(s) <= 0):
                raise ValueError('table requer "s" crescente e "values" do mesmo tamanho (>= 2 pontos)')
        for key, value in params.items():
            if not np.all(np.isfinite(np.asarray(value, dtype=float))):
                raise ValueError(f'parâmetro {key!r} não finito')
        object.__setattr__(self, 'params', params)

    @classmethod
    def constant(cls, value: float) -> 'ScalarFunction':
        return cls('constant', {'value': float(value)})

    @classmethod
    def rational(cls, numerator: Sequence[float], denominator: Sequence[float]) -> 'ScalarFunction':
        return cls('rational', {'numerator': [float(x) for x in numerator],
                                'denominator': [float(x) for x in denominator]})

    @classmethod
    def power(cls, c: float = 1.0, p: float = 1.0) -> 'ScalarFunction':
        return cls('power', {'c': float(c), 'p': float(p)})

    @classmethod
    def table(cls, s: Sequence[float], values: Sequence[float]) -> 'ScalarFunction':
        return cls('table', {'s': [float(x) for x in s], 'values': [float(x) for x in values]})

    @classmethod
    def from_dict(cls, data) -> 'ScalarFunction':
        if isinstance(data, (int, float)):
            return cls.constant(data)
        if not isinstance(data, Mapping) or 'kind' not in data:
            raise ValueError(f'função escalar inválida: {data!r}')
        params = {k: v for k, v in data.items() if k != 'kind'}
        return cls(data['kind'], params)

    def to_dict(self) -> dict:
        return {'kind': self.kind, **self.params}

    def __call__(self, s):
        x = np.asarray(s, dtype=float)
        p = self.params
        if self.kind == 'constant':
            out = np.full_like(x, p['value'])
        elif self.kind == 'rational':
            out = P.polyval(x, p['numerator']) / P.polyval(x, p['denominator'])
        elif self.kind == 'power':
            out = p['c'] * np.power(np.maximum(x, 0.0), p['p'])
        else:
            out = np.interp(x, p['s'], p['values'])
        return float(out) if out.ndim == 0 else out


def _as_scalar_function(f) -> Callable:
    if isinstance(f, ScalarFunction) or callable(f):
        return f
    return ScalarFunction.from_dict(f)


def _scalar(f, s) -> float:
    return float(f(float(s)))


# ---------------------------------------------------------------------------
# Formas da fonte F(V, u)
# ---------------------------------------------------------------------------

class SourceTerm:
    """F(V, u) → corpo (valores da função suporte)."""
    kind = 'abstract'

    def values(self, volume: float, body_values: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, volume: float, body: SupportFunction2D) -> SupportFunction2D:
        return SupportFunction2D(self.values(volume, body.values))

    @property
    def is_zero(self) -> bool:
        return False

    def to_dict(self) -> dict:
        raise NotImplementedError


def _coefficient(psi, volume: float) -> float:
    coef = _scalar(psi, volume)
    if not np.isfinite(coef):
        raise IntegrationError(f'ψ({volume:.6g}) não finito')
    if coef < 0:
        raise InvalidBodyError(f'ψ({volume:.6g}) = {coef:.6g} < 0: escala de Minkowski negativa')
    return coef


@dataclass(frozen=True)
class BallSource(SourceTerm):
    """F = ψ(V)·K."""
    psi: Callable
    kind = 'ball_source'

    def values(self, volume, body_values):
        return np.full(len(body_values), _coefficient(self.psi, volume))

    def to_dict(self):
        return {'kind': self.kind, 'psi': _function_to_dict(self.psi)}


@dataclass(frozen=True)
class LinearBody(SourceTerm):
    """F = ψ(V)·Bu."""
    psi: Callable
    B: LinearOperator2D
    kind = 'linear_body'

    def values(self, volume, body_values):
        coef = _coefficient(self.psi, volume)
        if coef == 0.0:
            return np.zeros(len(body_values))
        return coef * cc.image_values(body_values, self.B)

    def to_dict(self):
        return {'kind': self.kind, 'psi': _function_to_dict(self.psi), 'B': self.B.to_list()}


@dataclass(frozen=True)
class ConstantBody(SourceTerm):
    """F = h_U (conjunto de controles U)."""
    U: SupportFunction2D
    kind = 'constant_body'

    def values(self, volume, body_values):
        if len(body_values) != self.U.grid_size:
            raise GridMismatchError(f'U na grade {self.U.grid_size}, corpo na grade {len(body_values)}')
        return np.array(self.U.values)

    @property
    def is_zero(self):
        return not np.any(self.U.values)

    def to_dict(self):
        return {'kind': self.kind, 'U': self.U.to_dict()}


@dataclass(frozen=True)
class ZeroSource(SourceTerm):
    kind = 'zero'

    def values(self, volume, body_values):
        return np.zeros(len(body_values))

    @property
    def is_zero(self):
        return True

    def to_dict(self):
        return {'kind': self.kind}


def _function_to_dict(f):
    if isinstance(f, ScalarFunction):
        return f.to_dict()
    return {'kind': 'callable', 'name': getattr(f, '__name__', repr(f))}


def source_from_dict(data: Mapping, grid_size: int = cc.DEFAULT_GRID_SIZE) -> SourceTerm:
    kind = data.get('kind')
    if kind == 'zero':
        return ZeroSource()
    if kind == 'ball_source':
        return BallSource(ScalarFunction.from_dict(data.get('psi', 1.0)))
    if kind == 'linear_body':
        return LinearBody(ScalarFunction.from_dict(data.get('psi', 1.0)), LinearOperator2D(data['B']))
    if kind == 'constant_body':
        U = data['U']
        body = SupportFunction2D.from_dict(U) if 'values' in U else None
        if body is None:
            raise ValueError('constant_body requer U com "values" (use o parser de cenários para specs)')
        return ConstantBody(cc.resample(body, grid_size))
    raise ValueError(f'forma de fonte desconhecida: {kind!r}')


@dataclass(frozen=True)
class SemiflowParams:
    """Tripla (A, φ, F)."""
    A: LinearOperator2D
    phi: Callable = field(default_factory=lambda: ScalarFunction.constant(1.0))
    source: SourceTerm = field(default_factory=ZeroSource)

    def __post_init__(self):
        if not isinstance(self.A, LinearOperator2D):
            object.__setattr__(self, 'A', LinearOperator2D(self.A))
        object.__setattr__(self, 'phi', _as_scalar_function(self.phi))

    @property
    def F_form(self) -> SourceTerm:
        return self.source

    def F(self, volume: float, body: SupportFunction2D) -> SupportFunction2D:
        return self.source(volume, body)

    def phi_at(self, volume: float) -> float:
        value = _scalar(self.phi, volume)
        if not np.isfinite(value):
            raise IntegrationError(f'φ({volume:.6g}) não finito')
        if value < 0:
            raise InvalidBodyError(f'φ({volume:.6g}) = {value:.6g} < 0')
        return value

    def to_dict(self) -> dict:
        return {'A': self.A.to_list(), 'phi': _function_to_dict(self.phi), 'source': self.source.to_dict()}


# ---------------------------------------------------------------------------
# Trajetória e funcionais rastreados
# ---------------------------------------------------------------------------

Functional = Callable[[SupportFunction2D], float]


def mixed_functionals(u: SupportFunction2D, B: LinearOperator2D, k: int) -> np.ndarray:
    """W_i[u] = V[u, Bⁱu], i = 0..k-1."""
    if k < 1:
        raise ValueError('k deve ser >= 1')
    out = np.empty(k)
    out[0] = cc.area(u)
    current = u
    for i in range(1, k):
        current = cc.linear_image(current, B)
        out[i] = cc.mixed_area(u, current)
    return out


def tracked_functionals(mixed: Optional[Tuple[LinearOperator2D, int]] = None,
                        reference: Optional[SupportFunction2D] = None,
                        quadrature: str = cc.DEFAULT_QUADRATURE) -> 'OrderedDict[str, Functional]':
    """Funcionais na ordem do CSV: V, perimeter, W0..W(k-1), dH_ref."""
    funcs: 'OrderedDict[str, Functional]' = OrderedDict()
    funcs['V'] = lambda u: cc.area(u, quadrature)
    funcs['perimeter'] = lambda u: cc.perimeter(u, quadrature)
    if mixed is not None:
        B, k = mixed
        for i in range(int(k)):
            funcs[f'W{i}'] = _mixed_power(B, i, quadrature)
    if reference is not None:
        funcs['dH_ref'] = lambda u: cc.hausdorff_distance(u, reference)
    return funcs


def _mixed_power(B: LinearOperator2D, i: int, quadrature: str) -> Functional:
    def functional(u):
        if i == 0:
            return cc.area(u, quadrature)
        current = u
        for _ in range(i):
            current = cc.linear_image(current, B)
        return cc.mixed_area(u, current, quadrature)
    functional.__name__ = f'W{i}'
    return functional


@dataclass
class Trajectory:
    times: np.ndarray
    bodies: List[SupportFunction2D]
    tracked: Dict[str, np.ndarray] = field(default_factory=dict)
    escape_time: Optional[float] = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        n = len(self.times)
        if len(self.bodies) != n:
            raise ValueError(f'{len(self.bodies)} corpos para {n} instantes')
        for name, series in list(self.tracked.items()):
            series = np.asarray(series, dtype=float)
            if series.shape != (n,):
                raise ValueError(f'série {name!r} com tamanho {series.shape}, esperado ({n},)')
            self.tracked[name] = series
        if n and (self.times[0] != 0.0 or np.any(np.diff(self.times) <= 0)):
            raise ValueError('instantes devem começar em 0 e ser estritamente crescentes')

    def __len__(self):
        return len(self.times)

    @property
    def last(self) -> SupportFunction2D:
        return self.bodies[-1]

    @property
    def completed(self) -> bool:
        return self.escape_time is None

    def series(self, name: str) -> np.ndarray:
        try:
            return self.tracked[name]
        except KeyError:
            raise KeyError(f'funcional {name!r} não rastreado (disponíveis: {list(self.tracked)})') from None

    def columns(self) -> List[str]:
        return ['t'] + list(self.tracked)

    def to_rows(self):
        for i, t in enumerate(self.times):
            yield [t] + [self.tracked[name][i] for name in self.tracked]


def _build_trajectory(times, bodies, functionals, **extra) -> Trajectory:
    tracked = OrderedDict((name, np.array([f(b) for b in bodies])) for name, f in functionals.items())
    return Trajectory(np.array(times), list(bodies), tracked, **extra)


# ---------------------------------------------------------------------------
# Integrador
# ---------------------------------------------------------------------------

def _volume(values: np.ndarray) -> float:
    return max(0.0, cc.mixed_area_values(values, values))


def _source_half_step(values: np.ndarray, params: SemiflowParams, tau: float) -> np.ndarray:
    """Heun na soma de Minkowski: u + τ/2 (F(u) + F(u + τF(u)))."""
    if params.source.is_zero or tau == 0.0:
        return values
    k1 = params.source.values(_volume(values), values)
    predictor = values + tau * k1
    k2 = params.source.values(_volume(predictor), predictor)
    return values + 0.5 * tau * (k1 + k2)


def _frozen_time(values: np.ndarray, params: SemiflowParams, dt: float) -> float:
    """τ = φ(V no ponto médio)·dt; sob o fluxo linear V escala por e^{tr A·s}."""
    volume = _volume(values)
    s_half = params.phi_at(volume) * 0.5 * dt
    volume_mid = volume * math.exp(params.A.trace * s_half)
    return params.phi_at(volume_mid) * dt


def _linear_flow(values: np.ndarray, A: LinearOperator2D, tau: float) -> np.ndarray:
    if A.is_zero or tau == 0.0:
        return values
    return cc.image_values(values, expm(A.entries * tau))


def step(u: SupportFunction2D, params: SemiflowParams, dt: float) -> SupportFunction2D:
    """Um passo de Strang: meia fonte, fluxo linear exato com φ congelado, meia fonte."""
    if not dt > 0:
        raise ValueError(f'dt deve ser > 0 (recebido {dt})')
    values = _source_half_step(u.values, params, 0.5 * dt)
    tau = _frozen_time(values, params, dt)
    values = _linear_flow(values, params.A, tau)
    values = _source_half_step(values, params, 0.5 * dt)
    if not np.all(np.isfinite(values)):
        raise IntegrationError('valores não finitos após o passo')
    return SupportFunction2D(cc.ensure_convex(values))


def _step_count(T: float, dt: float) -> int:
    if not T > 0 or not dt > 0:
        raise ValueError(f'T e dt devem ser > 0 (recebido T={T}, dt={dt})')
    return max(1, int(math.ceil(T / dt - 1e-9)))


def evolve(u0: SupportFunction2D, params: SemiflowParams, T: float, dt: float,
           functionals: Optional[Mapping[str, Functional]] = None,
           store_every: Optional[int] = None) -> Trajectory:
    """Integra até T; guarda um quadro a cada ⌈(T/dt)/1000⌉ passos (e o final)."""
    n_steps = _step_count(T, dt)
    h = T / n_steps
    stride = int(store_every) if store_every else max(1, int(math.ceil(n_steps / MAX_STORED_FRAMES)))
    functionals = functionals if functionals is not None else tracked_functionals()
    guard = ESCAPE_FACTOR * max(1.0, cc.norm(u0))

    times, bodies = [0.0], [u0]
    u = u0
    for i in range(1, n_steps + 1):
        u = step(u, params, h)
        t = i * h
        if cc.norm(u) > guard:
            times.append(t)
            bodies.append(u)
            logger.warning('[Semiflow] escape em tempo finito: ‖u‖=%.3e > %.3e em t=%.6g', cc.norm(u), guard, t)
            traj = _build_trajectory(times, bodies, functionals, escape_time=t,
                                     diagnostics={'steps': i, 'dt': h, 'guard': guard})
            raise FiniteEscapeError(f'‖u‖ excedeu {guard:.3e} em t={t:.6g} (< T={T})', t, traj)
        if i % stride == 0 or i == n_steps:
            times.append(t)
            bodies.append(u)
    logger.debug('[Semiflow] evolve: %d passos, %d quadros', n_steps, len(times))
    return _build_trajectory(times, bodies, functionals, diagnostics={'steps': n_steps, 'dt': h, 'stride': stride})


def reach_set(A: LinearOperator2D, U: SupportFunction2D, D0: SupportFunction2D, T: float, dt: float,
              functionals: Optional[Mapping[str, Functional]] = None) -> Trajectory:
    """Conjuntos de atingibilidade D(t, D₀) de x' = Ax + u, u ∈ U: dh/dt = 𝒜h + h_U."""
    params = SemiflowParams(A, ScalarFunction.constant(1.0), ConstantBody(U))
    return evolve(D0, params, T, dt, functionals)


def volume_rate(u: SupportFunction2D, params: SemiflowParams,
                quadrature: str = cc.DEFAULT_QUADRATURE) -> float:
    """dV/dt em t=0: tr A·φ(V)·V + 2·V[u, F(V, u)]."""
    volume = cc.area(u, quadrature)
    source = params.source.values(volume, u.values)
    return params.A.trace * params.phi_at(volume) * volume + 2.0 * cc.mixed_area_values(u.values, source, quadrature)


# ---------------------------------------------------------------------------
# Iteração de Picard (oráculo) e horizonte de contração
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HorizonEstimate:
    T_star: float
    beta: float
    L: float
    H: float
    L1: float
    gamma: float
    r: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def unit_perturbation(rng: np.random.Generator, grid_size: int, modes: int = 8) -> np.ndarray:
    """Polinômio trigonométrico aleatório de grau ``modes`` com sup-norma 1."""
    theta = cc.grid_angles(grid_size)
    k = np.arange(modes + 1)[:, None]
    a = rng.normal(size=(modes + 1, 1))
    b = rng.normal(size=(modes + 1, 1))
    z = np.sum(a * np.cos(k * theta) + b * np.sin(k * theta), axis=0)
    return z / np.max(np.abs(z))


def contraction_horizon(u0: SupportFunction2D, params: SemiflowParams, r: float = 1.0,
                        T0: float = 1.0, max_halvings: int = 40, n_samples: int = 16,
                        rng: Optional[np.random.Generator] = None) -> HorizonEstimate:
    """Estima T* com β = φ(V[u₀]) + L·H·r e constantes de Lipschitz amostradas."""
    rng = rng or np.random.default_rng(0)
    m = u0.grid_size
    v0 = cc.area(u0)
    L = cc.perimeter(u0) + 2.0 * np.pi * r
    lo, hi = max(0.0, v0 - L * r), v0 + L * r
    s = np.linspace(lo, hi, 65)
    phis = np.array([params.phi_at(x) for x in s])
    H = float(np.max(np.abs(np.diff(phis)) / np.diff(s))) if hi > lo else 0.0

    f0 = params.source.values(v0, u0.values)
    L1 = 0.0
    if not params.source.is_zero:
        for _ in range(n_samples):
            rho = r * rng.uniform(0.05, 1.0)
            bump = cc.random_polygon(rng, radius=1.0, grid_size=m, center_spread=0.0).values
            bump = rho * bump / np.max(np.abs(bump))
            w = u0.values + bump
            fw = params.source.values(_volume(w), w)
            L1 = max(L1, float(np.max(np.abs(fw - f0)) / np.max(np.abs(bump))))

    norm_a = params.A.norm()
    beta = params.phi_at(v0) + L * H * r
    mu = cc.norm(u0) + r
    f_norm = float(np.max(np.abs(f0)))
    T = float(T0)
    gamma = float('inf')
    for _ in range(max_halvings):
        growth = math.exp(norm_a * beta * T)
        self_map = (growth - 1.0) * mu + T * growth * (f_norm + L1 * r)
        gamma = T * growth * (norm_a * H * L * mu * (1.0 + T * (f_norm + L1 * r)) + L1)
        if self_map <= r and gamma < 0.5:
            break
        T *= 0.5
    return HorizonEstimate(T_star=T, beta=beta, L=L, H=H, L1=L1, gamma=gamma, r=r)


def _picard_map(u0: SupportFunction2D, frames: List[np.ndarray], times: np.ndarray,
                params: SemiflowParams) -> List[np.ndarray]:
    volumes = np.array([_volume(f) for f in frames])
    phis = np.array([params.phi_at(v) for v in volumes])
    Phi = cumulative_trapezoid(phis, times, initial=0.0)
    A = params.A.entries
    sources = None if params.source.is_zero else [params.source.values(v, f) for v, f in zip(volumes, frames)]
    out = []
    for i in range(len(times)):
        val = cc.image_values(u0.values, expm(A * Phi[i])) if not params.A.is_zero else np.array(u0.values)
        if sources is not None and i > 0:
            dt = np.diff(times[:i + 1])
            weights = np.zeros(i + 1)
            weights[:-1] += 0.5 * dt
            weights[1:] += 0.5 * dt
            for j in range(i + 1):
                pulled = sources[j] if params.A.is_zero else cc.image_values(sources[j], expm(A * (Phi[i] - Phi[j])))
                val = val + weights[j] * pulled
        out.append(cc.ensure_convex(val))
    return out


def picard_solve(u0: SupportFunction2D, params: SemiflowParams, T_small: float, tol: float = 1e-9,
                 max_iter: int = 60, n_nodes: int = 40,
                 functionals: Optional[Mapping[str, Functional]] = None) -> Trajectory:
    """Iteração de ponto fixo do operador integral numa trajetória amostrada em n_nodes+1 instantes."""
    if not T_small > 0:
        raise ValueError('T_small deve ser > 0')
    horizon = contraction_horizon(u0, params)
    if T_small > horizon.T_star:
        logger.warning('[Picard] T=%.4g acima do horizonte estimado T*=%.4g; contração não garantida',
                       T_small, horizon.T_star)
    times = np.linspace(0.0, T_small, int(n_nodes) + 1)
    frames = [np.array(u0.values) for _ in times]
    distances: List[float] = []
    for it in range(1, max_iter + 1):
        new = _picard_map(u0, frames, times, params)
        if not all(np.all(np.isfinite(f)) for f in new):
            raise PicardDivergenceError('valores não finitos na iteração de Picard', distances)
        d = max(float(np.max(np.abs(a - b))) for a, b in zip(new, frames))
        distances.append(d)
        frames = new
        if d < tol:
            break
        if len(distances) >= 3 and d > distances[-2] * (1.0 + 1e-9) + 1e-15:
            logger.warning('[Picard] sem contração: distâncias %s', distances[-3:])
            raise PicardDivergenceError(f'iteração não contrai (d={d:.3e} > {distances[-2]:.3e})', distances)
    else:
        raise PicardDivergenceError(f'sem convergência em {max_iter} iterações (d={distances[-1]:.3e})', distances)
    bodies = [SupportFunction2D(f) for f in frames]
    functionals = functionals if functionals is not None else tracked_functionals()
    return _build_trajectory(times, bodies, functionals,
                             diagnostics={'iterations': len(distances), 'distances': distances,
                                          'horizon': horizon.to_dict()})


def continuity_constant(u0: SupportFunction2D, params: SemiflowParams, T: float, dt: float,
                        n_pairs: int = 4, radius: float = 0.05,
                        rng: Optional[np.random.Generator] = None) -> float:
    """Estimativa amostrada de C(T) em d_H(𝔉ᵀu₁, 𝔉ᵀu₀) ≤ C(T)·d_H(u₁, u₀)."""
    rng = rng or np.random.default_rng(0)
    base = evolve(u0, params, T, dt, functionals={}).last
    worst = 0.0
    for _ in range(n_pairs):
        bump = cc.random_polygon(rng, radius=radius, grid_size=u0.grid_size, center_spread=0.5)
        u1 = cc.minkowski_add(u0, bump)
        d0 = cc.hausdorff_distance(u1, u0)
        if d0 == 0:
            continue
        dT = cc.hausdorff_distance(evolve(u1, params, T, dt, functionals={}).last, base)
        worst = max(worst, dT / d0)
    return worst
