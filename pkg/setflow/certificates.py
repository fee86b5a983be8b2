"""
Critérios de estabilidade em forma fechada.

Linearização em pontos fixos, cotas de existência global, estabilidade na
norma de Hausdorff e os critérios explícitos dos exemplos (bola invariante,
órbitas de B, equação D_H u = Bu, instabilidade por Brunn–Minkowski).
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm
from scipy.optimize import bisect, brentq
from scipy.special import gamma as gamma_fn

from setflow import convex_core as cc
from setflow import semiflow as sf
from setflow.comparison import (
    ComparisonSystem,
    ComparisonTrajectory,
    SampledCheck,
    StabilityVerdict,
    VerdictKind,
    check_xi0_stability,
    integrate,
    linear_system,
    to_jsonable,
)
from setflow.convex_core import LinearOperator2D, SupportFunction2D
from setflow.errors import FiniteEscapeError, PreconditionError

logger = logging.getLogger(__name__)

DEFAULT_FD_STEP = 1e-4
FIXED_POINT_TOL = 1e-3
OPERATOR_NORM_DIRECTIONS = 32
# cond(V) acima disso: A tratada como defectiva
DEFECTIVE_CONDITION = 1e8


# ---------------------------------------------------------------------------
# Constantes do semigrupo linear
# ---------------------------------------------------------------------------

class SemigroupBound(NamedTuple):
    """‖e^{At}‖ ≤ N·e^{αt} para t ≥ 0."""
    N: float
    alpha: float
    defective: bool = False


def semigroup_constants(A) -> SemigroupBound:
    """(N, α) pela decomposição espectral: α = max Re λ, N = cond(V).

    Para A defectiva (autovetores quase paralelos) α recebe uma margem e N é
    o máximo amostrado de ‖e^{At}‖e^{-αt}.
    """
    M = A.entries if isinstance(A, LinearOperator2D) else np.asarray(A, dtype=float)
    eigvals, eigvecs = np.linalg.eig(M)
    alpha = float(np.max(eigvals.real))
    cond = float(np.linalg.cond(eigvecs))
    if np.isfinite(cond) and cond < DEFECTIVE_CONDITION:
        return SemigroupBound(N=max(1.0, cond), alpha=alpha)

    margin = 1e-2 * max(1.0, float(np.linalg.norm(M, 2)))
    alpha += margin
    ts = np.linspace(0.0, 40.0 / margin, 801)
    N = max(float(np.linalg.norm(expm(M * t), 2)) * math.exp(-alpha * t) for t in ts)
    logger.debug('[Certificates] A defectiva: α=%.4g (margem %.1e), N=%.4g', alpha, margin, N)
    return SemigroupBound(N=max(1.0, N), alpha=alpha, defective=True)


def routh_hurwitz(matrix) -> bool:
    """Matriz 2×2 Hurwitz: traço < 0 e determinante > 0."""
    M = np.asarray(matrix, dtype=float)
    return bool(np.trace(M) < 0 and np.linalg.det(M) > 0)


# ---------------------------------------------------------------------------
# Linearização em ponto fixo
# ---------------------------------------------------------------------------

@dataclass
class LinearizationReport:
    gamma0: float
    Delta0: float
    N: float
    alpha: float
    stable: bool
    inequality_values: Tuple[float, float]
    phi: float
    dphi: float
    F_V_norm: float
    F_u_norm: float
    A_norm: float
    volume: float
    fixed_point_defect: float
    omega_matrix: np.ndarray
    routh_hurwitz: bool
    fd_step: float
    richardson: bool = False
    note: str = ('‖F_u‖ estimada por direções amostradas: cota inferior da norma do operador')

    def to_dict(self) -> dict:
        return to_jsonable({
            'gamma0': self.gamma0,
            'Delta0': self.Delta0,
            'N': self.N,
            'alpha': self.alpha,
            'stable': self.stable,
            'inequality_values': list(self.inequality_values),
            'phi': self.phi,
            'dphi': self.dphi,
            'F_V_norm': self.F_V_norm,
            'F_u_norm': self.F_u_norm,
            'A_norm': self.A_norm,
            'volume': self.volume,
            'fixed_point_defect': self.fixed_point_defect,
            'omega_matrix': self.omega_matrix,
            'routh_hurwitz': self.routh_hurwitz,
            'fd_step': self.fd_step,
            'richardson': self.richardson,
            'note': self.note,
        })


def _difference(f, x, h, richardson: bool, one_sided: bool = False):
    """Diferença central (ou progressiva perto de 0); Richardson combina h e h/2."""
    def d(step):
        if one_sided:
            return (f(x + step) - f(x)) / step
        return (f(x + step) - f(x - step)) / (2.0 * step)

    if not richardson:
        return d(h)
    order = 2.0 if one_sided else 4.0
    return (order * d(0.5 * h) - d(h)) / (order - 1.0)


def linearize(u_star: SupportFunction2D, params: sf.SemiflowParams, fd_step: float = DEFAULT_FD_STEP,
              dt: float = 1e-3, tol: float = FIXED_POINT_TOL, n_directions: int = OPERATOR_NORM_DIRECTIONS,
              rng: Optional[np.random.Generator] = None) -> LinearizationReport:
    """Constantes γ₀, Δ₀, N, α da linearização em u* e as duas desigualdades de estabilidade.

    Derivadas por diferenças centrais com passo fd_step·escala; repetidas com
    extrapolação de Richardson quando o veredito fica perto da fronteira.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    defect = cc.hausdorff_distance(sf.step(u_star, params, dt), u_star) / dt
    if defect > tol:
        raise PreconditionError(f'u* não é ponto fixo: d_H(passo, u*)/dt = {defect:.3e} > {tol:.1e}')

    volume = cc.area(u_star)
    values = np.array(u_star.values)
    h_v = fd_step * max(1.0, volume)
    h_u = fd_step * max(1.0, cc.norm(u_star))
    near_zero = volume < h_v
    directions = [sf.unit_perturbation(rng, u_star.grid_size) for _ in range(int(n_directions))]
    bound = semigroup_constants(params.A)
    trA, norm_a = params.A.trace, params.A.norm()
    phi = params.phi_at(volume)

    def assemble(richardson: bool):
        dphi = _difference(lambda s: sf._scalar(params.phi, s), volume, h_v, richardson, near_zero)
        F_V = _difference(lambda s: params.source.values(max(s, 0.0), values), volume, h_v, richardson, near_zero)
        F_u_norm = 0.0
        if not params.source.is_zero:
            for z in directions:
                D = _difference(lambda e: params.source.values(volume, values + e * z), 0.0, h_u, richardson)
                F_u_norm = max(F_u_norm, float(np.max(np.abs(D))))
        F_V_norm = float(np.max(np.abs(F_V)))
        gamma0 = trA * (phi + volume * dphi) + 2.0 * cc.mixed_area_values(values, F_V)
        f_star = params.source.values(volume, values)
        Delta0 = cc.perimeter(SupportFunction2D(f_star)) + F_u_norm * cc.perimeter(u_star)
        decay = bound.alpha * phi + bound.N * F_u_norm
        coupling = norm_a * abs(dphi) + F_V_norm
        second = decay * gamma0 + bound.N * Delta0 * coupling
        omega = np.array([[decay, coupling], [bound.N * Delta0, gamma0]])
        return dict(gamma0=float(gamma0), Delta0=float(Delta0), dphi=float(dphi), F_V_norm=F_V_norm,
                    F_u_norm=F_u_norm, second=float(second), omega=omega)

    parts = assemble(False)
    boundary = 10.0 * fd_step * max(1.0, abs(trA) * phi, parts['Delta0'])
    richardson = abs(parts['gamma0']) < boundary or abs(parts['second']) < boundary
    if richardson:
        logger.info('[Certificates] linearização perto da fronteira; aplicando Richardson')
        parts = assemble(True)

    gamma0, second = parts['gamma0'], parts['second']
    rh = routh_hurwitz(parts['omega'])
    stable = gamma0 < 0 and second > 0
    if stable != rh:
        logger.info('[Certificates] desigualdades (%s) e Routh–Hurwitz (%s) divergem', stable, rh)
    return LinearizationReport(
        gamma0=gamma0, Delta0=parts['Delta0'], N=bound.N, alpha=bound.alpha, stable=stable,
        inequality_values=(gamma0, second), phi=phi, dphi=parts['dphi'], F_V_norm=parts['F_V_norm'],
        F_u_norm=parts['F_u_norm'], A_norm=norm_a, volume=volume, fixed_point_defect=defect,
        omega_matrix=parts['omega'], routh_hurwitz=rh, fd_step=fd_step, richardson=richardson,
    )


def omega_system(report: LinearizationReport) -> ComparisonSystem:
    """Sistema 2×2 (ω, desvio de volume) da linearização."""
    sys = linear_system(report.omega_matrix, name='omega')
    return ComparisonSystem(2, sys.rhs, name='omega', quasimonotone=sys.quasimonotone,
                            parameters={'matrix': report.omega_matrix, 'routh_hurwitz': report.routh_hurwitz})


# ---------------------------------------------------------------------------
# Bola invariante: F = ψ(V)K, A = -I
# ---------------------------------------------------------------------------

class FixedPoint(NamedTuple):
    lambda0: float
    u_star: Optional[SupportFunction2D]
    verdict: StabilityVerdict


def example51_fixed_point(phi, psi, n: int = 2, bracket: Tuple[float, float] = (1e-8, 1e8),
                          grid_size: int = cc.DEFAULT_GRID_SIZE) -> FixedPoint:
    """Raiz de λ = (ψ(λ)/φ(λ))ⁿ π^{n/2}/Γ(1+n/2) e veredito pela derivada de ln(λφ/ψ).

    u* = (ψ/φ)(λ₀)·K só é construído no plano (n = 2).
    """
    n = int(n)
    ball_volume = math.pi ** (n / 2.0) / gamma_fn(1.0 + n / 2.0)

    def ratio(lam):
        return sf._scalar(psi, lam) / sf._scalar(phi, lam)

    def g(lam):
        return lam - ratio(lam) ** n * ball_volume

    grid = np.geomspace(bracket[0], bracket[1], 161)
    values = np.array([g(x) for x in grid])
    exact = np.flatnonzero(values == 0.0)
    crossing = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
    if exact.size:
        lam0 = float(grid[exact[0]])
    elif crossing.size:
        i = int(crossing[0])
        lam0 = float(brentq(g, grid[i], grid[i + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200))
    else:
        raise PreconditionError(f'sem troca de sinal de λ - (ψ/φ)ⁿ·|K| em [{bracket[0]:g}, {bracket[1]:g}]')

    h = 1e-5 * lam0
    log_derivative = (math.log(lam0 + h) + math.log(ratio(lam0 - h)) - math.log(lam0 - h)
                      - math.log(ratio(lam0 + h))) / (2.0 * h)
    kind = VerdictKind.STABLE if log_derivative > 0 else VerdictKind.UNSTABLE
    radius = ratio(lam0)
    verdict = StabilityVerdict(kind, margins={'log_derivative': log_derivative},
                               parameters={'lambda0': lam0, 'n': n, 'radius': radius, 'ball_volume': ball_volume},
                               samples=0, note='condição analítica d/dλ ln(λφ/ψ) > 0 por diferença central')
    u_star = cc.make_ball(radius, grid_size=grid_size) if n == 2 else None
    logger.info('[Certificates] λ₀=%.12g, raio=%.6g, %s', lam0, radius, kind.value)
    return FixedPoint(lam0, u_star, verdict)


def example51_gamma0(phi, psi, lam0: float, n: int = 2, h: Optional[float] = None) -> float:
    """γ₀ = -n[φ(λ₀) + λ₀ψ(λ₀)·d/dλ(φ/ψ)(λ₀)]."""
    h = h or 1e-5 * max(1.0, lam0)

    def q(lam):
        return sf._scalar(phi, lam) / sf._scalar(psi, lam)

    dq = (q(lam0 + h) - q(lam0 - h)) / (2.0 * h)
    return -n * (sf._scalar(phi, lam0) + lam0 * sf._scalar(psi, lam0) * dq)


# ---------------------------------------------------------------------------
# Órbitas de B (Bᵏ = I)
# ---------------------------------------------------------------------------

def _cubic(lam):
    return 3.0 * lam ** 3 + 14.0 * lam ** 2 - 16.0


def cubic_lambda_star() -> float:
    """Menor raiz positiva de 3λ³ + 14λ² - 16 = 0 (limiar de ψ/φ para k = 3)."""
    return float(bisect(_cubic, 0.0, 2.0, xtol=1e-13, maxiter=200))


def lyapunov_ratio_condition(phi, psi, k: int, s_grid: Optional[Sequence[float]] = None) -> SampledCheck:
    """inf φ > 0, sup φ < ∞ e sup ψ/φ < 1 (k = 2) ou < λ* (k = 3) na grade de s."""
    k = int(k)
    if k == 2:
        bound = 1.0
    elif k == 3:
        bound = cubic_lambda_star()
    else:
        raise ValueError(f'condição de razão disponível para k = 2 ou 3 (recebido {k})')
    s = np.geomspace(1e-6, 1e6, 241) if s_grid is None else np.asarray(s_grid, dtype=float)
    phis = np.array([sf._scalar(phi, x) for x in s])
    psis = np.array([sf._scalar(psi, x) for x in s])
    if not (np.all(np.isfinite(phis)) and np.all(np.isfinite(psis))):
        return SampledCheck('lyapunov_ratio', False, float('inf'), len(s),
                            witness={'reason': 'φ ou ψ não finitos na grade', 'bound': bound})
    inf_phi = float(phis.min())
    ratios = np.where(phis > 0, psis / np.where(phis > 0, phis, 1.0), np.inf)
    j = int(np.argmax(ratios))
    sup_ratio = float(ratios[j])
    monotone = bool(np.all(np.diff(phis) <= 1e-12) and np.all(np.diff(psis) >= -1e-12))
    passed = inf_phi > 0 and sup_ratio < bound
    return SampledCheck('lyapunov_ratio', passed, sup_ratio - bound, len(s),
                        witness={'k': k, 'bound': bound, 'inf_phi': inf_phi, 'sup_phi': float(phis.max()),
                                 'sup_ratio': sup_ratio, 's_at_sup': float(s[j]), 'wazewski_monotone': monotone},
                        note='condição suficiente avaliada numa grade finita de s')


def example53_area_k2(W: Sequence[float], t):
    """S(t) = ½e⁻ᵗ(W₀ + W₁) + ½e⁻³ᵗ(W₀ - W₁) para φ = 1, ψ = ½, B² = I."""
    W0, W1 = float(W[0]), float(W[1])
    t = np.asarray(t, dtype=float)
    return 0.5 * np.exp(-t) * (W0 + W1) + 0.5 * np.exp(-3.0 * t) * (W0 - W1)


def example53_area_k4(W: Sequence[float], t):
    """Área para B = J, φ = 1, ψ = ½; W₃ = W₁ quando omitido (sempre vale para rotações)."""
    W0, W1, W2 = (float(x) for x in W[:3])
    W3 = float(W[3]) if len(W) > 3 else W1
    t = np.asarray(t, dtype=float)
    return (np.exp(-t) * (2 * W0 + 3 * W1 + 2 * W2 + W3) / 8.0
            + np.exp(-3.0 * t) * (2 * W0 - 3 * W1 + 2 * W2 - W3) / 8.0
            + 0.5 * np.exp(-2.0 * t) * (W0 - W2)
            + 0.25 * t * np.exp(-2.0 * t) * (W1 - W3))


def example53_segment_area(N: float, t):
    """S[𝔉ᵗ(u_N)] = ¼(e⁻ᵗ - e⁻³ᵗ)N² para o segmento de comprimento N."""
    t = np.asarray(t, dtype=float)
    return 0.25 * (np.exp(-t) - np.exp(-3.0 * t)) * float(N) ** 2


# ---------------------------------------------------------------------------
# D_H u = Bu
# ---------------------------------------------------------------------------

def _as_operator(B) -> LinearOperator2D:
    return B if isinstance(B, LinearOperator2D) else LinearOperator2D(B)


class Example54Mu(NamedTuple):
    """Autovalores de [[0, 2], [2|det B|, tr B]] e os valores da fórmula (4|det B| ± √(tr²B + 16|det B|))/2."""
    mu_plus: float
    mu_minus: float
    paper_values: Tuple[float, float]

    @property
    def disagrees(self) -> bool:
        scale = max(1.0, abs(self.mu_plus), abs(self.mu_minus))
        return (abs(self.mu_plus - self.paper_values[0]) > 1e-9 * scale
                or abs(self.mu_minus - self.paper_values[1]) > 1e-9 * scale)

    def to_dict(self) -> dict:
        return to_jsonable({'mu_plus': self.mu_plus, 'mu_minus': self.mu_minus,
                            'formula_values': list(self.paper_values), 'disagrees': self.disagrees,
                            'trusted': 'eigenvalues'})


def _check_example54(B: LinearOperator2D):
    if not (B.det < 0 and B.trace >= 0):
        raise PreconditionError(f'requer det B < 0 e tr B >= 0 (det={B.det:.6g}, tr={B.trace:.6g})')


def example54_mu(B) -> Example54Mu:
    B = _as_operator(B)
    _check_example54(B)
    det, tr = abs(B.det), B.trace
    root = math.sqrt(tr * tr + 16.0 * det)
    formula = ((4.0 * det + root) / 2.0, (4.0 * det - root) / 2.0)
    eig = np.sort(np.linalg.eigvals(np.array([[0.0, 2.0], [2.0 * det, tr]])).real)[::-1]
    result = Example54Mu(float(eig[0]), float(eig[1]), formula)
    if result.disagrees:
        logger.warning('[Certificates] μ± da fórmula %s diferem dos autovalores (%.6g, %.6g); '
                       'veredito segue a integração direta', formula, result.mu_plus, result.mu_minus)
    return result


def example54_area_bound(B, W0: float, W1: float, t, mu: Optional[Tuple[float, float]] = None):
    """Cota S ≤ ((2W₁ - μ₋W₀)e^{μ₊t} + (μ₊W₀ - 2W₁)e^{μ₋t})/√(tr²B + 16|det B|).

    Com os autovalores (padrão) é a solução exata de ξ₀ com ξ(0) = (W₀, W₁).
    """
    B = _as_operator(B)
    det, tr = abs(B.det), B.trace
    root = math.sqrt(tr * tr + 16.0 * det)
    if mu is None:
        mu = np.sort(np.linalg.eigvals(np.array([[0.0, 2.0], [2.0 * det, tr]])).real)[::-1]
    mu_p, mu_m = float(mu[0]), float(mu[1])
    t = np.asarray(t, dtype=float)
    return ((2.0 * W1 - mu_m * W0) * np.exp(mu_p * t) + (mu_p * W0 - 2.0 * W1) * np.exp(mu_m * t)) / root


def example54_practical_criterion(B, lam: float, A_bound: float, T: float) -> Dict:
    """2 + (2 - μ₋)e^{μ₊T} < A√(tr²B + 16|det B|)/λ com as duas versões de μ±."""
    B = _as_operator(B)
    mu = example54_mu(B)
    det, tr = abs(B.det), B.trace
    root = math.sqrt(tr * tr + 16.0 * det)
    rhs = A_bound * root / lam
    rows = {}
    for name, (mu_p, mu_m) in (('eigen', (mu.mu_plus, mu.mu_minus)), ('formula', mu.paper_values)):
        lhs = 2.0 + (2.0 - mu_m) * math.exp(mu_p * T)
        rows[name] = {'mu_plus': mu_p, 'mu_minus': mu_m, 'lhs': lhs, 'rhs': rhs, 'holds': lhs < rhs}
    xi0_T = float(example54_area_bound(B, lam, lam, T))
    return to_jsonable({'lambda': lam, 'A': A_bound, 'T': T, 'variants': rows, 'xi0_T': xi0_T,
                        'exact_holds': xi0_T < A_bound, 'disagrees': mu.disagrees})


# ---------------------------------------------------------------------------
# Instabilidade por Brunn–Minkowski: F = ψ(V)K
# ---------------------------------------------------------------------------

def example55_instability(phi, psi, trA: float, s_grid: Optional[Sequence[float]] = None) -> StabilityVerdict:
    """liminf_{s→0+} √(π/s)·ψ(s)/φ(s) > -tr A/2 ⇒ instável em (S, S).

    O liminf é estimado pelo mínimo na metade final de uma grade decrescente.
    """
    s = np.geomspace(1e-1, 1e-12, 45) if s_grid is None else np.sort(np.asarray(s_grid, float))[::-1]
    phis = np.array([sf._scalar(phi, x) for x in s])
    if np.any(phis <= 0) or not np.all(np.isfinite(phis)):
        raise PreconditionError('φ deve ser positiva e finita na grade de prova')
    q = np.sqrt(math.pi / s) * np.array([sf._scalar(psi, x) for x in s]) / phis
    tail = q[len(q) // 2:]
    estimate = float(np.min(tail))
    threshold = -float(trA) / 2.0
    margin = estimate - threshold
    kind = VerdictKind.UNSTABLE if margin > 0 else VerdictKind.INCONCLUSIVE
    return StabilityVerdict(kind, margins={'liminf_estimate': estimate, 'threshold': threshold, 'margin': margin},
                            parameters={'trA': trA, 's_min': float(s[-1]), 's_max': float(s[0]),
                                        'tail_points': int(tail.size)},
                            samples=int(s.size), note='liminf estimado numa grade finita de s → 0+')


# ---------------------------------------------------------------------------
# Existência global
# ---------------------------------------------------------------------------

@dataclass
class ExistenceBounds:
    """Funções de cota fornecidas pelo chamador.

    g_upper(ζ), g_lower(χ): cotas de 2V[u, F] em termos do volume.
    F_plus(t, w, V0): cota de ‖F(V, u)‖ para ‖u‖ ≤ w.
    Lambda_pm: par opcional (Λ₊(t, V0), Λ₋(t, V0)); sem ele Λ vem de φ amostrada em [χ₋, ζ⁺].
    """
    g_upper: Callable
    g_lower: Callable
    F_plus: Callable
    Lambda_pm: Optional[Tuple[Callable, Callable]] = None


@dataclass
class GlobalExistenceReport:
    zeta_plus: ComparisonTrajectory
    chi_minus: ComparisonTrajectory
    omega_plus: Optional[ComparisonTrajectory]
    finite: bool
    blowup_time: Optional[float]
    N: float
    alpha: float
    norm_check: Optional[Dict] = None

    def to_dict(self) -> dict:
        def summary(traj):
            if traj is None:
                return None
            return {'t_end': float(traj.times[-1]), 'final': float(traj.values[0, -1]),
                    'max': float(traj.values[0].max()), 'blowup_time': traj.blowup_time}

        return to_jsonable({'finite': self.finite, 'blowup_time': self.blowup_time, 'N': self.N,
                            'alpha': self.alpha, 'zeta_plus': summary(self.zeta_plus),
                            'chi_minus': summary(self.chi_minus), 'omega_plus': summary(self.omega_plus),
                            'norm_check': self.norm_check})


def _scalar_system(name: str, f: Callable) -> ComparisonSystem:
    def rhs(t, xi):
        x = max(float(np.ravel(xi)[0]), 0.0)
        return np.array([f(t, x)])

    return ComparisonSystem(1, rhs, name=name, autonomous=False)


def global_existence_report(params: sf.SemiflowParams, bounds: ExistenceBounds, u0: SupportFunction2D,
                            T: float, dt: float = 1e-2, cross_check: bool = True,
                            evolve_dt: Optional[float] = None, rel_tol: float = 1e-3) -> GlobalExistenceReport:
    """Integra ζ⁺, χ₋ e ω⁺ em [0, T] e confere ‖𝔉ᵗ(u₀)‖ ≤ Nω⁺(t) numa trajetória simulada."""
    V0 = cc.area(u0)
    trA = params.A.trace
    bound = semigroup_constants(params.A)

    def phi(x):
        return params.phi_at(x)

    zeta = integrate(_scalar_system('zeta_plus', lambda t, x: trA * phi(x) * x + bounds.g_upper(x)), [V0], T, dt)
    chi = integrate(_scalar_system('chi_minus', lambda t, x: trA * phi(x) * x + bounds.g_lower(x)), [V0], T, dt)
    blowups = [b for b in (zeta.blowup_time, chi.blowup_time) if b is not None]
    blowup = min(blowups) if blowups else None
    T_eff = blowup if blowup is not None else T

    def Lam(t):
        if bounds.Lambda_pm is not None:
            f = bounds.Lambda_pm[0] if bound.alpha >= 0 else bounds.Lambda_pm[1]
            return float(f(t, V0))
        lo, hi = sorted((float(chi.at(min(t, chi.times[-1]))[0]), float(zeta.at(min(t, zeta.times[-1]))[0])))
        samples = np.array([phi(s) for s in np.linspace(lo, hi, 17)])
        return float(samples.max() if bound.alpha > 0 else samples.min())

    omega = None
    if T_eff > 0:
        omega = integrate(_scalar_system('omega_plus', lambda t, w: bound.alpha * Lam(t) * w
                                         + bounds.F_plus(t, bound.N * w, V0)),
                          [cc.norm(u0)], T_eff, dt)
        if omega.blowup_time is not None:
            blowup = omega.blowup_time if blowup is None else min(blowup, omega.blowup_time)
    finite = blowup is None
    if not finite:
        logger.warning('[Certificates] cota de existência explode em t=%.6g', blowup)

    norm_check = None
    if cross_check and finite and omega is not None:
        norm_check = _norm_cross_check(u0, params, omega, bound.N, T, evolve_dt or dt, rel_tol)
    return GlobalExistenceReport(zeta_plus=zeta, chi_minus=chi, omega_plus=omega, finite=finite,
                                 blowup_time=blowup, N=bound.N, alpha=bound.alpha, norm_check=norm_check)


def _norm_cross_check(u0, params, omega: ComparisonTrajectory, N: float, T: float, dt: float,
                      rel_tol: float) -> Dict:
    try:
        traj = sf.evolve(u0, params, T, dt, functionals={})
    except FiniteEscapeError as exc:
        return {'passed': False, 'escape_time': exc.reached_time}
    norms = np.array([cc.norm(b) for b in traj.bodies])
    limit = N * np.interp(traj.times, omega.times, omega.values[0])
    excess = norms - limit - rel_tol * np.maximum(1.0, limit)
    j = int(np.argmax(excess))
    return {'passed': bool(excess[j] <= 0.0), 'worst_time': float(traj.times[j]),
            'norm': float(norms[j]), 'bound': float(limit[j]), 'frames': int(norms.size)}


# ---------------------------------------------------------------------------
# Estabilidade na métrica de Hausdorff
# ---------------------------------------------------------------------------

@dataclass
class HausdorffBounds:
    """Λ̂(t) e F̂⁺(t, w) já tomados como sup/inf na bola B_r(0)."""
    Lambda_hat: Callable
    F_hat: Callable


def hausdorff_stability_report(params: sf.SemiflowParams, bounds: Union[HausdorffBounds, LinearizationReport],
                               r: float = 1.0, T_check: float = 50.0, eps_grid: Optional[Sequence[float]] = None,
                               rng: Optional[np.random.Generator] = None) -> StabilityVerdict:
    """Estabilidade em (‖u‖, ‖u‖) via dω/dt = αΛ̂(t)ω + F̂⁺(t, Nω)."""
    eps_grid = tuple(eps_grid) if eps_grid is not None else (0.1 * r, 0.01 * r, 0.001 * r)
    if isinstance(bounds, LinearizationReport):
        verdict = check_xi0_stability(omega_system(bounds), eps_grid=eps_grid, T_check=T_check, rng=rng)
        verdict.parameters.update(source='linearization', routh_hurwitz=bounds.routh_hurwitz, measures='norm')
        return verdict

    bound = semigroup_constants(params.A)
    F_hat = np.vectorize(lambda t, w: float(bounds.F_hat(float(t), float(w))), otypes=[float])
    forcing = float(F_hat(0.0, 0.0))
    parameters = {'alpha': bound.alpha, 'N': bound.N, 'r': r, 'measures': 'norm', 'T_check': T_check}
    if forcing > 0:
        sys = _scalar_system('omega_hat', lambda t, w: bound.alpha * float(bounds.Lambda_hat(t)) * w
                             + float(F_hat(t, bound.N * w)))
        traj = integrate(sys, [0.0], T_check, dt=T_check / 200.0)
        grown = float(traj.values[0].max())
        return StabilityVerdict(VerdictKind.UNSTABLE,
                                margins={'F_hat_at_zero': forcing, 'omega_max_from_zero': grown},
                                parameters=parameters, samples=1,
                                note='F̂⁺(t, 0) > 0: ω parte de 0 e não permanece em 0')

    def rhs(t, xi):
        w = np.asarray(xi, dtype=float)[0]
        return np.stack((bound.alpha * float(bounds.Lambda_hat(t)) * w + F_hat(t, bound.N * w),))

    sys = ComparisonSystem(1, rhs, name='omega_hat', quasimonotone=True, autonomous=False)
    verdict = check_xi0_stability(sys, eps_grid=eps_grid, T_check=T_check, rng=rng)
    verdict.parameters.update(parameters)
    return verdict
