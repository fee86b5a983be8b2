"""
Cálculo de funções suporte para compactos convexos planares.

Um corpo convexo u é representado pelos valores h_u(θ_j) numa grade angular
uniforme θ_j = 2πj/M. Soma de Minkowski, escala e imagem linear atuam
diretamente sobre os valores; áreas e áreas mistas usam uma quadratura fixa.

Quadraturas disponíveis:
- ``polygonal`` (padrão): trata os valores como o polígono circunscrito pelas
  retas suporte amostradas. Exata para polígonos com normais na grade,
  erro O(M⁻²) para corpos suaves.
- ``spectral``: h'' via DFT e regra do trapézio. Exata para h de banda limitada.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.interpolate import CubicSpline

from setflow.errors import GridMismatchError, InvalidBodyError, InvalidOperatorError

logger = logging.getLogger(__name__)

DEFAULT_GRID_SIZE = 512
MIN_GRID_SIZE = 16
QUADRATURES = ('polygonal', 'spectral')
DEFAULT_QUADRATURE = 'polygonal'

# Constante C de tol_interp = C / M²
INTERPOLATION_CONSTANT = 10.0
# Posições de amostragem a menos disso de um inteiro usam indexação exata
_GRID_SNAP = 1e-9


def convexity_tolerance(values) -> float:
    return 1e-8 * max(1.0, float(np.max(np.abs(values))) if len(values) else 1.0)


def inequality_tolerance(scale: float) -> float:
    return 1e-6 * max(1.0, abs(float(scale)))


def interpolation_tolerance(grid_size: int) -> float:
    return INTERPOLATION_CONSTANT / float(grid_size) ** 2


@lru_cache(maxsize=32)
def _grid(grid_size: int) -> Tuple[np.ndarray, np.ndarray]:
    theta = 2.0 * np.pi * np.arange(grid_size) / grid_size
    directions = np.column_stack((np.cos(theta), np.sin(theta)))
    theta.setflags(write=False)
    directions.setflags(write=False)
    return theta, directions


def grid_angles(grid_size: int) -> np.ndarray:
    return _grid(grid_size)[0]


def grid_directions(grid_size: int) -> np.ndarray:
    """Vetores unitários p_j = (cos θ_j, sin θ_j), shape (M, 2)."""
    return _grid(grid_size)[1]


def _check_grid_size(grid_size: int) -> int:
    grid_size = int(grid_size)
    if grid_size < MIN_GRID_SIZE or grid_size % 2:
        raise InvalidBodyError(f'grid_size deve ser par e >= {MIN_GRID_SIZE} (recebido {grid_size})')
    return grid_size


@dataclass(frozen=True, eq=False)
class SupportFunction2D:
    """Compacto convexo planar como valores da função suporte na grade.

    A construção direta não valida convexidade (perturbações e diferenças
    de corpos também passam por aqui); use ``validate`` para isso.
    """
    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float).ravel()
        arr.setflags(write=False)
        object.__setattr__(self, 'values', arr)

    @property
    def grid_size(self) -> int:
        return int(self.values.shape[0])

    def __len__(self):
        return self.grid_size

    def to_dict(self) -> dict:
        return {'grid_size': self.grid_size, 'values': [float(v) for v in self.values]}

    @classmethod
    def from_dict(cls, data: dict) -> 'SupportFunction2D':
        values = data.get('values')
        if values is None:
            raise InvalidBodyError('registro de corpo sem "values"')
        body = cls(values)
        declared = data.get('grid_size')
        if declared is not None and int(declared) != body.grid_size:
            raise InvalidBodyError(f'grid_size={declared} difere do número de valores ({body.grid_size})')
        return body


@dataclass(frozen=True, eq=False)
class LinearOperator2D:
    """Operador linear do plano (matriz 2x2, linha a linha)."""
    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.shape != (2, 2):
            raise InvalidOperatorError(f'matriz 2x2 esperada, recebido shape {arr.shape}')
        if not np.all(np.isfinite(arr)):
            raise InvalidOperatorError('entradas da matriz devem ser finitas')
        arr.setflags(write=False)
        object.__setattr__(self, 'entries', arr)

    @classmethod
    def identity(cls) -> 'LinearOperator2D':
        return cls(np.eye(2))

    @classmethod
    def zero(cls) -> 'LinearOperator2D':
        return cls(np.zeros((2, 2)))

    @classmethod
    def rotation(cls, angle: float) -> 'LinearOperator2D':
        c, s = np.cos(angle), np.sin(angle)
        return cls([[c, -s], [s, c]])

    @classmethod
    def from_rows(cls, rows) -> 'LinearOperator2D':
        return cls(rows)

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries))

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.entries))

    @property
    def is_zero(self) -> bool:
        return not np.any(self.entries)

    def norm(self) -> float:
        """Norma espectral ‖M‖₂."""
        return float(np.linalg.norm(self.entries, 2))

    def transpose(self) -> 'LinearOperator2D':
        return LinearOperator2D(self.entries.T)

    def power(self, k: int) -> 'LinearOperator2D':
        return LinearOperator2D(np.linalg.matrix_power(self.entries, int(k)))

    def scaled(self, factor: float) -> 'LinearOperator2D':
        return LinearOperator2D(self.entries * float(factor))

    def __matmul__(self, other: 'LinearOperator2D') -> 'LinearOperator2D':
        return LinearOperator2D(self.entries @ other.entries)

    def to_list(self) -> List[List[float]]:
        return [[float(x) for x in row] for row in self.entries]


# Rotação por π/2 (operador J dos exemplos com segmentos)
ROTATION_90 = LinearOperator2D([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class MixedAreaReport:
    V_u: float
    V_v: float
    V_uv: float
    bm_slack: float

    def to_dict(self) -> dict:
        return {'V_u': self.V_u, 'V_v': self.V_v, 'V_uv': self.V_uv, 'bm_slack': self.bm_slack}


class NoDifference:
    """Resultado de ``hukuhara_difference`` quando u ⊖ v não existe."""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        return False

    def __repr__(self):
        return 'NoDifference()'

    def __str__(self):
        return 'no difference'


NO_DIFFERENCE = NoDifference()


# ---------------------------------------------------------------------------
# Construção
# ---------------------------------------------------------------------------

def make_ball(radius: float, center=(0.0, 0.0), grid_size: int = DEFAULT_GRID_SIZE) -> SupportFunction2D:
    radius = float(radius)
    if not np.isfinite(radius) or radius < 0:
        raise InvalidBodyError(f'raio deve ser finito e >= 0 (recebido {radius})')
    grid_size = _check_grid_size(grid_size)
    c = np.asarray(center, dtype=float).reshape(2)
    return SupportFunction2D(radius + grid_directions(grid_size) @ c)


def make_point(point, grid_size: int = DEFAULT_GRID_SIZE) -> SupportFunction2D:
    return make_ball(0.0, point, grid_size)


def make_polygon(vertices, grid_size: int = DEFAULT_GRID_SIZE) -> SupportFunction2D:
    """Função suporte do fecho convexo dos vértices: h(θ_j) = max v·p_j."""
    pts = np.asarray(vertices, dtype=float)
    if pts.size == 0:
        raise InvalidBodyError('lista de vértices vazia')
    pts = pts.reshape(-1, 2)
    if not np.all(np.isfinite(pts)):
        raise InvalidBodyError('vértices devem ser finitos')
    grid_size = _check_grid_size(grid_size)
    return SupportFunction2D(np.max(grid_directions(grid_size) @ pts.T, axis=1))


def make_segment(length: float, angle: float = 0.0, center=(0.0, 0.0),
                 grid_size: int = DEFAULT_GRID_SIZE) -> SupportFunction2D:
    """Segmento de comprimento ``length`` centrado em ``center`` (u_N para angle=0)."""
    if length < 0:
        raise InvalidBodyError(f'comprimento negativo: {length}')
    half = 0.5 * float(length) * np.array([np.cos(angle), np.sin(angle)])
    c = np.asarray(center, dtype=float).reshape(2)
    return make_polygon([c - half, c + half], grid_size)


def make_rectangle(width: float, height: float, center=(0.0, 0.0),
                   grid_size: int = DEFAULT_GRID_SIZE) -> SupportFunction2D:
    if width < 0 or height < 0:
        raise InvalidBodyError(f'dimensões negativas: {width}x{height}')
    w, h = 0.5 * float(width), 0.5 * float(height)
    c = np.asarray(center, dtype=float).reshape(2)
    return make_polygon(c + np.array([[-w, -h], [w, -h], [w, h], [-w, h]]), grid_size)


def random_polygon(rng: np.random.Generator, n_vertices: int = 7, radius: float = 1.0,
                   grid_size: int = DEFAULT_GRID_SIZE, center_spread: float = 0.5) -> SupportFunction2D:
    """Polígono convexo aleatório (fecho de pontos em coroa), para verificações amostradas."""
    angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, n_vertices))
    radii = radius * rng.uniform(0.3, 1.0, n_vertices)
    center = rng.uniform(-center_spread, center_spread, 2) * radius
    pts = center + np.column_stack((radii * np.cos(angles), radii * np.sin(angles)))
    return make_polygon(pts, grid_size)


# ---------------------------------------------------------------------------
# Álgebra de Minkowski
# ---------------------------------------------------------------------------

def _same_grid(u: SupportFunction2D, v: SupportFunction2D):
    if u.grid_size != v.grid_size:
        raise GridMismatchError(f'grades diferentes: {u.grid_size} != {v.grid_size}')


def minkowski_add(u: SupportFunction2D, v: SupportFunction2D) -> SupportFunction2D:
    _same_grid(u, v)
    return SupportFunction2D(u.values + v.values)


def scale(u: SupportFunction2D, factor: float) -> SupportFunction2D:
    factor = float(factor)
    if factor < 0:
        raise InvalidBodyError(f'fator de escala negativo: {factor}')
    return SupportFunction2D(u.values * factor)


def second_differences(values) -> np.ndarray:
    """h_{j-1} + h_{j+1} - 2 cos Δ h_j, ≥ 0 exatamente para amostras de funções suporte."""
    h = np.asarray(values, dtype=float)
    delta = 2.0 * np.pi / h.shape[0]
    return np.roll(h, 1) + np.roll(h, -1) - 2.0 * np.cos(delta) * h


def edge_lengths(values) -> np.ndarray:
    """Comprimentos das arestas do polígono circunscrito pelas retas suporte.

    ℓ_j = (h_{j-1} + h_{j+1} - 2 cos Δ h_j) / sin Δ, a forma discreta de (h + h'')Δ.
    """
    h = np.asarray(values, dtype=float)
    return second_differences(h) / np.sin(2.0 * np.pi / h.shape[0])


def convexity_defect(values) -> float:
    """Maior violação (≥ 0) da condição de convexidade discreta."""
    return float(max(0.0, -np.min(second_differences(values))))


def is_convex(values) -> bool:
    return convexity_defect(values) <= convexity_tolerance(values)


def support_points(u) -> np.ndarray:
    """Vértices entre retas suporte consecutivas, shape (M, 2).

    O ponto j é a interseção das retas j e j+1, vértice do polígono circunscrito.
    """
    h = np.asarray(getattr(u, 'values', u), dtype=float)
    m = h.shape[0]
    theta = grid_angles(m)
    h_next = np.roll(h, -1)
    th_next = np.roll(theta, -1)
    sin_delta = np.sin(2.0 * np.pi / m)
    x = (h * np.sin(th_next) - h_next * np.sin(theta)) / sin_delta
    y = (h_next * np.cos(theta) - h * np.cos(th_next)) / sin_delta
    return np.column_stack((x, y))


def _length_floor(h: np.ndarray) -> float:
    return 1e-12 * max(1.0, float(np.max(np.abs(h))))


def contact_points(u) -> np.ndarray:
    """Ponto de contato estimado do corpo com cada reta suporte, shape (M, 2).

    Na reta j o contato fica no lado [y_{j-1}, y_j] do polígono circunscrito, a
    ℓ_{j-1}/2 de y_{j-1} ou a ℓ_{j+1}/2 de y_j; vale mais o lado com a aresta vizinha
    mais curta. Vértices de polígonos e arcos de círculo caem no contato exato.
    """
    h = np.asarray(getattr(u, 'values', u), dtype=float)
    m = h.shape[0]
    theta = grid_angles(m)
    tangent = np.column_stack((-np.sin(theta), np.cos(theta)))
    start = np.roll(support_points(h), 1, axis=0)
    lengths = np.maximum(edge_lengths(h), 0.0)
    before, after = np.roll(lengths, 1), np.roll(lengths, -1)
    weight_sum = before ** 2 + after ** 2
    live = weight_sum > _length_floor(h) ** 2
    w = np.full(m, 0.5)
    w[live] = after[live] ** 2 / weight_sum[live]
    offset = w * 0.5 * before + (1.0 - w) * (lengths - 0.5 * after)
    offset = np.clip(offset, 0.0, lengths)
    return start + offset[:, None] * tangent


def reconvexify_values(values, max_sweeps: Optional[int] = None) -> np.ndarray:
    """Envelope interno: maior função suporte ≤ h, a da interseção dos semiplanos ⟨x, p_j⟩ ≤ h_j.

    Rebaixa h_j até (h_{j-1} + h_{j+1}) / 2cos Δ em varreduras alternando índices pares e ímpares.
    """
    h = np.array(values, dtype=float)
    m = h.shape[0]
    tol = convexity_tolerance(h)
    if np.any(h + np.roll(h, m // 2) < -tol):
        raise InvalidBodyError('semiplanos sem interseção: h(θ) + h(θ+π) < 0')
    two_cos = 2.0 * np.cos(2.0 * np.pi / m)
    halves = (np.arange(0, m, 2), np.arange(1, m, 2))
    sweeps = int(max_sweeps) if max_sweeps else m * m
    for _ in range(sweeps):
        if convexity_defect(h) <= tol:
            return h
        for idx in halves:
            bound = (h[idx - 1] + h[(idx + 1) % m]) / two_cos
            h[idx] = np.minimum(h[idx], bound)
    if convexity_defect(h) <= tol:
        return h
    raise InvalidBodyError(f'envelope convexo não convergiu em {sweeps} varreduras (defeito {convexity_defect(h):.3e})')


def ensure_convex(values) -> np.ndarray:
    h = np.asarray(values, dtype=float)
    defect = convexity_defect(h)
    if defect <= convexity_tolerance(h):
        return h
    logger.debug('[Convex] reconvexificando (defeito %.3e)', defect)
    return reconvexify_values(h)


def reconvexify(u: SupportFunction2D) -> SupportFunction2D:
    return SupportFunction2D(ensure_convex(u.values))


def sample_periodic(values, positions) -> np.ndarray:
    """Avalia h em posições fracionárias da grade (índice j ↔ θ_j).

    Posições inteiras usam indexação exata; as demais, spline cúbico periódico.
    """
    h = np.asarray(values, dtype=float)
    m = h.shape[0]
    pos = np.mod(np.asarray(positions, dtype=float), m)
    nearest = np.rint(pos)
    if np.all(np.abs(pos - nearest) < _GRID_SNAP):
        return h[nearest.astype(int) % m]
    spline = CubicSpline(np.arange(m + 1, dtype=float), np.append(h, h[0]), bc_type='periodic')
    return spline(pos)


# Candidatos c_{k-2}..c_{k+3} para direções no arco (θ_k, θ_{k+1})
_CONTACT_WINDOW = np.arange(-2, 4)
_LENGTH_WINDOW = np.arange(-1, 3)


def image_values(values, matrix) -> np.ndarray:
    """Valores de h_{Mu}(p_j) = h_u(Mᵀp_j) para M qualquer, inclusive singular.

    O valor interno é max⟨Mc, p_j⟩ sobre os pontos de contato c, exato para polígonos
    cujas normais ficam a mais de uma célula umas das outras. Onde os comprimentos de
    aresta vizinhos são regulares (corpo suave) entra o spline periódico, limitado entre
    esse valor e o do vértice circunscrito.
    """
    h = ensure_convex(values)
    m = h.shape[0]
    mat = np.asarray(getattr(matrix, 'entries', matrix), dtype=float)
    q = grid_directions(m) @ mat
    norms = np.hypot(q[:, 0], q[:, 1])
    pos = np.mod(np.arctan2(q[:, 1], q[:, 0]), 2.0 * np.pi) * m / (2.0 * np.pi)
    arc = np.floor(pos).astype(int) % m

    contacts = contact_points(h)
    candidates = contacts[(arc[:, None] + _CONTACT_WINDOW) % m]
    inner = np.max(np.einsum('jwd,jd->jw', candidates, q), axis=1)
    outer = np.maximum(inner, np.einsum('jd,jd->j', support_points(h)[arc], q))
    smooth = np.clip(norms * sample_periodic(h, pos), inner, outer)

    lengths = np.maximum(edge_lengths(h), 0.0)
    local = lengths[(arc[:, None] + _LENGTH_WINDOW) % m]
    longest = local.max(axis=1)
    regular = np.zeros(m)
    live = longest > _length_floor(h)
    regular[live] = (local.min(axis=1)[live] / longest[live]) ** 2
    return inner + regular * (smooth - inner)


def linear_image(u: SupportFunction2D, op: LinearOperator2D) -> SupportFunction2D:
    """Imagem Mu; área multiplica por |det M|. Operadores singulares dão corpos degenerados."""
    return SupportFunction2D(ensure_convex(image_values(u.values, op)))


# ---------------------------------------------------------------------------
# Métrica e funcionais
# ---------------------------------------------------------------------------

def hausdorff_distance(u: SupportFunction2D, v: SupportFunction2D) -> float:
    _same_grid(u, v)
    return float(np.max(np.abs(u.values - v.values)))


def norm(u: SupportFunction2D) -> float:
    """‖u‖ = d_H(u, {0}) = max |h_u|."""
    return float(np.max(np.abs(u.values)))


def _second_derivative(h: np.ndarray) -> np.ndarray:
    m = h.shape[0]
    k = np.fft.rfftfreq(m, d=1.0 / m)
    return np.fft.irfft(-(k ** 2) * np.fft.rfft(h), n=m)


def _check_quadrature(quadrature: str):
    if quadrature not in QUADRATURES:
        raise ValueError(f'quadratura desconhecida: {quadrature!r} (use {QUADRATURES})')


def mixed_area_values(hu, hv, quadrature: str = DEFAULT_QUADRATURE) -> float:
    """Forma bilinear simétrica V[·,·] sobre arrays arbitrários (sem validação)."""
    _check_quadrature(quadrature)
    hu = np.asarray(hu, dtype=float)
    hv = np.asarray(hv, dtype=float)
    if quadrature == 'polygonal':
        return 0.25 * float(np.dot(hu, edge_lengths(hv)) + np.dot(hv, edge_lengths(hu)))
    delta = 2.0 * np.pi / hu.shape[0]
    a = np.dot(hu, hv + _second_derivative(hv))
    b = np.dot(hv, hu + _second_derivative(hu))
    return 0.25 * delta * float(a + b)


def mixed_area(u: SupportFunction2D, v: SupportFunction2D, quadrature: str = DEFAULT_QUADRATURE) -> float:
    _same_grid(u, v)
    return mixed_area_values(u.values, v.values, quadrature)


def area(u: SupportFunction2D, quadrature: str = DEFAULT_QUADRATURE) -> float:
    value = mixed_area_values(u.values, u.values, quadrature)
    if value < -inequality_tolerance(norm(u) ** 2):
        logger.debug('[Convex] área negativa %.3e truncada em 0', value)
    return max(0.0, value)


def perimeter(u: SupportFunction2D, quadrature: str = DEFAULT_QUADRATURE) -> float:
    _check_quadrature(quadrature)
    if quadrature == 'polygonal':
        return max(0.0, float(np.sum(edge_lengths(u.values))))
    return max(0.0, float(np.sum(u.values)) * 2.0 * np.pi / u.grid_size)


def mixed_area_report(u: SupportFunction2D, v: SupportFunction2D,
                      quadrature: str = DEFAULT_QUADRATURE) -> MixedAreaReport:
    v_u, v_v = area(u, quadrature), area(v, quadrature)
    v_uv = mixed_area(u, v, quadrature)
    return MixedAreaReport(V_u=v_u, V_v=v_v, V_uv=v_uv, bm_slack=v_uv ** 2 - v_u * v_v)


def steiner_fit(u: SupportFunction2D, v: SupportFunction2D, rho_samples: Sequence[float],
                quadrature: str = DEFAULT_QUADRATURE) -> Tuple[float, float, float]:
    """Ajuste quadrático de ϱ ↦ área(u + ϱv): (c0, c1, c2) ≈ (V[u], 2V[u,v], V[v])."""
    rhos = np.asarray(sorted(set(float(r) for r in rho_samples)))
    if rhos.size < 3:
        raise ValueError('steiner_fit precisa de pelo menos 3 valores distintos de ϱ')
    if np.any(rhos < 0):
        raise InvalidBodyError('valores de ϱ devem ser >= 0')
    areas = [area(minkowski_add(u, scale(v, r)), quadrature) for r in rhos]
    c0, c1, c2 = P.polyfit(rhos, areas, 2)
    return float(c0), float(c1), float(c2)


def steiner_area(u: SupportFunction2D, v: SupportFunction2D, rho: float,
                 quadrature: str = DEFAULT_QUADRATURE) -> float:
    """área(u + ϱv) = V[u] + 2ϱV[u,v] + ϱ²V[v]."""
    return area(u, quadrature) + 2.0 * rho * mixed_area(u, v, quadrature) + rho ** 2 * area(v, quadrature)


def hukuhara_difference(u: SupportFunction2D, v: SupportFunction2D):
    """w com u = v + w, ou ``NO_DIFFERENCE`` quando h_u - h_v não é função suporte."""
    _same_grid(u, v)
    w = u.values - v.values
    if not np.all(np.isfinite(w)) or not is_convex(w):
        return NO_DIFFERENCE
    return SupportFunction2D(w)


def validate(u: SupportFunction2D) -> List[str]:
    """Lista de violações dos invariantes; vazia se o corpo é válido."""
    problems = []
    m = u.grid_size
    if m < MIN_GRID_SIZE:
        problems.append(f'grid_size {m} < {MIN_GRID_SIZE}')
    if m % 2:
        problems.append(f'grid_size {m} ímpar')
    if not np.all(np.isfinite(u.values)):
        problems.append('valores não finitos')
        return problems
    if m >= 3:
        second = second_differences(u.values)
        tol = convexity_tolerance(u.values)
        bad = np.flatnonzero(second < -tol)
        if bad.size:
            worst = int(bad[np.argmin(second[bad])])
            problems.append(
                f'convexidade violada em {bad.size} pontos (pior j={worst}, segunda diferença {second[worst]:.3e})'
            )
    return problems


def body_summary(u: SupportFunction2D, quadrature: str = DEFAULT_QUADRATURE) -> dict:
    return {
        'grid_size': u.grid_size,
        'area': area(u, quadrature),
        'perimeter': perimeter(u, quadrature),
        'norm': norm(u),
    }


def resample(u: SupportFunction2D, grid_size: int) -> SupportFunction2D:
    """Reamostra o corpo em outra grade (spline periódico)."""
    grid_size = _check_grid_size(grid_size)
    if grid_size == u.grid_size:
        return u
    pos = np.arange(grid_size) * u.grid_size / grid_size
    return SupportFunction2D(ensure_convex(sample_periodic(u.values, pos)))
