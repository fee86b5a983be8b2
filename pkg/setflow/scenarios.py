"""
Cenários: esquema JSON (schema 1) e mini-linguagem de corpos.

Parse e validação estrutural; os cenários embutidos ficam em ``config.scenarios``.
"""

import json
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Protocol, Tuple

from setflow import convex_core as cc
from setflow import semiflow as sf
from setflow.convex_core import LinearOperator2D, SupportFunction2D
from setflow.errors import InvalidBodyError, InvalidOperatorError, ScenarioError

SCHEMA_VERSION = 1


class CheckKind(Enum):
    """Tipos de verificação aceitos em ``checks``"""
    CLOSED_FORM = 'closed_form'
    BOUND_CHECK = 'bound_check'
    PRACTICAL = 'practical'
    XI0_STABILITY = 'xi0_stability'
    WAZEWSKI = 'wazewski'
    LYAPUNOV = 'lyapunov'
    INSTABILITY_SCALING = 'instability_scaling'
    FINAL_DISTANCE = 'final_distance'
    CERTIFICATE = 'certificate'


@dataclass
class CheckSpec:
    """Uma verificação do cenário"""
    kind: CheckKind
    options: Dict[str, Any] = None
    label: Optional[str] = None

    def __post_init__(self):
        if self.options is None:
            self.options = {}

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        if self.kind is CheckKind.CERTIFICATE:
            return f"certificate:{self.options.get('name')}"
        if self.kind is CheckKind.CLOSED_FORM:
            return f"closed_form:{self.options.get('formula')}"
        return self.kind.value


@dataclass
class TrackSpec:
    """Funcionais rastreados além de V e perímetro"""
    mixed: Optional[Tuple[LinearOperator2D, int]] = None
    reference: Optional[SupportFunction2D] = None


@dataclass
class OutputSpec:
    csv: str
    report: str


@dataclass
class Scenario:
    name: str
    description: str
    seed: int
    grid_size: int
    horizon: float
    dt: float
    initial_body: SupportFunction2D
    params: sf.SemiflowParams
    track: TrackSpec = field(default_factory=TrackSpec)
    comparison: Optional[Dict[str, Any]] = None
    checks: List[CheckSpec] = field(default_factory=list)
    outputs: OutputSpec = None
    example: Optional[str] = None
    data: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not (self.horizon > 0 and math.isfinite(self.horizon)):
            raise ScenarioError(f'{self.name}: horizon deve ser > 0')
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ScenarioError(f'{self.name}: dt deve ser > 0')
        if self.outputs is None:
            self.outputs = OutputSpec(csv=f'{self.name}.csv', report=f'{self.name}.json')

    def functionals(self, quadrature: str = cc.DEFAULT_QUADRATURE):
        return sf.tracked_functionals(self.track.mixed, self.track.reference, quadrature)


# ---------------------------------------------------------------------------
# Mini-linguagem de corpos
# ---------------------------------------------------------------------------

_NUMBER = r'[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?'


def _floats(text: str, count: Optional[int] = None) -> List[float]:
    parts = [p.strip() for p in text.split(',')]
    if any(not re.fullmatch(_NUMBER, p) for p in parts):
        raise InvalidBodyError(f'números inválidos: {text!r}')
    values = [float(p) for p in parts]
    if count is not None and len(values) != count:
        raise InvalidBodyError(f'esperado {count} números em {text!r}')
    return values


def _split_top_level(text: str) -> Tuple[str, str]:
    """Separa 'X,c' na última vírgula fora de parênteses."""
    depth = 0
    for i in range(len(text) - 1, -1, -1):
        ch = text[i]
        if ch == ')':
            depth += 1
        elif ch == '(':
            depth -= 1
        elif ch == ',' and depth == 0:
            return text[:i], text[i + 1:]
    raise InvalidBodyError(f'scale(...) requer "corpo,fator": {text!r}')


def parse_body_spec(text: str, grid_size: int = cc.DEFAULT_GRID_SIZE) -> SupportFunction2D:
    """Converte specs como ``ball:1@0,1``, ``seg:4``, ``rot90(seg:4)`` em corpos.

    Formas: ball:r[@x,y], point:x,y, seg:N[@ângulo em radianos], square:s,
    rect:WxH, poly:x1,y1;x2,y2;..., rot90(X), scale(X,c).
    """
    spec = str(text).strip()
    if not spec:
        raise InvalidBodyError('spec de corpo vazia')
    if spec.startswith('rot90(') and spec.endswith(')'):
        inner = parse_body_spec(spec[6:-1], grid_size)
        return cc.linear_image(inner, cc.ROTATION_90)
    if spec.startswith('scale(') and spec.endswith(')'):
        body_text, factor = _split_top_level(spec[6:-1])
        return cc.scale(parse_body_spec(body_text, grid_size), _floats(factor, 1)[0])

    kind, sep, arg = spec.partition(':')
    if not sep:
        raise InvalidBodyError(f'spec de corpo sem ":": {spec!r}')
    kind = kind.strip().lower()
    arg, _, at = arg.partition('@')
    if kind == 'ball':
        center = _floats(at, 2) if at else (0.0, 0.0)
        return cc.make_ball(_floats(arg, 1)[0], center, grid_size)
    if kind == 'point':
        return cc.make_point(_floats(arg, 2), grid_size)
    if kind == 'seg':
        angle = _floats(at, 1)[0] if at else 0.0
        return cc.make_segment(_floats(arg, 1)[0], angle, grid_size=grid_size)
    if kind == 'square':
        s = _floats(arg, 1)[0]
        return cc.make_rectangle(s, s, grid_size=grid_size)
    if kind == 'rect':
        dims = arg.lower().split('x')
        if len(dims) != 2:
            raise InvalidBodyError(f'rect requer WxH: {arg!r}')
        return cc.make_rectangle(_floats(dims[0], 1)[0], _floats(dims[1], 1)[0], grid_size=grid_size)
    if kind == 'poly':
        vertices = [_floats(chunk, 2) for chunk in arg.split(';') if chunk.strip()]
        return cc.make_polygon(vertices, grid_size)
    raise InvalidBodyError(f'tipo de corpo desconhecido: {kind!r}')


def build_body(data, grid_size: int = cc.DEFAULT_GRID_SIZE) -> SupportFunction2D:
    """Corpo a partir de um objeto JSON (``{"type": ...}``) ou de uma spec em texto."""
    if isinstance(data, str):
        return parse_body_spec(data, grid_size)
    if not isinstance(data, dict) or 'type' not in data:
        raise InvalidBodyError(f'corpo inválido: {data!r}')
    kind = data['type']
    center = data.get('center', (0.0, 0.0))
    if kind == 'ball':
        return cc.make_ball(data.get('radius', 1.0), center, grid_size)
    if kind == 'point':
        return cc.make_point(data.get('at', center), grid_size)
    if kind == 'polygon':
        return cc.make_polygon(data.get('vertices', []), grid_size)
    if kind == 'segment':
        return cc.make_segment(float(data['length']), float(data.get('angle', 0.0)), center, grid_size)
    if kind == 'rectangle':
        return cc.make_rectangle(float(data['width']), float(data['height']), center, grid_size)
    if kind == 'values':
        body = SupportFunction2D.from_dict(data)
        problems = cc.validate(body)
        if problems:
            raise InvalidBodyError('; '.join(problems))
        return cc.resample(body, grid_size)
    if kind == 'spec':
        return parse_body_spec(data['spec'], grid_size)
    raise InvalidBodyError(f'tipo de corpo desconhecido: {kind!r}')


# ---------------------------------------------------------------------------
# Parsing do esquema
# ---------------------------------------------------------------------------

_TOP_LEVEL_KEYS = {'schema', 'name', 'description', 'example', 'seed', 'grid_size', 'horizon', 'dt',
                   'initial_body', 'params', 'track', 'comparison', 'checks', 'outputs'}


def _matrix(data, what: str) -> LinearOperator2D:
    try:
        return LinearOperator2D(data)
    except (InvalidOperatorError, TypeError, ValueError) as exc:
        raise ScenarioError(f'{what}: {exc}') from None


def _source(data: Dict[str, Any], grid_size: int) -> sf.SourceTerm:
    if data is None:
        return sf.ZeroSource()
    if not isinstance(data, dict):
        raise ScenarioError(f'params.source deve ser objeto: {data!r}')
    if data.get('kind') == 'constant_body':
        return sf.ConstantBody(build_body(data.get('U'), grid_size))
    if data.get('kind') == 'linear_body':
        _matrix(data.get('B'), 'params.source.B')
    return sf.source_from_dict(data, grid_size)


def _params(data: Dict[str, Any], grid_size: int) -> sf.SemiflowParams:
    if not isinstance(data, dict) or 'A' not in data:
        raise ScenarioError('params requer "A"')
    A = _matrix(data['A'], 'params.A')
    phi = sf.ScalarFunction.from_dict(data.get('phi', 1.0))
    return sf.SemiflowParams(A, phi, _source(data.get('source'), grid_size))


def _track(data: Optional[Dict[str, Any]], grid_size: int) -> TrackSpec:
    if not data:
        return TrackSpec()
    mixed = None
    if 'mixed' in data:
        k = int(data['mixed'].get('k', 2))
        if k < 1:
            raise ScenarioError('track.mixed.k deve ser >= 1')
        mixed = (_matrix(data['mixed'].get('B'), 'track.mixed.B'), k)
    reference = build_body(data['hausdorff_to'], grid_size) if 'hausdorff_to' in data else None
    return TrackSpec(mixed=mixed, reference=reference)


def _checks(data) -> List[CheckSpec]:
    checks = []
    for i, item in enumerate(data or []):
        if not isinstance(item, dict) or 'kind' not in item:
            raise ScenarioError(f'checks[{i}] requer "kind"')
        try:
            kind = CheckKind(item['kind'])
        except ValueError:
            raise ScenarioError(f'checks[{i}]: tipo desconhecido {item["kind"]!r}') from None
        if kind is CheckKind.CERTIFICATE and not item.get('name'):
            raise ScenarioError(f'checks[{i}]: certificate requer "name"')
        if kind is CheckKind.CLOSED_FORM and not item.get('formula'):
            raise ScenarioError(f'checks[{i}]: closed_form requer "formula"')
        options = {k: v for k, v in item.items() if k not in ('kind', 'label')}
        checks.append(CheckSpec(kind, options, item.get('label')))
    return checks


def parse_scenario(data: Dict[str, Any], grid_size: Optional[int] = None, dt: Optional[float] = None,
                   default_grid_size: int = cc.DEFAULT_GRID_SIZE, default_dt: float = 1e-3,
                   default_seed: int = 0) -> Scenario:
    """Valida um objeto de cenário; ``grid_size``/``dt`` explícitos sobrescrevem o arquivo.

    Qualquer violação do esquema vira ``ScenarioError``.
    """
    if not isinstance(data, dict):
        raise ScenarioError('cenário deve ser um objeto JSON')
    if data.get('schema') != SCHEMA_VERSION:
        raise ScenarioError(f'schema {data.get("schema")!r} não suportado (esperado {SCHEMA_VERSION})')
    unknown = sorted(set(data) - _TOP_LEVEL_KEYS)
    if unknown:
        raise ScenarioError(f'campos desconhecidos: {", ".join(unknown)}')
    for key in ('name', 'horizon', 'initial_body', 'params'):
        if key not in data:
            raise ScenarioError(f'campo obrigatório ausente: {key!r}')
    name = str(data['name'])
    if not re.fullmatch(r'[A-Za-z0-9_.-]+', name):
        raise ScenarioError(f'nome inválido: {name!r}')
    try:
        m = int(grid_size or data.get('grid_size') or default_grid_size)
        cc._check_grid_size(m)
        outputs = data.get('outputs') or {}
        return Scenario(
            name=name,
            description=str(data.get('description', '')),
            seed=int(data.get('seed', default_seed)),
            grid_size=m,
            horizon=float(data['horizon']),
            dt=float(dt or data.get('dt') or default_dt),
            initial_body=build_body(data['initial_body'], m),
            params=_params(data['params'], m),
            track=_track(data.get('track'), m),
            comparison=data.get('comparison'),
            checks=_checks(data.get('checks')),
            outputs=OutputSpec(csv=outputs.get('csv', f'{name}.csv'), report=outputs.get('report', f'{name}.json')),
            example=data.get('example'),
            data=data,
        )
    except ScenarioError:
        raise
    except (InvalidBodyError, InvalidOperatorError, KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f'{name}: {exc}') from None


def load_scenario(path, **kwargs) -> Scenario:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding='utf-8'))
    except OSError as exc:
        raise ScenarioError(f'não foi possível ler {path}: {exc.strerror}') from None
    except json.JSONDecodeError as exc:
        raise ScenarioError(f'{path.name}: JSON inválido ({exc.msg}, linha {exc.lineno})') from None
    return parse_scenario(data, **kwargs)




class ScenarioRegistry(Protocol):
    """Origem de cenários por nome (ex.: o registro embutido de ``config.scenarios``)."""

    def names(self) -> List[str]: ...

    def get(self, name: str) -> List[Dict[str, Any]]: ...

    def __contains__(self, name) -> bool: ...
