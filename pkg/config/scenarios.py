"""
Sistema de Configuração de Cenários
Cenários embutidos (um por exemplo, com variantes) no esquema de ``setflow.scenarios``
"""

import json
import math
from dataclasses import dataclass
from typing import Any, Dict, List

from setflow import convex_core as cc


MINUS_I = [[-1.0, 0.0], [0.0, -1.0]]
CONSTANT_ONE = {'kind': 'constant', 'value': 1.0}
CONSTANT_HALF = {'kind': 'constant', 'value': 0.5}
TWO_ROOT_PI = 2.0 * math.sqrt(math.pi)


@dataclass
class BuiltinScenario:
    """Configuração de um cenário embutido"""
    name: str
    example: str
    description: str
    variants: List[Dict[str, Any]] = None

    def __post_init__(self):
        if self.variants is None:
            self.variants = []

    @property
    def variant_names(self) -> List[str]:
        return [v['name'] for v in self.variants]


class BuiltinRegistry:
    """Configuração central dos cenários embutidos"""

    def __init__(self):
        self._builtins = self._init_builtins()

    def _init_builtins(self) -> List[BuiltinScenario]:
        return [
            BuiltinScenario(
                name='ex51',
                example='bola invariante',
                description='Bola invariante: A=-I, F=ψK; ponto fixo λ₀=π, linearização e convergência a K',
                variants=[self._ex51()],
            ),
            BuiltinScenario(
                name='ex52',
                example='B nilpotente',
                description='B nilpotente, φ=1/(1+s), ψ=½: dominância de W₀, W₁ pelo sistema de comparação',
                variants=[self._ex52()],
            ),
            BuiltinScenario(
                name='ex53',
                example='órbitas de B',
                description='Órbitas de B (k=2 e k=4): áreas em forma fechada e instabilidade em (S, S)',
                variants=[self._ex53_k2(), self._ex53_k4(), self._ex53_k4_instability()],
            ),
            BuiltinScenario(
                name='ex54',
                example='D_H u = Bu',
                description='D_H u = Bu: estabilidade prática (λ, A, T) e comparação dos μ±',
                variants=[self._ex54()],
            ),
            BuiltinScenario(
                name='ex55',
                example='bola pequena instável',
                description='F=ψK: instabilidade em (S, S) pela cota de Brunn–Minkowski',
                variants=[self._ex55()],
            ),
        ]

    @staticmethod
    def _ex51() -> Dict[str, Any]:
        return {
            'schema': 1, 'name': 'ex51', 'example': 'bola invariante',
            'description': 'u0 = 1.2K converge para o ponto fixo K',
            'horizon': 10.0, 'dt': 1e-2,
            'initial_body': {'type': 'ball', 'radius': 1.2},
            'params': {'A': MINUS_I, 'phi': CONSTANT_ONE,
                       'source': {'kind': 'ball_source', 'psi': CONSTANT_ONE}},
            'track': {'hausdorff_to': {'type': 'ball', 'radius': 1.0}},
            'checks': [
                {'kind': 'certificate', 'name': 'example51_fixed_point', 'n': 2,
                 'expect_lambda0': math.pi, 'tol': 1e-10},
                {'kind': 'certificate', 'name': 'linearize', 'expect_gamma0': -2.0, 'tol': 1e-3},
                {'kind': 'certificate', 'name': 'hausdorff_stability'},
                {'kind': 'final_distance', 'max': 1e-2},
                {'kind': 'closed_form', 'formula': 'ball_radius', 'r0': 1.2, 'limit': 1.0, 'rate': 1.0,
                 'rel_tol': 1e-3},
                {'kind': 'certificate', 'name': 'global_existence',
                 'g_upper': {'kind': 'power', 'c': TWO_ROOT_PI, 'p': 0.5},
                 'g_lower': {'kind': 'power', 'c': TWO_ROOT_PI, 'p': 0.5},
                 'F_plus': CONSTANT_ONE},
            ],
        }

    @staticmethod
    def _ex52() -> Dict[str, Any]:
        phi = {'kind': 'rational', 'numerator': [1.0], 'denominator': [1.0, 1.0]}
        B = [[0.0, 1.0], [0.0, 0.0]]
        return {
            'schema': 1, 'name': 'ex52', 'example': 'B nilpotente',
            'description': 'W_i ≤ ξ_i ao longo da órbita do quadrado unitário',
            'horizon': 3.0, 'dt': 1e-3,
            'initial_body': 'square:1',
            'params': {'A': MINUS_I, 'phi': phi,
                       'source': {'kind': 'linear_body', 'psi': CONSTANT_HALF, 'B': B}},
            'track': {'mixed': {'B': B, 'k': 2}},
            'comparison': {'system': 'example52'},
            'checks': [
                {'kind': 'bound_check', 'functionals': ['W0', 'W1'], 'rel_tol': 1e-4},
                {'kind': 'wazewski', 'box': [0.0, 10.0]},
                {'kind': 'xi0_stability', 'expect': 'asymptotically_stable'},
                {'kind': 'lyapunov', 'beta': [1.0, 1.0], 'box': [1e-3, 1.0]},
            ],
        }

    @staticmethod
    def _ex53_k2() -> Dict[str, Any]:
        B = [[1.0, 0.0], [0.0, -1.0]]
        return {
            'schema': 1, 'name': 'ex53_k2', 'example': 'órbitas de B',
            'description': 'k=2, B=diag(1,-1): área em forma fechada',
            'horizon': 3.0, 'dt': 1e-3,
            'initial_body': 'square:1',
            'params': {'A': MINUS_I, 'phi': CONSTANT_ONE,
                       'source': {'kind': 'linear_body', 'psi': CONSTANT_HALF, 'B': B}},
            'track': {'mixed': {'B': B, 'k': 2}},
            'comparison': {'system': 'mixed_area', 'k': 2},
            'checks': [
                {'kind': 'closed_form', 'formula': 'ex53_k2', 'rel_tol': 1e-3},
                {'kind': 'bound_check', 'functionals': ['W0', 'W1'], 'rel_tol': 1e-4},
                {'kind': 'lyapunov', 'beta': [1.0, 1.0], 'box': [1e-3, 10.0]},
                {'kind': 'certificate', 'name': 'lyapunov_ratio_condition', 'k': 2},
            ],
        }

    @staticmethod
    def _ex53_k4() -> Dict[str, Any]:
        J = cc.ROTATION_90.to_list()
        return {
            'schema': 1, 'name': 'ex53_k4', 'example': 'órbitas de B',
            'description': 'k=4, B=J: fórmula de quatro termos com o termo ¼te⁻²ᵗ',
            'horizon': 3.0, 'dt': 1e-3,
            'initial_body': 'rect:2x1',
            'params': {'A': MINUS_I, 'phi': CONSTANT_ONE,
                       'source': {'kind': 'linear_body', 'psi': CONSTANT_HALF, 'B': J}},
            'track': {'mixed': {'B': J, 'k': 4}},
            'comparison': {'system': 'mixed_area', 'k': 4},
            'checks': [
                {'kind': 'closed_form', 'formula': 'ex53_k4', 'rel_tol': 2e-3},
                {'kind': 'bound_check', 'functionals': ['W0', 'W1', 'W2', 'W3'], 'rel_tol': 1e-4},
            ],
        }

    @staticmethod
    def _ex53_k4_instability() -> Dict[str, Any]:
        J = cc.ROTATION_90.to_list()
        return {
            'schema': 1, 'name': 'ex53_k4_instability', 'example': 'órbitas de B',
            'description': 'segmentos u_N: S[𝔉¹(u_N)] ∝ N², instável em (S, S)',
            'horizon': 1.0, 'dt': 1e-3,
            'initial_body': 'seg:4',
            'params': {'A': MINUS_I, 'phi': CONSTANT_ONE,
                       'source': {'kind': 'linear_body', 'psi': CONSTANT_HALF, 'B': J}},
            'track': {'mixed': {'B': J, 'k': 4}},
            'checks': [
                {'kind': 'instability_scaling', 'N': [4, 8, 16], 't': 1.0, 'rel_tol': 0.01,
                 'ratio': 4.0, 'ratio_tol': 0.05},
            ],
        }

    @staticmethod
    def _ex54() -> Dict[str, Any]:
        B = [[0.0, 1.0], [1.0, 0.0]]
        return {
            'schema': 1, 'name': 'ex54', 'example': 'D_H u = Bu',
            'description': 'A=0, F=Bu: ξ₀(1;(1,1)) ≈ e², estabilidade prática com λ=1, A=100, T=1',
            'horizon': 1.0, 'dt': 1e-3,
            'initial_body': 'square:1',
            'params': {'A': [[0.0, 0.0], [0.0, 0.0]], 'phi': CONSTANT_ONE,
                       'source': {'kind': 'linear_body', 'psi': CONSTANT_ONE, 'B': B}},
            'track': {'mixed': {'B': B, 'k': 2}},
            'comparison': {'system': 'example54'},
            'checks': [
                {'kind': 'practical', 'lambda': 1.0, 'A': 100.0, 'T': 1.0, 'xi0_range': [7.0, 7.8]},
                {'kind': 'certificate', 'name': 'example54_mu'},
                {'kind': 'certificate', 'name': 'example54_practical_criterion', 'lambda': 1.0, 'A': 100.0,
                 'T': 1.0},
                {'kind': 'bound_check', 'functionals': ['W0', 'W1'], 'rel_tol': 1e-4},
                {'kind': 'wazewski', 'box': [0.0, 10.0]},
                {'kind': 'closed_form', 'formula': 'ex54_bound', 'rel_tol': 1e-4},
            ],
        }

    @staticmethod
    def _ex55() -> Dict[str, Any]:
        return {
            'schema': 1, 'name': 'ex55', 'example': 'bola pequena instável',
            'description': 'bola pequena cresce: liminf √(π/s)ψ/φ = ∞ > -tr A/2',
            'horizon': 5.0, 'dt': 1e-2,
            'initial_body': {'type': 'ball', 'radius': 0.1},
            'params': {'A': MINUS_I, 'phi': CONSTANT_ONE,
                       'source': {'kind': 'ball_source', 'psi': CONSTANT_ONE}},
            'comparison': {'system': 'example55'},
            'checks': [
                {'kind': 'certificate', 'name': 'example55_instability', 'expect': 'unstable'},
                {'kind': 'xi0_stability', 'expect': 'unstable', 'eps_grid': [0.1, 0.01], 'n_directions': 4},
                {'kind': 'bound_check', 'functionals': ['V'], 'lower': True, 'rel_tol': 1e-4},
            ],
        }

    def list_builtins(self) -> List[BuiltinScenario]:
        return list(self._builtins)

    def names(self) -> List[str]:
        names = []
        for builtin in self._builtins:
            names.append(builtin.name)
            names.extend(n for n in builtin.variant_names if n != builtin.name)
        return names

    def get(self, name: str) -> List[Dict[str, Any]]:
        """Objetos de cenário para um nome embutido ou de variante"""
        for builtin in self._builtins:
            if builtin.name == name:
                return [json.loads(json.dumps(v)) for v in builtin.variants]
            for variant in builtin.variants:
                if variant['name'] == name:
                    return [json.loads(json.dumps(variant))]
        raise KeyError(name)

    def __contains__(self, name) -> bool:
        return name in self.names()


# Instância global do registro
builtin_registry = BuiltinRegistry()


def get_builtin_registry() -> BuiltinRegistry:
    """Retorna a instância do registro de cenários embutidos"""
    return builtin_registry
