"""Exceções da biblioteca setflow."""


class SetflowError(Exception):
    """Erro base da biblioteca."""


class InvalidBodyError(SetflowError, ValueError):
    """Dados inválidos para construir ou escalar um corpo convexo."""


class InvalidOperatorError(SetflowError, ValueError):
    """Matriz 2x2 malformada ou com entradas não finitas."""


class GridMismatchError(SetflowError, ValueError):
    """Corpos amostrados em grades angulares diferentes."""


class IntegrationError(SetflowError, RuntimeError):
    """Valores não finitos durante a integração."""


class FiniteEscapeError(SetflowError, RuntimeError):
    """A norma do corpo ultrapassou a guarda de estouro antes do horizonte."""

    def __init__(self, message, reached_time, trajectory=None):
        super().__init__(message)
        self.reached_time = float(reached_time)
        self.trajectory = trajectory


class PicardDivergenceError(SetflowError, RuntimeError):
    """A iteração de ponto fixo não contraiu."""

    def __init__(self, message, distances=None):
        super().__init__(message)
        self.distances = list(distances or [])


class PreconditionError(SetflowError, ValueError):
    """Pré-condição de um certificado ou verificação não satisfeita."""


class ScenarioError(SetflowError, ValueError):
    """Arquivo de cenário fora do esquema."""
