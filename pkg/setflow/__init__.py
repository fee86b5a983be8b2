"""setflow: semifluxos de conjuntos convexos planares via funções suporte."""

__version__ = '0.1.0'
