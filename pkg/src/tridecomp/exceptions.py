"""This module manages all the exceptions."""


class TriDecompError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(TriDecompError):
    """Raise this error if an edge-list line cannot be parsed."""

    def __init__(self, line_number: int, line: str, reason: str = "malformed line"):
        self.line_number = line_number
        self.line = line
        super().__init__(f"line {line_number}: {reason}: {line!r}")


class LoopEdgeError(TriDecompError):
    """Raise this error if an edge list contains a loop."""

    def __init__(self, line_number: int, vertex: int):
        self.line_number = line_number
        self.vertex = vertex
        super().__init__(f"line {line_number}: loop edge at vertex {vertex}")


class EmptyGraphError(TriDecompError):
    """Raise this error if a graph with no vertices is requested."""


class GeneratorParameterError(TriDecompError):
    """Raise this error if generator parameters are out of range."""


class GenerationTimeout(TriDecompError):
    """Raise this error if rejection sampling of a graph gives up."""

    def __init__(self, attempts: int):
        self.attempts = attempts
        super().__init__(f"no graph met the minimum degree after {attempts} attempts")


class NotACliqueError(TriDecompError):
    """Raise this error if a vertex set expected to be a clique is not one."""

    def __init__(self, vertices):
        self.vertices = tuple(vertices)
        super().__init__(f"vertices {self.vertices} do not induce a clique")


class DelegationUndefined(TriDecompError):
    """Raise this error if some clique has no extension to a larger clique."""

    def __init__(self, prefix):
        self.prefix = tuple(prefix)
        super().__init__(
            f"clique {self.prefix} has no common neighbour, delegation weight undefined"
        )


class UncoverableEdge(TriDecompError):
    """Raise this error if an edge lies in no triangle."""

    def __init__(self, edge):
        self.edge = tuple(edge)
        super().__init__(f"edge {self.edge} lies in no triangle, no decomposition exists")


class ExactModeTooLarge(TriDecompError):
    """Raise this error if exact arithmetic is requested on a large graph."""


class DomainError(TriDecompError):
    """Raise this error if a program point violates its level's constraints."""

    def __init__(self, constraint: str):
        self.constraint = constraint
        super().__init__(f"point violates constraint {constraint!r}")


class SamplerStarved(TriDecompError):
    """Raise this error if rejection sampling of feasible points gives up."""

    def __init__(self, rejections: int):
        self.rejections = rejections
        super().__init__(f"sampler rejected {rejections} candidate points")
