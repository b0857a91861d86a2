"""Logarithmic connections in a frame, and their exact curvature.

A connection is stored by its component maps in the dual frame: one
polynomial matrix per frame element.  The curvature of the pair (i, j) is

    R_ij = V_i(w_j) - V_j(w_i) - sum_k c_ij^k w_k - [w_i, w_j]_c

with c_ij^k the frame structure functions and [,]_c the plain commutator.
The sign of the last term carries the right-invariant convention for frame
fields and is pinned by the normal-form fixtures in the test suite; flipping
it breaks the flatness of every assembled normal-form connection.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from .divisor import FreeDivisor, StructureFunctions, VectorFieldPoly, structure_functions
from .linear import RationalMatrix
from .polynomials import WeightedPoly


class MatrixPolyMap:
    """A square matrix of weighted polynomials: a polynomial map into gl_m."""

    __slots__ = ("entries", "weights")

    def __init__(self, entries: Sequence[Sequence[WeightedPoly]]):
        data = tuple(tuple(row) for row in entries)
        if not data or any(len(row) != len(data) for row in data):
            raise ValueError("matrix polynomial maps must be square")
        weights = data[0][0].weights
        if any(p.weights != weights for row in data for p in row):
            raise ValueError("entries live in different polynomial rings")
        self.entries = data
        self.weights = weights

    @classmethod
    def zeros(cls, m: int, weights: Sequence[int]) -> "MatrixPolyMap":
        zero = WeightedPoly.zero(weights)
        return cls([[zero] * m for _ in range(m)])

    @classmethod
    def from_constant(cls, matrix: RationalMatrix, weights: Sequence[int]) -> "MatrixPolyMap":
        return cls(
            [[WeightedPoly.constant(matrix[i, j], weights) for j in range(matrix.cols)] for i in range(matrix.rows)]
        )

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, key: Tuple[int, int]) -> WeightedPoly:
        i, j = key
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixPolyMap):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __add__(self, other: "MatrixPolyMap") -> "MatrixPolyMap":
        return MatrixPolyMap(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "MatrixPolyMap") -> "MatrixPolyMap":
        return MatrixPolyMap(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def __neg__(self) -> "MatrixPolyMap":
        return MatrixPolyMap([[-a for a in row] for row in self.entries])

    def scale(self, factor) -> "MatrixPolyMap":
        """Multiply every entry by a polynomial or rational factor."""
        return MatrixPolyMap([[a * factor for a in row] for row in self.entries])

    def matmul(self, other: "MatrixPolyMap") -> "MatrixPolyMap":
        m = self.size
        zero = WeightedPoly.zero(self.weights)
        out = []
        for i in range(m):
            row = []
            for j in range(m):
                acc = zero
                for s in range(m):
                    a = self.entries[i][s]
                    b = other.entries[s][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return MatrixPolyMap(out)

    def commutator(self, other: "MatrixPolyMap") -> "MatrixPolyMap":
        return self.matmul(other) - other.matmul(self)

    def power(self, k: int) -> "MatrixPolyMap":
        result = MatrixPolyMap.from_constant(RationalMatrix.identity(self.size), self.weights)
        base = self
        while k:
            if k & 1:
                result = result.matmul(base)
            base = base.matmul(base)
            k >>= 1
        return result

    def apply_field(self, field: VectorFieldPoly) -> "MatrixPolyMap":
        """Apply a vector field entrywise."""
        return MatrixPolyMap([[field.apply(p) for p in row] for row in self.entries])

    def evaluate(self, point: Sequence[Fraction]) -> RationalMatrix:
        return RationalMatrix([[p.evaluate(point) for p in row] for row in self.entries])

    def graded_component(self, degree: int) -> "MatrixPolyMap":
        return MatrixPolyMap([[p.graded_component(degree) for p in row] for row in self.entries])

    def degrees(self) -> Tuple[int, ...]:
        """Sorted E-degrees occurring in any entry."""
        out = set()
        for row in self.entries:
            for p in row:
                for mono in p.terms:
                    out.add(p.monomial_degree(mono))
        return tuple(sorted(out))

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    def constant_part(self) -> RationalMatrix:
        return RationalMatrix([[p.constant_term() for p in row] for row in self.entries])

    def __repr__(self) -> str:
        body = "; ".join(", ".join(p.format() for p in row) for row in self.entries)
        return f"MatrixPolyMap([{body}])"


@dataclass(frozen=True)
class LogConnection:
    """Connection components in the dual frame, one matrix map per frame slot."""

    divisor: FreeDivisor
    components: Tuple[MatrixPolyMap, ...]

    def __post_init__(self):
        if len(self.components) != self.divisor.n:
            raise ValueError("need one component per frame element")
        m = self.components[0].size
        if any(c.size != m for c in self.components):
            raise ValueError("components have mixed matrix sizes")
        if any(c.weights != self.divisor.weights for c in self.components):
            raise ValueError("components live in the wrong polynomial ring")

    @property
    def matrix_size(self) -> int:
        return self.components[0].size


def curvature(
    conn: LogConnection, sf: Optional[StructureFunctions] = None
) -> Dict[Tuple[int, int], MatrixPolyMap]:
    """Curvature components R(V_i, V_j) for every frame pair i < j."""
    d = conn.divisor
    sf = sf or structure_functions(d)
    out: Dict[Tuple[int, int], MatrixPolyMap] = {}
    for i in range(d.n):
        for j in range(i + 1, d.n):
            term = conn.components[j].apply_field(d.frame[i].field)
            term = term - conn.components[i].apply_field(d.frame[j].field)
            for k, c in enumerate(sf.coefficients(i, j)):
                if not c.is_zero():
                    term = term - conn.components[k].scale(c)
            term = term - conn.components[i].commutator(conn.components[j])
            out[(i, j)] = term
    return out


@dataclass(frozen=True)
class FlatnessReport:
    flat: bool
    witness: Optional[Tuple[int, int]]
    residual: Optional[MatrixPolyMap]


def is_flat(conn: LogConnection, sf: Optional[StructureFunctions] = None) -> FlatnessReport:
    """Exact flatness test; reports the first nonvanishing curvature pair."""
    for pair, component in sorted(curvature(conn, sf).items()):
        if not component.is_zero():
            return FlatnessReport(flat=False, witness=pair, residual=component)
    return FlatnessReport(flat=True, witness=None, residual=None)
