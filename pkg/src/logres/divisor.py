"""Weighted-homogeneous free divisors with a chosen logarithmic frame.

A divisor is the data of a reduced defining polynomial f, positive variable
weights (fixing the Euler field E), and a frame of n polynomial vector fields
tangent to the hypersurface, annotated as toral, semisimple, or graded
("w" kind, the non-constant directions).  The determinant test of the frame
coefficient matrix certifies that the frame is a basis of the logarithmic
tangent sheaf; all structure functions, dual forms, and form structure
equations are then exact polynomial computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .polynomials import (
    InexactDivisionError,
    WeightedPoly,
    exact_divide,
    squarefree_probable,
)

TORAL = "toral"
SEMISIMPLE = "semisimple"
WTYPE = "w"


class DivisorError(ValueError):
    """Raised for structurally invalid divisor data."""


@dataclass(frozen=True)
class VectorFieldPoly:
    """A polynomial vector field sum_i coefficients[i] * d/dz_i."""

    coefficients: Tuple[WeightedPoly, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise DivisorError("a vector field needs at least one coefficient")
        weights = self.coefficients[0].weights
        if any(c.weights != weights for c in self.coefficients):
            raise DivisorError("vector field coefficients live in different rings")
        if len(self.coefficients) != len(weights):
            raise DivisorError("coefficient count must equal the variable count")

    @property
    def weights(self) -> Tuple[int, ...]:
        return self.coefficients[0].weights

    def apply(self, p: WeightedPoly) -> WeightedPoly:
        total = WeightedPoly.zero(p.weights)
        for i, c in enumerate(self.coefficients):
            if c:
                total = total + c * p.partial_derivative(i)
        return total

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def __add__(self, other: "VectorFieldPoly") -> "VectorFieldPoly":
        return VectorFieldPoly(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "VectorFieldPoly") -> "VectorFieldPoly":
        return VectorFieldPoly(tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def scale(self, factor) -> "VectorFieldPoly":
        return VectorFieldPoly(tuple(c * factor for c in self.coefficients))


def bracket(v: VectorFieldPoly, w: VectorFieldPoly) -> VectorFieldPoly:
    """Lie bracket of vector fields, [v, w]_j = v(w_j) - w(v_j)."""
    if v.weights != w.weights:
        raise DivisorError("vector fields live in different rings")
    return VectorFieldPoly(tuple(v.apply(wc) - w.apply(vc) for vc, wc in zip(v.coefficients, w.coefficients)))


@dataclass(frozen=True)
class FrameElement:
    """One logarithmic frame field with its kind annotation.

    ``grade`` is required for w-kind elements and is the eigenvalue of the
    bracket with the Euler field.  ``distinguished`` marks a toral element
    whose field alone is the Euler field (only possible when it is).
    """

    kind: str
    field: VectorFieldPoly
    grade: Optional[int] = None
    distinguished: bool = False

    def __post_init__(self):
        if self.kind not in (TORAL, SEMISIMPLE, WTYPE):
            raise DivisorError(f"unknown frame element kind {self.kind!r}")
        if self.kind == WTYPE and self.grade is None:
            raise DivisorError("w-kind frame elements need a grade")
        if self.kind != WTYPE and self.grade is not None:
            raise DivisorError("only w-kind frame elements carry a grade")
        if self.distinguished and self.kind != TORAL:
            raise DivisorError("only toral elements can be distinguished")


@dataclass(frozen=True)
class FreeDivisor:
    """A weighted-homogeneous free divisor with frame and grading data.

    ``factors`` lists one defining polynomial per toral direction (the
    irreducible components matched to the torus factors); their product must
    equal f up to a nonzero rational.  ``positive_combination`` expresses the
    Euler field as an integer combination of the toral frame fields.
    """

    name: str
    variables: Tuple[str, ...]
    weights: Tuple[int, ...]
    f: WeightedPoly
    degree: int
    frame: Tuple[FrameElement, ...]
    positive_combination: Tuple[int, ...]
    factors: Optional[Tuple[WeightedPoly, ...]] = None

    def __post_init__(self):
        if len(self.variables) != len(self.weights):
            raise DivisorError("variable and weight counts differ")
        if self.f.weights != self.weights:
            raise DivisorError("defining polynomial lives in a different ring")
        if self.f.is_zero():
            raise DivisorError("the defining polynomial must be nonzero")
        if len(self.frame) != self.n:
            raise DivisorError(f"expected {self.n} frame elements, got {len(self.frame)}")
        for element in self.frame:
            if element.field.weights != self.weights:
                raise DivisorError("frame field lives in a different ring")
        if len(self.positive_combination) != len(self.toral_indices):
            raise DivisorError("positive combination length must match the toral count")
        if self.factors is not None and len(self.factors) != len(self.toral_indices):
            raise DivisorError("need one defining factor per toral direction")
        self._check_grading()

    # ------------------------------------------------------------------ basics

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def toral_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.frame) if e.kind == TORAL)

    @property
    def semisimple_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.frame) if e.kind == SEMISIMPLE)

    @property
    def w_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.frame) if e.kind == WTYPE)

    @property
    def toral_count(self) -> int:
        return len(self.toral_indices)

    def euler_field(self) -> VectorFieldPoly:
        coeffs = tuple(
            WeightedPoly.variable(i, self.weights) * w for i, w in enumerate(self.weights)
        )
        return VectorFieldPoly(coeffs)

    def zero_poly(self) -> WeightedPoly:
        return WeightedPoly.zero(self.weights)

    def coefficient_matrix(self) -> List[List[WeightedPoly]]:
        """Row i holds the coefficients of frame element i."""
        return [list(e.field.coefficients) for e in self.frame]

    def w_grades(self) -> Tuple[int, ...]:
        return tuple(self.frame[i].grade for i in self.w_indices)

    def effective_factors(self) -> Tuple[WeightedPoly, ...]:
        if self.factors is not None:
            return self.factors
        if self.toral_count == 1:
            return (self.f,)
        raise DivisorError("per-toral-direction factors are required when the toral rank exceeds one")

    def _check_grading(self) -> None:
        euler = self.euler_field()
        e_of_f = euler.apply(self.f)
        if e_of_f != self.f * self.degree:
            raise DivisorError("f is not weighted homogeneous of the declared degree")
        combo = None
        for coeff, idx in zip(self.positive_combination, self.toral_indices):
            scaled = self.frame[idx].field.scale(coeff)
            combo = scaled if combo is None else combo + scaled
        if combo is None or not (combo - euler).is_zero():
            raise DivisorError("positive combination of toral fields is not the Euler field")
        for i in self.w_indices:
            element = self.frame[i]
            residual = bracket(euler, element.field) - element.field.scale(element.grade)
            if not residual.is_zero():
                raise DivisorError(f"frame element {i} does not have Euler grade {element.grade}")
        for idx, i in enumerate(self.toral_indices):
            if self.frame[i].distinguished:
                if not (self.frame[i].field - euler).is_zero():
                    raise DivisorError("the distinguished toral field must equal the Euler field")

    # -------------------------------------------------------- derived structure

    @cached_property
    def factor_degree_matrix(self) -> List[List[Fraction]]:
        """Entry (l, j) is the constant E_l(f_j) / f_j for toral field E_l."""
        factors = self.effective_factors()
        matrix: List[List[Fraction]] = []
        for idx in self.toral_indices:
            fld = self.frame[idx].field
            row = []
            for fac in factors:
                try:
                    quotient = exact_divide(fld.apply(fac), fac)
                except InexactDivisionError as exc:
                    raise DivisorError("a toral field does not preserve a declared factor") from exc
                row.append(quotient.as_constant())
            matrix.append(row)
        return matrix


@dataclass(frozen=True)
class SaitoResult:
    ok: bool
    constant: Optional[Fraction]
    squarefree: str
    message: str = ""


def poly_determinant(rows: Sequence[Sequence[WeightedPoly]]) -> WeightedPoly:
    """Determinant of a square polynomial matrix, by subset recursion."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    weights = rows[0][0].weights
    # memo[mask] = determinant of the minor on the last popcount(mask) rows
    # and the column set given by mask
    memo: Dict[int, WeightedPoly] = {0: WeightedPoly.constant(1, weights)}

    def det_for(mask: int) -> WeightedPoly:
        if mask in memo:
            return memo[mask]
        size = bin(mask).count("1")
        row = n - size
        total = WeightedPoly.zero(weights)
        sign = 1
        remaining = mask
        position = 0
        while remaining:
            col = (remaining & -remaining).bit_length() - 1
            entry = rows[row][col]
            if entry:
                total = total + entry * det_for(mask & ~(1 << col)) * sign
            sign = -sign
            remaining &= remaining - 1
            position += 1
        memo[mask] = total
        return total

    return det_for((1 << n) - 1)


def poly_adjugate(rows: Sequence[Sequence[WeightedPoly]]) -> List[List[WeightedPoly]]:
    """Adjugate matrix: adj[i][j] = (-1)^(i+j) * minor(j, i)."""
    n = len(rows)
    weights = rows[0][0].weights
    if n == 1:
        return [[WeightedPoly.constant(1, weights)]]
    adj = [[WeightedPoly.zero(weights) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[rows[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            value = poly_determinant(minor)
            adj[i][j] = value if (i + j) % 2 == 0 else -value
    return adj


def verify_saito(d: FreeDivisor, trials: int = 8, seed: int = 0) -> SaitoResult:
    """Check that det(frame matrix) is a nonzero rational multiple of f.

    Also runs the Monte Carlo reducedness check on f; the returned constant c
    satisfies det = c * f exactly.
    """
    det = poly_determinant(d.coefficient_matrix())
    if det.is_zero():
        return SaitoResult(False, None, "skipped", "frame determinant vanishes identically")
    try:
        quotient = exact_divide(det, d.f)
        constant = quotient.as_constant()
    except (InexactDivisionError, ValueError):
        return SaitoResult(False, None, "skipped", "frame determinant is not a constant multiple of f")
    if constant == 0:
        return SaitoResult(False, None, "skipped", "frame determinant vanishes identically")
    verdict = squarefree_probable(d.f, trials=trials, seed=seed)
    ok = verdict != "not-squarefree"
    message = "" if ok else "defining polynomial shows a repeated factor on every sampled line"
    return SaitoResult(ok, constant, verdict, message)


@dataclass(frozen=True)
class StructureFunctions:
    """Coefficients c_ij^k with [V_i, V_j] = sum_k c_ij^k V_k, for i < j."""

    table: Dict[Tuple[int, int], Tuple[WeightedPoly, ...]]
    size: int

    def coefficients(self, i: int, j: int) -> Tuple[WeightedPoly, ...]:
        """Coefficient vector for any ordered pair, antisymmetric in (i, j)."""
        if i == j:
            zero = next(iter(self.table.values()))[0] * 0
            return tuple(zero for _ in range(self.size))
        if i < j:
            return self.table[(i, j)]
        return tuple(-c for c in self.table[(j, i)])


def structure_functions(d: FreeDivisor) -> StructureFunctions:
    """Expand every frame bracket back in the frame, by adjugate division.

    The divisions are exact precisely because the frame is closed under
    bracket; an inexact division signals invalid divisor data.
    """
    matrix = d.coefficient_matrix()
    det = poly_determinant(matrix)
    adj = poly_adjugate(matrix)
    table: Dict[Tuple[int, int], Tuple[WeightedPoly, ...]] = {}
    for i in range(d.n):
        for j in range(i + 1, d.n):
            lie = bracket(d.frame[i].field, d.frame[j].field)
            coeffs = []
            for k in range(d.n):
                numerator = WeightedPoly.zero(d.weights)
                for l in range(d.n):
                    numerator = numerator + lie.coefficients[l] * adj[l][k]
                try:
                    coeffs.append(exact_divide(numerator, det))
                except InexactDivisionError as exc:
                    raise DivisorError(
                        f"frame is not closed under bracket at pair ({i}, {j})"
                    ) from exc
            table[(i, j)] = tuple(coeffs)
    return StructureFunctions(table=table, size=d.n)


@dataclass(frozen=True)
class FrameConstants:
    """Constant blocks of the structure functions, validated against kinds.

    ``toral_w`` maps (toral position, w position) to the integer n with
    [E_i, Z_j] = n * Z_j.  ``semisimple_action`` maps (semisimple position,
    w position) to the coefficient vector over w slots.  ``semisimple`` maps
    semisimple slot pairs to constant coefficient vectors over semisimple
    slots.  Positions index into the toral/semisimple/w slot orderings.
    """

    toral_w: Dict[Tuple[int, int], Fraction]
    semisimple: Dict[Tuple[int, int], Tuple[Fraction, ...]]
    semisimple_action: Dict[Tuple[int, int], Tuple[Fraction, ...]]


def _constant_of(poly: WeightedPoly, context: str) -> Fraction:
    try:
        return poly.as_constant()
    except ValueError as exc:
        raise DivisorError(f"{context}: expected a constant structure function") from exc


def frame_constants(d: FreeDivisor, sf: Optional[StructureFunctions] = None) -> FrameConstants:
    """Extract and validate the constant structure blocks of the frame."""
    sf = sf or structure_functions(d)
    toral = d.toral_indices
    semis = d.semisimple_indices
    wpos = d.w_indices

    def expect_zero_outside(i: int, j: int, allowed: Sequence[int], context: str):
        for k, c in enumerate(sf.coefficients(i, j)):
            if k not in allowed and not c.is_zero():
                raise DivisorError(f"{context}: unexpected component on frame slot {k}")

    toral_w: Dict[Tuple[int, int], Fraction] = {}
    for a, i in enumerate(toral):
        for b, j in enumerate(toral):
            if i < j:
                expect_zero_outside(i, j, (), "toral pair must commute")
        for b, j in enumerate(semis):
            lo, hi = min(i, j), max(i, j)
            expect_zero_outside(lo, hi, (), "toral and semisimple fields must commute")
        for b, j in enumerate(wpos):
            lo, hi = min(i, j), max(i, j)
            coeffs = sf.coefficients(i, j)
            expect_zero_outside(lo, hi, (j,), "toral bracket with a graded slot")
            toral_w[(a, b)] = _constant_of(coeffs[j], "toral grading constant")
    semisimple: Dict[Tuple[int, int], Tuple[Fraction, ...]] = {}
    for a, i in enumerate(semis):
        for b, j in enumerate(semis):
            if i >= j:
                continue
            coeffs = sf.coefficients(i, j)
            expect_zero_outside(i, j, semis, "semisimple pair bracket")
            semisimple[(a, b)] = tuple(
                _constant_of(coeffs[k], "semisimple structure constant") for k in semis
            )
    action: Dict[Tuple[int, int], Tuple[Fraction, ...]] = {}
    for a, i in enumerate(semis):
        for b, j in enumerate(wpos):
            # coefficients() is antisymmetry-aware, so the (i, j) orientation
            # is already the bracket of the semisimple field with the graded one
            coeffs = sf.coefficients(i, j)
            lo, hi = min(i, j), max(i, j)
            expect_zero_outside(lo, hi, wpos, "semisimple action on graded slots")
            action[(a, b)] = tuple(
                _constant_of(coeffs[k], "semisimple action constant") for k in wpos
            )
    for b, j in enumerate(wpos):
        expected = sum(
            Fraction(c) * toral_w[(idx, b)] for idx, c in enumerate(d.positive_combination)
        )
        if expected != d.frame[j].grade:
            raise DivisorError(
                f"graded slot {b} has Euler grade {expected}, annotation says {d.frame[j].grade}"
            )
    return FrameConstants(toral_w=toral_w, semisimple=semisimple, semisimple_action=action)


@dataclass(frozen=True)
class LogFormFrame:
    """Dual logarithmic 1-forms, stored as numerators over c * f.

    Row i of ``numerators`` holds the dz_j coefficients of the form dual to
    frame element i; dividing by constant * f gives the actual form.
    """

    numerators: Tuple[Tuple[WeightedPoly, ...], ...]
    constant: Fraction
    f: WeightedPoly


def dual_log_forms(d: FreeDivisor) -> LogFormFrame:
    """Adjugate-based dual frame with the exact pairing identity enforced."""
    matrix = d.coefficient_matrix()
    det = poly_determinant(matrix)
    constant = exact_divide(det, d.f).as_constant()
    adj = poly_adjugate(matrix)
    numerators = tuple(tuple(adj[j][i] for j in range(d.n)) for i in range(d.n))
    for i in range(d.n):
        for l in range(d.n):
            pairing = WeightedPoly.zero(d.weights)
            for j in range(d.n):
                pairing = pairing + numerators[i][j] * matrix[l][j]
            expected = det if i == l else WeightedPoly.zero(d.weights)
            if pairing != expected:
                raise DivisorError("dual form pairing identity failed; broken invariant")
    return LogFormFrame(numerators=numerators, constant=constant, f=d.f)


def dlog_f_expansion(d: FreeDivisor) -> Tuple[WeightedPoly, ...]:
    """Coefficients V_i(f) / f of d log f in the dual frame, exact quotients."""
    out = []
    for element in d.frame:
        try:
            out.append(exact_divide(element.field.apply(d.f), d.f))
        except InexactDivisionError as exc:
            raise DivisorError("a frame field does not preserve the divisor ideal") from exc
    return tuple(out)


def form_structure_equations(
    d: FreeDivisor, sf: Optional[StructureFunctions] = None
) -> Dict[int, Dict[Tuple[int, int], WeightedPoly]]:
    """Exterior derivatives of the dual frame: d xi^k = -sum c_ij^k xi^i ^ xi^j.

    Returns, for each form index k, the nonzero coefficients on the wedge
    basis xi^i ^ xi^j with i < j.
    """
    sf = sf or structure_functions(d)
    out: Dict[int, Dict[Tuple[int, int], WeightedPoly]] = {k: {} for k in range(d.n)}
    for (i, j), coeffs in sorted(sf.table.items()):
        for k, c in enumerate(coeffs):
            if not c.is_zero():
                out[k][(i, j)] = -c
    return out
