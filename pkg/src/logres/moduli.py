"""Finite-dimensional normal-form data for flat logarithmic connections.

Given a divisor and a semisimple residue, the linear compatibility equations
for the connection components have graded polynomial solutions whose degrees
are pinned by the integer eigenvalues of ad of the grading residue value.
This module computes exact bases of those solution spaces, emits the
polynomial system cutting out the flat locus inside them, assembles the
connection attached to a point, and cross-checks the emitted system against a
direct curvature computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .connections import FlatnessReport, LogConnection, MatrixPolyMap, curvature, is_flat
from .divisor import (
    DivisorError,
    FrameConstants,
    FreeDivisor,
    StructureFunctions,
    VectorFieldPoly,
    exact_divide,
    frame_constants,
    structure_functions,
)
from .liealg import ResidueData, ad_operator, validate_residue
from .linear import RationalMatrix, inverse, integer_eigenvalues, rref
from .polynomials import Monomial, WeightedPoly, monomials_of_degree


class MembershipError(ValueError):
    """Raised when a value does not lie in the advertised solution space."""


class ResidueError(ValueError):
    """Raised when residue data is rejected by validation."""


@dataclass(frozen=True)
class SolutionSpace:
    """Exact graded basis of one linear solution space.

    ``slot`` is ("component", w-position) or ("correction", toral-position);
    basis elements are E-homogeneous matrix polynomial maps and
    ``dims_by_degree`` counts them per E-degree.
    """

    slot: Tuple[str, int]
    matrix_size: int
    basis: Tuple[MatrixPolyMap, ...]
    dims_by_degree: Dict[int, int]

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class SymmetryAlgebra:
    """Infinitesimal gauge symmetries of the trivial residue connection."""

    dimension: int
    constant_dimension: int
    positive_dimension: int
    basis: Tuple[MatrixPolyMap, ...]
    dims_by_degree: Dict[int, int]


@dataclass(frozen=True)
class _DivisorContext:
    divisor: FreeDivisor
    residue: ResidueData
    sf: StructureFunctions
    constants: FrameConstants
    eigenvalues: Tuple[int, ...]

    @property
    def matrix_size(self) -> int:
        return self.residue.matrix_size


def _context(d: FreeDivisor, residue: ResidueData) -> _DivisorContext:
    if len(residue.s_list) != d.toral_count:
        raise ResidueError(f"residue carries {len(residue.s_list)} toral values, divisor has {d.toral_count}")
    if tuple(residue.positive_combination) != tuple(d.positive_combination):
        raise ResidueError("residue and divisor disagree on the positive combination")
    if residue.chi is not None and len(residue.chi) != len(d.semisimple_indices):
        raise ResidueError("chi must carry one value per semisimple frame slot")
    if residue.chi is None and d.semisimple_indices:
        raise ResidueError("this divisor has semisimple frame directions; chi is required")
    sf = structure_functions(d)
    constants = frame_constants(d, sf)
    s_dict = dict(constants.semisimple)
    report = validate_residue(residue, s_constants=s_dict if residue.chi is not None else None)
    if not report.ok:
        raise ResidueError(report.message)
    lam = integer_eigenvalues(ad_operator(residue.grading_element()))
    return _DivisorContext(divisor=d, residue=residue, sf=sf, constants=constants, eigenvalues=tuple(lam))


def _eigenspace(operator: RationalMatrix, eigenvalue: int, m: int) -> List[RationalMatrix]:
    shifted = operator - eigenvalue * RationalMatrix.identity(operator.rows)
    result = rref(shifted)
    return [RationalMatrix([list(vec[i * m:(i + 1) * m]) for i in range(m)]) for vec in result.kernel]


@dataclass(frozen=True)
class _Channel:
    shift: int
    toral_offsets: Tuple[Fraction, ...]
    # coupling[a][other_channel] = constant coefficient of the other channel
    # in the semisimple direction a equation
    coupling: Tuple[Tuple[Fraction, ...], ...]


def _solve_channels(ctx: _DivisorContext, channels: Sequence[_Channel]) -> List[Tuple[int, Tuple[MatrixPolyMap, ...]]]:
    """Joint graded solve over all channels; returns (degree, tuple) basis vectors."""
    d = ctx.divisor
    m = ctx.matrix_size
    weights = d.weights
    ad_d = ad_operator(ctx.residue.grading_element())
    toral_fields = [d.frame[i].field for i in d.toral_indices]
    semis_fields = [d.frame[i].field for i in d.semisimple_indices]
    chi = ctx.residue.chi or ()

    degrees = sorted(
        {
            lam + ch.shift
            for ch in channels
            for lam in ctx.eigenvalues
            if lam + ch.shift >= 0 and monomials_of_degree(weights, lam + ch.shift)
        }
    )
    out: List[Tuple[int, Tuple[MatrixPolyMap, ...]]] = []
    zero_map = MatrixPolyMap.zeros(m, weights)
    for degree in degrees:
        candidates: List[Tuple[int, MatrixPolyMap]] = []
        for c_idx, ch in enumerate(channels):
            if degree - ch.shift not in ctx.eigenvalues:
                continue
            eigs = _eigenspace(ad_d, degree - ch.shift, m)
            for mono in monomials_of_degree(weights, degree):
                mono_poly = WeightedPoly.monomial(mono, weights)
                for mat in eigs:
                    candidates.append((c_idx, MatrixPolyMap.from_constant(mat, weights).scale(mono_poly)))
        if not candidates:
            continue

        residuals: List[List[MatrixPolyMap]] = []  # per candidate, per equation
        equations: List[Tuple[str, int, int]] = []
        for i in range(len(toral_fields)):
            for c_idx in range(len(channels)):
                equations.append(("t", i, c_idx))
        for a in range(len(semis_fields)):
            for c_idx in range(len(channels)):
                equations.append(("s", a, c_idx))
        for cand_channel, cand in candidates:
            row: List[MatrixPolyMap] = []
            for kind, idx, c_idx in equations:
                if kind == "t":
                    if cand_channel != c_idx:
                        row.append(zero_map)
                        continue
                    ch = channels[c_idx]
                    s_const = MatrixPolyMap.from_constant(ctx.residue.s_list[idx], weights)
                    value = cand.apply_field(toral_fields[idx])
                    value = value - cand.scale(ch.toral_offsets[idx])
                    value = value - (s_const.commutator(cand))
                    row.append(value)
                else:
                    value = zero_map
                    if cand_channel == c_idx:
                        chi_const = MatrixPolyMap.from_constant(chi[idx], weights)
                        value = cand.apply_field(semis_fields[idx]) - chi_const.commutator(cand)
                    coeff = channels[c_idx].coupling[idx][cand_channel] if channels[c_idx].coupling else Fraction(0)
                    if coeff:
                        value = value - cand.scale(coeff)
                    row.append(value)
            residuals.append(row)

        row_index: Dict[Tuple[int, int, int, Monomial], int] = {}
        columns: List[Dict[int, Fraction]] = []
        for cand_pos, row in enumerate(residuals):
            column: Dict[int, Fraction] = {}
            for eq_pos, value in enumerate(row):
                for r in range(m):
                    for c in range(m):
                        for mono, coeff in value[r, c].terms.items():
                            key = (eq_pos, r, c, mono)
                            if key not in row_index:
                                row_index[key] = len(row_index)
                            column[row_index[key]] = coeff
            columns.append(column)
        if not row_index:
            kernel = [
                tuple(Fraction(1) if q == pos else Fraction(0) for q in range(len(candidates)))
                for pos in range(len(candidates))
            ]
        else:
            matrix_rows = [[Fraction(0)] * len(candidates) for _ in range(len(row_index))]
            for cand_pos, column in enumerate(columns):
                for row_pos, coeff in column.items():
                    matrix_rows[row_pos][cand_pos] = coeff
            kernel = list(rref(RationalMatrix(matrix_rows)).kernel)
        for vec in kernel:
            parts = [zero_map] * len(channels)
            for cand_pos, coeff in enumerate(vec):
                if coeff:
                    c_idx, cand = candidates[cand_pos]
                    parts[c_idx] = parts[c_idx] + cand.scale(coeff)
            out.append((degree, tuple(parts)))
    return out


def _component_channels(ctx: _DivisorContext) -> List[_Channel]:
    d = ctx.divisor
    w_count = len(d.w_indices)
    toral_count = d.toral_count
    semis_count = len(d.semisimple_indices)
    channels = []
    for b in range(w_count):
        offsets = tuple(ctx.constants.toral_w[(i, b)] for i in range(toral_count))
        # coupling[a][other] multiplies the other channel in the equation of
        # semisimple direction a for this channel
        coupling = tuple(
            tuple(ctx.constants.semisimple_action[(a, b)][other] for other in range(w_count))
            for a in range(semis_count)
        )
        channels.append(_Channel(shift=d.frame[d.w_indices[b]].grade, toral_offsets=offsets, coupling=coupling))
    return channels


def solve_component_spaces(d: FreeDivisor, residue: ResidueData) -> List[SolutionSpace]:
    """One solution space per graded (w-kind) frame slot.

    Each basis element solves every toral direction equation
    E_i(B) = n_i B + [S_i, B]_c and, when chi is present, the coupled
    semisimple direction equations.
    """
    ctx = _context(d, residue)
    return _component_spaces(ctx)


def _component_spaces(ctx: _DivisorContext) -> List[SolutionSpace]:
    d = ctx.divisor
    channels = _component_channels(ctx)
    if not channels:
        return []
    solutions = _solve_channels(ctx, channels)
    per_slot: List[List[Tuple[int, MatrixPolyMap]]] = [[] for _ in channels]
    for degree, parts in solutions:
        support = [c_idx for c_idx, part in enumerate(parts) if not part.is_zero()]
        if len(support) > 1:
            raise DivisorError(
                "semisimple coupling mixes graded slots; per-slot bases are not defined for this divisor"
            )
        if support:
            per_slot[support[0]].append((degree, parts[support[0]]))
    spaces = []
    for b, items in enumerate(per_slot):
        dims: Dict[int, int] = {}
        for degree, _ in items:
            dims[degree] = dims.get(degree, 0) + 1
        spaces.append(
            SolutionSpace(
                slot=("component", b),
                matrix_size=ctx.matrix_size,
                basis=tuple(mp for _, mp in items),
                dims_by_degree=dims,
            )
        )
    return spaces


def _correction_space(ctx: _DivisorContext) -> Tuple[Tuple[MatrixPolyMap, ...], Dict[int, int]]:
    toral_count = ctx.divisor.toral_count
    semis_count = len(ctx.divisor.semisimple_indices)
    channel = _Channel(
        shift=0,
        toral_offsets=tuple(Fraction(0) for _ in range(toral_count)),
        coupling=tuple((Fraction(0),) for _ in range(semis_count)),
    )
    solutions = _solve_channels(ctx, [channel])
    dims: Dict[int, int] = {}
    basis = []
    for degree, parts in solutions:
        dims[degree] = dims.get(degree, 0) + 1
        basis.append(parts[0])
    return tuple(basis), dims


def solve_correction_spaces(d: FreeDivisor, residue: ResidueData) -> List[SolutionSpace]:
    """One copy per toral slot of the space solving E_i(N) = [S_i, N]_c.

    The corrections for every toral slot satisfy the same linear equations,
    so the returned spaces share one basis computed once.
    """
    ctx = _context(d, residue)
    basis, dims = _correction_space(ctx)
    return [
        SolutionSpace(slot=("correction", i), matrix_size=ctx.matrix_size, basis=basis, dims_by_degree=dict(dims))
        for i in range(d.toral_count)
    ]


def symmetry_algebra(d: FreeDivisor, residue: ResidueData) -> SymmetryAlgebra:
    """Graded Lie algebra of infinitesimal symmetries fixing the residue.

    The degree-zero part is the centralizer of the residue values inside
    gl_m; the strictly positive part exponentiates to polynomial gauge
    transformations equal to the identity at the origin.
    """
    ctx = _context(d, residue)
    basis, dims = _correction_space(ctx)
    constant = dims.get(0, 0)
    positive = sum(count for degree, count in dims.items() if degree > 0)
    return SymmetryAlgebra(
        dimension=len(basis),
        constant_dimension=constant,
        positive_dimension=positive,
        basis=basis,
        dims_by_degree=dims,
    )


# ----------------------------------------------------------------- the system


@dataclass(frozen=True)
class Coordinate:
    name: str
    slot: Tuple[str, int]
    basis_index: int
    degree: int


@dataclass(frozen=True)
class Equation:
    tag: str  # "curvature" | "ZN" | "NN-commute" | "nilpotency"
    frame_slots: Tuple[int, ...]
    entry: Tuple[int, int]
    base_monomial: Monomial
    poly: WeightedPoly  # in the coordinate ring

    def is_trivial(self) -> bool:
        return self.poly.is_zero()


@dataclass(frozen=True)
class PolySystem:
    """Equations in affine coordinates on the solution spaces.

    The coordinate ring has one variable per basis element of every
    component and correction space; equations are tagged by origin and by
    the (matrix entry, base monomial) pair they came from.
    """

    divisor_name: str
    matrix_size: int
    coordinates: Tuple[Coordinate, ...]
    equations: Tuple[Equation, ...]
    summary: Dict[str, object]

    @property
    def coordinate_names(self) -> Tuple[str, ...]:
        return tuple(c.name for c in self.coordinates)

    def evaluate(self, values: Sequence[Fraction]) -> List[Fraction]:
        if len(values) != len(self.coordinates):
            raise ValueError("coordinate value count mismatch")
        return [eq.poly.evaluate(values) for eq in self.equations]


def _coordinate_name(prefix: str, slot_number: int, element: MatrixPolyMap, variables: Sequence[str], index: int) -> str:
    nonzero = [
        (r, c, element[r, c])
        for r in range(element.size)
        for c in range(element.size)
        if element[r, c]
    ]
    if len(nonzero) == 1 and len(nonzero[0][2].terms) == 1:
        r, c, poly = nonzero[0]
        ((mono, coeff),) = poly.terms.items()
        if coeff == 1:
            body = f"{prefix}{slot_number}[{r + 1},{c + 1}]"
            if any(mono):
                body += "*" + _mono_text(mono, variables)
            return body
    return f"{prefix}{slot_number}#{index + 1}"


def _mono_text(mono: Monomial, variables: Sequence[str]) -> str:
    factors = [
        name if e == 1 else f"{name}^{e}"
        for name, e in zip(variables, mono)
        if e
    ]
    return "*".join(factors) if factors else "1"


@dataclass(frozen=True)
class ModuliProblem:
    """Solution spaces plus the emitted polynomial system, bundled."""

    divisor: FreeDivisor
    residue: ResidueData
    component_spaces: Tuple[SolutionSpace, ...]
    correction_spaces: Tuple[SolutionSpace, ...]
    symmetry: SymmetryAlgebra
    system: PolySystem


def moduli_system(d: FreeDivisor, residue: ResidueData) -> ModuliProblem:
    """Emit the defining equations of the flat locus in normal-form coordinates.

    One affine coordinate is introduced per basis vector of the component and
    correction spaces.  The equations are grouped and tagged: quadratic
    curvature matching on pairs of graded slots, compatibility of corrections
    with components (ZN), pairwise commutation of corrections (NN-commute),
    and entrywise nilpotency.  Ordering is deterministic for byte-stable
    output.
    """
    ctx = _context(d, residue)
    m = ctx.matrix_size
    comp_spaces = _component_spaces(ctx)
    corr_basis, corr_dims = _correction_space(ctx)
    corr_spaces = [
        SolutionSpace(slot=("correction", i), matrix_size=m, basis=corr_basis, dims_by_degree=dict(corr_dims))
        for i in range(d.toral_count)
    ]
    symmetry = SymmetryAlgebra(
        dimension=len(corr_basis),
        constant_dimension=corr_dims.get(0, 0),
        positive_dimension=sum(v for k, v in corr_dims.items() if k > 0),
        basis=corr_basis,
        dims_by_degree=dict(corr_dims),
    )

    coordinates: List[Coordinate] = []
    for space in comp_spaces + corr_spaces:
        prefix = "B" if space.slot[0] == "component" else "N"
        for b_idx, element in enumerate(space.basis):
            name = _coordinate_name(prefix, space.slot[1] + 1, element, d.variables, b_idx)
            coordinates.append(
                Coordinate(
                    name=name,
                    slot=space.slot,
                    basis_index=b_idx,
                    degree=element.degrees()[0] if element.degrees() else 0,
                )
            )
    ncoords = len(coordinates)
    nbase = d.n
    comb_weights = d.weights + (1,) * ncoords

    def embed_poly(p: WeightedPoly) -> WeightedPoly:
        return WeightedPoly(comb_weights, {mono + (0,) * ncoords: c for mono, c in p.terms.items()})

    def embed_map(mp: MatrixPolyMap) -> MatrixPolyMap:
        return MatrixPolyMap([[embed_poly(p) for p in row] for row in mp.entries])

    def embed_field(field: VectorFieldPoly) -> VectorFieldPoly:
        zero = WeightedPoly.zero(comb_weights)
        coeffs = tuple(embed_poly(c) for c in field.coefficients) + (zero,) * ncoords
        return VectorFieldPoly(coeffs)

    def coord_var(index: int) -> WeightedPoly:
        return WeightedPoly.variable(nbase + index, comb_weights)

    coord_offset = 0
    general: Dict[Tuple[str, int], MatrixPolyMap] = {}
    for space in comp_spaces + corr_spaces:
        total = MatrixPolyMap.zeros(m, comb_weights)
        for b_idx, element in enumerate(space.basis):
            total = total + embed_map(element).scale(coord_var(coord_offset + b_idx))
        general[space.slot] = total
        coord_offset += len(space.basis)

    s_embedded = [embed_map(MatrixPolyMap.from_constant(s, d.weights)) for s in residue.s_list]
    chi_embedded = [embed_map(MatrixPolyMap.from_constant(c, d.weights)) for c in (residue.chi or ())]
    w_fields = [embed_field(d.frame[i].field) for i in d.w_indices]

    equations: List[Equation] = []

    def split_into_equations(tag: str, frame_slots: Tuple[int, ...], value: MatrixPolyMap):
        for r in range(m):
            for c in range(m):
                buckets: Dict[Monomial, Dict[Monomial, Fraction]] = {}
                for mono, coeff in value[r, c].terms.items():
                    base, coord = mono[:nbase], mono[nbase:]
                    buckets.setdefault(base, {})[coord] = coeff
                base_weights = d.weights
                order = sorted(
                    buckets,
                    key=lambda mo: (sum(w * e for w, e in zip(base_weights, mo)), mo),
                )
                for base in order:
                    poly = WeightedPoly((1,) * ncoords if ncoords else (1,), {
                        (mono if ncoords else (0,)): coeff for mono, coeff in buckets[base].items()
                    })
                    equations.append(
                        Equation(tag=tag, frame_slots=frame_slots, entry=(r, c), base_monomial=base, poly=poly)
                    )

    # curvature equations on pairs of graded slots
    w_positions = list(range(len(d.w_indices)))
    for a in w_positions:
        for b in w_positions:
            if a >= b:
                continue
            i, j = d.w_indices[a], d.w_indices[b]
            coeffs = ctx.sf.coefficients(i, j)
            value = general[("component", b)].apply_field(w_fields[a])
            value = value - general[("component", a)].apply_field(w_fields[b])
            for pos, k in enumerate(d.toral_indices):
                if not coeffs[k].is_zero():
                    value = value - s_embedded[pos].scale(embed_poly(coeffs[k]))
            for pos, k in enumerate(d.semisimple_indices):
                if not coeffs[k].is_zero():
                    value = value - chi_embedded[pos].scale(embed_poly(coeffs[k]))
            for pos, k in enumerate(d.w_indices):
                if not coeffs[k].is_zero():
                    value = value - general[("component", pos)].scale(embed_poly(coeffs[k]))
            value = value - general[("component", a)].commutator(general[("component", b)])
            split_into_equations("curvature", (i, j), value)

    # graded fields applied to corrections
    for a in w_positions:
        for l in range(d.toral_count):
            value = general[("correction", l)].apply_field(w_fields[a])
            value = value - general[("component", a)].commutator(general[("correction", l)])
            split_into_equations("ZN", (d.w_indices[a], d.toral_indices[l]), value)

    # corrections commute pairwise
    for l1 in range(d.toral_count):
        for l2 in range(l1 + 1, d.toral_count):
            value = general[("correction", l1)].commutator(general[("correction", l2)])
            split_into_equations("NN-commute", (d.toral_indices[l1], d.toral_indices[l2]), value)

    # corrections are nilpotent, encoded entrywise
    for l in range(d.toral_count):
        value = general[("correction", l)].power(m)
        split_into_equations("nilpotency", (d.toral_indices[l],), value)

    equations = [eq for eq in equations if not eq.is_trivial()]
    summary = {
        "divisor": d.name,
        "matrix_size": m,
        "dim_components_per_slot": [space.dimension for space in comp_spaces],
        "dim_components": sum(space.dimension for space in comp_spaces),
        "dim_corrections_per_slot": len(corr_basis),
        "dim_symmetry_constant": symmetry.constant_dimension,
        "dim_symmetry_positive": symmetry.positive_dimension,
        "coordinates": ncoords,
        "equations": len(equations),
    }
    system = PolySystem(
        divisor_name=d.name,
        matrix_size=m,
        coordinates=tuple(coordinates),
        equations=tuple(equations),
        summary=summary,
    )
    return ModuliProblem(
        divisor=d,
        residue=residue,
        component_spaces=tuple(comp_spaces),
        correction_spaces=tuple(corr_spaces),
        symmetry=symmetry,
        system=system,
    )


# ------------------------------------------------------------------- points


@dataclass(frozen=True)
class ModuliPoint:
    """Candidate normal-form data: one component map per graded slot and one
    correction map per toral slot."""

    components: Tuple[MatrixPolyMap, ...]
    corrections: Tuple[MatrixPolyMap, ...]


def coordinates_of(point: ModuliPoint, problem: ModuliProblem) -> Tuple[Fraction, ...]:
    """Express a point in the emitted coordinates; MembershipError if outside."""
    values: List[Fraction] = []
    slots = list(problem.component_spaces) + list(problem.correction_spaces)
    given = list(point.components) + list(point.corrections)
    if len(point.components) != len(problem.component_spaces):
        raise MembershipError("wrong number of component maps")
    if len(point.corrections) != len(problem.correction_spaces):
        raise MembershipError("wrong number of correction maps")
    for space, target in zip(slots, given):
        values.extend(_span_coordinates(space, target))
    return tuple(values)


def _span_coordinates(space: SolutionSpace, target: MatrixPolyMap) -> List[Fraction]:
    if target.size != space.matrix_size:
        raise MembershipError("matrix size mismatch")
    if not space.basis:
        if target.is_zero():
            return []
        raise MembershipError(f"nonzero value in an empty solution space {space.slot}")
    keys: Dict[Tuple[int, int, Monomial], int] = {}
    maps = list(space.basis) + [target]
    for mp in maps:
        for r in range(mp.size):
            for c in range(mp.size):
                for mono in mp[r, c].terms:
                    keys.setdefault((r, c, mono), len(keys))
    rows = [[Fraction(0)] * len(space.basis) for _ in range(len(keys))]
    rhs = [Fraction(0)] * len(keys)
    for b_idx, mp in enumerate(space.basis):
        for r in range(mp.size):
            for c in range(mp.size):
                for mono, coeff in mp[r, c].terms.items():
                    rows[keys[(r, c, mono)]][b_idx] = coeff
    for r in range(target.size):
        for c in range(target.size):
            for mono, coeff in target[r, c].terms.items():
                rhs[keys[(r, c, mono)]] = coeff
    result = rref(RationalMatrix(rows), rhs)
    if result.inconsistent or result.solution is None:
        raise MembershipError(f"value does not lie in the span of solution space {space.slot}")
    if result.rank < len(space.basis):
        # basis elements are independent by construction; a rank drop here is a bug
        raise ArithmeticError("solution space basis is not independent; broken invariant")
    return list(result.solution)


def correction_pairings(d: FreeDivisor) -> List[List[WeightedPoly]]:
    """The polynomials pairing each grading character with each graded field.

    Entry [i][j] is the value on graded slot j of the closed 1-form dual to
    toral direction i, computed from the per-factor logarithmic derivatives:
    row i of inverse(C^T) against the exact quotients Z_j(f_a) / f_a, where
    C is the factor degree matrix.
    """
    factors = d.effective_factors()
    c_matrix = RationalMatrix(d.factor_degree_matrix)
    t_matrix = inverse(c_matrix.transpose())
    out: List[List[WeightedPoly]] = []
    quotients: List[List[WeightedPoly]] = []
    for j in d.w_indices:
        row = []
        for fac in factors:
            row.append(exact_divide(d.frame[j].field.apply(fac), fac))
        quotients.append(row)
    for i in range(d.toral_count):
        row = []
        for j_pos in range(len(d.w_indices)):
            total = WeightedPoly.zero(d.weights)
            for a in range(len(factors)):
                total = total + quotients[j_pos][a] * t_matrix[i, a]
            row.append(total)
        out.append(row)
    return out


def assemble_connection(d: FreeDivisor, residue: ResidueData, point: ModuliPoint,
                        problem: Optional[ModuliProblem] = None) -> LogConnection:
    """Build the connection attached to a normal-form point.

    Toral components are S_i + N_i, semisimple components are the constant
    chi values, and each graded component is B_j corrected by the pairing of
    the grading characters with the graded field times the corrections.
    Membership of the point in the solution spaces is enforced.
    """
    problem = problem or moduli_system(d, residue)
    coordinates_of(point, problem)  # membership check
    pairings = correction_pairings(d) if d.w_indices else []
    components: List[MatrixPolyMap] = []
    toral_pos = {idx: pos for pos, idx in enumerate(d.toral_indices)}
    semis_pos = {idx: pos for pos, idx in enumerate(d.semisimple_indices)}
    w_pos = {idx: pos for pos, idx in enumerate(d.w_indices)}
    for idx in range(d.n):
        if idx in toral_pos:
            pos = toral_pos[idx]
            base = MatrixPolyMap.from_constant(residue.s_list[pos], d.weights)
            components.append(base + point.corrections[pos])
        elif idx in semis_pos:
            components.append(MatrixPolyMap.from_constant(residue.chi[semis_pos[idx]], d.weights))
        else:
            pos = w_pos[idx]
            total = point.components[pos]
            for i in range(d.toral_count):
                factor = pairings[i][pos]
                if not factor.is_zero():
                    total = total + point.corrections[i].scale(factor)
            components.append(total)
    return LogConnection(divisor=d, components=tuple(components))


@dataclass(frozen=True)
class PointReport:
    flat: bool
    violations: Tuple[int, ...]  # indices into system.equations
    flatness: FlatnessReport

    @property
    def in_variety(self) -> bool:
        return not self.violations


def check_point(d: FreeDivisor, residue: ResidueData, point: ModuliPoint,
                problem: Optional[ModuliProblem] = None) -> PointReport:
    """Evaluate the emitted system at a point and cross-check against curvature.

    The flatness verdict from the direct curvature of the assembled
    connection must agree with the vanishing of all curvature, ZN, and
    NN-commute equations; disagreement means one of the two independent
    implementations is wrong, so it raises instead of returning.
    """
    problem = problem or moduli_system(d, residue)
    values = coordinates_of(point, problem)
    results = problem.system.evaluate(values)
    violations = tuple(i for i, v in enumerate(results) if v != 0)
    flat_tags = ("curvature", "ZN", "NN-commute")
    system_flat = all(
        results[i] == 0 for i, eq in enumerate(problem.system.equations) if eq.tag in flat_tags
    )
    report = is_flat(assemble_connection(d, residue, point, problem), sf=structure_functions(d))
    if report.flat != system_flat:
        raise ArithmeticError(
            "emitted system and direct curvature disagree on flatness; broken invariant"
        )
    # nilpotency tags are cross-checked against a direct matrix power
    for l, correction in enumerate(point.corrections):
        direct = correction.power(residue.matrix_size).is_zero()
        tagged = all(
            results[i] == 0
            for i, eq in enumerate(problem.system.equations)
            if eq.tag == "nilpotency" and eq.frame_slots == (d.toral_indices[l],)
        )
        if direct != tagged:
            raise ArithmeticError("nilpotency equations disagree with the direct power; broken invariant")
    return PointReport(flat=report.flat, violations=violations, flatness=report)


# --------------------------------------------------- restriction and certificates


def restrict_system(system: PolySystem, assignments: Dict[str, Fraction]) -> PolySystem:
    """Pin some coordinates to rational values and drop trivial equations."""
    names = list(system.coordinate_names)
    for name in assignments:
        if name not in names:
            raise KeyError(f"unknown coordinate {name!r}")
    keep = [i for i, name in enumerate(names) if name not in assignments]
    keep_pos = {old: new for new, old in enumerate(keep)}
    new_coords = tuple(system.coordinates[i] for i in keep)
    nkeep = len(keep)
    new_equations: List[Equation] = []
    for eq in system.equations:
        substituted = eq.poly.substitute(
            {i: assignments[names[i]] for i in range(len(names)) if names[i] in assignments}
        )
        terms = {}
        for mono, coeff in substituted.terms.items():
            new_mono = [0] * (nkeep if nkeep else 1)
            for old, e in enumerate(mono):
                if e:
                    new_mono[keep_pos[old]] = e
            terms[tuple(new_mono)] = coeff
        poly = WeightedPoly((1,) * (nkeep if nkeep else 1), terms)
        if not poly.is_zero():
            new_equations.append(
                Equation(eq.tag, eq.frame_slots, eq.entry, eq.base_monomial, poly)
            )
    summary = dict(system.summary)
    summary["coordinates"] = nkeep
    summary["equations"] = len(new_equations)
    summary["restricted"] = sorted(assignments)
    return PolySystem(
        divisor_name=system.divisor_name,
        matrix_size=system.matrix_size,
        coordinates=new_coords,
        equations=tuple(new_equations),
        summary=summary,
    )


@dataclass(frozen=True)
class LinearCertificate:
    status: str  # "consistent" | "inconsistent" | "undetermined"
    solution: Optional[Tuple[Fraction, ...]]
    witness: Optional[str]


def linear_certificate(system: PolySystem) -> LinearCertificate:
    """Decide solvability when the linear part of the system is determined.

    Solves the degree <= 1 equations exactly by row reduction; with a unique
    solution in hand, the remaining equations are evaluated there.  A nonzero
    value is an exact inconsistency certificate (a 0 = nonzero row after
    substitution).  Underdetermined linear parts are reported as such rather
    than guessed at.
    """
    ncoords = len(system.coordinates)
    linear_rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    higher: List[Equation] = []
    for eq in system.equations:
        degree = eq.poly.total_degree()
        if degree is None:
            continue
        if degree <= 1:
            row = [Fraction(0)] * ncoords
            constant = Fraction(0)
            for mono, coeff in eq.poly.terms.items():
                if not any(mono):
                    constant = coeff
                else:
                    row[mono.index(1)] = coeff
            linear_rows.append(row)
            rhs.append(-constant)
        else:
            higher.append(eq)
    if not linear_rows:
        return LinearCertificate("undetermined", None, None)
    result = rref(RationalMatrix(linear_rows), rhs)
    if result.inconsistent:
        return LinearCertificate("inconsistent", None, "linear subsystem is already inconsistent")
    if result.kernel:
        return LinearCertificate("undetermined", None, None)
    solution = result.solution
    for eq in higher:
        value = eq.poly.evaluate(solution)
        if value != 0:
            witness = (
                f"equation tagged {eq.tag} at entry {eq.entry} evaluates to {value} "
                "at the unique solution of the linear part"
            )
            return LinearCertificate("inconsistent", tuple(solution), witness)
    return LinearCertificate("consistent", tuple(solution), None)
