"""Matrix Lie algebra tools over exact rationals: gl_m with the commutator.

Bracket convention.  The primitive operation everywhere in this package is
the plain commutator [X, Y]_c = XY - YX.  The right-invariant convention used
for frame fields makes constant connection values bracket with the opposite
sign; formulas at that interface are written out explicitly in
:mod:`logres.connections` rather than hidden behind a flag, and the
normal-form sign fixtures in the test suite pin the choice.

Jordan-Chevalley decomposition is computed by the Newton iteration on the
squarefree part of the characteristic polynomial, which stays inside Q[A] and
never needs eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .linear import RationalMatrix, charpoly, charpoly_at, inverse, rref
from .univariate import uni_squarefree_part


COMMUTATOR = "commutator"
RIGHT_INVARIANT = "right-invariant"


def commutator(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    return a * b - b * a


def lie_bracket(a: RationalMatrix, b: RationalMatrix, convention: str = COMMUTATOR) -> RationalMatrix:
    """Matrix bracket under an explicit sign convention.

    COMMUTATOR is ab - ba.  RIGHT_INVARIANT is its negative: identifying a
    matrix group's Lie algebra with right-invariant fields flips the sign,
    and constant values of frame-dual connection components bracket that way.
    """
    if convention == COMMUTATOR:
        return commutator(a, b)
    if convention == RIGHT_INVARIANT:
        return commutator(b, a)
    raise ValueError(f"unknown bracket convention {convention!r}")


def ad_operator(a: RationalMatrix) -> RationalMatrix:
    """Matrix of X -> [a, X]_c on matrix units, ordered row-major.

    Unit E_{rc} corresponds to flat index r * m + c, so column j of the
    result is the flattened commutator [a, E_j]_c.
    """
    if not a.is_square():
        raise ValueError("ad of a non-square matrix")
    m = a.rows
    size = m * m
    cols: List[List[Fraction]] = []
    for s in range(m):
        for c in range(m):
            col = [Fraction(0)] * size
            for r in range(m):
                col[r * m + c] += a[r, s]
            for c2 in range(m):
                col[s * m + c2] -= a[c, c2]
            cols.append(col)
    return RationalMatrix(list(zip(*cols)))


def centralizer_algebra(mats: Sequence[RationalMatrix], size: Optional[int] = None) -> Tuple[int, List[RationalMatrix]]:
    """Dimension and basis of {X : [X, M]_c = 0 for every M in mats}."""
    if mats:
        m = mats[0].rows
        if any(not mat.is_square() or mat.rows != m for mat in mats):
            raise ValueError("all matrices must be square and of equal size")
    elif size is None:
        raise ValueError("an empty family needs an explicit matrix size")
    else:
        m = size
    if not mats:
        basis = []
        for r in range(m):
            for c in range(m):
                unit = [[Fraction(int(i == r and j == c)) for j in range(m)] for i in range(m)]
                basis.append(RationalMatrix(unit))
        return m * m, basis
    stacked = [row for mat in mats for row in ad_operator(mat).entries]
    result = rref(RationalMatrix(stacked))
    basis = [RationalMatrix([list(vec[i * m:(i + 1) * m]) for i in range(m)]) for vec in result.kernel]
    return len(basis), basis


def charpoly_squarefree_part(a: RationalMatrix):
    """The squarefree part of the characteristic polynomial of a."""
    return uni_squarefree_part(charpoly(a))


def is_semisimple(a: RationalMatrix) -> bool:
    """True iff the minimal polynomial is squarefree, i.e. a is diagonalizable."""
    return charpoly_at(a, charpoly_squarefree_part(a)).is_zero()


def is_nilpotent(a: RationalMatrix) -> bool:
    if not a.is_square():
        raise ValueError("nilpotency of a non-square matrix")
    return a.power(a.rows).is_zero()


def is_unipotent(a: RationalMatrix) -> bool:
    if not a.is_square():
        raise ValueError("unipotency of a non-square matrix")
    return (a - RationalMatrix.identity(a.rows)).power(a.rows).is_zero()


@dataclass(frozen=True)
class JCDecomposition:
    """Commuting semisimple plus nilpotent (or times unipotent) split."""

    semisimple: RationalMatrix
    other: RationalMatrix
    mode: str  # "additive" or "multiplicative"

    @property
    def nilpotent(self) -> RationalMatrix:
        if self.mode != "additive":
            raise AttributeError("nilpotent part only exists in additive mode")
        return self.other

    @property
    def unipotent(self) -> RationalMatrix:
        if self.mode != "multiplicative":
            raise AttributeError("unipotent part only exists in multiplicative mode")
        return self.other


def _additive_semisimple(a: RationalMatrix) -> RationalMatrix:
    g = charpoly_squarefree_part(a)
    g_prime = [c * i for i, c in enumerate(g)][1:]
    x = a
    for _ in range(a.rows + 1):
        gx = charpoly_at(x, g)
        if gx.is_zero():
            return x
        x = x - charpoly_at(x, g) * inverse(charpoly_at(x, g_prime))
    raise ArithmeticError("Newton iteration failed to converge; broken invariant")


def jordan_chevalley(a: RationalMatrix, mode: str = "additive") -> JCDecomposition:
    """Unique Jordan-Chevalley decomposition of a square rational matrix.

    Additive mode returns (S, N) with a = S + N; multiplicative mode needs an
    invertible input and returns (S, U) with a = S * U.  All defining
    invariants are verified before returning.
    """
    if mode not in ("additive", "multiplicative"):
        raise ValueError(f"unknown mode {mode!r}")
    if not a.is_square():
        raise ValueError("decomposition of a non-square matrix")
    s = _additive_semisimple(a)
    if mode == "additive":
        n = a - s
        decomposition = JCDecomposition(semisimple=s, other=n, mode=mode)
        _verify_additive(a, s, n)
        return decomposition
    from .linear import determinant

    if determinant(a) == 0:
        raise ValueError("multiplicative decomposition needs an invertible matrix")
    u = inverse(s) * a
    decomposition = JCDecomposition(semisimple=s, other=u, mode=mode)
    _verify_multiplicative(a, s, u)
    return decomposition


def _verify_additive(a: RationalMatrix, s: RationalMatrix, n: RationalMatrix) -> None:
    if not (s + n == a and commutator(s, n).is_zero() and is_nilpotent(n) and is_semisimple(s)):
        raise ArithmeticError("additive decomposition invariants failed; broken invariant")


def _verify_multiplicative(a: RationalMatrix, s: RationalMatrix, u: RationalMatrix) -> None:
    if not (s * u == a and commutator(s, u).is_zero() and is_unipotent(u) and is_semisimple(s)):
        raise ArithmeticError("multiplicative decomposition invariants failed; broken invariant")


def log_unipotent(u: RationalMatrix) -> RationalMatrix:
    """Logarithm of a unipotent matrix via the terminating nilpotent series."""
    if not is_unipotent(u):
        raise ValueError("logarithm is only defined here for unipotent matrices")
    m = u.rows
    x = u - RationalMatrix.identity(m)
    total = RationalMatrix.zeros(m, m)
    power = RationalMatrix.identity(m)
    for i in range(1, m + 1):
        power = power * x
        if power.is_zero():
            break
        total = total + Fraction((-1) ** (i + 1), i) * power
    return total


def exp_nilpotent(n: RationalMatrix) -> RationalMatrix:
    """Exponential of a nilpotent matrix via the terminating series."""
    if not is_nilpotent(n):
        raise ValueError("exponential is only exact here for nilpotent matrices")
    m = n.rows
    total = RationalMatrix.identity(m)
    power = RationalMatrix.identity(m)
    factorial = 1
    for i in range(1, m + 1):
        power = power * n
        if power.is_zero():
            break
        factorial *= i
        total = total + Fraction(1, factorial) * power
    return total


@dataclass(frozen=True)
class MonodromySplit:
    semisimple: RationalMatrix
    unipotent: RationalMatrix
    log_unipotent: RationalMatrix


def monodromy_split(m: RationalMatrix) -> MonodromySplit:
    """Multiplicative decomposition of an invertible matrix plus log of U."""
    decomposition = jordan_chevalley(m, mode="multiplicative")
    u = decomposition.unipotent
    return MonodromySplit(semisimple=decomposition.semisimple, unipotent=u, log_unipotent=log_unipotent(u))


@dataclass(frozen=True)
class ResidueData:
    """Commuting semisimple residue values for the toral frame directions.

    ``s_list`` holds one matrix per toral slot, ``positive_combination`` the
    integer combination of toral slots whose frame field is the grading Euler
    field, and ``chi`` (optional) one matrix per semisimple frame slot.
    """

    s_list: Tuple[RationalMatrix, ...]
    positive_combination: Tuple[int, ...]
    chi: Optional[Tuple[RationalMatrix, ...]] = None

    def __post_init__(self):
        if not self.s_list:
            raise ValueError("at least one toral residue matrix is required")
        if len(self.positive_combination) != len(self.s_list):
            raise ValueError("combination length must match the toral slot count")

    @property
    def k(self) -> int:
        return len(self.s_list)

    @property
    def matrix_size(self) -> int:
        return self.s_list[0].rows

    def grading_element(self) -> RationalMatrix:
        """The residue value on the distinguished positive generator."""
        m = self.matrix_size
        total = RationalMatrix.zeros(m, m)
        for coeff, s in zip(self.positive_combination, self.s_list):
            total = total + coeff * s
        return total


@dataclass(frozen=True)
class ResidueReport:
    ok: bool
    message: str = ""


def validate_residue(residue: ResidueData, s_constants: Optional[dict] = None) -> ResidueReport:
    """Check every structural invariant of a residue, reporting the first failure.

    ``s_constants`` maps a semisimple slot pair (i, j), i < j, to the constant
    coefficient vector of the frame fields' bracket over the semisimple slots.
    The chi values must realize the same constants under the RIGHT_INVARIANT
    bracket, i.e. with the sign opposite to the plain commutator; this is the
    compatibility that makes the constant connection with those values flat.
    """
    m = residue.matrix_size
    for idx, s in enumerate(residue.s_list):
        if not s.is_square() or s.rows != m:
            return ResidueReport(False, f"S_{idx + 1} is not square of size {m}")
        if not is_semisimple(s):
            return ResidueReport(False, f"S_{idx + 1} is not semisimple")
    for i in range(residue.k):
        for j in range(i + 1, residue.k):
            if not commutator(residue.s_list[i], residue.s_list[j]).is_zero():
                return ResidueReport(False, f"S_{i + 1} and S_{j + 1} do not commute")
    if residue.chi is not None:
        for idx, y in enumerate(residue.chi):
            if not y.is_square() or y.rows != m:
                return ResidueReport(False, f"chi_{idx + 1} is not square of size {m}")
        for i, s in enumerate(residue.s_list):
            for j, y in enumerate(residue.chi):
                if not commutator(s, y).is_zero():
                    return ResidueReport(False, f"S_{i + 1} does not centralize chi_{j + 1}")
        if s_constants is not None:
            count = len(residue.chi)
            for i in range(count):
                for j in range(i + 1, count):
                    expected = RationalMatrix.zeros(m, m)
                    for k, coeff in enumerate(s_constants.get((i, j), [0] * count)):
                        expected = expected + coeff * residue.chi[k]
                    actual = lie_bracket(residue.chi[i], residue.chi[j], convention=RIGHT_INVARIANT)
                    if not (actual - expected).is_zero():
                        return ResidueReport(False, f"chi does not respect the bracket of slots ({i + 1}, {j + 1})")
    return ResidueReport(True)
