"""Sparse multivariate polynomials over exact rationals with a weighted grading.

Every polynomial carries a vector of positive integer weights, one per
variable.  The weighted degree of a monomial z^e is sum(w[i] * e[i]); we call
it the E-degree because it is the eigenvalue of the Euler vector field
sum(w[i] * z_i * d/dz_i) on that monomial.  All arithmetic is exact; there is
no floating point anywhere in this package.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .univariate import uni_add, uni_degree, uni_derivative, uni_gcd, uni_mul, uni_scale

Monomial = Tuple[int, ...]


class WeightMismatchError(ValueError):
    """Raised when operands live in different weighted polynomial rings."""


class InexactDivisionError(ArithmeticError):
    """Raised when a polynomial quotient would leave a nonzero remainder."""


def _coerce(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an integer or Fraction, got {type(value).__name__}")


class WeightedPoly:
    """A sparse polynomial with rational coefficients and graded variables.

    Instances are immutable by convention: no method mutates ``terms`` after
    construction, so values may be shared freely across threads.
    """

    __slots__ = ("weights", "terms")

    def __init__(self, weights: Sequence[int], terms: Optional[Dict[Monomial, Fraction]] = None):
        weights = tuple(int(w) for w in weights)
        if any(w <= 0 for w in weights):
            raise ValueError("all variable weights must be positive integers")
        self.weights = weights
        clean: Dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            coeff = _coerce(coeff)
            if coeff == 0:
                continue
            mono = tuple(int(e) for e in mono)
            if len(mono) != len(weights) or any(e < 0 for e in mono):
                raise ValueError(f"bad monomial {mono} for {len(weights)} variables")
            clean[mono] = clean.get(mono, Fraction(0)) + coeff
        self.terms = {m: c for m, c in clean.items() if c != 0}

    # ---------------------------------------------------------------- builders

    @classmethod
    def zero(cls, weights: Sequence[int]) -> "WeightedPoly":
        return cls(weights, {})

    @classmethod
    def constant(cls, value, weights: Sequence[int]) -> "WeightedPoly":
        value = _coerce(value)
        n = len(weights)
        return cls(weights, {(0,) * n: value} if value else {})

    @classmethod
    def variable(cls, index: int, weights: Sequence[int]) -> "WeightedPoly":
        n = len(weights)
        if not 0 <= index < n:
            raise IndexError(f"variable index {index} out of range for {n} variables")
        mono = tuple(1 if i == index else 0 for i in range(n))
        return cls(weights, {mono: Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Sequence[int], weights: Sequence[int], coeff=1) -> "WeightedPoly":
        return cls(weights, {tuple(exponents): _coerce(coeff)})

    # ----------------------------------------------------------------- queries

    @property
    def nvars(self) -> int:
        return len(self.weights)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, mono))

    def degree(self) -> Optional[int]:
        """Maximal E-degree of a term, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(self.monomial_degree(m) for m in self.terms)

    def total_degree(self) -> Optional[int]:
        """Ordinary (unweighted) total degree, or None for zero."""
        if not self.terms:
            return None
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degrees = {self.monomial_degree(m) for m in self.terms}
        return len(degrees) <= 1

    def homogeneous_degree(self) -> int:
        """E-degree of a homogeneous polynomial (zero counts as degree 0)."""
        degrees = {self.monomial_degree(m) for m in self.terms}
        if len(degrees) > 1:
            raise ValueError("polynomial is not E-homogeneous")
        return degrees.pop() if degrees else 0

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def as_constant(self) -> Fraction:
        """The value of a constant polynomial; error if nonconstant."""
        if any(any(m) for m in self.terms):
            raise ValueError("polynomial is not constant")
        return self.constant_term()

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        """Terms in graded-lexicographic order (degree, then exponents)."""
        return sorted(self.terms.items(), key=lambda t: (self.monomial_degree(t[0]), t[0]))

    def leading_term(self) -> Tuple[Monomial, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        mono = max(self.terms, key=lambda m: (self.monomial_degree(m), m))
        return mono, self.terms[mono]

    # -------------------------------------------------------------- arithmetic

    def _check_ring(self, other: "WeightedPoly") -> None:
        if self.weights != other.weights:
            raise WeightMismatchError(f"weight vectors differ: {self.weights} vs {other.weights}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedPoly):
            return NotImplemented
        return self.weights == other.weights and self.terms == other.terms

    def __hash__(self):
        return hash((self.weights, tuple(self.sorted_terms())))

    def __add__(self, other) -> "WeightedPoly":
        if not isinstance(other, WeightedPoly):
            other = WeightedPoly.constant(other, self.weights)
        self._check_ring(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            value = terms.get(mono, Fraction(0)) + coeff
            if value:
                terms[mono] = value
            else:
                terms.pop(mono, None)
        return WeightedPoly(self.weights, terms)

    def __radd__(self, other) -> "WeightedPoly":
        return self + other

    def __neg__(self) -> "WeightedPoly":
        return WeightedPoly(self.weights, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "WeightedPoly":
        if not isinstance(other, WeightedPoly):
            other = WeightedPoly.constant(other, self.weights)
        return self + (-other)

    def __rsub__(self, other) -> "WeightedPoly":
        return (-self) + other

    def __mul__(self, other) -> "WeightedPoly":
        if not isinstance(other, WeightedPoly):
            scalar = _coerce(other)
            if scalar == 0:
                return WeightedPoly.zero(self.weights)
            return WeightedPoly(self.weights, {m: c * scalar for m, c in self.terms.items()})
        self._check_ring(other)
        result: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                value = result.get(mono, Fraction(0)) + c1 * c2
                if value:
                    result[mono] = value
                else:
                    result.pop(mono, None)
        return WeightedPoly(self.weights, result)

    def __rmul__(self, other) -> "WeightedPoly":
        return self * other

    def __pow__(self, exponent: int) -> "WeightedPoly":
        if exponent < 0:
            raise ValueError("negative powers are not defined for polynomials")
        result = WeightedPoly.constant(1, self.weights)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ----------------------------------------------------------------- calculus

    def partial_derivative(self, var: int) -> "WeightedPoly":
        """Formal partial derivative with respect to variable ``var``."""
        if not 0 <= var < self.nvars:
            raise IndexError(f"variable index {var} out of range")
        terms: Dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            e = mono[var]
            if e == 0:
                continue
            lowered = tuple(v - 1 if i == var else v for i, v in enumerate(mono))
            terms[lowered] = terms.get(lowered, Fraction(0)) + coeff * e
        return WeightedPoly(self.weights, terms)

    def graded_components(self) -> Dict[int, "WeightedPoly"]:
        """Decomposition into E-homogeneous components, keyed by E-degree."""
        buckets: Dict[int, Dict[Monomial, Fraction]] = {}
        for mono, coeff in self.terms.items():
            buckets.setdefault(self.monomial_degree(mono), {})[mono] = coeff
        return {d: WeightedPoly(self.weights, t) for d, t in sorted(buckets.items())}

    def graded_component(self, degree: int) -> "WeightedPoly":
        terms = {m: c for m, c in self.terms.items() if self.monomial_degree(m) == degree}
        return WeightedPoly(self.weights, terms)

    # --------------------------------------------------------------- evaluation

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError("point dimension does not match variable count")
        values = [_coerce(v) for v in point]
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            term = coeff
            for v, e in zip(values, mono):
                if e:
                    term *= v ** e
            total += term
        return total

    def substitute(self, assignments: Dict[int, Fraction]) -> "WeightedPoly":
        """Set some variables to rational constants, keeping the same ring."""
        values = {i: _coerce(v) for i, v in assignments.items()}
        terms: Dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            factor = Fraction(1)
            reduced = list(mono)
            for i, v in values.items():
                if mono[i]:
                    factor *= v ** mono[i]
                    reduced[i] = 0
            if factor == 0:
                continue
            key = tuple(reduced)
            value = terms.get(key, Fraction(0)) + coeff * factor
            if value:
                terms[key] = value
            else:
                terms.pop(key, None)
        return WeightedPoly(self.weights, terms)

    # ------------------------------------------------------------------ display

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        if not self.terms:
            return "0"
        names = list(names) if names is not None else [f"z{i}" for i in range(self.nvars)]
        chunks: List[str] = []
        for mono, coeff in self.sorted_terms():
            factors = []
            for name, e in zip(names, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            if not body:
                chunk = str(coeff)
            elif coeff == 1:
                chunk = body
            elif coeff == -1:
                chunk = f"-{body}"
            else:
                chunk = f"{coeff}*{body}"
            chunks.append(chunk)
        text = chunks[0]
        for chunk in chunks[1:]:
            text += f" - {chunk[1:]}" if chunk.startswith("-") else f" + {chunk}"
        return text

    def __repr__(self) -> str:
        return f"WeightedPoly({self.format()})"


def exact_divide(num: WeightedPoly, den: WeightedPoly) -> WeightedPoly:
    """Return q with q * den == num, raising InexactDivisionError otherwise."""
    num._check_ring(den)
    if den.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    quotient: Dict[Monomial, Fraction] = {}
    rem = num
    den_mono, den_coeff = den.leading_term()
    while rem.terms:
        mono, coeff = rem.leading_term()
        step = tuple(a - b for a, b in zip(mono, den_mono))
        if any(e < 0 for e in step):
            raise InexactDivisionError("division leaves a nonzero remainder")
        q = coeff / den_coeff
        quotient[step] = quotient.get(step, Fraction(0)) + q
        rem = rem - WeightedPoly.monomial(step, num.weights, q) * den
    return WeightedPoly(num.weights, quotient)


def monomials_of_degree(weights: Sequence[int], degree: int) -> List[Monomial]:
    """All exponent tuples of exact E-degree ``degree``, in lexicographic order."""
    weights = tuple(int(w) for w in weights)
    if degree < 0:
        return []

    def rec(index: int, remaining: int) -> Iterator[Tuple[int, ...]]:
        if index == len(weights):
            if remaining == 0:
                yield ()
            return
        w = weights[index]
        for e in range(remaining // w + 1):
            for tail in rec(index + 1, remaining - w * e):
                yield (e,) + tail

    return list(rec(0, degree))


def monomials_up_to_degree(weights: Sequence[int], bound: int) -> List[Monomial]:
    out: List[Monomial] = []
    for d in range(bound + 1):
        out.extend(monomials_of_degree(weights, d))
    return out


# ------------------------------------------------------------- squarefreeness

PROBABLY_SQUAREFREE = "probably-squarefree"
NOT_SQUAREFREE = "not-squarefree"
INCONCLUSIVE = "inconclusive"


def random_fraction(rng: random.Random, span: int = 9, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def squarefree_probable(f: WeightedPoly, trials: int = 8, seed: int = 0) -> str:
    """Monte Carlo reducedness check by restriction to random rational lines.

    A repeated factor of f survives restriction to every line, so a nontrivial
    gcd(f|L, f|L') on every full-degree line is evidence of a square factor.
    Restrictions that drop below the total degree of f are discarded and
    retried; the verdict is advisory, not a proof.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has no squarefreeness verdict")
    full_degree = f.total_degree()
    if full_degree == 0:
        return PROBABLY_SQUAREFREE
    rng = random.Random(seed)
    verdicts: List[bool] = []
    attempts = 0
    while len(verdicts) < trials and attempts < 12 * trials:
        attempts += 1
        base = [random_fraction(rng) for _ in range(f.nvars)]
        direction = [random_fraction(rng) for _ in range(f.nvars)]
        restricted = _restrict_to_line(f, base, direction)
        if uni_degree(restricted) != full_degree:
            continue
        g = uni_gcd(restricted, uni_derivative(restricted))
        verdicts.append(uni_degree(g) > 0)
    if not verdicts:
        return INCONCLUSIVE
    # a genuine square factor survives restriction to every line, so the
    # evidence must persist across all full-degree trials; isolated tangency
    # accidents do not count
    if all(verdicts):
        return NOT_SQUAREFREE if len(verdicts) > 1 else INCONCLUSIVE
    return PROBABLY_SQUAREFREE


def _restrict_to_line(f: WeightedPoly, base: Sequence[Fraction], direction: Sequence[Fraction]) -> List[Fraction]:
    """Coefficients of t -> f(base + t * direction), low degree first."""
    total = [Fraction(0)]
    lines = [[Fraction(b), Fraction(d)] for b, d in zip(base, direction)]
    cache: Dict[Tuple[int, int], List[Fraction]] = {}

    def line_power(i: int, e: int) -> List[Fraction]:
        key = (i, e)
        if key not in cache:
            if e == 0:
                cache[key] = [Fraction(1)]
            else:
                cache[key] = uni_mul(line_power(i, e - 1), lines[i])
        return cache[key]

    for mono, coeff in f.sorted_terms():
        term = [Fraction(1)]
        for i, e in enumerate(mono):
            if e:
                term = uni_mul(term, line_power(i, e))
        total = uni_add(total, uni_scale(term, coeff))
    return total
