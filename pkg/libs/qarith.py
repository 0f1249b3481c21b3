"""
Exact Arithmetic Kernel
=======================

q-integers, q-factorials, q-binomials, general linear group orders and the
cyclotomic integers used by the finite-field oracle. Every value is either a
Python int wrapped in ``fractions.Fraction`` (the exact scalar type used across
the project) or a ``CyclotomicInt``. There is no floating point anywhere.
"""

import os
import sys
import math
import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple, Union

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from libs.errors import EnumerationLimitError, IntegralityError, ValidationError
from utils import get_logger

logger = get_logger(__name__)

ExactScalar = Fraction

DEFAULT_INV_CAP = 8


def exact(value: Union[int, Fraction]) -> Fraction:
    """Coerce an int or Fraction to the exact scalar type."""
    return value if isinstance(value, Fraction) else Fraction(value)


def as_integer(value: Fraction, context: str = "value") -> int:
    """Return ``value`` as an int, raising if it has a nontrivial denominator."""
    value = exact(value)
    if value.denominator != 1:
        raise IntegralityError(f"{context} is not an integer: {value}", counterexample=str(value))
    return value.numerator


def _check_q(q: int) -> None:
    if q < 2:
        raise ValidationError(f"q must be an integer >= 2, got {q}")


@lru_cache(maxsize=None)
def _q_int(n: int, q: int) -> int:
    return sum(q ** i for i in range(n))


def q_int(n: int, q: int) -> Fraction:
    """[n] = 1 + q + ... + q^(n-1); [0] = 0."""
    _check_q(q)
    if n < 0:
        raise ValidationError(f"q_int needs n >= 0, got {n}")
    return Fraction(_q_int(n, q))


@lru_cache(maxsize=None)
def _q_factorial(n: int, q: int) -> int:
    result = 1
    for k in range(1, n + 1):
        result *= _q_int(k, q)
    return result


def q_factorial(n: int, q: int) -> Fraction:
    """[n]! = [n][n-1]...[1], with [0]! = 1."""
    _check_q(q)
    if n < 0:
        raise ValidationError(f"q_factorial needs n >= 0, got {n}")
    return Fraction(_q_factorial(n, q))


@lru_cache(maxsize=None)
def _q_binomial(n: int, k: int, q: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return _q_factorial(n, q) // (_q_factorial(k, q) * _q_factorial(n - k, q))


def q_binomial(n: int, k: int, q: int) -> Fraction:
    """Gaussian binomial coefficient; zero outside 0 <= k <= n (including n < 0)."""
    _check_q(q)
    return Fraction(_q_binomial(n, k, q))


@lru_cache(maxsize=None)
def _gl_order(n: int, q: int) -> int:
    result = 1
    for i in range(n):
        result *= q ** n - q ** i
    return result


def gl_order(n: int, q: int) -> Fraction:
    """|GL_n(F_q)|, with |GL_0| = 1."""
    _check_q(q)
    if n < 0:
        raise ValidationError(f"gl_order needs n >= 0, got {n}")
    return Fraction(_gl_order(n, q))


def inversions(word: Sequence[int]) -> int:
    """Number of pairs i < j with word[i] > word[j]."""
    return sum(1 for i, j in itertools.combinations(range(len(word)), 2) if word[i] > word[j])


def inv_generating_function(n: int, q: int, cap: int = DEFAULT_INV_CAP,
                            reciprocal: bool = False) -> Fraction:
    """
    Sum of q^inv(w) over all permutations of n letters, by explicit enumeration.

    Args:
        n (int): Number of letters.
        q (int): Evaluation point.
        cap (int): Largest n allowed.
        reciprocal (bool): Sum q^(-inv(w)) instead.

    Returns:
        Fraction: The exact sum.
    """
    _check_q(q)
    if n > cap:
        raise EnumerationLimitError(
            f"inv_generating_function: n={n} exceeds enumeration cap {cap}", limit=cap, required=n)
    base = Fraction(1, q) if reciprocal else Fraction(q)
    total = Fraction(0)
    for word in itertools.permutations(range(n)):
        total += base ** inversions(word)
    return total


def subset_weight_sum(n: int, k: int, q: int, direction: str = "up") -> Fraction:
    """
    Sum of q^wt(A) over k-subsets A of {1..n}.

    ``direction="up"`` counts pairs (a, b) with a in A, b in {1..n}, a < b;
    ``direction="down"`` counts pairs (b, a) with b < a.
    """
    _check_q(q)
    if direction not in ("up", "down"):
        raise ValidationError(f"direction must be 'up' or 'down', got {direction!r}")
    total = 0
    for subset in itertools.combinations(range(1, n + 1), k):
        if direction == "up":
            weight = sum(n - a for a in subset)
        else:
            weight = sum(a - 1 for a in subset)
        total += q ** weight
    return Fraction(total)


# --- Independent counting sequences used by the verification suites ---

def catalan(n: int) -> int:
    """Catalan number via C_0 = 1, C_{m+1} = sum_i C_i C_{m-i}."""
    values = [1]
    for m in range(n):
        values.append(sum(values[i] * values[m - i] for i in range(m + 1)))
    return values[n]


def bell_numbers(n: int) -> List[int]:
    """Bell numbers B_0..B_n from the Bell triangle."""
    bells = [1]
    row = [1]
    for _ in range(n):
        new_row = [row[-1]]
        for value in row:
            new_row.append(new_row[-1] + value)
        row = new_row
        bells.append(row[0])
    return bells


def rook_count(m: int) -> int:
    """Number of rook placements on an m x m board: sum_k k! C(m,k)^2."""
    return sum(math.factorial(k) * math.comb(m, k) ** 2 for k in range(m + 1))


# --- Cyclotomic integers ---

class CyclotomicInt:
    """
    Element of Z[zeta_p] for a prime p.

    Stored in the power basis 1, zeta, ..., zeta^(p-2); zeta^(p-1) is always
    rewritten as -(1 + zeta + ... + zeta^(p-2)), so two elements are equal
    exactly when their coefficient tuples are equal.
    """

    __slots__ = ("prime", "coefficients")

    def __init__(self, prime: int, coefficients: Iterable[int] = ()):
        if prime < 2 or any(prime % d == 0 for d in range(2, math.isqrt(prime) + 1)):
            raise ValidationError(f"CyclotomicInt needs a prime, got {prime}")
        raw = [0] * prime
        for exponent, value in enumerate(coefficients):
            raw[exponent % prime] += int(value)
        top = raw[prime - 1]
        self.prime = prime
        self.coefficients: Tuple[int, ...] = tuple(raw[i] - top for i in range(prime - 1))

    @classmethod
    def zero(cls, prime: int) -> "CyclotomicInt":
        return cls(prime)

    @classmethod
    def one(cls, prime: int) -> "CyclotomicInt":
        return cls(prime, [1])

    @classmethod
    def zeta(cls, prime: int, exponent: int = 1) -> "CyclotomicInt":
        raw = [0] * prime
        raw[exponent % prime] = 1
        return cls(prime, raw)

    @classmethod
    def from_exponent_counts(cls, prime: int, counts: Sequence[int]) -> "CyclotomicInt":
        """sum_t counts[t] * zeta^t, with t read modulo p."""
        return cls(prime, counts)

    def _check_same_ring(self, other: "CyclotomicInt") -> None:
        if self.prime != other.prime:
            raise ValidationError(f"cannot combine Z[zeta_{self.prime}] with Z[zeta_{other.prime}]")

    def _coerce(self, other) -> "CyclotomicInt":
        if isinstance(other, int):
            return CyclotomicInt(self.prime, [other])
        if isinstance(other, CyclotomicInt):
            self._check_same_ring(other)
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicInt(self.prime, [a + b for a, b in zip(self.coefficients, other.coefficients)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInt(self.prime, [-a for a in self.coefficients])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        raw = [0] * self.prime
        for i, a in enumerate(self.coefficients):
            if not a:
                continue
            for j, b in enumerate(other.coefficients):
                raw[(i + j) % self.prime] += a * b
        return CyclotomicInt(self.prime, raw)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValidationError("negative powers are not supported in Z[zeta_p]")
        result = CyclotomicInt.one(self.prime)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = CyclotomicInt(self.prime, [other])
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        return self.prime == other.prime and self.coefficients == other.coefficients

    def __hash__(self):
        return hash((self.prime, self.coefficients))

    def is_rational_integer(self) -> bool:
        return all(c == 0 for c in self.coefficients[1:])

    def to_exact(self) -> Fraction:
        """The value as an exact scalar; raises if it is not a rational integer."""
        if not self.is_rational_integer():
            raise IntegralityError(f"cyclotomic sum is not a rational integer: {self!r}",
                                   counterexample=repr(self))
        return Fraction(self.coefficients[0] if self.coefficients else 0)

    def __repr__(self):
        return f"CyclotomicInt(p={self.prime}, {list(self.coefficients)})"
