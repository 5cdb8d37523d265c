"""Exact p-adic digit and valuation combinatorics.

Everything here is integer arithmetic on immutable values; no floats.
The tau function tau(n) = (base-p digit sum of n-1)/(p-1) drives all
exponent bookkeeping downstream, so its values are kept as exact
rationals with denominator p-1 rather than floats or reduced fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidArgument, UndefinedValuation


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidArgument(f"p must be a prime integer, got {p!r}")
    return p


def sigma_digit_sum(n: int, p: int) -> int:
    """Sum of the digits of n in base p."""
    check_prime(p)
    if n < 0:
        raise InvalidArgument(f"digit sum needs n >= 0, got {n}")
    s = 0
    while n:
        n, r = divmod(n, p)
        s += r
    return s


@dataclass(frozen=True)
class TauRational:
    """Exact rational num/(p-1), stored un-reduced.

    All tau values and derived exponents for one prime share the fixed
    denominator p-1, so value equality is numerator equality and the
    arithmetic below never needs gcd reduction.  Values for different
    primes never mix; ordering comparisons across primes raise.
    """

    num: int
    p: int

    @property
    def den(self) -> int:
        return self.p - 1

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.p - 1)

    def as_fraction(self) -> Fraction:
        return self.value

    def is_integer(self) -> bool:
        return self.num % (self.p - 1) == 0

    def as_int(self) -> int:
        if not self.is_integer():
            raise InvalidArgument(f"{self} is not an integer")
        return self.num // (self.p - 1)

    def _coerce(self, other, op: str) -> "TauRational":
        if isinstance(other, TauRational):
            if other.p != self.p:
                raise InvalidArgument(
                    f"cannot {op} tau-values for p={self.p} and p={other.p}")
            return other
        if isinstance(other, int):
            return TauRational(other * (self.p - 1), self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other, "add")
        if other is NotImplemented:
            return NotImplemented
        return TauRational(self.num + other.num, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other, "subtract")
        if other is NotImplemented:
            return NotImplemented
        return TauRational(self.num - other.num, self.p)

    def __rsub__(self, other):
        other = self._coerce(other, "subtract")
        if other is NotImplemented:
            return NotImplemented
        return TauRational(other.num - self.num, self.p)

    def __neg__(self):
        return TauRational(-self.num, self.p)

    def __eq__(self, other):
        if isinstance(other, TauRational):
            return self.p == other.p and self.num == other.num
        if isinstance(other, int):
            return self.num == other * (self.p - 1)
        if isinstance(other, Fraction):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.p))

    def _cmp_num(self, other, op):
        other = self._coerce(other, op)
        if other is NotImplemented:
            return NotImplemented
        return other.num

    def __lt__(self, other):
        n = self._cmp_num(other, "compare")
        return NotImplemented if n is NotImplemented else self.num < n

    def __le__(self, other):
        n = self._cmp_num(other, "compare")
        return NotImplemented if n is NotImplemented else self.num <= n

    def __gt__(self, other):
        n = self._cmp_num(other, "compare")
        return NotImplemented if n is NotImplemented else self.num > n

    def __ge__(self, other):
        n = self._cmp_num(other, "compare")
        return NotImplemented if n is NotImplemented else self.num >= n

    def __str__(self):
        f = self.value
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"

    def __repr__(self):
        return f"TauRational({self.num}/{self.p - 1}, p={self.p})"


def tau(n: int, p: int) -> TauRational:
    """tau(n) = sigma_p(n-1)/(p-1), with tau(1) = 0."""
    check_prime(p)
    if n < 1:
        raise InvalidArgument(f"tau needs n >= 1, got {n}")
    return TauRational(sigma_digit_sum(n - 1, p), p)


def tau_difference(n: int, p: int) -> TauRational:
    """tau(n) - tau(n-1) computed directly as 1/(p-1) - a with p^a || n-1."""
    check_prime(p)
    if n < 2:
        raise InvalidArgument(f"tau_difference needs n >= 2, got {n}")
    a = vp_int(n - 1, p)
    return TauRational(1 - a * (p - 1), p)


def vp_int(n: int, p: int) -> int:
    """Largest k with p^k | n, for n != 0."""
    check_prime(p)
    if n == 0:
        raise UndefinedValuation("v_p(0) is undefined (infinite)")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp_factorial(n: int, p: int) -> int:
    """v_p(n!) = (n - sigma_p(n))/(p-1)."""
    if n < 0:
        raise InvalidArgument(f"factorial valuation needs n >= 0, got {n}")
    s = sigma_digit_sum(n, p)
    q, r = divmod(n - s, p - 1)
    assert r == 0, "n - sigma_p(n) must be divisible by p-1"
    return q


def vp_binomial(n: int, k: int, p: int) -> int:
    """v_p of the binomial coefficient C(n, k)."""
    if not 0 <= k <= n:
        raise InvalidArgument(f"need 0 <= k <= n, got k={k}, n={n}")
    return vp_factorial(n, p) - vp_factorial(k, p) - vp_factorial(n - k, p)


def heitmann_binomial_valuation(j: int, i: int, L: int, p: int) -> TauRational:
    """v_p of C(p^L - j, i - j) via the tau identity.

    Returns tau(j) + tau(i-j+1) - tau(i); the denominators cancel, so the
    result is asserted to be a nonnegative integer even though it is
    produced by TauRational arithmetic.
    """
    check_prime(p)
    if L < 1:
        raise InvalidArgument(f"need L >= 1, got {L}")
    if not 0 < j <= i <= p**L:
        raise InvalidArgument(f"need 0 < j <= i <= p^L, got j={j}, i={i}, p^L={p**L}")
    k = tau(j, p) + tau(i - j + 1, p) - tau(i, p)
    assert k.is_integer() and k.num >= 0, f"tau combination not a nonnegative integer: {k}"
    return k


def vp_central_binomial_pL(i: int, L: int, p: int) -> int:
    """v_p of C(p^L, i) = L - v_p(i), for 1 <= i <= p^L."""
    check_prime(p)
    if L < 1:
        raise InvalidArgument(f"need L >= 1, got {L}")
    if not 1 <= i <= p**L:
        raise InvalidArgument(f"need 1 <= i <= p^L, got i={i}, p^L={p**L}")
    return L - vp_int(i, p)


def check_epsilon_inequality(K: int, j_max: int, p: int):
    """Check j/p^K + K - tau(j) >= 0 for 1 <= j <= j_max.

    Returns the list of violations as (j, exact value) pairs; the claim
    is that the list is always empty.
    """
    check_prime(p)
    if K < 1 or j_max < 1:
        raise InvalidArgument("need K >= 1 and j_max >= 1")
    pK = p**K
    violations = []
    for j in range(1, j_max + 1):
        # j/p^K + K - tau(j), scaled by p^K * (p-1) to stay in integers
        scaled = j * (p - 1) + (K * (p - 1) - sigma_digit_sum(j - 1, p)) * pK
        if scaled < 0:
            violations.append((j, Fraction(scaled, pK * (p - 1))))
    return violations
