"""Exact calculus of homogeneous bivariate polynomials.

Polynomials carry Fraction coefficients throughout.  A homogeneous
F(S,U) of degree n is stored as the coefficient list a_0..a_n of
sum_j a_j S^(n-j) U^j; derivatives are always with respect to the
first variable.  The root-transfer pipeline turns a monic f(T) with
root w into monic g, h with roots z - w*x and (z - w*x)/y, certified
by exact arithmetic in Q[T]/(f).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence, Union

from .errors import HypothesisViolated, InvalidArgument

Rat = Union[Fraction, int]


def _frac(x: Rat) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class HomoPoly:
    """Homogeneous polynomial sum_j coeffs[j] * S^(degree-j) * U^j.

    The degree is declared, not inferred: the zero polynomial of any
    degree is representable and len(coeffs) == degree + 1 always.
    """

    degree: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.degree < 0:
            raise InvalidArgument("degree must be nonnegative")
        if len(self.coeffs) != self.degree + 1:
            raise InvalidArgument(
                f"degree {self.degree} needs {self.degree + 1} coefficients, "
                f"got {len(self.coeffs)}")

    @classmethod
    def make(cls, degree: int, coeffs: Sequence[Rat]) -> "HomoPoly":
        return cls(degree, tuple(_frac(c) for c in coeffs))

    @classmethod
    def zero(cls, degree: int) -> "HomoPoly":
        return cls(degree, (Fraction(0),) * (degree + 1))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def evaluate(self, s: Rat, u: Rat) -> Fraction:
        s, u = _frac(s), _frac(u)
        n = self.degree
        return sum((c * s ** (n - j) * u**j for j, c in enumerate(self.coeffs)),
                   Fraction(0))

    def to_json_obj(self) -> dict:
        return {"degree": self.degree, "coefficients": [rat_str(c) for c in self.coeffs]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "HomoPoly":
        return cls.make(obj["degree"], [parse_rat(c) for c in obj["coefficients"]])


@dataclass(frozen=True)
class UnivariatePoly:
    """Univariate polynomial with coefficients listed from T^n down to T^0."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise InvalidArgument("need at least one coefficient")

    @classmethod
    def make(cls, coeffs: Sequence[Rat]) -> "UnivariatePoly":
        return cls(tuple(_frac(c) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return self.coeffs[0] == 1

    def evaluate(self, t: Rat) -> Fraction:
        acc = Fraction(0)
        for c in self.coeffs:
            acc = acc * _frac(t) + c
        return acc

    def to_json_obj(self) -> list:
        return [rat_str(c) for c in self.coeffs]

    @classmethod
    def from_json_obj(cls, obj: Sequence) -> "UnivariatePoly":
        return cls.make([parse_rat(c) for c in obj])


def rat_str(c: Fraction) -> str:
    c = _frac(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_rat(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return _frac(s)
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidArgument(f"cannot parse rational {s!r}") from exc


class QuotientElement:
    """Element of Q[T]/(f) for a monic modulus f, reduced to degree < deg f."""

    __slots__ = ("rep", "modulus")

    def __init__(self, rep: Sequence[Rat], modulus: UnivariatePoly):
        if not modulus.is_monic():
            raise InvalidArgument("modulus must be monic")
        self.modulus = modulus
        self.rep = self._reduce(tuple(_frac(c) for c in rep))

    def _reduce(self, rep: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        n = self.modulus.degree
        rep = list(rep)
        # long division by the monic modulus, coefficients descending
        while len(rep) > n:
            lead = rep[0]
            if lead != 0:
                for k in range(1, n + 1):
                    rep[k] -= lead * self.modulus.coeffs[k]
            rep.pop(0)
        rep = [Fraction(0)] * (n - len(rep)) + rep
        return tuple(rep)

    @classmethod
    def root(cls, modulus: UnivariatePoly) -> "QuotientElement":
        """The class of T, i.e. the tautological root of the modulus."""
        return cls((Fraction(1), Fraction(0)), modulus) if modulus.degree >= 1 \
            else cls((Fraction(0),), modulus)

    @classmethod
    def scalar(cls, c: Rat, modulus: UnivariatePoly) -> "QuotientElement":
        return cls((_frac(c),), modulus)

    def _check(self, other: "QuotientElement"):
        if self.modulus != other.modulus:
            raise InvalidArgument("mixed moduli")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuotientElement.scalar(other, self.modulus)
        self._check(other)
        return QuotientElement(
            tuple(a + b for a, b in zip(self.rep, other.rep)), self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return QuotientElement(tuple(-a for a in self.rep), self.modulus)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuotientElement.scalar(other, self.modulus)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuotientElement(tuple(_frac(other) * a for a in self.rep),
                                   self.modulus)
        self._check(other)
        n = self.modulus.degree
        prod = [Fraction(0)] * (2 * n - 1 if n else 1)
        for i, a in enumerate(self.rep):
            if a == 0:
                continue
            for j, b in enumerate(other.rep):
                prod[i + j] += a * b
        return QuotientElement(tuple(prod), self.modulus)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.rep)

    def __eq__(self, other):
        return (isinstance(other, QuotientElement)
                and self.modulus == other.modulus and self.rep == other.rep)

    def __repr__(self):
        return f"QuotientElement({[str(c) for c in self.rep]} mod {self.modulus})"


def evaluate_in_quotient(f: UnivariatePoly, el: QuotientElement) -> QuotientElement:
    acc = QuotientElement.scalar(0, el.modulus)
    for c in f.coeffs:
        acc = acc * el + c
    return acc


def homogenize(f: UnivariatePoly) -> HomoPoly:
    """Turn monic f(T) into F(S,U) with F(T,1) = f(T)."""
    if not f.is_monic():
        raise InvalidArgument("homogenize expects a monic polynomial")
    return HomoPoly(f.degree, f.coeffs)


def dehomogenize(F: HomoPoly) -> UnivariatePoly:
    """f(T) = F(T, 1)."""
    return UnivariatePoly(F.coeffs)


def derivative(F: HomoPoly, k: int = 1) -> HomoPoly:
    """k-fold derivative with respect to the first variable.

    For k above the degree the zero polynomial of degree 0 is returned,
    matching the vanishing of excess derivatives in Taylor sums.
    """
    if k < 0:
        raise InvalidArgument("derivative order must be nonnegative")
    n = F.degree
    if k > n:
        return HomoPoly.zero(0)
    out = []
    for j in range(n - k + 1):
        # d^k/dS^k of S^(n-j) brings down (n-j)(n-j-1)...(n-j-k+1)
        c = F.coeffs[j]
        for t in range(k):
            c *= n - j - t
        out.append(c)
    return HomoPoly(n - k, tuple(out))


def taylor_coefficient(F: HomoPoly, i: int, z: Rat, x: Rat) -> Fraction:
    """(1/(n-i)!) F^(n-i)(z,x) via the closed form sum_j C(n-j, i-j) a_j z^(i-j) x^j."""
    n = F.degree
    if not 0 <= i <= n:
        raise InvalidArgument(f"need 0 <= i <= {n}, got {i}")
    z, x = _frac(z), _frac(x)
    total = Fraction(0)
    for j in range(i + 1):
        total += comb(n - j, i - j) * F.coeffs[j] * z ** (i - j) * x**j
    return total


def taylor_coefficient_via_derivative(F: HomoPoly, i: int, z: Rat, x: Rat) -> Fraction:
    """Same value as taylor_coefficient, by differentiating then evaluating."""
    n = F.degree
    if not 0 <= i <= n:
        raise InvalidArgument(f"need 0 <= i <= {n}, got {i}")
    return derivative(F, n - i).evaluate(z, x) / factorial(n - i)


def integrate(G: HomoPoly, n: int) -> HomoPoly:
    """Int_n(G) = (n-i) sum_j a_j S^(i-j+1)/(i-j+1) U^j for G of degree i < n.

    The result has degree i+1 and, by construction, zero coefficient on
    U^(i+1); it is the unique antiderivative candidate with that property.
    """
    i = G.degree
    if n <= i:
        raise InvalidArgument(f"integrate needs n > deg G, got n={n}, deg={i}")
    out = [(n - i) * G.coeffs[j] / (i - j + 1) for j in range(i + 1)]
    out.append(Fraction(0))
    return HomoPoly(i + 1, tuple(out))


def verify_taylor_identity(F: HomoPoly, s: Rat, t: Rat, u: Rat) -> bool:
    """Check F(s-t, u) = sum_i (-1)^i (1/i!) F^(i)(s,u) t^i exactly."""
    s, t, u = _frac(s), _frac(t), _frac(u)
    left = F.evaluate(s - t, u)
    right = Fraction(0)
    sign = 1
    for i in range(F.degree + 1):
        right += sign * derivative(F, i).evaluate(s, u) * t**i / factorial(i)
        sign = -sign
    return left == right


def descend_g(f: UnivariatePoly, z: Rat, x: Rat) -> UnivariatePoly:
    """Monic polynomial whose roots are z - w*x for the roots w of f.

    Coefficient of T^(n-j) is (-1)^j (1/(n-j)!) F^(n-j)(z,x); the global
    sign (-1)^n is folded in so the result is monic for every degree.
    """
    if not f.is_monic():
        raise InvalidArgument("descend_g expects a monic polynomial")
    F = homogenize(f)
    n = f.degree
    out = []
    for j in range(n + 1):
        b = taylor_coefficient(F, j, z, x)
        out.append(b if j % 2 == 0 else -b)
    g = UnivariatePoly(tuple(out))
    assert g.is_monic()
    return g


def descend_h(g: UnivariatePoly, y: Rat) -> UnivariatePoly:
    """Scale roots by 1/y: coefficient of T^(n-i) becomes b_i / y^i."""
    y = _frac(y)
    if y == 0:
        raise InvalidArgument("descend_h needs y != 0")
    if not g.is_monic():
        raise InvalidArgument("descend_h expects a monic polynomial")
    return UnivariatePoly(tuple(c / y**i for i, c in enumerate(g.coeffs)))


def verify_root_transfer(f: UnivariatePoly, z: Rat, x: Rat, y: Rat) -> bool:
    """Certify g(z - w*x) = 0 and h((z - w*x)/y) = 0 in Q[T]/(f).

    w is the class of T, so the check covers all roots of f at once and
    works whether or not f is irreducible.
    """
    y = _frac(y)
    if y == 0:
        raise InvalidArgument("verify_root_transfer needs y != 0")
    g = descend_g(f, z, x)
    h = descend_h(g, y)
    w = QuotientElement.root(f)
    v = (QuotientElement.scalar(z, f) - w * x) * (1 / y)
    g_val = evaluate_in_quotient(g, v * y)
    h_val = evaluate_in_quotient(h, v)
    return g_val.is_zero() and h_val.is_zero()


@dataclass(frozen=True)
class InXYCertificate:
    """Explicit membership H(z,x) = alpha*x^n + beta*y^n."""

    alpha: Fraction
    beta: Fraction


def check_inxy_instance(H: HomoPoly, z: Rat, x: Rat, y: Rat, c: Rat, d: Rat,
                        witnesses: Sequence[Rat]) -> InXYCertificate:
    """Produce (alpha, beta) with H(z,x) = alpha*x^n + beta*y^n.

    Hypotheses checked exactly: z = c*x - d*y, and for i = 0..n-1 the
    witness q_i satisfies H^(n-i)(z,x) = q_i * y^i.  The certificate
    follows the two evaluations of the Taylor expansion at T = d*y:
    beta collects the witness terms, alpha = H(c, 1).
    """
    n = H.degree
    z, x, y, c, d = (_frac(v) for v in (z, x, y, c, d))
    if z != c * x - d * y:
        raise HypothesisViolated(f"z = c*x - d*y fails: {z} != {c * x - d * y}")
    ws = [_frac(q) for q in witnesses]
    if len(ws) != n:
        raise InvalidArgument(f"need {n} witnesses q_0..q_{n - 1}, got {len(ws)}")
    for i in range(n):
        lhs = derivative(H, n - i).evaluate(z, x)
        if lhs != ws[i] * y**i:
            raise HypothesisViolated(
                f"witness {i} fails: H^({n - i})(z,x) = {lhs} != q_{i}*y^{i}",
                index=i)
    # H(z + d*y, x) = H(z,x) + a*y^n with a from the witness terms
    a = sum((ws[i] * d ** (n - i) / factorial(n - i) for i in range(n)), Fraction(0))
    alpha = H.evaluate(c, Fraction(1))
    beta = -a
    assert H.evaluate(z, x) == alpha * x**n + beta * y**n
    return InXYCertificate(alpha=alpha, beta=beta)
