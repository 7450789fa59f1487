"""Exact univariate algebra over the rationals.

Scalars are :class:`fractions.Fraction`.  :class:`Poly` is an immutable
polynomial in the formal variable ``z`` and :class:`RationalFunction` is a
reduced quotient of two such polynomials with a monic denominator.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


class PoleError(ArithmeticError):
    """Raised when a rational function is evaluated at a root of its denominator."""

    def __init__(self, point: Fraction):
        self.point = Fraction(point)
        super().__init__(f"pole at z = {self.point}")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational number: {text!r}")
    if isinstance(text, Rational):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational number: {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


class Poly:
    """Polynomial in ``z`` with Fraction coefficients, stored low to high degree.

    Instances are immutable and hashable.  The zero polynomial has an empty
    coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, c: Scalar) -> Poly:
        return cls((c,))

    @classmethod
    def z(cls) -> Poly:
        return cls((0, 1))

    @classmethod
    def linear(cls, slope: Scalar, intercept: Scalar) -> Poly:
        """``slope*z + intercept``."""
        return cls((intercept, slope))

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar], lead: Scalar = 1) -> Poly:
        p = cls.const(lead)
        for r in roots:
            p = p * cls((-Fraction(r), 1))
        return p

    # -- basic queries -------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, Rational):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        return format_poly(self)

    # -- ring operations ----------------------------------------------
    @staticmethod
    def _coerce(other) -> Poly:
        if isinstance(other, Poly):
            return other
        if isinstance(other, Rational):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative int")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: Scalar) -> Poly:
        c = Fraction(c)
        return Poly(c * x for x in self.coeffs)

    def __divmod__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lead = other.lead
        if len(rem) - 1 < db:
            return Poly(), self
        quot = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] / lead
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(quot), Poly(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> Poly:
        """Quotient ``self / other``; raises ArithmeticError if not exact."""
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{self} is not divisible by {other}")
        return q

    # -- evaluation and transforms ------------------------------------
    def __call__(self, z0: Scalar) -> Fraction:
        z0 = Fraction(z0)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * z0 + c
        return acc

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return self.scale(1 / self.lead)

    def derivative(self) -> Poly:
        return Poly(k * c for k, c in enumerate(self.coeffs) if k)

    def negate_variable(self) -> Poly:
        """The polynomial ``p(-z)``."""
        return Poly(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs))

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> Poly:
        return cls(parse_rational(c) for c in data)


ZERO = Poly()
ONE = Poly.const(1)
Z = Poly.z()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm over Q."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    while b:
        a, b = b, a % b
    return a.monic()


def square_free_factorization(p: Poly) -> tuple[Fraction, list[tuple[Poly, int]]]:
    """Yun's algorithm: ``p = c * prod(f_i ** i)`` with monic square-free ``f_i``.

    Returns ``(c, [(f_i, i), ...])`` skipping trivial factors.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    c = p.lead
    f = p.monic()
    if f.degree < 1:
        return c, []
    out = []
    a0 = poly_gcd(f, f.derivative())
    b = f.exact_div(a0)
    cpart = f.derivative().exact_div(a0)
    d = cpart - b.derivative()
    i = 1
    while b.degree >= 1:
        a = poly_gcd(b, d)
        if a.degree >= 1:
            out.append((a, i))
        b = b.exact_div(a)
        cpart = d.exact_div(a)
        d = cpart - b.derivative()
        i += 1
    return c, out


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(p: Poly) -> list[Fraction]:
    """Distinct rational roots, by the rational root test on the cleared polynomial."""
    if p.degree < 1:
        return []
    lcm = 1
    for c in p.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in p.coeffs]
    roots = []
    if ints[0] == 0:
        roots.append(Fraction(0))
        k = next(i for i, c in enumerate(ints) if c)
        ints = ints[k:]
    if len(ints) > 1:
        for num in _divisors(ints[0]):
            for den in _divisors(ints[-1]):
                for cand in (Fraction(num, den), Fraction(-num, den)):
                    if cand not in roots and p(cand) == 0:
                        roots.append(cand)
    return sorted(roots)


def factor_over_q(p: Poly) -> tuple[Fraction, list[tuple[Poly, int]]]:
    """Square-free factorization with rational linear factors split off."""
    c, sqf = square_free_factorization(p)
    out = []
    for f, k in sqf:
        for r in rational_roots(f):
            lin = Poly((-r, 1))
            out.append((lin, k))
            f = f.exact_div(lin)
        if f.degree >= 1:
            out.append((f, k))
    out.sort(key=lambda fk: (fk[0].degree, fk[0].coeffs))
    return c, out


def _fmt_coeff(c: Fraction) -> str:
    return str(c) if c.denominator == 1 else f"({c})"


def format_poly(p: Poly, var: str = "z") -> str:
    """Render in descending degree, e.g. ``-z^3 + 3*z + 2``."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = _fmt_coeff(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{_fmt_coeff(mag)}*{mono}"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def format_factored(p: Poly, var: str = "z") -> str:
    """Factored rendering, e.g. ``-(z - 2)*(z + 1)^2``."""
    if p.is_zero():
        return "0"
    c, factors = factor_over_q(p)
    if not factors:
        return str(c)
    body = "*".join(
        f"({format_poly(f, var)})" + (f"^{k}" if k > 1 else "") for f, k in factors
    )
    if c == 1:
        return body
    if c == -1:
        return f"-{body}"
    return f"{_fmt_coeff(c)}*{body}"


class RationalFunction:
    """Reduced quotient ``num/den`` with ``gcd(num, den) = 1`` and monic ``den``."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = ONE):
        num = Poly._coerce(num)
        den = Poly._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = ZERO, ONE
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            lc = den.lead
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (Poly, Rational)):
            return self == RationalFunction(Poly._coerce(other))
        return NotImplemented

    def __hash__(self):
        return hash(("RationalFunction", self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self):
        return format_ratfun(self)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    @staticmethod
    def _coerce(other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (Poly, Rational)):
            return RationalFunction(Poly._coerce(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __call__(self, z0: Scalar) -> Fraction:
        return evaluate(self, z0)

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> RationalFunction:
        return cls(Poly.from_json(data["num"]), Poly.from_json(data["den"]))


def ratfun_reduce(num: Poly, den: Poly) -> RationalFunction:
    return RationalFunction(num, den)


def evaluate(f: RationalFunction, z0: Scalar) -> Fraction:
    z0 = Fraction(z0)
    d = f.den(z0)
    if d == 0:
        raise PoleError(z0)
    return f.num(z0) / d


def format_ratfun(f: RationalFunction, factored: bool = False) -> str:
    if factored:
        num, den = format_factored(f.num), format_factored(f.den)
        if f.den == ONE:
            return num
        if "*" in den:
            den = f"({den})"
        return f"{num} / {den}"
    if f.den == ONE:
        return format_poly(f.num)
    return f"{_wrap(f.num)} / {_wrap(f.den)}"


def _wrap(p: Poly) -> str:
    """Parenthesize unless ``p`` is a single term."""
    text = format_poly(p)
    return f"({text})" if sum(1 for c in p.coeffs if c) > 1 else text
