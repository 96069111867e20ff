"""Exact arithmetic over the Gaussian rationals ℚ(i).

Polynomials, Laurent windows, rational functions, principal parts and divisors
of functions on the projective line. Every value is immutable.
"""

from fractions import Fraction
from logging import getLogger
from typing import (
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from mlcech.errors import (
    RootsInsufficientError,
    WindowOverflowError,
    ZeroFunctionError,
)

logger = getLogger(__name__)

RationalLike = Union[int, Fraction, str]


class GaussianRational:
    """An element re + im·i of ℚ(i).

    Attributes:
        re (Fraction): The real part.
        im (Fraction): The imaginary part.
    """

    __slots__ = ("_re", "_im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0) -> None:
        self._re = Fraction(re)
        self._im = Fraction(im)

    @classmethod
    def coerce(cls, value: "Scalar") -> "GaussianRational":
        """Converts `value` to a `GaussianRational`.

        Args:
            value (Scalar): An int, `Fraction`, "p/q" string or `GaussianRational`.

        Raises:
            TypeError: If `value` is not an exact scalar.

        Returns:
            A[n] `GaussianRational` equal to `value`.
        """
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, bool) or not isinstance(value, (int, Fraction, str)):
            raise TypeError(f"Cannot convert {value!r} to a Gaussian rational")
        return cls(value)

    @property
    def re(self) -> Fraction:
        return self._re

    @property
    def im(self) -> Fraction:
        return self._im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self._re, -self._im)

    def norm(self) -> Fraction:
        """Returns re² + im²."""
        return self._re * self._re + self._im * self._im

    def is_real(self) -> bool:
        return self._im == 0

    def __add__(self, other: object) -> "GaussianRational":
        o = _as_gaussian(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self._re + o._re, self._im + o._im)

    __radd__ = __add__

    def __sub__(self, other: object) -> "GaussianRational":
        o = _as_gaussian(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self._re - o._re, self._im - o._im)

    def __rsub__(self, other: object) -> "GaussianRational":
        o = _as_gaussian(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> "GaussianRational":
        o = _as_gaussian(other)
        if o is None:
            return NotImplemented
        if o._im == 0:
            return GaussianRational(self._re * o._re, self._im * o._re)
        return GaussianRational(
            self._re * o._re - self._im * o._im, self._re * o._im + self._im * o._re
        )

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "GaussianRational":
        o = _as_gaussian(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("Division by the zero Gaussian rational")
        if o._im == 0:
            return GaussianRational(self._re / o._re, self._im / o._re)
        n = o.norm()
        return GaussianRational(
            (self._re * o._re + self._im * o._im) / n,
            (self._im * o._re - self._re * o._im) / n,
        )

    def __rtruediv__(self, other: object) -> "GaussianRational":
        o = _as_gaussian(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self._re, -self._im)

    def __pos__(self) -> "GaussianRational":
        return self

    def __pow__(self, exponent: int) -> "GaussianRational":
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else ONE / self
        result = ONE
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def __eq__(self, other: object) -> bool:
        o = _as_gaussian(other)
        if o is None:
            return NotImplemented
        return self._re == o._re and self._im == o._im

    def __hash__(self) -> int:
        if self._im == 0:
            return hash(self._re)
        return hash((self._re, self._im))

    def __bool__(self) -> bool:
        return self._re != 0 or self._im != 0

    def __complex__(self) -> complex:
        return complex(float(self._re), float(self._im))

    def __repr__(self) -> str:
        return f"GaussianRational({str(self._re)!r}, {str(self._im)!r})"

    def __str__(self) -> str:
        if self._im == 0:
            return str(self._re)
        im = "" if abs(self._im) == 1 else str(abs(self._im))
        if self._re == 0:
            return f"{'-' if self._im < 0 else ''}{im}i"
        return f"{self._re}{'-' if self._im < 0 else '+'}{im}i"


Scalar = Union[GaussianRational, int, Fraction, str]


def _as_gaussian(value: object) -> Optional[GaussianRational]:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return GaussianRational(value)
    return None


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)  # noqa: E741


class _Infinity:
    """The point ∞ of the projective line."""

    _instance: Optional["_Infinity"] = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self) -> str:
        return "INF"


INF = _Infinity()
Point = Union[GaussianRational, _Infinity]


def as_point(value: Union[Scalar, _Infinity]) -> Point:
    """Converts `value` to a `Point`, leaving `INF` as is."""
    if value is INF:
        return INF
    return GaussianRational.coerce(value)  # type: ignore[arg-type]


def point_sort_key(point: Point) -> Tuple[int, Fraction, Fraction]:
    """Sorts finite points by (re, im) and puts ∞ last."""
    if point is INF:
        return (1, Fraction(0), Fraction(0))
    assert isinstance(point, GaussianRational)
    return (0, point.re, point.im)


class Poly:
    """A polynomial with Gaussian rational coefficients.

    Coefficients are stored by ascending degree with trailing zeros stripped, so
    the zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()) -> None:
        cs = [GaussianRational.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self._coeffs: Tuple[GaussianRational, ...] = tuple(cs)

    @classmethod
    def constant(cls, c: Scalar) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c: Scalar = 1) -> "Poly":
        if degree < 0:
            raise ValueError(f"Monomial degree {degree} is negative")
        return cls([0] * degree + [c])

    @classmethod
    def linear(cls, root: Scalar) -> "Poly":
        """Returns t - `root`."""
        return cls([-GaussianRational.coerce(root), 1])

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> "Poly":
        result = cls([1])
        for r in roots:
            result = result * cls.linear(r)
        return result

    @property
    def coeffs(self) -> Tuple[GaussianRational, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1

    @property
    def lead(self) -> GaussianRational:
        if not self._coeffs:
            return ZERO
        return self._coeffs[-1]

    def coefficient(self, n: int) -> GaussianRational:
        if 0 <= n < len(self._coeffs):
            return self._coeffs[n]
        return ZERO

    def is_zero(self) -> bool:
        return not self._coeffs

    def valuation(self) -> int:
        """The order of vanishing at 0.

        Raises:
            ZeroFunctionError: If the polynomial is zero.
        """
        for n, c in enumerate(self._coeffs):
            if c:
                return n
        raise ZeroFunctionError("The zero polynomial has no valuation")

    def __add__(self, other: object) -> "Poly":
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        n = max(len(self._coeffs), len(o._coeffs))
        return Poly(self.coefficient(k) + o.coefficient(k) for k in range(n))

    __radd__ = __add__

    def __sub__(self, other: object) -> "Poly":
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        n = max(len(self._coeffs), len(o._coeffs))
        return Poly(self.coefficient(k) - o.coefficient(k) for k in range(n))

    def __rsub__(self, other: object) -> "Poly":
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self._coeffs)

    def __mul__(self, other: object) -> "Poly":
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return Poly()
        out = [ZERO] * (len(self._coeffs) + len(o._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if not a:
                continue
            for j, b in enumerate(o._coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            raise ValueError("Polynomials only have non-negative powers")
        result = Poly([1])
        for _ in range(exponent):
            result = result * self
        return result

    def __divmod__(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        """Exact long division.

        Raises:
            ZeroDivisionError: If `other` is the zero polynomial.
        """
        if other.is_zero():
            raise ZeroDivisionError("Polynomial division by zero")
        rem = list(self._coeffs)
        dd = other.degree
        inv_lead = ONE / other.lead
        quot = [ZERO] * max(0, len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k]
            if not c:
                continue
            q = c * inv_lead
            quot[k - dd] = q
            for j, b in enumerate(other._coeffs):
                rem[k - dd + j] = rem[k - dd + j] - q * b
        return Poly(quot), Poly(rem[:dd] if dd > 0 else [])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __eq__(self, other: object) -> bool:
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return self._coeffs == o._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __call__(self, x: Scalar) -> GaussianRational:
        xg = GaussianRational.coerce(x)
        acc = ZERO
        for c in reversed(self._coeffs):
            acc = acc * xg + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(c * k for k, c in enumerate(self._coeffs) if k > 0)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = ONE / self.lead
        return Poly(c * inv for c in self._coeffs)

    def scale(self, c: Scalar) -> "Poly":
        cg = GaussianRational.coerce(c)
        return Poly(a * cg for a in self._coeffs)

    def shift(self, a: Scalar) -> "Poly":
        """Returns p(t + a)."""
        ag = GaussianRational.coerce(a)
        if not ag:
            return self
        step = Poly([ag, 1])
        acc = Poly()
        for c in reversed(self._coeffs):
            acc = acc * step + Poly([c])
        return acc

    def reverse(self, n: Optional[int] = None) -> "Poly":
        """Returns tⁿ·p(1/t).

        Args:
            n (Optional[int]): The target degree, at least `degree`; defaults to
                `degree`.

        Raises:
            ValueError: If `n` is below the degree.
        """
        n = self.degree if n is None else n
        if n < self.degree:
            raise ValueError(f"Cannot reverse a degree {self.degree} polynomial to {n}")
        if self.is_zero():
            return self
        return Poly([ZERO] * (n - self.degree) + list(reversed(self._coeffs)))

    @staticmethod
    def gcd(a: "Poly", b: "Poly") -> "Poly":
        """The monic greatest common divisor, zero only when both are zero."""
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def __repr__(self) -> str:
        return f"Poly([{', '.join(str(c) for c in self._coeffs)}])"


def _as_poly(value: object) -> Optional[Poly]:
    if isinstance(value, Poly):
        return value
    g = _as_gaussian(value)
    if g is None:
        return None
    return Poly([g])


T = Poly([0, 1])


def square_free_factors(p: Poly) -> Dict[int, Poly]:
    """Yun's square-free decomposition of a nonzero polynomial.

    Args:
        p (Poly): The polynomial to decompose.

    Returns:
        A[n] `Dict[int, Poly]` mapping each multiplicity to the monic product of
        the irreducible factors with that multiplicity (constants omitted).
    """
    if p.is_zero():
        raise ZeroFunctionError("Cannot decompose the zero polynomial")
    f = p.monic()
    out: Dict[int, Poly] = {}
    if f.degree < 1:
        return out
    df = f.derivative()
    a = Poly.gcd(f, df)
    b = f // a
    c = df // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = Poly.gcd(b, d)
        if a.degree > 0:
            out[i] = a
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


class LaurentWindow:
    """The coefficients c_lo..c_hi of a Laurent series or Laurent polynomial.

    Arithmetic keeps the window of the left operand and raises
    `WindowOverflowError` whenever a nonzero coefficient would leave it.
    """

    __slots__ = ("_lo", "_hi", "_coeffs")

    def __init__(self, lo: int, hi: int, coeffs: Optional[Sequence[Scalar]] = None):
        if hi < lo:
            raise ValueError(f"Window [{lo}, {hi}] is empty")
        size = hi - lo + 1
        cs = [GaussianRational.coerce(c) for c in (coeffs or [])]
        if coeffs is not None and len(cs) != size:
            raise ValueError(f"Window [{lo}, {hi}] needs {size} coefficients")
        self._lo = lo
        self._hi = hi
        self._coeffs: Tuple[GaussianRational, ...] = tuple(cs) or (ZERO,) * size

    @classmethod
    def from_mapping(
        cls, lo: int, hi: int, coeffs: Mapping[int, Scalar]
    ) -> "LaurentWindow":
        """Builds a window from exponent → coefficient pairs.

        Raises:
            WindowOverflowError: If a nonzero coefficient lies outside [lo, hi].
        """
        values = [ZERO] * (hi - lo + 1)
        for n, c in coeffs.items():
            cg = GaussianRational.coerce(c)
            if not cg:
                continue
            if not lo <= n <= hi:
                raise WindowOverflowError(f"Exponent {n} lies outside [{lo}, {hi}]")
            values[n - lo] = cg
        return cls(lo, hi, values)

    @classmethod
    def from_laurent_polynomial(
        cls, f: "RationalFunction", lo: int, hi: int
    ) -> "LaurentWindow":
        """The window of a Laurent polynomial in t, i.e. a polynomial over a
        power of t.

        Raises:
            ValueError: If the denominator of `f` is not a power of t.
            WindowOverflowError: If a term of `f` lies outside [lo, hi].
        """
        v = f.den.degree
        if f.den != Poly.monomial(v):
            raise ValueError(f"{f} is not a Laurent polynomial")
        return cls.from_mapping(lo, hi, {n - v: c for n, c in enumerate(f.num.coeffs)})

    @property
    def lo(self) -> int:
        return self._lo

    @property
    def hi(self) -> int:
        return self._hi

    def __len__(self) -> int:
        return len(self._coeffs)

    def coefficient(self, n: int) -> GaussianRational:
        """Reads c_n.

        Raises:
            WindowOverflowError: If `n` lies outside the window.
        """
        if not self._lo <= n <= self._hi:
            raise WindowOverflowError(f"Exponent {n} lies outside [{self._lo}, {self._hi}]")
        return self._coeffs[n - self._lo]

    def items(self) -> Iterator[Tuple[int, GaussianRational]]:
        """Yields the nonzero (exponent, coefficient) pairs."""
        for k, c in enumerate(self._coeffs):
            if c:
                yield self._lo + k, c

    def as_vector(self) -> List[GaussianRational]:
        return list(self._coeffs)

    def restrict(self, lo: int, hi: int) -> "LaurentWindow":
        """Explicit truncation to [lo, hi] ⊆ [self.lo, self.hi]."""
        if lo < self._lo or hi > self._hi:
            raise WindowOverflowError(
                f"[{lo}, {hi}] is not inside [{self._lo}, {self._hi}]"
            )
        return LaurentWindow(lo, hi, self._coeffs[lo - self._lo : hi - self._lo + 1])

    def _combine(self, other: "LaurentWindow", sign: int) -> "LaurentWindow":
        values = list(self._coeffs)
        for n, c in other.items():
            if not self._lo <= n <= self._hi:
                raise WindowOverflowError(
                    f"Exponent {n} lies outside [{self._lo}, {self._hi}]"
                )
            values[n - self._lo] = values[n - self._lo] + sign * c
        return LaurentWindow(self._lo, self._hi, values)

    def __add__(self, other: "LaurentWindow") -> "LaurentWindow":
        return self._combine(other, 1)

    def __sub__(self, other: "LaurentWindow") -> "LaurentWindow":
        return self._combine(other, -1)

    def __neg__(self) -> "LaurentWindow":
        return LaurentWindow(self._lo, self._hi, [-c for c in self._coeffs])

    def __mul__(self, other: object) -> "LaurentWindow":
        if isinstance(other, LaurentWindow):
            product: Dict[int, GaussianRational] = {}
            for n, a in self.items():
                for m, b in other.items():
                    product[n + m] = product.get(n + m, ZERO) + a * b
            return LaurentWindow.from_mapping(self._lo, self._hi, product)
        c = _as_gaussian(other)
        if c is None:
            return NotImplemented
        return LaurentWindow(self._lo, self._hi, [a * c for a in self._coeffs])

    def __rmul__(self, other: object) -> "LaurentWindow":
        c = _as_gaussian(other)
        if c is None:
            return NotImplemented
        return self * c

    def shift(self, k: int) -> "LaurentWindow":
        """Multiplies by t^k inside the same window."""
        return LaurentWindow.from_mapping(
            self._lo, self._hi, {n + k: c for n, c in self.items()}
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentWindow):
            return NotImplemented
        return (self._lo, self._hi, self._coeffs) == (other._lo, other._hi, other._coeffs)

    def __hash__(self) -> int:
        return hash((self._lo, self._hi, self._coeffs))

    def __repr__(self) -> str:
        terms = ", ".join(f"{n}: {c}" for n, c in self.items())
        return f"LaurentWindow({self._lo}, {self._hi}, {{{terms}}})"


class RationalFunction:
    """A quotient num/den of polynomials, gcd-reduced with a monic denominator."""

    __slots__ = ("_num", "_den")

    def __init__(self, num: Union[Poly, Scalar], den: Union[Poly, Scalar] = 1):
        n = num if isinstance(num, Poly) else Poly([num])
        d = den if isinstance(den, Poly) else Poly([den])
        if d.is_zero():
            raise ZeroDivisionError("Rational function with zero denominator")
        if n.is_zero():
            d = Poly([1])
        elif d.degree > 0:
            g = Poly.gcd(n, d)
            if g.degree > 0:
                n, d = n // g, d // g
        lead = d.lead
        if lead != 1:
            inv = ONE / lead
            n, d = n.scale(inv), d.scale(inv)
        self._num = n
        self._den = d

    @classmethod
    def constant(cls, c: Scalar) -> "RationalFunction":
        return cls(Poly([c]))

    @classmethod
    def t(cls) -> "RationalFunction":
        return cls(T)

    @property
    def num(self) -> Poly:
        return self._num

    @property
    def den(self) -> Poly:
        return self._den

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_polynomial(self) -> bool:
        return self._den.degree == 0

    def __add__(self, other: object) -> "RationalFunction":
        o = _as_rational(other)
        if o is None:
            return NotImplemented
        if self._den == o._den:
            return RationalFunction(self._num + o._num, self._den)
        return RationalFunction(
            self._num * o._den + o._num * self._den, self._den * o._den
        )

    __radd__ = __add__

    def __sub__(self, other: object) -> "RationalFunction":
        o = _as_rational(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "RationalFunction":
        o = _as_rational(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self._num, self._den)

    def __mul__(self, other: object) -> "RationalFunction":
        o = _as_rational(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self._num * o._num, self._den * o._den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "RationalFunction":
        o = _as_rational(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("Division by the zero rational function")
        return RationalFunction(self._num * o._den, self._den * o._num)

    def __rtruediv__(self, other: object) -> "RationalFunction":
        o = _as_rational(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, exponent: int) -> "RationalFunction":
        if exponent < 0:
            return RationalFunction(self._den**-exponent, self._num**-exponent)
        return RationalFunction(self._num**exponent, self._den**exponent)

    def __eq__(self, other: object) -> bool:
        o = _as_rational(other)
        if o is None:
            return NotImplemented
        return self._num == o._num and self._den == o._den

    def __hash__(self) -> int:
        return hash((self._num, self._den))

    def __call__(self, x: Scalar) -> GaussianRational:
        """Evaluates at a finite point.

        Raises:
            ZeroDivisionError: If `x` is a pole.
        """
        return self._num(x) / self._den(x)

    def substitute_inverse(self) -> "RationalFunction":
        """Returns f(1/t), the function read in the chart s = 1/t."""
        dn, dd = self._num.degree, self._den.degree
        if self.is_zero():
            return self
        num, den = self._num.reverse(), self._den.reverse()
        if dd >= dn:
            num = num * Poly.monomial(dd - dn)
        else:
            den = den * Poly.monomial(dn - dd)
        return RationalFunction(num, den)

    def __repr__(self) -> str:
        return f"RationalFunction({self._num!r}, {self._den!r})"


def _as_rational(value: object) -> Optional[RationalFunction]:
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, Poly):
        return RationalFunction(value)
    g = _as_gaussian(value)
    if g is None:
        return None
    return RationalFunction(Poly([g]))


def _local_data(f: RationalFunction, a: Point) -> Tuple[int, Poly, Poly]:
    """Writes f near `a` as u^v·N(u)/D(u) with N(0), D(0) nonzero, u the local
    coordinate (t - a, or s = 1/t at ∞)."""
    if f.is_zero():
        raise ZeroFunctionError("The zero function has no local expansion")
    if a is INF:
        f = f.substitute_inverse()
        a = ZERO
    assert isinstance(a, GaussianRational)
    num, den = f.num.shift(a), f.den.shift(a)
    vn, vd = num.valuation(), den.valuation()
    return vn - vd, Poly(num.coeffs[vn:]), Poly(den.coeffs[vd:])


def order_at(f: RationalFunction, a: Point) -> int:
    """The order of `f` at `a` (negative at poles).

    Raises:
        ZeroFunctionError: If `f` is zero.
    """
    if f.is_zero():
        raise ZeroFunctionError("The zero function has no order")
    if a is INF:
        return f.den.degree - f.num.degree
    return _local_data(f, a)[0]


def laurent_expand(f: RationalFunction, a: Point, lo: int, hi: int) -> LaurentWindow:
    """The exact Laurent coefficients of `f` at `a` for exponents in [lo, hi].

    At ∞ the expansion is in the local coordinate s = 1/t.

    Args:
        f (RationalFunction): The function to expand.
        a (Point): The expansion point.
        lo (int): The lowest exponent.
        hi (int): The highest exponent.

    Raises:
        ValueError: If `hi` < `lo`.
        ZeroFunctionError: If `f` is zero.

    Returns:
        A[n] `LaurentWindow` holding c_lo..c_hi.
    """
    if hi < lo:
        raise ValueError(f"Window [{lo}, {hi}] is empty")
    v, num, den = _local_data(f, a)
    # c_{v+k} = series coefficient k of num/den, by recursive power-series division
    n_terms = hi - v + 1
    series: List[GaussianRational] = []
    inv0 = ONE / den.coeffs[0]
    for k in range(max(0, n_terms)):
        acc = num.coefficient(k)
        for j in range(1, min(k, den.degree) + 1):
            acc = acc - den.coeffs[j] * series[k - j]
        series.append(acc * inv0)
    values = [series[n - v] if 0 <= n - v < len(series) else ZERO for n in range(lo, hi + 1)]
    logger.debug(f"expanded {f} at {a} on [{lo}, {hi}] (order {v})")
    return LaurentWindow(lo, hi, values)


def residue_at(f: RationalFunction, a: Point) -> GaussianRational:
    """The residue of the 1-form f·dt at `a`.

    At ∞ this is the s⁻¹ coefficient of f(1/s)·(-s⁻²).
    """
    if f.is_zero():
        return ZERO
    if a is INF:
        g = -(f.substitute_inverse() / RationalFunction(Poly.monomial(2)))
        return residue_at(g, ZERO)
    if order_at(f, a) >= 0:
        return ZERO
    return laurent_expand(f, a, -1, -1).coefficient(-1)


class PrincipalPart:
    """A principal part Σ A_j (t-a)^{-j} at a finite pole, Σ A_j t^j at ∞.

    Attributes:
        pole (Point): The pole a.
        coeffs (Dict[int, GaussianRational]): The nonzero A_j keyed by j ≥ 1.
    """

    __slots__ = ("_pole", "_coeffs")

    def __init__(self, pole: Union[Point, Scalar], coeffs: Mapping[int, Scalar]):
        cs = {}
        for j, c in coeffs.items():
            if int(j) < 1:
                raise ValueError(f"Principal part index {j} must be at least 1")
            cg = GaussianRational.coerce(c)
            if cg:
                cs[int(j)] = cg
        if not cs:
            raise ValueError("A principal part needs a nonzero coefficient")
        self._pole = as_point(pole)
        self._coeffs = dict(sorted(cs.items()))

    @property
    def pole(self) -> Point:
        return self._pole

    @property
    def coeffs(self) -> Dict[int, GaussianRational]:
        return dict(self._coeffs)

    @property
    def order(self) -> int:
        return max(self._coeffs)

    def coefficient(self, j: int) -> GaussianRational:
        return self._coeffs.get(j, ZERO)

    def as_rational_function(self) -> RationalFunction:
        if self._pole is INF:
            return RationalFunction(
                Poly([self.coefficient(j) for j in range(self.order + 1)])
            )
        assert isinstance(self._pole, GaussianRational)
        # Σ A_j (t-a)^{m-j} / (t-a)^m
        m = self.order
        num = Poly([self.coefficient(m - k) for k in range(m)]).shift(-self._pole)
        return RationalFunction(num, Poly.linear(self._pole) ** m)

    def to_chart(self, lo: int) -> LaurentWindow:
        """The part as a Laurent window [lo, -1] in its local coordinate."""
        return LaurentWindow.from_mapping(lo, -1, {-j: c for j, c in self._coeffs.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrincipalPart):
            return NotImplemented
        return self._pole == other._pole and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._pole, tuple(self._coeffs.items())))

    def __repr__(self) -> str:
        terms = ", ".join(f"{j}: {c}" for j, c in self._coeffs.items())
        return f"PrincipalPart({self._pole}, {{{terms}}})"


def principal_part_at(f: RationalFunction, a: Point) -> Optional[PrincipalPart]:
    """The negative part of the expansion of `f` at `a`, `None` when `f` is
    holomorphic there."""
    if f.is_zero():
        return None
    v = order_at(f, a)
    if v >= 0:
        return None
    window = laurent_expand(f, a, v, -1)
    return PrincipalPart(a, {-n: c for n, c in window.items()})


def _split_off_roots(p: Poly, roots: Iterable[Point]) -> Tuple[Dict[Point, int], Poly]:
    """Divides out every supplied root as often as it divides `p`."""
    found: Dict[Point, int] = {}
    for r in roots:
        if r is INF or r in found:
            continue
        assert isinstance(r, GaussianRational)
        lin = Poly.linear(r)
        m = 0
        while p.degree > 0:
            q, rem = divmod(p, lin)
            if not rem.is_zero():
                break
            p, m = q, m + 1
        if m:
            found[r] = m
    return found, p


def _linear_factors(p: Poly, roots: Sequence[Point]) -> Dict[Point, int]:
    found, rest = _split_off_roots(p, roots)
    for mult, factor in square_free_factors(rest).items():
        if factor.degree > 1:
            raise RootsInsufficientError(
                f"Factor {factor} of multiplicity {mult} does not split over the "
                "supplied roots"
            )
        root = -factor.coeffs[0]
        found[root] = found.get(root, 0) + mult
    return found


def partial_fractions(
    f: RationalFunction, roots: Sequence[Union[Point, Scalar]] = ()
) -> Tuple[Poly, List[PrincipalPart]]:
    """Splits `f` into its polynomial part and its finite principal parts.

    Args:
        f (RationalFunction): The function to split.
        roots (Sequence): Roots of the denominator; linear square-free factors
            are found without them.

    Raises:
        RootsInsufficientError: If the denominator does not split.

    Returns:
        A[n] `Tuple[Poly, List[PrincipalPart]]`, the parts sorted by pole.
    """
    q, r = divmod(f.num, f.den)
    if r.is_zero():
        return q, []
    mults = _linear_factors(f.den, [as_point(x) for x in roots])
    proper = RationalFunction(r, f.den)
    parts = []
    for a in sorted(mults, key=point_sort_key):
        part = principal_part_at(proper, a)
        if part is not None:
            parts.append(part)
    return q, parts


class FnDivisor:
    """A divisor on ℙ¹: a finite map from points to nonzero integers."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Optional[Mapping[Union[Point, Scalar], int]] = None):
        merged: Dict[Point, int] = {}
        for p, n in (entries or {}).items():
            pt = as_point(p)
            merged[pt] = merged.get(pt, 0) + int(n)
        self._entries = {
            p: merged[p] for p in sorted(merged, key=point_sort_key) if merged[p]
        }

    @property
    def entries(self) -> Dict[Point, int]:
        return dict(self._entries)

    @property
    def degree(self) -> int:
        return sum(self._entries.values())

    @property
    def weight(self) -> int:
        """Σ |n_x|."""
        return sum(abs(n) for n in self._entries.values())

    @property
    def support(self) -> Tuple[Point, ...]:
        return tuple(self._entries)

    def items(self) -> Iterator[Tuple[Point, int]]:
        return iter(self._entries.items())

    def __getitem__(self, point: Union[Point, Scalar]) -> int:
        return self._entries.get(as_point(point), 0)

    def __len__(self) -> int:
        return len(self._entries)

    def __add__(self, other: "FnDivisor") -> "FnDivisor":
        merged = dict(self._entries)
        for p, n in other.items():
            merged[p] = merged.get(p, 0) + n
        return type(self)(merged)

    def __neg__(self) -> "FnDivisor":
        return type(self)({p: -n for p, n in self._entries.items()})

    def __sub__(self, other: "FnDivisor") -> "FnDivisor":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FnDivisor):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return hash(tuple(self._entries.items()))

    def __repr__(self) -> str:
        terms = ", ".join(f"{p}: {n}" for p, n in self._entries.items())
        return f"{type(self).__name__}({{{terms}}})"


def divisor_of(
    f: RationalFunction, roots: Sequence[Union[Point, Scalar]] = ()
) -> FnDivisor:
    """The divisor (f) of zeros minus poles, including ∞.

    Raises:
        ZeroFunctionError: If `f` is zero.
        RootsInsufficientError: If the numerator or denominator does not split.
    """
    if f.is_zero():
        raise ZeroFunctionError("The zero function has no divisor")
    pts = [as_point(x) for x in roots]
    entries: Dict[Point, int] = dict(_linear_factors(f.num, pts))
    for p, n in _linear_factors(f.den, pts).items():
        entries[p] = entries.get(p, 0) - n
    entries[INF] = f.den.degree - f.num.degree
    return FnDivisor(entries)
