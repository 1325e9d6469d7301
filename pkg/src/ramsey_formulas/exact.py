"""Exact number systems: integer polynomials, cyclotomic integers, dyadic scalings.

Elements of Z[zeta_N] are stored in the power basis 1, z, ..., z^(phi(N)-1),
i.e. as residues modulo the cyclotomic polynomial Phi_N.  That basis is an
integral basis, so two elements are equal exactly when their coefficient
vectors are, and an element is divisible by 2 exactly when every coefficient
is even.  Zero tests are therefore vector comparisons, never float checks.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .errors import OrderMismatch, ParameterError

MAX_ORDER = 10_000


class IntPolynomial:
    """Sparse univariate polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c: dict[int, int] = {}
        if coeffs is None:
            pass
        elif isinstance(coeffs, dict):
            items = coeffs.items()
            for d, v in items:
                if d < 0:
                    raise ParameterError(f"negative degree {d}")
                if v:
                    c[int(d)] = c.get(int(d), 0) + int(v)
        else:
            for d, v in enumerate(coeffs):
                if v:
                    c[d] = int(v)
        self._c = {d: v for d, v in c.items() if v}

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> IntPolynomial:
        return cls({degree: coeff})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def degree(self) -> int | float:
        """Degree; ``-inf`` for the zero polynomial."""
        return max(self._c) if self._c else float("-inf")

    def low_degree(self) -> int | float:
        """Smallest exponent with a nonzero coefficient; ``inf`` for zero."""
        return min(self._c) if self._c else float("inf")

    def coeff(self, m: int) -> int:
        return self._c.get(m, 0)

    def leading_coefficient(self) -> int:
        return self._c[max(self._c)] if self._c else 0

    def is_zero(self) -> bool:
        return not self._c

    def coeff_list(self) -> list[int]:
        if not self._c:
            return []
        return [self._c.get(d, 0) for d in range(max(self._c) + 1)]

    def __call__(self, x):
        return poly_eval(self, x)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPolynomial({0: other})
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = IntPolynomial({0: other})
        out = dict(self._c)
        for d, v in other._c.items():
            out[d] = out.get(d, 0) + v
        return IntPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial({d: -v for d, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial({d: v * other for d, v in self._c.items()})
        out: dict[int, int] = {}
        for d1, v1 in self._c.items():
            for d2, v2 in other._c.items():
                out[d1 + d2] = out.get(d1 + d2, 0) + v1 * v2
        return IntPolynomial(out)

    __rmul__ = __mul__

    def divmod_monic(self, divisor: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        """Quotient and remainder by a monic divisor (exact over Z)."""
        if divisor.leading_coefficient() != 1:
            raise ParameterError("divisor must be monic")
        dd = divisor.degree()
        rem = dict(self._c)
        quot: dict[int, int] = {}
        while rem and max(rem) >= dd:
            top = max(rem)
            c = rem[top]
            shift = top - dd
            quot[shift] = c
            for d, v in divisor._c.items():
                rem[d + shift] = rem.get(d + shift, 0) - c * v
                if rem[d + shift] == 0:
                    del rem[d + shift]
        return IntPolynomial(quot), IntPolynomial(rem)

    def __repr__(self) -> str:
        if not self._c:
            return "IntPolynomial(0)"
        terms = " + ".join(f"{v}*t^{d}" for d, v in sorted(self._c.items()))
        return f"IntPolynomial({terms})"

    def to_json(self) -> dict:
        return {"coeffs": {str(d): str(v) for d, v in sorted(self._c.items())}}

    @classmethod
    def from_json(cls, obj: dict) -> IntPolynomial:
        return cls({int(d): int(v) for d, v in obj["coeffs"].items()})

    def to_csv(self) -> str:
        lines = ["degree,coefficient"]
        lines += [f"{d},{v}" for d, v in sorted(self._c.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> IntPolynomial:
        rows = [ln.split(",") for ln in text.strip().splitlines()[1:]]
        return cls({int(d): int(v) for d, v in rows})


def poly_eval(P: IntPolynomial, x):
    """Exact Horner evaluation at an int or Fraction (floats are evaluated in float)."""
    if isinstance(x, Rational) and not isinstance(x, Fraction):
        x = Fraction(x)
    if P.is_zero():
        return Fraction(0) if not isinstance(x, float) else 0.0
    acc = 0
    for d in range(P.degree(), -1, -1):
        acc = acc * x + P.coeff(d)
    return Fraction(acc) if isinstance(acc, int) else acc


def poly_coeff(P: IntPolynomial, m: int) -> int:
    return P.coeff(m)


class BivariatePolynomial:
    """Sparse integer polynomial in (z, w), keyed by exponent pairs."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: dict[tuple[int, int], int] | None = None):
        self._c = {(int(i), int(j)): int(v) for (i, j), v in (coeffs or {}).items() if v}

    @property
    def coeffs(self) -> dict[tuple[int, int], int]:
        return dict(self._c)

    def coeff(self, i: int, j: int) -> int:
        return self._c.get((i, j), 0)

    def total_degree(self) -> int | float:
        return max(i + j for i, j in self._c) if self._c else float("-inf")

    def __call__(self, z, w):
        return sum(v * z**i * w**j for (i, j), v in self._c.items())

    def specialize_z(self, z: int) -> IntPolynomial:
        """B(z, w) as a polynomial in w for a fixed integer z."""
        out: dict[int, int] = {}
        for (i, j), v in self._c.items():
            out[j] = out.get(j, 0) + v * z**i
        return IntPolynomial(out)

    def __eq__(self, other):
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self._c == other._c

    def to_json(self) -> dict:
        return {"coeffs": {f"{i},{j}": str(v) for (i, j), v in sorted(self._c.items())}}

    @classmethod
    def from_json(cls, obj: dict) -> BivariatePolynomial:
        out = {}
        for key, v in obj["coeffs"].items():
            i, j = key.split(",")
            out[(int(i), int(j))] = int(v)
        return cls(out)


# --- cyclotomic polynomials -------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic_polynomial(N: int) -> IntPolynomial:
    """Phi_N, by dividing x^N - 1 by Phi_d for every proper divisor d of N."""
    if not (1 <= N <= MAX_ORDER):
        raise ParameterError(f"cyclotomic order {N} outside [1, {MAX_ORDER}]")
    P = IntPolynomial({N: 1, 0: -1})
    for d in range(1, N):
        if N % d == 0:
            P, r = P.divmod_monic(cyclotomic_polynomial(d))
            assert r.is_zero()
    return P


@lru_cache(maxsize=None)
def _power_table(N: int) -> tuple[tuple[int, ...], ...]:
    """Row j holds the canonical coefficients of x^j mod Phi_N, for 0 <= j < N."""
    phi = cyclotomic_polynomial(N)
    deg = phi.degree()
    low = [-phi.coeff(i) for i in range(deg)]  # x^deg = sum low[i] x^i
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(N):
        rows.append(tuple(cur))
        carry = cur[-1]
        cur = [0] + cur[:-1]
        if carry:
            cur = [a + carry * b for a, b in zip(cur, low)]
    return tuple(rows)


def _reduce(N: int, raw: list[int]) -> tuple[int, ...]:
    table = _power_table(N)
    deg = len(table[0])
    out = list(raw[:deg]) + [0] * max(0, deg - len(raw))
    for j in range(deg, len(raw)):
        c = raw[j]
        if c:
            for i, t in enumerate(table[j % N]):
                if t:
                    out[i] += c * t
    return tuple(out)


class CyclotomicInteger:
    """Element of Z[zeta_N] in canonical form (residue mod Phi_N)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        self.order = order
        deg = len(_power_table(order)[0])
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) != deg:
            coeffs = list(_reduce(order, coeffs)) if len(coeffs) > deg else coeffs + [0] * (deg - len(coeffs))
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, order: int) -> CyclotomicInteger:
        return cls(order, ())

    @classmethod
    def from_int(cls, order: int, value: int) -> CyclotomicInteger:
        return cls(order, (value,))

    @classmethod
    def zeta_power(cls, order: int, exponent: int) -> CyclotomicInteger:
        return cls(order, _power_table(order)[exponent % order])

    @classmethod
    def from_exponents(cls, order: int, terms: dict[int, int]) -> CyclotomicInteger:
        table = _power_table(order)
        out = [0] * len(table[0])
        for j, c in terms.items():
            for i, t in enumerate(table[j % order]):
                out[i] += c * t
        return cls(order, out)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _same(self, other: CyclotomicInteger) -> None:
        if self.order != other.order:
            raise OrderMismatch(f"orders {self.order} and {other.order}; lift explicitly")

    def __add__(self, other):
        if isinstance(other, int):
            other = CyclotomicInteger.from_int(self.order, other)
        self._same(other)
        return CyclotomicInteger(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInteger(self.order, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInteger(self.order, [a * other for a in self.coeffs])
        self._same(other)
        a, b = self.coeffs, other.coeffs
        raw = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        raw[i + j] += x * y
        return CyclotomicInteger(self.order, _reduce(self.order, raw))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ParameterError("negative powers are not ring elements")
        result = CyclotomicInteger.from_int(self.order, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = CyclotomicInteger.from_int(self.order, other)
        if not isinstance(other, CyclotomicInteger):
            return NotImplemented
        if self.order != other.order:
            N = math.lcm(self.order, other.order)
            return self.lift(N).coeffs == other.lift(N).coeffs
        return self.coeffs == other.coeffs

    __hash__ = None  # equality is defined across orders

    def lift(self, new_order: int) -> CyclotomicInteger:
        """Re-express in Z[zeta_M] for a multiple M of the current order."""
        if new_order % self.order:
            raise OrderMismatch(f"{self.order} does not divide {new_order}")
        if new_order == self.order:
            return self
        step = new_order // self.order
        return CyclotomicInteger.from_exponents(new_order, {j * step: c for j, c in enumerate(self.coeffs) if c})

    def to_complex(self) -> complex:
        N = self.order
        re = math.fsum(c * math.cos(2 * math.pi * j / N) for j, c in enumerate(self.coeffs) if c)
        im = math.fsum(c * math.sin(2 * math.pi * j / N) for j, c in enumerate(self.coeffs) if c)
        return complex(re, im)

    def __repr__(self) -> str:
        return f"CyclotomicInteger({self.order}, {list(self.coeffs)})"


def cyc_add(a: CyclotomicInteger, b: CyclotomicInteger) -> CyclotomicInteger:
    return a + b


def cyc_mul(a: CyclotomicInteger, b: CyclotomicInteger) -> CyclotomicInteger:
    return a * b


def cyc_neg(a: CyclotomicInteger) -> CyclotomicInteger:
    return -a


def cyc_scale(a: CyclotomicInteger, c: int) -> CyclotomicInteger:
    return a * c


def _strip_twos(coeffs: tuple[int, ...], s: int) -> tuple[tuple[int, ...], int]:
    if not any(coeffs):
        return coeffs, 0
    while s > 0 and all(c % 2 == 0 for c in coeffs):
        coeffs = tuple(c // 2 for c in coeffs)
        s -= 1
    return coeffs, s


class ScaledCyclotomic:
    """``num / 2**log2_denom`` with num in Z[zeta_N]; normalized so num is not divisible by 2."""

    __slots__ = ("num", "log2_denom")

    def __init__(self, num: CyclotomicInteger, log2_denom: int = 0):
        if log2_denom < 0:
            num = num * (1 << -log2_denom)
            log2_denom = 0
        coeffs, s = _strip_twos(num.coeffs, log2_denom)
        self.num = num if coeffs is num.coeffs else CyclotomicInteger(num.order, coeffs)
        self.log2_denom = s

    @property
    def order(self) -> int:
        return self.num.order

    @classmethod
    def zero(cls, order: int) -> ScaledCyclotomic:
        return cls(CyclotomicInteger.zero(order))

    @classmethod
    def from_int(cls, order: int, value: int) -> ScaledCyclotomic:
        return cls(CyclotomicInteger.from_int(order, value))

    @classmethod
    def from_fraction(cls, order: int, value) -> ScaledCyclotomic:
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise ParameterError(f"{value} is not dyadic")
        return cls(CyclotomicInteger.from_int(order, value.numerator), den.bit_length() - 1)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _align(self, other: ScaledCyclotomic):
        s = max(self.log2_denom, other.log2_denom)
        return self.num * (1 << (s - self.log2_denom)), other.num * (1 << (s - other.log2_denom)), s

    def __add__(self, other):
        if isinstance(other, int):
            other = ScaledCyclotomic.from_int(self.order, other)
        a, b, s = self._align(other)
        return ScaledCyclotomic(a + b, s)

    __radd__ = __add__

    def __neg__(self):
        return ScaledCyclotomic(-self.num, self.log2_denom)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return ScaledCyclotomic(self.num * other, self.log2_denom)
        return ScaledCyclotomic(self.num * other.num, self.log2_denom + other.log2_denom)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return ScaledCyclotomic(self.num**e, self.log2_denom * e)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            try:
                other = ScaledCyclotomic.from_fraction(self.order, other)
            except ParameterError:
                return False
        if not isinstance(other, ScaledCyclotomic):
            return NotImplemented
        return self.log2_denom == other.log2_denom and self.num == other.num

    __hash__ = None  # equality is defined across orders

    def lift(self, new_order: int) -> ScaledCyclotomic:
        return ScaledCyclotomic(self.num.lift(new_order), self.log2_denom)

    def as_fraction(self) -> Fraction | None:
        """The value as a Fraction when it is rational, else None."""
        if any(self.num.coeffs[1:]):
            return None
        return Fraction(self.num.coeffs[0], 1 << self.log2_denom)

    def to_complex(self) -> complex:
        z = self.num.to_complex()
        return complex(math.ldexp(z.real, -self.log2_denom), math.ldexp(z.imag, -self.log2_denom))

    def to_float(self) -> float:
        """Real part in double precision.  Diagnostic only: never a zero certificate."""
        return self.to_complex().real

    def __repr__(self) -> str:
        return f"ScaledCyclotomic({self.num!r}, log2_denom={self.log2_denom})"

    def to_json(self) -> dict:
        return {
            "kind": "cyclotomic",
            "order": self.order,
            "coeffs": [str(c) for c in self.num.coeffs],
            "log2_denom": self.log2_denom,
        }

    @classmethod
    def from_json(cls, obj: dict) -> ScaledCyclotomic:
        if obj.get("kind") != "cyclotomic":
            raise ParameterError(f"not a cyclotomic value: {obj!r}")
        return cls(CyclotomicInteger(int(obj["order"]), [int(c) for c in obj["coeffs"]]), int(obj["log2_denom"]))


def to_float(v: ScaledCyclotomic) -> float:
    return v.to_float()


def _exponent(p: int, q: int, order: int | None) -> tuple[int, int]:
    if q < 1:
        raise ParameterError(f"denominator must be positive, got {q}")
    N = order if order is not None else 2 * q
    if (p * N) % (2 * q):
        raise OrderMismatch(f"zeta_{2 * q}^{p} is not a power of zeta_{N}")
    return N, p * N // (2 * q)


def cos_pi_rational(p: int, q: int, order: int | None = None) -> ScaledCyclotomic:
    """cos(pi * p / q) = (zeta_2q^p + zeta_2q^-p) / 2, in Z[zeta_N][1/2] with N = order or 2q."""
    N, j = _exponent(p, q, order)
    num = CyclotomicInteger.from_exponents(N, {j % N: 1}) + CyclotomicInteger.from_exponents(N, {(-j) % N: 1})
    return ScaledCyclotomic(num, 1)


def sin_pi_rational(p: int, q: int, order: int | None = None) -> ScaledCyclotomic:
    """sin(pi * p / q) = cos(pi * (q - 2p) / (2q)); natural order 4q."""
    return cos_pi_rational(q - 2 * p, 2 * q, order if order is not None else 4 * q)


def cos_pi(x: Fraction, order: int | None = None) -> ScaledCyclotomic:
    x = Fraction(x)
    return cos_pi_rational(x.numerator, x.denominator, order)


def sin_pi(x: Fraction, order: int | None = None) -> ScaledCyclotomic:
    x = Fraction(x)
    return sin_pi_rational(x.numerator, x.denominator, order)


def common_order(angles) -> int:
    """N = 2 * lcm of the denominators of the given angles (in units of pi)."""
    den = 1
    for a in angles:
        den = math.lcm(den, Fraction(a).denominator)
    return 2 * den


def fraction_to_json(x) -> dict:
    x = Fraction(x)
    return {"kind": "rational", "num": str(x.numerator), "den": str(x.denominator)}


def fraction_from_json(obj: dict) -> Fraction:
    if obj.get("kind") != "rational":
        raise ParameterError(f"not a rational value: {obj!r}")
    return Fraction(int(obj["num"]), int(obj["den"]))


def is_dyadic(x) -> bool:
    d = Fraction(x).denominator
    return d & (d - 1) == 0
