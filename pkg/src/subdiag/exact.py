"""Exact arithmetic in Q and in real quadratic fields Q(sqrt D).

Substitution matrices of binary substitutions are 2x2 integer matrices, so
their eigenvalues, PF eigenvectors and letter frequencies all live in one
real quadratic field.  Everything here is exact; floats appear only in
``__float__``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Sequence

from .core import Substitution, SubstitutionError, incidence, is_primitive, require_binary

Rational = Fraction


class FieldMismatchError(ArithmeticError):
    """Two quadratic irrationalities from different fields were combined."""


class ComplexSpectrumError(ValueError):
    """The 2x2 matrix has a pair of complex conjugate eigenvalues."""


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return ``(f, d)`` with ``n == f*f*d`` and ``d`` squarefree (n >= 0)."""
    if n < 0:
        raise ValueError("negative radicand")
    if n in (0, 1):
        return 1, n
    f, d, p = 1, n, 2
    while p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
            f *= p
        p += 1
    return f, d


_QV_PATTERN = re.compile(
    r"^(?P<a>[+-]?\d+(?:/\d+)?)?(?:(?P<sign>[+-])?(?P<b>\d+(?:/\d+)?)\*sqrt\((?P<d>\d+)\))?$")


@total_ordering
class QuadVal:
    """The real number ``a + b*sqrt(D)`` with rational ``a``, ``b``.

    ``D`` is normalised to be squarefree; rational values carry ``D == 0``
    and interoperate with every field.
    """

    __slots__ = ("a", "b", "D")

    def __init__(self, a=0, b=0, D: int = 0):
        a, b = Fraction(a), Fraction(b)
        if b and D:
            f, D = squarefree_decomposition(D)
            b *= f
            if D == 1:
                a, b, D = a + b, Fraction(0), 0
        else:
            b, D = Fraction(0), 0
        self.a, self.b, self.D = a, b, D

    @classmethod
    def sqrt(cls, n: int) -> "QuadVal":
        """Exact square root of a nonnegative integer."""
        r = math.isqrt(n)
        if r * r == n:
            return cls(r)
        return cls(0, 1, n)

    @classmethod
    def parse(cls, text: str) -> "QuadVal":
        m = _QV_PATTERN.match(text.replace(" ", ""))
        if m is None or (m["a"] is None and m["b"] is None):
            raise ValueError(f"cannot parse quadratic value {text!r}")
        a = Fraction(m["a"]) if m["a"] else Fraction(0)
        if m["b"] is None:
            return cls(a)
        b = Fraction(m["b"]) * (-1 if m["sign"] == "-" else 1)
        return cls(a, b, int(m["d"]))

    # field bookkeeping

    @staticmethod
    def _coerce(other) -> "QuadVal":
        if isinstance(other, QuadVal):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadVal(other)
        return NotImplemented

    def _field(self, other: "QuadVal") -> int:
        if self.D and other.D and self.D != other.D:
            raise FieldMismatchError(f"sqrt({self.D}) and sqrt({other.D}) do not mix")
        return self.D or other.D

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def rational(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is irrational")
        return self.a

    def conjugate(self) -> "QuadVal":
        return QuadVal(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadVal(self.a + other.a, self.b + other.b, self._field(other))

    __radd__ = __add__

    def __neg__(self):
        return QuadVal(-self.a, -self.b, self.D)

    def __pos__(self):
        return self

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
        D = self._field(other)
        return QuadVal(self.a * other.a + self.b * other.b * D,
                       self.a * other.b + self.b * other.a, D)

    __rmul__ = __mul__

    def inverse(self) -> "QuadVal":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadVal(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = QuadVal(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # order

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: a^2 == b^2 D is impossible for squarefree D > 1
        return sa if self.a * self.a > self.b * self.b * self.D else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.a == other.a and self.b == other.b and (self.b == 0 or self.D == other.D)

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() < 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __bool__(self):
        return bool(self.a or self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.D)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        b = f"{abs(self.b)}*sqrt({self.D})"
        sign = "-" if self.b < 0 else "+"
        if self.a == 0:
            return b if sign == "+" else "-" + b
        return f"{self.a}{sign}{b}"

    def __repr__(self):
        return f"QuadVal({self})"


@dataclass(frozen=True)
class Matrix2:
    """2x2 integer matrix; ``m[i][j]`` counts letter j in the image of letter i."""

    rows: tuple[tuple[int, int], tuple[int, int]]

    def __getitem__(self, i):
        return self.rows[i]

    @property
    def trace(self) -> int:
        return self.rows[0][0] + self.rows[1][1]

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.rows
        return a * d - b * c

    def transpose(self) -> "Matrix2":
        (a, b), (c, d) = self.rows
        return Matrix2(((a, c), (b, d)))

    def __matmul__(self, other: "Matrix2") -> "Matrix2":
        (a, b), (c, d) = self.rows
        (e, f), (g, h) = other.rows
        return Matrix2(((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h)))

    def __pow__(self, k: int) -> "Matrix2":
        result, base = Matrix2(((1, 0), (0, 1))), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def apply(self, v: Sequence) -> tuple:
        """Matrix times column vector."""
        (a, b), (c, d) = self.rows
        return (a * v[0] + b * v[1], c * v[0] + d * v[1])

    def inverse(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        det = self.det
        if det == 0:
            raise ZeroDivisionError("singular matrix")
        (a, b), (c, d) = self.rows
        return ((Fraction(d, det), Fraction(-b, det)), (Fraction(-c, det), Fraction(a, det)))


def substitution_matrix(s: Substitution) -> Matrix2:
    require_binary(s)
    rows = incidence(Substitution(("0", "1"), (s["0"], s["1"])))
    return Matrix2((tuple(rows[0]), tuple(rows[1])))


def eigenvalues(m: Matrix2) -> tuple[QuadVal, QuadVal]:
    """Exact eigenvalues ``(lam, lam_o)`` with ``|lam| >= |lam_o|``."""
    tr, det = m.trace, m.det
    disc = tr * tr - 4 * det
    if disc < 0:
        raise ComplexSpectrumError(f"matrix {m.rows} has complex eigenvalues")
    root = QuadVal.sqrt(disc)
    hi, lo = (tr + root) / 2, (tr - root) / 2
    if abs(lo) > abs(hi):
        hi, lo = lo, hi
    return hi, lo


PISOT, SALEM, EXPANDING, DEGENERATE = "Pisot", "Salem", "Expanding", "Degenerate"


@dataclass(frozen=True)
class SpectralData:
    lambda_: QuadVal | None
    lambda_o: QuadVal | None
    kind: str


def classify(s: Substitution) -> SpectralData:
    """Pisot / Salem / Expanding according to the modulus of the second eigenvalue."""
    m = substitution_matrix(s)
    if not is_primitive(s):
        try:
            lam, lam_o = eigenvalues(m)
        except ComplexSpectrumError:
            lam = lam_o = None
        return SpectralData(lam, lam_o, DEGENERATE)
    lam, lam_o = eigenvalues(m)
    if not abs(lam_o) < lam:
        return SpectralData(lam, lam_o, DEGENERATE)
    c = (lam_o * lam_o - 1).sign()
    kind = {-1: PISOT, 0: SALEM, 1: EXPANDING}[c]
    return SpectralData(lam, lam_o, kind)


@dataclass(frozen=True)
class WeightVector:
    w0: QuadVal
    w1: QuadVal

    def __post_init__(self):
        if self.w0.sign() <= 0 or self.w1.sign() <= 0:
            raise ValueError("weights must be positive")

    def __iter__(self):
        return iter((self.w0, self.w1))

    def __str__(self):
        return f"({self.w0}, {self.w1})"

    @property
    def is_rational(self) -> bool:
        return self.w0.is_rational and self.w1.is_rational

    def integer_components(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Integer ``(rational part, sqrt part)`` coordinates of both weights after
        clearing a common positive denominator.

        Two weighted counts are equal exactly when their integer coordinates are.
        """
        parts = (self.w0.a, self.w0.b, self.w1.a, self.w1.b)
        den = math.lcm(*(p.denominator for p in parts))
        a0, b0, a1, b1 = (int(p * den) for p in parts)
        return (a0, b0), (a1, b1)

    def weight(self, counts: Sequence[int]) -> QuadVal:
        return self.w0 * counts[0] + self.w1 * counts[1]


def _rescale_rational(w0: Fraction, w1: Fraction) -> tuple[int, int]:
    den = math.lcm(w0.denominator, w1.denominator)
    i0, i1 = int(w0 * den), int(w1 * den)
    g = math.gcd(i0, i1)
    return i0 // g, i1 // g


def pf_weight_vector(s: Substitution) -> WeightVector:
    """Right PF eigenvector ``(|s(0)| - lam_o, |s(1)| - lam_o)``.

    Rational vectors are rescaled to coprime positive integers.
    """
    if not is_primitive(s):
        raise SubstitutionError("PF weight vector needs a primitive substitution")
    _, lam_o = eigenvalues(substitution_matrix(s))
    w0, w1 = len(s["0"]) - lam_o, len(s["1"]) - lam_o
    if w0.is_rational and w1.is_rational:
        i0, i1 = _rescale_rational(w0.a, w1.a)
        return WeightVector(QuadVal(i0), QuadVal(i1))
    return WeightVector(w0, w1)


def letter_frequencies(s: Substitution) -> tuple[QuadVal, QuadVal]:
    """Normalised left PF eigenvector of the substitution matrix."""
    if not is_primitive(s):
        raise SubstitutionError("letter frequencies need a primitive substitution")
    m = substitution_matrix(s)
    lam, _ = eigenvalues(m)
    x0, x1 = QuadVal(m[1][0]), lam - m[0][0]
    total = x0 + x1
    return x0 / total, x1 / total


def rational_left_eigenvector(matrix: Sequence[Sequence[int]], eigenvalue) -> list[Fraction]:
    """A left eigenvector ``x M = eigenvalue x`` with rational entries summing to 1.

    The eigenspace must be one-dimensional.
    """
    import sympy

    n = len(matrix)
    a = sympy.Matrix(matrix).T - sympy.Rational(eigenvalue) * sympy.eye(n)
    kernel = a.nullspace()
    if len(kernel) != 1:
        raise ValueError(f"eigenspace has dimension {len(kernel)}, expected 1")
    vec = [Fraction(int(x.p), int(x.q)) for x in (sympy.Rational(v) for v in kernel[0])]
    total = sum(vec)
    return [x / total for x in vec]
