"""Complex numbers with exact rational real and imaginary parts.

Polynomial coefficients come in two modes: exact (``QComplex``, a pair of
``fractions.Fraction``) and floating point (builtin ``complex``).  Both
support ``+``, ``*``, unary ``-`` and truthiness, so the sparse-arithmetic
code can treat them uniformly.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from numbers import Rational


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into a Fraction."""
    return Fraction(text)


def format_rational(value: Fraction) -> str:
    """Render a Fraction as "p/q", or "p" when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class QComplex:
    """A complex number with Fraction real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @classmethod
    def coerce(cls, value) -> "QComplex":
        """Build a QComplex from QComplex, rational, float or complex input.

        Floats convert via their exact binary value, so the result is a
        faithful (and reproducible) rational representation.
        """
        if isinstance(value, QComplex):
            return value
        if isinstance(value, (Rational, float)):
            return cls(Fraction(value))
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        raise TypeError(f"cannot coerce {type(value).__name__} to QComplex")

    def __add__(self, other):
        if isinstance(other, QComplex):
            return QComplex(self.re + other.re, self.im + other.im)
        if isinstance(other, Rational):
            return QComplex(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return QComplex(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, QComplex):
            return QComplex(self.re - other.re, self.im - other.im)
        if isinstance(other, Rational):
            return QComplex(self.re - other, self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, QComplex):
            return QComplex(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, Rational):
            return QComplex(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, QComplex):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self) -> "QComplex":
        return QComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|z|^2 as an exact Fraction."""
        return self.re * self.re + self.im * self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QComplex({self.re!r}, {self.im!r})"


QC_ZERO = QComplex(0)
QC_ONE = QComplex(1)


def square_split(n: int) -> tuple[int, int]:
    """Decompose ``n = root**2 * kernel`` with ``kernel`` squarefree.

    Uses a perfect-square fast path; otherwise factors n by trial division,
    so n must have a small smallest prime factor (true for the scale
    denominators n**k produced by this package).
    """
    if n <= 0:
        raise ValueError("square_split expects a positive integer")
    r = isqrt(n)
    if r * r == n:
        return r, 1
    root = 1
    kernel = 1
    remaining = n
    p = 2
    while p * p <= remaining:
        if remaining % p == 0:
            exp = 0
            while remaining % p == 0:
                remaining //= p
                exp += 1
            root *= p ** (exp // 2)
            if exp % 2:
                kernel *= p
        p += 1 if p == 2 else 2
    kernel *= remaining
    return root, kernel


def canonical_scale(scale_sq: Fraction) -> tuple[Fraction, Fraction]:
    """Split a positive rational into (square_root_part, squarefree_kernel).

    ``scale_sq == square_root_part**2 * squarefree_kernel`` where the kernel
    is a ratio of coprime squarefree integers.  The root part can be folded
    into coefficients; equal kernels mean commensurable scales.
    """
    if scale_sq <= 0:
        raise ValueError("scale_sq must be positive")
    num_root, num_kernel = square_split(scale_sq.numerator)
    den_root, den_kernel = square_split(scale_sq.denominator)
    return Fraction(num_root, den_root), Fraction(num_kernel, den_kernel)
