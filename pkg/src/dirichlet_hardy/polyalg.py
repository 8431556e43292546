"""Sparse arithmetic for Dirichlet polynomials and torus trigonometric polynomials.

A Dirichlet polynomial is a finite sum ``D(s) = sum a_n n^{-s}`` stored as a
map from the integer index n to its coefficient.  Its lift replaces every
index by the exponent vector of its prime factorization, giving a sparse
trigonometric polynomial on the (finitely many active variables of the)
infinite torus; the two forms carry identical coefficient data.

Coefficients are either exact (QComplex, rational real/imaginary parts) or
double precision.  Exact polynomials additionally carry a global scale
factor sqrt(scale_sq) with scale_sq a positive rational, so objects like
``(z_1 + ... + z_n)/sqrt(n)`` and its powers stay exactly representable:
stored coefficients are integers (multinomials) and the irrational part
lives in the scale.  scale_sq is kept squarefree; rational square parts are
folded into the coefficients on construction.
"""

from __future__ import annotations

from fractions import Fraction
from operator import add
from typing import Iterable, Mapping

from .coefficients import QComplex, canonical_scale, format_rational, parse_rational
from .errors import EmptyPolynomialError, IndexOverflowError, TermCapExceeded
from .numtheory import build_spf_cache, factorize, first_primes, prime_index, primes_up_to, smooth_rough_split

DEFAULT_TERM_CAP = 10_000_000

# Largest Dirichlet index we reconstruct from exponent vectors; JSON consumers
# on 64-bit integer wire formats must be able to hold every index.
MAX_INDEX = 2**63 - 1

ONE_FRACTION = Fraction(1)


class MultiIndex:
    """Finitely supported exponent vector, stored as sorted (position, exponent) pairs.

    Positions are 1-based (position i belongs to the i-th prime); position 0
    is reserved for the auxiliary variable introduced by `homogenize`.
    Exponents are >= 1; the empty index is the zero vector.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[tuple[int, int]] | Mapping[int, int] = ()):
        if isinstance(entries, Mapping):
            items = entries.items()
        else:
            items = list(entries)
        seen = {}
        for pos, exp in items:
            if pos < 0:
                raise ValueError("positions must be >= 0")
            if exp < 0:
                raise ValueError("exponents must be >= 0")
            if exp == 0:
                continue
            if pos in seen:
                raise ValueError(f"duplicate position {pos}")
            seen[pos] = exp
        object.__setattr__(self, "entries", tuple(sorted(seen.items())))

    def __setattr__(self, name, value):
        raise AttributeError("MultiIndex is immutable")

    @property
    def degree(self) -> int:
        """Total degree |alpha|."""
        return sum(e for _, e in self.entries)

    def positions(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    def exponent(self, pos: int) -> int:
        for p, e in self.entries:
            if p == pos:
                return e
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def combine(self, other: "MultiIndex") -> "MultiIndex":
        """Entrywise sum of exponents (monomial product)."""
        merged = dict(self.entries)
        for p, e in other.entries:
            merged[p] = merged.get(p, 0) + e
        return MultiIndex(merged)

    def __eq__(self, other):
        return isinstance(other, MultiIndex) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __lt__(self, other):
        return self.entries < other.entries

    def __repr__(self):
        return f"MultiIndex({list(self.entries)!r})"


ZERO_INDEX = MultiIndex()


def _coerce_coeff(value, exact: bool):
    if exact:
        return QComplex.coerce(value)
    if isinstance(value, QComplex):
        return complex(value)
    return complex(value)


def _prepare_terms(terms, exact: bool, validate_key) -> dict:
    if terms is None:
        return {}
    items = terms.items() if isinstance(terms, Mapping) else terms
    out = {}
    for key, value in items:
        validate_key(key)
        coeff = _coerce_coeff(value, exact)
        if not coeff:
            continue
        if key in out:
            out[key] = out[key] + coeff
            if not out[key]:
                del out[key]
        else:
            out[key] = coeff
    return out


def _canonicalize_scale(terms: dict, exact: bool, scale_sq) -> Fraction:
    """Fold the rational-square part of the scale into the coefficients."""
    scale_sq = Fraction(scale_sq)
    if scale_sq <= 0:
        raise ValueError("scale_sq must be positive")
    if not exact:
        if scale_sq != 1:
            root = float(scale_sq) ** 0.5
            for key in terms:
                terms[key] = terms[key] * root
        return ONE_FRACTION
    if not terms:
        return ONE_FRACTION
    if scale_sq == 1:
        return ONE_FRACTION
    root, kernel = canonical_scale(scale_sq)
    if root != 1:
        for key in terms:
            terms[key] = terms[key] * root
    return kernel


class TrigPoly:
    """Sparse trigonometric polynomial ``sum c_alpha z^alpha`` on the torus."""

    __slots__ = ("terms", "exact", "scale_sq")

    def __init__(self, terms=None, *, exact: bool = True, scale_sq=1):
        def check(key):
            if not isinstance(key, MultiIndex):
                raise TypeError("TrigPoly keys must be MultiIndex")

        prepared = _prepare_terms(terms, exact, check)
        object.__setattr__(self, "terms", prepared)
        object.__setattr__(self, "exact", exact)
        object.__setattr__(self, "scale_sq", _canonicalize_scale(prepared, exact, scale_sq))

    def __setattr__(self, name, value):
        raise AttributeError("TrigPoly is immutable")

    @classmethod
    def zero(cls, exact: bool = True) -> "TrigPoly":
        return cls({}, exact=exact)

    @classmethod
    def one(cls, exact: bool = True) -> "TrigPoly":
        return cls({ZERO_INDEX: 1}, exact=exact)

    @classmethod
    def monomial(cls, index: MultiIndex, coeff=1, *, exact: bool = True) -> "TrigPoly":
        return cls({index: coeff}, exact=exact)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, index: MultiIndex):
        """Stored coefficient of z^index (excludes the global scale)."""
        return self.terms.get(index, QComplex(0) if self.exact else 0j)

    def coefficient_value(self, index: MultiIndex) -> complex:
        """Numeric coefficient of z^index including the global scale."""
        c = self.terms.get(index)
        if c is None:
            return 0j
        return complex(c) * float(self.scale_sq) ** 0.5

    def variables(self) -> tuple[int, ...]:
        """Sorted positions that occur with nonzero exponent."""
        pos = set()
        for mi in self.terms:
            pos.update(mi.positions())
        return tuple(sorted(pos))

    def to_float(self) -> "TrigPoly":
        if not self.exact:
            return self
        root = float(self.scale_sq) ** 0.5
        return TrigPoly({mi: complex(c) * root for mi, c in self.terms.items()}, exact=False)

    def sorted_terms(self) -> list[tuple[MultiIndex, object]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].entries)

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        if self.exact != other.exact:
            return NotImplemented
        return self.scale_sq == other.scale_sq and self.terms == other.terms

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return _poly_add(self, other, TrigPoly)

    def __sub__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self + other.scaled(-1)

    def scaled(self, factor) -> "TrigPoly":
        """Multiply every coefficient by a scalar."""
        if self.exact and not isinstance(factor, (complex, float)):
            f = QComplex.coerce(factor)
            return TrigPoly({mi: c * f for mi, c in self.terms.items()}, exact=True, scale_sq=self.scale_sq)
        f = complex(factor)
        return TrigPoly({mi: complex(c) * f for mi, c in self.to_float().terms.items()}, exact=False)

    def __mul__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return poly_mul(self, other)

    def __pow__(self, k: int):
        return poly_pow(self, k)

    def __repr__(self):
        mode = "exact" if self.exact else "float"
        return f"<TrigPoly {len(self.terms)} terms, {mode}, scale_sq={self.scale_sq}>"


class DirichletPoly:
    """Sparse Dirichlet polynomial ``sum a_n n^{-s}`` keyed by the index n."""

    __slots__ = ("terms", "exact", "scale_sq")

    def __init__(self, terms=None, *, exact: bool = True, scale_sq=1):
        def check(key):
            if not isinstance(key, int) or isinstance(key, bool) or key < 1:
                raise ValueError("Dirichlet indices must be integers >= 1")

        prepared = _prepare_terms(terms, exact, check)
        object.__setattr__(self, "terms", prepared)
        object.__setattr__(self, "exact", exact)
        object.__setattr__(self, "scale_sq", _canonicalize_scale(prepared, exact, scale_sq))

    def __setattr__(self, name, value):
        raise AttributeError("DirichletPoly is immutable")

    @classmethod
    def zero(cls, exact: bool = True) -> "DirichletPoly":
        return cls({}, exact=exact)

    @classmethod
    def one(cls, exact: bool = True) -> "DirichletPoly":
        return cls({1: 1}, exact=exact)

    @classmethod
    def monomial(cls, n: int, coeff=1, *, exact: bool = True) -> "DirichletPoly":
        return cls({n: coeff}, exact=exact)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def max_index(self) -> int:
        """Largest index with a nonzero coefficient (the support bound)."""
        if not self.terms:
            raise EmptyPolynomialError("zero polynomial has no support")
        return max(self.terms)

    def coefficient(self, n: int):
        return self.terms.get(n, QComplex(0) if self.exact else 0j)

    def coefficient_value(self, n: int) -> complex:
        c = self.terms.get(n)
        if c is None:
            return 0j
        return complex(c) * float(self.scale_sq) ** 0.5

    def to_float(self) -> "DirichletPoly":
        if not self.exact:
            return self
        root = float(self.scale_sq) ** 0.5
        return DirichletPoly({n: complex(c) * root for n, c in self.terms.items()}, exact=False)

    def sorted_terms(self) -> list[tuple[int, object]]:
        return sorted(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, DirichletPoly):
            return NotImplemented
        if self.exact != other.exact:
            return NotImplemented
        return self.scale_sq == other.scale_sq and self.terms == other.terms

    def __add__(self, other):
        if not isinstance(other, DirichletPoly):
            return NotImplemented
        return _poly_add(self, other, DirichletPoly)

    def __sub__(self, other):
        if not isinstance(other, DirichletPoly):
            return NotImplemented
        return self + other.scaled(-1)

    def scaled(self, factor) -> "DirichletPoly":
        if self.exact and not isinstance(factor, (complex, float)):
            f = QComplex.coerce(factor)
            return DirichletPoly({n: c * f for n, c in self.terms.items()}, exact=True, scale_sq=self.scale_sq)
        f = complex(factor)
        return DirichletPoly({n: complex(c) * f for n, c in self.to_float().terms.items()}, exact=False)

    def __mul__(self, other):
        if not isinstance(other, DirichletPoly):
            return NotImplemented
        return dirichlet_mul(self, other)

    def __repr__(self):
        mode = "exact" if self.exact else "float"
        return f"<DirichletPoly {len(self.terms)} terms, {mode}, scale_sq={self.scale_sq}>"


def _poly_add(a, b, cls):
    if a.exact != b.exact:
        a, b = a.to_float(), b.to_float()
    if not a.terms:
        return b
    if not b.terms:
        return a
    if a.scale_sq != b.scale_sq:
        # commensurable scales were already folded; different kernels cannot
        # be combined exactly
        raise ValueError("cannot add exact polynomials with incommensurable scales")
    merged = dict(a.terms)
    for key, c in b.terms.items():
        cur = merged.get(key)
        new = c if cur is None else cur + c
        if new:
            merged[key] = new
        elif cur is not None:
            del merged[key]
    return cls(merged, exact=a.exact, scale_sq=a.scale_sq)


# ---------------------------------------------------------------------------
# convolution core
# ---------------------------------------------------------------------------


def _dense_items(poly: TrigPoly, posidx: dict[int, int], nvars: int):
    items = []
    for mi, c in poly.terms.items():
        vec = [0] * nvars
        for p, e in mi.entries:
            vec[posidx[p]] = e
        items.append((tuple(vec), c))
    return items


def _coeff_kind(polys) -> str:
    """Pick the cheapest arithmetic domain holding all coefficients."""
    kind = "int"
    for poly in polys:
        if not poly.exact:
            return "complex"
        for c in poly.terms.values():
            if c.im:
                return "qcomplex"
            if kind == "int" and c.re.denominator != 1:
                kind = "fraction"
    return kind


def _unwrap(items, kind):
    if kind == "int":
        return [(v, c.re.numerator) for v, c in items]
    if kind == "fraction":
        return [(v, c.re) for v, c in items]
    return items


def _convolve_trig(a: TrigPoly, b: TrigPoly, term_cap: int) -> TrigPoly:
    exact = a.exact and b.exact
    if not exact:
        a, b = a.to_float(), b.to_float()
    positions = sorted({p for poly in (a, b) for mi in poly.terms for p in mi.positions()})
    posidx = {p: i for i, p in enumerate(positions)}
    nvars = len(positions)
    kind = _coeff_kind((a, b)) if exact else "complex"
    items_a = _unwrap(_dense_items(a, posidx, nvars), kind)
    items_b = _unwrap(_dense_items(b, posidx, nvars), kind)
    if len(items_a) > len(items_b):
        items_a, items_b = items_b, items_a

    acc: dict[tuple[int, ...], object] = {}
    get = acc.get
    for vec_a, ca in items_a:
        for vec_b, cb in items_b:
            key = tuple(map(add, vec_a, vec_b))
            cur = get(key)
            acc[key] = ca * cb if cur is None else cur + ca * cb
        if len(acc) > term_cap:
            raise TermCapExceeded(
                f"product exceeds the term cap ({len(acc)} > {term_cap})", cap=term_cap
            )

    terms = {}
    for vec, c in acc.items():
        if not c:
            continue
        mi = MultiIndex((positions[i], e) for i, e in enumerate(vec) if e)
        if kind in ("int", "fraction"):
            terms[mi] = QComplex(Fraction(c))
        else:
            terms[mi] = c
    scale_sq = a.scale_sq * b.scale_sq if exact else 1
    return TrigPoly(terms, exact=exact, scale_sq=scale_sq)


def poly_mul(a: TrigPoly, b: TrigPoly, term_cap: int | None = None) -> TrigPoly:
    """Exact sparse product of two trigonometric polynomials."""
    cap = DEFAULT_TERM_CAP if term_cap is None else term_cap
    if not a.terms or not b.terms:
        return TrigPoly.zero(exact=a.exact and b.exact)
    return _convolve_trig(a, b, cap)


def _homogeneous_degree(poly: TrigPoly) -> int | None:
    degrees = {mi.degree for mi in poly.terms}
    if len(degrees) == 1:
        return degrees.pop()
    return None


def poly_pow(base: TrigPoly, k: int, term_cap: int | None = None) -> TrigPoly:
    """k-th power by binary exponentiation with sparse products."""
    if k < 0:
        raise ValueError("poly_pow expects k >= 0")
    cap = DEFAULT_TERM_CAP if term_cap is None else term_cap
    if k == 0:
        return TrigPoly.one(exact=base.exact)
    if not base.terms:
        return TrigPoly.zero(exact=base.exact)
    m = _homogeneous_degree(base)
    if m is not None and m > 0:
        # every monomial of the result has degree k*m over the base's variables
        import math

        nvars = len(base.variables())
        bound = math.comb(k * m + nvars - 1, k * m)
        if bound > cap and len(base.terms) ** k > cap:
            raise TermCapExceeded(
                f"power would reach up to {bound} terms (cap {cap})", cap=cap
            )
    result = None
    square = base
    e = k
    while e:
        if e & 1:
            result = square if result is None else poly_mul(result, square, cap)
        e >>= 1
        if e:
            square = poly_mul(square, square, cap)
    return result


def dirichlet_mul(a: DirichletPoly, b: DirichletPoly, term_cap: int | None = None) -> DirichletPoly:
    """Dirichlet convolution: the coefficient of n is sum over jk = n of a_j b_k."""
    cap = DEFAULT_TERM_CAP if term_cap is None else term_cap
    exact = a.exact and b.exact
    if not exact:
        a, b = a.to_float(), b.to_float()
    acc: dict[int, object] = {}
    get = acc.get
    for n1, c1 in a.terms.items():
        for n2, c2 in b.terms.items():
            key = n1 * n2
            cur = get(key)
            acc[key] = c1 * c2 if cur is None else cur + c1 * c2
        if len(acc) > cap:
            raise TermCapExceeded(f"product exceeds the term cap ({len(acc)} > {cap})", cap=cap)
    scale_sq = a.scale_sq * b.scale_sq if exact else 1
    return DirichletPoly(acc, exact=exact, scale_sq=scale_sq)


# ---------------------------------------------------------------------------
# Bohr lift
# ---------------------------------------------------------------------------


def bohr_lift(D: DirichletPoly) -> TrigPoly:
    """Map ``a_n n^{-s}`` to ``a_n z^alpha`` where n has exponent vector alpha.

    The coefficient data is untouched; only the keys are re-expressed, so the
    lift is a bijection on terms.
    """
    if not D.terms:
        return TrigPoly.zero(exact=D.exact)
    max_n = max(D.terms)
    if len(D.terms) > 64 and max_n <= 4_000_000:
        build_spf_cache(max_n)
    factored = {n: factorize(n).factors for n in D.terms}
    max_prime = max((f[-1][0] for f in factored.values() if f), default=2)
    primes = primes_up_to(max_prime)
    terms = {}
    for n, c in D.terms.items():
        alpha = MultiIndex((prime_index(p, primes), a) for p, a in factored[n])
        terms[alpha] = c
    return TrigPoly(terms, exact=D.exact, scale_sq=D.scale_sq)


def bohr_unlift(P: TrigPoly) -> DirichletPoly:
    """Inverse of `bohr_lift`: z^alpha becomes (prod p_i^{alpha_i})^{-s}."""
    if not P.terms:
        return DirichletPoly.zero(exact=P.exact)
    max_pos = 0
    for mi in P.terms:
        if mi.entries and mi.entries[0][0] == 0:
            raise ValueError("polynomial uses the reserved position 0 and cannot be unlifted")
        if mi.entries:
            max_pos = max(max_pos, mi.entries[-1][0])
    primes = first_primes(max_pos)
    terms = {}
    for mi, c in P.terms.items():
        n = 1
        for pos, e in mi.entries:
            n *= primes[pos - 1] ** e
            if n > MAX_INDEX:
                raise IndexOverflowError(f"index exceeds {MAX_INDEX}")
        terms[n] = c
    return DirichletPoly(terms, exact=P.exact, scale_sq=P.scale_sq)


# ---------------------------------------------------------------------------
# structure operations
# ---------------------------------------------------------------------------


def degree(P: TrigPoly) -> int:
    """Largest total degree among the stored monomials."""
    if not P.terms:
        raise EmptyPolynomialError("the zero polynomial has no degree")
    return max(mi.degree for mi in P.terms)


def is_homogeneous(P: TrigPoly, m: int) -> bool:
    """True when every stored monomial has total degree m (vacuously for 0)."""
    return all(mi.degree == m for mi in P.terms)


def homogenize(P: TrigPoly) -> TrigPoly:
    """Pad every monomial with the reserved variable so all degrees equal deg(P).

    The result is deg(P)-homogeneous on one extra variable at position 0 and
    has the same L_p norms as the input (rotation invariance of the torus
    measure); `bohr_unlift` refuses the result since position 0 matches no
    prime.
    """
    m = degree(P)
    terms = {}
    for mi, c in P.terms.items():
        pad = m - mi.degree
        if pad:
            terms[MultiIndex(((0, pad),) + mi.entries)] = c
        else:
            terms[mi] = c
    return TrigPoly(terms, exact=P.exact, scale_sq=P.scale_sq)


def decompose_smooth(D: DirichletPoly, y: float) -> dict[int, DirichletPoly]:
    """Group terms by the y-smooth part of their index.

    Every index factors uniquely as j*k with j having all prime factors <= y
    and k all prime factors > y.  Returns {j: D_j} with
    ``D = sum_j D_j * j^{-s}`` exactly; each D_j is supported on y-rough
    integers.
    """
    if y < 2:
        raise ValueError("decompose_smooth expects y >= 2")
    blocks: dict[int, dict[int, object]] = {}
    for n, c in D.terms.items():
        j, k = smooth_rough_split(n, y)
        blocks.setdefault(j, {})[k] = c
    return {
        j: DirichletPoly(block, exact=D.exact, scale_sq=D.scale_sq)
        for j, block in sorted(blocks.items())
    }


def build_qn(n: int, *, exact: bool = True) -> TrigPoly:
    """The normalized linear form (z_1 + ... + z_n)/sqrt(n)."""
    if n < 1:
        raise ValueError("build_qn expects n >= 1")
    if exact:
        return TrigPoly(
            {MultiIndex(((i, 1),)): 1 for i in range(1, n + 1)},
            exact=True,
            scale_sq=Fraction(1, n),
        )
    c = 1 / n**0.5
    return TrigPoly({MultiIndex(((i, 1),)): c for i in range(1, n + 1)}, exact=False)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _coeff_to_json(c, exact: bool):
    if exact:
        return format_rational(c.re), format_rational(c.im)
    return c.real, c.imag


def dirichlet_to_dict(D: DirichletPoly) -> dict:
    """JSON-ready form {"terms": [{"n": ..., "re": ..., "im": ...}, ...]}.

    Exact coefficients serialize as "p/q" strings; a non-unit global scale is
    recorded under "scale_sq".
    """
    rows = []
    for n, c in D.sorted_terms():
        re, im = _coeff_to_json(c, D.exact)
        rows.append({"n": n, "re": re, "im": im})
    out = {"terms": rows}
    if D.exact and D.scale_sq != 1:
        out["scale_sq"] = format_rational(D.scale_sq)
    return out


def trig_to_dict(P: TrigPoly) -> dict:
    rows = []
    for mi, c in P.sorted_terms():
        re, im = _coeff_to_json(c, P.exact)
        rows.append({"alpha": [[p, e] for p, e in mi.entries], "re": re, "im": im})
    out = {"terms": rows}
    if P.exact and P.scale_sq != 1:
        out["scale_sq"] = format_rational(P.scale_sq)
    return out


def _coeffs_from_rows(rows):
    """Decide the mode from the re/im payloads and parse them."""
    exact = None
    parsed = []
    for row in rows:
        re, im = row["re"], row["im"]
        row_exact = isinstance(re, str) or isinstance(im, str)
        if exact is None:
            exact = row_exact
        elif exact != row_exact:
            raise ValueError("mixed exact and float coefficients in one polynomial")
        if row_exact:
            parsed.append(QComplex(parse_rational(str(re)), parse_rational(str(im))))
        else:
            parsed.append(complex(float(re), float(im)))
    return (True if exact is None else exact), parsed


def dirichlet_from_dict(data: Mapping) -> DirichletPoly:
    rows = data["terms"]
    exact, coeffs = _coeffs_from_rows(rows)
    scale_sq = parse_rational(data["scale_sq"]) if "scale_sq" in data else 1
    terms = []
    for row, c in zip(rows, coeffs):
        n = row["n"]
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"bad Dirichlet index {n!r}")
        terms.append((n, c))
    return DirichletPoly(terms, exact=exact, scale_sq=scale_sq)


def trig_from_dict(data: Mapping) -> TrigPoly:
    rows = data["terms"]
    exact, coeffs = _coeffs_from_rows(rows)
    scale_sq = parse_rational(data["scale_sq"]) if "scale_sq" in data else 1
    terms = []
    for row, c in zip(rows, coeffs):
        alpha = MultiIndex((int(p), int(e)) for p, e in row["alpha"])
        terms.append((alpha, c))
    return TrigPoly(terms, exact=exact, scale_sq=scale_sq)
