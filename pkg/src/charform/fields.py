"""Exact arithmetic for GF(2^k) and for rational function fields GF(2^k)(t).

Elements of GF(2^k) are packed as k-bit integers whose bits are the
coefficients of the residue polynomial over GF(2); arithmetic is done modulo
an irreducible degree-k polynomial (default: the lexicographically least
irreducible, for reproducibility).  Polynomials over GF(2^k) are packed as
integers with k bits per coefficient, ascending degree, so that addition is a
single xor.  Rational function field elements are reduced fractions of packed
polynomials with a monic denominator.

All values are immutable; field objects are interned so that equality of
fields is identity.
"""

from __future__ import annotations

import functools
from typing import Iterator, Optional, Union

from .decision import UNKNOWN, Unknown
from .errors import FieldMismatch, ParseError, UnsupportedField

# ---------------------------------------------------------------------------
# polynomials over GF(2), packed as plain ints (one bit per coefficient)
# ---------------------------------------------------------------------------


def _gf2_deg(p: int) -> int:
    return p.bit_length() - 1


def _gf2_mul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _gf2_mod(p: int, m: int) -> int:
    dm = _gf2_deg(m)
    while p.bit_length() - 1 >= dm and p:
        p ^= m << (p.bit_length() - 1 - dm)
    return p


def _gf2_irreducible(m: int) -> bool:
    """Trial division by every polynomial of degree 1..deg(m)//2."""
    k = _gf2_deg(m)
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if _gf2_mod(m, q) == 0:
                return False
    return True


@functools.lru_cache(maxsize=None)
def default_modulus(k: int) -> int:
    """Lexicographically least irreducible polynomial of degree k over GF(2)."""
    if k == 1:
        return 0b10  # X; residues are the constants
    for m in range(1 << k, 1 << (k + 1)):
        if _gf2_irreducible(m):
            return m
    raise ValueError(f"no irreducible polynomial of degree {k}")


# ---------------------------------------------------------------------------
# field elements
# ---------------------------------------------------------------------------


class FieldElement:
    """Immutable element of a GF2k or RatFunc field.

    Supports +, -, *, /, ** and unary minus (the identity, characteristic 2).
    Mixing elements of different fields raises FieldMismatch.
    """

    __slots__ = ("field", "raw")

    def __init__(self, field, raw):
        self.field = field
        self.raw = raw

    def _same(self, other) -> "FieldElement":
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {other!r}")
        if other.field is not self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._same(other)
        return self.field._el(self.field.radd(self.raw, other.raw))

    __sub__ = __add__  # characteristic 2

    def __mul__(self, other):
        other = self._same(other)
        return self.field._el(self.field.rmul(self.raw, other.raw))

    def __truediv__(self, other):
        other = self._same(other)
        return self.field._el(self.field.rmul(self.raw, self.field.rinv(other.raw)))

    def __pow__(self, n: int):
        if n < 0:
            return (self.field.one / self) ** (-n)
        r, b = self.field.one.raw, self.raw
        while n:
            if n & 1:
                r = self.field.rmul(r, b)
            b = self.field.rmul(b, b)
            n >>= 1
        return self.field._el(r)

    def __neg__(self):
        return self

    def __bool__(self):
        return self.raw != self.field.rzero

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and other.field is self.field
            and other.raw == self.raw
        )

    def __hash__(self):
        return hash((id(self.field), self.raw))

    def __repr__(self):
        return f"<{self.field.describe(self.raw)}>"

    def inv(self) -> "FieldElement":
        return self.field._el(self.field.rinv(self.raw))

    def sqrt(self) -> Optional["FieldElement"]:
        r = self.field.rsqrt(self.raw)
        return None if r is None else self.field._el(r)

    def is_square(self) -> bool:
        return self.field.rsqrt(self.raw) is not None


Fe = FieldElement


class GF2k:
    """The finite field GF(2^k) with elements packed as k-bit ints.

    Multiplication and inversion go through log/exp tables built once at
    construction (k <= 16 keeps them small).
    """

    kind = "gf2k"

    def __init__(self, k: int, modulus: Optional[int] = None):
        if not 1 <= k <= 16:
            raise ValueError("supported degrees are 1 <= k <= 16")
        if modulus is None:
            modulus = default_modulus(k)
        if _gf2_deg(modulus) != k or not _gf2_irreducible(modulus):
            raise ValueError(f"modulus {modulus:#x} is not irreducible of degree {k}")
        self.k = k
        self.modulus = modulus
        self.order = 1 << k
        self.rzero = 0
        self.rone = 1
        self._cache: dict = {}
        self._build_tables()
        self.zero = self._el(0)
        self.one = self._el(1)
        self._artin_table: Optional[dict] = None

    def _build_tables(self):
        # use X as generator candidate; fall back to scanning if not primitive
        self._exp = [0] * (2 * self.order)
        self._log = [0] * self.order
        for g in range(2, self.order):
            val, seen = 1, set()
            for i in range(self.order - 1):
                self._exp[i] = val
                self._log[val] = i
                seen.add(val)
                val = self._mul_raw(val, g)
            if len(seen) == self.order - 1:
                break
        else:
            if self.order > 2:
                raise ValueError("no primitive element found")
        for i in range(self.order - 1, 2 * self.order):
            self._exp[i] = self._exp[i - (self.order - 1)]

    def _mul_raw(self, a: int, b: int) -> int:
        p = 0
        top = 1 << self.k
        while b:
            if b & 1:
                p ^= a
            a <<= 1
            if a & top:
                a ^= self.modulus
            b >>= 1
        return p

    # raw payload operations -------------------------------------------------

    def radd(self, a: int, b: int) -> int:
        return a ^ b

    def rmul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return 1
        return self._exp[self._log[a] + self._log[b]]

    def rinv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero field element")
        if self.k == 1:
            return 1
        return self._exp[(self.order - 1) - self._log[a]]

    def rsqrt(self, a: int) -> int:
        # every element of a finite field of characteristic 2 is a square
        if a == 0 or self.k == 1:
            return a
        return self._exp[(self._log[a] << (self.k - 1)) % (self.order - 1)]

    def rtrace(self, a: int) -> int:
        t, x = 0, a
        for _ in range(self.k):
            t ^= x
            x = self._mul_raw(x, x)
        assert t in (0, 1)
        return t

    def rartin(self, a: int) -> Optional[int]:
        """Raw solution of x^2 + x = a, or None."""
        if self._artin_table is None:
            table: dict = {}
            for x in range(self.order):
                img = self._mul_raw(x, x) ^ x
                table.setdefault(img, x)
            self._artin_table = table
        return self._artin_table.get(a)

    # element-level API -------------------------------------------------------

    def _el(self, raw: int) -> Fe:
        e = self._cache.get(raw)
        if e is None:
            e = Fe(self, raw)
            self._cache[raw] = e
        return e

    def el(self, value: int) -> Fe:
        if not 0 <= value < self.order:
            raise ValueError(f"{value} out of range for GF(2^{self.k})")
        return self._el(value)

    @property
    def gen(self) -> Fe:
        """The class of X (a generator of the extension for k >= 2)."""
        return self._el(2 if self.k >= 2 else 1)

    def elements(self) -> Iterator[Fe]:
        return (self._el(i) for i in range(self.order))

    def rand(self, rng) -> Fe:
        return self._el(rng.randrange(self.order))

    def rand_nonzero(self, rng) -> Fe:
        return self._el(rng.randrange(1, self.order))

    def describe(self, raw: int) -> str:
        return f"{raw:#x}@gf2k:{self.k}"

    def text(self) -> str:
        if self.k == 1:
            return "gf2"
        return f"gf2k:{self.k}:{self.modulus:#x}"

    def __repr__(self):
        return f"GF2k({self.k}, {self.modulus:#x})"


# ---------------------------------------------------------------------------
# packed polynomials over a GF2k base (k bits per coefficient, ascending)
# ---------------------------------------------------------------------------


def pdeg(p: int, k: int) -> int:
    """Degree of a packed polynomial (-1 for the zero polynomial)."""
    if p == 0:
        return -1
    return (p.bit_length() - 1) // k


def pcoef(p: int, i: int, k: int) -> int:
    return (p >> (i * k)) & ((1 << k) - 1)


def pmake(coeffs, base: GF2k) -> int:
    p = 0
    for i, c in enumerate(coeffs):
        p |= (c & (base.order - 1)) << (i * base.k)
    return p


def pcoeffs(p: int, base: GF2k) -> list:
    return [pcoef(p, i, base.k) for i in range(pdeg(p, base.k) + 1)]


def pscale(p: int, c: int, base: GF2k) -> int:
    if c == 0 or p == 0:
        return 0
    if c == 1:
        return p
    r = 0
    for i in range(pdeg(p, base.k) + 1):
        r |= base.rmul(pcoef(p, i, base.k), c) << (i * base.k)
    return r


def pmul(a: int, b: int, base: GF2k) -> int:
    if a == 0 or b == 0:
        return 0
    if base.k == 1:
        r = 0
        while b:
            low = b & -b
            r ^= a * low
            b ^= low
        return r
    r = 0
    for i in range(pdeg(a, base.k) + 1):
        c = pcoef(a, i, base.k)
        if c:
            r ^= pscale(b, c, base) << (i * base.k)
    return r


def pdivmod(a: int, b: int, base: GF2k):
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    k = base.k
    db = pdeg(b, k)
    lead_inv = base.rinv(pcoef(b, db, k))
    q = 0
    da = pdeg(a, k)
    while a and da >= db:
        c = base.rmul(pcoef(a, da, k), lead_inv)
        q |= c << ((da - db) * k)
        a ^= pscale(b, c, base) << ((da - db) * k)
        da = pdeg(a, k)
    return q, a


def pgcd(a: int, b: int, base: GF2k) -> int:
    while b:
        a, b = b, pdivmod(a, b, base)[1]
    if a:
        lead = pcoef(a, pdeg(a, base.k), base.k)
        if lead != 1:
            a = pscale(a, base.rinv(lead), base)
    return a


def pmonic(p: int, base: GF2k):
    """Monic multiple of p together with the leading coefficient removed."""
    lead = pcoef(p, pdeg(p, base.k), base.k)
    if lead == 1:
        return p, 1
    return pscale(p, base.rinv(lead), base), lead


def psqrt(p: int, base: GF2k) -> Optional[int]:
    """Square root of a packed polynomial, or None if it is not a square."""
    if p == 0:
        return 0
    k = base.k
    r = 0
    for i in range(pdeg(p, k) + 1):
        c = pcoef(p, i, k)
        if i % 2:
            if c:
                return None
        elif c:
            r |= base.rsqrt(c) << ((i // 2) * k)
    return r


def ptext(p: int, base: GF2k, var: str) -> str:
    if p == 0:
        return "0"
    parts = []
    for i in range(pdeg(p, base.k), -1, -1):
        c = pcoef(p, i, base.k)
        if not c:
            continue
        if i == 0:
            parts.append(f"{c:#x}")
        else:
            head = "" if c == 1 else f"{c:#x}*"
            parts.append(f"{head}{var}" + (f"^{i}" if i > 1 else ""))
    return " + ".join(parts)


class RatFunc:
    """The rational function field GF(2^k)(t).

    Raw payloads are (num, den) pairs of packed polynomials, kept fully
    reduced with a monic denominator after every operation.
    """

    kind = "ratfunc"

    def __init__(self, base: GF2k, var: str = "t"):
        if not isinstance(base, GF2k):
            raise UnsupportedField("function field base must be a GF2k field")
        self.base = base
        self.var = var
        self.rzero = (0, 1)
        self.rone = (1, 1)
        self.zero = Fe(self, (0, 1))
        self.one = Fe(self, (1, 1))

    def _norm(self, num: int, den: int):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if num == 0:
            return (0, 1)
        g = pgcd(num, den, self.base)
        if pdeg(g, self.base.k) > 0:
            num = pdivmod(num, g, self.base)[0]
            den = pdivmod(den, g, self.base)[0]
        lead = pcoef(den, pdeg(den, self.base.k), self.base.k)
        if lead != 1:
            li = self.base.rinv(lead)
            num = pscale(num, li, self.base)
            den = pscale(den, li, self.base)
        return (num, den)

    # raw payload operations -------------------------------------------------

    def radd(self, a, b):
        na, da = a
        nb, db = b
        if da == db:
            return self._norm(na ^ nb, da)
        return self._norm(
            pmul(na, db, self.base) ^ pmul(nb, da, self.base),
            pmul(da, db, self.base),
        )

    def rmul(self, a, b):
        na, da = a
        nb, db = b
        if na == 0 or nb == 0:
            return (0, 1)
        g1 = pgcd(na, db, self.base)
        if pdeg(g1, self.base.k) > 0:
            na = pdivmod(na, g1, self.base)[0]
            db = pdivmod(db, g1, self.base)[0]
        g2 = pgcd(nb, da, self.base)
        if pdeg(g2, self.base.k) > 0:
            nb = pdivmod(nb, g2, self.base)[0]
            da = pdivmod(da, g2, self.base)[0]
        return self._norm(pmul(na, nb, self.base), pmul(da, db, self.base))

    def rinv(self, a):
        num, den = a
        if num == 0:
            raise ZeroDivisionError("division by zero field element")
        return self._norm(den, num)

    def rsqrt(self, a):
        num, den = a
        ns = psqrt(num, self.base)
        if ns is None:
            return None
        ds = psqrt(den, self.base)
        if ds is None:
            return None
        return self._norm(ns, ds)

    # element-level API -------------------------------------------------------

    def _el(self, raw) -> Fe:
        return Fe(self, raw)

    def el(self, num, den=None) -> Fe:
        """Element from packed ints or coefficient lists (ascending degree)."""
        if isinstance(num, (list, tuple)):
            num = pmake(num, self.base)
        if den is None:
            den = 1
        elif isinstance(den, (list, tuple)):
            den = pmake(den, self.base)
        return Fe(self, self._norm(num, den))

    def const(self, c: Union[int, Fe]) -> Fe:
        if isinstance(c, Fe):
            if c.field is not self.base:
                raise FieldMismatch("constant from a different base field")
            c = c.raw
        return Fe(self, self._norm(c, 1))

    @property
    def t(self) -> Fe:
        return Fe(self, (1 << self.base.k, 1))

    def rand(self, rng, max_deg: int = 2) -> Fe:
        num = pmake([rng.randrange(self.base.order) for _ in range(max_deg + 1)], self.base)
        return Fe(self, self._norm(num, 1))

    def rand_nonzero(self, rng, max_deg: int = 2) -> Fe:
        while True:
            e = self.rand(rng, max_deg)
            if e:
                return e

    def describe(self, raw) -> str:
        num, den = raw
        s = ptext(num, self.base, self.var)
        if den != 1:
            s = f"({s})/({ptext(den, self.base, self.var)})"
        return s

    def text(self) -> str:
        return f"ratfunc:{self.base.text()}:{self.var}"

    def __repr__(self):
        return f"RatFunc({self.base!r}, {self.var!r})"


Field = Union[GF2k, RatFunc]

# interning so that field equality is identity ------------------------------

_FIELDS: dict = {}


def gf2k(k: int, modulus: Optional[int] = None) -> GF2k:
    if modulus is None:
        modulus = default_modulus(k)
    key = ("gf2k", k, modulus)
    f = _FIELDS.get(key)
    if f is None:
        f = GF2k(k, modulus)
        _FIELDS[key] = f
    return f


GF2 = gf2k(1)


def ratfunc(base: GF2k, var: str = "t") -> RatFunc:
    key = ("ratfunc", id(base), var)
    f = _FIELDS.get(key)
    if f is None:
        f = RatFunc(base, var)
        _FIELDS[key] = f
    return f


def parse_field(text: str) -> Field:
    """Parse a field descriptor: gf2 | gf2k:K | gf2k:K:0xMOD | ratfunc:<base>:VAR."""
    parts = text.strip().split(":")
    try:
        if parts[0] == "gf2" and len(parts) == 1:
            return GF2
        if parts[0] == "gf2k":
            k = int(parts[1])
            mod = int(parts[2], 16) if len(parts) > 2 else None
            return gf2k(k, mod)
        if parts[0] == "ratfunc":
            base = parse_field(":".join(parts[1:-1]))
            if not isinstance(base, GF2k):
                raise ParseError("function field base must be gf2k")
            return ratfunc(base, parts[-1])
    except (ValueError, IndexError) as exc:
        raise ParseError(f"bad field descriptor {text!r}: {exc}") from exc
    raise ParseError(f"bad field descriptor {text!r}")


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def field_arith(kind: str, x: Fe, y: Fe) -> Fe:
    """Dispatch basic arithmetic by name (CLI and conformance surface)."""
    if kind == "add":
        return x + y
    if kind == "mul":
        return x * y
    if kind == "div":
        return x / y
    if kind == "inv":
        return y.inv()  # x unused; kept for the uniform binary signature
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def frobenius_sqrt(x: Fe) -> Optional[Fe]:
    """The square root of x, or None when x is not a square.

    Over GF(2^k) this always succeeds; over GF(2^k)(t) it succeeds exactly
    when numerator and denominator are squares of polynomials.
    """
    return x.sqrt()


def absolute_trace(x: Fe) -> int:
    """Absolute trace GF(2^k) -> GF(2), as an int in {0, 1}."""
    if not isinstance(x.field, GF2k):
        raise UnsupportedField("absolute trace is only defined over GF(2^k)")
    return x.field.rtrace(x.raw)


def solve_artin_schreier(a: Fe, budget: int = 32) -> Union[Fe, None, Unknown]:
    """Solve x^2 + x = a.

    Over GF(2^k) the answer is exact (solvable iff the absolute trace of a
    vanishes).  Over GF(2^k)(t) polynomial right-hand sides are decided
    exactly by an ascending coefficient recurrence; non-polynomial ones
    return UNKNOWN, as do polynomials beyond the degree budget.
    """
    field = a.field
    if isinstance(field, GF2k):
        r = field.rartin(a.raw)
        return None if r is None else field._el(r)
    base = field.base
    num, den = a.raw
    if den != 1:
        return UNKNOWN
    d = pdeg(num, base.k)
    if d > 2 * budget:
        return UNKNOWN
    if d % 2 == 1:
        return None  # x^2 + x has even degree for polynomial x
    x0 = base.rartin(pcoef(num, 0, base.k))
    if x0 is None:
        return None  # constant-term trace obstruction
    coeffs = {0: x0}
    for j in range(1, d + 1):
        c = pcoef(num, j, base.k)
        if j % 2 == 0:
            c ^= base.rmul(coeffs.get(j // 2, 0), coeffs.get(j // 2, 0))
        coeffs[j] = c
    x = field.el(pmake([coeffs.get(i, 0) for i in range(d + 1)], base))
    if x * x + x == a:
        return x
    return None


# ---------------------------------------------------------------------------
# quadratic etale extension rings F[s]/(s^2 + s + c)
# ---------------------------------------------------------------------------


class EtaleElement:
    """Element x + y*s of a quadratic etale extension, s^2 = s + c."""

    __slots__ = ("ring", "x", "y")

    def __init__(self, ring, x: Fe, y: Fe):
        self.ring = ring
        self.x = x
        self.y = y

    def __add__(self, other):
        return EtaleElement(self.ring, self.x + other.x, self.y + other.y)

    __sub__ = __add__

    def __mul__(self, other):
        c = self.ring.c
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        yy = y1 * y2
        return EtaleElement(
            self.ring, x1 * x2 + c * yy, x1 * y2 + y1 * x2 + yy
        )

    def __neg__(self):
        return self

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def __eq__(self, other):
        return (
            isinstance(other, EtaleElement)
            and other.ring is self.ring
            and other.x == self.x
            and other.y == self.y
        )

    def __hash__(self):
        return hash((id(self.ring), self.x, self.y))

    def conj(self) -> "EtaleElement":
        """Image under the nontrivial automorphism s -> s + 1."""
        return EtaleElement(self.ring, self.x + self.y, self.y)

    def norm(self) -> Fe:
        c = self.ring.c
        return self.x * self.x + self.x * self.y + c * self.y * self.y

    def trace(self) -> Fe:
        return self.y

    def inv(self) -> "EtaleElement":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("non-invertible etale element")
        ni = n.inv()
        co = self.conj()
        return EtaleElement(self.ring, co.x * ni, co.y * ni)

    def __repr__(self):
        return f"Etale({self.x!r} + {self.y!r}*s)"


class QuadraticExtension:
    """Rank-2 etale ring F[s]/(s^2 + s + c) with the automorphism s -> s+1.

    A field exactly when c is outside the Artin-Schreier image of F; the
    split case still supports all ring operations (inversion may fail).
    """

    def __init__(self, field: Field, c: Fe):
        self.field = field
        self.c = c
        self.zero = EtaleElement(self, field.zero, field.zero)
        self.one = EtaleElement(self, field.one, field.zero)
        self.s = EtaleElement(self, field.zero, field.one)

    def lift(self, x: Fe) -> EtaleElement:
        return EtaleElement(self, x, self.field.zero)

    def el(self, x: Fe, y: Fe) -> EtaleElement:
        return EtaleElement(self, x, y)

    def __repr__(self):
        return f"QuadraticExtension({self.field!r}, c={self.c!r})"
