"""Matrix algebras with involution and their trace forms.

Degree-8 symplectic algebras are represented as 4x4 matrices over a
quaternion algebra Q, with sigma(x) = D^-1 * conj-transpose(x) * D for a
diagonal hermitian Gram D = diag(1, u1, u2, u3); the split case uses
Q = [0,1) and D = 1.  Degree-4 algebras come in three shapes: the exchange
algebra E x E^op, 4x4 matrices over a quadratic etale extension with a
twisted-transpose unitary involution, and 4x4 matrices over F with a
transpose-type orthogonal involution.

Reduced characteristic polynomials are computed through the Artin-Schreier
splitting of Q (never through a generic subfield search); the reduced
Pfaffian of a symmetrized element is read off the square root of its even
coefficients.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import (
    CharformError,
    CoefficientNotRational,
    NoInvertibleWitness,
    NotPfaffian,
    ShapeMismatch,
    UnsupportedDescriptor,
    ZeroScalar,
)
from .fields import Fe, Field, GF2k, QuadraticExtension, RatFunc, pdivmod, pgcd, pmul, solve_artin_schreier
from .forms import RawQuadraticForm
from .linalg import Mat, Span, charpoly, charpoly_raw, kernel
from .quaternions import Quat, QuaternionAlgebra, q_conj, q_trd


class InvolutionSpace:
    """Coordinatized space of (skew-)symmetric elements.

    For symplectic descriptors each basis element b is stored together with a
    half b' satisfying b = b' + sigma(b'), which makes the polarization of
    the Pfaffian form computable without dividing by 2.
    """

    def __init__(self, desc, basis, halves, span: Span):
        self.desc = desc
        self.basis = basis
        self.halves = halves
        self._span = span
        self._basis_raw = [[e.raw for e in desc.to_vec(b)] for b in basis]
        self._halves_raw = (
            None if halves is None else [[e.raw for e in desc.to_vec(h)] for h in halves]
        )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, x) -> Optional[List[Fe]]:
        return self._span.coords(self.desc.to_vec(x))

    def contains(self, x) -> bool:
        return self.coords(x) is not None

    def _combine(self, coords: Sequence[Fe], raw_rows):
        field = self.desc.field
        add, mul = field.radd, field.rmul
        acc = [field.rzero] * self.desc.ambient_dim
        for c, row in zip(coords, raw_rows):
            cr = c.raw
            if cr == field.rzero:
                continue
            acc = [add(a, mul(cr, r)) for a, r in zip(acc, row)]
        return self.desc.from_vec([field._el(a) for a in acc])

    def element(self, coords: Sequence[Fe]):
        return self._combine(coords, self._basis_raw)

    def half(self, coords: Sequence[Fe]):
        assert self.halves is not None, "halves are stored for symplectic spaces only"
        return self._combine(coords, self._halves_raw)

    def rand_coords(self, rng: random.Random) -> List[Fe]:
        return [self.desc.field.rand(rng) for _ in range(self.dim)]


@dataclass(frozen=True)
class PfaffianData:
    """Monic reduced Pfaffian: coefficients ascending, and the named terms."""

    coeffs: Tuple[Fe, ...]
    trace: Fe  # coefficient of X^(m-1)
    second: Fe  # coefficient of X^(m-2)
    linear: Fe  # coefficient of X (the cubic-form value for m = 4)
    norm: Fe  # constant coefficient


class _MatrixDescriptor:
    """Common machinery for descriptors whose elements are 4x4 matrices."""

    n = 4

    def __init__(self, field: Field):
        self.field = field
        self._space: Optional[InvolutionSpace] = None
        self._srp_raw: Optional[RawQuadraticForm] = None
        self._components = None

    # element plumbing --------------------------------------------------------

    def zero_el(self):
        return Mat.zeros(self.entry_ring, self.n)

    def one_el(self):
        return Mat.identity(self.entry_ring, self.n)

    def el_add(self, x, y):
        return x + y

    def el_mul(self, x, y):
        return x * y

    def el_scal(self, c: Fe, x):
        lifted = self.lift_scalar(c)
        return x.map(lambda e: lifted * e)

    def el_eq(self, x, y) -> bool:
        return x == y

    def rand(self, rng: random.Random):
        return Mat(
            self.entry_ring,
            [[self.rand_entry(rng) for _ in range(self.n)] for _ in range(self.n)],
        )

    def _validate_involution(self):
        for e in self.std_basis():
            if self.involve(self.involve(e)) != e:
                raise UnsupportedDescriptor("the induced map is not an involution")


class _SympBase(_MatrixDescriptor):
    """4x4 matrices over a quaternion algebra, sigma adjoint to a diagonal
    hermitian form <1, u1, u2, u3>."""

    def __init__(self, field: Field, quat: QuaternionAlgebra, us: Sequence[Fe]):
        super().__init__(field)
        if any(not u for u in us):
            raise ZeroScalar("hermitian coefficients must be nonzero")
        self.quat = quat
        self.us = tuple(us)
        self.entry_ring = quat
        self.gram = (field.one,) + self.us
        self._validate_involution()

    def lift_scalar(self, c: Fe) -> Quat:
        return self.quat.scalar(c)

    def rand_entry(self, rng):
        return self.quat.rand(rng)

    @property
    def ambient_dim(self) -> int:
        return 64

    def std_basis(self):
        basis = []
        units = (self.quat.one, self.quat.u, self.quat.v, self.quat.w)
        for i in range(4):
            for j in range(4):
                for q in units:
                    rows = [[self.quat.zero] * 4 for _ in range(4)]
                    rows[i][j] = q
                    basis.append(Mat(self.quat, rows))
        return basis

    def to_vec(self, x: Mat) -> List[Fe]:
        if not isinstance(x, Mat) or x.ring is not self.quat:
            raise ShapeMismatch("expected a 4x4 matrix over the quaternion algebra")
        out: List[Fe] = []
        for i in range(4):
            for j in range(4):
                out.extend(x.rows[i][j].c)
        return out

    def from_vec(self, v: Sequence[Fe]) -> Mat:
        rows = []
        for i in range(4):
            row = []
            for j in range(4):
                k = (i * 4 + j) * 4
                row.append(Quat(self.quat, tuple(v[k : k + 4])))
            rows.append(row)
        return Mat(self.quat, rows)

    def involve(self, x: Mat) -> Mat:
        rows = []
        for i in range(4):
            row = []
            for j in range(4):
                c = self.gram[j] / self.gram[i]
                row.append(q_conj(x.rows[j][i]).scal(c))
            rows.append(row)
        return Mat(self.quat, rows)

    def trd(self, x: Mat) -> Fe:
        acc = self.field.zero
        for i in range(4):
            acc = acc + q_trd(x.rows[i][i])
        return acc

    def scalar_part(self, x: Mat) -> Fe:
        return x.rows[0][0].c[0]

    def _raw_split_rows(self, x: Mat):
        """The 8x8 splitting image on raw payloads.

        With s the chosen root of X^2+X+a, a quaternion entry (c0,c1,c2,c3)
        embeds as [[c0+c1*s, (c2+c3*s)*b], [c2+c3*(s+1), c0+c1*(s+1)]].
        Entries are raw field payloads when the root lies in F, else raw
        (x, y) pairs over F[s].
        """
        field = self.field
        sp = self.quat.split()
        add, mul = field.radd, field.rmul
        b = self.quat.b.raw
        split_over_f = sp.ring is field
        if split_over_f:
            r = sp.u_img.rows[0][0].raw
            r1 = add(r, field.rone)
        rows = [[None] * 8 for _ in range(8)]
        for i in range(4):
            for j in range(4):
                c0, c1, c2, c3 = (c.raw for c in x.rows[i][j].c)
                if split_over_f:
                    e00 = add(c0, mul(c1, r))
                    e01 = mul(add(c2, mul(c3, r)), b)
                    e10 = add(c2, mul(c3, r1))
                    e11 = add(c0, mul(c1, r1))
                else:
                    e00 = (c0, c1)
                    e01 = (mul(c2, b), mul(c3, b))
                    e10 = (add(c2, c3), c3)
                    e11 = (add(c0, c1), c1)
                rows[2 * i][2 * j] = e00
                rows[2 * i][2 * j + 1] = e01
                rows[2 * i + 1][2 * j] = e10
                rows[2 * i + 1][2 * j + 1] = e11
        return rows, split_over_f

    def reduced_charpoly(self, x: Mat) -> List[Fe]:
        field = self.field
        if isinstance(field, RatFunc):
            out = self._reduced_charpoly_ratfunc(x)
            if out is not None:
                return out
        rows, split_over_f = self._raw_split_rows(x)
        add, mul = field.radd, field.rmul
        if split_over_f:
            coeffs = charpoly_raw(rows, field.rzero, field.rone, add, mul)
            return [Fe(field, c) if not isinstance(field, GF2k) else field._el(c) for c in coeffs]
        c_raw = self.quat.a.raw
        ez = (field.rzero, field.rzero)
        eo = (field.rone, field.rzero)

        def eadd(p, q):
            return (add(p[0], q[0]), add(p[1], q[1]))

        def emul(p, q):
            x1, y1 = p
            x2, y2 = q
            yy = mul(y1, y2)
            return (
                add(mul(x1, x2), mul(c_raw, yy)),
                add(add(mul(x1, y2), mul(y1, x2)), yy),
            )

        coeffs = charpoly_raw(rows, ez, eo, eadd, emul)
        out = []
        zero_raw = field.rzero
        for cx, cy in coeffs:
            if cy != zero_raw:
                raise CoefficientNotRational(
                    "characteristic polynomial coefficient outside the base field"
                )
            out.append(field._el(cx) if isinstance(field, GF2k) else Fe(field, cx))
        return out

    def _reduced_charpoly_ratfunc(self, x: Mat) -> Optional[List[Fe]]:
        """Fraction-free path over GF(2^k)(t).

        Clears denominators once, runs Berkowitz on packed polynomials (no
        gcd in the inner loops), and rescales the coefficients at the end.
        Requires the first quaternion slot to be a polynomial; callers fall
        back to the generic path otherwise.
        """
        field = self.field
        if self.quat.a.raw[1] != 1:
            return None
        base = field.base
        rows, split_over_f = self._raw_split_rows(x)
        n = 8
        den = 1
        for row in rows:
            for e in row:
                parts = (e,) if split_over_f else e
                for num_d in parts:
                    d = num_d[1]
                    g = pgcd(den, d, base)
                    den = pmul(pdivmod(den, g, base)[0], d, base)

        def cleared(num_d):
            num, d = num_d
            return pmul(num, pdivmod(den, d, base)[0], base)

        if split_over_f:
            poly_rows = [[cleared(e) for e in row] for row in rows]
            coeffs = charpoly_raw(
                poly_rows, 0, 1, lambda p, q: p ^ q, lambda p, q: pmul(p, q, base)
            )
            pairs = [(c, 0) for c in coeffs]
        else:
            c_poly = self.quat.a.raw[0]

            def eadd(p, q):
                return (p[0] ^ q[0], p[1] ^ q[1])

            def emul(p, q):
                x1, y1 = p
                x2, y2 = q
                yy = pmul(y1, y2, base)
                return (
                    pmul(x1, x2, base) ^ pmul(c_poly, yy, base),
                    pmul(x1, y2, base) ^ pmul(y1, x2, base) ^ yy,
                )

            poly_rows = [[(cleared(e[0]), cleared(e[1])) for e in row] for row in rows]
            pairs = charpoly_raw(poly_rows, (0, 0), (1, 0), eadd, emul)
        out = []
        for i, (cx, cy) in enumerate(pairs):
            if cy:
                raise CoefficientNotRational(
                    "characteristic polynomial coefficient outside the base field"
                )
            power = n - i
            d = 1
            for _ in range(power):
                d = pmul(d, den, base)
            out.append(Fe(field, field._norm(cx, d)))
        return out

    def trd_product(self, x: Mat, y: Mat) -> Fe:
        """Trd(x*y) without forming the full product (diagonal terms only)."""
        field = self.field
        a, b = self.quat.a.raw, self.quat.b.raw
        add, mul = field.radd, field.rmul
        acc = field.rzero
        for i in range(4):
            for k in range(4):
                x0, x1, x2, x3 = (c.raw for c in x.rows[i][k].c)
                y0, y1, y2, y3 = (c.raw for c in y.rows[k][i].c)
                # u-coefficient of the quaternion product
                t = add(mul(x0, y1), mul(x1, y0))
                t = add(t, mul(x1, y1))
                t = add(t, mul(b, add(mul(x2, y3), mul(x3, y2))))
                acc = add(acc, t)
        return field._el(acc) if isinstance(field, GF2k) else Fe(field, acc)

    @property
    def symd_dim(self) -> int:
        return 28


class SplitSymp(_SympBase):
    """Degree-8 split symplectic case: conj-transpose on 4x4 over [0,1)."""

    kind = "split_symp"

    def __init__(self, field: Field):
        quat = QuaternionAlgebra(field, field.zero, field.one)
        super().__init__(field, quat, (field.one,) * 3)


class Index2Symp(_SympBase):
    """Degree-8 case with A = M_4(Q), sigma adjoint to h = <1, u1, u2, u3>."""

    kind = "index2_symp"

    def __init__(self, field: Field, quat: QuaternionAlgebra, us: Sequence[Fe]):
        if quat.field is not field:
            raise UnsupportedDescriptor("quaternion algebra over a different field")
        super().__init__(field, quat, us)


class UnitaryExchange(_MatrixDescriptor):
    """B = E x E^op with the exchange involution; elements are pairs."""

    kind = "unitary_exchange"

    def __init__(self, field: Field):
        super().__init__(field)
        self.entry_ring = field
        self._validate_involution()

    # pair plumbing ------------------------------------------------------------

    def zero_el(self):
        z = Mat.zeros(self.field, self.n)
        return (z, z)

    def one_el(self):
        o = Mat.identity(self.field, self.n)
        return (o, o)

    def el_add(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def el_mul(self, x, y):
        return (x[0] * y[0], y[1] * x[1])  # opposite multiplication on the right

    def el_scal(self, c: Fe, x):
        return (x[0].map(lambda e: c * e), x[1].map(lambda e: c * e))

    def el_eq(self, x, y) -> bool:
        return x == y

    def rand(self, rng):
        def m():
            return Mat(
                self.field,
                [[self.field.rand(rng) for _ in range(4)] for _ in range(4)],
            )

        return (m(), m())

    @property
    def ambient_dim(self) -> int:
        return 32

    def std_basis(self):
        basis = []
        z = Mat.zeros(self.field, 4)
        for side in range(2):
            for i in range(4):
                for j in range(4):
                    rows = [[self.field.zero] * 4 for _ in range(4)]
                    rows[i][j] = self.field.one
                    m = Mat(self.field, rows)
                    basis.append((m, z) if side == 0 else (z, m))
        return basis

    def to_vec(self, x) -> List[Fe]:
        e, f = x
        out = [a for row in e.rows for a in row]
        out.extend(a for row in f.rows for a in row)
        return out

    def from_vec(self, v: Sequence[Fe]):
        e = Mat(self.field, [v[4 * i : 4 * i + 4] for i in range(4)])
        f = Mat(self.field, [v[16 + 4 * i : 16 + 4 * i + 4] for i in range(4)])
        return (e, f)

    def involve(self, x):
        return (x[1], x[0])

    def trd(self, x) -> Fe:
        return x[0].trace()

    def scalar_part(self, x) -> Fe:
        return x[0].rows[0][0]

    def reduced_charpoly(self, x) -> List[Fe]:
        return list(charpoly(x[0]))

    def _validate_involution(self):
        pass  # the exchange is an involution by construction


class UnitaryEtale(_MatrixDescriptor):
    """4x4 matrices over Z = F[s]/(s^2+s+c) with a diagonal unitary involution."""

    kind = "unitary_etale"

    def __init__(self, field: Field, c: Fe, gs: Sequence[Fe]):
        super().__init__(field)
        if any(not g for g in gs):
            raise ZeroScalar("Gram coefficients must be nonzero")
        root = solve_artin_schreier(c)
        if isinstance(root, Fe):
            raise UnsupportedDescriptor(
                "the center parameter c must be outside the Artin-Schreier image"
            )
        self.c = c
        self.center = QuadraticExtension(field, c)
        self.gs = tuple(gs)
        self.entry_ring = self.center
        self._validate_involution()

    def lift_scalar(self, c: Fe):
        return self.center.lift(c)

    def rand_entry(self, rng):
        return self.center.el(self.field.rand(rng), self.field.rand(rng))

    @property
    def ambient_dim(self) -> int:
        return 32

    def std_basis(self):
        basis = []
        units = (self.center.one, self.center.s)
        for i in range(4):
            for j in range(4):
                for zel in units:
                    rows = [[self.center.zero] * 4 for _ in range(4)]
                    rows[i][j] = zel
                    basis.append(Mat(self.center, rows))
        return basis

    def to_vec(self, x: Mat) -> List[Fe]:
        out: List[Fe] = []
        for i in range(4):
            for j in range(4):
                e = x.rows[i][j]
                out.append(e.x)
                out.append(e.y)
        return out

    def from_vec(self, v: Sequence[Fe]) -> Mat:
        rows = []
        for i in range(4):
            row = []
            for j in range(4):
                k = (i * 4 + j) * 2
                row.append(self.center.el(v[k], v[k + 1]))
            rows.append(row)
        return Mat(self.center, rows)

    def involve(self, x: Mat) -> Mat:
        rows = []
        for i in range(4):
            row = []
            for j in range(4):
                c = self.center.lift(self.gs[j] / self.gs[i])
                row.append(c * x.rows[j][i].conj())
            rows.append(row)
        return Mat(self.center, rows)

    def trd(self, x: Mat) -> Fe:
        z = x.trace()
        if z.y:
            raise CoefficientNotRational("reduced trace is not in the base field")
        return z.x

    def scalar_part(self, x: Mat) -> Fe:
        return x.rows[0][0].x

    def reduced_charpoly(self, x: Mat) -> List[Fe]:
        out = []
        for c in charpoly(x):
            if c.y:
                raise CoefficientNotRational(
                    "characteristic polynomial coefficient outside the base field"
                )
            out.append(c.x)
        return out


class Orthogonal(_MatrixDescriptor):
    """4x4 matrices over F with rho(x) = G^-1 x^t G, G = diag(g1..g4)."""

    kind = "orthogonal"

    def __init__(self, field: Field, gs: Sequence[Fe]):
        super().__init__(field)
        if any(not g for g in gs):
            raise ZeroScalar("Gram coefficients must be nonzero")
        self.gs = tuple(gs)
        self.entry_ring = field
        self._validate_involution()

    def lift_scalar(self, c: Fe) -> Fe:
        return c

    def rand_entry(self, rng):
        return self.field.rand(rng)

    @property
    def ambient_dim(self) -> int:
        return 16

    def std_basis(self):
        basis = []
        for i in range(4):
            for j in range(4):
                rows = [[self.field.zero] * 4 for _ in range(4)]
                rows[i][j] = self.field.one
                basis.append(Mat(self.field, rows))
        return basis

    def to_vec(self, x: Mat) -> List[Fe]:
        return [a for row in x.rows for a in row]

    def from_vec(self, v: Sequence[Fe]) -> Mat:
        return Mat(self.field, [v[4 * i : 4 * i + 4] for i in range(4)])

    def involve(self, x: Mat) -> Mat:
        rows = []
        for i in range(4):
            row = []
            for j in range(4):
                row.append((self.gs[j] / self.gs[i]) * x.rows[j][i])
            rows.append(row)
        return Mat(self.field, rows)

    def trd(self, x: Mat) -> Fe:
        return x.trace()

    def scalar_part(self, x: Mat) -> Fe:
        return x.rows[0][0]

    def reduced_charpoly(self, x: Mat) -> List[Fe]:
        return list(charpoly(x))


Descriptor = _MatrixDescriptor


def apply_involution(desc: Descriptor, x):
    """The involution of the descriptor applied to an algebra element."""
    return desc.involve(x)


def symmetric_space(desc: Descriptor) -> InvolutionSpace:
    """Basis of Symd(sigma) (symplectic, with halves) or Sym (fixed points)."""
    if desc._space is not None:
        return desc._space
    field = desc.field
    basis_el = desc.std_basis()
    if isinstance(desc, _SympBase):
        images = [desc.to_vec(desc.el_add(e, desc.involve(e))) for e in basis_el]
        span = Span(images, field)
        basis = [desc.from_vec(span.basis_vector(i)) for i in range(span.dim)]
        halves = []
        for combo in span.combos:
            acc = desc.zero_el()
            for c, e in zip(combo, basis_el):
                if c:
                    acc = desc.el_add(acc, desc.el_scal(c, e))
            halves.append(acc)
        space = InvolutionSpace(desc, basis, halves, Span([desc.to_vec(b) for b in basis], field))
        expected = desc.symd_dim
    else:
        rows = [desc.to_vec(desc.el_add(e, desc.involve(e))) for e in basis_el]
        matrix = [[rows[c][r] for c in range(len(rows))] for r in range(desc.ambient_dim)]
        fixed = Span(kernel(matrix, field), field)
        basis = [desc.from_vec(fixed.basis_vector(i)) for i in range(fixed.dim)]
        space = InvolutionSpace(
            desc, basis, None, Span([desc.to_vec(b) for b in basis], field)
        )
        expected = 16 if desc.kind.startswith("unitary") else 10
    if space.dim != expected:
        raise CharformError(
            f"symmetric space of {desc.kind} has dimension {space.dim}, expected {expected}"
        )
    if isinstance(desc, _SympBase) and space.coords(desc.one_el()) is None:
        raise UnsupportedDescriptor("1 is not a symmetrized element")
    desc._space = space
    return space


def reduced_charpoly(desc: Descriptor, x) -> List[Fe]:
    """Reduced characteristic polynomial, ascending coefficients, monic."""
    return desc.reduced_charpoly(x)


def reduced_pfaffian(desc: Descriptor, x) -> PfaffianData:
    """Monic square root of the reduced characteristic polynomial.

    Defined for symmetrized elements of the symplectic descriptors; raises
    NotPfaffian when an odd coefficient survives or an even coefficient is
    not a square (both signal x outside Symd(sigma)).
    """
    if not isinstance(desc, _SympBase):
        raise UnsupportedDescriptor("reduced Pfaffians need a symplectic descriptor")
    pc = desc.reduced_charpoly(x)
    assert len(pc) == 9
    coeffs = []
    for i, c in enumerate(pc):
        if i % 2:
            if c:
                raise NotPfaffian("odd characteristic coefficient is nonzero")
        else:
            r = c.sqrt()
            if r is None:
                raise NotPfaffian("even characteristic coefficient is not a square")
            coeffs.append(r)
    p0, p1, p2, p3, p4 = coeffs
    assert p4 == desc.field.one
    return PfaffianData(tuple(coeffs), trace=p3, second=p2, linear=p1, norm=p0)


def pfaffian_form(
    desc: Descriptor, *, validate: int = 200, seed: int = 0
) -> RawQuadraticForm:
    """The second Pfaffian coefficient as a raw quadratic form on Symd.

    Diagonal entries come from the reduced Pfaffian of the basis vectors;
    off-diagonal entries from the polarization identity
    b(x, y) = tp(x) tp(y) + Trd(x y'), with tp the Pfaffian trace and y' a
    stored half of y.
    The result is cross-checked against direct Pfaffian evaluation on
    ``validate`` random vectors.
    """
    if desc._srp_raw is not None:
        return desc._srp_raw
    space = symmetric_space(desc)
    field = desc.field
    n = space.dim
    pf = [reduced_pfaffian(desc, b) for b in space.basis]
    traces = [p.trace for p in pf]
    z = field.zero
    u = [[z] * n for _ in range(n)]
    for i in range(n):
        u[i][i] = pf[i].second
    for j in range(n):
        hj = space.halves[j]
        for i in range(j):
            u[i][j] = traces[i] * traces[j] + desc.trd_product(space.basis[i], hj)
    raw = RawQuadraticForm(field, u)
    rng = random.Random(seed)
    for _ in range(validate):
        v = space.rand_coords(rng)
        direct = reduced_pfaffian(desc, space.element(v)).second
        if raw.evaluate(v) != direct:
            raise CharformError("Pfaffian form disagrees with direct evaluation")
    desc._srp_raw = raw
    return raw


def second_trace_form(desc: Descriptor) -> RawQuadraticForm:
    """Restriction of the degree-(2m-2) characteristic coefficient to Sym.

    Polarized through b(x, y) = Trd(x) Trd(y) + Trd(xy); used for the
    degree-4 unitary and orthogonal descriptors.
    """
    if isinstance(desc, _SympBase):
        raise UnsupportedDescriptor("use pfaffian_form for symplectic descriptors")
    if desc._srp_raw is not None:
        return desc._srp_raw
    space = symmetric_space(desc)
    field = desc.field
    n = space.dim
    z = field.zero
    u = [[z] * n for _ in range(n)]
    traces = [desc.trd(b) for b in space.basis]
    for i in range(n):
        u[i][i] = desc.reduced_charpoly(space.basis[i])[2]
        for j in range(i + 1, n):
            u[i][j] = traces[i] * traces[j] + desc.trd(
                desc.el_mul(space.basis[i], space.basis[j])
            )
    raw = RawQuadraticForm(field, u)
    desc._srp_raw = raw
    return raw


def srd_form_unitary(desc: Descriptor) -> RawQuadraticForm:
    if not isinstance(desc, (UnitaryExchange, UnitaryEtale)):
        raise UnsupportedDescriptor("unitary descriptor required")
    return second_trace_form(desc)


def srd_form_orth(desc: Descriptor) -> RawQuadraticForm:
    if not isinstance(desc, Orthogonal):
        raise UnsupportedDescriptor("orthogonal descriptor required")
    return second_trace_form(desc)


def _determinant(desc: Orthogonal, x: Mat) -> Fe:
    return charpoly(x)[0]


def symmetrized_space_orth(desc: Orthogonal) -> List[Mat]:
    """Basis of {x + rho(x)}, the alternating part inside Sym(rho)."""
    field = desc.field
    images = [desc.to_vec(desc.el_add(e, desc.involve(e))) for e in desc.std_basis()]
    span = Span(images, field)
    return [desc.from_vec(span.basis_vector(i)) for i in range(span.dim)]


def det_orthogonal(desc: Orthogonal, *, seed: int = 0, witnesses: int = 3) -> Fe:
    """Determinant class of the orthogonal involution.

    Returns Nrd(w) for an invertible symmetrized element w; independence of
    the choice is asserted on several witnesses (their ratios are squares).
    """
    basis = symmetrized_space_orth(desc)
    field = desc.field
    rng = random.Random(seed)
    found: List[Fe] = []
    candidates = list(basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            candidates.append(basis[i] + basis[j])
    budget = 500
    while len(found) < witnesses and budget:
        budget -= 1
        if candidates:
            w = candidates.pop(0)
        else:
            w = desc.zero_el()
            for b in basis:
                if rng.randrange(2):
                    w = w + b
        det = _determinant(desc, w)
        if det:
            found.append(det)
    if not found:
        raise NoInvertibleWitness("no invertible symmetrized element found")
    for other in found[1:]:
        if not (found[0] / other).is_square():
            raise CharformError("determinant class depends on the witness")
    return found[0]
