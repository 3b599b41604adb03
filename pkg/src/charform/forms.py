"""Quadratic and bilinear form calculus in characteristic 2.

A raw form is an upper-triangular coefficient matrix; a normalized form is a
list of nonsingular binary blocks (a,b), each meaning a*X^2 + X*Y + b*Y^2,
followed by totally singular diagonal entries <c> meaning c*X^2.  Over
GF(2^k) classification is complete (dimension, Witt index, Arf invariant);
over GF(2^k)(t) the decision procedures are three-valued and every Decided
answer is backed by an explicit certificate.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .decision import Decision, decided, unknown
from .errors import (
    FieldMismatch,
    SingularForm,
    UnsupportedField,
    ZeroScalar,
    ZeroSlot,
)
from .fields import (
    Fe,
    Field,
    GF2k,
    RatFunc,
    absolute_trace,
    pcoef,
    pdeg,
    pdivmod,
    solve_artin_schreier,
)


class RawQuadraticForm:
    """Quadratic form q(x) = sum_{i<=j} U[i][j] x_i x_j on coordinates."""

    __slots__ = ("field", "u")

    def __init__(self, field: Field, u):
        rows = tuple(tuple(r) for r in u)
        n = len(rows)
        for i, row in enumerate(rows):
            assert len(row) == n
            assert all(not row[j] for j in range(i)), "coefficients must be upper-triangular"
        self.field = field
        self.u = rows

    @property
    def dim(self) -> int:
        return len(self.u)

    def evaluate(self, v: Sequence[Fe]) -> Fe:
        acc = self.field.zero
        for i in range(self.dim):
            if not v[i]:
                continue
            for j in range(i, self.dim):
                if self.u[i][j] and v[j]:
                    acc = acc + self.u[i][j] * v[i] * v[j]
        return acc

    def polar_matrix(self) -> Tuple[Tuple[Fe, ...], ...]:
        """B = U + U^t; alternating (zero diagonal) in characteristic 2."""
        n = self.dim
        return tuple(
            tuple(self.u[i][j] + self.u[j][i] for j in range(n)) for i in range(n)
        )

    def polar(self, v: Sequence[Fe], w: Sequence[Fe]) -> Fe:
        acc = self.field.zero
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if self.u[i][j]:
                    acc = acc + self.u[i][j] * (v[i] * w[j] + v[j] * w[i])
        return acc

    def restrict(self, vectors: Sequence[Sequence[Fe]]) -> "RawQuadraticForm":
        """The form induced on the span of the given coordinate vectors."""
        n = len(vectors)
        z = self.field.zero
        u = [[z] * n for _ in range(n)]
        for i in range(n):
            u[i][i] = self.evaluate(vectors[i])
            for j in range(i + 1, n):
                u[i][j] = self.polar(vectors[i], vectors[j])
        return RawQuadraticForm(self.field, u)

    def scaled(self, c: Fe) -> "RawQuadraticForm":
        if not c:
            raise ZeroScalar("cannot scale a form by zero")
        return RawQuadraticForm(self.field, [[c * a for a in row] for row in self.u])

    def __repr__(self):
        return f"RawQuadraticForm(dim={self.dim})"


@dataclass(frozen=True)
class QuadraticForm:
    """Normalized block form: binary blocks (a,b) plus diagonal entries."""

    field: Field
    blocks: Tuple[Tuple[Fe, Fe], ...]
    diag: Tuple[Fe, ...]

    @property
    def dim(self) -> int:
        return 2 * len(self.blocks) + len(self.diag)

    @property
    def nonsingular(self) -> bool:
        return not self.diag

    def evaluate(self, v: Sequence[Fe]) -> Fe:
        acc = self.field.zero
        for i, (a, b) in enumerate(self.blocks):
            x, y = v[2 * i], v[2 * i + 1]
            acc = acc + a * x * x + x * y + b * y * y
        for j, c in enumerate(self.diag):
            x = v[2 * len(self.blocks) + j]
            acc = acc + c * x * x
        return acc

    def to_raw(self) -> RawQuadraticForm:
        n = self.dim
        z = self.field.zero
        u = [[z] * n for _ in range(n)]
        for i, (a, b) in enumerate(self.blocks):
            u[2 * i][2 * i] = a
            u[2 * i][2 * i + 1] = self.field.one
            u[2 * i + 1][2 * i + 1] = b
        for j, c in enumerate(self.diag):
            k = 2 * len(self.blocks) + j
            u[k][k] = c
        return RawQuadraticForm(self.field, u)

    def __repr__(self):
        return f"QuadraticForm(blocks={len(self.blocks)}, diag={len(self.diag)})"


def form(field: Field, blocks=(), diag=()) -> QuadraticForm:
    return QuadraticForm(field, tuple(tuple(b) for b in blocks), tuple(diag))


def block11(field: Field) -> QuadraticForm:
    """The form X^2 + XY + Y^2."""
    return form(field, [(field.one, field.one)])


def block00(field: Field) -> QuadraticForm:
    """The hyperbolic plane XY."""
    return form(field, [(field.zero, field.zero)])


def polar_matrix(q: RawQuadraticForm):
    return q.polar_matrix()


def normalize(q: RawQuadraticForm) -> Tuple[QuadraticForm, Tuple[Tuple[Fe, ...], ...]]:
    """Symplectic-basis reduction of a raw form.

    Returns the block form together with the change of basis T (columns are
    the new basis in old coordinates), so q(T y) equals the block form at y.
    The radical of the polar form lands in the diagonal part.
    """
    field = q.field
    n = q.dim
    vecs = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    remaining = list(range(n))
    blocks: List[Tuple[Fe, Fe]] = []
    ordered: List[list] = []

    def bil(v, w):
        return q.polar(v, w)

    while True:
        pair = None
        for ii in range(len(remaining)):
            for jj in range(ii + 1, len(remaining)):
                if bil(vecs[remaining[ii]], vecs[remaining[jj]]):
                    pair = (ii, jj)
                    break
            if pair:
                break
        if pair is None:
            break
        ii, jj = pair
        vi = vecs[remaining[ii]]
        vj = vecs[remaining[jj]]
        c = bil(vi, vj)
        vj = [a / c for a in vj]
        for idx in remaining:
            if idx in (remaining[ii], remaining[jj]):
                continue
            w = vecs[idx]
            c1 = bil(w, vj)
            c2 = bil(w, vi)
            vecs[idx] = [a + c1 * b1 + c2 * b2 for a, b1, b2 in zip(w, vi, vj)]
        blocks.append((q.evaluate(vi), q.evaluate(vj)))
        ordered.append(vi)
        ordered.append(vj)
        hi = remaining[jj]
        lo = remaining[ii]
        remaining = [idx for idx in remaining if idx not in (lo, hi)]
    diag = []
    for idx in remaining:
        diag.append(q.evaluate(vecs[idx]))
        ordered.append(vecs[idx])
    transform = tuple(zip(*ordered))  # columns are the new basis vectors
    return form(field, blocks, diag), transform


def direct_sum(*forms_: QuadraticForm) -> QuadraticForm:
    field = forms_[0].field
    blocks: List[Tuple[Fe, Fe]] = []
    diag: List[Fe] = []
    for f in forms_:
        if f.field is not field:
            raise FieldMismatch("direct sum over different fields")
        blocks.extend(f.blocks)
        diag.extend(f.diag)
    return form(field, blocks, diag)


def scale(c: Fe, q: QuadraticForm) -> QuadraticForm:
    """The form c*q; on blocks (a,b) this is (ca, b/c) via Y -> Y/c."""
    if not c:
        raise ZeroScalar("scale by zero")
    return form(
        q.field,
        [(c * a, b / c) for a, b in q.blocks],
        [c * d for d in q.diag],
    )


def bilinear_tensor(multipliers: Sequence[Fe], q: QuadraticForm) -> QuadraticForm:
    """Tensor with the diagonal bilinear form <multipliers>."""
    for m in multipliers:
        if not m:
            raise ZeroScalar("tensor multiplier must be nonzero")
    return direct_sum(*(scale(m, q) for m in multipliers))


def _subset_products(slots: Sequence[Fe], field: Field) -> List[Fe]:
    prods = [field.one]
    for s in slots:
        prods = prods + [p * s for p in prods]
    return prods


def quad_pfister(slots: Sequence[Fe], c: Fe) -> QuadraticForm:
    """The quadratic Pfister form <<slots; c]] of dimension 2^(len(slots)+1)."""
    field = c.field
    for s in slots:
        if not s:
            raise ZeroSlot("Pfister slots must be nonzero")
    base = form(field, [(field.one, c)])
    return bilinear_tensor(_subset_products(slots, field), base)


def quasi_pfister(slots: Sequence[Fe], field: Optional[Field] = None) -> QuadraticForm:
    """Totally singular diagonal form with all subset products of the slots."""
    if field is None:
        if not slots:
            raise ValueError("empty slot list needs an explicit field")
        field = slots[0].field
    for s in slots:
        if not s:
            raise ZeroSlot("Pfister slots must be nonzero")
    return form(field, [], _subset_products(slots, field))


def arf_invariant(q: QuadraticForm) -> int:
    """Sum of absolute traces of a_i*b_i over the blocks."""
    if q.diag:
        raise SingularForm("Arf invariant needs a nonsingular form")
    if not isinstance(q.field, GF2k):
        raise UnsupportedField("Arf invariant implemented over GF(2^k) only")
    bit = 0
    for a, b in q.blocks:
        bit ^= absolute_trace(a * b)
    return bit


def trace_one_element(field: GF2k) -> Fe:
    """Least element of GF(2^k) with absolute trace 1."""
    for x in field.elements():
        if field.rtrace(x.raw) == 1:
            return x
    raise AssertionError("every GF(2^k) has a trace-1 element")


@dataclass(frozen=True)
class WittInvariantsGf2k:
    """Complete invariants over GF(2^k): dim = 2*witt_index + dim(kernel)."""

    dimension: int
    witt_index: int
    arf: int
    kernel: QuadraticForm


def _f2_rank_gf2k(diag: Sequence[Fe]) -> int:
    return 1 if any(diag) else 0


def witt_decompose_gf2k(q: QuadraticForm) -> WittInvariantsGf2k:
    """Witt decomposition over GF(2^k).

    Every element is a square, so the diagonal part collapses to at most one
    nonzero entry <1> plus zeros; a nonzero diagonal entry absorbs the
    anisotropic binary block, turning it into an extra hyperbolic plane.
    """
    field = q.field
    if not isinstance(field, GF2k):
        raise UnsupportedField("Witt decomposition implemented over GF(2^k) only")
    nblocks = len(q.blocks)
    arf = 0
    for a, b in q.blocks:
        arf ^= absolute_trace(a * b)
    ts_rank = _f2_rank_gf2k(q.diag)
    kernel_blocks: List[Tuple[Fe, Fe]] = []
    # entries beyond an F^2-basis of the diagonal collapse to radical zeros
    kernel_diag: List[Fe] = [field.one] * ts_rank + [field.zero] * (
        len(q.diag) - ts_rank
    )
    if ts_rank:
        witt = nblocks
    else:
        witt = nblocks - arf
        if arf:
            kernel_blocks.append((field.one, trace_one_element(field)))
    kernel = form(field, kernel_blocks, kernel_diag)
    return WittInvariantsGf2k(q.dim, witt, arf, kernel)


def witt_equivalent_gf2k(q1: QuadraticForm, q2: QuadraticForm) -> bool:
    """Equality of anisotropic kernels (zero diagonal entries are radical)."""
    w1 = witt_decompose_gf2k(q1)
    w2 = witt_decompose_gf2k(q2)
    k1, k2 = w1.kernel, w2.kernel
    return (
        len(k1.blocks) == len(k2.blocks)
        and (arf_of_blocks(k1) == arf_of_blocks(k2))
        and _f2_rank_gf2k(k1.diag) == _f2_rank_gf2k(k2.diag)
    )


def arf_of_blocks(q: QuadraticForm) -> int:
    bit = 0
    for a, b in q.blocks:
        bit ^= absolute_trace(a * b)
    return bit


# ---------------------------------------------------------------------------
# F^2-linear span machinery for totally singular forms
# ---------------------------------------------------------------------------


class SquareSpan:
    """Span of field elements over the subfield of squares F^2.

    Over GF(2^k), F^2 = F and the span is {0} or all of F.  Over GF(2^k)(t),
    F has the basis {1, t} over F^2 = GF(2^k)(t^2); membership reduces to
    exact 2-column Gaussian elimination with coefficients in F^2.
    """

    def __init__(self, field: Field):
        self.field = field
        self._rows: List[Tuple[Fe, Fe]] = []

    @staticmethod
    def _coords(e: Fe) -> Tuple[Fe, Fe]:
        """Coordinates of e over {1, t} with entries in F^2."""
        field = e.field
        if isinstance(field, GF2k):
            return (e, field.zero)
        base = field.base
        num, den = e.raw
        m = field.rmul((num, 1), (den, 1))[0]  # num*den; e = m / den^2
        k = base.k
        even = 0
        odd = 0
        for i in range(pdeg(m, k) + 1):
            c = pcoef(m, i, k)
            if not c:
                continue
            if i % 2 == 0:
                even |= c << (i * k)
            else:
                odd |= c << ((i - 1) * k)
        den2 = field.rmul((den, 1), (den, 1))[0]
        return (
            Fe(field, field._norm(even, den2)),
            Fe(field, field._norm(odd, den2)),
        )

    def _reduce(self, vec: Tuple[Fe, Fe]) -> Tuple[Fe, Fe]:
        a, b = vec
        for (ra, rb) in self._rows:
            if ra and a:
                c = a / ra
                a, b = a + c * ra, b + c * rb
            elif not ra and rb and b:
                c = b / rb
                b = b + c * rb
        return a, b

    def add(self, e: Fe) -> None:
        vec = self._reduce(self._coords(e))
        if vec[0] or vec[1]:
            self._rows.append(vec)
            self._rows.sort(key=lambda r: (not r[0],))

    def contains(self, e: Fe) -> bool:
        vec = self._reduce(self._coords(e))
        return not vec[0] and not vec[1]

    @property
    def rank(self) -> int:
        return len(self._rows)


def f2_span(entries: Sequence[Fe], field: Field) -> SquareSpan:
    span = SquareSpan(field)
    for e in entries:
        span.add(e)
    return span


def totally_singular_isometry(d1: QuadraticForm, d2: QuadraticForm) -> Decision:
    """Isometry test for totally singular diagonal forms of equal dimension.

    Isometry classes are determined by (dimension, F^2-span of the entries),
    so the comparison is exact over both supported field kinds.
    """
    if d1.blocks or d2.blocks:
        raise SingularForm("totally singular comparison needs diagonal forms")
    if d1.dim != d2.dim:
        raise ValueError("totally singular comparison needs equal dimensions")
    if d1.field is not d2.field:
        raise FieldMismatch("forms over different fields")
    s1 = f2_span(d1.diag, d1.field)
    s2 = f2_span(d2.diag, d2.field)
    if s1.rank != s2.rank:
        return decided(False, {"rank1": s1.rank, "rank2": s2.rank})
    mutual = all(s2.contains(e) for e in d1.diag) and all(
        s1.contains(e) for e in d2.diag
    )
    return decided(mutual)


def is_quasi_hyperbolic(d: QuadraticForm) -> bool:
    """F^2-span rank of the entries at most half the dimension."""
    if d.blocks:
        raise SingularForm("quasi-hyperbolicity is for totally singular forms")
    return 2 * f2_span(d.diag, d.field).rank <= d.dim


# ---------------------------------------------------------------------------
# isotropy searches and hyperbolicity decisions
# ---------------------------------------------------------------------------


def _block_split_certificate(field, a: Fe, b: Fe):
    """An isotropic vector of the block (a,b), or None/UNKNOWN."""
    if not a:
        return (field.one, field.zero)
    if not b:
        return (field.zero, field.one)
    r = solve_artin_schreier(a * b)
    if r is None:
        return None
    if isinstance(r, Fe):
        return (r / a, field.one)  # a(r/a)^2 + (r/a) + b = (r^2+r+ab)/a = 0
    return r  # UNKNOWN sentinel


def isotropic_vector(
    q: QuadraticForm, rng: Optional[random.Random] = None, trials: int = 200, max_deg: int = 2
) -> Optional[List[Fe]]:
    """Bounded search for a nonzero isotropic vector.

    Tries per-block certificates, duplicated blocks, exhaustive enumeration
    over small finite fields, then seeded random candidates.  Returns None
    when the budget is exhausted (which proves nothing).
    """
    field = q.field
    n = q.dim
    z = field.zero
    for i, (a, b) in enumerate(q.blocks):
        cert = _block_split_certificate(field, a, b)
        if isinstance(cert, tuple):
            v = [z] * n
            v[2 * i], v[2 * i + 1] = cert
            return v
    for j, c in enumerate(q.diag):
        if not c:
            v = [z] * n
            v[2 * len(q.blocks) + j] = field.one
            return v
    for i in range(len(q.blocks)):
        for j in range(i + 1, len(q.blocks)):
            if q.blocks[i] == q.blocks[j]:
                v = [z] * n
                v[2 * i] = v[2 * j] = field.one
                return v
    if isinstance(field, GF2k) and field.order**n <= 1 << 16:
        for vals in itertools.product(range(field.order), repeat=n):
            if not any(vals):
                continue
            v = [field._el(x) for x in vals]
            if not q.evaluate(v):
                return v
        return None
    if rng is None:
        rng = random.Random(0)
    for _ in range(trials):
        if isinstance(field, GF2k):
            v = [field.rand(rng) for _ in range(n)]
        else:
            v = [
                field.rand(rng, rng.randrange(max_deg + 1)) if rng.randrange(2) else z
                for _ in range(n)
            ]
        if any(v) and not q.evaluate(v):
            return v
    return None


def _split_off_plane(q: QuadraticForm, v: Sequence[Fe]) -> QuadraticForm:
    """Split a hyperbolic plane through the isotropic vector v (q nonsingular)."""
    raw = q.to_raw()
    field = q.field
    n = q.dim
    basis = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    w = None
    for cand in basis:
        if raw.polar(v, cand):
            w = cand
            break
    assert w is not None, "nonsingular form has no radical vectors"
    c = raw.polar(v, w)
    w = [a / c for a in w]
    rest = []
    for cand in basis:
        c1 = raw.polar(cand, w)
        c2 = raw.polar(cand, v)
        reduced = [a + c1 * b1 + c2 * b2 for a, b1, b2 in zip(cand, v, w)]
        rest.append(reduced)
    from .linalg import Span

    span = Span(rest, field)
    sub = [span.basis_vector(i) for i in range(span.dim)]
    assert span.dim == n - 2
    restricted = raw.restrict(sub)
    out, _ = normalize(restricted)
    return out


def _witt_cancel_pass(q: QuadraticForm) -> QuadraticForm:
    """Drop visibly split blocks and isometric block pairs (Witt-sound).

    A block with a zero coefficient or a solvable Artin-Schreier product is
    a hyperbolic plane; two blocks related by a square substitution cancel
    because b + b is hyperbolic in characteristic 2.
    """
    blocks = list(q.blocks)
    changed = True
    while changed:
        changed = False
        kept = []
        for b in blocks:
            a, c = b
            if not a or not c:
                changed = True
                continue
            r = solve_artin_schreier(a * c)
            if isinstance(r, Fe):
                changed = True
                continue
            kept.append(b)
        blocks = kept
        for i in range(len(blocks)):
            done = False
            for j in range(i + 1, len(blocks)):
                if block_square_witness(blocks[i], blocks[j]) is not None:
                    del blocks[j]
                    del blocks[i]
                    changed = True
                    done = True
                    break
            if done:
                break
    return form(q.field, blocks, [])


def is_hyperbolic(
    q: QuadraticForm,
    *,
    pfister: bool = False,
    seed: int = 0,
    trials: int = 200,
) -> Decision:
    """Hyperbolicity decision.

    Over GF(2^k) the Arf invariant decides.  Over GF(2^k)(t) a Witt-sound
    cancellation pass runs first, then certified hyperbolic planes are split
    greedily; a Pfister form with any isotropic vector is Decided(true); a
    fully anisotropy-certified residual gives Decided(false); otherwise
    Unknown.
    """
    if q.diag:
        raise SingularForm("hyperbolicity is for nonsingular forms")
    if isinstance(q.field, GF2k):
        return decided(arf_invariant(q) == 0)
    rng = random.Random(seed)
    if pfister:
        v = isotropic_vector(q, rng, trials)
        if v is not None:
            return decided(True, {"isotropic": [e.raw for e in v]})
    cur = _witt_cancel_pass(q)
    while cur.blocks:
        v = isotropic_vector(cur, rng, trials)
        if v is None:
            break
        cur = _split_off_plane(cur, v)
        cur = _witt_cancel_pass(cur)
    if not cur.blocks:
        return decided(True)
    cert = certify_anisotropic(cur)
    if cert.is_true:
        return decided(False, cert.witness)
    return unknown()


def certify_anisotropic(q: QuadraticForm) -> Decision:
    """Try to certify that q has no nontrivial zero (RatFunc, dim <= 4).

    Certificates: a 2-dimensional block whose Artin-Schreier obstruction is
    proven, and 4-dimensional norm-form multiples <a1,a2> x [1,c] with c a
    trace-one constant and odd relative valuation of a1*a2 at a degree-one
    place (including infinity).
    """
    field = q.field
    if not isinstance(field, RatFunc):
        return unknown()
    if q.diag and not q.blocks:
        # totally singular: anisotropic iff the entries are F^2-independent
        span = SquareSpan(field)
        for c in q.diag:
            if span.contains(c):
                return decided(False)
            span.add(c)
        return decided(True, {"f2_rank": span.rank})
    if q.diag:
        return unknown()
    if len(q.blocks) == 1:
        (a, b) = q.blocks[0]
        if not a or not b:
            return decided(False)
        r = solve_artin_schreier(a * b)
        if r is None:
            return decided(True, {"artin_schreier_obstruction": (a * b).raw})
        if isinstance(r, Fe):
            return decided(False)
        return unknown()
    if len(q.blocks) == 2:
        (a1, b1), (a2, b2) = q.blocks
        if not (a1 and b1 and a2 and b2):
            return decided(False)
        c = a1 * b1
        if a2 * b2 != c:
            return unknown()
        num, den = c.raw
        base = field.base
        if den != 1 or pdeg(num, base.k) != 0 or base.rtrace(num) != 1:
            return unknown()
        m = a1 * a2
        place = _odd_valuation_place(m, field)
        if place is not None:
            return decided(True, {"constant": num, "odd_place": place})
        return unknown()
    return unknown()


def _odd_valuation_place(m: Fe, field: RatFunc) -> Optional[str]:
    """A degree-one place where m has odd valuation, or None."""
    base = field.base
    num, den = m.raw
    if (pdeg(num, base.k) - pdeg(den, base.k)) % 2:
        return "infinity"
    for gamma in range(base.order):
        lin = (gamma | (1 << base.k), 1)  # the polynomial t + gamma
        v = _valuation_at(num, lin[0], base) - _valuation_at(den, lin[0], base)
        if v % 2:
            return f"{field.var}+{gamma:#x}"
    return None


def _valuation_at(p: int, lin: int, base: GF2k) -> int:
    if p == 0:
        return 0
    v = 0
    while True:
        quo, rem = pdivmod(p, lin, base)
        if rem != 0:
            return v
        p = quo
        v += 1


def block_square_witness(b1: Tuple[Fe, Fe], b2: Tuple[Fe, Fe]) -> Optional[Fe]:
    """A scalar lam with b2 = (lam^2*a, b/lam^2) for b1 = (a, b), or None.

    The substitution X -> X/lam, Y -> lam*Y realizes this isometry, so a
    returned witness certifies the two blocks are isometric.
    """
    (a1, c1), (a2, c2) = b1, b2
    field = a1.field
    split1 = not a1 or not c1
    split2 = not a2 or not c2
    if split1 or split2:
        # blocks with a zero coefficient are hyperbolic planes (shear X -> X+cY)
        return field.one if (split1 and split2) else None
    lam = (a2 / a1).sqrt()
    if lam is None:
        return None
    if c2 == c1 / (lam * lam):
        return lam
    return None


def blocks_match_upto_squares(q1: QuadraticForm, q2: QuadraticForm) -> Decision:
    """Greedy multiset matching of blocks by square-substitution witnesses.

    Decided(true) certifies isometry block by block; Decided(false) only
    means no pairing was found with these witnesses.
    """
    if q1.diag or q2.diag:
        raise SingularForm("block matching needs nonsingular forms")
    if len(q1.blocks) != len(q2.blocks) or q1.field is not q2.field:
        return decided(False)
    unused = list(range(len(q2.blocks)))
    pairing = []
    for i, b1 in enumerate(q1.blocks):
        hit = None
        for j in unused:
            lam = block_square_witness(b1, q2.blocks[j])
            if lam is not None:
                hit = (j, lam)
                break
        if hit is None:
            return decided(False, {"unmatched_block": i})
        unused.remove(hit[0])
        pairing.append((i, hit[0], hit[1].raw))
    return decided(True, {"pairing": pairing})


def is_anisotropic(q: QuadraticForm, *, seed: int = 0, trials: int = 200) -> Decision:
    """Anisotropy decision: exact over GF(2^k), certificate-based otherwise."""
    if isinstance(q.field, GF2k):
        w = witt_decompose_gf2k(q)
        aniso = q.dim == w.kernel.dim and all(bool(c) for c in w.kernel.diag)
        return decided(aniso)
    v = isotropic_vector(q, random.Random(seed), trials)
    if v is not None:
        return decided(False, {"isotropic": [e.raw for e in v]})
    return certify_anisotropic(q)
