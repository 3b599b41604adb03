"""Klein-group decompositions and Pfister invariant extraction.

A biquadratic etale subalgebra L of the symmetric space splits it into
L and three components W_1, W_2, W_3, pairwise orthogonal for the polar
form; the restricted forms are scalar multiples of a single Pfister form,
recovered here together with verification reports.  Every witness search is
seeded, falls back to exhaustive enumeration over tiny fields, and is logged
into the report for replay.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence, Tuple, Union

from .decision import Decision, UNKNOWN, Unknown, decided, unknown
from .errors import (
    DecompositionFailure,
    InvalidCandidate,
    NoAnisotropicVector,
    NotInComponent,
    NotInLi,
    UnsupportedDescriptor,
    WitnessNotFound,
)
from .fields import Fe, GF2k, QuadraticExtension
from .forms import (
    QuadraticForm,
    RawQuadraticForm,
    arf_invariant,
    bilinear_tensor,
    block11,
    blocks_match_upto_squares,
    direct_sum,
    form,
    is_hyperbolic,
    isotropic_vector,
    normalize,
    quasi_pfister,
    totally_singular_isometry,
    witt_equivalent_gf2k,
)
from .involutions import (
    Index2Symp,
    InvolutionSpace,
    Orthogonal,
    SplitSymp,
    UnitaryEtale,
    UnitaryExchange,
    _SympBase,
    det_orthogonal,
    pfaffian_form,
    reduced_pfaffian,
    second_trace_form,
    symmetric_space,
)
from .linalg import Span, charpoly, kernel
from .quaternions import nrd_form, q_conj

_S4 = list(itertools.permutations(range(4)))


@dataclass(frozen=True)
class Check:
    name: str
    result: Decision

    def as_json(self):
        witness = self.result.witness
        return {"name": self.name, "result": self.result.state, "witness": witness}


class BiquadraticEtale:
    """Embedded F[s1] x F[s2] with its Klein four-group action.

    The group elements act by s1 -> s1 + e1, s2 -> s2 + e2; with the labels
    alpha_1 = (1,0), alpha_2 = (0,1), alpha_3 = (1,1) the fixed algebras are
    L_1 = F[s2], L_2 = F[s1], L_3 = F[s1 + s2].
    """

    def __init__(self, desc, s1, s2, c1: Fe, c2: Fe):
        self.desc = desc
        self.s1 = s1
        self.s2 = s2
        self.c1 = c1
        self.c2 = c2
        one = desc.one_el()
        s12 = desc.el_mul(s1, s2)
        self.basis = [one, s1, s2, s12]
        self.span = Span([desc.to_vec(b) for b in self.basis], desc.field)

    def _l_coords(self, x) -> Optional[List[Fe]]:
        return self.span.input_coords(self.desc.to_vec(x))

    def alpha(self, i: int, x):
        """Image of x in L under the i-th Klein involution."""
        a = self._l_coords(x)
        if a is None:
            raise NotInLi("element outside the biquadratic subalgebra")
        a0, a1, a2, a3 = a
        f = self.desc.field
        if i == 1:
            b = (a0 + a1, a1, a2 + a3, a3)
        elif i == 2:
            b = (a0 + a2, a1 + a3, a2, a3)
        elif i == 3:
            b = (a0 + a1 + a2 + a3, a1 + a3, a2 + a3, a3)
        else:
            raise ValueError("Klein involutions are indexed 1..3")
        acc = self.desc.zero_el()
        for c, e in zip(b, self.basis):
            if c:
                acc = self.desc.el_add(acc, self.desc.el_scal(c, e))
        return acc

    def generator(self, i: int):
        """A generator g_i of the fixed algebra L_i with its constant c_i."""
        if i == 1:
            return self.s2, self.c2
        if i == 2:
            return self.s1, self.c1
        if i == 3:
            return self.desc.el_add(self.s1, self.s2), self.c1 + self.c2
        raise ValueError("fixed algebras are indexed 1..3")

    def li_ring(self, i: int) -> QuadraticExtension:
        _, c = self.generator(i)
        return QuadraticExtension(self.desc.field, c)

    def li_coords(self, i: int, ell) -> Optional[Tuple[Fe, Fe]]:
        g, _ = self.generator(i)
        span = Span(
            [self.desc.to_vec(self.desc.one_el()), self.desc.to_vec(g)], self.desc.field
        )
        coords = span.input_coords(self.desc.to_vec(ell))
        if coords is None:
            return None
        return coords[0], coords[1]

    def li_element(self, i: int, a: Fe, b: Fe):
        g, _ = self.generator(i)
        out = self.desc.el_scal(a, self.desc.one_el())
        if b:
            out = self.desc.el_add(out, self.desc.el_scal(b, g))
        return out


def _as_scalar(desc, x) -> Optional[Fe]:
    """The scalar c with x = c * 1, or None."""
    c = desc.scalar_part(x)
    candidate = desc.el_scal(c, desc.one_el())
    return c if desc.el_eq(x, candidate) else None


def validate_biquadratic(desc, s1, s2) -> BiquadraticEtale:
    """Validate generators of a biquadratic etale subalgebra."""
    space = symmetric_space(desc)
    for name, s in (("s1", s1), ("s2", s2)):
        if not space.contains(s):
            raise InvalidCandidate(f"{name} is not a symmetric element")
    if not desc.el_eq(desc.el_mul(s1, s2), desc.el_mul(s2, s1)):
        raise InvalidCandidate("generators do not commute")
    cs = []
    for name, s in (("s1", s1), ("s2", s2)):
        m = desc.el_add(desc.el_mul(s, s), s)
        c = _as_scalar(desc, m)
        if c is None:
            raise InvalidCandidate(f"{name}^2 + {name} is not a scalar")
        cs.append(c)
    cand = BiquadraticEtale(desc, s1, s2, cs[0], cs[1])
    if cand.span.dim != 4:
        raise InvalidCandidate("generators span less than four dimensions")
    # the Klein maps are order-2 automorphisms with alpha_1 alpha_2 = alpha_3
    for i in (1, 2, 3):
        for b in cand.basis:
            if not desc.el_eq(cand.alpha(i, cand.alpha(i, b)), b):
                raise InvalidCandidate("Klein action is not an involution")
    for b in cand.basis:
        if not desc.el_eq(cand.alpha(1, cand.alpha(2, b)), cand.alpha(3, b)):
            raise InvalidCandidate("Klein action composition is broken")
    return cand


def construct_biquadratic(desc, variant: int = 0) -> BiquadraticEtale:
    """The split biquadratic subalgebra from diagonal projections.

    The generators are idempotent sums s1 = p_i2 + p_i4, s2 = p_i3 + p_i4,
    where (i1..i4) is a permutation of the diagonal selected by ``variant``
    (used to re-run extractions with a different choice of L).
    """
    perm = _S4[variant % len(_S4)]
    ring = desc.entry_ring
    if isinstance(desc, UnitaryExchange):
        from .linalg import Mat

        def proj(i):
            rows = [[desc.field.zero] * 4 for _ in range(4)]
            rows[i][i] = desc.field.one
            m = Mat(desc.field, rows)
            return (m, m)

    else:
        from .linalg import Mat

        def proj(i):
            rows = [[ring.zero] * 4 for _ in range(4)]
            rows[i][i] = ring.one
            return Mat(ring, rows)

    s1 = desc.el_add(proj(perm[1]), proj(perm[3]))
    s2 = desc.el_add(proj(perm[2]), proj(perm[3]))
    return validate_biquadratic(desc, s1, s2)


# ---------------------------------------------------------------------------
# components
# ---------------------------------------------------------------------------


def li_trace_norm(L: BiquadraticEtale, i: int, ell) -> Tuple[Fe, Fe]:
    """Trace and norm of an element of the quadratic subalgebra L_i."""
    coords = L.li_coords(i, ell)
    if coords is None:
        raise NotInLi(f"element is not in L_{i}")
    a, b = coords
    _, c = L.generator(i)
    return b, a * a + a * b + c * b * b


_EXPECTED_DIMS = {
    "symplectic": (4, 8, 8, 8),
    "unitary": (4, 4, 4, 4),
    "orthogonal": (4, 2, 2, 2),
}


def _case_of(desc) -> str:
    if isinstance(desc, _SympBase):
        return "symplectic"
    if isinstance(desc, (UnitaryExchange, UnitaryEtale)):
        return "unitary"
    return "orthogonal"


@dataclass
class WComponents:
    """L and the three Klein components, with restricted forms."""

    desc: object
    L: BiquadraticEtale
    space: InvolutionSpace
    full_raw: RawQuadraticForm
    l_coords: List[List[Fe]]
    w_coords: List[List[List[Fe]]]  # [i][vector], i = 0..2 for W_1..W_3
    l_raw: RawQuadraticForm = None
    w_raw: List[RawQuadraticForm] = dc_field(default_factory=list)

    @property
    def dims(self) -> Tuple[int, int, int, int]:
        return (
            len(self.l_coords),
            len(self.w_coords[0]),
            len(self.w_coords[1]),
            len(self.w_coords[2]),
        )

    def w_element(self, i: int, coords: Sequence[Fe]):
        field = self.desc.field
        acc = [field.zero] * self.space.dim
        for c, vec in zip(coords, self.w_coords[i - 1]):
            if c:
                acc = [a + c * b for a, b in zip(acc, vec)]
        return self.space.element(acc)

    def w_space_coords(self, i: int, coords: Sequence[Fe]) -> List[Fe]:
        field = self.desc.field
        acc = [field.zero] * self.space.dim
        for c, vec in zip(coords, self.w_coords[i - 1]):
            if c:
                acc = [a + c * b for a, b in zip(acc, vec)]
        return acc

    def w_membership(self, i: int, x) -> Optional[List[Fe]]:
        sc = self.space.coords(x)
        if sc is None:
            return None
        return Span(self.w_coords[i - 1], self.desc.field).coords(sc)


def _explicit_index2_bases(desc: _SympBase) -> List[List]:
    """The closed-form W bases for the diagonal-projection L.

    With h = <1, u1, u2, u3> the component W_1 consists of the matrices with
    u1*x at (0,1), conj(x) at (1,0), u3*y at (2,3), u2*conj(y) at (3,2),
    and cyclic analogues for W_2, W_3; the restricted forms are then
    literally <u1, u2*u3> n_Q and its partners.
    """
    from .linalg import Mat

    Q = desc.quat
    u1, u2, u3 = desc.us
    units = (Q.one, Q.u, Q.v, Q.w)

    def element(pos_a, ca, pos_b, cb, q):
        rows = [[Q.zero] * 4 for _ in range(4)]
        rows[pos_a[0]][pos_a[1]] = q.scal(ca)
        rows[pos_b[0]][pos_b[1]] = q_conj(q).scal(cb)
        return Mat(Q, rows)

    one = desc.field.one
    out = []
    layouts = [
        (((0, 1), u1, (1, 0), one), ((2, 3), u3, (3, 2), u2)),
        (((0, 2), u2, (2, 0), one), ((1, 3), u3, (3, 1), u1)),
        (((0, 3), u3, (3, 0), one), ((1, 2), u2, (2, 1), u1)),
    ]
    for first, second in layouts:
        basis = [element(first[0], first[1], first[2], first[3], q) for q in units]
        basis += [element(second[0], second[1], second[2], second[3], q) for q in units]
        out.append(basis)
    return out


def galois_components(
    desc, L: Optional[BiquadraticEtale] = None, *, checks: bool = True
) -> WComponents:
    """Solve the component conditions x*s = alpha_i(s)*x inside Sym.

    For the symplectic matrix descriptors with the default diagonal L the
    basis of each W_i is replaced by the closed-form one (same span), so the
    restricted forms match the block formulas literally.
    """
    if L is None:
        L = construct_biquadratic(desc)
    space = symmetric_space(desc)
    field = desc.field
    case = _case_of(desc)
    full_raw = pfaffian_form(desc) if case == "symplectic" else second_trace_form(desc)

    l_coords = []
    for b in L.basis:
        c = space.coords(b)
        if c is None:
            raise DecompositionFailure("L is not inside the symmetric space")
        l_coords.append(c)

    gens = [L.s1, L.s2]
    w_coords: List[List[List[Fe]]] = []
    for i in (1, 2, 3):
        rows = []
        for s in gens:
            a_s = L.alpha(i, s)
            cols = []
            for b in space.basis:
                cond = desc.el_add(desc.el_mul(b, s), desc.el_mul(a_s, b))
                cols.append(desc.to_vec(cond))
            for r in range(desc.ambient_dim):
                rows.append([cols[j][r] for j in range(space.dim)])
        w_coords.append(kernel(rows, field))

    comps = WComponents(desc, L, space, full_raw, l_coords, w_coords)

    default_l = _is_default_l(desc, L)
    if isinstance(desc, _SympBase) and default_l:
        explicit = _explicit_index2_bases(desc)
        replaced = []
        for i, basis in enumerate(explicit, start=1):
            span = Span(w_coords[i - 1], field)
            coords = []
            for x in basis:
                sc = space.coords(x)
                if sc is None or span.coords(sc) is None:
                    raise DecompositionFailure(
                        "closed-form basis escapes the solved component"
                    )
                coords.append(sc)
            if Span(coords, field).dim != len(basis):
                raise DecompositionFailure("closed-form basis is not independent")
            replaced.append(coords)
        comps.w_coords = replaced

    expected = _EXPECTED_DIMS[case]
    if comps.dims != expected:
        raise DecompositionFailure(f"component dimensions {comps.dims}, expected {expected}")

    comps.l_raw = full_raw.restrict(comps.l_coords)
    comps.w_raw = [full_raw.restrict(comps.w_coords[i]) for i in range(3)]

    if checks:
        _component_checks(comps)
    return comps


def _is_default_l(desc, L: BiquadraticEtale) -> bool:
    if isinstance(desc, UnitaryExchange):
        return False
    ring = desc.entry_ring
    from .linalg import Mat

    rows1 = [[ring.zero] * 4 for _ in range(4)]
    rows1[1][1] = ring.one
    rows1[3][3] = ring.one
    rows2 = [[ring.zero] * 4 for _ in range(4)]
    rows2[2][2] = ring.one
    rows2[3][3] = ring.one
    return desc.el_eq(L.s1, Mat(ring, rows1)) and desc.el_eq(L.s2, Mat(ring, rows2))


def _component_checks(comps: WComponents) -> None:
    desc = comps.desc
    field = desc.field
    case = _case_of(desc)
    full = comps.full_raw
    # pairwise polar orthogonality
    groups = [comps.l_coords] + comps.w_coords
    for gi in range(4):
        for gj in range(gi + 1, 4):
            for v in groups[gi]:
                for w in groups[gj]:
                    if full.polar(v, w):
                        raise DecompositionFailure("components are not orthogonal")
    # squaring lands in L_i with the second coefficient equal to T_i(x^2)
    for i in (1, 2, 3):
        for coords in comps.w_coords[i - 1]:
            x = comps.space.element(coords)
            x2 = desc.el_mul(x, x)
            li = comps.L.li_coords(i, x2)
            if li is None:
                raise DecompositionFailure("a component square escapes L_i")
            t, _ = li_trace_norm(comps.L, i, x2)
            if full.evaluate(coords) != t:
                raise DecompositionFailure("second coefficient differs from T_i(x^2)")
            if case == "symplectic":
                if reduced_pfaffian(desc, x).trace:
                    raise DecompositionFailure("first Pfaffian coefficient nonzero on W_i")
    # q_i nonsingular over L_i (rank >= 2 cases)
    if case != "orthogonal":
        for i in (1, 2, 3):
            _check_qi_nonsingular(comps, i)


def _li_module_basis(comps: WComponents, i: int) -> List[List[Fe]]:
    """An L_i-module basis of W_i, as space-coordinate vectors."""
    desc = comps.desc
    field = desc.field
    g, _ = comps.L.generator(i)
    vectors = comps.w_coords[i - 1]

    def g_image(v):
        return comps.space.coords(desc.el_mul(comps.space.element(v), g))

    candidates = list(vectors)
    for a in range(len(vectors)):
        for b in range(a + 1, len(vectors)):
            candidates.append([x + y for x, y in zip(vectors[a], vectors[b])])
    chosen: List[List[Fe]] = []
    acc: List[List[Fe]] = []
    for v in candidates:
        if 2 * len(chosen) == len(vectors):
            break
        trial = acc + [v, g_image(v)]
        if Span(trial, field).dim == len(trial):
            chosen.append(v)
            acc = trial
    if 2 * len(chosen) != len(vectors):
        raise DecompositionFailure(f"W_{i} is not free over L_{i}")
    return chosen


def _check_qi_nonsingular(comps: WComponents, i: int) -> None:
    desc = comps.desc
    ring = comps.L.li_ring(i)
    gens = _li_module_basis(comps, i)
    elems = [comps.space.element(v) for v in gens]
    rows = []
    for x in elems:
        row = []
        for y in elems:
            z = desc.el_add(desc.el_mul(x, y), desc.el_mul(y, x))
            co = comps.L.li_coords(i, z)
            if co is None:
                raise DecompositionFailure("polar of q_i escapes L_i")
            row.append(ring.el(co[0], co[1]))
        rows.append(row)
    from .linalg import Mat

    det = charpoly(Mat(ring, rows))[0]
    if not det.norm():
        raise DecompositionFailure(f"q_{i} is singular over L_{i}")


def star(desc, x1, x2, components: Optional[WComponents] = None):
    """The composition x1*x2 = x1 x2 + x2 x1 from W_1 x W_2 into W_3."""
    comps = components if components is not None else default_components(desc)
    if comps.w_membership(1, x1) is None:
        raise NotInComponent("first argument is not in W_1")
    if comps.w_membership(2, x2) is None:
        raise NotInComponent("second argument is not in W_2")
    out = desc.el_add(desc.el_mul(x1, x2), desc.el_mul(x2, x1))
    if comps.w_membership(3, out) is None:
        raise NotInComponent("composition escaped W_3")
    return out


def default_components(desc) -> WComponents:
    comps = getattr(desc, "_components", None)
    if comps is None:
        comps = galois_components(desc)
        desc._components = comps
    return comps


# ---------------------------------------------------------------------------
# invariant extraction
# ---------------------------------------------------------------------------


@dataclass
class SympPfisterInvariants:
    a1: Fe
    a2: Fe
    x1_coords: List[Fe]  # component coordinates of the W_1 witness
    x2_coords: List[Fe]
    pi3: QuadraticForm
    pi5: QuadraticForm
    checks: List[Check]
    components: WComponents

    @property
    def all_true(self) -> bool:
        return all(c.result.is_true for c in self.checks)


@dataclass
class Deg4Invariants:
    case: str  # "unitary" | "orthogonal"
    a1: Fe
    a2: Fe
    checks: List[Check]
    components: WComponents
    pi2: Optional[QuadraticForm] = None
    pi4: Optional[QuadraticForm] = None
    pi1: Optional[QuadraticForm] = None
    phi: Optional[QuadraticForm] = None
    pi3: Optional[QuadraticForm] = None
    det_class: Optional[Fe] = None


def _anisotropic_coords(
    raw: RawQuadraticForm, rng: random.Random, *, budget: int = 400
) -> List[Fe]:
    """Coordinates of a vector with nonzero value: basis first, then pairs,
    then exhaustive enumeration over tiny fields, then seeded random."""
    field = raw.field
    n = raw.dim
    units = []
    for i in range(n):
        v = [field.zero] * n
        v[i] = field.one
        units.append(v)
        if raw.evaluate(v):
            return v
    for i in range(n):
        for j in range(i + 1, n):
            v = [a + b for a, b in zip(units[i], units[j])]
            if raw.evaluate(v):
                return v
    if isinstance(field, GF2k) and field.order**n <= 1 << 16:
        for vals in itertools.product(range(field.order), repeat=n):
            v = [field._el(x) for x in vals]
            if raw.evaluate(v):
                return v
        raise NoAnisotropicVector("form is identically zero")
    for _ in range(budget):
        v = [field.rand(rng) for _ in range(n)]
        if raw.evaluate(v):
            return v
    raise NoAnisotropicVector("seeded search exhausted")


def _restriction_certificate_11_00(comps: WComponents) -> Decision:
    """Certify that the restriction to L is [1,1] + [0,0].

    Uses the explicit basis: with T_i(l_i) = 1 the values at l_1, l_2,
    l_1 + l_2 and their translates by 1 are all 1, the plane (l_1, l_2) is
    the form X^2 + XY + Y^2, and its orthogonal complement in L contains the
    isotropic vector 1, so it is a split plane.
    """
    desc = comps.desc
    field = desc.field
    space = comps.space
    full = comps.full_raw
    one = field.one
    l1, _ = comps.L.generator(1)
    l2, _ = comps.L.generator(2)
    v1 = space.coords(l1)
    v2 = space.coords(l2)
    vone = space.coords(desc.one_el())
    conds = []
    vsum = [a + b for a, b in zip(v1, v2)]
    for v in (v1, v2, vsum):
        vv = [a + b for a, b in zip(v, vone)]
        conds.append(full.evaluate(v) == one)
        conds.append(full.evaluate(vv) == one)
    conds.append(not full.evaluate(vone))
    conds.append(full.polar(v1, v2) == one)
    conds.append(not full.polar(vone, v1))
    conds.append(not full.polar(vone, v2))
    # complement of the (l1, l2) plane inside L meets 1; it splits because
    # the plane is nonsingular and 1 is isotropic in it
    v4 = comps.l_coords[3]
    w = [
        a + full.polar(v4, v2) * b1 + full.polar(v4, v1) * b2
        for a, b1, b2 in zip(v4, v1, v2)
    ]
    # the complement of the (l1, l2) plane is a nondegenerate plane spanned
    # by 1 and w; pairing with the isotropic 1 makes it a split block
    conds.append(bool(full.polar(vone, w)))
    return decided(all(conds), {"values": [full.evaluate(v).raw for v in (v1, v2, vsum)]})


def _hyperbolicity_check(q: QuadraticForm, *, pfister: bool, seed: int) -> Decision:
    if isinstance(q.field, GF2k):
        return is_hyperbolic(q)
    return is_hyperbolic(q, pfister=pfister, seed=seed)


def extract_symplectic_invariants(
    desc, components: Optional[WComponents] = None, *, seed: int = 0
) -> SympPfisterInvariants:
    """Witnesses, the 3-fold and 5-fold Pfister forms, and the report."""
    if not isinstance(desc, _SympBase):
        raise UnsupportedDescriptor("symplectic descriptor required")
    comps = components if components is not None else default_components(desc)
    field = desc.field
    rng = random.Random(seed)
    x1 = _anisotropic_coords(comps.w_raw[0], rng)
    x2 = _anisotropic_coords(comps.w_raw[1], rng)
    a1 = comps.w_raw[0].evaluate(x1)
    a2 = comps.w_raw[1].evaluate(x2)
    pi3, _ = normalize(comps.w_raw[0].scaled(a1))
    pi5 = bilinear_tensor([field.one, a1, a2, a1 * a2], pi3)
    checks: List[Check] = []

    full_q, _ = normalize(comps.full_raw)
    total = direct_sum(full_q, block11(field), pi3, pi5)
    checks.append(
        Check("srp_plus_11_plus_pi3_plus_pi5_hyperbolic",
              _hyperbolicity_check(total, pfister=False, seed=seed))
    )

    q2, _ = normalize(comps.w_raw[1].scaled(a2))
    if isinstance(field, GF2k):
        checks.append(Check("w2_scaled_matches_pi3", decided(witt_equivalent_gf2k(q2, pi3))))
    else:
        checks.append(Check("w2_scaled_matches_pi3", blocks_match_upto_squares(q2, pi3)))

    x1el = comps.w_element(1, x1)
    x2el = comps.w_element(2, x2)
    sprod = star(desc, x1el, x2el, comps)
    sc = comps.space.coords(sprod)
    checks.append(
        Check(
            "w3_represents_a1a2",
            decided(comps.full_raw.evaluate(sc) == a1 * a2,
                    {"x1": [c.raw for c in x1], "x2": [c.raw for c in x2]}),
        )
    )

    checks.append(Check("l_restriction_is_11_00", _restriction_certificate_11_00(comps)))

    if isinstance(field, GF2k):
        checks.append(Check("pi3_arf_zero", decided(arf_invariant(pi3) == 0)))
    if isinstance(desc, _SympBase) and _is_default_l(desc, comps.L):
        u1, u2, u3 = desc.us
        closed_pi3 = bilinear_tensor([field.one, u1 * u2 * u3], nrd_form(desc.quat))
        checks.append(
            Check("pi3_matches_closed_form", blocks_match_upto_squares(pi3, closed_pi3))
        )

    return SympPfisterInvariants(a1, a2, x1, x2, pi3, pi5, checks, comps)


# ---------------------------------------------------------------------------
# decomposability and square-central witnesses
# ---------------------------------------------------------------------------


def _isotropic_w_coords(
    raw: RawQuadraticForm, rng: random.Random, *, trials: int = 400
) -> Optional[List[Fe]]:
    """A nonzero isotropic vector of a restricted form, or None."""
    for v in _isotropic_w_stream(raw, rng, limit=trials):
        return v
    return None


def _isotropic_w_stream(raw: RawQuadraticForm, rng: random.Random, *, limit: int):
    """Yield nonzero isotropic vectors of a restricted form (bounded).

    Seeded random candidates come first (they avoid the degenerate corners a
    lexicographic sweep starts with); exhaustive enumeration over tiny
    fields guarantees completeness.
    """
    field = raw.field
    n = raw.dim
    yielded = 0
    if isinstance(field, GF2k) and field.order**n <= 1 << 16:
        seen = set()
        for _ in range(150):
            vals = tuple(rng.randrange(field.order) for _ in range(n))
            if not any(vals) or vals in seen:
                continue
            seen.add(vals)
            v = [field._el(x) for x in vals]
            if not raw.evaluate(v):
                yield v
                yielded += 1
                if yielded >= limit:
                    return
        for vals in itertools.product(range(field.order), repeat=n):
            if not any(vals) or vals in seen:
                continue
            v = [field._el(x) for x in vals]
            if not raw.evaluate(v):
                yield v
                yielded += 1
                if yielded >= limit:
                    return
        return
    q, t = normalize(raw)
    v = isotropic_vector(q, rng, limit)
    if v is not None:
        yield [sum((t[i][j] * v[j] for j in range(n)), field.zero) for i in range(n)]
        yielded += 1
    for _ in range(limit):
        w = [field.rand(rng) for _ in range(n)]
        if any(w) and not raw.evaluate(w):
            yield w
            yielded += 1
            if yielded >= limit:
                return


@dataclass
class DecomposabilityReport:
    direction: str
    checks: List[Check]
    witness_coords: Optional[List[Fe]] = None

    @property
    def all_true(self) -> bool:
        return all(c.result.is_true for c in self.checks)


def _triple_generators(desc: SplitSymp):
    """Generators of three canonically-involuted quaternion factors.

    Starting from the block presentation Q x M2 x M2 with conjugation on Q
    and transpose on the matrix factors, the two orthogonal factors are
    rebalanced pairwise against a canonical one, leaving i-generators
    i1, i1+i2, i1+i3 and j-generators j1*j2*j3, j2, j3.
    """
    from .linalg import Mat

    Q = desc.quat
    field = desc.field
    z, o = Q.zero, Q.one

    def mat(entries):
        rows = [[z] * 4 for _ in range(4)]
        for (i, j, q) in entries:
            rows[i][j] = q
        return Mat(Q, rows)

    i1 = mat([(k, k, Q.u) for k in range(4)])
    j1 = mat([(k, k, Q.v) for k in range(4)])
    i2 = mat([(2, 2, o), (3, 3, o)])  # coarse diag(0, 1)
    j2 = mat([(0, 2, o), (1, 3, o), (2, 0, o), (3, 1, o)])  # coarse swap
    i3 = mat([(1, 1, o), (3, 3, o)])  # fine diag(0, 1)
    j3 = mat([(0, 1, o), (1, 0, o), (2, 3, o), (3, 2, o)])  # fine swap
    rebalanced = [
        (i1, desc.el_mul(j1, desc.el_mul(j2, j3))),
        (desc.el_add(i1, i2), j2),
        (desc.el_add(i1, i3), j3),
    ]
    return (i2, i3), rebalanced


def check_pi3_decomposability(
    desc, direction: str, *, seed: int = 0
) -> DecomposabilityReport:
    """Link hyperbolicity of the 3-fold form to quaternion-triple structure.

    direction "from_triple" (split case only): build L from the triple's
    i-generators and exhibit a j-witness with square 1 in the component that
    moves both of them, proving the restricted form isotropic.
    direction "to_triple": search W_1 for a noncentral element with central
    square (with the lambda-correction step when the first square vanishes).
    """
    checks: List[Check] = []
    if direction == "from_triple":
        if not isinstance(desc, SplitSymp):
            raise UnsupportedDescriptor("the intrinsic triple exists for the split case")
        (i2, i3), triple = _triple_generators(desc)
        one = desc.one_el()
        for k, (ik, jk) in enumerate(triple, start=1):
            sq = _as_scalar(desc, desc.el_mul(jk, jk))
            checks.append(Check(f"j{k}_square_central", decided(sq is not None and bool(sq))))
            lhs = desc.el_mul(jk, ik)
            rhs = desc.el_mul(desc.el_add(ik, one), jk)
            checks.append(Check(f"j{k}_twists_i{k}", decided(desc.el_eq(lhs, rhs))))
        for a in range(3):
            for b in range(3):
                if a == b:
                    continue
                ia, ja = triple[a]
                ib, jb = triple[b]
                comm_ii = desc.el_eq(desc.el_mul(ia, ib), desc.el_mul(ib, ia))
                comm_ij = desc.el_eq(desc.el_mul(ia, jb), desc.el_mul(jb, ia))
                comm_jj = desc.el_eq(desc.el_mul(ja, jb), desc.el_mul(jb, ja))
                if not (comm_ii and comm_ij and comm_jj):
                    checks.append(Check(f"factors_{a+1}_{b+1}_commute", decided(False)))
        # L generated by the pairwise sums of the i-generators is the
        # diagonal algebra: s1 = i3, s2 = i2 in the default labelling
        L = validate_biquadratic(desc, i3, i2)
        comps = galois_components(desc, L)
        witness = triple[0][1]
        wc = comps.w_membership(3, witness)
        checks.append(Check("j1_in_moving_component", decided(wc is not None)))
        sq = _as_scalar(desc, desc.el_mul(witness, witness))
        checks.append(Check("j1_square_is_one", decided(sq == desc.field.one)))
        sc = comps.space.coords(witness)
        srp_val = comps.full_raw.evaluate(sc)
        checks.append(Check("srp_vanishes_on_j1", decided(not srp_val)))
        inv = extract_symplectic_invariants(desc, comps, seed=seed)
        dec = _hyperbolicity_check(inv.pi3, pfister=True, seed=seed)
        checks.append(Check("pi3_hyperbolic", dec))
        return DecomposabilityReport("from_triple", checks, wc)

    if direction != "to_triple":
        raise ValueError("direction must be from_triple or to_triple")
    if not isinstance(desc, _SympBase):
        raise UnsupportedDescriptor("to_triple needs a symplectic descriptor")
    comps = default_components(desc)
    field = desc.field
    rng = random.Random(seed)
    witness = None
    for iso in _isotropic_w_stream(comps.w_raw[0], rng, limit=3000):
        x = comps.w_element(1, iso)
        xsq = _as_scalar(desc, desc.el_mul(x, x))
        if xsq is None:
            raise DecompositionFailure("isotropic witness has non-central square")
        if xsq:
            witness = x
            break
        # x^2 = 0 needs both etale components of x nonzero to correct;
        # otherwise move on to the next isotropic vector
        corrected = _square_correction(desc, comps, x, rng)
        if corrected is not None:
            witness = corrected
            break
    if witness is None:
        raise WitnessNotFound("no usable isotropic vector found in W_1 within budget")
    xsq = _as_scalar(desc, desc.el_mul(witness, witness))
    checks.append(Check("witness_square_central_nonzero", decided(bool(xsq), {"square": xsq.raw})))
    checks.append(Check("witness_noncentral", decided(_as_scalar(desc, witness) is None)))
    sc = comps.space.coords(witness)
    return DecomposabilityReport("to_triple", checks, sc)


def _square_correction(desc, comps: WComponents, x, rng: random.Random):
    """Replace an x in W_1 with x^2 = 0 by x*lam + y with square 1, or None.

    Uses a y in W_1 with x y + y x invertible in L_1 and
    lam = (y^2 + 1)(x y + y x)^-1; such a y exists when neither etale
    component of x vanishes (the squaring form is nonsingular).
    """
    field = desc.field
    ring = comps.L.li_ring(1)
    one = desc.one_el()
    n = len(comps.w_coords[0])
    candidates = [comps.w_element(1, v) for v in _unit_vectors(field, n)]
    candidates += [
        comps.w_element(1, [field.rand(rng) for _ in range(n)]) for _ in range(60)
    ]
    for y in candidates:
        z = desc.el_add(desc.el_mul(x, y), desc.el_mul(y, x))
        co = comps.L.li_coords(1, z)
        if co is None:
            continue
        zl = ring.el(co[0], co[1])
        if not zl.norm():
            continue
        ysq = desc.el_mul(y, y)
        yco = comps.L.li_coords(1, desc.el_add(ysq, one))
        lam = ring.el(yco[0], yco[1]) * zl.inv()
        lam_el = comps.L.li_element(1, lam.x, lam.y)
        cand = desc.el_add(desc.el_mul(x, lam_el), y)
        if desc.el_eq(desc.el_mul(cand, cand), one):
            return cand
    return None


def _unit_vectors(field, n: int):
    out = []
    for i in range(n):
        v = [field.zero] * n
        v[i] = field.one
        out.append(v)
    return out


def find_square_central(
    desc, components: Optional[WComponents] = None, *, seed: int = 0
) -> Union[object, None, Unknown]:
    """A noncentral symmetrized element with central square, when one exists.

    Follows the constructive argument: pick y in W_1 + W_2 with second
    coefficient 1, pass to the biquadratic algebra generated by y^2 and the
    third fixed subalgebra, and combine a W'_2 vector with its composition
    with y.  Returns UNKNOWN only on budget exhaustion, never None for the
    supported fields (the 5-fold form is hyperbolic over all of them).
    """
    if not isinstance(desc, _SympBase):
        raise UnsupportedDescriptor("symplectic descriptor required")
    comps = components if components is not None else default_components(desc)
    field = desc.field
    rng = random.Random(seed)
    y_coords = _coords_with_value_one(comps, rng)
    if y_coords is None:
        return UNKNOWN
    y = comps.space.element(y_coords)
    pf = reduced_pfaffian(desc, y)
    if pf.trace or pf.linear or pf.second != field.one:
        raise DecompositionFailure("witness does not satisfy the Pfaffian constraints")
    ysq = desc.el_mul(y, y)
    y4 = desc.el_mul(ysq, ysq)
    if not desc.el_eq(desc.el_add(y4, ysq), desc.el_scal(pf.norm, desc.one_el())):
        raise DecompositionFailure("y^4 + y^2 is not the Pfaffian constant")
    if _as_scalar(desc, ysq) is not None:
        raise DecompositionFailure("y^2 central contradicts the unit second coefficient")
    g3, _ = comps.L.generator(3)
    lprime = validate_biquadratic(desc, g3, ysq)
    comps2 = galois_components(desc, lprime)
    if comps2.w_membership(1, y) is None:
        raise DecompositionFailure("y escaped the first component of the new algebra")
    w2 = comps2.w_element(2, _unit_vectors(field, len(comps2.w_coords[1]))[0])
    z = desc.el_add(w2, star(desc, y, w2, comps2))
    zc = comps2.space.coords(z)
    if comps2.full_raw.evaluate(zc):
        raise DecompositionFailure("z is not isotropic")
    pfz = reduced_pfaffian(desc, z)
    if pfz.trace or pfz.linear or pfz.second:
        raise DecompositionFailure("z does not satisfy the Pfaffian constraints")
    zsq = desc.el_mul(z, z)
    z4 = desc.el_mul(zsq, zsq)
    if not desc.el_eq(z4, desc.el_scal(pfz.norm, desc.one_el())):
        raise DecompositionFailure("z^4 is not the Pfaffian constant")
    x = z if _as_scalar(desc, zsq) is not None else zsq
    if _as_scalar(desc, x) is not None:
        raise DecompositionFailure("candidate is central")
    if _as_scalar(desc, desc.el_mul(x, x)) is None:
        raise DecompositionFailure("candidate square is not central")
    return x


def _coords_with_value_one(comps: WComponents, rng: random.Random, *, trials: int = 500):
    """Space coordinates of y in W_1 + W_2 with full form value 1."""
    desc = comps.desc
    field = desc.field
    one = field.one
    n1 = len(comps.w_coords[0])
    n2 = len(comps.w_coords[1])

    def assemble(c1, c2):
        acc = [field.zero] * comps.space.dim
        for c, vec in zip(c1, comps.w_coords[0]):
            if c:
                acc = [a + c * b for a, b in zip(acc, vec)]
        for c, vec in zip(c2, comps.w_coords[1]):
            if c:
                acc = [a + c * b for a, b in zip(acc, vec)]
        return acc

    # scale a single anisotropic vector when its value is a square
    for unit in _unit_vectors(field, n1):
        val = comps.w_raw[0].evaluate(unit)
        if val:
            r = (one / val).sqrt()
            if r is not None:
                return assemble([r * c for c in unit], [field.zero] * n2)
    for _ in range(trials):
        c1 = [field.rand(rng) for _ in range(n1)]
        c2 = [field.rand(rng) for _ in range(n2)]
        v = assemble(c1, c2)
        if comps.full_raw.evaluate(v) == one:
            return v
    return None


def extract_unitary_invariants(
    desc, components: Optional[WComponents] = None, *, seed: int = 0
) -> Deg4Invariants:
    """The 2-fold and 4-fold Pfister forms of a degree-4 unitary involution."""
    if not isinstance(desc, (UnitaryExchange, UnitaryEtale)):
        raise UnsupportedDescriptor("unitary descriptor required")
    comps = components if components is not None else default_components(desc)
    field = desc.field
    rng = random.Random(seed)
    x1 = _anisotropic_coords(comps.w_raw[0], rng)
    x2 = _anisotropic_coords(comps.w_raw[1], rng)
    a1 = comps.w_raw[0].evaluate(x1)
    a2 = comps.w_raw[1].evaluate(x2)
    pi2, _ = normalize(comps.w_raw[0].scaled(a1))
    pi4 = bilinear_tensor([field.one, a1, a2, a1 * a2], pi2)
    checks: List[Check] = []

    full_q, _ = normalize(comps.full_raw)
    total = direct_sum(full_q, block11(field), pi2, pi4)
    checks.append(
        Check("srd_plus_11_plus_pi2_plus_pi4_hyperbolic",
              _hyperbolicity_check(total, pfister=False, seed=seed))
    )
    q2, _ = normalize(comps.w_raw[1].scaled(a2))
    if isinstance(field, GF2k):
        checks.append(Check("w2_scaled_matches_pi2", decided(witt_equivalent_gf2k(q2, pi2))))
    else:
        checks.append(Check("w2_scaled_matches_pi2", blocks_match_upto_squares(q2, pi2)))
    x1el = comps.w_element(1, x1)
    x2el = comps.w_element(2, x2)
    sprod = star(desc, x1el, x2el, comps)
    sc = comps.space.coords(sprod)
    checks.append(
        Check("w3_represents_a1a2", decided(comps.full_raw.evaluate(sc) == a1 * a2))
    )
    checks.append(Check("l_restriction_is_11_00", _restriction_certificate_11_00(comps)))
    if isinstance(field, GF2k):
        checks.append(Check("pi2_arf_zero", decided(arf_invariant(pi2) == 0)))
    return Deg4Invariants("unitary", a1, a2, checks, comps, pi2=pi2, pi4=pi4)


def _diag_values(raw: RawQuadraticForm, vectors: Sequence[Sequence[Fe]]) -> List[Fe]:
    return [raw.evaluate(v) for v in vectors]


def extract_orthogonal_invariants(
    desc, components: Optional[WComponents] = None, *, seed: int = 0
) -> Deg4Invariants:
    """Quasi-Pfister data of a degree-4 orthogonal involution.

    The restriction of the second trace form to each rank-1 component is
    totally singular; with delta the determinant class, phi is the 6-dim
    radical restriction and pi'_3 = <1, delta> + phi is the quasi 3-fold
    form <1, a1, a2, a1a2> x <1, delta>.
    """
    if not isinstance(desc, Orthogonal):
        raise UnsupportedDescriptor("orthogonal descriptor required")
    comps = components if components is not None else default_components(desc)
    field = desc.field
    rng = random.Random(seed)
    checks: List[Check] = []
    full = comps.full_raw

    # the polar radical is exactly W_1 + W_2 + W_3
    bmat = [list(r) for r in full.polar_matrix()]
    rad = kernel(bmat, field)
    w_all = [v for i in range(3) for v in comps.w_coords[i]]
    rad_span = Span(rad, field)
    same = rad_span.dim == 6 and all(rad_span.coords(v) is not None for v in w_all)
    checks.append(Check("radical_is_w1_w2_w3", decided(same, {"radical_dim": rad_span.dim})))

    # witnesses with nonzero second-trace value on each component
    a = []
    for i in (1, 2, 3):
        w = _anisotropic_coords(comps.w_raw[i - 1], rng)
        a.append(comps.w_raw[i - 1].evaluate(w))
    a1, a2, a3 = a
    checks.append(Check("w3_value_is_product", decided(_square_class_eq(a3, a1 * a2))))

    delta = det_orthogonal(desc, seed=seed)
    pi1 = form(field, [], [field.one, delta])
    phi = form(field, [], [a1, a1 * delta, a2, a2 * delta, a1 * a2, a1 * a2 * delta])
    pi3 = form(field, [], list(pi1.diag) + list(phi.diag))

    # regular generators: exhaustively over small fields, else seeded
    joint = []
    for i in (1, 2, 3):
        reg = _regular_generator(comps, i, rng)
        if reg is None:
            checks.append(Check(f"w{i}_regular_generator", unknown("no generator in budget")))
            continue
        wc, det = reg
        checks.append(
            Check(
                f"w{i}_regular_generator",
                decided(_square_class_eq(det, delta), {"nrd": det.raw}),
            )
        )
        sval = comps.w_raw[i - 1].evaluate(wc)
        joint.append((i, wc, det, sval))

    for i, wc, det, sval in joint:
        if not sval:
            checks.append(Check(f"w{i}_joint_witness", unknown("regular generator has value 0")))
            continue
        # <Srd(w)> <1, Nrd(w)> matches the restriction as totally singular forms
        target = form(field, [], [sval, sval * det])
        actual = form(field, [], _diag_values(comps.w_raw[i - 1], _unit_vectors(field, 2)))
        checks.append(Check(f"w{i}_joint_witness", totally_singular_isometry(actual, target)))

    # star multiplicativity of the second trace on W_1 x W_2
    ok = True
    for _ in range(100):
        c1 = [field.rand(rng) for _ in range(2)]
        c2 = [field.rand(rng) for _ in range(2)]
        w1 = comps.w_element(1, c1)
        w2 = comps.w_element(2, c2)
        prod = desc.el_add(desc.el_mul(w1, w2), desc.el_mul(w2, w1))
        pc = comps.space.coords(prod)
        v1 = comps.w_raw[0].evaluate(c1)
        v2 = comps.w_raw[1].evaluate(c2)
        if full.evaluate(pc) != v1 * v2:
            ok = False
            break
    checks.append(Check("star_multiplicativity", decided(ok)))

    rad_values = form(field, [], _diag_values(full, w_all))
    checks.append(Check("phi_equals_radical_restriction", totally_singular_isometry(phi, rad_values)))

    quasi = quasi_pfister([a1, a2, delta])
    checks.append(Check("pi3_is_quasi_pfister_of_pi1", totally_singular_isometry(pi3, quasi)))
    checks.append(Check("l_restriction_is_11_00", _restriction_certificate_11_00(comps)))

    return Deg4Invariants(
        "orthogonal", a1, a2, checks, comps, pi1=pi1, phi=phi, pi3=pi3, det_class=delta
    )


def _square_class_eq(x: Fe, y: Fe) -> bool:
    if not x or not y:
        return bool(x) == bool(y)
    return (x / y).is_square()


def _regular_generator(comps: WComponents, i: int, rng: random.Random):
    """Coordinates of w in W_i with Nrd(w) != 0, with its determinant.

    Prefers a witness with a nonzero second-trace value as well (the joint
    condition in the diagonalization argument); falls back to any regular
    one, and to None when the exhaustive scan finds nothing.
    """
    desc = comps.desc
    field = desc.field
    n = len(comps.w_coords[i - 1])
    candidates = list(_unit_vectors(field, n))
    if isinstance(field, GF2k) and field.order**n <= 1 << 12:
        candidates = [
            [field._el(x) for x in vals]
            for vals in itertools.product(range(field.order), repeat=n)
            if any(vals)
        ]
    else:
        for a in range(n):
            for b in range(a + 1, n):
                candidates.append(
                    [x + y for x, y in zip(candidates[a], candidates[b])]
                )
        candidates.extend(
            [field.rand(rng) for _ in range(n)] for _ in range(200)
        )
    fallback = None
    for wc in candidates:
        w = comps.w_element(i, wc)
        det = charpoly(w)[0]
        if det:
            if comps.w_raw[i - 1].evaluate(wc):
                return wc, det
            if fallback is None:
                fallback = (wc, det)
    return fallback
