"""Seeded property batteries behind the verify command.

Each property runs a deterministic number of trials from a seed derived per
property, so the same (seed, trials) pair reproduces the same outcome; trial
seeds are derived by index, which keeps aggregation deterministic if the
trials are ever sharded.
"""

from __future__ import annotations

import random
import zlib
from dataclasses import dataclass
from typing import Callable, Dict, List

from .errors import CharformError
from .fields import Fe, Field, GF2k, absolute_trace, frobenius_sqrt, solve_artin_schreier
from .forms import (
    QuadraticForm,
    RawQuadraticForm,
    arf_invariant,
    bilinear_tensor,
    direct_sum,
    form,
    is_hyperbolic,
    normalize,
    quad_pfister,
    scale,
    witt_equivalent_gf2k,
)
from .involutions import (
    Index2Symp,
    Orthogonal,
    SplitSymp,
    UnitaryEtale,
    UnitaryExchange,
    pfaffian_form,
    reduced_charpoly,
    reduced_pfaffian,
    symmetric_space,
)
from .extraction import (
    construct_biquadratic,
    default_components,
    extract_orthogonal_invariants,
    extract_symplectic_invariants,
    extract_unitary_invariants,
    find_square_central,
    galois_components,
    _as_scalar,
)
from .quaternions import QuaternionAlgebra, nrd_form, q_conj, q_nrd, q_trd, split_embedding


@dataclass
class PropertyResult:
    name: str
    passed: bool
    trials: int
    unknowns: int = 0
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f", {self.unknowns} unknown" if self.unknowns else ""
        note = f" [{self.detail}]" if self.detail and not self.passed else ""
        return f"{status} {self.name} ({self.trials} trials{extra}){note}"


def _rng(seed: int, name: str) -> random.Random:
    return random.Random((seed << 16) ^ zlib.crc32(name.encode()))


def _symplectic_descriptor(field: Field):
    if isinstance(field, GF2k):
        return SplitSymp(field)
    t = field.t
    return Index2Symp(
        field, QuaternionAlgebra(field, t, t), (field.one, t, t + field.one)
    )


def _random_quat_algebra(field: Field, rng: random.Random) -> QuaternionAlgebra:
    return QuaternionAlgebra(field, field.rand(rng), field.rand_nonzero(rng))


# --- suite: fields ------------------------------------------------------------


def run_fields(field: Field, seed: int, trials: int) -> List[PropertyResult]:
    out = []
    rng = _rng(seed, "fields.axioms")
    bad = 0
    for _ in range(trials):
        x, y, z = (field.rand(rng) for _ in range(3))
        ok = (
            (x + y) + z == x + (y + z)
            and x * y == y * x
            and (x * y) * z == x * (y * z)
            and x * (y + z) == x * y + x * z
        )
        if y:
            ok = ok and (x / y) * y == x
        bad += not ok
    out.append(PropertyResult("fields.axioms", bad == 0, trials, detail=f"{bad} failures"))

    rng = _rng(seed, "fields.sqrt")
    bad = sum(frobenius_sqrt(e * e) != e for e in (field.rand(rng) for _ in range(trials)))
    out.append(PropertyResult("fields.sqrt_of_square", bad == 0, trials, detail=f"{bad} failures"))

    if isinstance(field, GF2k) and field.k <= 4:
        image = {x * x + x for x in field.elements()}
        ok = len(image) == field.order // 2
        ok = ok and all(absolute_trace(a) == 0 for a in image)
        solved = all(
            (solve_artin_schreier(a) is not None) == (a in image) for a in field.elements()
        )
        out.append(PropertyResult("fields.artin_schreier_image", ok and solved, field.order))
    else:
        rng = _rng(seed, "fields.artin")
        bad = 0
        for _ in range(trials):
            x = field.rand(rng)
            a = x * x + x
            s = solve_artin_schreier(a)
            if not isinstance(s, Fe) or s * s + s != a:
                bad += 1
        out.append(PropertyResult("fields.artin_schreier_solve", bad == 0, trials))
    return out


# --- suite: forms -------------------------------------------------------------


def _random_raw(field: Field, rng: random.Random, n: int) -> RawQuadraticForm:
    u = [[field.rand(rng) if j >= i else field.zero for j in range(n)] for i in range(n)]
    return RawQuadraticForm(field, u)


def run_forms(field: Field, seed: int, trials: int) -> List[PropertyResult]:
    out = []
    rng = _rng(seed, "forms.normalize")
    bad = 0
    rounds = max(1, trials // 20)
    for _ in range(rounds):
        n = rng.randrange(1, 7)
        raw = _random_raw(field, rng, n)
        q, t = normalize(raw)
        for _ in range(20):
            y = [field.rand(rng) for _ in range(n)]
            ty = [sum((t[i][j] * y[j] for j in range(n)), field.zero) for i in range(n)]
            if raw.evaluate(ty) != q.evaluate(y):
                bad += 1
    out.append(PropertyResult("forms.normalize_preserves_values", bad == 0, rounds * 20))

    if isinstance(field, GF2k):
        rng = _rng(seed, "forms.arf")
        bad = 0
        for _ in range(trials):
            a, b, c, d = (field.rand(rng) for _ in range(4))
            q1 = form(field, [(a, b)])
            q2 = form(field, [(c, d)])
            if arf_invariant(direct_sum(q1, q2)) != (arf_invariant(q1) ^ arf_invariant(q2)):
                bad += 1
            lam = field.rand_nonzero(rng)
            if arf_invariant(scale(lam, q1)) != arf_invariant(q1):
                bad += 1
        out.append(PropertyResult("forms.arf_additive_scale_invariant", bad == 0, trials))

        rng = _rng(seed, "forms.pfister")
        bad = 0
        small = field.order <= 8
        n_trials = min(trials, 20)
        for _ in range(n_trials):
            slots = [field.rand_nonzero(rng)]
            c = field.rand(rng)
            p = quad_pfister(slots, c)
            dec = is_hyperbolic(p)
            if small:
                brute = _brute_isotropic(p)
                if dec.is_true != (brute is not None):
                    bad += 1
        out.append(PropertyResult("forms.pfister_hyperbolic_vs_isotropy", bad == 0, n_trials))

        rng = _rng(seed, "forms.tensor")
        bad = 0
        for _ in range(min(trials, 50)):
            a, b = field.rand_nonzero(rng), field.rand_nonzero(rng)
            q = form(field, [(field.one, field.rand(rng))])
            lhs = bilinear_tensor([field.one, a], bilinear_tensor([field.one, b], q))
            rhs = bilinear_tensor([field.one, a, b, a * b], q)
            if not witt_equivalent_gf2k(lhs, rhs):
                bad += 1
        out.append(PropertyResult("forms.tensor_associativity", bad == 0, min(trials, 50)))
    return out


def _brute_isotropic(q: QuadraticForm):
    import itertools

    field = q.field
    if field.order**q.dim > 1 << 16:
        return None
    for vals in itertools.product(range(field.order), repeat=q.dim):
        if not any(vals):
            continue
        v = [field._el(x) for x in vals]
        if not q.evaluate(v):
            return v
    return None


# --- suite: quaternions -------------------------------------------------------


def run_quaternions(field: Field, seed: int, trials: int) -> List[PropertyResult]:
    out = []
    rng = _rng(seed, "quat.make")
    Q = _random_quat_algebra(field, rng)
    bad_conj = bad_nrd = bad_trd = bad_form = 0
    b = Q.b
    for _ in range(trials):
        x, y = Q.rand(rng), Q.rand(rng)
        if q_conj(x * y) != q_conj(y) * q_conj(x) or q_conj(q_conj(x)) != x:
            bad_conj += 1
        if q_nrd(x * y) != q_nrd(x) * q_nrd(y):
            bad_nrd += 1
        if q_trd(x * y) != q_trd(y * x):
            bad_trd += 1
        coords = [x.c[0], x.c[1], x.c[2], b * x.c[3]]
        if nrd_form(Q).evaluate(coords) != q_nrd(x):
            bad_form += 1
    out.append(PropertyResult("quaternions.conj_antiautomorphism", bad_conj == 0, trials))
    out.append(PropertyResult("quaternions.nrd_multiplicative", bad_nrd == 0, trials))
    out.append(PropertyResult("quaternions.trd_symmetric", bad_trd == 0, trials))
    out.append(PropertyResult("quaternions.nrd_form_agrees", bad_form == 0, trials))

    sp = split_embedding(Q)
    u, v, one = sp.u_img, sp.v_img, sp.one_img
    ok = (
        u * u + u == one.scal(sp.lift(Q.a))
        and v * v == one.scal(sp.lift(Q.b))
        and v * u == (u + one) * v
    )
    rng2 = _rng(seed, "quat.embed")
    for _ in range(min(trials, 100)):
        x, y = Q.rand(rng2), Q.rand(rng2)
        if sp.embed(x * y) != sp.embed(x) * sp.embed(y):
            ok = False
    out.append(PropertyResult("quaternions.split_embedding", ok, min(trials, 100) + 3))
    return out


# --- suite: symplectic ----------------------------------------------------------


def run_symplectic(field: Field, seed: int, trials: int) -> List[PropertyResult]:
    out = []
    desc = _symplectic_descriptor(field)
    space = symmetric_space(desc)
    out.append(PropertyResult("symplectic.symd_dim_28", space.dim == 28, 1))

    rng = _rng(seed, "symp.polarization")
    raw = pfaffian_form(desc)
    bad = 0
    n_pairs = min(trials, 200)
    for _ in range(n_pairs):
        cv, cw = space.rand_coords(rng), space.rand_coords(rng)
        x, y = space.element(cv), space.element(cw)
        yh = space.half(cw)
        pf_x = reduced_pfaffian(desc, x)
        pf_y = reduced_pfaffian(desc, y)
        pf_xy = reduced_pfaffian(desc, desc.el_add(x, y))
        lhs = pf_xy.second + pf_x.second + pf_y.second
        if lhs != pf_x.trace * pf_y.trace + desc.trd_product(x, yh):
            bad += 1
        if pf_x.trace != desc.trd(space.half(cv)):
            bad += 1
    out.append(PropertyResult("symplectic.polarization_identity", bad == 0, n_pairs))

    rng = _rng(seed, "symp.prp")
    bad = 0
    n_el = min(trials, 100)
    for _ in range(n_el):
        x = space.element(space.rand_coords(rng))
        pf = reduced_pfaffian(desc, x)
        pc = reduced_charpoly(desc, x)
        square = [field.zero] * 9
        for i, c in enumerate(pf.coeffs):
            square[2 * i] = c * c
        if square != pc:
            bad += 1
        acc = desc.zero_el()
        power = desc.one_el()
        for c in pf.coeffs:
            acc = desc.el_add(acc, desc.el_scal(c, power))
            power = desc.el_mul(power, x)
        if acc:
            bad += 1
    out.append(PropertyResult("symplectic.prp_square_and_annihilation", bad == 0, n_el))

    comps = default_components(desc)
    out.append(PropertyResult("symplectic.component_dims", comps.dims == (4, 8, 8, 8), 1))

    rng = _rng(seed, "symp.star")
    bad = 0
    n_star = min(trials, 300)
    for _ in range(n_star):
        c1 = [field.rand(rng) for _ in range(8)]
        c2 = [field.rand(rng) for _ in range(8)]
        x1 = comps.w_element(1, c1)
        x2 = comps.w_element(2, c2)
        prod = desc.el_add(desc.el_mul(x1, x2), desc.el_mul(x2, x1))
        pc = comps.space.coords(prod)
        if comps.full_raw.evaluate(pc) != comps.w_raw[0].evaluate(c1) * comps.w_raw[1].evaluate(c2):
            bad += 1
    out.append(PropertyResult("symplectic.star_multiplicative", bad == 0, n_star))

    inv = extract_symplectic_invariants(desc, comps, seed=seed)
    unknowns = sum(c.result.is_unknown for c in inv.checks)
    falses = [c.name for c in inv.checks if c.result.is_false]
    out.append(
        PropertyResult(
            "symplectic.extraction_checks",
            not falses,
            len(inv.checks),
            unknowns=unknowns,
            detail=",".join(falses),
        )
    )

    if isinstance(field, GF2k):
        comps2 = galois_components(desc, construct_biquadratic(desc, variant=9))
        inv2 = extract_symplectic_invariants(desc, comps2, seed=seed)
        same = witt_equivalent_gf2k(inv.pi3, inv2.pi3) and witt_equivalent_gf2k(
            inv.pi5, inv2.pi5
        )
        out.append(PropertyResult("symplectic.uniqueness_second_l", same, 1))

        x = find_square_central(desc, comps, seed=seed)
        ok = (
            x is not None
            and _as_scalar(desc, x) is None
            and _as_scalar(desc, desc.el_mul(x, x)) is not None
        )
        hyp = is_hyperbolic(inv.pi5)
        out.append(
            PropertyResult(
                "symplectic.square_central_iff_pi5_hyperbolic",
                ok == hyp.is_true,
                1,
            )
        )
    return out


# --- suites: unitary and orthogonal ---------------------------------------------


def run_unitary(field: Field, seed: int, trials: int) -> List[PropertyResult]:
    out = []
    if not isinstance(field, GF2k):
        return [PropertyResult("unitary.skipped_ratfunc", True, 0, detail="finite fields only")]
    descs = [UnitaryExchange(field)]
    nontrivial = next(
        (c for c in field.elements() if solve_artin_schreier(c) is None), None
    )
    if nontrivial is not None:
        descs.append(UnitaryEtale(field, nontrivial, (field.one,) * 4))
    for desc in descs:
        space = symmetric_space(desc)
        comps = default_components(desc)
        inv = extract_unitary_invariants(desc, comps, seed=seed)
        falses = [c.name for c in inv.checks if c.result.is_false]
        unknowns = sum(c.result.is_unknown for c in inv.checks)
        out.append(
            PropertyResult(
                f"unitary.{desc.kind}",
                space.dim == 16 and comps.dims == (4, 4, 4, 4) and not falses,
                len(inv.checks),
                unknowns=unknowns,
                detail=",".join(falses),
            )
        )
    return out


def run_orthogonal(field: Field, seed: int, trials: int) -> List[PropertyResult]:
    out = []
    rng = _rng(seed, "orth.gram")
    if isinstance(field, GF2k):
        gram = tuple(field.rand_nonzero(rng) for _ in range(4))
    else:
        gram = (field.one, field.t, field.one, field.one)
    desc = Orthogonal(field, gram)
    space = symmetric_space(desc)
    comps = default_components(desc)
    inv = extract_orthogonal_invariants(desc, comps, seed=seed)
    falses = [c.name for c in inv.checks if c.result.is_false]
    unknowns = sum(c.result.is_unknown for c in inv.checks)
    out.append(
        PropertyResult(
            "orthogonal.pipeline",
            space.dim == 10 and comps.dims == (4, 2, 2, 2) and not falses,
            len(inv.checks),
            unknowns=unknowns,
            detail=",".join(falses),
        )
    )
    return out


SUITES: Dict[str, Callable] = {
    "fields": run_fields,
    "forms": run_forms,
    "quaternions": run_quaternions,
    "symplectic": run_symplectic,
    "unitary": run_unitary,
    "orthogonal": run_orthogonal,
}


def run_suite(
    suite: str, field: Field, seed: int, trials: int
) -> List[PropertyResult]:
    if trials == 0:
        return [
            PropertyResult(
                f"{suite}.vacuous", True, 0, detail="warning: zero trials requested"
            )
        ]
    if suite == "all":
        out = []
        for name in SUITES:
            out.extend(SUITES[name](field, seed, trials))
        return out
    if suite not in SUITES:
        raise CharformError(f"unknown suite {suite!r}")
    return SUITES[suite](field, seed, trials)
