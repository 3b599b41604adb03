"""Characteristic-2 quaternion algebras [a,b).

The algebra [a,b) over F has basis 1, u, v, uv with relations u^2 + u = a,
v^2 = b (b nonzero), vu = (u+1)v.  Conjugation x -> trd(x) + x is the
canonical (symplectic) involution.  A splitting embedding into 2x2 matrices
is built over F itself when x^2 + x = a has a root there, and over the
quadratic extension ring F[s]/(s^2 + s + a) otherwise; the characteristic
polynomial machinery only needs ring arithmetic, so the split case of the
extension is harmless.
"""

from __future__ import annotations

import random
from typing import Union

from .decision import Decision
from .errors import AlgebraMismatch, ZeroScalar
from .fields import (
    Fe,
    Field,
    QuadraticExtension,
    solve_artin_schreier,
)
from .forms import QuadraticForm, is_anisotropic, quad_pfister
from .linalg import Mat


class Quat:
    """Quaternion x0 + x1*u + x2*v + x3*uv."""

    __slots__ = ("alg", "c")

    def __init__(self, alg: "QuaternionAlgebra", coords):
        self.alg = alg
        self.c = tuple(coords)

    def _same(self, other) -> "Quat":
        if not isinstance(other, Quat) or other.alg is not self.alg:
            raise AlgebraMismatch("quaternions from different algebras")
        return other

    def __add__(self, other):
        other = self._same(other)
        return Quat(self.alg, tuple(p + q for p, q in zip(self.c, other.c)))

    __sub__ = __add__

    def __mul__(self, other):
        other = self._same(other)
        a, b = self.alg.a, self.alg.b
        x0, x1, x2, x3 = self.c
        y0, y1, y2, y3 = other.c
        c0 = x0 * y0 + a * (x1 * y1) + b * (x2 * y2 + x2 * y3) + a * b * (x3 * y3)
        c1 = x0 * y1 + x1 * y0 + x1 * y1 + b * (x2 * y3 + x3 * y2)
        c2 = x0 * y2 + x2 * y0 + x2 * y1 + a * (x1 * y3 + x3 * y1)
        c3 = x0 * y3 + x3 * y0 + x1 * y2 + x1 * y3 + x2 * y1
        return Quat(self.alg, (c0, c1, c2, c3))

    def __neg__(self):
        return self

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        return isinstance(other, Quat) and other.alg is self.alg and other.c == self.c

    def __hash__(self):
        return hash((id(self.alg), self.c))

    def scal(self, c: Fe) -> "Quat":
        return Quat(self.alg, tuple(c * x for x in self.c))

    def __repr__(self):
        return f"Quat{tuple(x.raw for x in self.c)}"


class QuaternionAlgebra:
    """The symbol algebra [a,b), also usable as a matrix entry ring."""

    def __init__(self, field: Field, a: Fe, b: Fe):
        if not b:
            raise ZeroScalar("the slot b of [a,b) must be nonzero")
        self.field = field
        self.a = a
        self.b = b
        z, o = field.zero, field.one
        self.zero = Quat(self, (z, z, z, z))
        self.one = Quat(self, (o, z, z, z))
        self.u = Quat(self, (z, o, z, z))
        self.v = Quat(self, (z, z, o, z))
        self.w = Quat(self, (z, z, z, o))
        self._split = None

    def el(self, x0: Fe, x1: Fe, x2: Fe, x3: Fe) -> Quat:
        return Quat(self, (x0, x1, x2, x3))

    def scalar(self, c: Fe) -> Quat:
        z = self.field.zero
        return Quat(self, (c, z, z, z))

    def rand(self, rng: random.Random) -> Quat:
        return Quat(self, tuple(self.field.rand(rng) for _ in range(4)))

    def split(self) -> "SplitEmbedding":
        if self._split is None:
            self._split = SplitEmbedding(self)
        return self._split

    def __repr__(self):
        return f"QuaternionAlgebra[{self.a!r},{self.b!r})"


def q_conj(x: Quat) -> Quat:
    """Canonical involution: conj(x) = trd(x) + x."""
    x0, x1, x2, x3 = x.c
    return Quat(x.alg, (x0 + x1, x1, x2, x3))


def q_trd(x: Quat) -> Fe:
    return x.c[1]


def q_nrd(x: Quat) -> Fe:
    """Reduced norm x * conj(x), as a scalar."""
    a, b = x.alg.a, x.alg.b
    x0, x1, x2, x3 = x.c
    return x0 * x0 + x0 * x1 + a * x1 * x1 + b * (x2 * x2 + x2 * x3 + a * x3 * x3)


def q_mul(x: Quat, y: Quat) -> Quat:
    return x * y


def nrd_form(q: QuaternionAlgebra) -> QuadraticForm:
    """The reduced norm as the 2-fold Pfister form <<b; a]]."""
    return quad_pfister([q.b], q.a)


def is_division(q: QuaternionAlgebra, *, seed: int = 0, trials: int = 200) -> Decision:
    """Division algebra test: the norm form is anisotropic."""
    return is_anisotropic(nrd_form(q), seed=seed, trials=trials)


class SplitEmbedding:
    """Images of the generators in 2x2 matrices over a splitting ring.

    The ring is F when x^2 + x = a has a root in F, and the quadratic
    extension F[s]/(s^2 + s + a) otherwise; u -> diag(s, s+1),
    v -> [[0, b], [1, 0]].
    """

    def __init__(self, alg: QuaternionAlgebra):
        field = alg.field
        root = solve_artin_schreier(alg.a)
        if isinstance(root, Fe):
            ring: Union[Field, QuadraticExtension] = field
            s = root
            self.lift = lambda c: c
        else:
            ring = QuadraticExtension(field, alg.a)
            s = ring.s
            self.lift = ring.lift
        self.alg = alg
        self.ring = ring
        one, zero = ring.one, ring.zero
        bb = self.lift(alg.b)
        self.u_img = Mat(ring, [[s, zero], [zero, s + one]])
        self.v_img = Mat(ring, [[zero, bb], [one, zero]])
        self.w_img = self.u_img * self.v_img
        self.one_img = Mat.identity(ring, 2)

    def embed(self, x: Quat) -> Mat:
        if x.alg is not self.alg:
            raise AlgebraMismatch("quaternion from a different algebra")
        x0, x1, x2, x3 = (self.lift(c) for c in x.c)
        mats = (self.one_img, self.u_img, self.v_img, self.w_img)
        rows = []
        for i in range(2):
            row = []
            for j in range(2):
                acc = self.ring.zero
                for coef, m in zip((x0, x1, x2, x3), mats):
                    acc = acc + coef * m.rows[i][j]
                row.append(acc)
            rows.append(row)
        return Mat(self.ring, rows)

    def embed_matrix(self, m: Mat) -> Mat:
        """Blockwise embedding of a matrix over the quaternion algebra."""
        n = len(m.rows)
        blocks = [[self.embed(m.rows[i][j]) for j in range(n)] for i in range(n)]
        rows = []
        for i in range(n):
            for r in range(2):
                row = []
                for j in range(n):
                    row.extend(blocks[i][j].rows[r])
                rows.append(row)
        return Mat(self.ring, rows)


def split_embedding(q: QuaternionAlgebra) -> SplitEmbedding:
    """Cached splitting data for the algebra."""
    return q.split()
