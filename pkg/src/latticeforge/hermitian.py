"""Right D-modules with nondegenerate skew-hermitian forms.

A form F satisfies F(u*lam, v*mu) = conj(lam) F(u, v) mu and
F(u, v) = -conj(F(v, u)); in coordinates F(x, y) = sum conj(x_l) a_lm y_m
with a_lm = -conj(a_ml).  Scalars act on the right, so linear algebra
below is over a division ring and left/right multiplications are kept
straight throughout.
"""

from __future__ import annotations

from .quaternions import Quat, QuatAlgebra


class NullVectorError(ValueError):
    """Operation requires a regular vector but F(v, v) = 0."""


class DegenerateForm(ValueError):
    """The restriction of F to the relevant submodule is degenerate."""


class IsotropicStall(ValueError):
    """Gram-Schmidt could not find a regular pivot at some stage."""


class SolverFailure(RuntimeError):
    """The orthogonality solver exhausted its scaling set."""


class SkewHermitianModule:
    def __init__(self, algebra: QuatAlgebra, gram):
        self.algebra = algebra
        self.gram = [list(row) for row in gram]
        self.dim = len(self.gram)
        for row in self.gram:
            if len(row) != self.dim:
                raise ValueError("gram matrix must be square")
        for l in range(self.dim):
            for m in range(self.dim):
                if self.gram[l][m] != -self.gram[m][l].conj():
                    raise ValueError("gram matrix is not skew-hermitian")

    @classmethod
    def diagonal(cls, algebra: QuatAlgebra, entries):
        n = len(entries)
        zero = algebra.zero()
        gram = [[entries[l] if l == m else zero for m in range(n)]
                for l in range(n)]
        return cls(algebra, gram)

    def vector(self, coords) -> "ModVector":
        return ModVector(self, coords)

    def basis_vector(self, l: int) -> "ModVector":
        coords = [self.algebra.zero()] * self.dim
        coords[l] = self.algebra.one()
        return ModVector(self, coords)

    def basis(self):
        return [self.basis_vector(l) for l in range(self.dim)]

    def __repr__(self):
        return f"SkewHermitianModule(dim={self.dim}, {self.algebra})"

    def to_json(self) -> dict:
        from .quaternions import quat_to_json
        return {"dim": self.dim,
                "gram": [[quat_to_json(e) for e in row] for row in self.gram]}

    @classmethod
    def from_json(cls, obj) -> "SkewHermitianModule":
        from .quaternions import quat_from_json
        gram = [[quat_from_json(e) for e in row] for row in obj["gram"]]
        return cls(gram[0][0].algebra, gram)


class ModVector:
    __slots__ = ("module", "coords")

    def __init__(self, module: SkewHermitianModule, coords):
        coords = [c if isinstance(c, Quat) else module.algebra(c)
                  for c in coords]
        if len(coords) != module.dim:
            raise ValueError("coordinate count does not match module dimension")
        self.module = module
        self.coords = coords

    def __add__(self, other):
        self._same(other)
        return ModVector(self.module,
                         [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._same(other)
        return ModVector(self.module,
                         [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return ModVector(self.module, [-a for a in self.coords])

    def scale(self, lam) -> "ModVector":
        """Right scalar action v * lam."""
        return ModVector(self.module, [c * lam for c in self.coords])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __eq__(self, other):
        return (isinstance(other, ModVector) and self.module is other.module
                and self.coords == other.coords)

    def _same(self, other):
        if not isinstance(other, ModVector) or other.module is not self.module:
            raise ValueError("vectors from different modules")

    def __repr__(self):
        return f"ModVector({self.coords})"

    # classification at a real embedding of the base field
    def norm_sign(self, conjugate: bool = False) -> int:
        """Sign of N(F(v, v)): +1 positive, -1 negative, 0 null."""
        q = eval_form(self, self)
        if q.is_zero():
            return 0
        return q.norm().sign(conjugate)

    def is_regular(self) -> bool:
        return not eval_form(self, self).is_zero()


def eval_form(u: ModVector, v: ModVector) -> Quat:
    u._same(v)
    gram = u.module.gram
    n = u.module.dim
    acc = u.module.algebra.zero()
    for l in range(n):
        ul = u.coords[l].conj()
        for m in range(n):
            if not gram[l][m].is_zero():
                acc = acc + ul * gram[l][m] * v.coords[m]
    return acc


def proj_v(v: ModVector, u: ModVector) -> ModVector:
    """Orthogonal projection of u onto <v>: v * a^-1 <v, u>, a = <v, v>."""
    a = eval_form(v, v)
    if a.is_zero():
        raise NullVectorError("projection onto a null vector")
    return v.scale(a.inverse() * eval_form(v, u))


def reflect(v: ModVector, u: ModVector) -> ModVector:
    """The reflection sigma_v(u) = u - 2 Proj_v(u)."""
    p = proj_v(v, u)
    return u - p - p


def perp(v: ModVector):
    """A basis of v^perp, of size dim - 1."""
    if not v.is_regular():
        raise NullVectorError("perp of a null vector")
    M = v.module
    cands = [e - proj_v(v, e) for e in M.basis()]
    basis = _independent(cands)
    if len(basis) != M.dim - 1:
        raise DegenerateForm("v^perp has unexpected rank")
    return basis


def _independent(vectors):
    """Maximal right-linearly independent subset, by Gaussian elimination.

    Combinations are sum v_i * lam_i with lam_i acting on the right of
    the coordinates, so elimination uses right scalar factors.
    """
    rows = []       # reduced echelon rows (coordinate lists)
    pivots = []     # pivot column per reduced row
    keep = []
    for v in vectors:
        coords = list(v.coords)
        for row, piv in zip(rows, pivots):
            if not coords[piv].is_zero():
                lam = row[piv].inverse() * coords[piv]
                coords = [c - r * lam for c, r in zip(coords, row)]
        # prefer an invertible pivot (matters only in split algebras)
        piv = next((i for i, c in enumerate(coords)
                    if not c.norm().is_zero()), None)
        if piv is None:
            piv = next((i for i, c in enumerate(coords)
                        if not c.is_zero()), None)
        if piv is not None:
            rows.append(coords)
            pivots.append(piv)
            keep.append(v)
    return keep


def gram_schmidt(vs):
    """Orthogonalize a spanning list; null pivots are repaired by adding
    a later candidate, and the process fails loudly if every repair is null.
    """
    if not vs:
        return []
    M = vs[0].module
    work = [v for v in _independent(vs) if not v.is_zero()]
    out = []
    while work:
        pivot = None
        v0 = work[0]
        if v0.is_regular():
            pivot = v0
            rest = work[1:]
        else:
            for idx in range(1, len(work)):
                cand = v0 + work[idx]
                if cand.is_regular():
                    pivot = cand
                    rest = work[1:]
                    break
                if work[idx].is_regular():
                    pivot = work[idx]
                    rest = work[:idx] + work[idx + 1:]
                    break
        if pivot is None:
            raise IsotropicStall("no regular pivot available")
        out.append(pivot)
        rest = [u - proj_v(pivot, u) for u in rest]
        work = [u for u in rest if not u.is_zero()]
    return out


def signature(M: SkewHermitianModule, embedding="identity"):
    """(p, q) = numbers of positive and negative vectors in an orthogonal basis."""
    conjugate = embedding in ("conjugate", True)
    basis = gram_schmidt(M.basis())
    if len(basis) != M.dim:
        raise DegenerateForm("module form is degenerate")
    p = q = 0
    for v in basis:
        s = v.norm_sign(conjugate)
        if s > 0:
            p += 1
        elif s < 0:
            q += 1
        else:
            raise DegenerateForm("null vector in an orthogonal basis")
    return p, q


# scalars tried when the Lemma-type solver needs nu_1 + alpha invertible
_SCALING_SET = ("1", "i", "j", "k", "1+i", "1+j")


def _scaling_elements(algebra: QuatAlgebra):
    one, i, j, k = algebra.basis()
    return {"1": one, "i": i, "j": j, "k": k, "1+i": one + i, "1+j": one + j}


def lemma_L_solve(p1: ModVector, p2: ModVector):
    """Vectors (u1, u2) with <p1,u1> = <p2,u2> = <u1,u2> = 0.

    Requires a 3-dimensional module, regular p1, p2 spanning a
    2-dimensional nondegenerate submodule P.  Construction: v with
    P = v^perp, u_m' in P orthogonal to p_m, then u_m = u_m' + v*lam_m
    with lam_1 = 1 and lam_2 solving the displayed linear equation.
    Returns (u1, u2, trace) where trace records the scaling applied.
    """
    M = p1.module
    p1._same(p2)
    if M.dim != 3:
        raise ValueError("solver requires a 3-dimensional module")
    for p in (p1, p2):
        if not p.is_regular():
            raise NullVectorError("input vector is null")

    u1p = p2 - proj_v(p1, p2)
    if u1p.is_zero():
        raise DegenerateForm("p1, p2 span a 1-dimensional submodule")
    if eval_form(u1p, u1p).is_zero():
        raise DegenerateForm("F restricted to <p1, p2> is degenerate")
    u2p = p1 - proj_v(p2, p1)

    v = _perp_of_plane(p1, p2)
    alpha = eval_form(v, v)
    if alpha.is_zero():
        raise DegenerateForm("complement generator of P is null")

    scalings = _scaling_elements(M.algebra)
    trace = []
    for name in _SCALING_SET:
        s = scalings[name]
        u1s = u1p.scale(s)
        nu1 = eval_form(u1s, v)
        trace.append(name)
        if not (nu1 + alpha).norm().is_zero():
            nu2 = eval_form(v, u2p)
            mu = eval_form(u1s, u2p)
            lam = -((nu1 + alpha).inverse() * (mu + nu2))
            u1 = u1s + v
            u2 = u2p + v.scale(lam)
            return u1, u2, trace
    raise SolverFailure(f"nu1 + alpha not invertible for scalings {trace}")


def _perp_of_plane(p1: ModVector, p2: ModVector) -> ModVector:
    """Generator of <p1, p2>^perp in a 3-dimensional module.

    Solves the left-linear system sum_l <p_m, e_l> x_l = 0.
    """
    M = p1.module
    rows = [[eval_form(p, e) for e in M.basis()] for p in (p1, p2)]
    n = M.dim
    pivots = {}
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows))
                    if not rows[i][col].norm().is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [inv * e for e in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [e - f * p for e, p in zip(rows[i], rows[r])]
        pivots[col] = r
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        raise DegenerateForm("P^perp is trivial")
    fc = free[0]
    coords = [M.algebra.zero()] * n
    coords[fc] = M.algebra.one()
    for col, row_idx in pivots.items():
        coords[col] = -rows[row_idx][fc]
    return ModVector(M, coords)
