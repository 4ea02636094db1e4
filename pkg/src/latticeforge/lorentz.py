"""Realification of skew-hermitian quaternionic modules and hyperboloid
geometry on the resulting real quadratic space.

A module (V, F) over a quaternion algebra split at the identity real
place realifies as follows.  Rescale generators so that i^2 = j^2 = 1,
set beta = 1 + i and alpha = k - j.  The real subspace
V_+ = {v : v * i = v} has basis {v_l beta, v_l alpha} over a module
basis {v_l}, and F restricted to V_+ factors as alpha * phi for a real
symmetric bilinear form phi.  When phi has Lorentz signature (m, 1) the
positive branch of phi = -1 is a hyperboloid model of H^m, and unitary
module maps push forward to Lorentz matrices.

Geometry (distances, perpendiculars, bisectors, margins, angles) is
delegated to closed-form primitives in :mod:`latticeforge.minkowski`
after an orthonormal change of coordinates.
"""

from __future__ import annotations

import numpy as np

from . import minkowski as mk
from .hermitian import (ModVector, SkewHermitianModule, eval_form, perp,
                        _perp_of_plane, lemma_L_solve)
from .quaternions import (NotRealifiable, Quat, rescale_split_generators)

EPS_GEO = mk.EPS_GEO


class SignatureError(ValueError):
    """A quadratic form does not have the required signature."""


class NoPerpendicular(ValueError):
    """Geodesics intersect or are asymptotic; no common perpendicular."""


# -- real quadratic spaces --------------------------------------------

class LorentzSpace:
    """Real quadratic space of signature (m, 1) with a fixed time
    orientation (positive last standard coordinate)."""

    def __init__(self, gram):
        G = np.asarray(gram, dtype=float)
        if G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise ValueError("gram must be a square matrix")
        if not np.allclose(G, G.T, atol=1e-12):
            raise ValueError("gram must be symmetric")
        self.gram = G
        self.dim = G.shape[0]
        lam, V = np.linalg.eigh(G)
        tol = 1e-12 * max(1.0, np.abs(lam).max())
        pos = int(np.sum(lam > tol))
        neg = int(np.sum(lam < -tol))
        self.signature = (pos, neg)
        if (pos, neg) != (self.dim - 1, 1):
            raise SignatureError(
                f"signature {(pos, neg)} is not ({self.dim - 1}, 1)")
        # standard coordinates: x_std = S x with x_std^T eta x_std = x^T G x,
        # the negative eigen-direction mapped to the last coordinate
        eta = np.ones(self.dim)
        eta[-1] = -1.0
        if np.allclose(G, np.diag(eta), atol=1e-14):
            S = np.eye(self.dim)
        else:
            order = np.argsort(-lam)       # positives first, negative last
            lam = lam[order]
            V = V[:, order]
            S = (np.sqrt(np.abs(lam))[:, None] * V.T)
        self._to_std = S
        self._from_std = np.linalg.inv(S)

    @classmethod
    def standard(cls, dim: int) -> "LorentzSpace":
        sig = np.ones(dim)
        sig[-1] = -1.0
        return cls(np.diag(sig))

    def phi(self, x, y):
        return float(np.asarray(x, float) @ self.gram @ np.asarray(y, float))

    def to_std(self, x):
        return np.asarray(x, float) @ self._to_std.T

    def from_std(self, x):
        return np.asarray(x, float) @ self._from_std.T

    def __repr__(self):
        return f"LorentzSpace(dim={self.dim})"


class HPoint:
    """Point on the upper hyperboloid sheet: phi(x, x) = -1."""

    __slots__ = ("space", "coords", "std")

    def __init__(self, space: LorentzSpace, coords, _std=None):
        self.space = space
        if _std is None:
            x = space.to_std(coords)
            x = mk.normalize_point(x)
        else:
            x = np.asarray(_std, float)
        self.std = x
        self.coords = space.from_std(x)

    @classmethod
    def from_std(cls, space, x_std):
        return cls(space, None, _std=mk.normalize_point(x_std))

    def __repr__(self):
        return f"HPoint({np.round(self.coords, 6)})"


class HSubspace:
    """Totally geodesic H^{k-1}: projectivization of a linear subspace of
    signature (k-1, 1).  A geodesic is the case k = 2."""

    __slots__ = ("space", "span", "std_frame", "_ortho", "rational_tag")

    def __init__(self, space: LorentzSpace, span, rational_tag=None):
        self.space = space
        F = np.asarray(span, dtype=float)
        if F.ndim != 2:
            raise ValueError("span must be a matrix of column vectors")
        if F.shape[0] != space.dim:
            F = F.T
        self.span = F
        self.std_frame = space._to_std @ F
        p, q = mk.frame_signature(self.std_frame)
        if (p, q) != (F.shape[1] - 1, 1):
            raise SignatureError(
                f"restricted form has signature {(p, q)}, "
                f"expected ({F.shape[1] - 1}, 1)")
        self._ortho = None
        self.rational_tag = rational_tag

    @property
    def k(self) -> int:
        return self.span.shape[1]

    @property
    def is_geodesic(self) -> bool:
        return self.k == 2

    def ortho(self) -> np.ndarray:
        """phi-orthonormal standard-coordinate frame, timelike column last."""
        if self._ortho is None:
            self._ortho = mk.orthonormalize_frame(self.std_frame)
        return self._ortho

    def point(self, t: float = 0.0) -> HPoint:
        """A point of the subspace; for a geodesic, arclength t from the
        frame's timelike base point."""
        U = self.ortho()
        x = np.cosh(t) * U[:, -1] + np.sinh(t) * U[:, 0]
        return HPoint.from_std(self.space, x)

    def contains_point(self, x: HPoint, tol: float = 1e-8) -> bool:
        # projection residual is quadratically more accurate near zero
        # than the hyperbolic distance (arccosh is sqrt-sensitive at 1)
        y = mk.project_point(self.ortho(), x.std)
        return bool(np.linalg.norm(x.std - y) <= tol * np.linalg.norm(x.std))

    def contains(self, other: "HSubspace", tol: float = 1e-8) -> bool:
        U = self.ortho()
        sig = mk.form_vector(U.shape[0])
        eps = np.ones(U.shape[1])
        eps[-1] = -1.0
        W = other.ortho()
        proj = U @ (eps[:, None] * (U.T @ (sig[:, None] * W)))
        return bool(np.max(np.abs(proj - W)) <= tol)

    def transform(self, matrix) -> "HSubspace":
        """Image under a phi-preserving matrix in space coordinates."""
        return HSubspace(self.space, np.asarray(matrix, float) @ self.span)

    def __repr__(self):
        return f"HSubspace(k={self.k}, dim={self.space.dim})"


class Hyperplane:
    """Level set phi(., u) = 0 for a unit spacelike normal u."""

    __slots__ = ("space", "normal", "std_normal")

    def __init__(self, space: LorentzSpace, normal):
        u = space.to_std(normal)
        n2 = mk.mdot(u, u)
        if n2 <= 0:
            raise ValueError("hyperplane normal must be spacelike")
        self.space = space
        self.std_normal = u / np.sqrt(n2)
        self.normal = space.from_std(self.std_normal)

    @property
    def positive(self) -> "Halfspace":
        """Half-space {phi(., u) <= 0}."""
        return Halfspace(self, +1)

    @property
    def negative(self) -> "Halfspace":
        """Half-space {phi(., u) >= 0}."""
        return Halfspace(self, -1)

    def side(self, x: HPoint) -> int:
        f = mk.mdot(x.std, self.std_normal)
        if abs(f) <= EPS_GEO:
            return 0
        return -1 if f > 0 else +1

    def as_subspace(self) -> HSubspace:
        """The hyperplane as a totally geodesic HSubspace."""
        u = self.std_normal
        d = self.space.dim
        sig = mk.form_vector(d)
        # complement of u: columns of identity minus phi-projection on u
        M = np.eye(d) - np.outer(u, u * sig)
        # drop the most-dependent column
        idx = np.argmax(np.abs(u * sig))
        cols = [c for c in range(d) if c != idx]
        frame_std = M[:, cols]
        return HSubspace(self.space, self.space._from_std @ frame_std)


class Halfspace:
    """Closed half-space {x : side * phi(x, u) <= 0}."""

    __slots__ = ("hyperplane", "side")

    def __init__(self, hyperplane: Hyperplane, side: int):
        if side not in (+1, -1):
            raise ValueError("side must be +1 or -1")
        self.hyperplane = hyperplane
        self.side = side

    @property
    def complement(self) -> "Halfspace":
        return Halfspace(self.hyperplane, -self.side)

    def contains(self, x: HPoint, tol: float = EPS_GEO) -> bool:
        return self.side * mk.mdot(x.std, self.hyperplane.std_normal) <= tol


# -- geometry ---------------------------------------------------------

def dist_points(x: HPoint, y: HPoint) -> float:
    return float(mk.dist_points(x.std, y.std))


def _interval(d: float, slack: float = None):
    s = EPS_GEO * (1.0 + abs(d)) if slack is None else slack
    return (max(d - s, 0.0), d + s)


def dist_subspaces(A: HSubspace, B: HSubspace):
    """Interval enclosing inf d(x, y) over the two subspaces; (0, 0)-ish
    when they meet or are asymptotic."""
    d = float(mk.dist_subspaces_frames(A.ortho(), B.ortho()))
    return _interval(d)


def dist_point_subspace(x: HPoint, B: HSubspace) -> float:
    return float(mk.dist_point_subspace(x.std, B.ortho()))


def closest_point(A: HSubspace, y: HPoint) -> HPoint:
    return HPoint.from_std(A.space, mk.project_point(A.ortho(), y.std))


def common_perpendicular(gamma: HSubspace, delta: HSubspace):
    """Feet (on gamma, on delta) of the unique common perpendicular."""
    d, x, y = mk.closest_pair(gamma.ortho(), delta.ortho())
    if d <= 1e-9:
        raise NoPerpendicular("subspaces intersect or are asymptotic")
    return HPoint.from_std(gamma.space, x), HPoint.from_std(delta.space, y)


def bisector(p: HPoint, q: HPoint) -> Hyperplane:
    """Equidistant hyperplane of p != q.  Convention: the positive
    half-space contains q and the negative one contains p."""
    u = p.std - q.std
    n2 = mk.mdot(u, u)
    if n2 <= 0:
        raise ValueError("bisector requires distinct hyperboloid points")
    h = Hyperplane.__new__(Hyperplane)
    h.space = p.space
    h.std_normal = u / np.sqrt(n2)
    h.normal = p.space.from_std(h.std_normal)
    return h


def halfspace_margin(S, H: Halfspace):
    """Signed containment margin of S (HPoint or HSubspace) in H.

    Positive: S lies in H at that distance from the boundary.  Zero: S
    touches or lies in the boundary.  Negative: part of S is on the
    wrong side (-inf when a subspace crosses the boundary).
    """
    u = H.hyperplane.std_normal
    if isinstance(S, HPoint):
        m = float(mk.signed_point_margin(S.std, u, H.side))
    else:
        m = float(mk.halfspace_margin_frame(S.ortho(), u, H.side))
    if not np.isfinite(m):
        return (-np.inf, -np.inf)
    s = EPS_GEO * (1.0 + abs(m))
    return (m - s, m + s)


def angle(A: HSubspace, B: HSubspace, along: HSubspace) -> float:
    """Dihedral angle between A and B along their intersection, measured
    in the phi-orthogonal complement of `along` within each."""
    if not (A.contains(along) and B.contains(along)):
        raise ValueError("`along` is not contained in both subspaces")
    return mk.angle_between(A.ortho(), B.ortho(), along.ortho())


def reflection_through(A: HSubspace) -> np.ndarray:
    """Matrix (space coordinates) of the isometry fixing A pointwise."""
    R = mk.reflection_fixing(A.ortho())
    return A.space._from_std @ R @ A.space._to_std


def translation(p: HPoint, x: HPoint, length: float) -> np.ndarray:
    """Matrix (space coordinates) translating by `length` along the
    geodesic from p toward x."""
    v = x.std + mk.mdot(x.std, p.std) * p.std
    n2 = mk.mdot(v, v)
    if n2 <= 0:
        raise ValueError("translation axis is degenerate")
    M = mk.translation_along(p.std, v / np.sqrt(n2), length)
    return p.space._from_std @ M @ p.space._to_std


# -- realification ----------------------------------------------------

def _rep_matrices(algebra):
    """2x2 real matrices for 1, i, j, k at the (split) identity place."""
    a = float(algebra.a.embed())
    b = float(algebra.b.embed())
    one = np.eye(2)
    if a > 0:
        mi = np.array([[np.sqrt(a), 0.0], [0.0, -np.sqrt(a)]])
        mj = np.array([[0.0, b], [1.0, 0.0]])
    elif b > 0:
        mj = np.array([[np.sqrt(b), 0.0], [0.0, -np.sqrt(b)]])
        mi = np.array([[0.0, a], [1.0, 0.0]])
    else:
        raise NotRealifiable("identity real place is not split")
    mk_ = mi @ mj
    assert np.allclose(mi @ mi, a * one)
    assert np.allclose(mj @ mj, b * one)
    assert np.allclose(mi @ mj + mj @ mi, 0.0)
    return one, mi, mj, mk_


def _quat_conj_mat(m):
    """Quaternion conjugation in the 2x2 representation (the adjugate)."""
    return np.trace(m) * np.eye(2) - m


class Realification:
    """The real quadratic space (V_+, phi) of a module (V, F), with the
    coordinate maps needed to move vectors and unitary maps across."""

    def __init__(self, module: SkewHermitianModule):
        self.module = module
        alg = module.algebra
        one, mi, mj, mkk = _rep_matrices(alg)
        self._rep_basis = (one, mi, mj, mkk)

        s_i, s_j, perm = rescale_split_generators(alg)
        gens = {"i": mi, "j": mj, "k": mkk}
        I = s_i * gens[perm["i"]]
        J = s_j * gens[perm["j"]]
        K = I @ J
        assert np.allclose(I @ I, np.eye(2))
        assert np.allclose(J @ J, np.eye(2))
        assert np.allclose(K @ K, -np.eye(2))
        self.beta = np.eye(2) + I
        self.alpha_elem = K - J
        assert np.allclose(self.alpha_elem @ self.alpha_elem, 0.0)
        assert np.allclose(self.beta @ _quat_conj_mat(self.beta), 0.0)

        n = module.dim
        self.real_dim = 2 * n
        # basis of V_+: e_l beta, e_l alpha (order: l = 0..n-1 interleaved)
        # decomposition matrix for m = x beta + y alpha
        D = np.stack([self.beta.ravel(), self.alpha_elem.ravel()], axis=1)
        self._decomp = np.linalg.pinv(D)
        self._span_cols = D

        A = [[self.rep(module.gram[l][m]) for m in range(n)] for l in range(n)]
        phi = np.zeros((2 * n, 2 * n))
        deltas = (self.beta, self.alpha_elem)
        a2 = float(np.sum(self.alpha_elem * self.alpha_elem))
        for l in range(n):
            for m in range(n):
                for s, ds in enumerate(deltas):
                    for t, dt in enumerate(deltas):
                        Fm = _quat_conj_mat(ds) @ A[l][m] @ dt
                        coef = float(np.sum(Fm * self.alpha_elem)) / a2
                        if not np.allclose(Fm, coef * self.alpha_elem,
                                           atol=1e-9):
                            raise ArithmeticError(
                                "form does not factor through alpha")
                        phi[2 * l + s, 2 * m + t] = coef
        if not np.allclose(phi, phi.T, atol=1e-9):
            raise ArithmeticError("extracted form is not symmetric")
        self.phi = 0.5 * (phi + phi.T)
        lam = np.linalg.eigvalsh(self.phi)
        tol = 1e-9 * max(1.0, np.abs(lam).max())
        self.signature = (int(np.sum(lam > tol)), int(np.sum(lam < -tol)))
        self._space = None

    def rep(self, q: Quat) -> np.ndarray:
        one, mi, mj, mkk = self._rep_basis
        x, y, z, w = (float(c.embed()) for c in q.components())
        return x * one + y * mi + z * mj + w * mkk

    @property
    def space(self) -> LorentzSpace:
        if self._space is None:
            self._space = LorentzSpace(self.phi)
        return self._space

    def _decompose(self, m2x2):
        """Coefficients (x, y) with m = x beta + y alpha."""
        c = self._decomp @ np.ravel(m2x2)
        if not np.allclose(self._span_cols @ c, np.ravel(m2x2), atol=1e-8):
            raise ArithmeticError("matrix not in the span of beta, alpha")
        return c

    def vector_plane(self, w: ModVector) -> np.ndarray:
        """Real 2-column frame spanning (w * D) ∩ V_+, i.e. {w beta, w alpha}."""
        n = self.module.dim
        out = np.zeros((2 * n, 2))
        for col, delta in enumerate((self.beta, self.alpha_elem)):
            for l in range(n):
                m = self.rep(w.coords[l]) @ delta
                x, y = self._decompose(m)
                out[2 * l, col] = x
                out[2 * l + 1, col] = y
        return out

    def submodule_span(self, ws) -> np.ndarray:
        """Real frame of the realification of the submodule spanned by ws."""
        return np.concatenate([self.vector_plane(w) for w in ws], axis=1)

    def subspace(self, ws, rational_tag=None) -> HSubspace:
        return HSubspace(self.space, self.submodule_span(ws),
                         rational_tag=rational_tag)


def realify(M: SkewHermitianModule) -> Realification:
    return Realification(M)


def _check_unitary(T, M: SkewHermitianModule):
    """Exact check that the Quat matrix T preserves F."""
    n = M.dim
    cols = [M.vector([T[l][m] for l in range(n)]) for m in range(n)]
    for l in range(n):
        for m in range(n):
            if eval_form(cols[l], cols[m]) != M.gram[l][m]:
                raise ValueError("map does not preserve the form")


def push_forward(T, realification: Realification) -> np.ndarray:
    """Real matrix of a unitary module map on (V_+, phi).

    T is an n x n matrix of quaternions acting on coordinates by
    (T v)_l = sum_m T[l][m] v_m; unitarity is verified exactly, and the
    output is checked to preserve phi.
    """
    M = realification.module
    n = M.dim
    T = [[e if isinstance(e, Quat) else M.algebra(e) for e in row]
         for row in T]
    _check_unitary(T, M)
    rep = realification.rep
    Trep = [[rep(T[l][m]) for m in range(n)] for l in range(n)]
    out = np.zeros((2 * n, 2 * n))
    for l in range(n):
        for s, delta in enumerate((realification.beta,
                                   realification.alpha_elem)):
            # image of basis vector e_l * delta
            for m in range(n):
                img = Trep[m][l] @ delta
                x, y = realification._decompose(img)
                out[2 * m, 2 * l + s] = x
                out[2 * m + 1, 2 * l + s] = y
    G = realification.phi
    if not np.allclose(out.T @ G @ out, G, atol=1e-7 * max(1.0, np.abs(G).max())):
        raise ArithmeticError("push-forward does not preserve phi")
    return out


def reflection_map(v: ModVector):
    """Quat matrix of the module reflection sigma_v, for push_forward."""
    M = v.module
    a = eval_form(v, v)
    if a.is_zero():
        raise ValueError("reflection requires a regular vector")
    ainv = a.inverse()
    n = M.dim
    c = [sum((v.coords[l].conj() * M.gram[l][m] for l in range(n)),
             M.algebra.zero()) for m in range(n)]
    two = M.algebra(2)
    T = [[(M.algebra.one() if l == m else M.algebra.zero())
          - two * v.coords[l] * ainv * c[m] for m in range(n)]
         for l in range(n)]
    return T


# -- K-rational subspaces ---------------------------------------------

def rational_subspace(vec: ModVector, realification: Realification) -> HSubspace:
    """H(u^perp) for a positive vector u, or the geodesic H(<v>) for a
    negative vector v; tagged with the defining module data."""
    s = vec.norm_sign()
    if s > 0:
        ws = perp(vec)
        return realification.subspace(ws, rational_tag=("perp", vec))
    if s < 0:
        return realification.subspace([vec], rational_tag=("span", vec))
    raise ValueError("vector is null: no associated subspace")


def orthogonal_rational_hyperplanes(p1: ModVector, p2: ModVector,
                                    realification: Realification):
    """K-rational hyperbolic hyperplanes S_1 >= gamma_1, S_2 >= gamma_2
    meeting orthogonally along a K-rational geodesic.

    Returns (H1, H2, gamma) where H_i = H(u_i^perp) for the solver
    outputs u_i and gamma = H(<w>) with w spanning u_1^perp ∩ u_2^perp.
    Also checks that L = H(<p1, p2>) stays at positive distance from
    gamma.
    """
    u1, u2, _trace = lemma_L_solve(p1, p2)
    if not eval_form(u1, u2).is_zero():
        raise ArithmeticError("solver outputs not orthogonal")
    for u in (u1, u2):
        if u.norm_sign() <= 0:
            raise ValueError("solver output is not a positive vector")
    H1 = rational_subspace(u1, realification)
    H2 = rational_subspace(u2, realification)
    w = _perp_of_plane(u1, u2)
    if w.norm_sign() >= 0:
        raise ValueError("common perpendicular generator is not negative")
    gamma = rational_subspace(w, realification)
    if not (H1.contains(gamma) and H2.contains(gamma)):
        raise ArithmeticError("gamma is not contained in both hyperplanes")
    theta = angle(H1, H2, gamma)
    if abs(theta - np.pi / 2) > 1e-6:
        raise ArithmeticError(f"hyperplanes meet at angle {theta}, not pi/2")
    L = realification.subspace([p1, p2])
    lo, _hi = dist_subspaces(L, gamma)
    if lo <= 0:
        raise ArithmeticError("H(P) and gamma are not at positive distance")
    return H1, H2, gamma
