"""Quadrilateral combination in H5: involutions, the representation,
finite-depth assumption audits and separation certificates.

A scenario supplies a discrete group acting on a hyperbolic 3-space
L1 inside H5 (two marked translations t1, t2 with ultraparallel axes)
and a pair of orthogonal 3-dimensional subspaces S1, S2 meeting L1
along the translation axes.  The commuting reflections sigma_1,
sigma_2 through S1, S2 extend the group to a quadrilateral of groups;
the representation phi sends the four free letters a, b, c, d to

    a -> t1,  b -> t2,  c -> sigma_2 t1 sigma_2,  d -> sigma_1 t2 sigma_1.

All group elements are exact rational Lorentz matrices; geometry is
evaluated in extended precision after recentering each comparison at
one of the two cells involved, so that margins and distances carry
relative rounding error only.
"""

from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction

import numpy as np
from mpmath import mp

from . import minkowski as mk
from . import squares as sq

DIM = 6
_LD = np.longdouble
_SIG = [1, 1, 1, 1, 1, -1]


class ScenarioError(ValueError):
    pass


# -- exact rational Lorentz matrices -----------------------------------

def fr(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10 ** 12)
    return Fraction(x)


def fmat(rows):
    return tuple(tuple(fr(x) for x in row) for row in rows)


def fvec(row):
    return tuple(fr(x) for x in row)


def mat_identity(n=DIM):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n))
                 for i in range(n))


def mat_mul(A, B):
    n, m, k = len(A), len(B[0]), len(B)
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(k))
                       for j in range(m)) for i in range(n))


def mat_vec(A, v):
    return tuple(sum(A[i][t] * v[t] for t in range(len(v)))
                 for i in range(len(A)))


def mat_transpose(A):
    return tuple(tuple(A[j][i] for j in range(len(A)))
                 for i in range(len(A[0])))


def phi_dot(u, v) -> Fraction:
    return sum(s * a * b for s, a, b in zip(_SIG, u, v))


def lorentz_inverse(M):
    """Inverse of a form-preserving matrix: J M^T J (J = diag form)."""
    return tuple(tuple(Fraction(_SIG[i] * _SIG[j]) * M[j][i]
                       for j in range(DIM)) for i in range(DIM))


def preserves_form_exact(M) -> bool:
    for i in range(DIM):
        for j in range(i, DIM):
            val = sum(_SIG[t] * M[t][i] * M[t][j] for t in range(DIM))
            want = Fraction(_SIG[i]) if i == j else Fraction(0)
            if val != want:
                return False
    return True


def to_ld(A) -> np.ndarray:
    """Exact matrix or vector to extended-precision floats."""
    def conv(x):
        return _LD(x.numerator) / _LD(x.denominator)
    arr = np.asarray(A, dtype=object)
    out = np.empty(arr.shape, dtype=_LD)
    for idx in np.ndindex(arr.shape):
        out[idx] = conv(arr[idx])
    return out


def _solve_exact(A, b):
    """Solve the square rational system A x = b; None if singular."""
    n = len(A)
    M = [list(row) + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return tuple(M[i][n] for i in range(n))


def _kernel_basis(A):
    """Basis of the rational kernel of the square matrix A."""
    n = len(A)
    M = [list(row) for row in A]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, n) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = 1 / M[row][col]
        M[row] = [x * inv for x in M[row]]
        for r in range(n):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -M[r][fc]
        basis.append(tuple(v))
    return basis


# -- involutions -------------------------------------------------------

def build_involutions(S1, S2):
    """Commuting isometric involutions with fixed-point sets S1, S2.

    Each S is a list of four rational basis vectors spanning a
    Lorentzian subspace of signature (3, 1); the involution is the
    orthogonal reflection 2 P_S - Id.  Raises ScenarioError when the
    reflections fail to commute (the subspaces are not orthogonal
    along their intersection).
    """
    sig1 = _reflection_through(fmat(S1))
    sig2 = _reflection_through(fmat(S2))
    for s in (sig1, sig2):
        if mat_mul(s, s) != mat_identity():
            raise ScenarioError("reflection is not an involution")
        if not preserves_form_exact(s):
            raise ScenarioError("reflection does not preserve the form")
    if mat_mul(sig1, sig2) != mat_mul(sig2, sig1):
        raise ScenarioError("subspaces are not orthogonal: "
                            "reflections do not commute")
    return sig1, sig2


def _reflection_through(B):
    """Reflection fixing span of the rows of B (exact)."""
    k = len(B)
    gram = tuple(tuple(phi_dot(B[i], B[j]) for j in range(k))
                 for i in range(k))
    cols = []
    for j in range(DIM):
        rhs = tuple(Fraction(_SIG[j]) * B[i][j] for i in range(k))
        coef = _solve_exact(gram, rhs)
        if coef is None:
            raise ScenarioError("degenerate subspace")
        cols.append(tuple(sum(coef[i] * B[i][t] for i in range(k))
                          for t in range(DIM)))
    # P[t][j] = projection matrix; reflection = 2P - I
    return tuple(tuple(2 * cols[j][t] - Fraction(int(t == j))
                       for j in range(DIM)) for t in range(DIM))


def fixed_space(M):
    """Rational basis of the fixed space of M."""
    A = tuple(tuple(M[i][j] - Fraction(int(i == j)) for j in range(DIM))
              for i in range(DIM))
    return _kernel_basis(A)


def space_signature(basis):
    g = np.array([[float(phi_dot(u, v)) for v in basis] for u in basis])
    ev = np.linalg.eigvalsh(g)
    return int(np.sum(ev > 1e-9)), int(np.sum(ev < -1e-9))


# -- scenarios ---------------------------------------------------------

@dataclasses.dataclass
class Scenario:
    """Input data for the combination construction."""

    field: dict
    module: dict | None
    lorentz: dict
    G1: list
    t1: tuple
    t2: tuple
    S1: tuple
    S2: tuple
    depth: int
    R0: float
    r: float

    def to_json(self) -> str:
        def ser_mat(M):
            return [[str(x) for x in row] for row in M]
        return json.dumps({
            "field": self.field,
            "module": self.module,
            "lorentz": self.lorentz,
            "G1": [ser_mat(g) for g in self.G1],
            "t1": ser_mat(self.t1),
            "t2": ser_mat(self.t2),
            "S1": ser_mat(self.S1),
            "S2": ser_mat(self.S2),
            "depth": self.depth,
            "R0": self.R0,
            "r": self.r,
        }, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Scenario":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"scenario is not valid JSON: {exc}")
        try:
            return cls(
                field=d["field"], module=d.get("module"),
                lorentz=d["lorentz"],
                G1=[fmat(g) for g in d["G1"]],
                t1=fmat(d["t1"]), t2=fmat(d["t2"]),
                S1=fmat(d["S1"]), S2=fmat(d["S2"]),
                depth=int(d["depth"]), R0=float(d["R0"]),
                r=float(d["r"]))
        except (KeyError, ValueError, ZeroDivisionError) as exc:
            raise ScenarioError(f"malformed scenario: {exc}") from exc


def _plane_translation(u, p, ch, sh):
    """Exact translation in the plane span(u, p); identity on the
    orthogonal complement.  u unit spacelike, p unit timelike."""
    cols = []
    for j in range(DIM):
        e = tuple(Fraction(int(t == j)) for t in range(DIM))
        alpha = phi_dot(u, e)
        beta = -phi_dot(p, e)
        da = (ch - 1) * alpha + sh * beta
        db = sh * alpha + (ch - 1) * beta
        cols.append(tuple(e[t] + da * u[t] + db * p[t]
                          for t in range(DIM)))
    return tuple(tuple(cols[j][i] for j in range(DIM))
                 for i in range(DIM))


def _cosh_sinh_steps(steps: int):
    """(cosh, sinh) of steps times the base length acosh(5/4)."""
    ch, sh = Fraction(1), Fraction(0)
    for _ in range(abs(steps)):
        ch, sh = Fraction(5, 4) * ch + Fraction(3, 4) * sh, \
            Fraction(3, 4) * ch + Fraction(5, 4) * sh
    return ch, sh


#: spacelike / timelike spans of the two marked axes
_U1 = fvec([1, 0, 0, 0, 0, 0])
_P1 = fvec([0, "3/4", 0, 0, 0, "5/4"])
_U2 = fvec([0, 0, 0, 1, 0, 0])
_P2 = fvec([0, 0, 0, 0, "3/4", "5/4"])

_S1_BASIS = [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0],
             [0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 1]]
_S2_BASIS = [[0, 0, 1, 0, 0, 0], [0, 0, 0, 1, 0, 0],
             [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]]


def make_schottky_scenario(steps: int = 24, depth: int = 4,
                           r: float = 0.4) -> Scenario:
    """Scenario with two exact rational translations of length
    steps * ln 2 along ultraparallel axes at distance acosh(25/16)."""
    ch, sh = _cosh_sinh_steps(steps)
    t1 = _plane_translation(_U1, _P1, ch, sh)
    t2 = _plane_translation(_U2, _P2, ch, sh)
    return Scenario(
        field={"type": "Q"}, module=None,
        lorentz={"dim": DIM, "signature": [5, 1], "gram": "standard"},
        G1=[], t1=t1, t2=t2,
        S1=fmat(_S1_BASIS), S2=fmat(_S2_BASIS),
        depth=depth, R0=float(np.arccosh(25 / 16)), r=r)


def make_broken_scenario(steps: int = 1, depth: int = 4) -> Scenario:
    """Same geometry with translations far too short: the orbit
    separation required by the combination assumption fails."""
    return make_schottky_scenario(steps=steps, depth=depth)



def dist_geodesic_frames(UA, UB):
    """Distance between geodesics given by orthonormal 2-frames, in
    extended precision via the closed-form 2x2 pencil.

    The small pencil eigenvalue equals -cosh^2 of the distance and is
    a determinant quotient that cancels about e^d of precision, so the
    quadratic formula is evaluated in longdouble; frames rounded from
    exact matrices keep relative accuracy this way.  Batched over
    leading axes.
    """
    UA = np.asarray(UA, dtype=_LD)
    UB = np.asarray(UB, dtype=_LD)
    sig = np.ones(UA.shape[-2], dtype=_LD)
    sig[-1] = -1
    F = np.einsum("...ia,...i,...ib->...ab", UA, sig, UB)
    ft = F[..., :, -1]
    fs = F[..., :, :-1]
    Q = (ft[..., :, None] * ft[..., None, :]
         - np.einsum("...as,...bs->...ab", fs, fs))
    a00, a01 = Q[..., 0, 0], Q[..., 0, 1]
    a10, a11 = -Q[..., 1, 0], -Q[..., 1, 1]
    tr = a00 + a11
    det = a00 * a11 - a01 * a10
    disc = tr * tr - 4 * det
    ok = disc > 0
    root = np.sqrt(np.where(ok, disc, 0))
    cosh2 = np.ones_like(tr)
    for lam in ((tr + root) / 2, (tr - root) / 2):
        # eigenvector of [[a00, a01], [a10, a11]]: take the larger of
        # the two candidate columns to dodge degenerate zero rows
        n1 = np.abs(a01) + np.abs(lam - a00)
        n2 = np.abs(lam - a11) + np.abs(a10)
        v0 = np.where(n1 >= n2, a01, lam - a11)
        v1 = np.where(n1 >= n2, lam - a00, a10)
        timelike = ((v0 * v0 - v1 * v1) < 0) | (n1 + n2 == 0)
        cosh2 = np.where(ok & timelike, -lam, cosh2)
    cosh2 = np.maximum(cosh2, 1)
    return np.asarray(np.arccosh(np.sqrt(cosh2)), dtype=float)


def _span_gram(V):
    return tuple(tuple(phi_dot(u, v) for v in V) for u in V)


def _inv2(G):
    det = G[0][0] * G[1][1] - G[0][1] * G[1][0]
    if det == 0:
        raise ScenarioError("degenerate span gram")
    return ((G[1][1] / det, -G[0][1] / det),
            (-G[1][0] / det, G[0][0] / det))


def _idot(u, v):
    """Integer Minkowski dot (time coordinate last)."""
    return (u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]
            + u[4] * v[4] - u[5] * v[5])


def _int_substrate(phi):
    """Denominator-cleared integer data for the exact pencil: common
    generator denominator, integer letter matrices, integer axis spans
    with their grams, adjugates and determinants."""
    sub = getattr(phi, "_intsub", None)
    if sub is not None:
        return sub
    letters = _GEN_LETTERS + _GEN_LETTERS.upper()
    mats = {}
    den = 1
    for ch in letters:
        g = phi.gens[ch.lower()]
        mats[ch] = g if ch.islower() else lorentz_inverse(g)
        for row in mats[ch]:
            for v in row:
                den = den * v.denominator // math.gcd(den, v.denominator)
    B = {ch: tuple(tuple(int(v * den) for v in row)
                   for row in mats[ch]) for ch in letters}
    spans = {}
    gram_frac = {}
    adj = {}
    dets = {}
    for label, V in phi.axis_spans.items():
        c = 1
        for v in V:
            for comp in v:
                c = c * comp.denominator // math.gcd(c, comp.denominator)
        vi = tuple(tuple(int(comp * c) for comp in v) for v in V)
        spans[label] = vi
        g = [[_idot(u, v) for v in vi] for u in vi]
        gram_frac[label] = tuple(tuple(Fraction(g[i][j], c * c)
                                       for j in range(2))
                                 for i in range(2))
        adj[label] = ((g[1][1], -g[0][1]), (-g[1][0], g[0][0]))
        dets[label] = g[0][0] * g[1][1] - g[0][1] * g[1][0]
        if dets[label] == 0:
            raise ScenarioError("degenerate span gram")
    sub = (den, B, spans, gram_frac, adj, dets)
    phi._intsub = sub
    phi._intcols = {}
    return sub


def _int_cols(phi, w: str, y: str):
    """Integer images den^len(w) M(w) v of the cleared y-span vectors,
    memoized by suffix so shared tails cost one matrix-vector product."""
    den, B, spans, _, _, _ = _int_substrate(phi)
    key = (w, y)
    got = phi._intcols.get(key)
    if got is not None:
        return got
    if not w:
        out = spans[y]
    else:
        M = B[w[0]]
        out = tuple(tuple(sum(M[i][k] * v[k] for k in range(6))
                          for i in range(6))
                    for v in _int_cols(phi, w[1:], y))
    phi._intcols[key] = out
    return out


def _axis_pencil_exact(phi, x: str, w: str, y: str):
    """Exact 2x2 pencil between the x-axis and the w-translate of the
    y-axis: A = gram_x^-1 (-F gram_y^-1 F^T) with F the cross gram.

    Every entry is an exact rational formed from the exact axis spans
    and word matrix, so no cancellation occurs no matter how far the
    translate has drifted along its own geodesic.  The core runs on
    denominator-cleared integers (adjugates instead of inverses, one
    overall scale) because per-element rational arithmetic spends most
    of its time normalizing.  Returns (A, gram_x) with Fraction
    entries, cached per (x, w, y).
    """
    key = (x, w, y)
    got = phi._pencil_exact.get(key)
    if got is not None:
        return got
    den, B, spans, gram_frac, adj, dets = _int_substrate(phi)
    u1, u2 = _int_cols(phi, w, y)
    vx1, vx2 = spans[x]
    F = ((_idot(vx1, u1), _idot(vx1, u2)),
         (_idot(vx2, u1), _idot(vx2, u2)))
    ay = adj[y]
    FG = [[F[i][0] * ay[0][j] + F[i][1] * ay[1][j] for j in range(2)]
          for i in range(2)]
    Q = [[-(FG[i][0] * F[j][0] + FG[i][1] * F[j][1]) for j in range(2)]
         for i in range(2)]
    ax = adj[x]
    A_int = [[ax[i][0] * Q[0][j] + ax[i][1] * Q[1][j] for j in range(2)]
             for i in range(2)]
    sigma = dets[x] * dets[y] * den ** (2 * len(w))
    A = [[Fraction(A_int[i][j], sigma) for j in range(2)]
         for i in range(2)]
    gx = gram_frac[x]
    phi._pencil_exact[key] = (A, gx)
    return A, gx


def _axis_pencil(phi, x: str, w: str, y: str):
    """Float solution of the exact pencil: (distance, timelike
    eigenvector in x-span coordinates or None, x-span gram as floats).
    cosh^2 of the distance is -lambda at the timelike eigenvector."""
    A, gx = _axis_pencil_exact(phi, x, w, y)
    gxf = [[float(gx[i][j]) for j in range(2)] for i in range(2)]
    tr = A[0][0] + A[1][1]
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    disc = tr * tr - 4 * det
    if disc <= 0:
        return 0.0, None, gxf
    trf, detf, discf = float(tr), float(det), float(disc)
    rootf = math.sqrt(discf)
    # larger-magnitude root first, companion via the product
    lam1 = (trf + rootf) / 2 if trf >= 0 else (trf - rootf) / 2
    lam2 = detf / lam1 if lam1 != 0 else -rootf / 2
    if lam1 == 0:
        lam1 = rootf / 2
    af = [[float(A[i][j]) for j in range(2)] for i in range(2)]
    for lam in (lam1, lam2):
        n1 = abs(af[0][1]) + abs(lam - af[0][0])
        n2 = abs(lam - af[1][1]) + abs(af[1][0])
        if n1 >= n2:
            v = (af[0][1], lam - af[0][0])
        else:
            v = (lam - af[1][1], af[1][0])
        if n1 == 0 and n2 == 0:
            v = (0.0, 1.0)
        znorm = (gxf[0][0] * v[0] * v[0] + 2 * gxf[0][1] * v[0] * v[1]
                 + gxf[1][1] * v[1] * v[1])
        if znorm < 0:
            d = math.acosh(math.sqrt(max(-lam, 1.0)))
            return d, v, gxf
    return 0.0, None, gxf


def _axis_pencil_cached(phi, x: str, w: str, y: str):
    key = (x, w, y)
    got = phi._pencil.get(key)
    if got is None:
        got = phi._pencil[key] = _axis_pencil(phi, x, w, y)
    return got


def axis_pair_distance(phi, x: str, w: str, y: str) -> float:
    """Distance between the x-axis and the w-translate of the y-axis,
    via the exact-rational pencil."""
    return _axis_pencil_cached(phi, x, w, y)[0]


def axis_pair_foot(phi, x: str, w: str, y: str) -> np.ndarray:
    """Closest point on the x-axis to the w-translate of the y-axis,
    as a future-oriented point (longdouble), via the exact pencil."""
    d, z, gxf = _axis_pencil_cached(phi, x, w, y)
    if z is None:
        raise ScenarioError(
            f"no transverse closest point for ({x!r}, {w!r}, {y!r})")
    nrm2 = -(gxf[0][0] * z[0] * z[0] + 2 * gxf[0][1] * z[0] * z[1]
             + gxf[1][1] * z[1] * z[1])
    Vx = [to_ld(v) for v in phi.axis_spans[x]]
    foot = (z[0] * Vx[0] + z[1] * Vx[1]) / np.sqrt(_LD(nrm2))
    if foot[-1] < 0:
        foot = -foot
    return foot


# -- the representation ------------------------------------------------

def _axis_null_vectors(M):
    """Exact rational null eigenvectors spanning the invariant geodesic
    of an exact hyperbolic translation."""
    tr = sum(M[i][i] for i in range(DIM))
    # eigenvalues lam, 1/lam with lam + 1/lam = tr - 4 (four unit ones)
    s = tr - 4
    disc = s * s - 4
    if disc <= 0:
        raise ScenarioError("marked generator is not a translation")
    # lam is rational iff disc is a perfect square
    num, den = disc.numerator, disc.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise ScenarioError("translation length is not exactly "
                            "representable")
    root = Fraction(rn, rd)
    vecs = []
    for lam in ((s + root) / 2, (s - root) / 2):
        A = tuple(tuple(M[i][j] - lam * Fraction(int(i == j))
                        for j in range(DIM)) for i in range(DIM))
        ker = _kernel_basis(A)
        if len(ker) != 1:
            raise ScenarioError("marked generator has a degenerate axis")
        vecs.append(tuple(ker[0]))
    return tuple(vecs)


def _axis_frame(M):
    """Invariant geodesic of an exact hyperbolic translation, as an
    orthonormal 2-frame (spacelike, future timelike) columns."""
    vp, vm = (to_ld(v) for v in _axis_null_vectors(M))
    # normalize the null directions so that their sum is timelike
    cross = float(np.sum(vp[:-1] * vm[:-1]) - vp[-1] * vm[-1])
    if cross > 0:
        vm = -vm
    p = vp / np.sqrt(_LD(2) * _LD(-cross)) + \
        vm / np.sqrt(_LD(2) * _LD(-cross))
    u = vp / np.sqrt(_LD(2) * _LD(-cross)) - \
        vm / np.sqrt(_LD(2) * _LD(-cross))
    if p[-1] < 0:
        p, u = -p, -u
    frame = np.stack([u, p], axis=-1)
    return frame


def _orthonormalize(frame):
    """Gram-Schmidt at unit scale (timelike column last)."""
    cols = [frame[:, j].astype(_LD) for j in range(frame.shape[1])]
    sig = np.array(_SIG, dtype=_LD)

    def dot(x, y):
        return float(np.sum(sig * x * y))
    out = []
    time = None
    for v in cols:
        w = v.copy()
        for u in out:
            w = w - dot(u, w) / dot(u, u) * u
        if time is not None:
            w = w - dot(time, w) / dot(time, time) * time
        n = dot(w, w)
        if abs(n) < 1e-24:
            continue
        w = w / np.sqrt(_LD(abs(n)))
        if n < 0:
            time = w if w[-1] > 0 else -w
        else:
            out.append(w)
    if time is None:
        raise ScenarioError("subspace carries no timelike direction")
    return np.stack(out + [time], axis=-1)


_GEN_LETTERS = "abcd"


class Phi:
    """The representation of the free quadrilateral group on H5."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        sig1, sig2 = build_involutions(scenario.S1, scenario.S2)
        self.sigma1, self.sigma2 = sig1, sig2
        t1, t2 = scenario.t1, scenario.t2
        self.gens = {
            "a": t1,
            "b": t2,
            "c": mat_mul(sig2, mat_mul(t1, sig2)),
            "d": mat_mul(sig1, mat_mul(t2, sig1)),
        }
        for name, M in list(self.gens.items()) + list(
                zip("st", (sig1, sig2))):
            if not preserves_form_exact(M):
                raise ScenarioError(
                    f"generator {name} does not preserve the form")
        # axes of the four letters
        ax_a = _axis_frame(t1)
        ax_b = _axis_frame(t2)
        f1, f2 = to_ld(sig1), to_ld(sig2)
        self.axes = {
            "a": ax_a, "b": ax_b,
            "c": _fix_time(f2 @ ax_a), "d": _fix_time(f1 @ ax_b),
        }
        # exact rational spans of the same geodesics, for the exact
        # pencil distance used on far-translated pairs
        na, nb = _axis_null_vectors(t1), _axis_null_vectors(t2)
        self.axis_spans = {
            "a": na, "b": nb,
            "c": tuple(tuple(mat_vec(sig2, v)) for v in na),
            "d": tuple(tuple(mat_vec(sig1, v)) for v in nb),
        }
        self._exact = {"": mat_identity()}
        self._pencil = {}
        self._pencil_exact = {}
        # base 3-space L1 spans the two axes; L_v are its reflections
        raw = np.concatenate([ax_a, ax_b], axis=-1)
        self.L1 = _orthonormalize(raw)
        self.vertex_frames = {
            1: self.L1, 2: _fix_time(f2 @ self.L1),
            3: _fix_time(f1 @ (f2 @ self.L1)),
            4: _fix_time(f1 @ self.L1),
        }
        self._check_stabilizers()
        self._float = {"": np.eye(DIM, dtype=_LD)}
        for ch in _GEN_LETTERS:
            self._float[ch] = to_ld(self.gens[ch])
            self._float[ch.upper()] = to_ld(
                lorentz_inverse(self.gens[ch]))
        self.metrics = self._measure()

    # -- exact layer ---------------------------------------------------

    def exact_matrix(self, word: str):
        """Exact rational matrix of a reduced word (memoized)."""
        word = sq.reduce_word(word)
        got = self._exact.get(word)
        if got is not None:
            return got
        ch = word[-1]
        g = self.gens[ch.lower()]
        if ch.isupper():
            g = lorentz_inverse(g)
        M = mat_mul(self.exact_matrix(word[:-1]), g)
        self._exact[word] = M
        return M

    def _check_stabilizers(self):
        """Marked generators must stabilize the base 3-space."""
        for name in ("a", "b"):
            M = self.gens[name]
            frame = self.L1
            img = to_ld(M) @ frame
            # residual of img columns against span(frame)
            sig = np.array(_SIG, dtype=_LD)
            G = (frame * sig[:, None]).T @ frame
            coef = np.linalg.solve(G.astype(float),
                                   ((frame * sig[:, None]).T @ img
                                    ).astype(float))
            res = img - frame @ coef.astype(_LD)
            if float(np.max(np.abs(res.astype(float)))) > 1e-6 * float(
                    np.max(np.abs(img.astype(float)))):
                raise ScenarioError(
                    f"generator {name} does not stabilize the base "
                    "3-space")

    # -- float layer ---------------------------------------------------

    def word_matrix(self, word: str) -> np.ndarray:
        """Extended-precision matrix of a reduced word (memoized)."""
        got = self._float.get(word)
        if got is not None:
            return got
        M = self.word_matrix(word[:-1]) @ self._float[word[-1]]
        self._float[word] = M
        return M

    def edge_geodesic(self, cell: sq.Cell, center: str = "") -> np.ndarray:
        """Frame of the geodesic of an edge cell, in coordinates
        recentered at the group element `center`."""
        w = sq.mul(sq.inv(center), cell.rep)
        return self.word_matrix(w) @ self.axes[cell.label]

    def vertex_space(self, cell: sq.Cell, center: str = "") -> np.ndarray:
        w = sq.mul(sq.inv(center), cell.rep)
        return self.word_matrix(w) @ self.vertex_frames[cell.label]

    # -- measured invariants -------------------------------------------

    def _measure(self) -> dict:
        axes, L1 = self.axes, self.L1
        f1, f2 = to_ld(self.sigma1), to_ld(self.sigma2)
        L3 = _fix_time(f1 @ (f2 @ L1))
        d12 = float(dist_geodesic_frames(axes["a"], axes["b"]))
        d13 = float(mk.dist_subspaces_frames(
            L1.astype(float), L3.astype(float)))
        tau = mat_mul(self.sigma1, self.sigma2)
        core = _orthonormalize(to_ld(fixed_space(tau)).T)
        d_core = float(mk.dist_subspaces_frames(
            core.astype(float), L1.astype(float)))
        a1 = mk.angle_between(_s_frame(self.scenario.S1).astype(float),
                              L1.astype(float),
                              axes["a"].astype(float))
        a2 = mk.angle_between(_s_frame(self.scenario.S2).astype(float),
                              L1.astype(float),
                              axes["b"].astype(float))
        tr = sum(self.scenario.t1[i][i] for i in range(DIM)) - 4
        ell = float(np.arccosh(float(tr) / 2.0))
        return {
            "R0_measured": d12, "d_L1_L3": d13,
            "d_core_L1": d_core, "alpha1": a1, "alpha2": a2,
            "angle_floor": min(a1, a2),
            "translation_length": ell,
        }


def _fix_time(frame):
    """Future-orient the timelike (last) column."""
    if frame[-1, -1] < 0:
        frame = frame.copy()
        frame[:, -1] = -frame[:, -1]
    return frame


def _s_frame(S):
    return _orthonormalize(to_ld(S).T)


def build_phi(scenario: Scenario) -> Phi:
    """Build the representation and check the scenario invariants."""
    phi = build = Phi(scenario)
    m = phi.metrics
    if abs(m["R0_measured"] - scenario.R0) > 1e-6:
        raise ScenarioError(
            f"axes are at distance {m['R0_measured']:.6f}, scenario "
            f"declares R0 = {scenario.R0:.6f}")
    if m["d_L1_L3"] < scenario.r - 1e-9:
        raise ScenarioError(
            f"d(L1, L3) = {m['d_L1_L3']:.6f} is below r = {scenario.r}")
    if m["d_core_L1"] < scenario.r / 2 - 1e-9:
        raise ScenarioError(
            "the common geodesic of S1, S2 is closer than r/2 to the "
            "base 3-space")
    return phi


# -- assumption audit --------------------------------------------------

def _reduced_words(alphabet: str, max_len: int):
    """Yield all freely reduced words over the letters and their
    inverses, lengths 1..max_len, depth-first."""
    letters = alphabet + alphabet.upper()

    def rec(w):
        for ch in letters:
            if w and w[-1] == ch.swapcase():
                continue
            nw = w + ch
            yield nw
            if len(nw) < max_len:
                yield from rec(nw)
    yield from rec("")


def _is_power_pair(w: str, x: str, y: str) -> bool:
    """True when w = x^p y^q (either exponent may be zero)."""
    i = 0
    while i < len(w) and w[i].lower() == x:
        if i and w[i] != w[i - 1]:
            return False
        i += 1
    j = i
    while j < len(w) and w[j].lower() == y:
        if j > i and w[j] != w[j - 1]:
            return False
        j += 1
    return j == len(w)


def verify_assumption(scenario: Scenario, depth: int = None, *,
                      R: float, R1: float, phi: Phi = None,
                      slack: float = 1e-6) -> dict:
    """Finite-depth audit of the separation assumption on the vertex
    group: orbit geodesics of the two marked axes are R-apart except
    for the exempt translates of the base pair, and the feet of the
    close translates are R1-separated along each axis."""
    if phi is None:
        phi = build_phi(scenario)
    if depth is None:
        depth = scenario.depth
    m = phi.metrics
    item1 = {"d": m["R0_measured"], "R0": scenario.R0,
             "ok": abs(m["R0_measured"] - scenario.R0) <= 1e-6}

    # item 2: relative positions of orbit geodesic pairs are words of
    # length <= 2 * depth in the vertex group
    axes = phi.axes
    checked = 0
    min_dist = np.inf
    violations = []
    for w in _reduced_words("ab", 2 * depth):
        for x in "ab":
            for y in "ab":
                if x == y and all(ch.lower() == x for ch in w):
                    continue
                if x != y and _is_power_pair(w, x, y):
                    continue
                d = axis_pair_distance(phi, x, w, y)
                checked += 1
                if d < min_dist:
                    min_dist = d
                if d < R - slack:
                    violations.append({"pair": (x, w, y), "distance": d})
    item2 = {"R": R, "checked": checked, "min_distance": float(min_dist),
             "violations": violations[:10],
             "ok": not violations}

    # item 3: feet of the R0-close translates x^p axis_y on axis_x.
    # Equivariance gives foot(x^p axis_y) = x^p foot(axis_y), so the
    # pairwise gaps only depend on the exponent difference.
    item3_ok = True
    min_proj = np.inf
    for x, y in (("a", "b"), ("b", "a")):
        _, f0, _ = mk.closest_pair(axes[x].astype(float),
                                   axes[y].astype(float))
        f0 = f0.astype(_LD)
        for mexp in range(1, 2 * depth + 1):
            fm = phi.word_matrix(x * mexp) @ f0
            d = float(mk.dist_points(f0, fm))
            min_proj = min(min_proj, d)
            if d < R1 - slack:
                item3_ok = False
    item3 = {"R1": R1, "min_projection_gap": float(min_proj),
             "ok": item3_ok}

    return {"item1": item1, "item2": item2, "item3": item3,
            "ok": item1["ok"] and item2["ok"] and item3_ok}


# -- certification -----------------------------------------------------

@dataclasses.dataclass
class Certificate:
    delta: float
    depth: int
    min_separation: tuple
    status: str
    witness: dict | None
    assumption_report: dict | None = None
    faithfulness_report: dict | None = None

    def to_json(self) -> str:
        return json.dumps({
            "delta": self.delta, "depth": self.depth,
            "min_separation": list(self.min_separation),
            "status": self.status, "witness": self.witness,
            "assumption_report": self.assumption_report,
            "faithfulness_report": self.faithfulness_report,
        }, indent=2, sort_keys=True, default=float)


def _pair_distance_sweep(phi: Phi, edges, slack, R0, r, delta):
    """Certified pairwise separations of edge geodesics, recentered at
    the first cell of each pair.  Returns (min distance, worst pair,
    branch violations)."""
    edges = sorted(edges, key=lambda e: (len(e.rep), e.rep, e.label))
    infos = []
    for e in edges:
        infos.append((e, sq.inv(e.rep)))
    min_d = np.inf
    worst = None
    violations = []
    seen = {}
    for i in range(len(infos)):
        e1, inv1 = infos[i]
        for j in range(i + 1, len(infos)):
            e2, _ = infos[j]
            if e1.label == e2.label and e1.rep == e2.rep:
                continue
            w = sq.mul(inv1, e2.rep)
            key = (e1.label, w, e2.label)
            shared = sq.share_vertex(e1, e2)
            if shared is not None:
                bound, kind = R0, "shared-vertex"
            elif sq.share_face(e1, e2):
                bound, kind = r, "shared-face"
            else:
                bound, kind = delta, "generic"
            prev = seen.get(key)
            if prev is not None:
                continue
            seen[key] = True
            dist = axis_pair_distance(phi, e1.label, w, e2.label)
            f, f2 = (e1.label, e1.rep), (e2.label, e2.rep)
            if dist < min_d:
                min_d = dist
                worst = {"f": f, "f2": f2, "distance": dist,
                         "relation": kind}
            if dist < bound - slack:
                violations.append(
                    {"f": f, "f2": f2, "distance": dist,
                     "bound": bound, "relation": kind})
    return float(min_d), worst, violations


def faithfulness_sweep(phi: Phi, max_len: int = 8) -> dict:
    """Exact check that every nonempty reduced word of bounded length
    maps to a non-identity matrix.

    Tracks the integer image of a single test vector (denominators of
    the generators are cleared by a common scale), which proves
    non-identity exactly at a fraction of the cost of a full matrix
    product; any word fixing the test vector is confirmed against the
    full exact matrix.
    """
    ident = mat_identity()
    letters = _GEN_LETTERS + _GEN_LETTERS.upper()
    mats = {}
    den = 1
    for ch in letters:
        g = phi.gens[ch.lower()]
        mats[ch] = g if ch.islower() else lorentz_inverse(g)
        for row in mats[ch]:
            for x in row:
                den = den * x.denominator // math.gcd(den, x.denominator)
    B = {ch: tuple(tuple(int(x * den) for x in row)
                   for row in mats[ch]) for ch in letters}
    v0 = (1, 2, 3, 5, 7, 11)
    checked = 0
    witness = None
    # words grow by left extension so the column M(w) v0 updates with
    # one integer matrix-vector product per node
    stack = [("", v0, 1)]
    while stack and witness is None:
        w, col, scale = stack.pop()
        c0, c1, c2, c3, c4, c5 = col
        for ch in letters:
            if w and w[0] == ch.swapcase():
                continue
            b = B[ch]
            nc = tuple(r[0] * c0 + r[1] * c1 + r[2] * c2 + r[3] * c3
                       + r[4] * c4 + r[5] * c5 for r in b)
            nscale = scale * den
            checked += 1
            if nc == tuple(nscale * x for x in v0):
                if phi.exact_matrix(ch + w) == ident:
                    witness = ch + w
                    break
            if len(w) + 1 < max_len:
                stack.append((ch + w, nc, nscale))
    return {"max_len": max_len, "checked": checked,
            "witness": witness, "ok": witness is None}


def certify(scenario: Scenario, consts, depth: int = None, *,
            faith_len: int = 8, slack: float = 1e-6) -> Certificate:
    """Finite-depth separation certificate for the representation.

    delta = min(2 rho4, r, R0); every pair of distinct enumerated edge
    cells must carry geodesics at distance >= delta (with the sharper
    per-branch bounds R0 for a shared vertex and r for a shared
    2-face), the assumption audit must pass at R = max(R4, R_star),
    and no nonempty normal form of length <= faith_len may map to the
    identity matrix.
    """
    if depth is None:
        depth = scenario.depth
    phi = build_phi(scenario)
    delta = min(2 * consts.rho4, scenario.r, scenario.R0)
    R = max(consts.R4, consts.R_star)
    status = "pass"
    witness = None
    try:
        Q = sq.QuadOfGroups(g1_generators=[])
        cells = sq.enumerate_cells(Q, depth)
    except sq.BudgetError:
        return Certificate(delta=delta, depth=depth,
                           min_separation=(0.0, 0.0), status="partial",
                           witness={"reason": "enumeration budget"})
    assumption = verify_assumption(scenario, depth, R=R, R1=consts.R1,
                                   phi=phi, slack=slack)
    if not assumption["ok"]:
        status = "fail"
        v = assumption["item2"]["violations"]
        witness = v[0] if v else {"reason": "assumption audit failed"}
    min_d, worst, violations = _pair_distance_sweep(
        phi, cells.edges, slack, scenario.R0, scenario.r, delta)
    if violations:
        status = "fail"
        if witness is None:
            witness = violations[0]
    faith = faithfulness_sweep(phi, faith_len)
    if not faith["ok"]:
        status = "fail"
        if witness is None:
            witness = {"word": faith["witness"],
                       "reason": "identity relation"}
    tol = 1e-9 * (1.0 + abs(min_d))
    return Certificate(
        delta=float(delta), depth=depth,
        min_separation=(float(min_d - tol), float(min_d + tol)),
        status=status, witness=witness,
        assumption_report=assumption, faithfulness_report=faith)


# -- bisector chains ---------------------------------------------------

def _midpoint(p, q):
    m = p + q
    n = -float(mk.mdot(m, m))
    return m / np.sqrt(_LD(n))


def _frac_mp(q):
    return mp.mpf(q.numerator) / mp.mpf(q.denominator)


def _mp_dot(x, y):
    return (sum(x[i] * y[i] for i in range(DIM - 1))
            - x[DIM - 1] * y[DIM - 1])


def _mp_dist(x, y):
    c = -_mp_dot(x, y)
    return mp.acosh(c) if c > 1 else mp.mpf(0)


class _ChainGeometry:
    """Shared high-precision workspace for bisector-chain checks.

    Feet, gaps, bisector normals and the pairwise nesting and margin
    verdicts depend only on the cells involved, never on the enclosing
    path, so each is computed once per cell key and reused across an
    audit.  All vectors are mpmath numbers at a precision chosen from
    the translation length and the enumeration radius, which keeps
    every cancellation within budget.
    """

    def __init__(self, phi: Phi, max_rep: int):
        self.phi = phi
        per_letter = phi.metrics["translation_length"] / math.log(10)
        self.dps = 60 + int(per_letter * (8 * max(max_rep, 1) + 6))
        self.mats = {}
        self.feet = {}
        self.cells = {}
        self.nest = {}
        self.marg = {}
        with mp.workdps(self.dps):
            self.spans = {
                x: tuple(tuple(_frac_mp(c) for c in v)
                         for v in phi.axis_spans[x])
                for x in _GEN_LETTERS}
            self.grams = {
                x: _span_gram(phi.axis_spans[x]) for x in _GEN_LETTERS}

    def mat(self, word: str):
        got = self.mats.get(word)
        if got is None:
            M = self.phi.exact_matrix(word)
            got = self.mats[word] = tuple(
                tuple(_frac_mp(e) for e in row) for row in M)
        return got

    def matvec(self, word: str, v):
        M = self.mat(word)
        return tuple(sum(M[i][j] * v[j] for j in range(DIM))
                     for i in range(DIM))

    def foot(self, x: str, w: str, y: str):
        """Closest point on the x-axis to the w-translate of the
        y-axis, from the exact pencil, at working precision."""
        key = (x, w, y)
        got = self.feet.get(key)
        if got is not None:
            return got
        A, gx = _axis_pencil_exact(self.phi, x, w, y)
        tr = A[0][0] + A[1][1]
        det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
        disc = tr * tr - 4 * det
        if disc <= 0:
            raise ScenarioError(
                f"no transverse closest point for ({x!r}, {w!r}, {y!r})")
        trm, detm = _frac_mp(tr), _frac_mp(det)
        root = mp.sqrt(_frac_mp(disc))
        lam1 = (trm + root) / 2 if tr >= 0 else (trm - root) / 2
        lam2 = detm / lam1 if lam1 != 0 else -root / 2
        if lam1 == 0:
            lam1 = root / 2
        am = [[_frac_mp(A[i][j]) for j in range(2)] for i in range(2)]
        gm = [[_frac_mp(gx[i][j]) for j in range(2)] for i in range(2)]
        for lam in (lam1, lam2):
            n1 = abs(am[0][1]) + abs(lam - am[0][0])
            n2 = abs(lam - am[1][1]) + abs(am[1][0])
            if n1 >= n2:
                z = (am[0][1], lam - am[0][0])
            else:
                z = (lam - am[1][1], am[1][0])
            if n1 == 0 and n2 == 0:
                z = (mp.mpf(0), mp.mpf(1))
            znorm = (gm[0][0] * z[0] * z[0] + 2 * gm[0][1] * z[0] * z[1]
                     + gm[1][1] * z[1] * z[1])
            if znorm < 0:
                V = self.spans[x]
                pt = tuple(z[0] * V[0][i] + z[1] * V[1][i]
                           for i in range(DIM))
                nrm = mp.sqrt(-_mp_dot(pt, pt))
                pt = tuple(c / nrm for c in pt)
                if pt[-1] < 0:
                    pt = tuple(-c for c in pt)
                self.feet[key] = pt
                return pt
        raise ScenarioError(
            f"no timelike closest direction for ({x!r}, {w!r}, {y!r})")

    # cell records: P, Q at the home edge, gap, normal and midpoint

    def edge_cell(self, prev, here, nxt):
        key = ("edge", here, prev, nxt)
        got = self.cells.get(key)
        if got is None:
            P = self.foot(here[1], sq.mul(sq.inv(here[0]), prev[0]),
                          prev[1])
            Q = self.foot(here[1], sq.mul(sq.inv(here[0]), nxt[0]),
                          nxt[1])
            got = self.cells[key] = self._finish(key, here, P, Q)
        return got

    def vertex_cell(self, here, nxt):
        key = ("vertex", here, nxt)
        got = self.cells.get(key)
        if got is None:
            w = sq.mul(sq.inv(here[0]), nxt[0])
            P = self.foot(here[1], w, nxt[1])
            Q = self.matvec(w, self.foot(
                nxt[1], sq.mul(sq.inv(nxt[0]), here[0]), here[1]))
            got = self.cells[key] = self._finish(key, here, P, Q)
        return got

    def _finish(self, key, home, P, Q):
        gap = _mp_dist(P, Q)
        u = tuple(P[i] - Q[i] for i in range(DIM))
        n2 = _mp_dot(u, u)
        if n2 > 0:
            nrm = mp.sqrt(n2)
            u = tuple(c / nrm for c in u)
            m = tuple(P[i] + Q[i] for i in range(DIM))
            nm = mp.sqrt(-_mp_dot(m, m))
            m = tuple(c / nm for c in m)
        else:
            u = m = None
        return {"key": key, "home": home, "P": P, "Q": Q,
                "gap": float(gap), "u": u, "m": m}

    def transport(self, v, src, dst):
        return self.matvec(sq.mul(sq.inv(dst), src), v)

    def nesting(self, ce, cl):
        """(separation, inside, outside) for an earlier and a later
        large cell, evaluated at the earlier cell's home edge."""
        key = (ce["key"], cl["key"])
        got = self.nest.get(key)
        if got is None:
            h = ce["home"][0]
            ul = self.transport(cl["u"], cl["home"][0], h)
            ml = self.transport(cl["m"], cl["home"][0], h)
            c = abs(_mp_dot(ce["u"], ul))
            sep = float(mp.acosh(c)) if c > 1 else 0.0
            inside = _mp_dot(ml, ce["u"]) < 0
            outside = _mp_dot(ce["m"], ul) > 0
            got = self.nest[key] = (sep, inside, outside)
        return got

    def margin(self, c, edge, side):
        """Signed containment margin of the edge's geodesic in the
        half-space {side * phi(., u) <= 0} of the cell's bisector,
        evaluated at the edge's home coordinates from the exact span."""
        key = (c["key"], edge, side)
        got = self.marg.get(key)
        if got is None:
            u = self.transport(c["u"], c["home"][0], edge[0])
            V = self.spans[edge[1]]
            g_inv = _inv2(self.grams[edge[1]])
            cv = [_mp_dot(u, V[0]), _mp_dot(u, V[1])]
            gi = [[_frac_mp(g_inv[i][j]) for j in range(2)]
                  for i in range(2)]
            sval = (gi[0][0] * cv[0] * cv[0]
                    + 2 * gi[0][1] * cv[0] * cv[1]
                    + gi[1][1] * cv[1] * cv[1])
            # future timelike direction of the span for the side sign
            t = tuple(V[0][i] + V[1][i] for i in range(DIM))
            if t[-1] < 0:
                t = tuple(-c2 for c2 in t)
            f0 = _mp_dot(u, t)
            if sval > 0:
                got = -math.inf
            else:
                inside = -side * (1 if f0 > 0 else -1 if f0 < 0 else 0)
                got = inside * float(mp.asinh(mp.sqrt(-sval)))
            self.marg[key] = got
        return got


def bisector_chain_check(path, phi: Phi, consts, *,
                         slack: float = 1e-9,
                         geometry: _ChainGeometry = None) -> dict:
    """Audit of the bisector-chain structure along a 3-local geodesic
    of edge cells: the large-cell disjunction on interior edges, the
    nesting of the half-spaces of large-cell bisectors along the path
    order, the rho-margins of off-cell edges, and the end-to-end
    separation bound 2 rho.

    All geometry is evaluated at a precision set by the translation
    length, with feet taken from the exact rational pencil, so every
    comparison keeps a true margin.
    """
    if not sq.local_geodesic(path, 3):
        raise ValueError("path is not a 3-local geodesic")
    k = len(path)
    ids = [(e.rep, e.label) for e in path]
    rho = consts.rho4
    if geometry is None:
        geometry = _ChainGeometry(phi, max(len(e.rep) for e in path))
    with mp.workdps(geometry.dps):
        # cells in path order: edge i has order 2i+1, the junction
        # vertex between edges i and i+1 has order 2i+2
        cells = []
        for i in range(1, k - 1):
            c = geometry.edge_cell(ids[i - 1], ids[i], ids[i + 1])
            cells.append(dict(c, order=2 * i + 1, kind="edge",
                              large=c["gap"] >= consts.R1 - 1e-9))
        for i in range(k - 1):
            c = geometry.vertex_cell(ids[i], ids[i + 1])
            cells.append(dict(c, order=2 * i + 2, kind="vertex",
                              large=c["gap"] >= consts.R4 - 1e-9))
        cells.sort(key=lambda c: c["order"])
        large = [c for c in cells if c["large"]]

        # interior-edge disjunction: each interior edge or one of its
        # two junction vertices is large
        disjunction_ok = True
        for i in range(1, k - 1):
            window = [c for c in cells
                      if c["order"] in (2 * i, 2 * i + 1, 2 * i + 2)]
            if not any(c["large"] for c in window):
                disjunction_ok = False

        # nesting: for large c < c', the later half-space sits inside
        # the earlier one, hyperplane separation at least rho
        nesting = {"pairs": 0, "min_margin": np.inf, "ok": True}
        for a_i in range(len(large)):
            for b_i in range(a_i + 1, len(large)):
                sep, inside, outside = geometry.nesting(
                    large[a_i], large[b_i])
                nesting["pairs"] += 1
                nesting["min_margin"] = min(nesting["min_margin"], sep)
                if not (inside and outside and sep >= rho - slack):
                    nesting["ok"] = False

        # off-cell edge margins: earlier edges inside Bis^-, later
        # edges inside Bis^+, at distance >= rho
        margins = {"checked": 0, "min_margin": np.inf, "ok": True}
        for c in large:
            for i in range(k):
                order_i = 2 * i + 1
                if c["kind"] == "edge" and c["order"] == order_i:
                    continue
                side = 1 if order_i > c["order"] else -1
                m = geometry.margin(c, ids[i], side)
                margins["checked"] += 1
                margins["min_margin"] = min(margins["min_margin"], m)
                if m < rho - slack:
                    margins["ok"] = False

    d_ends = axis_pair_distance(
        phi, path[0].label, sq.mul(sq.inv(ids[0][0]), ids[k - 1][0]),
        path[k - 1].label) if k >= 2 else 0.0
    shared_end = k >= 2 and (
        sq.share_vertex(path[0], path[-1]) is not None
        or sq.share_face(path[0], path[-1]))
    ends = {"distance": d_ends, "bound": 2 * rho,
            "applies": k >= 3 and not shared_end,
            "ok": True}
    if ends["applies"]:
        ends["ok"] = d_ends >= 2 * rho - slack

    return {
        "length": k,
        "cells": [{kk: c[kk] for kk in ("order", "kind", "gap", "large")}
                  for c in cells],
        "large_count": len(large),
        "disjunction_ok": disjunction_ok,
        "nesting": nesting, "margins": margins, "ends": ends,
        "ok": disjunction_ok and nesting["ok"] and margins["ok"]
              and ends["ok"],
    }


def enumerate_chain_paths(radius: int = 2, max_len: int = 8):
    """All 3-local geodesic edge paths of length <= max_len whose
    edges lie in the enumeration ball of the given radius."""
    Q = sq.QuadOfGroups(g1_generators=[])
    cells = sq.enumerate_cells(Q, radius)
    incident = {}
    for e in cells.edges:
        for v in sq.edge_endpoints(e):
            incident.setdefault(v, []).append(e)
    paths = []

    def extend(path, at):
        if len(path) >= 2:
            paths.append(list(path))
        if len(path) == max_len:
            return
        for f in incident.get(at, ()):
            if f == path[-1]:
                continue
            tail = path[-2:] + [f] if len(path) >= 2 else path + [f]
            if not sq.local_geodesic(tail, 3 if len(tail) == 3 else 2):
                continue
            path.append(f)
            extend(path, sq._other_endpoint(f, at))
            path.pop()

    for e in cells.edges:
        v1, v2 = sq.edge_endpoints(e)
        for start in (v1, v2):
            extend([e], start)
    return paths


def bisector_chain_audit(phi: Phi, consts, *, radius: int = 2,
                         max_len: int = 8) -> dict:
    """Run the chain check over every enumerated path."""
    paths = enumerate_chain_paths(radius, max_len)
    geometry = _ChainGeometry(phi, radius)
    failures = []
    min_end = np.inf
    min_margin = np.inf
    for path in paths:
        rep = bisector_chain_check(path, phi, consts,
                                   geometry=geometry)
        if rep["margins"]["checked"]:
            min_margin = min(min_margin, rep["margins"]["min_margin"])
        if rep["ends"]["applies"]:
            min_end = min(min_end, rep["ends"]["distance"])
        if not rep["ok"]:
            failures.append({
                "path": [(e.label, e.rep) for e in path],
                "report": {kk: rep[kk] for kk in
                           ("disjunction_ok", "nesting", "margins",
                            "ends")}})
    return {"paths": len(paths), "failures": failures[:5],
            "n_failures": len(failures),
            "min_margin": float(min_margin),
            "min_end_distance": float(min_end),
            "ok": not failures}
