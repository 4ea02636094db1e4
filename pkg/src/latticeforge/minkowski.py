"""Batched numpy primitives for the hyperboloid model of H^m.

All functions work in standard coordinates: the bilinear form is
diag(1, ..., 1, -1) with the time coordinate LAST, and points live on
the upper sheet (last coordinate positive) of x.x = -1.

Totally geodesic subspaces are represented by frames: arrays of shape
(..., d, k) whose k columns span a linear subspace of signature
(k-1, 1).  Distances, closest-point pairs and hyperplane margins are
closed-form up to k x k eigenproblems, so everything vectorizes over
leading batch axes.
"""

from __future__ import annotations

import numpy as np

#: width policy for the slack attached to certified-style bounds
EPS_GEO = 1e-9


def form_vector(d: int) -> np.ndarray:
    sig = np.ones(d)
    sig[-1] = -1.0
    return sig


def _asf(x):
    """Pass floating arrays through unchanged (so callers may work in
    extended precision); promote everything else to float64."""
    x = np.asarray(x)
    return x if np.issubdtype(x.dtype, np.floating) else x.astype(float)


def mdot(x, y):
    """Minkowski inner product, broadcasting over leading axes."""
    x = _asf(x)
    y = _asf(y)
    sig = form_vector(x.shape[-1])
    return np.einsum("...i,...i->...", x * sig, y)


def normalize_point(x):
    """Scale a timelike vector onto the upper hyperboloid sheet."""
    x = np.asarray(x, dtype=float)
    q = mdot(x, x)
    if np.any(q >= 0):
        raise ValueError("not a timelike vector")
    x = x / np.sqrt(-q)[..., None]
    flip = x[..., -1] < 0
    return np.where(flip[..., None], -x, x)


def point_at(d: int, spatial) -> np.ndarray:
    """Hyperboloid point with the given spatial part."""
    spatial = np.asarray(spatial, dtype=float)
    x = np.zeros(d)
    x[:len(spatial)] = spatial
    x[-1] = np.sqrt(1.0 + spatial @ spatial)
    return x


def dist_points(x, y):
    c = np.maximum(-mdot(x, y), 1.0)
    return np.arccosh(c)


def orthonormalize_frame(W):
    """phi-orthonormal frame with the timelike column last.

    W has shape (..., d, k) with signature (k-1, 1).  Returns U of the
    same shape with U^T Phi U = diag(1, .., 1, -1) and the timelike
    column future-oriented.
    """
    W = np.asarray(W, dtype=float)
    sig = form_vector(W.shape[-2])
    G = np.einsum("...ik,...i,...il->...kl", W, sig, W)
    lam, Q = np.linalg.eigh(G)
    # eigh sorts ascending: the single negative eigenvalue comes first;
    # move it to the last column
    order = list(range(1, W.shape[-1])) + [0]
    lam = lam[..., order]
    Q = Q[..., :, order]
    if np.any(lam[..., :-1] <= 0) or np.any(lam[..., -1] >= 0):
        raise ValueError("frame does not have signature (k-1, 1)")
    U = np.einsum("...ik,...kl->...il", W, Q / np.sqrt(np.abs(lam))[..., None, :])
    flip = U[..., -1, -1] < 0
    U[..., :, -1] = np.where(flip[..., None], -U[..., :, -1], U[..., :, -1])
    return U


def frame_signature(W, tol=1e-10):
    W = np.asarray(W, dtype=float)
    sig = form_vector(W.shape[-2])
    G = np.einsum("ik,i,il->kl", W, sig, W)
    lam = np.linalg.eigvalsh(G)
    pos = int(np.sum(lam > tol * np.max(np.abs(lam))))
    neg = int(np.sum(lam < -tol * np.max(np.abs(lam))))
    return pos, neg


def project_point(U, y):
    """Closest point on H(span U) to hyperboloid point y.

    U must be phi-orthonormal (timelike last).  The linear projection of
    a timelike vector onto a Lorentzian subspace is always timelike.
    """
    sig = form_vector(U.shape[-2])
    eps = np.ones(U.shape[-1])
    eps[-1] = -1.0
    coef = np.einsum("...ik,...i,...i->...k", U, sig, np.broadcast_to(
        np.asarray(y, dtype=float), U.shape[:-1]))
    p = np.einsum("...ik,...k->...i", U, coef * eps)
    return normalize_point(p)


def _cross_quadratic(UA, UB):
    """Matrices (Q, eps_A) of the squared-cosh functional on span(UA).

    For unit timelike x = UA z, cosh^2 d(x, H(span UB)) = z^T Q z with
    the constraint z^T eps z = -1.
    """
    sig = form_vector(UA.shape[-2])
    # F[a, b] = phi(colA_a, colB_b)
    F = np.einsum("...ia,...i,...ib->...ab", UA, sig, UB)
    ft = F[..., :, -1]
    fs = F[..., :, :-1]
    Q = (ft[..., :, None] * ft[..., None, :]
         - np.einsum("...as,...bs->...ab", fs, fs))
    return Q


def dist_subspaces_frames(UA, UB, return_feet=False):
    """Distance between H(span UA) and H(span UB); frames orthonormal.

    Closed form via the k x k pseudo-symmetric eigenproblem
    Q z = lam * eps z; the unique timelike eigenvector carries the
    minimum of cosh^2.  Distance 0 is returned for intersecting or
    asymptotic subspaces.  Fully batched.
    """
    Q = _cross_quadratic(UA, UB)
    k = Q.shape[-1]
    eps = np.ones(k)
    eps[-1] = -1.0
    A = Q * eps[..., :, None]          # eps^{-1} Q  (eps is its own inverse)
    lam, vec = np.linalg.eig(A)
    # timelike eigenvector: z^T eps z < 0
    znorm = np.einsum("...kj,k,...kj->...j", vec.real, eps, vec.real)
    tl = (np.abs(lam.imag) < 1e-8) & (znorm < 0)
    # pick the (unique) timelike candidate; default to 1 (distance 0)
    cosh2 = np.where(tl, -lam.real, 1.0)
    any_tl = np.any(tl, axis=-1)
    idx = np.argmax(tl, axis=-1)
    c2 = np.take_along_axis(cosh2, idx[..., None], axis=-1)[..., 0]
    c2 = np.where(any_tl, c2, 1.0)
    c2 = np.maximum(c2, 1.0)
    d = np.arccosh(np.sqrt(c2))
    if not return_feet:
        return d
    z = np.take_along_axis(vec.real, idx[..., None, None], axis=-1)[..., 0]
    x = np.einsum("...ik,...k->...i", UA, z)
    # guard: when subspaces meet, fall back to the timelike frame column
    bad = ~any_tl | (mdot(x, x) >= 0)
    x = np.where(bad[..., None], UA[..., :, -1], x)
    x = normalize_point(x)
    y = project_point(UB, x)
    return d, x, y


def closest_pair(UA, UB, refine=3):
    """Feet (x on A, y on B) of the common perpendicular.

    A few alternating-projection sweeps polish the eigenvector seed.
    """
    d, x, y = dist_subspaces_frames(UA, UB, return_feet=True)
    for _ in range(max(refine, 1)):
        x = project_point(UA, y)
        y = project_point(UB, x)
    d = dist_points(x, y)
    return d, x, y


def dist_point_subspace(x, UB):
    sig = form_vector(UB.shape[-2])
    c = np.einsum("...i,...i,...ib->...b", _asf(x), sig, _asf(UB))
    q = c[..., -1] ** 2 - np.sum(c[..., :-1] ** 2, axis=-1)
    return np.arccosh(np.sqrt(np.maximum(q, 1.0)))


# -- hyperplanes and half-spaces --------------------------------------

def bisector_normal(p, q):
    """Unit spacelike normal u of Bis(p, q), pointing so that
    phi(x, u) > 0 on the p side (Bis^-) and < 0 on the q side (Bis^+)."""
    u = _asf(p) - _asf(q)
    n2 = mdot(u, u)
    if np.any(n2 <= 0):
        raise ValueError("bisector of equal or invalid points")
    return u / np.sqrt(n2)[..., None]


def signed_point_margin(x, u, side):
    """Signed distance of point x to half-space {side * phi(., u) <= 0}."""
    f = mdot(x, u)
    return -side * np.arcsinh(f)


def halfspace_margin_frame(U, u, side):
    """Signed containment margin of H(span U) in {side * phi(., u) <= 0}.

    Closed form: project u into span U.  Timelike component -> the whole
    subspace sits strictly on one side, at distance asinh(sqrt(-s));
    spacelike component -> the subspace crosses the hyperplane (-inf);
    vanishing component -> contained in the boundary (0).
    Batched over leading axes.
    """
    U = _asf(U)
    sig = form_vector(U.shape[-2])
    eps = np.ones(U.shape[-1])
    eps[-1] = -1.0
    c = np.einsum("...i,...i,...ik->...k", np.broadcast_to(
        _asf(u), U.shape[:-1]), sig, U)
    s = np.sum(c[..., :-1] ** 2, axis=-1) - c[..., -1] ** 2
    # sign of phi(x, u) on the subspace, evaluated at the future timelike column
    f0 = np.einsum("...i,...i,...i->...", np.broadcast_to(
        _asf(u), U.shape[:-1]), sig, U[..., :, -1])
    inside = -side * np.sign(f0)
    is_boundary = np.abs(s) <= 1e-12
    dist = np.arcsinh(np.sqrt(np.maximum(-s, 0.0)))
    out = np.where(s > 0, -np.inf, inside * dist)
    return np.where(is_boundary, 0.0, out)


def hyperplane_distance(u1, u2):
    """Distance between hyperplanes with unit spacelike normals.

    |phi(u1, u2)| < 1 means they intersect (distance 0); otherwise the
    distance is arccosh |phi(u1, u2)|.
    """
    c = np.abs(mdot(u1, u2))
    return np.arccosh(np.maximum(c, 1.0))


def translation_along(p, v, length):
    """Lorentz matrix translating by `length` along the geodesic through
    hyperboloid point p with unit spacelike direction v (phi(p,v)=0)."""
    p = np.asarray(p, float)
    v = np.asarray(v, float)
    d = p.shape[-1]
    sig = form_vector(d)
    c, s = np.cosh(length), np.sinh(length)
    # action: p -> c p + s v, v -> s p + c v, identity on the complement
    P = np.outer(p, p * sig)
    V = np.outer(v, v * sig)
    M = np.eye(d) + (c - 1.0) * (-P + V) + s * (np.outer(v, p * sig) * -1.0
                                                + np.outer(p, v * sig))
    return M


def reflection_fixing(U):
    """Lorentz involution fixing span(U) pointwise, -1 on the complement."""
    U = orthonormalize_frame(np.asarray(U, float)) if U.shape[-1] > 1 else U
    d = U.shape[-2]
    sig = form_vector(d)
    eps = np.ones(U.shape[-1])
    eps[-1] = -1.0
    P = np.einsum("ik,k,jk->ij", U, eps, U * sig[:, None])
    return 2.0 * P - np.eye(d)


def preserves_form(M, tol=1e-9):
    d = M.shape[-1]
    sig = form_vector(d)
    G = np.einsum("ki,k,kj->ij", M, sig, M)
    return np.allclose(G, np.diag(sig), atol=tol)


def angle_between(UA, UB, Ualong):
    """Dihedral angle between H(span UA) and H(span UB) along their
    common subspace, measured between the phi-orthocomplements of the
    intersection inside each; returns the smallest principal angle."""
    sig = form_vector(UA.shape[-2])

    def complement(U):
        # spacelike directions of U orthogonal to span(Ualong)
        coef = np.einsum("ia,i,ik->ak", Ualong, sig, U)
        eps_a = np.ones(Ualong.shape[-1])
        eps_a[-1] = -1.0
        proj = np.einsum("ia,a,ak->ik", Ualong, eps_a, coef)
        rest = U - proj
        # orthonormalize the remainder; it is spacelike, so phi is Euclidean
        G = np.einsum("ik,i,il->kl", rest, sig, rest)
        lam, Q = np.linalg.eigh(G)
        good = lam > 1e-9 * max(lam.max(), 1.0)
        return rest @ (Q[:, good] / np.sqrt(lam[good]))

    CA = complement(UA)
    CB = complement(UB)
    if CA.shape[1] == 0 or CB.shape[1] == 0:
        raise ValueError("subspaces coincide along the given intersection")
    M = np.einsum("ia,i,ib->ab", CA, sig, CB)
    svals = np.linalg.svd(M, compute_uv=False)
    c = np.clip(svals.max(initial=0.0), 0.0, 1.0)
    return float(np.arccos(c))
