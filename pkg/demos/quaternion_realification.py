"""From a quaternion algebra to hyperbolic 5-space.

Walk through the arithmetic substrate: a quaternion algebra split at
the identity real place, a skew-hermitian module over it, the
orthogonal-pair solver, and the realification that turns the module
into a Lorentzian quadratic space of signature (5, 1).
"""

import numpy as np

from latticeforge.numbers import QuadraticField
from latticeforge.quaternions import QuatAlgebra
from latticeforge import hermitian as hm
from latticeforge.lorentz import realify

QQ = QuadraticField(1)
MAT = QuatAlgebra(QQ, 1, 1)          # split: isomorphic to 2x2 matrices

print("algebra:", MAT)
i, j, k = MAT.i(), MAT.j(), MAT.k()
print("i*j == k:", i * j == k, "   N(i) =", i.norm(), "  N(1+j) =",
      (MAT.one() + j).norm())

print()
print("skew-hermitian module diag(k, k, i), dimension 3")
M = hm.SkewHermitianModule.diagonal(MAT, [k, k, i])
e0, e1, e2 = M.basis()
print("F(e0, e0) =", hm.eval_form(e0, e0))
print("F(e0, e1) =", hm.eval_form(e0, e1), " (orthogonal basis)")

print()
print("orthogonal-pair solver on p1 = e0, p2 = e0 + e1:")
p1, p2 = e0, M.vector([MAT.one(), MAT.one(), MAT.zero()])
u1, u2, trace = hm.lemma_L_solve(p1, p2)
print("  scaling trace:", trace)
print("  <p1, u1> = 0:", hm.eval_form(p1, u1).is_zero())
print("  <p2, u2> = 0:", hm.eval_form(p2, u2).is_zero())
print("  <u1, u2> = 0:", hm.eval_form(u1, u2).is_zero())

print()
print("realification (V_+, phi):")
R = realify(M)
print("  real dimension:", R.real_dim)
print("  signature:", R.signature)
lam = np.linalg.eigvalsh(R.phi)
print("  eigenvalues of the Gram matrix:", np.round(lam, 6))
print("  -> the hyperboloid model of H^5 lives inside this space")
