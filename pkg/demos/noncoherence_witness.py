"""Rank growth in a free-group kernel: the noncoherence mechanism.

The kernel N of a homomorphism psi: F_2 -> Z is infinitely generated
when psi kills neither generator.  Folding the kernel words of bounded
length gives finite Stallings graphs whose ranks grow without bound,
and a Mayer-Vietoris style inequality converts that growth into a
lower bound on the rank of H_2 of the amalgam built from two copies.
"""

from latticeforge import freegrp as fg

psi = fg.ZHom(1, 1)
print("psi(a) = 1, psi(b) = 1; kernel contains a b^-1, b^-1 a, ...")
print()
print("  n   kernel words   rank N_n   H2 lower bound")
for n in (2, 4, 6, 8):
    words = list(fg.kernel_words(psi, n))
    g = fg.kernel_ball(psi, n)
    bound = fg.h2_lower_bound(psi, n, 2, 2)
    print(f"  {n:>2}   {len(words):>12}   {g.rank:>8}   {bound:>14}")

print()
g = fg.kernel_ball(psi, 4)
print("membership in the folded graph (n = 4):")
for w in ("aB", "aabb", "abAB", "ab"):
    print(f"  {w!r:>8} accepted: {g.accepts(w)}  psi = {psi(w)}")
print()
print("ranks strictly increase with n, so no finite generating set")
print("of N works at every scale: the kernel is not finitely generated")
