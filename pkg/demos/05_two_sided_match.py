"""Both sides of the correspondence computed independently, then compared.
=====================================================================

Coherent side: cohomology of line bundles on projective space by exact
characterwise Cech ranks.  Constructible side: derived homs between the
projectives of the chamber category through the nerve cochain complex.
The graded Hom dimensions and the Euler Gram matrices must coincide.
"""

from fltzlab.cohside import euler_pairing_coherent, pn_line_bundle_cohomology
from fltzlab.conside import ChamberCategory, beilinson_rep, euler_form, rep_hom

for n in (1, 2):
    print(f"--- projective {n}-space ---")
    cat = ChamberCategory(n)
    gens = [beilinson_rep(n, k, cat) for k in range(1, n + 2)]

    hom_gram = [[rep_hom(a, b)[0] for b in gens] for a in gens]
    coh_gram = [[pn_line_bundle_cohomology(n, j - i)[0]
                 for j in range(n + 1)] for i in range(n + 1)]
    print("constructible Hom Gram:", hom_gram)
    print("coherent H0 Gram:      ", coh_gram)
    assert hom_gram == coh_gram

    e_gram = [[euler_form(cat, a.dim_vector(), b.dim_vector())
               for b in gens] for a in gens]
    c_gram = [[euler_pairing_coherent(n, i, j)
               for j in range(n + 1)] for i in range(n + 1)]
    print("constructible Euler Gram:", e_gram)
    print("coherent Euler Gram:     ", c_gram)
    assert e_gram == c_gram
    print()

print("negative twists pair to Euler characteristics, not section counts:")
for e in range(-4, 1):
    print(f"  chi(O, O({e})) on P2 =", euler_pairing_coherent(2, 0, e))
