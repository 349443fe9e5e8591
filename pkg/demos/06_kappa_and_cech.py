"""Costandard stalks against isotypic components, and a cohomology table.
====================================================================

The stalk of a costandard sheaf at a torsion point counts the lattice
coset meeting the dual cone; the isotypic component of the chart's
monoid algebra counts monoid points with a fixed character.  The two
enumerations run along different routes and must agree degree by
degree.  The same lattice bookkeeping drives the Cech cohomology table
for line bundles on the projective plane.
"""

from fractions import Fraction

from fltzlab.cohside import (
    costandard_stalk,
    gamma_category,
    isotypic_component,
    pn_line_bundle_cohomology,
)
from fltzlab.fans import Cone, StackyFan, fan_from_max_cones
from fltzlab.zlin import IntMatrix

N = 5
stack = StackyFan(IntMatrix([[N]]),
                  fan_from_max_cones([Cone([(1,)], ambient_rank=1)]))
G = gamma_category(stack)
ray = Cone([(1,)], ambient_rank=1)

print(f"order-{N} cyclic chart, bound 10:")
for i in range(N):
    chi = (Fraction(i, N),)
    iso = isotypic_component(G.monoid, chi, 10)
    stalk = costandard_stalk(ray, chi, 10, denominator=N)
    marker = "==" if iso.dims == stalk.dims else "!!"
    print(f"  character {i}: isotypic {list(iso.dims)} {marker} "
          f"stalk {list(stalk.dims)}")
    assert iso.dims == stalk.dims

# the same check across a non-full-dimensional cone: cone(e1) in Z^3
cone = Cone([(1, 0, 0)], ambient_rank=3)
stalk = costandard_stalk(cone, (0, 0, 0), 6)
print("\ncone(e1) in Z^3, quotient by the perp plane:", list(stalk.dims))

print("\ncohomology of O(d) on the projective plane:")
print("   d   h0  h1  h2")
for d in range(-5, 4):
    h = pn_line_bundle_cohomology(2, d)
    print(f"  {d:3d}  {h[0]:3d} {h[1]:3d} {h[2]:3d}")
