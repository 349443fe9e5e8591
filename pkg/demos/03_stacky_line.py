"""The cyclic-quotient line: skeleton, hom category, and the cyclic quiver.
======================================================================

The affine line modulo the group of n-th roots of unity is the smallest
genuinely stacky example.  Its skeleton acquires one conormal hair per
character; on the algebra side the objects are the n characters and the
homs between two of them are the lattice points of a shifted fractional
cone.  Both descriptions are computed here and pinned against each
other through path counts on the directed n-cycle.
"""

import pathlib
import sys

from fltzlab.cohside import cyclic_quiver_paths, gamma_category, hom_graded
from fltzlab.fans import Cone, StackyFan, fan_from_max_cones
from fltzlab.skeleton import emit_svg, fltz_components
from fltzlab.zlin import IntMatrix

N = 4
stack = StackyFan(IntMatrix([[N]]),
                  fan_from_max_cones([Cone([(1,)], ambient_rank=1)]))

# skeleton components: the zero section plus one hair per character
comps = fltz_components(stack)
print(f"skeleton components for the order-{N} cyclic chart:")
for comp in comps:
    kind = "zero section" if comp.cone.is_zero() else "hair"
    print(f"  {kind:12s} at character {comp.character[0]}")

# the hom category: objects are the N characters, homs are lattice
# points of the fractional half-line, graded by n * value
G = gamma_category(stack)
chars = G.group.characters()
print("\ncharacter group:", G.group)
print("monoid contains 1/4, 5/4, ...;  projection sends i/4 to i")

print("\ngraded hom dimensions, bound 9 (rows: target character):")
for j in range(N):
    dims = hom_graded(G, chars[1], chars[j], 9)
    print(f"  hom(1 -> {j}):", list(dims.dims))
    assert dims.dims == cyclic_quiver_paths(N, 1, j, 9).dims

print("\nall graded homs equal directed path counts on the 4-cycle")

out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else None
if out:
    out.write_text(emit_svg(comps))
    print(f"wrote {out}")
