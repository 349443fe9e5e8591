"""Cones, fans, and the nerve of the maximal-cone cover.
====================================================

A cone is stored by primitive extreme rays; duals, faces, smoothness,
and the closure of a set of maximal cones into a fan are all exact.
The nerve of the cover of projective space by its n+1 charts is the
full n-simplex, with each simplex carrying the intersection cone.
"""

from fltzlab.fans import (
    Cone,
    cech_nerve,
    dual_cone,
    faces,
    fan_from_max_cones,
    fan_to_json,
    is_refinement,
    is_smooth_cone,
    standard_fan,
)

c = Cone([(1, 0), (1, 2)])
print("cone rays:", c.rays)
print("dual rays:", dual_cone(c).rays)
print("faces:", [f.rays for f in faces(c)])
print("smooth:", is_smooth_cone(c))
print("index-2 cone smooth:", is_smooth_cone(Cone([(0, 1), (2, -1)])))

print()
for n in (1, 2, 3):
    fan = standard_fan("Pn", n=n)
    nerve = cech_nerve(fan)
    print(f"P{n}: {len(fan)} cones, nerve {nerve.count_by_dim()}")
    # the full simplex carries the zero cone (the dense torus chart)
    full = frozenset(range(len(nerve.vertices)))
    assert nerve.simplices[full].is_zero()

# Fans reject overlapping input and serialize to a small JSON schema.
print()
p1 = standard_fan("Pn", n=1)
print("P1 JSON:", fan_to_json(p1))

# A user-supplied subdivision can be validated as an honest refinement;
# here the singular quadric cone is split along a new interior ray.
singular = fan_from_max_cones([Cone([(0, 1), (2, -1)])])
resolved = fan_from_max_cones([Cone([(0, 1), (1, 0)]),
                               Cone([(1, 0), (2, -1)])])
print("resolution refines the singular cone:",
      is_refinement(resolved, singular))
print("resolution is smooth:",
      all(is_smooth_cone(c) for c in resolved.maximal_cones()))
