"""Chambers of the perturbed plane skeleton and the twisted quiver.
==============================================================

Pushing the coordinate walls of the torus square off the origin by an
exact rational epsilon cuts the square into seven chambers: one center,
three one-step, three two-step.  Crossing a boundary of the fundamental
domain twists by the corresponding line-bundle symbol, which is how a
projectivized rank-3 bundle over any base shows up as decorations on
the same quiver.
"""

import pathlib
import sys

from fltzlab.conside import quiver_to_dot, twisted_rep_template
from fltzlab.picsym import PicMonomial, format_monomial
from fltzlab.skeleton import chamber_quiver, chamber_step_counts, enumerate_chambers

chambers = enumerate_chambers(2)
print("chambers of the perturbed square (flags, slant -> step):")
for c in chambers:
    print(f"  {c.flag_string()},{c.slant} -> step {c.step}")
print("counts by step:", chamber_step_counts(2))

L = PicMonomial.generator(0, 2)
M = PicMonomial.generator(1, 2)
names = ["L", "M"]

q = chamber_quiver(2, [L, M])
print(f"\nquiver: {len(q.vertices)} vertices, {len(q.edges)} edges")
print("twisted vertex labels (boundary-crossing convention):")
for v in q.vertices:
    print(f"  {v.chamber.flag_string()},{v.chamber.slant}: "
          f"{format_monomial(v.label, names)}")

# the template convention used for twisted quiver objects
t = twisted_rep_template(2, [L, M])
print("\ntemplate labels (typical twisted object):")
for v in t.vertices:
    print(f"  {v.chamber.flag_string()},{v.chamber.slant}: "
          f"{format_monomial(v.label, names)}")
print("edge decorations:",
      sorted(format_monomial(e.label, names) for e in t.edges))

out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else None
if out:
    out.write_text(quiver_to_dot(q, names))
    print(f"\nwrote {out}")
