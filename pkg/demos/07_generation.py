"""Decomposition generators and the iterative cone reduction.
=========================================================

Each generator of the ordered decomposition shows up on the chamber set
as a symbolic bundle per chamber; its rank vector is triangular in the
step filtration with unit diagonal, so greedy subtraction (deepest step
first) drives any K-class to zero in exactly n+1 steps and the
coefficients read off the decomposition of the class.
"""

import random

from fltzlab.conside import beilinson_generators, reduce_dimension_vector
from fltzlab.picsym import format_monomial
from fltzlab.skeleton import enumerate_chambers

n = 2
chambers = enumerate_chambers(n)
print("generator display data over the chamber set (rank / monomial):")
for gen in beilinson_generators(n):
    print(f"  generator {gen.k}:")
    for c in chambers:
        rank = gen.chamber_dims[c]
        if rank:
            mono = format_monomial(gen.decorations[c], ["L", "M"])
            print(f"    {c.flag_string()},{c.slant}: rank {rank}, "
                  f"prefix {mono}")
    print("    class vector by step:", gen.class_dims)

print("\nreduction traces (k, coefficient):")
for d in [(1, 0, 0), (10, 4, 1), (5, -3, 2)]:
    trace = reduce_dimension_vector(n, d)
    steps = [(s.k, s.coefficient) for s in trace]
    print(f"  {d} -> {steps} -> {trace[-1].remainder}")

rng = random.Random(1)
trials = [[rng.randint(-5, 5) for _ in range(n + 1)] for _ in range(500)]
assert all(reduce_dimension_vector(n, d)[-1].remainder == (0,) * (n + 1)
           for d in trials)
print(f"\n500 random classes reduced to zero in exactly {n + 1} steps")
