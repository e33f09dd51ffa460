"""Finite-scale cover experiments on Cayley balls.

Builds the rank-2 brick cover at a few scales, checks it, and then lets
the exhaustive search find the true minimum family count on a space
small enough to brute-force.
"""

from asdimlab import (
    GroupSpec,
    brick_cover,
    cayley_ball,
    format_witness,
    min_families_exhaustive,
    verify_cover,
)

print("brick covers of the Z^2 ball, three families each:")
for D in (1, 3, 5):
    w = brick_cover(2, D, radius=20)
    report = verify_cover(w)
    sizes = [len(fam) for fam in w.families]
    status = "ok" if report.valid else "BROKEN"
    print(f"  D={D}: B={w.B}, subsets per family {sizes} -> {status}")

print()
print("exhaustive search on the 9-point path (the radius-4 ball of Z):")
path = cayley_ball(GroupSpec("FreeAbelian", 1), 4)
for D, B in ((2, 3), (1, 8), (2, 8)):
    found = min_families_exhaustive(path, D, B)
    print(f"  D={D}, B={B}: minimum families = {found.k}")

print()
print("a witness file for the D=2, B=3 cover:")
found = min_families_exhaustive(path, 2, 3)
print(format_witness(found.witness))
