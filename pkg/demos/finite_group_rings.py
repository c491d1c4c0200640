"""Search for one-sided inverses in small group rings and their 2x2 matrix rings."""
import random

from directfinite import (GF, GroupRingElem, GroupRingMatrix, check_direct_finiteness, cyclic,
                          find_right_inverse, quaternion, symmetric)

rng = random.Random(0)
for G in (cyclic(4), symmetric(3), quaternion()):
    for F in (GF(2), GF(3)):
        for n in (1, 2):
            found = both = 0
            for _ in range(60):
                rows = [[GroupRingElem(G, F, {g: rng.randrange(F.order) for g in G.elements() if rng.random() < 0.3})
                         for _ in range(n)] for _ in range(n)]
                A = GroupRingMatrix(rows)
                B = find_right_inverse(A)
                if B is not None:
                    found += 1
                    both += check_direct_finiteness(A, B).ba_is_one
            print(f"{G.name:>3} over {F!r:6} n={n}: {found:2d} of 60 have ab = 1, and {both:2d} of those have ba = 1")
