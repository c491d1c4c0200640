"""Injectivity and surjectivity of every elementary automaton over Z."""
from directfinite import gottschalk_sweep, is_injective_Z, is_surjective_Z
from directfinite.surjunctivity import elementary_rule

rep = gottschalk_sweep(2, 3)
print(f"{rep.rules} rules: {rep.injective} injective, {rep.surjective} surjective, "
      f"violations {rep.violations}")

for n in (90, 110, 37):
    inj, sur = is_injective_Z(elementary_rule(n)), is_surjective_Z(elementary_rule(n))
    print(f"rule {n:3d}: injective={inj.verdict!s:5} surjective={sur.verdict!s:5}", end="")
    if not sur.verdict:
        print("  orphan", "".join(sur.witness["orphan"]), end="")
    elif not inj.verdict:
        print("  collision", inj.witness["display"], end="")
    print()
