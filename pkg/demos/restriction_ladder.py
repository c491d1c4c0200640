"""Level-by-level check that a one-sided inverse pair over the closure of F_2 is two-sided."""
from directfinite import (GF, FreeAbelianGroup, NearRingElem, PipelineConfig, conclude_two_sided,
                          psi_from_nearring, run_restriction_ladder, verify_theorem_A)
from directfinite.sca import on_ladder

Z = FreeAbelianGroup(1)
F2 = GF(2)
X = lambda i: NearRingElem.X(Z(i), F2)  # noqa: E731

sigma = on_ladder(psi_from_nearring(X(-1) - 1))
tau = on_ladder(psi_from_nearring(X(1) + 1))
cfg = PipelineConfig(depth=4, quotients=tuple(range(2, 9)))
report = run_restriction_ladder(sigma, tau, cfg)
for rec in report.levels:
    print(f"GF(2^{rec.r}): section={rec.section_ok} injective={rec.injective} "
          f"surjective={rec.surjective} window onto={rec.window_surjective}")
print("tau o sigma = Id:", conclude_two_sided(sigma, tau, report, cfg))
print("direct near-ring check:", verify_theorem_A(X(-1) - 1, X(1) + 1).as_dict())
