"""Restriction-ladder verification of one-sided inverse pairs of automata.

Given polynomial automata ``sigma`` and ``tau`` over the closure of ``F_p``
with ``sigma o tau = Id``, the ladder

1. reads off the least level ``r0`` containing every rule coefficient,
2. restricts both automata to ``GF(p^r)`` for each ``r0 | r <= depth``,
3. checks at each level that the restricted section still works, that the
   restricted ``tau`` is injective and surjective (also on the periodic
   configurations of each probed quotient ``Z/n``), and that its window map
   ``A^(M^2) -> A^M`` is onto,
4. and finally certifies ``tau o sigma = Id`` symbolically, cross-checked as
   functions at every level.

Infinite configurations never appear: each step is a finite computation.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import EnumerationBudgetExceeded, SectionFailed, Undecidable, WrongCharacteristic
from .fields import FiniteField
from .groups import FreeAbelianGroup, common_memory
from .poly import DEFAULT_TERM_BUDGET
from .sca import (ENUMERATION_BUDGET, AffineAlphabet, coefficient_level, compose, is_identity_rule,
                  quotient_ca, restrict, window_map)
from .surjunctivity import is_injective, is_injective_finite, is_surjective, is_surjective_finite

REPORT_VERSION = "directfinite.pipeline/1"


@dataclass
class PipelineConfig:
    depth: int = 4
    quotients: tuple = tuple(range(2, 9))
    window_budget: int = ENUMERATION_BUDGET
    term_budget: int = DEFAULT_TERM_BUDGET

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.window_budget < 1 or self.term_budget < 1:
            raise ValueError("budgets must be positive")
        if any(n < 1 for n in self.quotients):
            raise ValueError("quotient moduli must be positive")
        self.quotients = tuple(self.quotients)


@dataclass
class LevelRecord:
    r: int
    section_ok: bool | None
    injective: bool | None
    surjective: bool | None
    window_surjective: bool | None
    methods: dict = field(default_factory=dict)
    quotients: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)

    @property
    def passed(self):
        checks = [self.injective, self.surjective, self.window_surjective]
        if self.section_ok is not None:
            checks.append(self.section_ok)
        probes = [v for q in self.quotients.values() for v in q.values()]
        return all(c is True for c in checks) and all(v is True for v in probes)

    def as_dict(self):
        return {"r": self.r, "section_ok": self.section_ok, "injective": self.injective,
                "surjective": self.surjective, "window_surjective": self.window_surjective,
                "methods": dict(self.methods),
                "quotients": {str(n): dict(v) for n, v in self.quotients.items()},
                "diagnostics": list(self.diagnostics), "passed": self.passed}


@dataclass
class PipelineReport:
    characteristic: int
    base_level: int
    depth: int
    memory: list
    levels: list = field(default_factory=list)
    left_identity_ok: bool | None = None
    right_identity_ok: bool | None = None
    diagnostics: list = field(default_factory=list)

    @property
    def all_levels_pass(self):
        return bool(self.levels) and all(rec.passed for rec in self.levels)

    def as_dict(self):
        return {"version": REPORT_VERSION, "characteristic": self.characteristic,
                "base_level": self.base_level, "depth": self.depth, "memory": list(self.memory),
                "levels": [rec.as_dict() for rec in self.levels],
                "left_identity_ok": self.left_identity_ok,
                "right_identity_ok": self.right_identity_ok,
                "all_levels_pass": self.all_levels_pass,
                "diagnostics": list(self.diagnostics)}

    def to_json(self, indent=2):
        return json.dumps(self.as_dict(), indent=indent, sort_keys=True)


_NULLABLE_BOOL = {"type": ["boolean", "null"]}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "restriction ladder report",
    "type": "object",
    "required": ["version", "characteristic", "base_level", "depth", "memory", "levels",
                 "left_identity_ok", "right_identity_ok", "all_levels_pass", "diagnostics"],
    "properties": {
        "version": {"const": REPORT_VERSION},
        "characteristic": {"type": "integer", "minimum": 2},
        "base_level": {"type": "integer", "minimum": 1},
        "depth": {"type": "integer", "minimum": 1},
        "memory": {"type": "array", "items": {"type": "string"}},
        "levels": {"type": "array", "items": {
            "type": "object",
            "required": ["r", "section_ok", "injective", "surjective", "window_surjective",
                         "methods", "quotients", "diagnostics", "passed"],
            "properties": {
                "r": {"type": "integer", "minimum": 1},
                "section_ok": _NULLABLE_BOOL,
                "injective": _NULLABLE_BOOL,
                "surjective": _NULLABLE_BOOL,
                "window_surjective": _NULLABLE_BOOL,
                "methods": {"type": "object", "additionalProperties": {"type": "string"}},
                "quotients": {"type": "object", "additionalProperties": {
                    "type": "object", "additionalProperties": _NULLABLE_BOOL}},
                "diagnostics": {"type": "array", "items": {"type": "string"}},
                "passed": {"type": "boolean"},
            },
        }},
        "left_identity_ok": _NULLABLE_BOOL,
        "right_identity_ok": _NULLABLE_BOOL,
        "all_levels_pass": {"type": "boolean"},
        "diagnostics": {"type": "array", "items": {"type": "string"}},
    },
}


def coefficient_model(tau):
    """Least ``r0`` with every rule coefficient in ``GF(p^r0)``."""
    if not isinstance(tau.alphabet, AffineAlphabet) or not tau.is_poly:
        raise WrongCharacteristic("a polynomial rule over an affine alphabet is required")
    if not isinstance(tau.alphabet.field, FiniteField):
        raise WrongCharacteristic("rational coefficients have no finite-field model")
    return coefficient_level(tau)


def _same_rule(rho, budget):
    eq = is_identity_rule(rho, budget)
    return eq.as_functions if eq.as_functions is not None else eq.as_polynomials


def verify_section(sigma, tau, memory=None, budget=DEFAULT_TERM_BUDGET):
    """``sigma o tau`` has the rule of the projection onto the ``1_G`` cell.

    ``memory`` defaults to the symmetrized common memory; it must contain
    both memory sets, so that ``M_sigma M_tau`` lies in the window ``M^2``.
    """
    if memory is not None and not (sigma.memory <= memory and tau.memory <= memory):
        raise ValueError("window memory must contain both memory sets")
    return bool(_same_rule(compose(sigma, tau, budget), ENUMERATION_BUDGET))


def _ladder_levels(r0, depth):
    return [r for r in range(r0, depth + 1) if r % r0 == 0]


def _probe_quotients(tau_r, cfg, record):
    G = tau_r.group
    if not (isinstance(G, FreeAbelianGroup) and G.rank == 1):
        return
    for n in cfg.quotients:
        q = quotient_ca(tau_r, n, cfg.window_budget)
        try:
            inj = is_injective_finite(q, cfg.window_budget)
            sur = is_surjective_finite(q, cfg.window_budget)
        except EnumerationBudgetExceeded as exc:
            record.quotients[n] = {"injective": None, "surjective": None}
            record.diagnostics.append(f"Z/{n}: {exc}")
            continue
        record.quotients[n] = {"injective": inj.verdict, "surjective": sur.verdict}
        record.methods[f"Z/{n}"] = inj.method


def _run_level(sigma, tau, r, memory, cfg):
    tau_r = restrict(tau, r)
    record = LevelRecord(r, None, None, None, None)
    if sigma is not None:
        sigma_r = restrict(sigma, r)
        record.section_ok = bool(_same_rule(compose(sigma_r, tau_r, cfg.term_budget), cfg.window_budget))
    try:
        inj = is_injective(tau_r, cfg.window_budget)
        record.injective, record.methods["injective"] = inj.verdict, inj.method
        sur = is_surjective(tau_r, cfg.window_budget)
        record.surjective, record.methods["surjective"] = sur.verdict, sur.method
    except (EnumerationBudgetExceeded, Undecidable) as exc:
        record.diagnostics.append(str(exc))
    _probe_quotients(tau_r, cfg, record)
    try:
        record.window_surjective = window_map(tau_r, memory).is_surjective(cfg.window_budget)
    except EnumerationBudgetExceeded as exc:
        record.diagnostics.append(f"window map: {exc}")
    return record


def run_restriction_ladder(sigma, tau, cfg=None):
    """Check every finite level ``r0 | r <= depth``; ``sigma`` may be ``None``."""
    cfg = cfg or PipelineConfig()
    if not (isinstance(tau.alphabet, AffineAlphabet) and tau.alphabet.ladder):
        raise WrongCharacteristic("the ladder needs an automaton over the closure of F_p")
    r0 = coefficient_model(tau)
    if sigma is not None:
        if not verify_section(sigma, tau, budget=cfg.term_budget):
            raise SectionFailed("sigma o tau is not the identity")
        r0s = coefficient_model(sigma)
        r0 = r0 * r0s // math.gcd(r0, r0s)
        memory = common_memory(sigma.memory, tau.memory)
    else:
        memory = common_memory(tau.memory)
    report = PipelineReport(tau.alphabet.field.p, r0, cfg.depth, [str(g) for g in memory])
    report.left_identity_ok = True if sigma is not None else None
    levels = _ladder_levels(r0, cfg.depth)
    if not levels:
        report.diagnostics.append(f"base level {r0} exceeds depth {cfg.depth}")
    for r in levels:
        report.levels.append(_run_level(sigma, tau, r, memory, cfg))
    return report


def conclude_two_sided(sigma, tau, report, cfg=None):
    """``tau o sigma = Id``: symbolic check plus the same check as functions at every level."""
    cfg = cfg or PipelineConfig(depth=report.depth)
    if not report.all_levels_pass:
        raise SectionFailed("the restriction ladder has failing levels")
    eq = is_identity_rule(compose(tau, sigma, cfg.term_budget), cfg.window_budget)
    verdict = bool(eq.as_polynomials)
    for rec in report.levels:
        rho = compose(restrict(tau, rec.r), restrict(sigma, rec.r), cfg.term_budget)
        ok = bool(is_identity_rule(rho, cfg.window_budget).as_functions)
        if not ok:
            rec.diagnostics.append("tau o sigma differs from the identity at this level")
        verdict = verdict and ok
    report.right_identity_ok = verdict
    return verdict


def validate_report(data):
    """Raise ``jsonschema.ValidationError`` unless ``data`` matches :data:`REPORT_SCHEMA`."""
    import jsonschema
    jsonschema.validate(data, REPORT_SCHEMA)
