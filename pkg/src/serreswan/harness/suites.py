"""Suite assembly: map a RunConfig onto the checks and collect reports.

Each check carries its own tolerance, derived from the two configured
tolerances by a fixed factor (``TIERS``). A suite passes when all of its
checks pass; its ``max_residual`` is the worst residual-to-tolerance
ratio, compared against 1.
"""

from __future__ import annotations

import time
import zlib
from dataclasses import dataclass, field

from ..algebra import make_algebra
from ..hilbert import make_module
from . import checks as C
from .config import RunConfig

# (base tolerance, factor)
TIERS = {
    "exact": ("tol_analytic", 1e-4),
    "tight": ("tol_analytic", 1e-2),
    "norm": ("tol_analytic", 1e-1),
    "analytic": ("tol_analytic", 1.0),
    "pushforward": ("tol_fd", 1e-1),
    "fd": ("tol_fd", 1.0),
    "nested": ("tol_fd", 10.0),
    "nonmember": ("tol_fd", 1e3),
}


@dataclass
class CheckRecord:
    name: str
    cases: int
    value: float
    tolerance: float
    bound: str = "upper"

    @property
    def passed(self) -> bool:
        if self.bound == "lower":
            return self.value > self.tolerance
        return self.value <= self.tolerance

    @property
    def ratio(self) -> float:
        if self.bound == "lower":
            return self.tolerance / self.value if self.value > 0 else float("inf")
        return self.value / self.tolerance

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "cases": self.cases,
            "value": self.value,
            "tolerance": self.tolerance,
            "bound": self.bound,
            "pass": self.passed,
        }


@dataclass
class SuiteReport:
    suite: str
    checks: list[CheckRecord] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def cases(self) -> int:
        return sum(c.cases for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.ratio for c in self.checks), default=0.0)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "cases": self.cases,
            "max_residual": self.max_residual,
            "tolerance": 1.0,
            "pass": self.passed,
            "elapsed": round(self.elapsed, 3),
            "checks": [c.to_json() for c in self.checks],
        }


class _Runner:
    def __init__(self, config: RunConfig, suite: str):
        self.config = config
        self.suite = suite
        self.shape = make_algebra(config.blocks)
        self.module = make_module(self.shape, config.rows)
        self.step = config.fd_step
        self.records: list[CheckRecord] = []

    def key(self, check: str) -> tuple[int, int]:
        return (self.config.seed, zlib.crc32(f"{self.suite}/{check}".encode()))

    def tol(self, tier: str) -> float:
        base, factor = TIERS[tier]
        return getattr(self.config, base) * factor

    def add(self, name, cases, value, tier, bound="upper"):
        self.records.append(CheckRecord(name, cases, float(value), self.tol(tier), bound))


def _algebra(r: _Runner):
    r.add("c_star_identity", 100, C.c_star_identity(r.shape, r.key("cstar"), 100), "tight")
    r.add("submultiplicativity", 100, C.submultiplicativity(r.shape, r.key("submult"), 100), "tight")
    r.add("signature_permutation", 20, C.signature_permutation(r.shape, r.key("sig"), 20), "exact")
    r.add("pauli_product", 1, C.pauli_product(), "exact")


def _geometry(r: _Runner):
    n = r.config.samples
    r.add("chart_roundtrip", n, C.chart_roundtrip(r.shape, r.key("roundtrip"), n), "tight")
    r.add("chart_compatibility", n, C.chart_compatibility(r.shape, r.key("compat"), n), "tight")
    r.add("phase_invariance", n, C.phase_invariance(r.shape, r.key("phase"), n), "exact")
    r.add("metric_positivity", n, C.metric_positivity(r.shape, r.key("positivity"), n), "exact", "lower")
    r.add("metric_at_center", n, C.metric_at_center(r.shape, r.key("center"), n), "exact")
    r.add("kahler_identity", n, C.kahler_identity(r.shape, r.key("kahler"), n), "exact")
    r.add("transition_phase_modulus", n, C.transition_phase_modulus(r.shape, r.key("modulus"), n), "exact")
    excess, gap = C.sup_bound(r.shape, r.key("sup"), 5, 50 * n)
    r.add("sup_bound", 5, excess, "norm")
    r.add("sup_attained", 5, gap, "norm")
    r.add("wirtinger_vs_analytic", 50, C.wirtinger_vs_analytic(r.shape, r.key("wirtinger"), 50, r.step), "pushforward")


def _gelfand(r: _Runner):
    n = r.config.samples
    r.add("star_homomorphism_analytic", 20 * n, C.star_homomorphism(r.shape, r.key("hom"), 20, n, "auto", r.step), "analytic")
    r.add("star_homomorphism_fd", 20 * n, C.star_homomorphism(r.shape, r.key("hom"), 20, n, "fd", r.step), "fd")
    r.add("involution", n, C.involution(r.shape, r.key("involution"), n), "exact")
    gap, excess = C.star_norm_gap(r.shape, r.key("norm"), 20, n, r.step)
    r.add("star_norm_augmented", 20, gap, "norm")
    r.add("star_norm_plain_bound", 20, excess, "norm")
    member, nonmember = C.ku_membership(r.shape, r.key("ku"), 20, 10 * r.step)
    r.add("ku_member_residual", 20, member, "nested")
    r.add("ku_nonmember_residual", 20, nonmember, "nonmember", "lower")


def _module(r: _Runner):
    n = r.config.samples
    m = r.module
    r.add("positivity", n, C.module_positivity(m, r.key("positivity"), n), "tight")
    r.add("cauchy_schwarz", n, C.cauchy_schwarz(m, r.key("cs"), n), "tight")
    r.add("inner_action", n, C.inner_action(m, r.key("action"), n), "exact")
    r.add("inner_symmetry", n, C.inner_symmetry(m, r.key("symmetry"), n), "exact")


def _bundle(r: _Runner):
    n = r.config.samples
    m = r.module
    r.add("fiber_inner_routes", n, C.fiber_inner_routes(m, r.key("fiber"), n), "exact")
    r.add("hermitian_metric", n, C.hermitian_metric(m, r.key("metric"), n), "exact")
    r.add("section_norm", 20, C.section_norm_gap(m, r.key("norm"), 20, n), "norm")
    r.add("chart_transition", 50, C.chart_transition(m, r.key("transition"), 50), "tight")
    r.add("orbit_invariance", 100, C.orbit_invariance(m, r.key("orbit"), 100), "exact")
    r.add("quotient_dimension", n, C.quotient_dimension(m, r.key("quotient"), n), "exact")
    r.add("action_compatibility", n, C.action_compatibility(m, r.key("group"), n), "exact")
    r.add("local_pairing", n, C.local_pairing(m, r.key("local"), n), "tight")
    r.add("holomorphy", 20, C.holomorphy(m, r.key("holo"), 20, r.step), "fd")


def _connection(r: _Runner):
    m = r.module
    r.add("cocycle", 50, C.cocycle(r.shape, r.key("cocycle"), 50, r.step), "pushforward")
    r.add("flatness", 20, C.flatness(m, r.key("flat"), 20, r.step), "nested")
    r.add("leibniz", 20, C.leibniz(m, r.key("leibniz"), 20, r.step), "fd")
    r.add("covariant_routes", 50, C.covariant_routes(m, r.key("routes"), 50, r.step), "fd")
    r.add("transport_independence", 20, C.transport_independence(m, r.key("transport"), 20), "exact")


def _serre_swan(r: _Runner):
    n = r.config.samples
    m = r.module
    r.add("star_action_analytic", n, C.serre_swan(m, r.key("ss"), n, "analytic", r.step), "analytic")
    r.add("star_action_fd", n, C.serre_swan(m, r.key("ss"), n, "fd", r.step), "fd")
    r.add("metric_compatibility", 50, C.metric_compatibility(m, r.key("compat"), 50, r.step), "analytic")


def _reconstruction(r: _Runner):
    r.add("roundtrip", 20, C.reconstruction_roundtrip(r.shape, r.key("roundtrip"), 20), "analytic")
    r.add("underdetermined_detection", 10, C.underdetermined_detection(r.shape, r.key("deficient"), 10), "exact")


_SUITES = {
    "algebra": _algebra,
    "geometry": _geometry,
    "gelfand": _gelfand,
    "module": _module,
    "bundle": _bundle,
    "connection": _connection,
    "serre-swan": _serre_swan,
    "reconstruction": _reconstruction,
}


def run_suite(config: RunConfig, name: str) -> SuiteReport:
    runner = _Runner(config, name)
    t0 = time.perf_counter()
    _SUITES[name](runner)
    return SuiteReport(name, runner.records, (time.perf_counter() - t0) * 1000.0)


def run_all(config: RunConfig) -> dict:
    reports = [run_suite(config, name) for name in config.suites]
    return {
        "config_echo": config.to_json(),
        "suites": [rep.to_json() for rep in reports],
        "pass": all(rep.passed for rep in reports),
    }
