"""Randomized verification suites and config-driven report assembly.

Every suite takes a seed, draws from one ``numpy.random.default_rng``
stream, and reports plain dict/dataclass records, so a fixed config and
seed reproduce the same report bytes. Negative-control material
(non-conservative generators under the explicit override) is kept in an
``observed`` section separate from asserted checks, so it never flips
the overall verdict.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import SgineqError
from .expconv import (
    ExponentSet,
    IllConditionedMidpointError,
    build_gram,
    check_order_psd,
    midpoint_equivalence_check,
)
from .families import (
    EntropyFamily,
    ExpFamily,
    HalfSquareFamily,
    NegLogFamily,
    OperatorFamily,
    PowerFamily,
    family_from_json,
    family_to_json,
    power_member,
)
from .jessen import DualVector, verify_adjoint_pairing, verify_jessen
from .lattice import LatticeElement, Ordering, OrderTolerance
from .reporting import CheckEntry, all_passed
from .semigroup import (
    Generator,
    check_positivity_and_normalization,
    check_semigroup_axioms,
    evolve,
    generator_from_json,
    generator_to_json,
    validate_generator,
)
from . import lattice

__all__ = [
    "ConfigError",
    "SuiteConfig",
    "config_from_json",
    "benchmark_families",
    "random_conservative_generator",
    "random_positive_generator",
    "random_domain_element",
    "run_lattice_axiom_suite",
    "run_semigroup_axiom_suite",
    "JessenSuiteResult",
    "run_jessen_random_suite",
    "NegativeControlResult",
    "run_negative_control",
    "AdjointSuiteResult",
    "run_adjoint_random_suite",
    "GramSuiteResult",
    "run_gram_random_suite",
    "run_midpoint_equivalence_suite",
    "run_config_verification",
]


class ConfigError(SgineqError):
    """Config cannot be used: missing fields, wrong shapes, empty lists."""


@dataclass
class SuiteConfig:
    generators: list
    families: list
    t_grid: list
    p_sets: list
    samples: int = 50
    seed: int = 20240821
    atol: float = 1e-9
    rtol: float = 1e-12
    psd_tol: float = 1e-8
    allow_unnormalized: bool = False
    output_dir: str = "out"

    @property
    def order_tol(self) -> OrderTolerance:
        return OrderTolerance(atol=self.atol, rtol=self.rtol)

    def to_json(self) -> dict:
        return {
            "generators": [generator_to_json(g) for g in self.generators],
            "families": [family_to_json(f) for f in self.families],
            "t_grid": [float(t) for t in self.t_grid],
            "p_sets": [list(p) for p in self.p_sets],
            "samples": self.samples,
            "seed": self.seed,
            "tolerances": {"atol": self.atol, "rtol": self.rtol, "psd": self.psd_tol},
            "allow_unnormalized": self.allow_unnormalized,
            "output_dir": self.output_dir,
        }


def config_from_json(data: dict, base_dir: Path | None = None) -> SuiteConfig:
    """Build a SuiteConfig from a plain JSON object.

    Generators are inline matrices or string refs to JSON files holding
    one generator object each, resolved against ``base_dir``.
    """
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    try:
        raw_gens = data["generators"]
        raw_fams = data["families"]
        t_grid = [float(t) for t in data["t_grid"]]
    except (KeyError, TypeError, ValueError) as err:
        raise ConfigError(f"config is missing or mistypes a required field: {err}") from err
    if not raw_gens:
        raise ConfigError("generator list is empty")
    if not raw_fams:
        raise ConfigError("family list is empty")
    if not t_grid or any(t < 0 for t in t_grid):
        raise ConfigError("t_grid must be nonempty with nonnegative entries")

    generators = []
    for item in raw_gens:
        if isinstance(item, str):
            ref = Path(item)
            if base_dir is not None and not ref.is_absolute():
                ref = base_dir / ref
            try:
                item = json.loads(ref.read_text())
            except OSError as err:
                raise ConfigError(f"cannot read generator ref {item!r}: {err}") from err
        try:
            generators.append(generator_from_json(item))
        except (KeyError, TypeError, ValueError) as err:
            raise ConfigError(f"bad generator entry: {err}") from err

    try:
        families = [family_from_json(f) for f in raw_fams]
    except (KeyError, TypeError, ValueError) as err:
        raise ConfigError(f"bad family selector: {err}") from err

    tols = data.get("tolerances", {})
    try:
        cfg = SuiteConfig(
            generators=generators,
            families=families,
            t_grid=t_grid,
            p_sets=[[float(p) for p in ps] for ps in data.get("p_sets", [])],
            samples=int(data.get("samples", 50)),
            seed=int(data.get("seed", 20240821)),
            atol=float(tols.get("atol", 1e-9)),
            rtol=float(tols.get("rtol", 1e-12)),
            psd_tol=float(tols.get("psd", 1e-8)),
            allow_unnormalized=bool(data.get("allow_unnormalized", False)),
            output_dir=str(data.get("output_dir", "out")),
        )
    except (TypeError, ValueError) as err:
        raise ConfigError(f"bad config value: {err}") from err
    if cfg.samples < 1:
        raise ConfigError("samples must be at least 1")
    try:
        cfg.order_tol
    except ValueError as err:
        raise ConfigError(f"bad tolerance: {err}") from err
    if cfg.psd_tol < 0:
        raise ConfigError("psd tolerance must be nonnegative")
    return cfg


def benchmark_families() -> list[OperatorFamily]:
    """The nine members every randomized suite cycles through."""
    return [
        PowerFamily(-1.0),
        PowerFamily(0.5),
        PowerFamily(2.0),
        PowerFamily(3.0),
        NegLogFamily(),
        EntropyFamily(),
        ExpFamily(1.0),
        ExpFamily(-1.0),
        HalfSquareFamily(),
    ]


def _family_domain_kind(fam: OperatorFamily) -> str:
    if isinstance(fam, (PowerFamily, NegLogFamily, EntropyFamily)):
        return "F"
    return "H"


def random_conservative_generator(rng, max_dim: int = 8, max_norm: float = 5.0,
                                  min_dim: int = 2, name: str | None = None) -> Generator:
    """Random Metzler matrix with exact zero row sums, ||Q|| <= max_norm."""
    n = int(rng.integers(min_dim, max_dim + 1))
    rates = rng.uniform(0.0, 1.0, size=(n, n))
    np.fill_diagonal(rates, 0.0)
    q = rates.copy()
    np.fill_diagonal(q, -rates.sum(axis=1))
    norm = np.max(np.sum(np.abs(q), axis=1))
    if norm > 0:
        q *= rng.uniform(0.3, 1.0) * max_norm / norm
    return validate_generator(q, name=name)


def random_positive_generator(rng, max_dim: int = 8, max_norm: float = 5.0,
                              name: str | None = None) -> Generator:
    """Random Metzler matrix with at least one strictly positive row sum."""
    n = int(rng.integers(2, max_dim + 1))
    rates = rng.uniform(0.0, 1.0, size=(n, n))
    np.fill_diagonal(rates, 0.0)
    q = rates.copy()
    surplus = rng.uniform(0.1, 1.0, size=n) * (rng.uniform(size=n) < 0.7)
    if not np.any(surplus > 0):
        surplus[int(rng.integers(0, n))] = 0.5
    np.fill_diagonal(q, -rates.sum(axis=1) + surplus)
    norm = np.max(np.sum(np.abs(q), axis=1))
    if norm > 0:
        q *= max_norm / norm
    return validate_generator(q, name=name)


def random_domain_element(rng, dim: int, kind: str) -> LatticeElement:
    """Sample inside the family domain: positive cone for F, a box for H."""
    if kind == "F":
        return LatticeElement(rng.uniform(0.2, 3.0, size=dim))
    return LatticeElement(rng.uniform(-2.0, 2.0, size=dim))


def run_lattice_axiom_suite(dim: int, samples: int, seed: int, tol: float = 1e-12) -> list[CheckEntry]:
    """Sampled identities of the componentwise lattice structure."""
    rng = np.random.default_rng(seed)
    worst = {
        "absorption": 0.0,
        "decomposition": 0.0,
        "modulus_triangle": 0.0,
        "norm_compatibility": 0.0,
        "norm_submultiplicative": 0.0,
        "unit_norm": 0.0,
    }
    for _ in range(samples):
        f = LatticeElement(rng.uniform(-5, 5, size=dim))
        g = LatticeElement(rng.uniform(-5, 5, size=dim))
        j = lattice.join(f, g)
        m = lattice.meet(f, g)
        worst["absorption"] = max(
            worst["absorption"],
            float(np.max(np.abs(lattice.join(f, m).values - f.values))),
            float(np.max(np.abs(lattice.meet(f, j).values - f.values))),
        )
        worst["decomposition"] = max(
            worst["decomposition"],
            float(np.max(np.abs((lattice.pos_part(f) - lattice.neg_part(f)).values - f.values))),
            float(np.max(np.abs((lattice.pos_part(f) + lattice.neg_part(f)).values
                                - lattice.abs_val(f).values))),
        )
        worst["modulus_triangle"] = max(
            worst["modulus_triangle"],
            float(np.max(lattice.abs_val(f + g).values
                         - (lattice.abs_val(f) + lattice.abs_val(g)).values)),
        )
        # |h| <= |g| built by shrinking g entrywise
        h = LatticeElement(g.values * rng.uniform(-1.0, 1.0, size=dim))
        worst["norm_compatibility"] = max(
            worst["norm_compatibility"],
            lattice.lattice_norm(h) - lattice.lattice_norm(g),
        )
        worst["norm_submultiplicative"] = max(
            worst["norm_submultiplicative"],
            lattice.lattice_norm(lattice.multiply(f, g))
            - lattice.lattice_norm(f) * lattice.lattice_norm(g),
        )
    unit = LatticeElement(np.ones(dim))
    worst["unit_norm"] = abs(lattice.lattice_norm(unit) - 1.0)
    return [CheckEntry(name, defect <= tol, defect, tol) for name, defect in worst.items()]


def run_semigroup_axiom_suite(generators, samples: int, seed: int, tol: float = 1e-10) -> list[CheckEntry]:
    """Axioms and positivity structure for each supplied generator."""
    rng = np.random.default_rng(seed)
    entries = []
    for gen in generators:
        label = gen.name or f"dim{gen.dim}"
        worst_law = 0.0
        worst_neg = 0.0
        worst_norm = 0.0
        for _ in range(samples):
            s = float(rng.uniform(0.0, 2.5))
            t = float(rng.uniform(0.0, 2.5))
            zs = evolve(gen, s)
            zt = evolve(gen, t)
            zst = evolve(gen, s + t)
            worst_law = max(worst_law, float(np.max(np.abs(zs.matrix @ zt.matrix - zst.matrix))))
            worst_neg = max(worst_neg, float(-np.min(zst.matrix)))
            if gen.conservative:
                worst_norm = max(worst_norm, float(np.max(np.abs(zst.row_sums() - 1.0))))
        entries.append(CheckEntry(f"{label}:composition", worst_law <= tol, worst_law, tol))
        entries.append(CheckEntry(f"{label}:nonnegativity", worst_neg <= 0.0, worst_neg, 0.0))
        if gen.conservative:
            entries.append(CheckEntry(f"{label}:normalization", worst_norm <= tol, worst_norm, tol))
        f = LatticeElement(rng.uniform(-1.0, 2.0, size=gen.dim))
        entries.extend(check_semigroup_axioms(gen, 0.4, 1.1, tol=tol, f=f))
        entries.extend(check_positivity_and_normalization(gen, 0.7, f, tol=tol))
    return entries


@dataclass
class JessenSuiteResult:
    cases: list = field(default_factory=list)
    min_slack: float = float("inf")
    worst_scaled_slack: float = float("inf")
    failures: int = 0

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def aggregate_json(self) -> dict:
        return {
            "cases": len(self.cases),
            "min_slack": self.min_slack,
            "worst_scaled_slack": self.worst_scaled_slack,
            "failures": self.failures,
        }


def _slack_floor(residual: LatticeElement, tol: float = 1e-9) -> float:
    return -tol * (1.0 + lattice.lattice_norm(residual))


def run_jessen_random_suite(
    n_cases: int,
    seed: int,
    t_values=(0.1, 1.0, 10.0),
    families=None,
    max_dim: int = 8,
    max_norm: float = 5.0,
    tol: OrderTolerance | None = None,
    slack_tol: float = 1e-9,
    keep_cases: bool = False,
) -> JessenSuiteResult:
    """Random (generator, family, t, f) draws against the inequality.

    A case fails when the verdict is neither LEQ nor EQUAL, or the
    minimal slack drops below -slack_tol * (1 + ||residual||).
    """
    rng = np.random.default_rng(seed)
    families = list(families) if families is not None else benchmark_families()
    tol = tol or OrderTolerance()
    result = JessenSuiteResult()
    for _ in range(n_cases):
        gen = random_conservative_generator(rng, max_dim=max_dim, max_norm=max_norm)
        fam = families[int(rng.integers(0, len(families)))]
        t = float(t_values[int(rng.integers(0, len(t_values)))])
        f = random_domain_element(rng, gen.dim, _family_domain_kind(fam))
        report = verify_jessen(gen, fam, f, t, tol=tol)
        floor = _slack_floor(report.residual, slack_tol)
        ok = report.verdict in (Ordering.LEQ, Ordering.EQUAL) and report.min_slack >= floor
        result.min_slack = min(result.min_slack, report.min_slack)
        result.worst_scaled_slack = min(result.worst_scaled_slack, report.min_slack - floor)
        if not ok:
            result.failures += 1
        if keep_cases or not ok:
            result.cases.append(report.to_json() | {"ok": ok})
    return result


@dataclass
class NegativeControlResult:
    found: bool
    attempts: int
    min_slack: float
    generator: dict | None

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "attempts": self.attempts,
            "min_slack": self.min_slack,
            "generator": self.generator,
        }


def run_negative_control(seed: int, attempts: int = 60, threshold: float = -1e-6) -> NegativeControlResult:
    """Sample non-conservative positive generators until the inequality
    breaks, witnessing that normalization is a real hypothesis."""
    rng = np.random.default_rng(seed)
    fam = PowerFamily(2.0)
    best = float("inf")
    witness = None
    for i in range(1, attempts + 1):
        gen = random_positive_generator(rng, max_dim=5, max_norm=3.0, name=f"control{i}")
        f = random_domain_element(rng, gen.dim, "F")
        t = float(rng.uniform(0.5, 2.0))
        report = verify_jessen(gen, fam, f, t, allow_unnormalized=True)
        if report.min_slack < best:
            best = report.min_slack
            witness = generator_to_json(gen) | {"t": t}
        if best < threshold:
            return NegativeControlResult(True, i, best, witness)
    return NegativeControlResult(False, attempts, best, witness)


@dataclass
class AdjointSuiteResult:
    cases: int
    max_transpose_defect: float
    min_weak_gap: float
    max_consistency_defect: float
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {
            "cases": self.cases,
            "max_transpose_defect": self.max_transpose_defect,
            "min_weak_gap": self.min_weak_gap,
            "max_consistency_defect": self.max_consistency_defect,
            "failures": self.failures,
        }


def run_adjoint_random_suite(
    n_cases: int,
    seed: int,
    families=None,
    t_values=(0.1, 1.0, 10.0),
    max_dim: int = 8,
    transpose_tol: float = 1e-12,
    gap_tol: float = 1e-9,
    consistency_tol: float = 1e-10,
) -> AdjointSuiteResult:
    """Transpose identity and weak-form gap over random triples."""
    rng = np.random.default_rng(seed)
    families = list(families) if families is not None else benchmark_families()
    worst_tr = 0.0
    worst_gap = float("inf")
    worst_cons = 0.0
    failures = 0
    for _ in range(n_cases):
        gen = random_conservative_generator(rng, max_dim=max_dim)
        fam = families[int(rng.integers(0, len(families)))]
        t = float(t_values[int(rng.integers(0, len(t_values)))])
        f = random_domain_element(rng, gen.dim, _family_domain_kind(fam))
        raw = rng.uniform(0.0, 1.0, size=gen.dim)
        total = raw.sum()
        fstar = DualVector(raw / total if total > 0 else raw + 1.0 / gen.dim)
        rep = verify_adjoint_pairing(
            gen, fam, fstar, f, t, transpose_tol=transpose_tol, gap_tol=gap_tol
        )
        worst_tr = max(worst_tr, rep.transpose_defect)
        worst_gap = min(worst_gap, rep.weak_gap)
        worst_cons = max(worst_cons, rep.consistency_defect)
        if not (rep.transpose_ok and rep.gap_ok and rep.consistency_defect <= consistency_tol):
            failures += 1
    return AdjointSuiteResult(
        cases=n_cases,
        max_transpose_defect=worst_tr,
        min_weak_gap=worst_gap,
        max_consistency_defect=worst_cons,
        failures=failures,
    )


@dataclass
class GramSuiteResult:
    instances: int
    min_eigenvalue: float
    min_quadform: float
    max_entry: float
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {
            "instances": self.instances,
            "min_eigenvalue": self.min_eigenvalue,
            "min_quadform": self.min_quadform,
            "max_entry": self.max_entry,
            "failures": self.failures,
        }


def _sample_exponent_set(rng, kind: str) -> ExponentSet:
    size = int(rng.integers(2, 7))
    while True:
        if kind == "F":
            points = rng.uniform(1.5, 5.0, size=size)
        else:
            points = rng.uniform(-2.0, 2.0, size=size)
            if rng.uniform() < 0.3:
                points[0] = 0.0
        try:
            return ExponentSet(points, family_kind=kind)
        except IllConditionedMidpointError:
            continue


def run_gram_random_suite(
    n_instances: int,
    kind: str,
    seed: int,
    t_values=(0.5, 2.0),
    n_xi: int = 1000,
    tol: float = 1e-8,
    max_dim: int = 6,
) -> GramSuiteResult:
    """Random Gram instances with both PSD certificates."""
    rng = np.random.default_rng(seed)
    worst_eig = float("inf")
    worst_quad = float("inf")
    max_entry = 0.0
    failures = 0
    for i in range(n_instances):
        gen = random_conservative_generator(rng, max_dim=max_dim, max_norm=4.0)
        f = random_domain_element(rng, gen.dim, kind)
        t = float(t_values[int(rng.integers(0, len(t_values)))])
        pset = _sample_exponent_set(rng, kind)
        gram = build_gram(gen, f, t, pset)
        rep = check_order_psd(gram, n_xi=n_xi, seed=int(rng.integers(0, 2 ** 31)), tol=tol)
        worst_eig = min(worst_eig, rep.min_eigenvalue)
        worst_quad = min(worst_quad, rep.min_quadform)
        max_entry = max(max_entry, gram.max_abs_entry())
        if not rep.passed:
            failures += 1
    return GramSuiteResult(
        instances=n_instances,
        min_eigenvalue=worst_eig,
        min_quadform=worst_quad,
        max_entry=max_entry,
        failures=failures,
    )


def run_midpoint_equivalence_suite(n_instances: int, seed: int, tol: float = 1e-12) -> dict:
    """Substitution identity on random residual-based maps."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_instances):
        gen = random_conservative_generator(rng, max_dim=5, max_norm=3.0)
        f = random_domain_element(rng, gen.dim, "F")
        t = float(rng.uniform(0.3, 2.0))
        op = evolve(gen, t)
        n = int(rng.integers(1, 5))
        xs = rng.uniform(1.2, 2.4, size=n)
        xis = rng.uniform(-1.0, 1.0, size=n)

        def h_map(p, _op=op, _f=f):
            fam = power_member(p)
            return _op.apply(fam.apply(_f)) - fam.apply(_op.apply(_f))

        rep = midpoint_equivalence_check(h_map, xs, xis, tol=tol)
        worst = max(worst, rep.defect_double, rep.defect_half)
    return {"instances": n_instances, "max_defect": worst, "pass": worst <= tol}


def run_config_verification(cfg: SuiteConfig) -> dict:
    """The cmd-verify driver: all suites against an explicit config.

    Non-conservative generators in the config are rejected unless the
    override is set, in which case their results go to ``observed``.
    """
    from .jessen import NotNormalizedError

    bad = [g for g in cfg.generators if not g.conservative]
    if bad and not cfg.allow_unnormalized:
        label = bad[0].name or f"generator of dim {bad[0].dim}"
        raise NotNormalizedError(
            f"{label} is not conservative; set allow_unnormalized to run it as a control"
        )
    asserted_gens = [g for g in cfg.generators if g.conservative]

    rng = np.random.default_rng(cfg.seed)
    report: dict = {"config": cfg.to_json(), "suites": {}}
    failures = 0

    dims = sorted({g.dim for g in cfg.generators})
    lat_entries = []
    for dim in dims:
        lat_entries.extend(run_lattice_axiom_suite(dim, cfg.samples, int(rng.integers(0, 2 ** 31))))
    report["suites"]["lattice_axioms"] = {
        "checks": [e.to_json() for e in lat_entries],
        "passed": all_passed(lat_entries),
    }
    failures += 0 if all_passed(lat_entries) else 1

    semi_entries = run_semigroup_axiom_suite(
        asserted_gens, max(2, cfg.samples // 10), int(rng.integers(0, 2 ** 31))
    )
    report["suites"]["semigroup_axioms"] = {
        "checks": [e.to_json() for e in semi_entries],
        "passed": all_passed(semi_entries),
    }
    failures += 0 if all_passed(semi_entries) else 1

    jessen_cases = []
    jessen_failures = 0
    min_slack = float("inf")
    for gen in asserted_gens:
        for fam in cfg.families:
            kind = _family_domain_kind(fam)
            for t in cfg.t_grid:
                for _ in range(cfg.samples):
                    f = random_domain_element(rng, gen.dim, kind)
                    rep = verify_jessen(gen, fam, f, t, tol=cfg.order_tol)
                    ok = rep.verdict in (Ordering.LEQ, Ordering.EQUAL)
                    min_slack = min(min_slack, rep.min_slack)
                    if not ok:
                        jessen_failures += 1
                        jessen_cases.append(rep.to_json())
    report["suites"]["jessen"] = {
        "aggregate": {
            "min_slack": min_slack if min_slack != float("inf") else None,
            "failures": jessen_failures,
        },
        "failed_cases": jessen_cases,
        "passed": jessen_failures == 0,
    }
    failures += 0 if jessen_failures == 0 else 1

    adj_worst_tr = 0.0
    adj_worst_gap = float("inf")
    adj_failures = 0
    for gen in asserted_gens:
        for fam in cfg.families:
            kind = _family_domain_kind(fam)
            for t in cfg.t_grid:
                f = random_domain_element(rng, gen.dim, kind)
                raw = rng.uniform(0.0, 1.0, size=gen.dim)
                fstar = DualVector(raw / max(raw.sum(), 1e-12))
                rep = verify_adjoint_pairing(gen, fam, fstar, f, t)
                adj_worst_tr = max(adj_worst_tr, rep.transpose_defect)
                adj_worst_gap = min(adj_worst_gap, rep.weak_gap)
                if not (rep.transpose_ok and rep.gap_ok):
                    adj_failures += 1
    report["suites"]["adjoint"] = {
        "aggregate": {
            "max_transpose_defect": adj_worst_tr,
            "min_weak_gap": adj_worst_gap if adj_worst_gap != float("inf") else None,
            "failures": adj_failures,
        },
        "passed": adj_failures == 0,
    }
    failures += 0 if adj_failures == 0 else 1

    gram_failures = 0
    gram_records = []
    for gen in asserted_gens:
        for ps in cfg.p_sets:
            # a guard-band hit raises here and surfaces as a hypothesis
            # violation, matching the exit-code contract
            pset = ExponentSet(ps, family_kind="F")
            for t in cfg.t_grid:
                if t == 0.0:
                    continue
                f = random_domain_element(rng, gen.dim, "F")
                gram = build_gram(gen, f, t, pset)
                rep = check_order_psd(
                    gram, n_xi=200, seed=int(rng.integers(0, 2 ** 31)), tol=cfg.psd_tol
                )
                gram_records.append(
                    {"p": list(pset.p), "t": t, "generator": gen.name} | rep.to_json()
                )
                if not rep.passed:
                    gram_failures += 1
    report["suites"]["gram_psd"] = {
        "records": gram_records,
        "passed": gram_failures == 0,
    }
    failures += 0 if gram_failures == 0 else 1

    if bad:
        observed = []
        for gen in bad:
            fam = PowerFamily(2.0)
            for t in cfg.t_grid:
                if t == 0.0:
                    continue
                f = random_domain_element(rng, gen.dim, "F")
                rep = verify_jessen(gen, fam, f, t, allow_unnormalized=True)
                observed.append(rep.to_json())
        report["suites"]["observed_controls"] = {
            "note": "non-conservative generators under override; diagnostics only",
            "cases": observed,
        }

    report["passed"] = failures == 0
    return report
