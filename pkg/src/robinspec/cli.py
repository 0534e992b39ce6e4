"""Command-line front end: batch verification runs, sweeps and convergence tables.

Run ``robinspec --help`` (or ``python -m robinspec --help``) for the
subcommands.  A verification run is described by a JSON file whose keys are
the fields of :class:`RunConfig`; unknown keys are rejected.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__
from .ballspec import gap_functions, gap_identity_residual, robin_eigenvalue_ball
from .errors import ConfigError, ConvexityError, DomainError, RobinSpecError
from .femspec import parse_domain, radii, robin_spectrum
from .rearrange import Profile, decreasing_rearrangement, distribution, hybrid_grid
from .verify import (
    chiti_comparison,
    classical_checks,
    equimeasurability_reports,
    faber_krahn_robin,
    gap_bound_general,
    hardy_littlewood_reports,
    lemma32_report,
    make_report,
    radial_identity_reports,
    ratio_sweep,
    reflection_reports,
    reports_to_csv,
    reports_to_json,
    reverse_holder,
    rm_lower_bound,
    sweep_reports,
    sweep_to_csv,
    theorem11_bound,
    to_json_text,
)
from .verify.chiti import transfer_reports
from .verify.common import case_data

log = logging.getLogger("robinspec")

__all__ = ["RunConfig", "RunResult", "ConvergenceTable", "run", "convergence", "main",
           "KNOWN_CHECKS"]

# checks evaluated per (domain, β) case
CASE_CHECKS = ("eq12.6", "thm1.1", "eq1.8.1", "thm1.6", "thm3.1", "prop2.8", "lemma3.2",
               "lemmaA.2", "eq4.1")
# once per domain
DOMAIN_CHECKS = ("eq1.30.1", "eq1.4", "eq12.7", "eq12.3")
# once per run (the sweep, and the seeded rearrangement corpora)
RUN_CHECKS = ("eq12.8", "prop2.3", "prop2.4", "prop2.6", "reflection")
KNOWN_CHECKS = CASE_CHECKS + DOMAIN_CHECKS + RUN_CHECKS
FINITE_ONLY = {"eq1.8.1", "thm1.6", "thm3.1", "prop2.8", "lemma3.2", "lemmaA.2", "eq4.1"}


def _parse_beta(b) -> float:
    if isinstance(b, str):
        if b.strip().lower() == "dirichlet":
            return math.inf
        try:
            b = float(b)
        except ValueError:
            raise ConfigError(f"β must be a positive number or 'dirichlet', got {b!r}") from None
    if isinstance(b, bool) or not isinstance(b, (int, float)) or not b > 0:
        raise ConfigError(f"β must be a positive number or 'dirichlet', got {b!r}")
    return float(b)


@dataclass(frozen=True)
class RunConfig:
    """One batch run.  ``betas`` may contain ``"dirichlet"``."""

    domain_specs: list
    betas: list
    h: float = 0.02
    m: int = 512
    checks: list = field(default_factory=list)
    p: float = 1.0
    q: float = 2.0
    output_dir: str = "out"
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.domain_specs, list):
            raise ConfigError("domain_specs must be a list")
        if not isinstance(self.betas, list) or not self.betas:
            raise ConfigError("betas must be a nonempty list")
        for b in self.betas:
            _parse_beta(b)
        if isinstance(self.h, bool) or not isinstance(self.h, (int, float)) or not self.h > 0:
            raise ConfigError("h must be positive")
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 16:
            raise ConfigError("m must be an integer >= 16")
        if not isinstance(self.checks, list):
            raise ConfigError("checks must be a list")
        unknown = [c for c in self.checks if c not in KNOWN_CHECKS]
        if unknown:
            raise ConfigError(f"unknown check ids {unknown}; known: {list(KNOWN_CHECKS)}")
        if not (0 < self.p <= self.q):
            raise ConfigError("need q >= p > 0")
        if isinstance(self.seed, bool) or int(self.seed) != self.seed:
            raise ConfigError("seed must be an integer")
        for spec in self.domain_specs:
            try:
                parse_domain(spec, int(self.m))
            except (DomainError, ValueError, TypeError) as exc:
                raise ConfigError(f"bad domain descriptor {spec!r}: {exc}") from None

    @property
    def beta_values(self) -> list[float]:
        return [_parse_beta(b) for b in self.betas]

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        names = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ConfigError(f"unknown config keys {unknown}")
        missing = sorted(k for k in ("domain_specs", "betas") if k not in data)
        if missing:
            raise ConfigError(f"missing config keys {missing}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(data)


@dataclass
class RunResult:
    reports: list
    sweep: list
    profiles: dict
    exit_status: int


def _case_name(domain_name: str, beta: float) -> str:
    b = "dirichlet" if math.isinf(beta) else repr(float(beta))
    return re.sub(r"[^A-Za-z0-9.]+", "_", f"{domain_name}_beta_{b}").strip("_")


def _failure(claim: str, exc: Exception, **context):
    return make_report(claim, math.nan, math.nan, 0.0, error=f"{type(exc).__name__}: {exc}",
                       **context)


def _resampled(profile: Profile) -> str:
    s = hybrid_grid(profile.total_measure)
    return Profile(s, np.minimum.accumulate(np.asarray(profile(s))), profile.total_measure).to_csv()


def _run_case(args):
    """Reports and profile exports for one (domain, β); pure and picklable."""
    spec, m, beta, h, checks, p, q = args
    domain = parse_domain(spec, m)
    ctx = {"domain": domain.name, "beta": beta, "h": h, "m": domain.m}
    reports, profiles = [], {}
    wanted = [c for c in CASE_CHECKS if c in checks]
    if math.isinf(beta):
        skipped = [c for c in wanted if c in FINITE_ONLY]
        if skipped:
            log.info("%s: %s need a finite β; skipped", ctx["domain"], skipped)
        wanted = [c for c in wanted if c not in FINITE_ONLY]

    def guard(claim, fn):
        try:
            out = fn()
        except ConvexityError as exc:
            log.info("%s: %s", claim, exc)
            return
        except (RobinSpecError, ValueError, ArithmeticError) as exc:
            reports.append(_failure(claim, exc, **ctx))
            return
        reports.extend(out if isinstance(out, list) else [out])

    if "eq12.6" in wanted:
        guard("eq12.6", lambda: faber_krahn_robin(domain, beta, h))
    if "thm1.1" in wanted:
        guard("thm1.1", lambda: theorem11_bound(domain, beta, h))
    if "eq1.8.1" in wanted:
        guard("eq1.8.1", lambda: rm_lower_bound(domain, beta, h))
    if "thm1.6" in wanted:
        guard("thm1.6", lambda: reverse_holder(domain, beta, p, q, h))
    if {"thm3.1", "prop2.8"} & set(wanted):
        def chiti():
            case = case_data(domain, beta, h)
            comp = chiti_comparison(domain, beta, 2.0, h)
            out = []
            if "thm3.1" in wanted:
                out.append(make_report("thm3.1", comp.crossing_count, 1.0, 0.0,
                                       **case.context(p=2.0, case=comp.case, s0=comp.s0,
                                                      ball_measure=comp.ball_measure)))
            if "prop2.8" in wanted:
                out += transfer_reports(comp, case.context(p=2.0))
            name = _case_name(domain.name, beta)
            profiles[f"{name}_psi.csv"] = _resampled(comp.profile_psi)
            profiles[f"{name}_z.csv"] = _resampled(comp.profile_z)
            return out
        guard("thm3.1", chiti)
    if "lemma3.2" in wanted:
        guard("lemma3.2", lambda: lemma32_report(domain, beta, h))
    if {"lemmaA.2", "eq4.1"} & set(wanted):
        guard("lemmaA.2", lambda: [r for r in gap_bound_general(domain, beta, h)
                                   if r.claim_id in wanted])
    return reports, profiles


def _run_domain(args):
    spec, m, h, checks = args
    domain = parse_domain(spec, m)
    try:
        out = classical_checks(domain, h)
    except (RobinSpecError, ValueError, ArithmeticError) as exc:
        return [_failure("classical", exc, domain=domain.name, h=h, m=domain.m)]
    return [r for r in out if r.claim_id in checks]


def _pmap(fn, tasks, jobs):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


def run(config: RunConfig, out_dir=None, jobs: int = 1, write: bool = True) -> RunResult:
    """Execute the requested checks and write the report files.

    Cases run in parallel with ``jobs > 1``; results are merged in the
    configuration's (domain, β) order, so outputs do not depend on ``jobs``.
    The exit status is 0 iff every asserted report holds.
    """
    checks = list(dict.fromkeys(config.checks))
    h, m = float(config.h), int(config.m)
    betas = config.beta_values
    reports, profiles = [], {}

    case_tasks = [(spec, m, b, h, tuple(checks), float(config.p), float(config.q))
                  for spec in config.domain_specs for b in betas]
    if any(c in CASE_CHECKS for c in checks):
        for reps, profs in _pmap(_run_case, case_tasks, jobs):
            reports += reps
            profiles.update(profs)
    if any(c in DOMAIN_CHECKS for c in checks):
        dom_tasks = [(spec, m, h, tuple(checks)) for spec in config.domain_specs]
        for reps in _pmap(_run_domain, dom_tasks, jobs):
            reports += reps

    sweep = []
    if "eq12.8" in checks:
        finite = [b for b in betas if math.isfinite(b)]
        domains = [parse_domain(s, m) for s in config.domain_specs]
        if finite and domains:
            sweep = ratio_sweep(domains, finite, h, jobs=jobs)
            reports += sweep_reports(sweep)
    seed = int(config.seed)
    if "prop2.3" in checks:
        reports += equimeasurability_reports(seed)
    if "prop2.4" in checks:
        reports += radial_identity_reports()
    if "prop2.6" in checks:
        reports += hardy_littlewood_reports(seed)
    if "reflection" in checks:
        reports += reflection_reports(seed)

    failed = [r for r in reports if r.asserted and not r.holds]
    for r in failed:
        log.warning("FAILED %s %s margin=%g", r.claim_id, r.context, r.margin)
    for r in reports:
        if r.context.get("conjecture_stress"):
            log.info("conjecture stress: %s", r.context)
    status = 1 if failed else 0

    if write:
        out = Path(out_dir if out_dir is not None else config.output_dir)
        (out / "profiles").mkdir(parents=True, exist_ok=True)
        reports_to_json(reports, out / "reports.json")
        reports_to_csv(reports, out / "reports.csv")
        sweep_to_csv(sweep, out / "sweep.csv")
        for name in sorted(profiles):
            (out / "profiles" / name).write_text(profiles[name])
    return RunResult(reports, sweep, profiles, status)


@dataclass(frozen=True)
class ConvergenceTable:
    """Eigenvalues per mesh size with Richardson limits and observed orders."""

    h: list
    lambda1: list
    lambda2: list
    lambda1_extrapolated: float
    lambda2_extrapolated: float
    order1: float
    order2: float

    def to_dict(self) -> dict:
        return asdict(self)


def _richardson(h, values):
    """Observed order from the last three values and the extrapolated limit."""
    (h1, h2, h3), (a, b, c) = h[-3:], values[-3:]
    d1, d2 = a - b, b - c
    ratio = h2 / h3
    if d2 == 0 or d1 == 0 or d1 / d2 <= 0:
        return float("nan"), float(c)
    order = math.log(d1 / d2) / math.log(h1 / h2)
    return order, float(c + (c - b) / (ratio ** order - 1))


def convergence(domain, beta: float, h_list) -> ConvergenceTable:
    """``λ_1``, ``λ_2`` on a strictly decreasing list of at least three mesh sizes."""
    h_list = [float(x) for x in h_list]
    if len(h_list) < 3 or any(b >= a for a, b in zip(h_list, h_list[1:])):
        raise DomainError("h_list must be strictly decreasing with at least three entries")
    domain = parse_domain(domain)
    pairs = [robin_spectrum(domain, float(beta), h) for h in h_list]
    l1 = [p.lambda1 for p in pairs]
    l2 = [p.lambda2 for p in pairs]
    o1, e1 = _richardson(h_list, l1)
    o2, e2 = _richardson(h_list, l2)
    return ConvergenceTable(h_list, l1, l2, e1, e2, o1, o2)


# ----------------------------------------------------------------------------
# argument parsing

def _emit(obj) -> None:
    sys.stdout.write(to_json_text(obj))


def _cmd_ball(a) -> int:
    mode = robin_eigenvalue_ball(a.dim, a.radius, _parse_beta(a.beta), a.ell, a.index)
    out = {"dim": a.dim, "radius": a.radius, "beta": mode.beta_eff, "ell": a.ell,
           "index": a.index, "kappa": mode.kappa, "eigenvalue": mode.eigenvalue}
    if a.gap:
        gap = gap_functions(a.dim, a.radius, _parse_beta(a.beta))
        out["gap"] = gap.gap
        out["gap_identity_residual"] = gap_identity_residual(gap)
    _emit(out)
    return 0


def _cmd_domain(a) -> int:
    domain = parse_domain(a.spec, a.m)
    beta = _parse_beta(a.beta) if a.beta != "0" else 0.0
    pair = robin_spectrum(domain, beta, a.h)
    out = {"domain": domain.name, "beta": beta, "h": a.h, "nodes": pair.mesh.n_nodes,
           "lambda1": pair.lambda1, "lambda2": pair.lambda2, "area": domain.area,
           "diameter": domain.diameter, "p0": domain.p0}
    if beta > 0:
        out["radii"] = radii(pair, domain, beta).to_dict()
    _emit(out)
    return 0


def _cmd_rearrange(a) -> int:
    domain = parse_domain(a.spec, a.m)
    pair = robin_spectrum(domain, _parse_beta(a.beta), a.h)
    text = _resampled(decreasing_rearrangement(distribution(pair)))
    if a.out:
        Path(a.out).parent.mkdir(parents=True, exist_ok=True)
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _load_config(a) -> RunConfig:
    if not a.config:
        raise ConfigError("--config is required")
    cfg = RunConfig.from_json(a.config)
    if a.seed is not None:
        cfg = RunConfig(**{**asdict(cfg), "seed": a.seed})
    return cfg


def _cmd_verify(a) -> int:
    cfg = _load_config(a)
    result = run(cfg, out_dir=a.out, jobs=a.jobs)
    n_fail = sum(1 for r in result.reports if r.asserted and not r.holds)
    print(f"{len(result.reports)} reports, {n_fail} failed", file=sys.stderr)
    return result.exit_status


def _cmd_sweep(a) -> int:
    if a.config:
        cfg = _load_config(a)
        cfg = RunConfig(**{**asdict(cfg), "checks": ["eq12.8"]})
    else:
        cfg = RunConfig(domain_specs=a.domains, betas=a.betas, h=a.h, m=a.m, checks=["eq12.8"])
    result = run(cfg, out_dir=a.out, jobs=a.jobs)
    sys.stdout.write(sweep_to_csv(result.sweep))
    return result.exit_status


def _cmd_convergence(a) -> int:
    beta = 0.0 if a.beta == "0" else _parse_beta(a.beta)
    _emit(convergence(parse_domain(a.spec, a.m), beta, a.h).to_dict())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="robinspec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="output directory (overrides output_dir)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--seed", type=int, help="seed for the random corpora")

    p = sub.add_parser("ball", help="Robin eigenvalues of a ball")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--beta", default="1", help="Robin coefficient or 'dirichlet'")
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--index", type=int, default=1)
    p.add_argument("--gap", action="store_true", help="also report the gap identity")
    p.set_defaults(func=_cmd_ball)

    p = sub.add_parser("domain", help="FEM eigenvalues and radii of a polygon")
    p.add_argument("spec", help='domain descriptor, e.g. "rectangle(1,2)"')
    p.add_argument("--beta", default="1", help="coefficient, 0 (Neumann) or 'dirichlet'")
    p.add_argument("--h", type=float, default=0.02)
    p.add_argument("--m", type=int, default=512)
    p.set_defaults(func=_cmd_domain)

    p = sub.add_parser("rearrange", help="export the decreasing rearrangement of ψ_1")
    p.add_argument("spec")
    p.add_argument("--beta", default="1")
    p.add_argument("--h", type=float, default=0.02)
    p.add_argument("--m", type=int, default=512)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=_cmd_rearrange)

    p = sub.add_parser("verify", parents=[common], help="run the checks of a config")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="eigenvalue-ratio table against the disk")
    p.add_argument("--domains", nargs="+", default=["disk", "square", "rectangle(1,2)",
                                                      "ellipse(2,1)", "lshape"])
    p.add_argument("--betas", nargs="+", type=float, default=[0.1, 1.0, 10.0])
    p.add_argument("--h", type=float, default=0.02)
    p.add_argument("--m", type=int, default=512)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("convergence", help="mesh convergence with Richardson extrapolation")
    p.add_argument("spec")
    p.add_argument("--beta", default="dirichlet")
    p.add_argument("--h", type=float, nargs="+", default=[0.08, 0.04, 0.02])
    p.add_argument("--m", type=int, default=512)
    p.set_defaults(func=_cmd_convergence)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return int(a.func(a))
    except (ConfigError, DomainError) as exc:
        print(f"robinspec: error: {exc}", file=sys.stderr)
        return 2
    except RobinSpecError as exc:
        print(f"robinspec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
