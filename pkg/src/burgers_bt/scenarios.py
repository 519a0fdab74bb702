"""Scenario configuration, orchestration and reports.

A scenario is described by one JSON document (:class:`ScenarioConfig`) and
produces a :class:`RunReport` made of named checks.  Module errors raised
while running are recorded as failed checks, never propagated.
"""

from __future__ import annotations

import json
import platform
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import exact, fieldio, heat_ivp, library, reference_fd
from .errors import BurgersError, ConfigInvalid
from .exact import ConstantPair
from .heat_ivp import DomainBox, ScalarField2D

SCHEMA_VERSION = 1
KINDS = ("exact-recurrence", "ivp-pipeline", "cross-validate", "oracle-compare")
FORMATS = ("csv", "bin")

DEFAULT_TOLERANCES = {
    "heat_residual": 1e-10,
    "residual": 1e-8,
    "compatibility": 1e-8,
    "ivp_exact": 1e-6,
    "ratio": 1e-8,
    "curl": 1e-8,
    "xval": 5e-3,
    "fd_curl": 1e-4,
    "oracle": 1e-6,
}


@dataclass
class SeedSpec:
    constant: float = 1.0
    terms: list = field(default_factory=lambda: [[1.0, 1.0, 1.0]])


@dataclass
class InitialDataSpec:
    name: str = "tanh-pair"
    params: dict = field(default_factory=dict)
    base_point: list = field(default_factory=lambda: [0.0, 0.0])


@dataclass
class SampleSpec:
    count: int = 100
    rng_seed: int = 0


@dataclass
class OutputSpec:
    dir: str = "out"
    format: str = "bin"


@dataclass
class ScenarioConfig:
    kind: str = "exact-recurrence"
    box: dict = field(default_factory=lambda: {"Lx": 16.0, "Ly": 16.0, "nx": 128, "ny": 128, "t0": 0.0})
    background: list = field(default_factory=lambda: [0.0, 0.0])
    seed: SeedSpec = field(default_factory=SeedSpec)
    initial_data: InitialDataSpec = field(default_factory=InitialDataSpec)
    depth: int = 0
    tau: float = 0.1
    samples: SampleSpec = field(default_factory=SampleSpec)
    output: OutputSpec = field(default_factory=OutputSpec)
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    # -- derived objects
    def domain(self) -> DomainBox:
        return DomainBox(float(self.box["Lx"]), float(self.box["Ly"]), int(self.box["nx"]),
                         int(self.box["ny"]), float(self.box.get("t0", 0.0)))

    def constant_pair(self) -> ConstantPair:
        return ConstantPair(float(self.background[0]), float(self.background[1]))

    def case(self) -> library.Case:
        spec = self.initial_data
        return library.make_case(spec.name, background=self.constant_pair(),
                                 t0=self.domain().t0, base_point=spec.base_point, **spec.params)

    # -- serialisation
    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        problems = []
        if not isinstance(d, dict):
            raise ConfigInvalid(["config must be a mapping"])
        known = set(cls.__dataclass_fields__)
        for key in sorted(set(d) - known):
            problems.append(f"unknown key {key!r}")
        kw = {k: v for k, v in d.items() if k in known}
        nested = {"seed": SeedSpec, "initial_data": InitialDataSpec, "samples": SampleSpec,
                  "output": OutputSpec}
        for key, sub in nested.items():
            if key in kw:
                val = kw[key]
                if not isinstance(val, dict):
                    problems.append(f"{key} must be a mapping")
                    kw.pop(key)
                    continue
                bad = set(val) - set(sub.__dataclass_fields__)
                if bad:
                    problems.append(f"unknown keys in {key}: {sorted(bad)}")
                kw[key] = sub(**{k: v for k, v in val.items() if k not in bad})
        if "tolerances" in kw:
            if isinstance(kw["tolerances"], dict):
                kw["tolerances"] = {**DEFAULT_TOLERANCES, **kw["tolerances"]}
            else:
                problems.append("tolerances must be a mapping")
                kw.pop("tolerances")
        cfg = cls(**kw)
        problems += cfg.problems()
        if problems:
            raise ConfigInvalid(problems)
        return cfg

    @classmethod
    def from_json(cls, text: str) -> "ScenarioConfig":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigInvalid([f"not valid JSON: {exc}"]) from exc
        return cls.from_dict(d)

    def problems(self) -> list:
        """Everything wrong with this config (empty when valid)."""
        out = []
        if self.kind not in KINDS:
            out.append(f"kind {self.kind!r} not in {list(KINDS)}")
        if not isinstance(self.box, dict) or not {"Lx", "Ly", "nx", "ny"} <= set(self.box):
            out.append("box needs Lx, Ly, nx, ny")
        else:
            try:
                self.domain()
            except (TypeError, ValueError) as exc:
                out.append(f"box: {exc}")
        if not (isinstance(self.background, (list, tuple)) and len(self.background) == 2
                and all(_is_real(v) for v in self.background)):
            out.append(f"background must be two numbers, got {self.background!r}")
        if not _is_real(self.seed.constant) or self.seed.constant < 0:
            out.append(f"seed.constant must be a non-negative number, got {self.seed.constant!r}")
        if not isinstance(self.seed.terms, list) or not all(
                isinstance(t, (list, tuple)) and len(t) == 3 and all(_is_real(v) for v in t)
                for t in self.seed.terms):
            out.append(f"seed.terms must be a list of [a, k, l], got {self.seed.terms!r}")
        elif any(t[0] < 0 for t in self.seed.terms):
            out.append("seed amplitudes must be non-negative")
        elif self.seed.constant == 0 and not any(t[0] > 0 for t in self.seed.terms):
            out.append("seed is identically zero")
        if self.initial_data.name not in library.LIBRARY:
            out.append(f"initial_data.name {self.initial_data.name!r} not in {sorted(library.LIBRARY)}")
        if not isinstance(self.initial_data.params, dict):
            out.append("initial_data.params must be a mapping")
        bp = self.initial_data.base_point
        if not (isinstance(bp, (list, tuple)) and len(bp) == 2 and all(_is_real(v) for v in bp)):
            out.append(f"initial_data.base_point must be two numbers, got {bp!r}")
        if not isinstance(self.depth, int) or isinstance(self.depth, bool) or self.depth < 0:
            out.append(f"depth must be a non-negative integer, got {self.depth!r}")
        if not _is_real(self.tau) or self.tau < 0:
            out.append(f"tau must be a non-negative number, got {self.tau!r}")
        elif self.kind in ("oracle-compare",) and self.tau == 0:
            out.append("oracle-compare needs tau > 0")
        if not isinstance(self.samples.count, int) or self.samples.count < 1:
            out.append(f"samples.count must be a positive integer, got {self.samples.count!r}")
        if not isinstance(self.samples.rng_seed, int) or not 0 <= self.samples.rng_seed < 2 ** 64:
            out.append(f"samples.rng_seed must be an unsigned 64-bit integer, got {self.samples.rng_seed!r}")
        if self.output.format not in FORMATS:
            out.append(f"output.format {self.output.format!r} not in {list(FORMATS)}")
        for name, tol in self.tolerances.items():
            if not _is_real(tol) or not tol > 0:
                out.append(f"tolerance {name!r} must be positive, got {tol!r}")
        return out


def _is_real(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and np.isfinite(v)


def default_config(kind: str) -> ScenarioConfig:
    if kind == "exact-recurrence":
        return ScenarioConfig(kind=kind, box={"Lx": 4.0, "Ly": 4.0, "nx": 32, "ny": 32, "t0": 0.0},
                              background=[0.5, 0.5],
                              seed=SeedSpec(1.0, [[1.0, 1.0, 1.0], [0.5, -0.5, 1.5]]),
                              depth=1, tau=0.5)
    if kind == "oracle-compare":
        L = 2 * np.pi
        return ScenarioConfig(kind=kind, box={"Lx": L, "Ly": L, "nx": 128, "ny": 128, "t0": 0.0},
                              initial_data=InitialDataSpec("periodic-cosine", {"Lx": L, "Ly": L}))
    return ScenarioConfig(kind=kind)


# -- reports ----------------------------------------------------------------------

@dataclass
class Check:
    name: str
    value: Optional[float]
    tolerance: Optional[float]
    passed: bool
    detail: str = ""


def _jsonable(v):
    if isinstance(v, float) and not np.isfinite(v):
        return repr(v)
    return v


@dataclass
class RunReport:
    scenario: str
    rng_seed: int
    config: dict
    checks: list = field(default_factory=list)
    environment: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    fields: dict = field(default_factory=dict, repr=False)
    schema_version: int = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, name, value, tolerance, passed=None, detail=""):
        if value is not None:
            value = float(value)
        if passed is None:
            passed = value is not None and np.isfinite(value) and value < tolerance
        self.checks.append(Check(name, value, tolerance, bool(passed), detail))

    def fail(self, name, exc: BaseException):
        self.checks.append(Check(name, None, None, False, f"{type(exc).__name__}: {exc}"))

    def to_dict(self) -> dict:
        """Deterministic content only; wall-clock timings are kept apart."""
        return {
            "schema_version": self.schema_version,
            "scenario": self.scenario,
            "rng_seed": self.rng_seed,
            "passed": self.passed,
            "checks": [{k: _jsonable(v) for k, v in asdict(c).items()} for c in self.checks],
            "environment": self.environment,
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            val = "-" if c.value is None else f"{c.value:.3e}"
            tol = "-" if c.tolerance is None else f"{c.tolerance:.1e}"
            extra = f"  ({c.detail})" if c.detail else ""
            lines.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {val} < {tol}{extra}")
        lines.append(f"{self.scenario}: {'PASSED' if self.passed else 'FAILED'}")
        return "\n".join(lines)


def environment_fingerprint() -> dict:
    from . import __version__
    return {"package": __version__, "python": platform.python_version(), "numpy": np.__version__,
            "machine": platform.machine(), "system": platform.system()}


# -- scenario bodies ----------------------------------------------------------------

def _max(a, mask=None):
    a = np.abs(np.asarray(a))
    return float(np.max(a[mask] if mask is not None else a, initial=0.0))


def _run_exact(cfg: ScenarioConfig, rep: RunReport):
    tol = cfg.tolerances
    bg = cfg.constant_pair()
    pts = exact.sample_points(cfg.samples.count, cfg.samples.rng_seed)
    phi = exact.make_plane_wave_seed(bg, cfg.seed.terms, cfg.seed.constant)
    prem = exact.validate_bt_premises(phi, bg, pts)
    rep.add("seed_heat_residual", prem.heat_residual_max, tol["heat_residual"],
            detail="; ".join(prem.notes))
    pair = exact.iterate_recurrence(exact.cole_hopf_lift(phi, bg, seed="plane-wave"), cfg.depth)
    for stage in ("residual", "compatibility"):
        try:
            if stage == "residual":
                r1, r2 = exact.burgers_residual(pair, pts, 2)
                value = max(_max(r1), _max(r2))
            else:
                value = _max(exact.compatibility_defect(pair, pts))
            rep.add(f"depth{cfg.depth}_{stage}", value, tol[stage])
        except (BurgersError, ArithmeticError, ValueError) as exc:
            rep.fail(f"depth{cfg.depth}_{stage}", exc)
    box = cfg.domain()
    X, Y = box.grid()
    t = box.t0 + cfg.tau
    try:
        u, v = exact.evaluate_on_grid(pair, X, Y, t)
        rep.fields["u"] = ScalarField2D(u, box, t)
        rep.fields["v"] = ScalarField2D(v, box, t)
    except (BurgersError, ArithmeticError, ValueError) as exc:
        rep.fail("field_evaluation", exc)


def _pipeline(cfg: ScenarioConfig, rep: RunReport, case):
    box = cfg.domain()
    t = box.t0 + cfg.tau
    res = heat_ivp.solve_burgers_ivp(case.data, box, t)
    rep.add("phi_min_positive", float(np.min(res.phi.values)), None,
            passed=bool(np.min(res.phi.values) > 0))
    rep.fields.update(f=res.f, phi=res.phi, u=res.u, v=res.v)
    return res


def _run_ivp(cfg: ScenarioConfig, rep: RunReport):
    tol = cfg.tolerances
    box = cfg.domain()
    case = cfg.case()
    rep.add("initial_compatibility", heat_ivp.check_compatibility(case.data, box, np.inf),
            heat_ivp.COMPAT_TOL)
    res = _pipeline(cfg, rep, case)
    interior = box.interior_mask()
    X, Y = box.grid()
    if case.exact_phi is not None:
        ratio = res.f.values / case.exact_phi(X, Y, box.t0)
        rep.add("datum_ratio_spread", float(np.ptp(ratio[interior]) / abs(np.mean(ratio[interior]))),
                tol["ratio"])
    if case.exact_uv is not None:
        ue, ve = case.exact_uv(X, Y, res.u.time)
        rep.add("ivp_exact_error", max(_max(res.u.values - ue, interior), _max(res.v.values - ve, interior)),
                tol["ivp_exact"])
    rep.add("recovered_curl", _max(heat_ivp.recovered_curl(res.phi)), tol["curl"])


def _run_xval(cfg: ScenarioConfig, rep: RunReport):
    tol = cfg.tolerances
    box = cfg.domain()
    case = cfg.case()
    res = _pipeline(cfg, rep, case)
    X, Y = box.grid()
    u0 = ScalarField2D(case.data.s(X, Y), box, box.t0)
    v0 = ScalarField2D(case.data.k(X, Y), box, box.t0)
    state = reference_fd.fd_integrate(reference_fd.initial_state(u0, v0), res.u.time)
    interior = box.interior_mask()
    rep.add("fd_vs_spectral", max(_max(state.u.values - res.u.values, interior),
                                  _max(state.v.values - res.v.values, interior)), tol["xval"])
    rep.add("fd_curl", _max(reference_fd.discrete_curl(state.u.values, state.v.values, box), interior),
            tol["fd_curl"])
    rep.fields.update(u_fd=state.u, v_fd=state.v)


def _run_oracle(cfg: ScenarioConfig, rep: RunReport):
    box = cfg.domain()
    case = cfg.case()
    bg = cfg.constant_pair()
    f = heat_ivp.build_initial_data(case.data, box)
    t = box.t0 + cfg.tau
    spec = heat_ivp.solve_heat_spectral(f, bg, t)
    kern = heat_ivp.kernel_convolve_oracle(f, bg, t)
    rep.add("phi_min_positive", float(np.min(spec.values)), None, passed=bool(np.min(spec.values) > 0))
    rep.add("spectral_vs_kernel", _max(spec.values - kern.values), cfg.tolerances["oracle"])
    rep.fields.update(f=f, phi_spectral=spec, phi_kernel=kern)


_RUNNERS = {"exact-recurrence": _run_exact, "ivp-pipeline": _run_ivp,
            "cross-validate": _run_xval, "oracle-compare": _run_oracle}


def run_scenario(config: ScenarioConfig, out_dir=None, fmt: Optional[str] = None,
                 write: bool = True) -> RunReport:
    """Run ``config`` and (unless ``write`` is False) emit its fields and report."""
    problems = config.problems()
    if problems:
        raise ConfigInvalid(problems)
    rep = RunReport(config.kind, config.samples.rng_seed, config.to_dict(),
                    environment=environment_fingerprint())
    start = time.perf_counter()
    try:
        _RUNNERS[config.kind](config, rep)
    except Exception as exc:  # every module failure becomes a failed check
        rep.fail(config.kind, exc)
    rep.timings["run_seconds"] = time.perf_counter() - start
    if write:
        emit_fields(rep, out_dir if out_dir is not None else config.output.dir,
                    fmt or config.output.format)
    return rep


def emit_fields(report: RunReport, out_dir, fmt: str = "bin") -> list:
    """Write every field snapshot, ``report.json`` and ``timings.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [fieldio.write_field(f, out, name, fmt) for name, f in sorted(report.fields.items())]
    (out / "report.json").write_text(report.to_json())
    (out / "timings.json").write_text(json.dumps(report.timings, indent=2, sort_keys=True) + "\n")
    return written + [out / "report.json", out / "timings.json"]


def config_error_report(kind: str, problems, rng_seed: int = 0) -> RunReport:
    """Report for a config that could not be loaded: one failed check per problem."""
    rep = RunReport(kind, rng_seed, {}, environment=environment_fingerprint())
    for p in problems:
        rep.checks.append(Check("config", None, None, False, str(p)))
    return rep


def load_config(path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigInvalid([f"cannot read {path}: {exc}"]) from exc
    return ScenarioConfig.from_json(text)

