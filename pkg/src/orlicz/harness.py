"""Run configuration, invariant cases and verification suites behind the CLI.

Every case is a plain record ``{suite, case, invariant, inputs}``; its
outcome is recomputed from ``inputs`` alone, so a failing record can be
replayed bit-for-bit with :func:`replay_case`.
"""
import math
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .conjugation import biconjugate_check, conjugate, finiteness_duality, young_gap
from .errors import ConstructionError, NotInSpaceError, OrliczError
from .functions import INF, from_descriptor
from .geometry.sequence import SequenceSpace
from .geometry.slices import (
    SliceSpec,
    explicit_pair_diameter,
    slice_diameter_lower_bound,
    uniformly_non_l12_estimate,
)
from .geometry.witness import (
    BOUND_SLACK,
    challenge_witness,
    construct_witness,
    normalize,
    random_challengers,
    special_challengers,
)
from .measures import MeasureDescriptor
from .spaces import (
    AMEMIYA_TOL,
    DUAL_BUDGET,
    GAP_TOLERANCE,
    LUX_RTOL,
    MODULAR_RTOL,
    StepFunction,
    amemiya_minimize,
    luxemburg_norm,
)

COMMANDS = ("classify", "norm", "conjugate", "witness", "slice", "verify", "catalog")
SUITES = ("norms", "conjugacy", "witness", "slices")
FORMATS = ("table", "records")

DEFAULT_TOLERANCES = {
    "luxemburg_rtol": LUX_RTOL,
    "amemiya_tol": AMEMIYA_TOL,
    "modular_rtol": MODULAR_RTOL,
    "duality_gap": GAP_TOLERANCE,
    "sandwich": 1e-8,
    "biconjugate": 1e-5,
    "young": 1e-9,
    "bound_slack": BOUND_SLACK,
}

DEFAULT_BUDGETS = {
    "norm": DUAL_BUDGET,
    "witness": 10_000,
    "slice": 20_000,
    "norms": 1000,
    "conjugacy": 10_000,
    "slices": 20_000,
}

DEFAULT_FUNCTIONS = {
    "norms": [{"family": "power", "p": 2.0, "k": 1.0}, {"family": "power", "p": 3.0, "k": 1.0},
              {"family": "exp_minus_one"}, {"family": "u_log_u"},
              {"family": "piecewise_linear", "points": [[0.0, 0.0], [1.0, 0.0], [2.0, 1.0]]}],
    "conjugacy": [{"family": "power", "p": 2.0, "k": 1.0}, {"family": "power", "p": 4.0, "k": 1.0},
                  {"family": "exp_minus_one"}, {"family": "u_log_u"}],
    "witness": [{"family": "power", "p": 2.0, "k": 1.0}, {"family": "power", "p": 4.0, "k": 1.0},
                {"family": "exp_minus_one"}],
}
DEFAULT_MEASURES = {
    "norms": [{"kind": "nonatomic", "total": "inf"}],
    "witness": [{"kind": "nonatomic", "total": "inf"}, {"kind": "counting"}],
}
BICONJUGATE_GRID = (1e-2, 1e2, 200)
MAX_LEVELS = 8


# -- configuration ----------------------------------------------------------------
@dataclass(frozen=True)
class RunConfig:
    """One schema for every subcommand. Unknown fields are rejected."""

    command: str = "verify"
    function: dict = None
    functions: list = None
    measure: dict = None
    measures: list = None
    norm_kind: str = "luxemburg"
    step: dict = None
    grid: list = None
    slice: dict = None
    point: list = None
    suite: str = "all"
    seed: int = 0
    budget: object = None  # int, or {suite: int} once resolved for ``verify``
    format: str = "table"
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConstructionError(f"config.command: expected one of {COMMANDS}, got {self.command!r}")
        if self.suite not in SUITES + ("all",):
            raise ConstructionError(f"config.suite: expected one of {SUITES + ('all',)}")
        if self.format not in FORMATS:
            raise ConstructionError(f"config.format: expected one of {FORMATS}")
        if self.norm_kind not in ("luxemburg", "orlicz"):
            raise ConstructionError("config.norm_kind: expected 'luxemburg' or 'orlicz'")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConstructionError("config.seed: expected an integer")
        extra = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if extra:
            raise ConstructionError(f"config.tolerances: unknown field(s) {sorted(extra)}")
        if self.budget is not None and not isinstance(self.budget, (int, dict)):
            raise ConstructionError("config.budget: expected an integer")
        # validate descriptors early so errors carry their field path
        if self.function is not None:
            from_descriptor(self.function, "config.function")
        for i, d in enumerate(self.functions or []):
            from_descriptor(d, f"config.functions[{i}]")
        if self.measure is not None:
            _measure(self.measure, "config.measure")
        for i, d in enumerate(self.measures or []):
            _measure(d, f"config.measures[{i}]")
        if self.step is not None:
            StepFunction.from_dict(self.step, "config.step")
        if self.slice is not None:
            _slice(self.slice, "config.slice")

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConstructionError("config: expected an object")
        names = {f.name for f in fields(cls)}
        extra = set(data) - names
        if extra:
            raise ConstructionError(f"config: unknown field(s) {sorted(extra)}")
        return cls(**data)

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def resolved(self):
        """Copy with every default written out (tolerances, budgets, descriptors)."""
        tol = {**DEFAULT_TOLERANCES, **self.tolerances}
        budget = self.budget
        if self.command == "verify":
            per = {s: DEFAULT_BUDGETS[s] for s in self.suites()}
            if isinstance(budget, int):
                per = {s: budget for s in per}
            elif isinstance(budget, dict):
                per.update(budget)
            budget = per
        elif budget is None:
            budget = DEFAULT_BUDGETS.get(self.command)
        function = self.function
        if function is None and self.command in ("classify", "norm", "conjugate", "witness", "slice"):
            function = {"family": "power", "p": 2.0, "k": 1.0}
        measure = self.measure
        if measure is None and self.command in ("classify", "norm", "witness"):
            measure = {"kind": "nonatomic", "total": "inf"}
        return replace(self, tolerances=tol, budget=budget, function=function, measure=measure)

    def suites(self):
        return SUITES if self.suite == "all" else (self.suite,)

    def tol(self, key):
        return self.tolerances.get(key, DEFAULT_TOLERANCES[key])


def _measure(d, path):
    try:
        return MeasureDescriptor.from_dict(d)
    except ConstructionError as e:
        raise ConstructionError(f"{path}: {e}") from None
    except (TypeError, AttributeError, ValueError):
        raise ConstructionError(f"{path}: expected a measure object") from None


def _slice(d, path):
    if not isinstance(d, dict):
        raise ConstructionError(f"{path}: expected an object")
    extra = set(d) - {"dimension", "functional", "epsilon", "side"}
    if extra:
        raise ConstructionError(f"{path}: unknown field(s) {sorted(extra)}")
    try:
        return SliceSpec(int(d["dimension"]), tuple(d["functional"]), float(d["epsilon"]),
                         d.get("side", "slice_of_ball"))
    except KeyError as e:
        raise ConstructionError(f"{path}: missing field {e.args[0]!r}") from None
    except ConstructionError as e:
        raise ConstructionError(f"{path}: {e}") from None


# -- cases ------------------------------------------------------------------------
@dataclass(frozen=True)
class CaseResult:
    suite: str
    case: int
    invariant: str
    inputs: dict
    passed: bool
    slack: float
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {"type": "case", "suite": self.suite, "case": self.case, "invariant": self.invariant,
                "passed": self.passed, "slack": _json_float(self.slack), "detail": self.detail,
                "inputs": self.inputs}


def _json_float(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return x


def _case_sandwich(inp):
    f = from_descriptor(inp["function"])
    x = StepFunction.from_dict(inp["step"])
    lux = luxemburg_norm(f, x)
    am = amemiya_minimize(f, x, lux=lux).value
    if not (math.isfinite(lux) and math.isfinite(am)):
        raise NotInSpaceError(f"norm overflows a double (luxemburg {lux}, amemiya {am})")
    slack = min(am - lux, 2.0 * lux + inp["tolerance"] - am)
    return slack >= 0, slack, {"luxemburg": lux, "amemiya": am}


def _case_biconjugate(inp):
    f = from_descriptor(inp["function"])
    lo, hi, n = inp["grid"]
    rep = biconjugate_check(f, np.geomspace(lo, hi, int(n)))
    slack = inp["tolerance"] - rep.max_error
    return slack >= 0, slack, {"max_error": rep.max_error, "worst_u": rep.worst_u}


def _case_young(inp):
    f = from_descriptor(inp["function"])
    pair = conjugate(f)
    rng = np.random.default_rng(inp["seed"])
    us = 10.0 ** rng.uniform(-3, 2, size=inp["count"])
    vs = 10.0 ** rng.uniform(-3, 2, size=inp["count"])
    worst = INF
    for u, v in zip(us, vs):
        if f._scalar(u) == INF or pair.conjugate._scalar(v) == INF:
            continue
        worst = min(worst, young_gap(pair, float(u), float(v)))
    slack = worst + inp["tolerance"]
    return slack >= 0, slack, {"min_gap": _json_float(worst)}


def _case_finiteness(inp):
    f = from_descriptor(inp["function"])
    r = finiteness_duality(f)
    return r.consistent, 0.0 if r.consistent else -1.0, {
        "n_at_infinity": r.n_at_infinity, "conjugate_finite": r.conjugate_finite}


def _case_witness(inp):
    f = from_descriptor(inp["function"])
    m = MeasureDescriptor.from_dict(inp["measure"])
    w = construct_witness(f, m)
    y = StepFunction.from_dict(inp["challenger"])
    rec = challenge_witness(f, w, y, sigma_cache=inp.get("_cache"), challenger=inp["id"])
    slack = min(rec.certified_bound + inp["tolerance"] - rec.observed_min,
                (2.0 - rec.certified_bound) if not rec.degenerate else 0.0)
    ok = rec.observed_min <= rec.certified_bound + inp["tolerance"] and (
        rec.certified_bound < 2.0 or rec.degenerate)
    detail = {"observed_min": rec.observed_min, "certified_bound": rec.certified_bound,
              "epsilon": rec.epsilon, "sigma": rec.sigma, "gamma": rec.gamma, "delta": rec.delta,
              "d": rec.d, "b_mass": rec.b_mass, "a": w.a, "mass": w.mass,
              "degenerate": rec.degenerate}
    if inp.get("hilbert"):
        hslack = math.sqrt(2.0) + inp["tolerance"] - rec.observed_min
        slack = min(slack, hslack)
        ok = ok and hslack >= 0
    return ok, slack, detail


def _spec(d):
    return _slice(d, "inputs.slice")


def _case_slice_lower(inp):
    f = from_descriptor(inp["function"])
    s = _spec(inp["slice"])
    if "pair" in inp:
        est = explicit_pair_diameter(f, s, *inp["pair"])
    else:
        est = slice_diameter_lower_bound(f, s, inp["budget"], inp["seed"])
    lo, hi = inp["expect"]
    slack = min(est.lower_bound - lo, hi - est.lower_bound)
    return slack >= 0, slack, est.to_dict()


def _case_gap(inp):
    f = from_descriptor(inp["function"])
    est = uniformly_non_l12_estimate(f, np.asarray(inp["x"], dtype=float), len(inp["x"]),
                                     inp["budget"], inp["seed"], inp.get("exhaustive"))
    lo, hi = inp["expect"]
    slack = min(est.gap - lo, hi - est.gap)
    return slack >= 0, slack, est.to_dict()


def _case_slice_duality(inp):
    f = from_descriptor(inp["function"])
    x = np.asarray(inp["x"], dtype=float)
    n = len(x)
    gap = uniformly_non_l12_estimate(f, x, n, inp["budget"], inp["seed"], exhaustive=True).gap
    if gap <= inp["threshold"]:
        return True, 0.0, {"gap": gap, "vacuous": True}
    s = SliceSpec(n, tuple(x), gap / 4.0, "weak_star_slice")
    est = slice_diameter_lower_bound(f, s, inp["budget"], inp["seed"])
    slack = 2.0 - gap / 2.0 - est.lower_bound
    return slack >= 0, slack, {"gap": gap, "lower_bound": est.lower_bound}


def _case_determinism(inp):
    f = from_descriptor(inp["function"])
    s = _spec(inp["slice"])
    a = slice_diameter_lower_bound(f, s, inp["budget"], inp["seed"]).to_dict()
    b = slice_diameter_lower_bound(f, s, inp["budget"], inp["seed"]).to_dict()
    x = np.eye(s.dimension)[0]
    x = x / SequenceSpace(f).norm(x[None, :])[0]
    g1 = uniformly_non_l12_estimate(f, x, s.dimension, inp["budget"] // 4, inp["seed"]).to_dict()
    g2 = uniformly_non_l12_estimate(f, x, s.dimension, inp["budget"] // 4, inp["seed"]).to_dict()
    same = a == b and g1 == g2
    return same, 0.0 if same else -1.0, {"lower_bound": a["lower_bound"], "gap": g1["gap"]}


def _case_cross_witness(inp):
    from .geometry.witness import certify_witness

    f = from_descriptor(inp["function"])
    m = MeasureDescriptor.from_dict({"kind": "counting"})
    w = construct_witness(f, m)
    n = inp["n"]
    x = np.zeros(n)
    x[:w.atoms] = w.a
    gap = uniformly_non_l12_estimate(f, x, n, inp["budget"], inp["seed"]).gap
    cert = certify_witness(f, w, inp["challengers"], inp["seed"])
    floor = min(2.0 - r.certified_bound for r in cert.per_challenger)
    return gap >= floor, gap - floor, {"gap": gap, "certified_floor": floor}


INVARIANTS = {
    "modular_spaces.norm_sandwich": _case_sandwich,
    "conjugation.biconjugate": _case_biconjugate,
    "conjugation.young_nonnegative": _case_young,
    "conjugation.finiteness_duality": _case_finiteness,
    "geometry.witness_soundness": _case_witness,
    "geometry.slice_diameter": _case_slice_lower,
    "geometry.non_l12_gap": _case_gap,
    "geometry.slice_point_duality": _case_slice_duality,
    "geometry.determinism": _case_determinism,
    "geometry.gap_vs_witness": _case_cross_witness,
}


def evaluate_case(suite, index, invariant, inputs, cache=None):
    run = dict(inputs)
    if cache is not None:
        run["_cache"] = cache
    try:
        ok, slack, detail = INVARIANTS[invariant](run)
    except OrliczError as e:
        ok, slack, detail = False, -INF, {"error": f"{type(e).__name__}: {e}"}
    return CaseResult(suite, index, invariant, inputs, bool(ok), float(slack), detail)


def replay_case(record):
    """Recompute a serialized case record; the slack is reproduced exactly."""
    return evaluate_case(record["suite"], record["case"], record["invariant"], record["inputs"])


# -- suites -----------------------------------------------------------------------
@dataclass(frozen=True)
class SuiteResult:
    suite: str
    cases: tuple

    @property
    def run(self):
        return len(self.cases)

    @property
    def passed(self):
        return sum(1 for c in self.cases if c.passed)

    @property
    def failed(self):
        return self.run - self.passed

    @property
    def failures(self):
        return [c for c in self.cases if not c.passed]

    def summary(self):
        return {"type": "summary", "suite": self.suite, "run": self.run, "passed": self.passed,
                "failed": self.failed}


def _rng(seed, index):
    # per-task generator derived from (master seed, task index)
    return np.random.default_rng([seed, index])


def random_step(rng, measure, max_levels=MAX_LEVELS):
    k = int(rng.integers(1, max_levels + 1))
    vals = rng.normal(size=k) * 10.0 ** rng.uniform(-2, 1.5, size=k)
    if measure.is_counting:
        return StepFunction.sequence(vals)
    masses = 10.0 ** rng.uniform(-2, 1, size=k)
    if measure.is_finite:
        masses = masses / masses.sum() * measure.total * rng.uniform(0.05, 1.0)
    return StepFunction(measure, vals, masses)


def _functions(cfg, suite):
    if cfg.functions is not None:
        return list(cfg.functions)
    if cfg.function is not None:
        return [cfg.function]
    return DEFAULT_FUNCTIONS[suite]


def _measures(cfg, suite):
    if cfg.measures is not None:
        return list(cfg.measures)
    if cfg.measure is not None:
        return [cfg.measure]
    return DEFAULT_MEASURES[suite]


def _norms_cases(cfg, budget):
    for fi, fd in enumerate(_functions(cfg, "norms")):
        for md in _measures(cfg, "norms"):
            m = MeasureDescriptor.from_dict(md)
            rng = _rng(cfg.seed, fi)
            for _ in range(budget):
                yield "modular_spaces.norm_sandwich", {
                    "function": fd, "step": random_step(rng, m).to_dict(),
                    "tolerance": cfg.tol("sandwich")}


def _conjugacy_cases(cfg, budget):
    for fi, fd in enumerate(_functions(cfg, "conjugacy")):
        f = from_descriptor(fd)
        yield "conjugation.biconjugate", {"function": fd, "grid": list(BICONJUGATE_GRID),
                                          "tolerance": cfg.tol("biconjugate")}
        yield "conjugation.young_nonnegative", {"function": fd, "seed": [cfg.seed, fi],
                                                "count": budget, "tolerance": cfg.tol("young")}
        if f.is_finite:
            yield "conjugation.finiteness_duality", {"function": fd}


def _witness_cases(cfg, budget):
    task = 0
    for fd in _functions(cfg, "witness"):
        f = from_descriptor(fd)
        hilbert = f.to_dict() == {"family": "power", "p": 2.0, "k": 1.0}
        for md in _measures(cfg, "witness"):
            m = MeasureDescriptor.from_dict(md)
            w = construct_witness(f, m)
            task += 1
            if w is None:
                continue
            raw = special_challengers(w) + random_challengers(w, budget, _rng(cfg.seed, task))
            for i, y in enumerate(normalize(f, raw)):
                yield "geometry.witness_soundness", {
                    "function": fd, "measure": md, "challenger": y.to_dict(), "id": i,
                    "tolerance": cfg.tol("bound_slack"), "hilbert": hilbert}


def _slices_cases(cfg, budget):
    l1 = {"family": "linear", "k": 1.0}
    l2 = {"family": "power", "p": 2.0, "k": 1.0}
    p4 = {"family": "power", "p": 4.0, "k": 1.0}
    e1 = lambda n: [1.0] + [0.0] * (n - 1)
    ws = {"dimension": 4, "functional": e1(4), "epsilon": 0.05, "side": "weak_star_slice"}
    scale = 1.0 - 1e-9
    seed = cfg.seed
    yield "geometry.slice_diameter", {"function": l1, "slice": ws, "expect": [1.99, 2.0 + 1e-9],
                                      "pair": [[scale] * 4, [scale, -scale, -scale, -scale]]}
    yield "geometry.slice_diameter", {"function": l1, "slice": ws, "expect": [1.99, 2.0 + 1e-9],
                                      "budget": budget, "seed": seed}
    yield "geometry.slice_diameter", {
        "function": l2, "slice": {"dimension": 4, "functional": e1(4), "epsilon": 0.02,
                                  "side": "slice_of_ball"},
        "expect": [0.35, 0.399], "budget": budget, "seed": seed}
    yield "geometry.slice_diameter", {
        "function": l2, "slice": {"dimension": 4, "functional": e1(4), "epsilon": 0.999,
                                  "side": "slice_of_ball"},
        "expect": [0.9 * 2.0, 2.0 + 1e-9], "budget": budget, "seed": seed}
    yield "geometry.non_l12_gap", {"function": l2, "x": e1(8), "budget": budget // 4, "seed": seed,
                                   "expect": [2 - math.sqrt(2) - 1e-9, 2 - math.sqrt(2) + 1e-2]}
    yield "geometry.non_l12_gap", {"function": l1, "x": e1(8), "budget": budget // 4, "seed": seed,
                                   "expect": [0.0, 1e-9]}
    for fd in (l1, l2, p4):
        yield "geometry.slice_point_duality", {"function": fd, "x": e1(3), "budget": budget,
                                               "seed": seed, "threshold": 1e-6}
    yield "geometry.determinism", {"function": l2, "slice": ws, "budget": budget, "seed": seed}
    yield "geometry.gap_vs_witness", {"function": p4, "n": 8, "budget": budget // 4, "seed": seed,
                                      "challengers": max(1, budget // 20)}


_SUITE_CASES = {"norms": _norms_cases, "conjugacy": _conjugacy_cases,
                "witness": _witness_cases, "slices": _slices_cases}


def run_suite(cfg, suite, on_case=None):
    """Run one suite sequentially; ``on_case`` sees each result in case order."""
    cfg = cfg if isinstance(cfg.budget, dict) else cfg.resolved()
    budget = cfg.budget[suite]
    cache = {}
    out = []
    for i, (inv, inputs) in enumerate(_SUITE_CASES[suite](cfg, budget)):
        key = (inv, repr(inputs.get("function")), repr(inputs.get("measure")))
        res = evaluate_case(suite, i, inv, inputs, cache.setdefault(key, {}))
        out.append(res)
        if on_case is not None:
            on_case(res)
    return SuiteResult(suite, tuple(out))


def run_verify(cfg, on_case=None):
    cfg = cfg.resolved()
    return [run_suite(cfg, s, on_case) for s in cfg.suites()]


__all__ = [
    "COMMANDS",
    "DEFAULT_TOLERANCES",
    "CaseResult",
    "RunConfig",
    "SuiteResult",
    "evaluate_case",
    "random_step",
    "replay_case",
    "run_suite",
    "run_verify",
]
