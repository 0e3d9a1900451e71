"""``orlicz`` command line: classify, norm, conjugate, witness, slice, verify, catalog.

Every subcommand reads the shared JSON config (``--config``), lets ``--seed``,
``--budget`` and ``--format`` override it, and prints either a table or
line-delimited JSON records. The first record is always the fully resolved
config. Exit status is 0 only when nothing failed.
"""
import argparse
import json
import sys
from dataclasses import asdict

import numpy as np

from .catalog import render_catalog, run_catalog
from .conjugation import biconjugate_check, conjugate, finiteness_duality
from .errors import OrliczError
from .functions import INF, from_descriptor
from .geometry.classify import classify
from .geometry.slices import slice_diameter_lower_bound, uniformly_non_l12_estimate
from .geometry.witness import certify_witness, construct_witness
from .harness import COMMANDS, RunConfig, _slice, replay_case, run_suite
from .measures import MeasureDescriptor
from .spaces import StepFunction, modular, norm_report

DEFAULT_GRID = [0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0]


def _jf(x):
    if isinstance(x, float) and x != x:
        return "nan"
    if x == INF:
        return "inf"
    return x


class Emitter:
    def __init__(self, fmt, out):
        self.fmt, self.out = fmt, out

    def record(self, rec):
        if self.fmt == "records":
            self.out.write(json.dumps(rec, sort_keys=True, default=_default) + "\n")

    def text(self, line=""):
        if self.fmt == "table":
            self.out.write(line + "\n")


def _default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o).__name__}")


# -- subcommands ------------------------------------------------------------------
def cmd_classify(cfg, em):
    f = from_descriptor(cfg.function)
    m = MeasureDescriptor.from_dict(cfg.measure)
    rep = classify(f, m, cfg.norm_kind)
    em.record({"type": "classification", "report": rep.to_dict()})
    for line in rep.lines():
        em.text(line)
    return 0


def cmd_norm(cfg, em):
    if cfg.step is None:
        raise OrliczError("config.step: required for the norm command")
    f = from_descriptor(cfg.function)
    x = StepFunction.from_dict(cfg.step, "config.step")
    rep = norm_report(f, x, cfg.budget)
    mod = modular(f, x)
    rec = {"type": "norm", "modular": _jf(mod), **{k: _jf(v) for k, v in rep.to_dict().items()}}
    em.record(rec)
    em.text(f"phi = {f.label()}, x = {x!r}")
    em.text(f"  modular          {mod:.12g}")
    em.text(f"  luxemburg        {rep.luxemburg:.12g}")
    em.text(f"  amemiya          {rep.amemiya:.12g}{'' if rep.amemiya_attained else '  (infimum not attained)'}")
    em.text(f"  orlicz (sup)     {rep.orlicz_sup:.12g}")
    em.text(f"  duality gap      {rep.duality_gap:.3g}")
    return 0 if rep.duality_gap <= cfg.tol("duality_gap") else 1


def cmd_conjugate(cfg, em):
    f = from_descriptor(cfg.function)
    pair = conjugate(f)
    grid = cfg.grid or DEFAULT_GRID
    rows = [(float(u), _jf(f._scalar(u)), _jf(pair.conjugate._scalar(u))) for u in grid]
    finite_grid = [u for u in np.geomspace(1e-2, 1e2, 200) if u < f.domain_bound]
    bic = biconjugate_check(f, finite_grid)
    dual = finiteness_duality(f) if f.is_finite else None
    rec = {"type": "conjugate", "pair": pair.to_dict(),
           "values": [{"u": u, "phi": p, "phi_star": q} for u, p, q in rows],
           "biconjugate_max_error": bic.max_error, "biconjugate_worst_u": bic.worst_u,
           "finiteness_duality": None if dual is None else asdict(dual)}
    em.record(rec)
    em.text(f"phi = {f.label()}, phi_* = {pair.conjugate.label()} ({pair.mode})")
    em.text(f"  {'u':>10} {'phi(u)':>16} {'phi_*(u)':>16}")
    for u, p, q in rows:
        em.text(f"  {u:>10g} {str(p) if isinstance(p, str) else f'{p:.10g}':>16} "
                f"{str(q) if isinstance(q, str) else f'{q:.10g}':>16}")
    em.text(f"  biconjugate max relative error on [1e-2, 1e2]: {bic.max_error:.3g}")
    if dual is not None:
        em.text(f"  N at infinity: {dual.n_at_infinity}; phi_* finite: {dual.conjugate_finite}")
    ok = bic.max_error <= cfg.tol("biconjugate") and (dual is None or dual.consistent)
    return 0 if ok else 1


def cmd_witness(cfg, em):
    f = from_descriptor(cfg.function)
    m = MeasureDescriptor.from_dict(cfg.measure)
    w = construct_witness(f, m)
    if w is None:
        em.record({"type": "witness", "applicable": False})
        em.text(f"phi = {f.label()}, measure = {m}: witness hypotheses fail (not applicable)")
        return 0
    cert = certify_witness(f, w, cfg.budget, cfg.seed)
    for r in cert.per_challenger:
        em.record({"type": "challenge", **{k: _jf(v) for k, v in asdict(r).items()}})
    summary = {"type": "witness", "applicable": True, **cert.to_dict(records=False),
               "rule": w.rule}
    em.record(summary)
    worst = max(cert.per_challenger, key=lambda r: r.certified_bound)
    em.text(f"phi = {f.label()}, measure = {m}")
    em.text(f"  x = a chi_A with a = {w.a:.10g}, mu(A) = {w.mass:.10g} ({w.rule})")
    em.text(f"  challengers {len(cert.per_challenger)}, violations {cert.violations}, "
            f"max certified bound {cert.max_bound:.10g}")
    em.text(f"  largest bound: d = {worst.d:.6g}, B-mass = {worst.b_mass:.6g}, "
            f"gamma = {worst.gamma:.6g}, sigma = {worst.sigma:.6g}, delta = {worst.delta:.6g}, "
            f"epsilon = {worst.epsilon:.6g}")
    return 0 if cert.violations == 0 else 1


def cmd_slice(cfg, em):
    if cfg.slice is None and cfg.point is None:
        raise OrliczError("config.slice or config.point: one is required for the slice command")
    f = from_descriptor(cfg.function)
    if cfg.slice is not None:
        s = _slice(cfg.slice, "config.slice")
        s.validate(f)
        est = slice_diameter_lower_bound(f, s, cfg.budget, cfg.seed)
        em.record({"type": "slice", "slice": s.to_dict(), **est.to_dict()})
        em.text(f"phi = {f.label()}, {s.side} of dimension {s.dimension}, epsilon = {s.epsilon:g}")
        em.text("  empty slice" if est.empty else
                f"  diameter lower bound {est.lower_bound:.10g} from {est.samples_used} samples")
    if cfg.point is not None:
        x = np.asarray(cfg.point, dtype=float)
        gap = uniformly_non_l12_estimate(f, x, len(x), cfg.budget, cfg.seed)
        em.record({"type": "gap", "point": list(map(float, x)), **gap.to_dict()})
        em.text(f"  non-l1^2 gap estimate at x: {gap.gap:.10g} ({gap.evaluations} evaluations)")
    return 0


def cmd_verify(cfg, em, err=sys.stderr):
    failed = 0
    for suite in cfg.suites():
        res = run_suite(cfg, suite, on_case=lambda c: em.record(c.to_dict()))
        em.record(res.summary())
        em.text(f"{suite:<10} run {res.run:>6}  passed {res.passed:>6}  failed {res.failed:>4}")
        for c in res.failures:
            err.write(json.dumps(c.to_dict(), sort_keys=True, default=_default) + "\n")
        failed += res.failed
    return 0 if failed == 0 else 1


def cmd_replay(path, em):
    status = 0
    with open(path) as fh:
        for line in fh:
            rec = json.loads(line)
            if rec.get("type") != "case":
                continue
            res = replay_case(rec)
            em.record(res.to_dict())
            em.text(f"{res.invariant} case {res.case}: {'pass' if res.passed else 'FAIL'} "
                    f"slack {res.slack!r} (recorded {rec['slack']!r})")
            status |= 0 if res.passed else 1
    return status


def cmd_catalog(cfg, em):
    rows = run_catalog()
    for r in rows:
        em.record({"type": "catalog_row", **r.to_dict()})
    em.text(render_catalog(rows))
    return 0


HANDLERS = {"classify": cmd_classify, "norm": cmd_norm, "conjugate": cmd_conjugate,
            "witness": cmd_witness, "slice": cmd_slice, "verify": cmd_verify,
            "catalog": cmd_catalog}


def build_parser():
    p = argparse.ArgumentParser(prog="orlicz", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--budget", type=int)
        sp.add_argument("--format", choices=("table", "records"))
        if name == "verify":
            sp.add_argument("--suite", choices=("norms", "conjugacy", "witness", "slices", "all"))
            sp.add_argument("--replay", metavar="RECORDS", help="re-run the case records in a file")
    return p


def load_config(args):
    data = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise OrliczError("config: expected a JSON object")
    data = dict(data)
    data["command"] = args.command
    for key in ("seed", "budget", "format"):
        if getattr(args, key, None) is not None:
            data[key] = getattr(args, key)
    if getattr(args, "suite", None):
        data["suite"] = args.suite
    return RunConfig.from_dict(data).resolved()


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
    except (OrliczError, json.JSONDecodeError, OSError) as e:
        err.write(f"orlicz: {e}\n")
        return 2
    em = Emitter(cfg.format, out)
    em.record({"type": "config", "config": cfg.to_dict()})
    try:
        if args.command == "verify" and args.replay:
            return cmd_replay(args.replay, em)
        if args.command == "verify":
            return cmd_verify(cfg, em, err)
        return HANDLERS[args.command](cfg, em)
    except OrliczError as e:
        err.write(f"orlicz: {e}\n")
        return 2


def entry():
    sys.exit(main())


__all__ = ["build_parser", "load_config", "main"]
