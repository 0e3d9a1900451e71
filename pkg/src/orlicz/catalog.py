"""Built-in catalog of Orlicz functions and measures, and the verdict matrix over it."""
from dataclasses import dataclass

from .errors import PreconditionError
from .functions import Capped, ExpMinusOne, Linear, PiecewiseLinear, Power, ULogU
from .geometry.classify import NOT_COVERED, classify
from .measures import Counting, NonAtomic

CATALOG_FUNCTIONS = {
    "linear": Linear(1.0),
    "power1.5": Power(1.5),
    "power2": Power(2.0),
    "power4": Power(4.0),
    "exp_minus_one": ExpMinusOne(),
    "u_log_u": ULogU(),
    "shifted_linear": PiecewiseLinear(((0.0, 0.0), (1.0, 0.0), (2.0, 1.0))),  # max(0, u - 1)
    "capped_power2": Capped(Power(2.0), 3.0),
    "capped_linear": Capped(Linear(1.0), 2.0),
}

CATALOG_MEASURES = {
    "nonatomic1": NonAtomic(1.0),
    "nonatomic_inf": NonAtomic(),
    "counting": Counting(),
}

NORM_KINDS = ("luxemburg", "orlicz")
COLUMNS = ("rnp", "daugavet", "ld2p", "d2p", "sd2p", "orlicz_norm_ld2p")
SKIPPED = "skipped (phi not finite)"


@dataclass(frozen=True)
class CatalogRow:
    function: str
    measure: str
    norm_kind: str
    report: object = None  # ClassificationReport, or None when skipped

    @property
    def skipped(self):
        return self.report is None

    def cells(self):
        if self.skipped:
            return {c: SKIPPED for c in COLUMNS}
        return {c: getattr(self.report, c).verdict for c in COLUMNS}

    def to_dict(self):
        out = {"function": self.function, "measure": self.measure, "norm_kind": self.norm_kind,
               "skipped": self.skipped}
        if self.report is not None:
            out["report"] = self.report.to_dict()
        return out


def run_catalog(functions=None, measures=None, norm_kinds=NORM_KINDS):
    """Classify every (function, measure, norm) combination; non-finite phi rows are skipped."""
    functions = CATALOG_FUNCTIONS if functions is None else functions
    measures = CATALOG_MEASURES if measures is None else measures
    rows = []
    for fname, f in functions.items():
        for mname, m in measures.items():
            for nk in norm_kinds:
                try:
                    rep = classify(f, m, nk)
                except PreconditionError:
                    rep = None
                rows.append(CatalogRow(fname, mname, nk, rep))
    return rows


def render_catalog(rows):
    mark = {"holds": "yes", "fails": "no", NOT_COVERED: "?"}
    head = f"{'function':<15}{'measure':<15}{'norm':<11}" + "".join(f"{c:<18}" for c in COLUMNS)
    out = [head, "-" * len(head)]
    for r in rows:
        cells = r.cells()
        if r.skipped:
            body = SKIPPED
        else:
            body = "".join(f"{mark[cells[c]]:<18}" for c in COLUMNS)
        out.append(f"{r.function:<15}{r.measure:<15}{r.norm_kind:<11}{body}".rstrip())
    out.append("")
    out.append("yes = holds, no = fails, ? = not covered by any rule")
    return "\n".join(out)


__all__ = ["CATALOG_FUNCTIONS", "CATALOG_MEASURES", "CatalogRow", "render_catalog", "run_catalog"]
