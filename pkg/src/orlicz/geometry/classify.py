"""Rule engine for RNP, Daugavet and the diameter-two properties of ``L_phi`` / ``l_phi``.

Verdicts come only from growth conditions and critical constants, never from
sampled diameters. Each verdict names the rule that fired and the growth
checks it consumed, labelled exact (closed form) or empirical (grid test).
"""
from dataclasses import dataclass

from ..conjugation import conjugate
from ..errors import ConstructionError, DegenerateInputError, PreconditionError
from ..functions import INF, appropriate_condition, check_delta2, from_descriptor
from ..measures import MeasureDescriptor
from .witness import construct_witness

HOLDS = "holds"
FAILS = "fails"
NOT_COVERED = "not-covered"
VERDICTS = (HOLDS, FAILS, NOT_COVERED)
NORM_KINDS = ("luxemburg", "orlicz")
PROPERTIES = ("rnp", "daugavet", "ld2p", "d2p", "sd2p", "orlicz_norm_ld2p")
LEVEL_ONE_TOL = 1e-9


@dataclass(frozen=True)
class PropertyVerdict:
    verdict: str
    rule: str
    growth: tuple = ()  # ((check name, label), ...)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ConstructionError(f"verdict must be one of {VERDICTS}")

    @property
    def exact(self):
        return all(not label.startswith("empirical") for _, label in self.growth)

    def to_dict(self):
        return {"verdict": self.verdict, "rule": self.rule,
                "growth": {name: label for name, label in self.growth}, "exact": self.exact}

    @classmethod
    def from_dict(cls, data, path="verdict"):
        extra = set(data) - {"verdict", "rule", "growth", "exact"}
        if extra:
            raise ConstructionError(f"{path}: unknown field(s) {sorted(extra)}")
        return cls(data["verdict"], data["rule"], tuple(data.get("growth", {}).items()))

    def symbol(self):
        return {HOLDS: "yes", FAILS: "no", NOT_COVERED: "?"}[self.verdict]


@dataclass(frozen=True)
class ClassificationReport:
    function: dict
    measure: dict
    norm_kind: str
    rnp: PropertyVerdict
    daugavet: PropertyVerdict
    ld2p: PropertyVerdict
    d2p: PropertyVerdict
    sd2p: PropertyVerdict
    orlicz_norm_ld2p: PropertyVerdict
    octahedral_note: str
    witness: dict = None

    def to_dict(self):
        out = {"function": self.function, "measure": self.measure, "norm_kind": self.norm_kind}
        for name in PROPERTIES:
            out[name] = getattr(self, name).to_dict()
        out["octahedral_note"] = self.octahedral_note
        out["witness"] = self.witness
        return out

    @classmethod
    def from_dict(cls, data):
        known = {"function", "measure", "norm_kind", "octahedral_note", "witness", *PROPERTIES}
        extra = set(data) - known
        if extra:
            raise ConstructionError(f"report: unknown field(s) {sorted(extra)}")
        props = {name: PropertyVerdict.from_dict(data[name], f"report.{name}") for name in PROPERTIES}
        return cls(data["function"], data["measure"], data["norm_kind"],
                   octahedral_note=data["octahedral_note"], witness=data.get("witness"), **props)

    def lines(self):
        yield f"phi = {from_descriptor(self.function).label()}, " \
              f"measure = {MeasureDescriptor.from_dict(self.measure)}, norm = {self.norm_kind}"
        for name in PROPERTIES:
            v = getattr(self, name)
            tag = "" if v.exact else " [empirical]"
            yield f"  {name:<17} {v.verdict:<12} {v.rule}{tag}"
        yield f"  octahedral: {self.octahedral_note}"


# -- growth facts -------------------------------------------------------------------
class _Facts:
    """Lazily computed growth facts with their exact/empirical labels."""

    def __init__(self, f, m):
        self.f, self.m = f, m
        self.k = f.constants()
        self.linear = self.k.d == INF

    def n_inf(self):
        closed = self.f._closed_n_class()
        value = bool((closed or self.f.n_function_class())[1])
        label = ("holds" if value else "fails") if closed is not None else \
            ("empirical-holds" if value else "empirical-fails")
        return value, ("n_function_at_infinity", label)

    def delta2(self):
        cond = appropriate_condition(self.m)
        try:
            g = check_delta2(self.f, cond)
        except DegenerateInputError as e:
            return None, (cond.value, f"undefined: {e}")
        return g.holds, (cond.value, g.label())


def _conj_hypotheses(f, m):
    """Witness hypotheses for ``phi_*``: the Orlicz-norm LD2P failure theorem."""
    conj = conjugate(f).conjugate
    kc = conj.constants()
    if m.is_counting:
        phi_c = conj._scalar(kc.c) if kc.c < INF else INF
        ok = kc.d < kc.c and abs(phi_c - 1.0) <= LEVEL_ONE_TOL
        detail = f"d_* = {kc.d:g}, c_* = {kc.c:g}, phi_*(c_*) = {phi_c:g}"
    else:
        phi_b = INF if kc.b == INF else conj._scalar(kc.b)
        ok = kc.d < kc.b and phi_b * m.total > 1.0
        detail = f"d_* = {kc.d:g}, b_* = {kc.b:g}, phi_*(b_*) mu(Omega) = {phi_b * m.total:g}"
    return ok, detail, conj.closed_form


def _rnp(facts):
    n_ok, n_lab = facts.n_inf()
    d_ok, d_lab = facts.delta2()
    if facts.m.is_counting:
        if d_ok is None:
            return PropertyVerdict(NOT_COVERED, "Delta2^0 undefined for this phi", (d_lab,))
        return PropertyVerdict(HOLDS if d_ok else FAILS,
                               f"l_phi has RNP iff Delta2^0 ({d_lab[1]})", (d_lab,))
    if not n_ok:
        return PropertyVerdict(FAILS, "L_phi has RNP iff N-function at infinity and appropriate "
                                      "Delta2; phi is not N at infinity", (n_lab,))
    return PropertyVerdict(HOLDS if d_ok else FAILS,
                           f"L_phi has RNP iff N-function at infinity and appropriate Delta2 "
                           f"({d_lab[0]} {d_lab[1]})", (n_lab, d_lab))


def _daugavet_luxemburg(facts):
    if facts.m.is_counting:
        return PropertyVerdict(FAILS, "rearrangement invariant sequence spaces never have the "
                                      "Daugavet property (stated without proof)")
    if facts.linear:
        return PropertyVerdict(HOLDS, "phi = k u, so L_phi = L_1 with norm k ||.||_1")
    return PropertyVerdict(FAILS, f"Daugavet forces phi linear (d_phi = b_phi); here "
                                  f"d_phi = {facts.k.d:g} < b_phi")


def _d2p_luxemburg(facts):
    """LD2P, D2P and SD2P verdicts; every rule here gives all three the same answer."""
    if facts.m.is_counting:
        d_ok, d_lab = facts.delta2()
        if d_ok is None:
            v = PropertyVerdict(NOT_COVERED, "Delta2^0 undefined for this phi", (d_lab,))
        else:
            v = PropertyVerdict(FAILS if d_ok else HOLDS,
                                f"for l_phi LD2P, D2P, SD2P are all equivalent to failure of "
                                f"Delta2^0 ({d_lab[1]})", (d_lab,))
        return v, v, v
    n_ok, n_lab = facts.n_inf()
    d_ok, d_lab = facts.delta2()
    if n_ok:
        v = PropertyVerdict(FAILS if d_ok else HOLDS,
                            f"N at infinity: LD2P, D2P, SD2P are all equivalent to failure of "
                            f"{d_lab[0]} ({d_lab[1]})", (n_lab, d_lab))
        return v, v, v
    if not d_ok:
        v = PropertyVerdict(HOLDS, f"{d_lab[0]} fails, so SD2P holds and SD2P implies D2P "
                                   f"implies LD2P", (n_lab, d_lab))
        return v, v, v
    if facts.linear:
        v = PropertyVerdict(HOLDS, "Daugavet property (phi linear) implies SD2P, hence D2P "
                                   "and LD2P", (n_lab, d_lab))
        return v, v, v
    v = PropertyVerdict(NOT_COVERED, f"not N at infinity and {d_lab[0]} holds: the equivalence "
                                     f"needs N at infinity for the converse", (n_lab, d_lab))
    return v, v, v


def _orlicz_ld2p(facts, rnp):
    if facts.linear and not facts.m.is_counting:
        return PropertyVerdict(HOLDS, "phi linear: the Orlicz norm is k ||.||_1, which has the "
                                      "Daugavet property")
    n_ok, n_lab = facts.n_inf()
    if n_ok:
        return PropertyVerdict(FAILS, "finite N-function at infinity: some slice of the "
                                      "Orlicz-norm ball has diameter below two", (n_lab,))
    ok, detail, closed = _conj_hypotheses(facts.f, facts.m)
    lab = ("conjugate_hypotheses", "exact" if closed else "empirical")
    if rnp.verdict == HOLDS:
        return PropertyVerdict(FAILS, "RNP holds, so the ball has slices of small diameter "
                                      "in every equivalent norm", rnp.growth)
    if ok:
        return PropertyVerdict(FAILS, f"phi_* admits a uniformly non-l1^2 point ({detail}), "
                                      f"so the Orlicz-norm space lacks LD2P", (n_lab, lab))
    return PropertyVerdict(NOT_COVERED, f"no rule fires: phi not N at infinity and the phi_* "
                                        f"witness hypotheses fail ({detail})", (n_lab, lab))


def _octahedral_note(f, m, norm_kind):
    base = "every unit point is uniformly l1^2 iff the space is locally octahedral"
    if norm_kind != "luxemburg":
        return base + "; the witness construction applies to the Luxemburg norm only"
    w = construct_witness(f, m)
    if w is None:
        return base + "; the witness hypotheses fail here, so no uniformly non-l1^2 point is constructed"
    return (base + f"; x = {w.a:.6g} chi_A with mu(A) = {w.mass:.6g} is a uniformly non-l1^2 "
                   f"point, so this space is not locally octahedral"), w


def classify(f, m, norm_kind="luxemburg"):
    """Classify ``L_phi`` over ``m`` (``l_phi`` for the counting measure).

    ``norm_kind`` selects the Luxemburg or the Orlicz (Amemiya) norm. RNP is
    isomorphic, so both norms share it. Raises :class:`PreconditionError`
    when ``phi`` takes the value ``inf``.
    """
    if norm_kind not in NORM_KINDS:
        raise ConstructionError(f"norm_kind must be one of {NORM_KINDS}")
    if not f.is_finite:
        raise PreconditionError("classification needs a finite Orlicz function (b_phi = inf)")
    facts = _Facts(f, m)
    rnp = _rnp(facts)
    orlicz_ld2p = _orlicz_ld2p(facts, rnp)
    if norm_kind == "luxemburg":
        daugavet = _daugavet_luxemburg(facts)
        ld2p, d2p, sd2p = _d2p_luxemburg(facts)
    else:
        ld2p = orlicz_ld2p
        if orlicz_ld2p.verdict == FAILS:
            inherit = PropertyVerdict(FAILS, "SD2P implies D2P implies LD2P, and LD2P fails "
                                             "for the Orlicz norm", orlicz_ld2p.growth)
            d2p = sd2p = inherit
            daugavet = PropertyVerdict(FAILS, "Daugavet implies LD2P, which fails for the "
                                              "Orlicz norm", orlicz_ld2p.growth)
        elif orlicz_ld2p.verdict == HOLDS:
            d2p = sd2p = daugavet = PropertyVerdict(HOLDS, orlicz_ld2p.rule)
        else:
            d2p = sd2p = PropertyVerdict(NOT_COVERED, "no rule for the Orlicz norm fires")
            daugavet = (_daugavet_luxemburg(facts) if m.is_counting else
                        PropertyVerdict(NOT_COVERED, "the Daugavet characterization is for the "
                                                    "Luxemburg norm"))
    note = _octahedral_note(f, m, norm_kind)
    witness = None
    if isinstance(note, tuple):
        note, w = note
        witness = {"a": w.a, "mass": w.mass}
    return ClassificationReport(f.to_dict(), m.to_dict(), norm_kind, rnp, daugavet,
                                ld2p, d2p, sd2p, orlicz_ld2p, note, witness)


__all__ = [
    "FAILS",
    "HOLDS",
    "NOT_COVERED",
    "ClassificationReport",
    "PropertyVerdict",
    "classify",
]
