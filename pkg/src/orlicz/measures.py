"""Measure descriptors: a non-atomic interval or the counting measure on N."""
import math
from dataclasses import dataclass

from .errors import ConstructionError

NONATOMIC = "nonatomic"
COUNTING = "counting"


@dataclass(frozen=True)
class MeasureDescriptor:
    """Desk-scale stand-in for a sigma-finite measure space.

    ``NonAtomic(total)`` is modelled as Lebesgue measure on ``[0, total)``;
    ``Counting`` is the counting measure on ``{0, 1, 2, ...}`` (atoms of mass 1).
    """

    kind: str
    total: float = math.inf

    def __post_init__(self):
        if self.kind not in (NONATOMIC, COUNTING):
            raise ConstructionError(f"unknown measure kind {self.kind!r}")
        if self.kind == COUNTING:
            object.__setattr__(self, "total", math.inf)
        elif not self.total > 0:
            raise ConstructionError("total mass must be positive")

    @property
    def is_counting(self):
        return self.kind == COUNTING

    @property
    def is_finite(self):
        return self.total < math.inf

    def to_dict(self):
        if self.is_counting:
            return {"kind": COUNTING}
        return {"kind": NONATOMIC, "total": "inf" if self.total == math.inf else self.total}

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        kind = data.pop("kind", None)
        if kind == COUNTING:
            if data:
                raise ConstructionError(f"measure: unknown fields {sorted(data)}")
            return cls(COUNTING)
        if kind == NONATOMIC:
            total = data.pop("total", "inf")
            if data:
                raise ConstructionError(f"measure: unknown fields {sorted(data)}")
            return cls(NONATOMIC, math.inf if total in ("inf", None) else float(total))
        raise ConstructionError(f"measure.kind: expected 'nonatomic' or 'counting', got {kind!r}")

    def __str__(self):
        if self.is_counting:
            return "Counting"
        return f"NonAtomic({'inf' if self.total == math.inf else f'{self.total:g}'})"


def NonAtomic(total=math.inf):
    return MeasureDescriptor(NONATOMIC, float(total))


def Counting():
    return MeasureDescriptor(COUNTING)
