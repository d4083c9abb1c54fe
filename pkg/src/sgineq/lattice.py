"""Componentwise vector lattice algebra over a finite index set.

Elements are real vectors ordered entry by entry and multiplied
pointwise; the all-ones vector is the multiplicative unit and the
supremum norm is the lattice norm, so ``|f| <= |g|`` entrywise implies
``norm(f) <= norm(g)`` and ``norm(f*g) <= norm(f)*norm(g)``.
Order comparisons return one of four verdicts, with a tolerance band
``eps = atol + rtol * max(norm(f), norm(g))`` around equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import SgineqError

__all__ = [
    "DimensionMismatchError",
    "Ordering",
    "OrderTolerance",
    "DEFAULT_TOLERANCE",
    "LatticeAlgebra",
    "LatticeElement",
    "join",
    "meet",
    "abs_val",
    "pos_part",
    "neg_part",
    "lattice_norm",
    "multiply",
    "partial_leq",
    "element_to_json",
    "element_from_json",
    "algebra_to_json",
    "algebra_from_json",
]


class DimensionMismatchError(SgineqError):
    """Two elements do not live over the same coordinate set."""


class Ordering(Enum):
    """Verdict of a componentwise order comparison."""

    LEQ = "LEQ"
    GEQ = "GEQ"
    EQUAL = "EQUAL"
    INCOMPARABLE = "INCOMPARABLE"


@dataclass(frozen=True)
class OrderTolerance:
    """Tolerance band for order verdicts."""

    atol: float = 1e-9
    rtol: float = 1e-12

    def __post_init__(self):
        if self.atol < 0 or self.rtol < 0:
            raise ValueError("tolerances must be nonnegative")

    def margin(self, f: "LatticeElement", g: "LatticeElement") -> float:
        return self.atol + self.rtol * max(lattice_norm(f), lattice_norm(g))


DEFAULT_TOLERANCE = OrderTolerance()


def _as_values(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError("lattice elements are one dimensional")
    if arr.size == 0:
        raise ValueError("lattice elements need at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise ValueError("lattice elements must have finite entries")
    arr.setflags(write=False)
    return arr


class LatticeAlgebra:
    """Finite index set K with optional coordinate labels."""

    def __init__(self, dim: int, labels=None):
        if dim < 1:
            raise ValueError("dim must be at least 1")
        if labels is not None:
            labels = list(labels)
            if len(labels) != dim:
                raise ValueError("labels length must match dim")
        self.dim = int(dim)
        self.labels = labels

    def element(self, values) -> "LatticeElement":
        el = LatticeElement(values, algebra=self)
        return el

    def unit(self) -> "LatticeElement":
        return LatticeElement(np.ones(self.dim), algebra=self)

    def zero(self) -> "LatticeElement":
        return LatticeElement(np.zeros(self.dim), algebra=self)

    def __repr__(self):
        return f"LatticeAlgebra(dim={self.dim})"


class LatticeElement:
    """Immutable real vector; arithmetic is componentwise."""

    __slots__ = ("values", "algebra")

    def __init__(self, values, algebra: LatticeAlgebra | None = None):
        arr = _as_values(values)
        if algebra is not None and algebra.dim != arr.size:
            raise DimensionMismatchError(
                f"got {arr.size} values for an algebra of dim {algebra.dim}"
            )
        self.values = arr
        self.algebra = algebra

    @property
    def dim(self) -> int:
        return self.values.size

    def _wrap(self, arr) -> "LatticeElement":
        return LatticeElement(arr, algebra=self.algebra)

    def __add__(self, other):
        _check_same(self, other)
        return self._wrap(self.values + other.values)

    def __sub__(self, other):
        _check_same(self, other)
        return self._wrap(self.values - other.values)

    def __neg__(self):
        return self._wrap(-self.values)

    def __mul__(self, other):
        if isinstance(other, LatticeElement):
            return multiply(self, other)
        return self._wrap(self.values * float(other))

    __rmul__ = __mul__

    def __repr__(self):
        return f"LatticeElement({self.values.tolist()})"


def _check_same(f: LatticeElement, g: LatticeElement) -> None:
    if f.dim != g.dim:
        raise DimensionMismatchError(f"dims differ: {f.dim} vs {g.dim}")


def join(f: LatticeElement, g: LatticeElement) -> LatticeElement:
    """Componentwise supremum."""
    _check_same(f, g)
    return f._wrap(np.maximum(f.values, g.values))


def meet(f: LatticeElement, g: LatticeElement) -> LatticeElement:
    """Componentwise infimum."""
    _check_same(f, g)
    return f._wrap(np.minimum(f.values, g.values))


def abs_val(f: LatticeElement) -> LatticeElement:
    """Lattice absolute value sup(f, -f)."""
    return f._wrap(np.abs(f.values))


def pos_part(f: LatticeElement) -> LatticeElement:
    """Positive part sup(f, 0)."""
    return f._wrap(np.maximum(f.values, 0.0))


def neg_part(f: LatticeElement) -> LatticeElement:
    """Negative part sup(-f, 0); f = pos_part(f) - neg_part(f)."""
    return f._wrap(np.maximum(-f.values, 0.0))


def lattice_norm(f: LatticeElement) -> float:
    """Supremum norm, the lattice norm of the algebra."""
    return float(np.max(np.abs(f.values)))


def multiply(f: LatticeElement, g: LatticeElement) -> LatticeElement:
    """Pointwise product; the algebra's unit is the all-ones vector."""
    _check_same(f, g)
    return f._wrap(f.values * g.values)


def partial_leq(
    f: LatticeElement,
    g: LatticeElement,
    tol: OrderTolerance = DEFAULT_TOLERANCE,
) -> Ordering:
    """Order verdict of f against g in the componentwise order.

    LEQ means f <= g up to the tolerance band, GEQ the reverse, EQUAL
    both at once, INCOMPARABLE a strict violation in both directions.
    """
    _check_same(f, g)
    eps = tol.margin(f, g)
    diff = g.values - f.values
    leq = bool(np.min(diff) >= -eps)
    geq = bool(np.max(diff) <= eps)
    if leq and geq:
        return Ordering.EQUAL
    if leq:
        return Ordering.LEQ
    if geq:
        return Ordering.GEQ
    return Ordering.INCOMPARABLE


def element_to_json(f: LatticeElement) -> list:
    return [float(v) for v in f.values]

def element_from_json(data, algebra: LatticeAlgebra | None = None) -> LatticeElement:
    return LatticeElement(data, algebra=algebra)

def algebra_to_json(alg: LatticeAlgebra) -> dict:
    return {"dim": alg.dim, "labels": alg.labels}

def algebra_from_json(data: dict) -> LatticeAlgebra:
    return LatticeAlgebra(int(data["dim"]), data.get("labels"))
