"""Exponential convexity certificates for the composition residual.

For the power family the residual

    Lambda(p) = Z(t) F_p(f) - F_p(Z(t) f)

is treated as a function of the family parameter p at a fixed semigroup
time t (the parameter is decoupled from the time; evaluating Z at the
midpoint itself is available behind ``couple_time`` and is reported,
never asserted). A Gram matrix over an exponent set evaluates Lambda at
the pairwise midpoints (p_i + p_j)/2, and positivity of the residual
map in the exponential-convexity sense reduces to every per-coordinate
real symmetric matrix being positive semidefinite.

The generic quadratic-form identity behind this is

    sum_ij xi_i xi_j H(x_i + x_j)      (SUM form)
    sum_ij xi_i xi_j H((x_i + x_j)/2)  (MIDPOINT form)

which are the same statement under the substitution y = x/2, resp.
y = 2x; both probes and the substitution identity are exposed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import HypothesisViolationError
from .lattice import (
    DEFAULT_TOLERANCE,
    LatticeElement,
    Ordering,
    OrderTolerance,
    partial_leq,
)
from .families import OperatorFamily, exp_member, power_member
from .jessen import _require_normalized
from .semigroup import DEFAULT_TIME_CAP, Generator, SemigroupOperator, evolve

__all__ = [
    "IllConditionedMidpointError",
    "ExponentSet",
    "lambda_residual",
    "LambdaGram",
    "build_gram",
    "PsdReport",
    "check_order_psd",
    "QuadFormMode",
    "exp_convexity_probe",
    "quad_form_vector",
    "MidpointEquivalenceReport",
    "midpoint_equivalence_check",
    "MIDPOINT_GUARD",
]

# Width of the rejection band around the removable singularities of the
# family normalizations. The normalization factor there is at least of
# order 1/MIDPOINT_GUARD, so 1e-6 caps it at about 1e6; exact hits on a
# singular point dispatch to the dedicated branch instead.
MIDPOINT_GUARD = 1e-6


class IllConditionedMidpointError(HypothesisViolationError):
    """A pairwise midpoint falls inside a guard band around a removable
    singularity of the family normalization."""


def _special_points(kind: str) -> tuple[float, ...]:
    if kind == "F":
        return (0.0, 1.0)
    if kind == "H":
        return (0.0,)
    raise ValueError(f"family kind must be 'F' or 'H', got {kind!r}")


def _member(kind: str, p: float) -> OperatorFamily:
    return power_member(p) if kind == "F" else exp_member(p)


@dataclass(frozen=True)
class ExponentSet:
    """Finite parameter set whose pairwise midpoints are all evaluable.

    Midpoints that hit a special point (0 or 1 for the power family, 0
    for the exponential family) exactly dispatch to the dedicated
    branch; midpoints inside the guard band around one without hitting
    it are rejected as ill conditioned, since the generic branch carries
    a 1/(p(p-1)) resp. 1/p^2 factor there.
    """

    p: tuple
    family_kind: str = "F"

    def __init__(self, p, family_kind: str = "F"):
        specials = _special_points(family_kind)
        points = tuple(float(v) for v in p)
        if len(points) == 0:
            raise ValueError("exponent set must be nonempty")
        for i, pi in enumerate(points):
            for pj in points[: i + 1]:
                mid = 0.5 * (pi + pj)
                for sp in specials:
                    if mid != sp and abs(mid - sp) < MIDPOINT_GUARD:
                        raise IllConditionedMidpointError(
                            f"midpoint ({pi!r}+{pj!r})/2 = {mid!r} lies within "
                            f"{MIDPOINT_GUARD:g} of {sp:g}"
                        )
        object.__setattr__(self, "p", points)
        object.__setattr__(self, "family_kind", family_kind)

    @property
    def size(self) -> int:
        return len(self.p)

    def midpoints(self) -> np.ndarray:
        arr = np.array(self.p)
        return 0.5 * (arr[:, None] + arr[None, :])


def _residual(op: SemigroupOperator, fam: OperatorFamily, f: LatticeElement) -> LatticeElement:
    return op.apply(fam.apply(f)) - fam.apply(op.apply(f))


def lambda_residual(
    gen: Generator,
    f: LatticeElement,
    p: float,
    t: float,
    family_kind: str = "F",
    allow_unnormalized: bool = False,
    time_cap: float = DEFAULT_TIME_CAP,
) -> LatticeElement:
    """Composition residual of the family member with parameter p."""
    _require_normalized(gen, allow_unnormalized)
    _special_points(family_kind)
    op = evolve(gen, t, time_cap=time_cap)
    return _residual(op, _member(family_kind, p), f)


@dataclass(frozen=True)
class LambdaGram:
    """Residual values over all pairwise midpoints of an exponent set.

    ``entries[i, j, k]`` is coordinate k of Lambda at (p_i + p_j)/2;
    ``coordinate_matrices[k]`` is the symmetric matrix of coordinate k,
    whose smallest eigenvalue sits in ``min_eigenvalues[k]``.
    """

    pset: ExponentSet
    t: float
    entries: np.ndarray
    coordinate_matrices: np.ndarray
    min_eigenvalues: np.ndarray
    coupled: bool = False

    @property
    def dim(self) -> int:
        return self.entries.shape[2]

    def entry(self, i: int, j: int) -> LatticeElement:
        return LatticeElement(self.entries[i, j])

    def max_abs_entry(self) -> float:
        return float(np.max(np.abs(self.entries)))

    def to_json(self) -> dict:
        return {
            "p": list(self.pset.p),
            "family_kind": self.pset.family_kind,
            "t": self.t,
            "coupled": self.coupled,
            "coordinates": [
                {
                    "index": k,
                    "matrix": [[float(v) for v in row] for row in self.coordinate_matrices[k]],
                    "min_eigenvalue": float(self.min_eigenvalues[k]),
                }
                for k in range(self.dim)
            ],
        }

    def to_csv_rows(self):
        """(p_i, p_j, coordinate, value) tuples in row-major order."""
        n = self.pset.size
        for i in range(n):
            for j in range(n):
                for k in range(self.dim):
                    yield (self.pset.p[i], self.pset.p[j], k, float(self.entries[i, j, k]))


def build_gram(
    gen: Generator,
    f: LatticeElement,
    t: float,
    pset: ExponentSet,
    couple_time: bool = False,
    allow_unnormalized: bool = False,
    time_cap: float = DEFAULT_TIME_CAP,
) -> LambdaGram:
    """Evaluate the residual on every pairwise midpoint of the set.

    Midpoint values are computed once and shared between (i, j) and
    (j, i), so the Gram tensor is symmetric by construction. With
    ``couple_time`` the evolution is taken at the midpoint itself
    (which must then be nonnegative); this variant has no asserted sign.
    """
    _require_normalized(gen, allow_unnormalized)
    kind = pset.family_kind
    n = pset.size
    shared_op = None if couple_time else evolve(gen, t, time_cap=time_cap)
    op_cache: dict[float, SemigroupOperator] = {}
    value_cache: dict[float, np.ndarray] = {}

    def residual_at(mid: float) -> np.ndarray:
        if mid in value_cache:
            return value_cache[mid]
        if couple_time:
            if mid < 0:
                raise ValueError(
                    f"couple_time needs nonnegative midpoints, got {mid:g}"
                )
            if mid not in op_cache:
                op_cache[mid] = evolve(gen, mid, time_cap=time_cap)
            op = op_cache[mid]
        else:
            op = shared_op
        fam = _member(kind, mid)
        try:
            value = _residual(op, fam, f).values
        except Exception as err:
            raise type(err)(f"at midpoint {mid:g}: {err}") from err
        value_cache[mid] = value
        return value

    entries = np.empty((n, n, f.dim))
    for i, pi in enumerate(pset.p):
        for j in range(i, n):
            mid = 0.5 * (pi + pset.p[j])
            entries[i, j] = entries[j, i] = residual_at(mid)
    entries.setflags(write=False)

    coord = np.ascontiguousarray(entries.transpose(2, 0, 1))
    min_eigs = np.linalg.eigvalsh(coord)[:, 0]
    return LambdaGram(
        pset=pset,
        t=t,
        entries=entries,
        coordinate_matrices=coord,
        min_eigenvalues=min_eigs,
        coupled=couple_time,
    )


@dataclass(frozen=True)
class PsdReport:
    """Spectral certificate plus sampled quadratic forms for one Gram."""

    spectral_pass: bool
    sampled_pass: bool
    min_eigenvalue: float
    min_quadform: float
    scaled_tol: float
    tol: float
    n_xi: int
    seed: int

    @property
    def passed(self) -> bool:
        return self.spectral_pass and self.sampled_pass

    def to_json(self) -> dict:
        return {
            "spectral_pass": self.spectral_pass,
            "sampled_pass": self.sampled_pass,
            "min_eigenvalue": self.min_eigenvalue,
            "min_quadform": self.min_quadform,
            "scaled_tol": self.scaled_tol,
            "tol": self.tol,
            "n_xi": self.n_xi,
            "seed": self.seed,
        }


def check_order_psd(gram: LambdaGram, n_xi: int, seed: int, tol: float = 1e-8) -> PsdReport:
    """Order positive semidefiniteness of the Gram in both certificates.

    Spectral: every coordinate matrix eigenvalue is above
    -tol * (1 + max |entry|). Sampled: unit coefficient vectors give
    quadratic-form vectors above the same floor in every coordinate,
    which the spectral bound implies.
    """
    scale = tol * (1.0 + gram.max_abs_entry())
    min_eig = float(np.min(gram.min_eigenvalues))
    spectral_pass = min_eig >= -scale

    rng = np.random.default_rng(seed)
    n = gram.pset.size
    xi = rng.normal(size=(n_xi, n))
    norms = np.linalg.norm(xi, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    xi = xi / norms
    quad = np.einsum("si,sj,ijk->sk", xi, xi, gram.entries)
    min_quad = float(np.min(quad))
    sampled_pass = min_quad >= -scale

    return PsdReport(
        spectral_pass=spectral_pass,
        sampled_pass=sampled_pass,
        min_eigenvalue=min_eig,
        min_quadform=min_quad,
        scaled_tol=scale,
        tol=tol,
        n_xi=n_xi,
        seed=seed,
    )


class QuadFormMode(Enum):
    SUM = "SUM"
    MIDPOINT = "MIDPOINT"


def quad_form_vector(
    H: Callable[[float], LatticeElement],
    x_list,
    xi_list,
    mode: QuadFormMode,
) -> np.ndarray:
    """sum_ij xi_i xi_j H(arg_ij) with arg from the chosen form.

    H values are cached per distinct argument, so symmetric pairs reuse
    one evaluation exactly.
    """
    xs = [float(x) for x in x_list]
    xis = [float(x) for x in xi_list]
    if len(xs) != len(xis):
        raise ValueError("x_list and xi_list must have equal length")
    if not xs:
        raise ValueError("need at least one point")
    cache: dict[float, np.ndarray] = {}

    def h_at(arg: float) -> np.ndarray:
        if arg not in cache:
            cache[arg] = np.asarray(H(arg).values, dtype=float)
        return cache[arg]

    total = None
    for i, (x_i, xi_i) in enumerate(zip(xs, xis)):
        for x_j, xi_j in zip(xs, xis):
            arg = x_i + x_j
            if mode is QuadFormMode.MIDPOINT:
                arg = 0.5 * arg
            contrib = xi_i * xi_j * h_at(arg)
            total = contrib if total is None else total + contrib
    return total


def exp_convexity_probe(
    H: Callable[[float], LatticeElement],
    x_list,
    xi_list,
    mode: QuadFormMode = QuadFormMode.SUM,
    tol: OrderTolerance = DEFAULT_TOLERANCE,
) -> Ordering:
    """Lattice-order verdict of the quadratic form against zero.

    LEQ or EQUAL means the form is nonnegative within the tolerance
    band, which is the exponential-convexity statement for the sampled
    points and coefficients.
    """
    q = quad_form_vector(H, x_list, xi_list, mode)
    q_el = LatticeElement(q)
    zero = LatticeElement(np.zeros(q.size))
    return partial_leq(zero, q_el, tol)


@dataclass(frozen=True)
class MidpointEquivalenceReport:
    """Substitution identity between the SUM and MIDPOINT forms."""

    defect_double: float
    defect_half: float
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.defect_double, self.defect_half) <= self.tol


def midpoint_equivalence_check(
    H: Callable[[float], LatticeElement],
    x_list,
    xi_list,
    tol: float = 1e-12,
) -> MidpointEquivalenceReport:
    """SUM on x equals MIDPOINT on 2x, and MIDPOINT on x equals SUM on x/2.

    Doubling and halving are exact float operations, so both defects are
    zero whenever H is deterministic.
    """
    xs = [float(x) for x in x_list]
    q_sum = quad_form_vector(H, xs, xi_list, QuadFormMode.SUM)
    q_mid_doubled = quad_form_vector(H, [2.0 * x for x in xs], xi_list, QuadFormMode.MIDPOINT)
    defect_double = float(np.max(np.abs(q_sum - q_mid_doubled)))

    q_mid = quad_form_vector(H, xs, xi_list, QuadFormMode.MIDPOINT)
    q_sum_halved = quad_form_vector(H, [0.5 * x for x in xs], xi_list, QuadFormMode.SUM)
    defect_half = float(np.max(np.abs(q_mid - q_sum_halved)))

    return MidpointEquivalenceReport(
        defect_double=defect_double, defect_half=defect_half, tol=tol
    )
