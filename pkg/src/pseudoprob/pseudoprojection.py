"""Pseudo-projections: hermitized ordered products of projectors.

The product of noncommuting projectors is not itself a projector. Each
ordering of the product, hermitized as (prod + prod^dag)/2, gives a "unit"
pseudo-projection; an ordering and its reversal coincide, so N projectors
yield at most N!/2 distinct units. Their convex combinations, and in
particular the equal-weight average over all orderings (the fully
symmetric, Weyl-ordered form), represent the indicator function of the
joint outcome. Whenever the generators fail to commute, every such
operator acquires at least one negative eigenvalue; when they all
commute, the manifold collapses to the single true projection.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidConvexWeights,
    InvalidRecipe,
    NotAProjector,
    OrderingExplosion,
)
from .operators import (
    HermitianOperator,
    commutator_norm,
    eigenvalues_hermitian,
    idempotency_residual,
    identity,
)

# Entrywise max-norm below which two hermitized orderings count as the same
# unit pseudo-projection (separates inequivalent orderings from fp twins).
DEDUP_ATOL = 1e-10
PROJECTOR_ATOL = 1e-10
IDEMPOTENCY_ATOL = 1e-10
# 8! / 2 = 20160 candidate orderings is the largest enumeration we allow.
MAX_GENERATORS = 8
WEIGHT_SUM_ATOL = 1e-12


@dataclass(frozen=True)
class Recipe:
    """Ordering recipe for building a pseudo-projection from projectors.

    kind is one of "weyl" (equal-weight average over all orderings),
    "unit" (a single distinct hermitized ordering, by index in canonical
    order), or "weights" (convex combination of the distinct units).
    """

    kind: str
    index: int | None = None
    weights: tuple | None = None

    @classmethod
    def weyl(cls) -> "Recipe":
        return cls(kind="weyl")

    @classmethod
    def unit(cls, index: int) -> "Recipe":
        if index < 0:
            raise InvalidRecipe(f"unit index must be non-negative, got {index}")
        return cls(kind="unit", index=int(index))

    @classmethod
    def convex(cls, weights) -> "Recipe":
        ws = tuple(float(w) for w in weights)
        _check_weights(ws, len(ws))
        return cls(kind="weights", weights=ws)

    def validate_for(self, unit_count: int) -> None:
        if self.kind == "weyl":
            return
        if self.kind == "unit":
            if not 0 <= self.index < unit_count:
                raise InvalidRecipe(
                    f"unit index {self.index} out of range for {unit_count} distinct units"
                )
            return
        if self.kind == "weights":
            _check_weights(self.weights, unit_count)
            return
        raise InvalidRecipe(f"unknown recipe kind {self.kind!r}")

    def to_json(self):
        if self.kind == "weyl":
            return "weyl"
        if self.kind == "unit":
            return {"unit": self.index}
        return {"weights": list(self.weights)}

    @classmethod
    def from_json(cls, obj) -> "Recipe":
        if obj == "weyl":
            return cls.weyl()
        if isinstance(obj, dict) and "unit" in obj:
            return cls.unit(int(obj["unit"]))
        if isinstance(obj, dict) and "weights" in obj:
            return cls.convex(obj["weights"])
        raise InvalidRecipe(f"unrecognised recipe JSON {obj!r}")


def _check_weights(ws, expected_len: int) -> None:
    if len(ws) != expected_len:
        raise InvalidConvexWeights(f"expected {expected_len} weights, got {len(ws)}")
    if any(w < 0 for w in ws):
        raise InvalidConvexWeights("weights must be non-negative")
    if abs(sum(ws) - 1.0) > WEIGHT_SUM_ATOL:
        raise InvalidConvexWeights(f"weights sum to {sum(ws)!r}, not 1")


@dataclass(frozen=True, eq=False)
class PseudoProjection:
    """Hermitian operator tagged with its generating projectors and recipe."""

    op: HermitianOperator
    generators: tuple
    recipe: Recipe

    @property
    def dim(self) -> int:
        return self.op.dim


@dataclass(frozen=True)
class SpectralAudit:
    """Spectral fingerprint of a pseudo-projection.

    min_eig < 0 exactly when the generators fail to commute;
    is_true_projection flags the commuting collapse.
    """

    min_eig: float
    commutator_norm: float
    is_true_projection: bool


def _check_generators(projs) -> list:
    projs = list(projs)
    if len(projs) < 2:
        raise ValueError("need at least two projectors")
    if len(projs) > MAX_GENERATORS:
        raise OrderingExplosion(
            f"{len(projs)} projectors would need {math.factorial(len(projs))} orderings"
        )
    dim = projs[0].dim
    for p in projs:
        if p.dim != dim:
            raise DimensionMismatch("projectors of mixed dimension")
        if idempotency_residual(p) > PROJECTOR_ATOL:
            raise NotAProjector(f"idempotency residual {idempotency_residual(p):.3e}")
    return projs


def _chain(mats, perm) -> np.ndarray:
    m = mats[perm[0]]
    for k in perm[1:]:
        m = m @ mats[k]
    return m


def distinct_unit_matrices(mats, atol: float = DEDUP_ATOL):
    """Distinct hermitized ordering products of raw matrices.

    Returns (units, multiplicities, representative_permutations) where the
    canonical order is lexicographic in the generating permutation and each
    duplicate class keeps its first representative.
    """
    units: list[np.ndarray] = []
    mults: list[int] = []
    perms: list[tuple] = []
    for perm in itertools.permutations(range(len(mats))):
        prod = _chain(mats, perm)
        h = 0.5 * (prod + prod.conj().T)
        for i, u in enumerate(units):
            if np.abs(u - h).max() <= atol:
                mults[i] += 1
                break
        else:
            units.append(h)
            mults.append(1)
            perms.append(perm)
    return units, mults, perms


def weyl_matrix(mats) -> np.ndarray:
    """Equal-weight average of all ordering products, hermitized."""
    n = len(mats)
    acc = np.zeros_like(mats[0])
    for perm in itertools.permutations(range(n)):
        acc = acc + _chain(mats, perm)
    acc = acc / math.factorial(n)
    return 0.5 * (acc + acc.conj().T)


def unit_pseudo_projections(projectors) -> list[PseudoProjection]:
    """All distinct unit pseudo-projections of the given projectors.

    At most N!/2 for N projectors; commuting generators collapse the list
    further (down to a single true projection when all commute).
    """
    projs = _check_generators(projectors)
    mats = [p.matrix for p in projs]
    units, _, _ = distinct_unit_matrices(mats)
    gens = tuple(projs)
    return [
        PseudoProjection(op=HermitianOperator(u), generators=gens, recipe=Recipe.unit(i))
        for i, u in enumerate(units)
    ]


def weyl_pseudo_projection(projectors) -> PseudoProjection:
    """Fully symmetric pseudo-projection: average over all N! orderings.

    Equivalently the multiplicity-weighted mean of the distinct units, and
    exactly invariant under permutations of the input list. For two
    projectors this is just their symmetrized product; for a complementary
    pair (pi, 1 - pi) it vanishes identically.
    """
    projs = _check_generators(projectors)
    op = HermitianOperator(weyl_matrix([p.matrix for p in projs]))
    return PseudoProjection(op=op, generators=tuple(projs), recipe=Recipe.weyl())


def combine(units, weights) -> PseudoProjection:
    """Convex combination of unit pseudo-projections."""
    units = list(units)
    ws = tuple(float(w) for w in weights)
    _check_weights(ws, len(units))
    if not units:
        raise ValueError("need at least one unit pseudo-projection")
    acc = np.zeros_like(units[0].op.matrix)
    for w, u in zip(ws, units):
        acc = acc + w * u.op.matrix
    return PseudoProjection(
        op=HermitianOperator(acc),
        generators=units[0].generators,
        recipe=Recipe.convex(ws),
    )


def disjunction_operator(pa: HermitianOperator, pb: HermitianOperator) -> HermitianOperator:
    """OR-operator pi_a + pi_b - (pi_a pi_b + pi_b pi_a)/2.

    Eigenvalues may exceed 1: a joint description of noncommuting events
    is not constrained to the classical probability range.
    """
    for p in (pa, pb):
        if idempotency_residual(p) > PROJECTOR_ATOL:
            raise NotAProjector("disjunction needs true projectors")
    if pa.dim != pb.dim:
        raise DimensionMismatch(f"{pa.dim} vs {pb.dim}")
    sym = 0.5 * (pa.matrix @ pb.matrix + pb.matrix @ pa.matrix)
    return HermitianOperator(pa.matrix + pb.matrix - sym)


def negation_operator(pp) -> HermitianOperator:
    """NOT-operator: identity minus the pseudo-projection.

    Note this formal complement does not annihilate its argument: the
    product (1 - P) P vanishes only for true projections. Use
    `negation_product_residual` to inspect the deviation.
    """
    op = pp.op if isinstance(pp, PseudoProjection) else pp
    return identity(op.dim) - op


def negation_product_residual(pp) -> float:
    """max-norm of (1 - P) P, the failure of the NOT-operator to exclude P."""
    op = pp.op if isinstance(pp, PseudoProjection) else pp
    m = op.matrix
    return float(np.abs((np.eye(op.dim) - m) @ m).max())


def spectral_audit(pp: PseudoProjection) -> SpectralAudit:
    """Minimum eigenvalue, worst generator commutator, and projection check."""
    vals = eigenvalues_hermitian(pp.op)
    gens = pp.generators
    comm = 0.0
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            comm = max(comm, commutator_norm(gens[i], gens[j]))
    return SpectralAudit(
        min_eig=float(vals[0]),
        commutator_norm=comm,
        is_true_projection=idempotency_residual(pp.op) <= IDEMPOTENCY_ATOL,
    )
