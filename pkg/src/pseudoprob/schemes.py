"""Joint pseudo-probability schemes over the outcomes of several observables.

A scheme is the full table of expectations Tr(rho P) where P runs over the
pseudo-projections of every joint outcome tuple. Entries always sum to one
and marginals are ordinary Born probabilities, but individual entries may
be negative; that negativity is the non-classicality witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidState,
    NonHermitianTrace,
    OrderingExplosion,
    PartitionSearchTooLarge,
)
from .operators import ATOL_LOOSE
from .pseudoprojection import (
    MAX_GENERATORS,
    Recipe,
    distinct_unit_matrices,
    weyl_matrix,
)
from .states import DensityMatrix

CLASSICALITY_EPS = 1e-10
SUM_ATOL = 1e-10
# Entries live in a narrow band around [0, 1]; anything outside this sanity
# bound means the inputs were not a state and projectors.
ENTRY_MIN, ENTRY_MAX = -1.0, 2.0
MAX_PARTITION_EVENTS = 16


def canonical_outcome_tuples(observables) -> tuple:
    """Product of per-observable outcomes, first-listed outcome first."""
    return tuple(itertools.product(*(obs.outcomes for obs in observables)))


class Scheme:
    """Complete pseudo-probability table for a state and observable set."""

    __slots__ = ("observables", "recipe", "state", "outcome_tuples", "values", "_index")

    def __init__(self, observables, recipe: Recipe, state: DensityMatrix, values):
        observables = tuple(observables)
        tuples = canonical_outcome_tuples(observables)
        values = np.asarray(values, dtype=float).reshape(-1)
        if len(values) != len(tuples):
            raise ValueError(f"expected {len(tuples)} entries, got {len(values)}")
        total = float(values.sum())
        if abs(total - 1.0) > SUM_ATOL:
            raise InvalidState(f"scheme entries sum to {total!r}, not 1")
        if values.min() < ENTRY_MIN or values.max() > ENTRY_MAX:
            raise InvalidState("scheme entry outside sanity bounds [-1, 2]")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "observables", observables)
        object.__setattr__(self, "recipe", recipe)
        object.__setattr__(self, "state", state)
        object.__setattr__(self, "outcome_tuples", tuples)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(tuples)})

    def __setattr__(self, name, value):
        raise AttributeError("Scheme is immutable")

    @property
    def n_observables(self) -> int:
        return len(self.observables)

    def entry(self, outcomes) -> float:
        return float(self.values[self._index[tuple(outcomes)]])

    def as_dict(self) -> dict:
        return {t: float(v) for t, v in zip(self.outcome_tuples, self.values)}

    def __repr__(self) -> str:
        return f"Scheme(n_observables={self.n_observables}, entries={len(self.values)})"


def build_scheme(rho: DensityMatrix, observables, recipe: Recipe | None = None) -> Scheme:
    """Evaluate Tr(rho P) for the pseudo-projection P of every outcome tuple.

    For a single observable every recipe reduces to the Born rule. The
    unit/weights recipes index the distinct hermitized orderings of each
    tuple's projector product (their count can collapse when projectors
    commute, in which case the recipe must still be valid for the
    collapsed count).
    """
    observables = tuple(observables)
    if not observables:
        raise ValueError("need at least one observable")
    if len(observables) > MAX_GENERATORS:
        raise OrderingExplosion(
            f"{len(observables)} observables exceed the ordering cap {MAX_GENERATORS}"
        )
    recipe = recipe or Recipe.weyl()
    for obs in observables:
        if obs.dim != rho.dim:
            raise DimensionMismatch(f"observable dim {obs.dim} vs state dim {rho.dim}")
    rmat = rho.matrix
    values = []
    for outcomes in canonical_outcome_tuples(observables):
        mats = [obs.projector(a).matrix for obs, a in zip(observables, outcomes)]
        if len(mats) == 1:
            op = mats[0]
        elif recipe.kind == "weyl":
            op = weyl_matrix(mats)
        else:
            units, _, _ = distinct_unit_matrices(mats)
            recipe.validate_for(len(units))
            if recipe.kind == "unit":
                op = units[recipe.index]
            else:
                op = sum(w * u for w, u in zip(recipe.weights, units))
        t = complex(np.trace(rmat @ op))
        if abs(t.imag) > ATOL_LOOSE:
            raise NonHermitianTrace(f"imaginary entry residue {t.imag:.3e}")
        values.append(t.real)
    return Scheme(observables, recipe, rho, values)


def marginal(scheme: Scheme, keep) -> Scheme:
    """Sum out the observables not in `keep` (indices into the scheme)."""
    keep = sorted(set(int(k) for k in keep))
    n = scheme.n_observables
    if not keep:
        raise ValueError("keep must name at least one observable")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep indices {keep} out of range for {n} observables")
    shape = tuple(len(obs.outcomes) for obs in scheme.observables)
    arr = scheme.values.reshape(shape)
    drop = tuple(i for i in range(n) if i not in keep)
    if drop:
        arr = arr.sum(axis=drop)
    return Scheme(
        tuple(scheme.observables[i] for i in keep),
        scheme.recipe,
        scheme.state,
        arr.reshape(-1),
    )


def negativity(scheme: Scheme) -> float:
    """(sum_i |p_i| - 1)/2; zero exactly when the scheme is a probability."""
    n = 0.5 * (float(np.abs(scheme.values).sum()) - 1.0)
    if n < -1e-10:
        raise InvalidState(f"negativity {n!r} below zero beyond tolerance")
    return max(n, 0.0)


@dataclass(frozen=True)
class Classification:
    classical: bool
    negative_entries: tuple


def classify(scheme: Scheme, eps: float = CLASSICALITY_EPS) -> Classification:
    """Classical verdict plus the negative entries, most negative first."""
    neg = [
        (t, float(v))
        for t, v in zip(scheme.outcome_tuples, scheme.values)
        if v < -eps
    ]
    neg.sort(key=lambda item: item[1])
    return Classification(classical=not neg, negative_entries=tuple(neg))


@dataclass(frozen=True)
class CoarseGraining:
    """Finest regrouping of events whose block sums are all non-negative."""

    partition: tuple
    block_count: int
    num_maximizers: int


def minimal_coarse_graining(scheme: Scheme, eps: float = CLASSICALITY_EPS) -> CoarseGraining:
    """Partition the event space into the largest number of blocks with
    non-negative sums.

    Exact search (no heuristics). Among partitions of maximal block count
    the lexicographically smallest is returned, blocks sorted by their
    first event in canonical order; the count of co-optimal partitions is
    reported alongside. A scheme with no negative entries yields all
    singleton blocks.
    """
    values = [float(v) for v in scheme.values]
    n = len(values)
    if n > MAX_PARTITION_EVENTS:
        raise PartitionSearchTooLarge(f"{n} events exceeds cap {MAX_PARTITION_EVENTS}")

    # Positive mass still available from event i onward; used to prune
    # branches whose open blocks can never recover to a non-negative sum.
    pos_suffix = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        pos_suffix[i] = pos_suffix[i + 1] + max(values[i], 0.0)

    def deficits_recoverable(sums, i) -> bool:
        deficit = 0.0
        for s in sums:
            if s < -eps:
                deficit += -(s + eps)
        return deficit <= pos_suffix[i]

    best = 0

    def search_max(i, sums):
        nonlocal best
        if not deficits_recoverable(sums, i):
            return
        if i == n:
            if all(s >= -eps for s in sums):
                best = max(best, len(sums))
            return
        if len(sums) + (n - i) <= best:
            return
        sums.append(values[i])
        search_max(i + 1, sums)
        sums.pop()
        for j in range(len(sums)):
            old = sums[j]
            sums[j] = old + values[i]
            search_max(i + 1, sums)
            sums[j] = old

    search_max(0, [])
    if best == 0:
        # unreachable: the single-block partition sums to 1 and is feasible
        raise InvalidState("no feasible partition found")

    count = 0
    smallest: list[tuple] | None = None

    def collect(i, blocks, sums):
        nonlocal count, smallest
        if not deficits_recoverable(sums, i):
            return
        if i == n:
            if len(blocks) == best and all(s >= -eps for s in sums):
                count += 1
                candidate = [tuple(b) for b in blocks]
                if smallest is None or candidate < smallest:
                    smallest = candidate
            return
        if len(blocks) + (n - i) < best:
            return
        blocks.append([i])
        sums.append(values[i])
        collect(i + 1, blocks, sums)
        blocks.pop()
        sums.pop()
        for j in range(len(blocks)):
            old = sums[j]
            blocks[j].append(i)
            sums[j] = old + values[i]
            collect(i + 1, blocks, sums)
            blocks[j].pop()
            sums[j] = old

    collect(0, [], [])
    partition = tuple(
        tuple(scheme.outcome_tuples[i] for i in block) for block in smallest
    )
    return CoarseGraining(partition=partition, block_count=best, num_maximizers=count)


def scheme_to_json(scheme: Scheme, eps: float = CLASSICALITY_EPS) -> dict:
    """Wire format with direction-backed observables, canonical entry order."""
    obs_json = []
    for obs in scheme.observables:
        if obs.axis is None:
            raise ValueError("scheme JSON output needs direction-backed observables")
        obs_json.append({"m": [float(x) for x in obs.axis]})
    entries = [
        {"a": [int(a) for a in t], "p": float(v)}
        for t, v in zip(scheme.outcome_tuples, scheme.values)
    ]
    return {
        "observables": obs_json,
        "recipe": scheme.recipe.to_json(),
        "entries": entries,
        "negativity": negativity(scheme),
        "classical": classify(scheme, eps).classical,
    }
