"""Pure-state evaluation of the ten measure families.

A family combines reduced-function values of marginals of a pure state
regrouped along a partition:

* ``sum``        half the sum over single blocks
* ``max``        maximum over single blocks
* ``sum-bipart`` half the sum over one marginal per unordered bipartition
* ``max-bipart`` maximum over all bipartition marginals
* ``g*``         the same four, gated to zero when any single-block
                 marginal has vanishing reduced function
* ``gmin``       minimum over single blocks
* ``gmin-bipart`` minimum over all bipartition marginals

Mixed inputs are rejected here; they extend through
:func:`entmono.convexroof.convex_roof`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import GuardError, StateError
from .partitions import Partition, full_partition
from .qstate import PureState, clean_spectrum
from .redfun import ReducedFunctionSpec, h_spectrum
from . import qstate

#: Zero test for the genuine gate (a float comparison needs a band above
#: spectral noise).
GATE_EPS = 1e-9


class Family(str, Enum):
    SUM = "sum"
    SUM_BIPART = "sum-bipart"
    MAX = "max"
    MAX_BIPART = "max-bipart"
    GSUM = "gsum"
    GSUM_BIPART = "gsum-bipart"
    GMAX = "gmax"
    GMAX_BIPART = "gmax-bipart"
    GMIN = "gmin"
    GMIN_BIPART = "gmin-bipart"


_GATED = {Family.GSUM, Family.GSUM_BIPART, Family.GMAX, Family.GMAX_BIPART,
          Family.GMIN, Family.GMIN_BIPART}
_BIPART = {Family.SUM_BIPART, Family.MAX_BIPART, Family.GSUM_BIPART,
           Family.GMAX_BIPART, Family.GMIN_BIPART}


@dataclass(frozen=True)
class MeasureSpec:
    """A measure family together with its reduced function."""

    family: Family
    h: ReducedFunctionSpec

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))

    @property
    def name(self) -> str:
        return f"{self.family.value}/{self.h.name}"

    @property
    def genuine(self) -> bool:
        return self.family in _GATED


def bipartition_subsets(n_labels: int) -> tuple[tuple[int, ...], ...]:
    """One representative index subset per unordered bipartition.

    Subsets of size up to ``n/2``; at exactly ``n/2`` (even ``n``) the half
    containing the last index is dropped, so every unordered bipartition
    appears exactly once and the count is ``2**(n-1) - 1``.
    """
    if not 2 <= n_labels <= 8:
        raise GuardError(f"bipartition index needs 2..8 parties, got {n_labels}")
    out: list[tuple[int, ...]] = []
    half = n_labels // 2
    for size in range(1, half + 1):
        for sub in itertools.combinations(range(n_labels), size):
            if 2 * size == n_labels and (n_labels - 1) in sub:
                continue
            out.append(sub)
    return tuple(out)


def _regrouped_vector(state: PureState, partition: Partition) -> tuple[np.ndarray, tuple[int, ...]]:
    """Regroup to one axis per block; error if tracing would leave a mixed state."""
    if partition.n_blocks < 2:
        raise StateError("measure evaluation needs at least two blocks")
    grouped = qstate.regroup(state, partition)
    return grouped.amplitudes, grouped.dims


def _subset_eigs(tensor: np.ndarray, dims: Sequence[int], subset: Sequence[int]) -> np.ndarray:
    """Spectrum of the marginal on ``subset`` axes via the smaller-side Gram matrix.

    Every catalog reduced function depends only on the nonzero spectrum,
    which both sides of a pure-state bipartition share.
    """
    n = len(dims)
    subset = list(subset)
    rest = [i for i in range(n) if i not in subset]
    d_s = math.prod(dims[i] for i in subset)
    d_r = math.prod(dims[i] for i in rest)
    if d_s <= d_r:
        m = tensor.transpose(subset + rest).reshape(d_s, d_r)
    else:
        m = tensor.transpose(rest + subset).reshape(d_r, d_s)
    g = m @ m.conj().T
    return clean_spectrum(np.linalg.eigvalsh(g))


@dataclass(frozen=True)
class PureProfile:
    """Marginal spectra of a regrouped pure state, reused across families."""

    n_blocks: int
    block_eigs: tuple[np.ndarray, ...]
    subset_eigs: tuple[np.ndarray, ...] | None  # aligned with bipartition_subsets


def pure_state_profile(
    state: PureState, partition: Partition | None = None, bipartitions: bool = True
) -> PureProfile:
    """Compute all marginal spectra a measure family may need, once."""
    if partition is None:
        partition = full_partition(state.labels)
    vec, dims = _regrouped_vector(state, partition)
    tensor = vec.reshape(dims)
    n = len(dims)
    singles = tuple(_subset_eigs(tensor, dims, [i]) for i in range(n))
    subsets: tuple[np.ndarray, ...] | None = None
    if bipartitions and n >= 2:
        index = bipartition_subsets(n)
        subsets = tuple(
            singles[sub[0]] if len(sub) == 1 else _subset_eigs(tensor, dims, sub)
            for sub in index
        )
    return PureProfile(n_blocks=n, block_eigs=singles, subset_eigs=subsets)


def measure_from_profile(spec: MeasureSpec, profile: PureProfile) -> float:
    """Evaluate a family from precomputed marginal spectra."""
    h = spec.h
    singles = [h_spectrum(h, e) for e in profile.block_eigs]
    family = spec.family

    if family in _GATED and any(v <= GATE_EPS for v in singles):
        return 0.0

    if family in (Family.SUM, Family.GSUM):
        return 0.5 * math.fsum(singles)
    if family in (Family.MAX, Family.GMAX):
        return max(singles)
    if family is Family.GMIN:
        return min(singles)

    if profile.subset_eigs is None:
        raise StateError("profile was computed without bipartition spectra")
    values = [h_spectrum(h, e) for e in profile.subset_eigs]
    if family in (Family.SUM_BIPART, Family.GSUM_BIPART):
        return 0.5 * math.fsum(values)
    if family in (Family.MAX_BIPART, Family.GMAX_BIPART):
        return max(values)
    if family is Family.GMIN_BIPART:
        return min(values)
    raise ValueError(f"unhandled family {family!r}")


def measure_pure(spec: MeasureSpec, state: PureState, partition: Partition | None = None) -> float:
    """Measure value of a pure state along a partition (default: all singletons).

    Labels outside the partition are traced out first and must leave a pure
    marginal; route mixed states through the convex roof instead.
    """
    profile = pure_state_profile(state, partition, bipartitions=spec.family in _BIPART)
    return measure_from_profile(spec, profile)


def genuine_gate(h: ReducedFunctionSpec, state: PureState, partition: Partition | None = None) -> bool:
    """True iff every single-block marginal has a reduced function above the gate."""
    profile = pure_state_profile(state, partition, bipartitions=False)
    return all(h_spectrum(h, e) > GATE_EPS for e in profile.block_eigs)
