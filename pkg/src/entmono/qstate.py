"""Dense multipartite quantum states.

States live on a labelled tensor factorization: an ordered list of
subsystem labels with one local dimension each.  Amplitudes and matrices
are stored row-major with the first label most significant, so state files
written by one process reload identically in another.

All operations are pure functions of their inputs; the dataclasses are
frozen and their arrays marked read-only, so values are safe to share
between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import GuardError, StateError
from .partitions import Partition

#: Validation caps at desk scale.
MAX_TOTAL_DIM = 4096

NORM_TOL = 1e-12
HERM_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_FLOOR = 1e-10
#: Relative threshold defining the effective rank of a spectrum.
RANK_REL_TOL = 1e-10
#: Purity threshold below which a traced pure state counts as mixed.
PURITY_TOL = 1e-9


def _check_layout(labels: Sequence[str], dims: Sequence[int]) -> tuple[tuple[str, ...], tuple[int, ...]]:
    labels = tuple(labels)
    dims = tuple(int(d) for d in dims)
    if len(labels) != len(dims):
        raise StateError("labels and dims must have equal length")
    if len(set(labels)) != len(labels):
        raise StateError("duplicate subsystem labels")
    if any(not lab for lab in labels):
        raise StateError("empty label")
    if any(d < 2 for d in dims):
        raise StateError("local dimensions must be >= 2")
    total = math.prod(dims)
    if total > MAX_TOTAL_DIM:
        raise GuardError(f"total dimension {total} exceeds the cap ({MAX_TOTAL_DIM})")
    return labels, dims


def _frozen_array(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PureState:
    """Normalized complex amplitude vector over labelled subsystems."""

    labels: tuple[str, ...]
    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __init__(self, labels: Sequence[str], dims: Sequence[int], amplitudes, normalize: bool = False):
        labels, dims = _check_layout(labels, dims)
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if amps.size != math.prod(dims):
            raise StateError(f"amplitude length {amps.size} != product of dims {math.prod(dims)}")
        norm2 = float(np.vdot(amps, amps).real)
        if normalize:
            if norm2 <= 0:
                raise StateError("cannot normalize the zero vector")
            amps = amps / math.sqrt(norm2)
        elif abs(norm2 - 1.0) > NORM_TOL:
            raise StateError(f"state not normalized: sum |a|^2 = {norm2!r}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", _frozen_array(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per label."""
        return self.amplitudes.reshape(self.dims)


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix over labelled subsystems."""

    labels: tuple[str, ...]
    dims: tuple[int, ...]
    matrix: np.ndarray

    def __init__(self, labels: Sequence[str], dims: Sequence[int], matrix):
        labels, dims = _check_layout(labels, dims)
        mat = np.asarray(matrix, dtype=complex)
        d = math.prod(dims)
        if mat.shape != (d, d):
            raise StateError(f"matrix shape {mat.shape} != ({d}, {d})")
        if np.abs(mat - mat.conj().T).max() > HERM_TOL:
            raise StateError("matrix is not Hermitian within tolerance")
        tr = float(mat.trace().real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise StateError(f"trace {tr!r} != 1")
        w = np.linalg.eigvalsh(mat)
        if w[0] < -EIG_FLOOR:
            raise StateError(f"negative eigenvalue {w[0]!r} beyond tolerance")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", _frozen_array(mat))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


State = Union[PureState, DensityOperator]


@dataclass(frozen=True)
class Spectrum:
    """Descending real eigenvalue list with its effective rank."""

    eigenvalues: np.ndarray
    effective_rank: int

    def __init__(self, eigenvalues):
        eigs = np.asarray(eigenvalues, dtype=float)
        eigs = np.sort(eigs)[::-1].copy()
        eigs.setflags(write=False)
        rank = int(np.count_nonzero(eigs > RANK_REL_TOL * max(1.0, float(eigs[0])))) if eigs.size else 0
        object.__setattr__(self, "eigenvalues", eigs)
        object.__setattr__(self, "effective_rank", rank)


def clean_spectrum(w: np.ndarray) -> np.ndarray:
    """Clamp small negative eigenvalues to zero and sort descending."""
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < -EIG_FLOOR:
        raise StateError(f"negative eigenvalue {w.min()!r} beyond tolerance")
    return np.sort(np.clip(w, 0.0, None))[::-1]


def projector(state: PureState) -> DensityOperator:
    """Rank-one density operator |psi><psi|."""
    v = state.amplitudes
    return DensityOperator(state.labels, state.dims, np.outer(v, v.conj()))


def _label_indices(state: State, labels: Iterable[str]) -> list[int]:
    idx = []
    for lab in labels:
        if lab not in state.labels:
            raise StateError(f"unknown label {lab!r}")
        idx.append(state.labels.index(lab))
    return idx


def partial_trace(state: State, keep: Iterable[str]) -> DensityOperator:
    """Reduced density operator on the ``keep`` labels (in state order)."""
    keep = list(dict.fromkeys(keep))
    if not keep:
        raise StateError("keep set must be nonempty")
    keep_idx = sorted(_label_indices(state, keep))
    n = len(state.labels)
    rest_idx = [i for i in range(n) if i not in keep_idx]
    keep_labels = tuple(state.labels[i] for i in keep_idx)
    keep_dims = tuple(state.dims[i] for i in keep_idx)

    if isinstance(state, PureState):
        t = state.tensor().transpose(keep_idx + rest_idx)
        dk = math.prod(keep_dims)
        m = t.reshape(dk, -1)
        rho = m @ m.conj().T
        return DensityOperator(keep_labels, keep_dims, rho)

    t = state.matrix.reshape(state.dims + state.dims)
    dims = list(state.dims)
    for pos in sorted(rest_idx, reverse=True):
        t = np.trace(t, axis1=pos, axis2=pos + len(dims))
        dims.pop(pos)
    dk = math.prod(keep_dims)
    return DensityOperator(keep_labels, keep_dims, t.reshape(dk, dk))


def eigenvalues(op: DensityOperator) -> Spectrum:
    """Full real spectrum of a density operator, descending, with effective rank."""
    w = clean_spectrum(np.linalg.eigvalsh(op.matrix))
    if abs(float(w.sum()) - 1.0) > 1e-9:
        raise StateError("spectrum does not sum to the trace within tolerance")
    return Spectrum(w)


def _block_name(members: Sequence[str]) -> str:
    if all(len(m) == 1 for m in members):
        return "".join(members)
    return "+".join(members)


def marginal_pure_vector(state: PureState, keep: Iterable[str]) -> np.ndarray | None:
    """Pure-state vector of the marginal on ``keep``, or ``None`` if it is mixed.

    The returned vector has a deterministic phase (largest-magnitude entry
    made real positive).
    """
    keep_idx = sorted(_label_indices(state, keep))
    n = len(state.labels)
    rest_idx = [i for i in range(n) if i not in keep_idx]
    if not rest_idx:
        return state.amplitudes.copy()
    t = state.tensor().transpose(keep_idx + rest_idx)
    dk = math.prod(state.dims[i] for i in keep_idx)
    m = t.reshape(dk, -1)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    if 1.0 - float(s[0]) ** 2 > PURITY_TOL:
        return None
    v = u[:, 0]
    k = int(np.argmax(np.abs(v)))
    phase = v[k] / abs(v[k])
    return v * phase.conjugate()


def regroup(state: State, partition: Partition) -> State:
    """Merge subsystems into one effective party per partition block.

    Labels outside the partition's cover are traced out first; for a
    :class:`PureState` input this is an error unless the marginal stays
    pure.  The result carries one label per block (member names joined)
    with the product dimension, amplitudes/matrix reindexed accordingly.
    """
    cover = partition.cover
    for lab in cover:
        if lab not in state.labels:
            raise StateError(f"unknown label {lab!r} in partition")

    if isinstance(state, PureState):
        extra = [lab for lab in state.labels if lab not in cover]
        if extra:
            vec = marginal_pure_vector(state, [lab for lab in state.labels if lab in cover])
            if vec is None:
                raise StateError(
                    "tracing out labels outside the partition yields a mixed state"
                )
            kept = tuple(lab for lab in state.labels if lab in cover)
            kept_dims = tuple(state.dims[state.labels.index(lab)] for lab in kept)
            state = PureState(kept, kept_dims, vec)
        order: list[int] = []
        new_labels, new_dims = [], []
        for block in partition.blocks:
            idx = sorted(state.labels.index(lab) for lab in block)
            order.extend(idx)
            new_labels.append(_block_name([state.labels[i] for i in idx]))
            new_dims.append(math.prod(state.dims[i] for i in idx))
        t = state.tensor().transpose(order)
        return PureState(new_labels, new_dims, t.reshape(-1))

    op = state
    extra = [lab for lab in op.labels if lab not in cover]
    if extra:
        op = partial_trace(op, [lab for lab in op.labels if lab in cover])
    order = []
    new_labels, new_dims = [], []
    for block in partition.blocks:
        idx = sorted(op.labels.index(lab) for lab in block)
        order.extend(idx)
        new_labels.append(_block_name([op.labels[i] for i in idx]))
        new_dims.append(math.prod(op.dims[i] for i in idx))
    n = len(op.labels)
    t = op.matrix.reshape(op.dims + op.dims)
    t = t.transpose(order + [i + n for i in order])
    d = math.prod(new_dims)
    return DensityOperator(new_labels, new_dims, t.reshape(d, d))


def tensor_product(a: PureState, b: PureState) -> PureState:
    """Kronecker product state on the concatenated labels."""
    if set(a.labels) & set(b.labels):
        raise StateError("label collision in tensor product")
    amps = np.kron(a.amplitudes, b.amplitudes)
    return PureState(a.labels + b.labels, a.dims + b.dims, amps, normalize=True)


def random_pure_state(dims: Sequence[int], seed: int, labels: Sequence[str] | None = None) -> PureState:
    """Haar-distributed pure state, deterministic per seed."""
    dims = tuple(int(d) for d in dims)
    if labels is None:
        labels = [chr(ord("A") + i) for i in range(len(dims))]
    rng = np.random.default_rng(seed)
    d = math.prod(dims)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(labels, dims, v, normalize=True)


def random_density_operator(
    dims: Sequence[int], seed: int, rank: int | None = None, labels: Sequence[str] | None = None
) -> DensityOperator:
    """Random mixed state from a Ginibre factor of the given rank (default full)."""
    dims = tuple(int(d) for d in dims)
    if labels is None:
        labels = [chr(ord("A") + i) for i in range(len(dims))]
    d = math.prod(dims)
    k = d if rank is None else int(rank)
    if not 1 <= k <= d:
        raise StateError(f"rank must lie in [1, {d}]")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    rho /= rho.trace().real
    return DensityOperator(labels, dims, rho)
