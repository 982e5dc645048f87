"""Finding the distributions that maximize diversity of every order at once.

The exhaustive route sweeps all nonempty subsets B, keeps those whose
principal submatrix admits a nonnegative weighting, and takes the largest
magnitude; the normalized nonnegative weightings of the winning subsets are
exactly the maximizing distributions.  Polynomial-time fast paths cover
ultrametric, strictly diagonally dominant (unit diagonal) and positive
semidefinite matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diversity import Distribution, ordinariness
from .errors import InputError, PreconditionError
from .kernels import UNIQUE_NONNEG, UNRESOLVED, scan_subsets
from .linalg import (
    PIVOT_RTOL,
    SOLVE_TOL,
    SimilarityMatrix,
    WeightingSolution,
    find_nonnegative_weighting,
    find_positive_weighting,
    is_positive_definite,
    is_positive_semidefinite,
    is_strictly_diagonally_dominant,
    is_ultrametric,
    solve_weighting_space,
)

# Hard size cap: the exhaustive route enumerates 2^n - 1 subsets.
SUBSET_CAP = 30
# Winning subsets are all those within this relative slack of the top magnitude.
TIE_RTOL = 1e-9
# Relative spread of Zp over the support below which a distribution counts as
# having a constant diversity profile.
INVARIANT_RTOL = 1e-9

_NONSYMMETRIC_MSG = (
    "maximization requires a symmetric similarity matrix: for nonsymmetric "
    "matrices the supremum of diversity can vary with the order q and need "
    "not be attained by any distribution"
)


@dataclass(frozen=True)
class FeasibleSubset:
    """A subset whose submatrix admits a nonnegative weighting, with its
    magnitude and the full weighting space (affine description plus one
    nonnegative representative)."""

    indices: tuple[int, ...]
    magnitude: float
    weighting_space: WeightingSolution


@dataclass(frozen=True)
class FullSupportDiagnostics:
    """Whether maximization preserves all species, with certificates."""

    exists_full_support_maximizer: bool
    all_maximizers_full_support: bool
    positive_semidefinite: bool
    positive_definite: bool
    min_eigenvalue: float
    eigenvalue_floor: float
    positive_weighting: np.ndarray | None


@dataclass(frozen=True)
class MaximizationResult:
    dmax: float
    winners: tuple[FeasibleSubset, ...]
    sample_maximizer: Distribution
    full_support_exists: bool
    all_maximizers_full_support: bool
    method: str
    unique: bool | None  # None when uniqueness could not be certified cheaply


def normalize_weighting(w, subset, n: int) -> Distribution:
    """Distribution proportional to ``w`` on ``subset``, zero elsewhere."""
    w = np.asarray(w, dtype=np.float64)
    idx = np.asarray(sorted(int(i) for i in subset), dtype=np.intp)
    if w.shape != (idx.size,):
        raise InputError(f"weighting has {w.shape} entries for a subset of size {idx.size}")
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise PreconditionError(f"subset out of range for n={n}")
    if w.size and w.min() < -100 * SOLVE_TOL:
        raise InputError(f"weighting entry {w.min()!r} is negative")
    w = np.maximum(w, 0.0)  # forgive solver-tolerance negatives
    total = w.sum()
    if total <= 0:
        raise InputError("weighting must be nonnegative and nonzero")
    out = np.zeros(n)
    out[idx] = w / total
    return Distribution(out)


def is_invariant(z: SimilarityMatrix, p: Distribution, rtol: float = INVARIANT_RTOL) -> bool:
    """True when (Zp)_i is constant over the support of p, equivalently when
    the diversity profile of p is constant in q."""
    xp = ordinariness(z, p)[p.support]
    return bool(xp.max() - xp.min() <= rtol * xp.max())


def full_support_diagnostics(z: SimilarityMatrix) -> FullSupportDiagnostics:
    """Species-preservation report.

    A full-support maximizer exists exactly when Z is positive semidefinite
    and admits a positive weighting; every maximizer has full support exactly
    when Z is positive definite with positive weighting.
    """
    if not z.symmetric:
        raise PreconditionError(_NONSYMMETRIC_MSG)
    floor = 1e-9 * float(np.abs(z.values).max())
    eigs = np.linalg.eigvalsh(z.values)
    psd = bool(eigs.min() >= -floor)
    pd = bool(eigs.min() > floor)
    pos = find_positive_weighting(z) if psd else None
    return FullSupportDiagnostics(
        exists_full_support_maximizer=psd and pos is not None,
        all_maximizers_full_support=pd and pos is not None,
        positive_semidefinite=psd,
        positive_definite=pd,
        min_eigenvalue=float(eigs.min()),
        eigenvalue_floor=floor,
        positive_weighting=pos,
    )


def _mask_indices(mask: int, n: int) -> tuple[int, ...]:
    return tuple(i for i in range(n) if (mask >> i) & 1)


def _certify_uniqueness(winners) -> bool | None:
    reps = []
    all_unique = True
    for fs in winners:
        w = fs.weighting_space.nonnegative
        rep = np.zeros(max(fs.indices) + 1 if fs.indices else 0)
        total = max(w.sum(), 1e-300)
        for i, j in enumerate(fs.indices):
            rep[j] = max(w[i], 0.0) / total
        reps.append(rep)
        if not fs.weighting_space.unique:
            all_unique = False
    width = max(r.shape[0] for r in reps)
    reps = [np.pad(r, (0, width - r.shape[0])) for r in reps]
    for r in reps[1:]:
        if np.abs(r - reps[0]).max() > 1e-9:
            return False  # two distinct maximizing distributions exhibited
    if all_unique:
        return True
    return None


def maximize_exhaustive(z: SimilarityMatrix, cap: int = SUBSET_CAP) -> MaximizationResult:
    """Maximum diversity and all maximizing distributions by subset sweep.

    Enumerates every nonempty subset in increasing cardinality (lexicographic
    within), records magnitudes of those admitting a nonnegative weighting,
    and reports every subset tying for the maximum.
    """
    if not z.symmetric:
        raise PreconditionError(_NONSYMMETRIC_MSG)
    if z.n > cap:
        raise PreconditionError(f"matrix size {z.n} exceeds the exhaustive cap {cap}")
    status, mags = scan_subsets(z.values, SOLVE_TOL, PIVOT_RTOL)

    # magnitudes of feasible subsets, indexed by mask - 1 (NaN elsewhere);
    # masks the kernel could not settle go through the full solver + LP
    mags = np.array(mags)
    mags[status != UNIQUE_NONNEG] = np.nan
    for mask_i in np.flatnonzero(status == UNRESOLVED):
        ws = solve_weighting_space(z, _mask_indices(int(mask_i) + 1, z.n))
        if ws.particular is None:
            continue
        if find_nonnegative_weighting(ws) is not None:
            mags[mask_i] = ws.magnitude

    dmax0 = float(np.nanmax(mags))
    thresh = dmax0 - TIE_RTOL * max(1.0, abs(dmax0))
    with np.errstate(invalid="ignore"):
        tying = np.flatnonzero(mags >= thresh)
    masks = sorted(
        (int(m) + 1 for m in tying),
        key=lambda m: (bin(m).count("1"), _mask_indices(m, z.n)),
    )
    winners = []
    for mask in masks:
        idx = _mask_indices(mask, z.n)
        ws = solve_weighting_space(z, idx)
        w = find_nonnegative_weighting(ws)
        winners.append(FeasibleSubset(idx, float(ws.magnitude), ws.with_nonnegative(w)))
    winners = tuple(winners)

    dmax = max(fs.magnitude for fs in winners)
    sample_from = min(winners, key=lambda fs: fs.indices)
    sample = normalize_weighting(sample_from.weighting_space.nonnegative, sample_from.indices, z.n)
    diag = full_support_diagnostics(z)
    return MaximizationResult(
        dmax=dmax,
        winners=winners,
        sample_maximizer=sample,
        full_support_exists=diag.exists_full_support_maximizer,
        all_maximizers_full_support=diag.all_maximizers_full_support,
        method="exhaustive",
        unique=_certify_uniqueness(winners),
    )


def maximize_fast_path(z: SimilarityMatrix) -> MaximizationResult | None:
    """Polynomial-time route for matrix classes where the full set wins.

    Fires for ultrametric matrices, strictly diagonally dominant matrices
    with unit diagonal, and positive semidefinite matrices admitting a
    nonnegative weighting; returns ``None`` otherwise (callers fall back to
    the exhaustive sweep).  In the positive semidefinite case the reported
    winner list contains only the certified full-set winner; proper subsets
    may tie, but their maximizing distributions are already generated by the
    full set's weighting space.
    """
    if not z.symmetric:
        raise PreconditionError(_NONSYMMETRIC_MSG)
    unit_diag = bool(np.abs(z.values.diagonal() - 1.0).max() <= 1e-12)
    if is_ultrametric(z):
        method = "ultrametric"
    elif unit_diag and is_strictly_diagonally_dominant(z):
        method = "diagonal-dominance"
    elif is_positive_semidefinite(z):
        method = "positive-semidefinite"
    else:
        return None

    ws = solve_weighting_space(z)
    w = find_nonnegative_weighting(ws)
    if w is None:
        # ultrametric / diagonally dominant matrices always pass here; a PSD
        # matrix without a nonnegative weighting gets no fast answer
        return None
    full = tuple(range(z.n))
    winner = FeasibleSubset(full, float(ws.magnitude), ws.with_nonnegative(w))
    diag = full_support_diagnostics(z)
    unique = True if diag.all_maximizers_full_support else None
    return MaximizationResult(
        dmax=float(ws.magnitude),
        winners=(winner,),
        sample_maximizer=normalize_weighting(w, full, z.n),
        full_support_exists=diag.exists_full_support_maximizer,
        all_maximizers_full_support=diag.all_maximizers_full_support,
        method=method,
        unique=unique,
    )


def maximize(z: SimilarityMatrix, cap: int = SUBSET_CAP) -> MaximizationResult:
    """Fast path when one applies, exhaustive sweep otherwise."""
    result = maximize_fast_path(z)
    if result is not None:
        return result
    return maximize_exhaustive(z, cap=cap)
