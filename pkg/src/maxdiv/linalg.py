"""Dense linear algebra for small symmetric similarity matrices.

Everything here works at desk scale (n capped around 30): weighting-space
solves via row reduction with a declared pivot threshold, phase-1 LP
feasibility for nonnegative weightings, and the matrix-class predicates used
by the maximizer's fast paths.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InputError, NumericalError, PreconditionError

# Residual tolerance for weighting solves; matrices in scope have entries of
# order one, so this is comfortably above double-precision elimination error.
SOLVE_TOL = 1e-9
# Declared numerical rank: pivots at or below PIVOT_RTOL times the largest
# initial entry count as zero.
PIVOT_RTOL = 1e-10
# Eigenvalues above -PSD_FLOOR_RTOL * max|Z| count as nonnegative.
PSD_FLOOR_RTOL = 1e-9
# Minimum entry for a weighting to count as strictly positive.
POSITIVITY_EPS = 1e-11
# Simplex pivot cap for the feasibility LP.
LP_ITERATION_CAP = 10_000

_SYMMETRIZE_TOL = 1e-12


@dataclass(frozen=True)
class SimilarityMatrix:
    """Square matrix of nonnegative similarity coefficients, positive diagonal.

    Symmetry is detected at construction: if the values are symmetric within
    1e-12 they are averaged with their transpose so that the stored entries
    are bit-equal across the diagonal, and ``symmetric`` is set.  Asymmetric
    matrices are allowed (diversity evaluation does not need symmetry) unless
    ``require_symmetric`` is passed.
    """

    values: np.ndarray
    symmetric: bool = False

    def __init__(self, values, require_symmetric: bool = False):
        arr = np.array(values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise InputError(f"similarity matrix must be square, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise InputError("similarity matrix entries must be finite")
        if (arr < 0).any():
            i, j = np.argwhere(arr < 0)[0]
            raise InputError(f"similarity matrix entry ({i + 1},{j + 1}) is negative")
        d = np.diagonal(arr)
        if (d <= 0).any():
            i = int(np.argwhere(d <= 0)[0][0])
            raise InputError(f"similarity matrix diagonal entry {i + 1} must be positive")
        asym = float(np.abs(arr - arr.T).max())
        symmetric = asym <= _SYMMETRIZE_TOL
        if symmetric and asym > 0.0:
            arr = (arr + arr.T) / 2.0
        if require_symmetric and not symmetric:
            i, j = np.unravel_index(np.abs(arr - arr.T).argmax(), arr.shape)
            raise InputError(
                f"matrix is not symmetric: entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) "
                f"differ by {asym:.3g}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "symmetric", symmetric)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def sub(self, subset) -> np.ndarray:
        """Principal submatrix on the given (0-based) index list."""
        idx = np.asarray(subset, dtype=np.intp)
        return self.values[np.ix_(idx, idx)]


@dataclass(frozen=True)
class WeightingSolution:
    """Affine space of solutions of ``Z_B w = 1`` on a principal submatrix.

    ``particular`` is absent when the system is inconsistent (no weighting
    exists).  ``nullspace`` holds a kernel basis, one vector per row.
    ``nonnegative`` is a representative with all entries >= -SOLVE_TOL once
    one has been found, and ``magnitude`` the common entry sum of every
    weighting (well defined for symmetric submatrices).
    """

    subset: tuple[int, ...]
    particular: np.ndarray | None
    nullspace: np.ndarray
    nonnegative: np.ndarray | None = None
    magnitude: float | None = None

    @property
    def unique(self) -> bool:
        return self.particular is not None and self.nullspace.shape[0] == 0

    def with_nonnegative(self, w) -> "WeightingSolution":
        return replace(self, nonnegative=w)


def _rref(aug: np.ndarray, ncols: int, pivot_tol: float) -> list[int]:
    """In-place reduced row echelon form of ``aug`` over its first ``ncols``
    columns; returns the pivot column list."""
    rows = aug.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        piv = r + int(np.abs(aug[r:, c]).argmax())
        if abs(aug[piv, c]) <= pivot_tol:
            continue
        if piv != r:
            aug[[r, piv]] = aug[[piv, r]]
        aug[r] = aug[r] / aug[r, c]
        for rr in range(rows):
            if rr != r and aug[rr, c] != 0.0:
                aug[rr] = aug[rr] - aug[rr, c] * aug[r]
        pivots.append(c)
        r += 1
    return pivots


def _solve_affine(a: np.ndarray, b: np.ndarray):
    """Particular solution and kernel basis of ``a x = b``.

    Returns ``(particular | None, nullspace)``.  A particular solution is
    reported only if its residual passes SOLVE_TOL (one refinement step is
    attempted first), so an inconsistent system comes back as ``None``.
    """
    k = a.shape[0]
    pivot_tol = PIVOT_RTOL * float(np.abs(a).max())
    aug = np.concatenate([a, b[:, None]], axis=1).astype(np.float64)
    pivots = _rref(aug, k, pivot_tol)
    rank = len(pivots)
    free = [c for c in range(k) if c not in pivots]

    nullspace = np.zeros((len(free), k))
    for row, f in enumerate(free):
        nullspace[row, f] = 1.0
        for r, c in enumerate(pivots):
            nullspace[row, c] = -aug[r, f]

    # rows below the rank must have (near) zero right-hand side
    if rank < k and np.abs(aug[rank:, k]).max() > SOLVE_TOL:
        return None, nullspace

    x = np.zeros(k)
    for r, c in enumerate(pivots):
        x[c] = aug[r, k]
    resid = np.abs(a @ x - b).max() if k else 0.0
    if resid > SOLVE_TOL:
        # one step of iterative refinement through the same reduction
        aug2 = np.concatenate([a, (b - a @ x)[:, None]], axis=1).astype(np.float64)
        piv2 = _rref(aug2, k, pivot_tol)
        e = np.zeros(k)
        for r, c in enumerate(piv2):
            e[c] = aug2[r, k]
        x = x + e
        if np.abs(a @ x - b).max() > SOLVE_TOL:
            return None, nullspace
    return x, nullspace


def _check_subset(n: int, subset) -> tuple[int, ...]:
    idx = tuple(int(i) for i in subset)
    if not idx:
        raise PreconditionError("subset must be nonempty")
    if len(set(idx)) != len(idx):
        raise PreconditionError(f"subset has repeated indices: {idx}")
    if any(i < 0 or i >= n for i in idx):
        raise PreconditionError(f"subset {idx} out of range for n={n}")
    return tuple(sorted(idx))


def solve_weighting_space(z: SimilarityMatrix, subset=None) -> WeightingSolution:
    """Solve ``Z_B w = 1``: particular solution, kernel basis, magnitude.

    ``subset`` is a list of 0-based indices (defaults to all of them).
    Rank-deficient submatrices are a normal outcome; inconsistency is
    reported through an absent ``particular``.
    """
    if subset is None:
        subset = range(z.n)
    idx = _check_subset(z.n, subset)
    a = z.sub(idx)
    particular, nullspace = _solve_affine(a, np.ones(len(idx)))
    mag = float(particular.sum()) if particular is not None else None
    return WeightingSolution(idx, particular, nullspace, None, mag)


def _phase1_nonneg(x0: np.ndarray, basis: np.ndarray):
    """A point ``w = x0 + basis.T @ t`` with ``w >= 0``, or ``None``.

    Phase-1 simplex over the kernel coordinates with Bland's rule; raises
    NumericalError if the pivot cap is hit (distinct from infeasibility).
    """
    kb = x0.shape[0]
    kn = basis.shape[0]
    # variables: t+ (kn), t- (kn), w (kb), artificials (appended)
    nv = 2 * kn + kb
    rows = np.zeros((kb, nv))
    rows[:, :kn] = -basis.T
    rows[:, kn : 2 * kn] = basis.T
    rows[:, 2 * kn :] = np.eye(kb)
    rhs = x0.astype(np.float64).copy()
    neg = rhs < 0
    rows[neg] *= -1.0
    rhs[neg] *= -1.0

    art = np.flatnonzero(neg)
    tab = np.zeros((kb, nv + art.size + 1))
    tab[:, :nv] = rows
    tab[:, -1] = rhs
    basis_idx = np.empty(kb, dtype=np.intp)
    for j, r in enumerate(art):
        tab[r, nv + j] = 1.0
        basis_idx[r] = nv + j
    for r in np.flatnonzero(~neg):
        basis_idx[r] = 2 * kn + r  # w_r hosts the row

    # objective: minimize the artificial sum
    cost = np.zeros(nv + art.size + 1)
    cost[nv:-1] = 1.0
    obj = cost.copy()
    for r in np.flatnonzero(neg):
        obj -= tab[r]

    for _ in range(LP_ITERATION_CAP):
        entering = -1
        for j in range(nv):  # artificials never re-enter
            if obj[j] < -1e-12:
                entering = j
                break
        if entering < 0:
            break
        col = tab[:, entering]
        ratios = np.full(kb, np.inf)
        pos = col > 1e-12
        ratios[pos] = tab[pos, -1] / col[pos]
        leave = -1
        best = np.inf
        for r in range(kb):
            if ratios[r] < best - 1e-15 or (
                ratios[r] < best + 1e-15 and (leave < 0 or basis_idx[r] < basis_idx[leave])
            ):
                best = ratios[r]
                leave = r
        if leave < 0 or not np.isfinite(best):
            break  # unbounded entering column cannot happen with w-slack rows
        tab[leave] /= tab[leave, entering]
        for r in range(kb):
            if r != leave and tab[r, entering] != 0.0:
                tab[r] -= tab[r, entering] * tab[leave]
        obj -= obj[entering] * tab[leave]
        basis_idx[leave] = entering
    else:
        raise NumericalError("phase-1 LP exceeded the iteration cap")

    if -obj[-1] > 1e-9:
        return None
    t = np.zeros(kn)
    for r in range(kb):
        j = basis_idx[r]
        if j < kn:
            t[j] += tab[r, -1]
        elif j < 2 * kn:
            t[j - kn] -= tab[r, -1]
    return x0 + basis.T @ t


def find_nonnegative_weighting(ws: WeightingSolution) -> np.ndarray | None:
    """A weighting with all entries >= -SOLVE_TOL, or ``None`` if the affine
    solution space misses the nonnegative orthant (or is empty)."""
    if ws.particular is None:
        return None
    if ws.particular.min() >= -SOLVE_TOL:
        return ws.particular
    if ws.nullspace.shape[0] == 0:
        return None
    return _phase1_nonneg(ws.particular, ws.nullspace)


def find_positive_weighting(z: SimilarityMatrix, subset=None, eps: float = POSITIVITY_EPS):
    """A weighting with every entry >= ``eps`` on ``Z_B``, or ``None``.

    Substitutes ``w = eps + y`` and runs the same feasibility machinery on
    ``Z_B y = 1 - eps * Z_B 1``.
    """
    if subset is None:
        subset = range(z.n)
    idx = _check_subset(z.n, subset)
    a = z.sub(idx)
    b = 1.0 - eps * a.sum(axis=1)
    y0, nullspace = _solve_affine(a, b)
    if y0 is None:
        return None
    if y0.min() < -SOLVE_TOL and nullspace.shape[0] == 0:
        return None
    y = y0 if y0.min() >= -SOLVE_TOL else _phase1_nonneg(y0, nullspace)
    if y is None:
        return None
    return eps + np.maximum(y, 0.0)


def magnitude(z: SimilarityMatrix, subset=None) -> float | None:
    """Sum of the entries of any weighting on ``Z_B``; ``None`` if there is
    no weighting."""
    return solve_weighting_space(z, subset).magnitude


def _require_symmetric(z: SimilarityMatrix, what: str):
    if not z.symmetric:
        raise PreconditionError(f"{what} requires a symmetric matrix")


def is_positive_semidefinite(z: SimilarityMatrix) -> bool:
    _require_symmetric(z, "positive semidefiniteness test")
    floor = PSD_FLOOR_RTOL * float(np.abs(z.values).max())
    return bool(np.linalg.eigvalsh(z.values).min() >= -floor)


def is_positive_definite(z: SimilarityMatrix) -> bool:
    _require_symmetric(z, "positive definiteness test")
    floor = PSD_FLOOR_RTOL * float(np.abs(z.values).max())
    return bool(np.linalg.eigvalsh(z.values).min() > floor)


def is_ultrametric(z: SimilarityMatrix) -> bool:
    """``Z_ik >= min(Z_ij, Z_jk)`` for all triples, and every diagonal entry
    strictly exceeds every off-diagonal entry."""
    _require_symmetric(z, "ultrametric test")
    v = z.values
    n = z.n
    if n > 1:
        off = v[~np.eye(n, dtype=bool)]
        if v.diagonal().min() <= off.max():
            return False
    lows = np.minimum(v[:, :, None], v[None, :, :])  # min(Z_ij, Z_jk) at [i,j,k]
    return bool((v[:, None, :] >= lows).all())


def is_strictly_diagonally_dominant(z: SimilarityMatrix) -> bool:
    v = z.values
    d = v.diagonal()
    return bool((d > np.abs(v).sum(axis=1) - np.abs(d)).all())
