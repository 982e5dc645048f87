"""Shared fixtures-in-code: canonical matrices and random instance makers."""

import numpy as np

from maxdiv import Distribution, FiniteMetric, ReflexiveGraph, SimilarityMatrix

# Three-species community (one newt, two similar frogs).  The unique
# weighting is (55/79, 30/79, 30/79), giving magnitude 115/79 and the
# maximizing distribution (11/23, 6/23, 6/23) ~ (0.478, 0.261, 0.261).
THREE_SPECIES = np.array([
    [1.0, 0.4, 0.4],
    [0.4, 1.0, 0.9],
    [0.4, 0.9, 1.0],
])
THREE_SPECIES_WEIGHTING = np.array([55 / 79, 30 / 79, 30 / 79])
THREE_SPECIES_MAGNITUDE = 115 / 79
THREE_SPECIES_MAXIMIZER = np.array([11 / 23, 6 / 23, 6 / 23])

# Two genera in one family plus a second family with one genus:
# 1 on the diagonal, 0.8 within a genus, 0.5 within a family, 0 otherwise.
TAXONOMIC = np.array([
    [1.0, 0.8, 0.5, 0.0, 0.0],
    [0.8, 1.0, 0.5, 0.0, 0.0],
    [0.5, 0.5, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0, 0.8],
    [0.0, 0.0, 0.0, 0.8, 1.0],
])

# Upper-triangular counterexample: no symmetric theory applies.
NONSYM = np.array([[1.0, 0.5], [0.0, 1.0]])

ALL_ONES_2 = np.array([[1.0, 1.0], [1.0, 1.0]])


def path_graph(n):
    return ReflexiveGraph(n, [(i, i + 1) for i in range(n - 1)])


def path_adjacency(n):
    from maxdiv import adjacency_matrix

    return adjacency_matrix(path_graph(n))


def random_symmetric(rng, n, lo=0.0, hi=1.0, unit_diag=True):
    a = rng.uniform(lo, hi, size=(n, n))
    z = (a + a.T) / 2.0
    if unit_diag:
        np.fill_diagonal(z, 1.0)
    else:
        np.fill_diagonal(z, rng.uniform(max(lo, 0.1), hi + 0.5, size=n))
    return SimilarityMatrix(z)


def random_distribution(rng, n, zero_prob=0.3):
    p = rng.uniform(0.0, 1.0, size=n)
    mask = rng.uniform(size=n) < zero_prob
    if mask.all():
        mask[rng.integers(n)] = False
    p[mask] = 0.0
    return Distribution(p / p.sum())


def random_ultrametric(rng, n, min_gap=0.02):
    """Random ultrametric similarity matrix via agglomerative merges with
    strictly decreasing similarity levels."""
    while True:
        levels = np.sort(rng.uniform(0.05, 0.95, size=n - 1))[::-1]
        if n == 1 or (levels.size < 2 or np.min(-np.diff(levels)) >= min_gap):
            if levels.size == 0 or levels.max() <= 0.95:
                break
    z = np.eye(n)
    clusters = [[i] for i in range(n)]
    for level in levels:
        a, b = rng.choice(len(clusters), size=2, replace=False)
        a, b = min(a, b), max(a, b)
        for i in clusters[a]:
            for j in clusters[b]:
                z[i, j] = z[j, i] = level
        clusters[a] = clusters[a] + clusters[b]
        del clusters[b]
    return SimilarityMatrix(z)


def random_sdd(rng, n):
    """Random strictly diagonally dominant similarity matrix, unit diagonal."""
    a = rng.uniform(0.0, 1.0, size=(n, n))
    off = (a + a.T) / 2.0
    np.fill_diagonal(off, 0.0)
    worst = off.sum(axis=1).max()
    if worst > 0:
        off *= rng.uniform(0.2, 0.95) / worst
    return SimilarityMatrix(off + np.eye(n))


def random_psd(rng, n):
    """Random positive semidefinite matrix with nonnegative entries and
    positive diagonal (Gram matrix of nonnegative vectors)."""
    k = int(rng.integers(1, n + 1))
    g = rng.uniform(0.05, 1.0, size=(k, n))
    return SimilarityMatrix(g.T @ g)


def random_duplicated_psd(rng, n):
    """Random singular-but-consistent PSD matrix: a strictly diagonally
    dominant base with some species duplicated, so the weighting space has a
    nontrivial kernel but Z w = 1 stays solvable."""
    k = int(rng.integers(1, n))
    base = random_sdd(rng, k).values
    assignment = np.concatenate([np.arange(k), rng.integers(0, k, size=n - k)])
    rng.shuffle(assignment)
    return SimilarityMatrix(base[np.ix_(assignment, assignment)])


def random_graph(rng, n, edge_prob=0.4):
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.uniform() < edge_prob
    ]
    return ReflexiveGraph(n, edges)


def random_planar_metric(rng, n, box=3.0):
    pts = rng.uniform(0.0, box, size=(n, 2))
    diff = pts[:, None, :] - pts[None, :, :]
    return FiniteMetric(np.sqrt((diff**2).sum(axis=2)))
