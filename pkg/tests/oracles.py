"""Independent reference implementations used to check the package.

Everything in this module is deliberately written with plain Python loops,
dicts and math.fsum, sharing no code with ontocluster itself. Tests compare
the fast implementations against these slow ones.
"""

from itertools import product
from math import fsum


def minmax_oracle(column):
    """Min-max rescale a 1-D sequence to [0, 1] the obvious way."""
    lo = min(column)
    hi = max(column)
    if hi == lo:
        raise ValueError("constant column")
    return [(v - lo) / (hi - lo) for v in column]


def recursive_average_oracle(records, concepts, level):
    """Project records onto one ontology level by recursive child-averaging.

    ``records`` is a list of dicts mapping column name -> value.
    ``concepts`` is a list of dicts with keys ``name``, ``level``, ``parent``
    (parent name or None for top) and ``column`` (level-1 only), in
    declaration order. Returns a list of per-record dicts keyed by the names
    of the concepts at ``level``.

    The value of a level-1 concept is its bound column; the value of a
    concept at level l > 1 is the plain mean of its children's level-(l-1)
    values. This is intentionally NOT a flat mean over leaf descendants.
    """
    by_name = {c["name"]: c for c in concepts}
    children = {c["name"]: [] for c in concepts}
    for c in concepts:
        if c["parent"] is not None:
            children[c["parent"]].append(c["name"])

    def value(name, record):
        c = by_name[name]
        if c["level"] == 1:
            return record[c["column"]]
        vals = [value(ch, record) for ch in children[name]]
        return fsum(vals) / len(vals)

    names = [c["name"] for c in concepts if c["level"] == level]
    return [{n: value(n, rec) for n in names} for rec in records]


def sse_oracle(points, assignments):
    """Straight double-loop SSE: sum over clusters of squared distances to
    the member mean."""
    clusters = {}
    for row, cid in zip(points, assignments):
        clusters.setdefault(cid, []).append(row)
    total = []
    for members in clusters.values():
        dim = len(members[0])
        mean = [fsum(m[j] for m in members) / len(members) for j in range(dim)]
        for m in members:
            total.append(fsum((m[j] - mean[j]) ** 2 for j in range(dim)))
    return fsum(total)


def enumerate_partitions(n, k):
    """Yield every assignment of n items into exactly k non-empty clusters,
    one representative per unlabeled partition (canonical label order)."""
    for asg in product(range(k), repeat=n):
        if len(set(asg)) != k:
            continue
        # keep only canonically labeled vectors so each set partition
        # appears exactly once
        seen = []
        canonical = True
        for cid in asg:
            if cid not in seen:
                if cid != len(seen):
                    canonical = False
                    break
                seen.append(cid)
        if canonical:
            yield asg


def min_sse_partition(points, k):
    """Exhaustive-search minimum SSE over all partitions of ``points`` into
    exactly k non-empty clusters. Returns (best_sse, best_assignment)."""
    best = None
    best_asg = None
    for asg in enumerate_partitions(len(points), k):
        s = sse_oracle(points, asg)
        if best is None or s < best:
            best = s
            best_asg = asg
    return best, best_asg


def optimal_partition_set_1d(column, k, rel_gap=1e-9):
    """All SSE-optimal partitions of a 1-D column into k clusters.

    Returns (argmin set as frozensets-of-index-frozensets, gap_ok) where
    gap_ok is False when the best and the runner-up SSE are too close to
    call apart in floating point.
    """
    points = [(v,) for v in column]
    scored = []
    for asg in enumerate_partitions(len(points), k):
        scored.append((sse_oracle(points, asg), asg))
    scored.sort(key=lambda t: t[0])
    best = scored[0][0]
    tol = rel_gap * (1.0 + abs(best))
    optima = {
        frozenset(
            frozenset(i for i, c in enumerate(asg) if c == cid)
            for cid in set(asg)
        )
        for s, asg in scored
        if s <= best + tol
    }
    strictly_worse = [s for s, _ in scored if s > best + tol]
    gap_ok = not strictly_worse or strictly_worse[0] > best + 10 * tol
    return optima, gap_ok


def davies_bouldin_oracle(points, assignments, centroids):
    """Literal Davies-Bouldin index: (1/k) sum_i max_{j!=i} (S_i+S_j)/M_ij,
    with S = mean Euclidean member distance to centroid."""
    k = len(centroids)
    dim = len(centroids[0])

    def dist(a, b):
        return fsum((a[j] - b[j]) ** 2 for j in range(dim)) ** 0.5

    scatter = []
    for cid in range(k):
        members = [p for p, a in zip(points, assignments) if a == cid]
        scatter.append(fsum(dist(m, centroids[cid]) for m in members) / len(members))
    worst = []
    for i in range(k):
        ratios = []
        for j in range(k):
            if j == i:
                continue
            m = dist(centroids[i], centroids[j])
            if m == 0.0:
                return None  # coincident centroids: caller expects fitness 0
            ratios.append((scatter[i] + scatter[j]) / m)
        worst.append(max(ratios))
    return fsum(worst) / k
