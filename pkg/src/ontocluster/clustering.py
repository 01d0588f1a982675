"""Parameter-free clustering: a genetic algorithm over variable-k centroid
sets with Lloyd refinement, plus the plain Lloyd k-means it is built on.

No cluster count is required from the caller: each individual carries its
own k, Lloyd steps polish it, and a Davies-Bouldin-based fitness (which
penalizes k implicitly) drives selection. Raw SSE is reported elsewhere but
never used to pick k.

All randomness is drawn from per-individual streams derived from
(seed, generation, index), so results are bit-identical for a fixed config
regardless of worker count.
"""

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DataError


class DegenerateDataWarning(UserWarning):
    """All records identical; the returned clustering is a formality."""


@dataclass(frozen=True)
class Clustering:
    """Assignment vector, centroid set and cluster count. Finalized form:
    every cluster id occurs and each centroid is its members' mean."""

    assignments: np.ndarray
    centroids: np.ndarray
    k: int

    def __post_init__(self):
        asg = np.array(self.assignments, dtype=np.int64, copy=True)
        cents = np.array(self.centroids, dtype=np.float64, copy=True)
        if asg.ndim != 1 or cents.ndim != 2:
            raise DataError("assignments must be 1-D and centroids 2-D")
        if self.k < 1 or cents.shape[0] != self.k:
            raise DataError(f"k={self.k} does not match {cents.shape[0]} centroids")
        counts = np.bincount(asg, minlength=self.k)
        if asg.size and (asg.min() < 0 or asg.max() >= self.k):
            raise DataError("assignment ids outside 0..k-1")
        if np.any(counts == 0):
            raise DataError("finalized clustering has an empty cluster")
        asg.flags.writeable = False
        cents.flags.writeable = False
        object.__setattr__(self, "assignments", asg)
        object.__setattr__(self, "centroids", cents)


@dataclass
class GAConfig:
    """Knobs for genetic_cluster. The defaults make the CLI parameter-free;
    k_max=None resolves to min(60, max(2, round(sqrt(n))))."""

    population_size: int = 30
    generations: int = 50
    k_min: int = 2
    k_max: int | None = None
    tournament_size: int = 2
    elitism_count: int = 1
    centroid_mutation_prob: float = 0.1
    centroid_mutation_sigma: float = 0.05
    k_mutation_prob: float = 0.1
    refinement_iterations: int = 3
    seed: int = 0
    workers: int = 1

    def resolved_k_max(self, n: int) -> int:
        if self.k_max is not None:
            return self.k_max
        return min(60, max(2, round(math.sqrt(n))))


@dataclass
class GAStats:
    """Bookkeeping from one genetic_cluster run."""

    best_fitness: list  # best population fitness, initial generation first
    k: int
    fitness: float
    degenerate: bool = False


def _as_values(data) -> np.ndarray:
    x = np.asarray(getattr(data, "values", data), dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
        raise DataError(f"expected an n x d matrix, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DataError("data contains non-finite values")
    return x


def _sq_distances(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances, records x centroids."""
    d2 = (
        np.sum(x * x, axis=1)[:, None]
        + np.sum(centroids * centroids, axis=1)[None, :]
        - 2.0 * (x @ centroids.T)
    )
    np.maximum(d2, 0.0, out=d2)
    return d2


def _means(x: np.ndarray, asg: np.ndarray, k: int) -> np.ndarray:
    counts = np.bincount(asg, minlength=k).astype(np.float64)
    sums = np.empty((k, x.shape[1]), dtype=np.float64)
    for j in range(x.shape[1]):
        sums[:, j] = np.bincount(asg, weights=x[:, j], minlength=k)
    return sums / counts[:, None]


def _sse(x: np.ndarray, asg: np.ndarray, centroids: np.ndarray) -> float:
    diffs = x - centroids[asg]
    return float(np.sum(diffs * diffs))


def _repair_empty(d2: np.ndarray, asg: np.ndarray, k: int) -> None:
    """Give every empty cluster the point farthest from its current
    centroid (ties: lowest record index), never emptying the donor."""
    counts = np.bincount(asg, minlength=k)
    for j in np.flatnonzero(counts == 0):
        cur = d2[np.arange(asg.size), asg]
        cur[counts[asg] < 2] = -np.inf
        p = int(np.argmax(cur))
        if not np.isfinite(cur[p]):
            continue  # nothing can donate; leave for the caller's validation
        counts[asg[p]] -= 1
        asg[p] = j
        counts[j] = 1


def _lloyd(x, centroids, max_iterations, tolerance, sse_trace=None):
    """Lloyd iteration with deterministic tie-breaks and empty-cluster
    repair. Returns (assignments, centroids, iterations_run)."""
    centroids = np.array(centroids, dtype=np.float64, copy=True)
    k = centroids.shape[0]
    prev_asg = None
    it = 0
    for it in range(1, max_iterations + 1):
        d2 = _sq_distances(x, centroids)
        asg = np.argmin(d2, axis=1)  # ties -> lowest centroid index
        _repair_empty(d2, asg, k)
        new_centroids = _means(x, asg, k)
        if sse_trace is not None:
            sse_trace.append(_sse(x, asg, new_centroids))
        shift = float(np.max(np.linalg.norm(new_centroids - centroids, axis=1)))
        centroids = new_centroids
        if prev_asg is not None and np.array_equal(asg, prev_asg):
            break
        prev_asg = asg
        if shift < tolerance:
            break
    return asg, centroids, it


def kmeans(
    data,
    initial_centroids,
    max_iterations: int = 100,
    tolerance: float = 1e-9,
) -> Clustering:
    """Plain Lloyd k-means from explicit distinct starting centroids.

    Assignment uses squared Euclidean distance with ties going to the
    lowest centroid index; empty clusters seize the point farthest from its
    current centroid. SSE never increases across a full assign+update step.
    """
    x = _as_values(data)
    init = np.array(initial_centroids, dtype=np.float64, copy=True)
    if init.ndim != 2 or init.shape[1] != x.shape[1]:
        raise DataError("initial centroids must be k x d")
    if not np.all(np.isfinite(init)):
        raise DataError("initial centroids contain non-finite values")
    k = init.shape[0]
    if k < 1:
        raise DataError("need at least one initial centroid")
    if k > x.shape[0]:
        raise DataError(f"k={k} exceeds record count {x.shape[0]}")
    if np.unique(init, axis=0).shape[0] != k:
        raise DataError("initial centroids must be distinct")
    if max_iterations < 1:
        raise DataError("max_iterations must be >= 1")
    asg, cents, _ = _lloyd(x, init, max_iterations, tolerance)
    return Clustering(assignments=asg, centroids=cents, k=k)


def lloyd_sse_trace(data, initial_centroids, max_iterations=100, tolerance=1e-9):
    """Run kmeans and also return the SSE recorded after every full Lloyd
    step (used by the monotonicity checks)."""
    x = _as_values(data)
    trace: list[float] = []
    init = np.array(initial_centroids, dtype=np.float64)
    asg, cents, _ = _lloyd(x, init, max_iterations, tolerance, sse_trace=trace)
    return Clustering(assignments=asg, centroids=cents, k=init.shape[0]), trace


def fitness(data, c: Clustering) -> float:
    """1 / (1 + Davies-Bouldin index); higher is better, in (0, 1].

    DB = (1/k) * sum_i max_{j != i} (S_i + S_j) / M_ij with S_i the mean
    member distance to centroid i and M_ij the centroid distance. Any
    coincident centroid pair makes the clustering worthless: fitness 0.
    """
    x = _as_values(data)
    if c.k < 2:
        raise DataError("fitness requires k >= 2")
    m = np.sqrt(_sq_distances(c.centroids, c.centroids))
    off_diag = ~np.eye(c.k, dtype=bool)
    if np.any(m[off_diag] == 0.0):
        return 0.0
    member_dist = np.linalg.norm(x - c.centroids[c.assignments], axis=1)
    scatter = np.bincount(c.assignments, weights=member_dist, minlength=c.k)
    scatter /= np.bincount(c.assignments, minlength=c.k)
    ratios = (scatter[:, None] + scatter[None, :]) / np.where(off_diag, m, np.inf)
    db = float(np.mean(np.max(np.where(off_diag, ratios, -np.inf), axis=1)))
    return 1.0 / (1.0 + db)


# --- GA internals -----------------------------------------------------------


def _rng_for(seed: int, generation: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, generation, index])


def _init_genes(rng, x, unique_rows, k_min, k_max):
    k = int(rng.integers(k_min, k_max + 1))
    if unique_rows.shape[0] >= k:
        idx = rng.choice(unique_rows.shape[0], size=k, replace=False)
        return unique_rows[np.sort(idx)].copy()
    idx = rng.choice(x.shape[0], size=k, replace=False)
    return x[np.sort(idx)].copy()


def _tournament(rng, fitnesses, tournament_size):
    idx = rng.choice(len(fitnesses), size=tournament_size, replace=False)
    return min(idx, key=lambda i: (-fitnesses[i], i))


def _crossover(a: np.ndarray, b: np.ndarray, k_max: int) -> np.ndarray:
    """Union of the parents' centroids; exact duplicates collapse, then the
    closer of the nearest pair is dropped until the count fits k_max."""
    merged = np.vstack([a, b])
    seen = set()
    keep = []
    for i, row in enumerate(merged):
        key = row.tobytes()
        if key not in seen:
            seen.add(key)
            keep.append(i)
    merged = merged[keep]
    while merged.shape[0] > k_max:
        d2 = _sq_distances(merged, merged)
        np.fill_diagonal(d2, np.inf)
        flat = int(np.argmin(d2))  # ties -> lexicographically first pair
        i, j = divmod(flat, merged.shape[0])
        merged = np.delete(merged, max(i, j), axis=0)
    return merged


def _mutate(genes, rng, x, cfg, k_max):
    out = genes.copy()
    for r in range(out.shape[0]):
        if rng.random() < cfg.centroid_mutation_prob:
            jitter = rng.normal(0.0, cfg.centroid_mutation_sigma, out.shape[1])
            out[r] = np.clip(out[r] + jitter, 0.0, 1.0)
    k = out.shape[0]
    if rng.random() < cfg.k_mutation_prob and not (k == cfg.k_min == k_max):
        if k >= k_max:
            grow = False
        elif k <= cfg.k_min:
            grow = True
        else:
            grow = rng.random() < 0.5
        if grow:
            out = np.vstack([out, x[int(rng.integers(x.shape[0]))]])
        else:
            out = np.delete(out, int(rng.integers(k)), axis=0)
    return out


def _evaluate(x, genes, cfg):
    """Refine genes with a few Lloyd steps and score the finalized result."""
    asg, cents, _ = _lloyd(x, genes, cfg.refinement_iterations, 0.0)
    c = Clustering(assignments=asg, centroids=cents, k=cents.shape[0])
    return c, fitness(x, c)


def _validate_config(cfg, n):
    k_max = cfg.resolved_k_max(n)
    if cfg.population_size < 2:
        raise DataError("population_size must be >= 2")
    if not 2 <= cfg.k_min <= k_max <= n:
        raise DataError(
            f"need 2 <= k_min <= k_max <= n, got k_min={cfg.k_min}, "
            f"k_max={k_max}, n={n}"
        )
    if not 1 <= cfg.tournament_size <= cfg.population_size:
        raise DataError("tournament_size must be in 1..population_size")
    if not 0 <= cfg.elitism_count < cfg.population_size:
        raise DataError("elitism_count must be in 0..population_size-1")
    if cfg.refinement_iterations < 1:
        raise DataError("refinement_iterations must be >= 1")
    if cfg.workers < 1:
        raise DataError("workers must be >= 1")
    return k_max


def _degenerate_clustering(x, k_min):
    n = x.shape[0]
    asg = np.minimum(np.arange(n), k_min - 1)
    return Clustering(assignments=asg, centroids=_means(x, asg, k_min), k=k_min)


def genetic_cluster_detailed(data, cfg: GAConfig | None = None):
    """genetic_cluster plus run statistics. Returns (Clustering, GAStats)."""
    x = _as_values(data)
    cfg = cfg if cfg is not None else GAConfig()
    n = x.shape[0]
    if n < cfg.k_min:
        raise DataError(f"{n} records cannot form {cfg.k_min} clusters")
    k_max = _validate_config(cfg, n)

    if np.all(x == x[0]):
        warnings.warn(
            "all records identical; returning a trivial clustering",
            DegenerateDataWarning,
            stacklevel=2,
        )
        c = _degenerate_clustering(x, cfg.k_min)
        return c, GAStats(best_fitness=[0.0], k=c.k, fitness=0.0, degenerate=True)

    unique_rows = np.unique(x, axis=0)

    def evaluate_batch(genes_list):
        if cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                return list(pool.map(lambda g: _evaluate(x, g, cfg), genes_list))
        return [_evaluate(x, g, cfg) for g in genes_list]

    genes = [
        _init_genes(_rng_for(cfg.seed, 0, i), x, unique_rows, cfg.k_min, k_max)
        for i in range(cfg.population_size)
    ]
    population = evaluate_batch(genes)
    fitnesses = [f for _, f in population]
    best_per_gen = [max(fitnesses)]

    for gen in range(1, cfg.generations + 1):
        order = sorted(range(len(population)), key=lambda i: (-fitnesses[i], i))
        elites = [population[i] for i in order[: cfg.elitism_count]]
        offspring_genes = []
        for j in range(cfg.population_size - cfg.elitism_count):
            rng = _rng_for(cfg.seed, gen, j)
            p1 = _tournament(rng, fitnesses, cfg.tournament_size)
            p2 = _tournament(rng, fitnesses, cfg.tournament_size)
            child = _crossover(
                population[p1][0].centroids, population[p2][0].centroids, k_max
            )
            offspring_genes.append(_mutate(child, rng, x, cfg, k_max))
        population = elites + evaluate_batch(offspring_genes)
        fitnesses = [f for _, f in population]
        best_per_gen.append(max(fitnesses))

    best_i = min(range(len(population)), key=lambda i: (-fitnesses[i], i))
    best_c, _ = population[best_i]
    # converge the winner fully so one more Lloyd pass is a no-op
    asg, cents, _ = _lloyd(x, best_c.centroids, 200, 1e-12)
    final = Clustering(assignments=asg, centroids=cents, k=cents.shape[0])
    final_fit = fitness(x, final)
    stats = GAStats(best_fitness=best_per_gen, k=final.k, fitness=final_fit)
    return final, stats


def genetic_cluster(data, cfg: GAConfig | None = None) -> Clustering:
    """Cluster without specifying k: GA over variable-k centroid sets,
    refined by Lloyd steps, selected by Davies-Bouldin fitness.
    Deterministic for a fixed cfg (seed and all), whatever cfg.workers is.
    """
    c, _ = genetic_cluster_detailed(data, cfg)
    return c
