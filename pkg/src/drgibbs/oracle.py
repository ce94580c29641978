"""Brute-force ground truth on explicitly constructed graphs.

Two families are built vertex by vertex: subspace graphs over F_q (vertices
are the d-dimensional subspaces of F_q^n, adjacent when the intersection has
dimension d-1) and matrix graphs (vertices are the d x e matrices over F_q,
adjacent when the difference has rank 1).  Distances come from breadth-first
level expansion, intersection numbers from direct counting over the distance
partition (constancy is verified, not assumed), spectra from a dense
symmetric eigensolve with an explicit residual check, and Gibbs/quantum
quantities from the defining matrix expressions.  Everything here is
independent of the closed-form layer and is used to cross-validate it.

Field arithmetic is implemented for prime q in {2, 3}.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .params import IntersectionArray
from .qseries import as_fraction

_SIZE_BOUND = 2000
_EIG_TOL = 1e-7


@dataclass(frozen=True)
class GraphInstance:
    n_vertices: int
    adjacency: np.ndarray  # uint8, symmetric, zero diagonal
    distance: np.ndarray  # int16, from BFS
    diameter: int


def _bfs_distances(adjacency: np.ndarray) -> np.ndarray:
    """All-pairs distances by simultaneous breadth-first level expansion."""
    n = adjacency.shape[0]
    adj = adjacency.astype(np.float64)
    reached = np.eye(n, dtype=bool)
    dist = np.where(reached, 0, -1).astype(np.int16)
    level = 0
    while True:
        frontier = (reached.astype(np.float64) @ adj) > 0
        newly = frontier & ~reached
        if not newly.any():
            break
        level += 1
        dist[newly] = level
        reached |= newly
    if (dist < 0).any():
        raise ValueError("graph is not connected")
    return dist


def _finish(adjacency: np.ndarray) -> GraphInstance:
    n = adjacency.shape[0]
    if n > _SIZE_BOUND:
        raise ValueError(f"size bound exceeded: {n} > {_SIZE_BOUND}")
    if (adjacency != adjacency.T).any() or adjacency.diagonal().any():
        raise ValueError("adjacency must be symmetric with zero diagonal")
    dist = _bfs_distances(adjacency)
    return GraphInstance(n, adjacency, dist, int(dist.max()))


# ---------------------------------------------------------------------------
# subspace graphs


def _rref_matrices(q: int, n: int, d: int):
    """All d x n matrices over F_q in reduced row-echelon form of rank d."""
    for pivots in itertools.combinations(range(n), d):
        free_cols = []
        for row in range(d):
            cols = [
                col
                for col in range(pivots[row] + 1, n)
                if col not in pivots
            ]
            free_cols.append(cols)
        slots = [(row, col) for row in range(d) for col in free_cols[row]]
        for values in itertools.product(range(q), repeat=len(slots)):
            mat = [[0] * n for _ in range(d)]
            for row in range(d):
                mat[row][pivots[row]] = 1
            for (row, col), v in zip(slots, values):
                mat[row][col] = v
            yield mat


def _point_index(q: int, n: int) -> dict:
    """Index of projective points: nonzero vectors up to scalar, first
    nonzero coordinate normalized to 1."""
    index = {}
    for vec in itertools.product(range(q), repeat=n):
        if not any(vec):
            continue
        lead = next(v for v in vec if v)
        if lead != 1:
            continue
        index[vec] = len(index)
    return index


def _scale(vec, s, q):
    return tuple((s * v) % q for v in vec)


def _normalize_point(vec, q):
    lead = next(v for v in vec if v)
    inv = 1 if lead == 1 else pow(lead, q - 2, q)
    return _scale(vec, inv, q)


def _span_mask(rows, q: int, n: int, index: dict) -> int:
    """Bitmask over projective points contained in the row span."""
    mask = 0
    d = len(rows)
    for coeffs in itertools.product(range(q), repeat=d):
        if not any(coeffs):
            continue
        vec = tuple(
            sum(c * rows[r][col] for r, c in enumerate(coeffs)) % q
            for col in range(n)
        )
        mask |= 1 << index[_normalize_point(vec, q)]
    return mask


def build_grassmann(q: int, n: int, d: int) -> GraphInstance:
    """Subspace graph: d-subspaces of F_q^n, adjacent when dim(x & y) = d-1."""
    if q not in (2, 3):
        raise ValueError("field size must be the prime 2 or 3")
    if not 1 <= d <= n:
        raise ValueError("need 1 <= d <= n")
    index = _point_index(q, n)
    masks = [_span_mask(rows, q, n, index) for rows in _rref_matrices(q, n, d)]
    m = len(masks)
    if m > _SIZE_BOUND:
        raise ValueError(f"size bound exceeded: {m} > {_SIZE_BOUND}")
    target = (q ** (d - 1) - 1) // (q - 1)  # projective size of a (d-1)-subspace
    adjacency = np.zeros((m, m), dtype=np.uint8)
    for i in range(m):
        mi = masks[i]
        for j in range(i + 1, m):
            if (mi & masks[j]).bit_count() == target:
                adjacency[i, j] = adjacency[j, i] = 1
    return _finish(adjacency)


# ---------------------------------------------------------------------------
# matrix graphs


def _rank_one_matrices(q: int, d: int, e: int):
    """All d x e rank-one matrices over F_q, as flat tuples."""
    seen = set()
    for u in itertools.product(range(q), repeat=d):
        if not any(u):
            continue
        for v in itertools.product(range(q), repeat=e):
            if not any(v):
                continue
            flat = tuple((u[r] * v[c]) % q for r in range(d) for c in range(e))
            seen.add(flat)
    return sorted(seen)


def build_bilinear(q: int, d: int, e: int) -> GraphInstance:
    """Matrix graph: d x e matrices over F_q, adjacent when rank(x - y) = 1."""
    if q not in (2, 3):
        raise ValueError("field size must be the prime 2 or 3")
    if d < 1 or e < 1:
        raise ValueError("matrix shape must be positive")
    if q ** (d * e) > _SIZE_BOUND:
        raise ValueError(f"size bound exceeded: {q ** (d * e)} > {_SIZE_BOUND}")
    vertices = list(itertools.product(range(q), repeat=d * e))
    index = {v: i for i, v in enumerate(vertices)}
    rank_one = _rank_one_matrices(q, d, e)
    n = len(vertices)
    adjacency = np.zeros((n, n), dtype=np.uint8)
    for i, x in enumerate(vertices):
        for r in rank_one:
            y = tuple((a + b) % q for a, b in zip(x, r))
            adjacency[i, index[y]] = 1
    return _finish(adjacency)


# ---------------------------------------------------------------------------
# empirical quantities


def empirical_intersection(g: GraphInstance) -> IntersectionArray:
    """Count a_i, b_i, c_i over the distance partition; constancy is required."""
    dmax = g.diameter
    # counts are small integers, exact in float64; integer matmul lacks BLAS
    adj = g.adjacency.astype(np.float64)
    shells = [(g.distance == i) for i in range(dmax + 2)]
    b_seq, c_seq, a_seq = [], [], []
    for i in range(dmax + 1):
        pairs = shells[i]
        counts = {}
        for name, shell in (("c", i - 1), ("a", i), ("b", i + 1)):
            if shell < 0:
                counts[name] = np.zeros_like(adj)
            else:
                counts[name] = shells[shell].astype(np.float64) @ adj
        row = {}
        for name in ("c", "a", "b"):
            values = np.unique(counts[name][pairs])
            if len(values) != 1:
                raise ValueError(
                    f"graph is not distance-regular: {name}_{i} takes values {values}"
                )
            row[name] = int(values[0])
        c_seq.append(row["c"])
        a_seq.append(row["a"])
        b_seq.append(row["b"])
    k = b_seq[0]
    k_seq = [Fraction(1)]
    for i in range(1, dmax + 1):
        k_seq.append(k_seq[-1] * b_seq[i - 1] / c_seq[i])
    return IntersectionArray(
        tuple(Fraction(x) for x in b_seq),
        tuple(Fraction(x) for x in c_seq),
        tuple(Fraction(x) for x in a_seq),
        tuple(k_seq),
        Fraction(k),
    )


def empirical_spectrum(g: GraphInstance):
    """Distinct eigenvalues (clustered at 1e-7) with multiplicities.

    The dense symmetric eigensolve is verified by the residual bound
    ||A v - lambda v|| <= 1e-8 ||v|| per eigenpair; clusters separated by
    less than ten times the clustering tolerance are rejected as ambiguous.
    """
    a = g.adjacency.astype(np.float64)
    eigenvalues, vectors = np.linalg.eigh(a)
    residual = a @ vectors - vectors * eigenvalues
    worst = np.linalg.norm(residual, axis=0).max()
    if worst > 1e-8:
        raise RuntimeError(f"eigensolver residual {worst} exceeds 1e-8")
    clusters = [[eigenvalues[0]]]
    for lam in eigenvalues[1:]:
        if lam - clusters[-1][-1] <= _EIG_TOL:
            clusters[-1].append(lam)
        else:
            if lam - clusters[-1][-1] < 10 * _EIG_TOL:
                raise RuntimeError(
                    f"eigenvalue gap {lam - clusters[-1][-1]} is ambiguous "
                    f"at tolerance {_EIG_TOL}"
                )
            clusters.append([lam])
    values = [float(np.mean(c)) for c in clusters]
    mults = [len(c) for c in clusters]
    return values, mults


def _gibbs_kernel(g: GraphInstance, t: float) -> np.ndarray:
    dist = g.distance.astype(np.float64)
    if t == 0.0:
        return (g.distance == 0).astype(np.float64)
    return np.asarray(t, dtype=np.float64) ** dist


def _normalization(g: GraphInstance, t: float):
    ia = empirical_intersection(g)
    k = float(ia.k)
    a1 = float(ia.a_seq[1]) if g.diameter >= 1 else 0.0
    mean = t * k
    variance = k * (1 - t) * (1 + t + t * a1)
    return mean, variance


def empirical_gibbs(g: GraphInstance, t, m_max: int) -> list[float]:
    """Moments tr(K_t M^m)/|X| of the normalized adjacency M, m = 0..m_max."""
    t = float(as_fraction(t) if not isinstance(t, float) else t)
    n = g.n_vertices
    mean, variance = _normalization(g, t)
    if variance <= 0:
        raise ValueError(f"variance {variance} must be positive at t = {t}")
    sigma = math.sqrt(variance)
    kernel = _gibbs_kernel(g, t)
    m_mat = (g.adjacency.astype(np.float64) - mean * np.eye(n)) / sigma
    moments = []
    power = np.eye(n)
    for m in range(m_max + 1):
        if m:
            power = power @ m_mat
        moments.append(float(np.sum(kernel * power)) / n)
    return moments


def empirical_quantum_components(g: GraphInstance, base_vertex: int, t, word) -> float:
    """Evaluate the Gibbs functional on a word in the scaled quantum components.

    Components are split by distance to the base vertex o: the raising part
    keeps entries (x, y) with dist(x, o) = dist(y, o) + 1, the lowering part
    the opposite, and the flat part ties.  The first letter acts first.
    """
    t = float(as_fraction(t) if not isinstance(t, float) else t)
    letters = tuple(word)
    n = g.n_vertices
    mean, variance = _normalization(g, t)
    if variance <= 0:
        raise ValueError(f"variance {variance} must be positive at t = {t}")
    sigma = math.sqrt(variance)
    to_base = g.distance[base_vertex]
    adj = g.adjacency.astype(np.float64)
    diff = to_base[:, None] - to_base[None, :]
    vec = np.zeros(n)
    vec[base_vertex] = 1.0
    for ch in letters:
        if ch == "+":
            op = adj * (diff == 1)
            vec = op @ vec / sigma
        elif ch == "-":
            op = adj * (diff == -1)
            vec = op @ vec / sigma
        elif ch == "o":
            op = adj * (diff == 0)
            vec = (op @ vec - mean * vec) / sigma
        else:
            raise ValueError(f"word letters must be in ('+', '-', 'o'), got {ch!r}")
    weights = np.asarray(t, dtype=np.float64) ** to_base if t else (to_base == 0)
    return float(weights @ vec)


def dump_adjacency(g: GraphInstance) -> str:
    """Edge list as newline-delimited 'u v' pairs, 0-indexed."""
    lines = []
    upper = np.argwhere(np.triu(g.adjacency, 1) > 0)
    for u, v in upper:
        lines.append(f"{u} {v}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# named battery and formula-layer equivalence

BATTERY = {
    "j2_4_2": ("grassmann", (2, 4, 2)),
    "j2_5_2": ("grassmann", (2, 5, 2)),
    "j3_4_2": ("grassmann", (3, 4, 2)),
    "j2_6_3": ("grassmann", (2, 6, 3)),
    "bil_2x2_2": ("bilinear", (2, 2, 2)),
    "bil_2x3_2": ("bilinear", (2, 2, 3)),
    "bil_2x3_3": ("bilinear", (3, 2, 3)),
}


def battery_params(key: str):
    """Classical parameters matching a battery instance."""
    from .params import ClassicalParams
    from .qseries import gauss_bracket

    kind, args = BATTERY[key]
    if kind == "grassmann":
        q, n, d = args
        return ClassicalParams(d, q, Fraction(q), q * gauss_bracket(n - d, q))
    q, d, e = args
    return ClassicalParams(d, q, Fraction(q - 1), Fraction(q**e - 1))


def battery_instance(key: str) -> GraphInstance:
    kind, args = BATTERY[key]
    if kind == "grassmann":
        return build_grassmann(*args)
    return build_bilinear(*args)


def equivalence_report(key: str, tol: float = 1e-7) -> dict:
    """Compare every empirical quantity of a battery graph with the formula
    layer: intersection data, vertex count, spectrum, Gibbs moments at
    t = 1/q, positive semidefiniteness of the t = 1/q kernel, and quantum
    component words on small instances."""
    from .gibbs import gibbs_distribution, measure_moment
    from .params import intersection_array, spectral_table

    cp = battery_params(key)
    g = battery_instance(key)
    checks = []

    ia_emp = empirical_intersection(g)
    ia = intersection_array(cp)
    checks.append(("intersection_array", ia_emp == ia, f"k={ia.k}"))

    st = spectral_table(cp)
    checks.append(
        (
            "vertex_count",
            Fraction(g.n_vertices) == st.vertex_count,
            f"|X|={g.n_vertices}",
        )
    )

    values, mults = empirical_spectrum(g)
    pairs = sorted(zip(values, mults))
    formula_pairs = sorted(
        (float(th), int(m)) for th, m in zip(st.theta, st.mult)
    )
    spec_ok = len(pairs) == len(formula_pairs) and all(
        abs(e - f) <= tol and me == mf
        for (e, me), (f, mf) in zip(pairs, formula_pairs)
    )
    checks.append(("spectrum", spec_ok, f"{len(pairs)} distinct eigenvalues"))

    t = Fraction(1, cp.b)
    mu = gibbs_distribution(cp, st, t)
    emp_moments = empirical_gibbs(g, t, 8)
    mom_ok = all(
        abs(emp_moments[m] - measure_moment(mu, m)) <= 1e-9 * max(1.0, abs(emp_moments[m]))
        for m in range(9)
    )
    checks.append(("gibbs_moments", mom_ok, f"t={t}, m<=8"))

    kernel = _gibbs_kernel(g, float(t))
    min_eig = float(np.linalg.eigvalsh(kernel).min())
    checks.append(("kernel_psd", min_eig >= -1e-8, f"min eigenvalue {min_eig:.3e}"))

    if g.n_vertices <= 200:
        from .fock import mixed_moment_finite

        rng_words = ["+", "-", "o", "+-", "+o", "++--", "+o-o"]
        word_ok = True
        for w in rng_words:
            emp = empirical_quantum_components(g, 0, t, w)
            form = mixed_moment_finite(cp, st, t, w)
            if abs(emp - form) > 1e-9 * max(1.0, abs(form)):
                word_ok = False
        checks.append(("quantum_words", word_ok, f"{len(rng_words)} words"))

    return {
        "instance": key,
        "n_vertices": g.n_vertices,
        "diameter": g.diameter,
        "checks": [
            {"name": name, "ok": bool(ok), "detail": detail}
            for name, ok, detail in checks
        ],
        "ok": all(ok for _, ok, _ in checks),
    }
