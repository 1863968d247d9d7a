"""Independent brute-force oracles used to cross-check the library.

Deliberately dumb implementations: path predicates follow the raw
definitions over exhaustively enumerated node sequences, equivalence
classes come from filtering all edge orientations, discrete evaluation
walks python dicts, and Gaussian covariances come from a matrix solve.
None of this shares code with the package under test.
"""

from __future__ import annotations

import itertools
import random

import networkx as nx
import numpy as np

from mpdagid import Pdag, close, InconsistentKnowledgeError


# --------------------------------------------------------------------------
# Paths by raw definition
# --------------------------------------------------------------------------


def simple_paths(g: Pdag, a: str, b: str):
    """Every simple path between a and b, by permutation enumeration."""
    others = [n for n in g.nodes if n not in (a, b)]
    for k in range(len(others) + 1):
        for mid in itertools.permutations(others, k):
            path = (a,) + mid + (b,)
            if all(g.adjacent(u, w) for u, w in zip(path, path[1:])):
                yield path


def possibly_causal(g: Pdag, path) -> bool:
    n = len(path)
    return not any(
        g.has_directed(path[j], path[i]) for i in range(n) for j in range(i + 1, n)
    )


def witness_exists(g: Pdag, X, Y) -> bool:
    """A proper possibly causal path from X to Y starting undirected."""
    xs, ys = set(X), set(Y)
    for x in xs:
        for y in ys:
            for path in simple_paths(g, x, y):
                if any(n in xs for n in path[1:]):
                    continue
                if not g.has_undirected(path[0], path[1]):
                    continue
                if possibly_causal(g, path):
                    return True
    return False


def possible_descendants(g: Pdag, xs) -> frozenset:
    out = set(xs)
    for x in set(xs):
        for w in g.nodes:
            if w in out or w == x:
                continue
            if any(possibly_causal(g, p) for p in simple_paths(g, x, w)):
                out.add(w)
    return frozenset(out)


# --------------------------------------------------------------------------
# Equivalence classes by filtering all orientations
# --------------------------------------------------------------------------


def unshielded_colliders(g: Pdag) -> frozenset:
    out = set()
    for b in g.nodes:
        for a, c in itertools.combinations(sorted(g.parents_of(b)), 2):
            if not g.adjacent(a, c):
                out.add((a, b, c))
    return frozenset(out)


def all_represented_dags(g: Pdag) -> set[frozenset]:
    """Directed-edge sets of every DAG with the skeleton and unshielded
    colliders of ``g`` that keeps all of g's directed edges."""
    und = sorted(g.undirected)
    base = set(g.directed)
    target_colliders = unshielded_colliders(g)
    out = set()
    for bits in itertools.product((0, 1), repeat=len(und)):
        edges = set(base)
        for (a, b), bit in zip(und, bits):
            edges.add((a, b) if bit == 0 else (b, a))
        try:
            cand = Pdag(g.nodes, directed=edges, class_tag="dag")
        except ValueError:
            continue
        if unshielded_colliders(cand) == target_colliders:
            out.add(frozenset(edges))
    return out


def to_networkx(dag: Pdag) -> nx.DiGraph:
    h = nx.DiGraph()
    h.add_nodes_from(dag.nodes)
    h.add_edges_from(dag.directed)
    return h


def dag_d_separated(dag: Pdag, X, Y, Z) -> bool:
    return nx.is_d_separator(to_networkx(dag), set(X), set(Y), set(Z))


# --------------------------------------------------------------------------
# Discrete evaluation over python dicts
# --------------------------------------------------------------------------


def gformula_dict(model, x_assign, Y) -> dict:
    """Truncated factorization by looping over configurations."""
    nodes = list(model.dag.nodes)
    cards = model.cards
    ys = sorted(Y)
    out: dict = {}
    for config in itertools.product(*[range(cards[n]) for n in nodes]):
        assign = dict(zip(nodes, config))
        if any(assign[k] != v for k, v in x_assign.items()):
            continue
        p = 1.0
        for v in nodes:
            if v in x_assign:
                continue
            pa = sorted(model.dag.parents_of(v))
            idx = (assign[v],) + tuple(assign[q] for q in pa)
            p *= float(model.cpts[v][idx])
        key = tuple(assign[y] for y in ys)
        out[key] = out.get(key, 0.0) + p
    return out


def table_as_dict(marginal) -> dict:
    out = {}
    for idx in itertools.product(*[range(s) for s in marginal.table.shape]):
        out[idx] = float(marginal.table[idx])
    return out


# --------------------------------------------------------------------------
# Gaussian covariance by matrix solve
# --------------------------------------------------------------------------


def sem_cov_linalg(model) -> np.ndarray:
    """(I - A)^-1 Omega (I - A)^-T for the SEM coefficient matrix A."""
    a = model.coefficient_matrix()
    omega = np.diag([model.noise_vars[n] for n in model.dag.nodes])
    inv = np.linalg.inv(np.eye(a.shape[0]) - a)
    return inv @ omega @ inv.T


def unit_variance_noise(dag: Pdag, coeffs: dict) -> dict:
    """Residual variances that make every SEM variable have variance one.

    Built incrementally in topological order: the variance contributed by
    the parents is a quadratic form in the already-fixed covariances.
    """
    order, placed = [], set()
    pending = list(dag.nodes)
    while pending:
        for n in pending:
            if dag.parents_of(n) <= placed:
                order.append(n)
                placed.add(n)
                pending.remove(n)
                break
    cov = {}
    noise = {}
    for v in order:
        pa = sorted(dag.parents_of(v))
        quad = sum(
            coeffs.get((p, v), 0.0) * coeffs.get((q, v), 0.0) * cov[(p, q)]
            for p in pa
            for q in pa
        )
        if quad >= 1.0:
            raise ValueError("coefficients too large for unit variances")
        noise[v] = 1.0 - quad
        for u in order[: order.index(v)]:
            c = sum(coeffs.get((p, v), 0.0) * cov[(p, u)] for p in pa)
            cov[(v, u)] = cov[(u, v)] = c
        cov[(v, v)] = 1.0
    return noise


def causal_path_gradient(dag: Pdag, x: str, other_x, y: str, coeff) -> float:
    """Total effect of x on y with the rest of X held fixed: the sum of
    coefficient products over directed paths avoiding other_x."""
    blocked = set(other_x)
    total = 0.0
    stack = [(x, 1.0)]
    while stack:
        node, prod = stack.pop()
        if node == y:
            total += prod
            continue
        for child in dag.children_of(node):
            if child in blocked:
                continue
            c = coeff.get((node, child), 0.0)
            if c != 0.0:
                stack.append((child, prod * c))
    return total


# --------------------------------------------------------------------------
# Random graph generation
# --------------------------------------------------------------------------


def random_pdag(rng: random.Random, n_nodes: int, p_edge: float = 0.5) -> Pdag:
    """Acyclic random PDAG: directed edges follow a random node order."""
    names = [f"N{i}" for i in range(n_nodes)]
    order = names[:]
    rng.shuffle(order)
    rank = {n: i for i, n in enumerate(order)}
    directed, undirected = [], []
    for a, b in itertools.combinations(names, 2):
        if rng.random() >= p_edge:
            continue
        if rng.random() < 0.5:
            undirected.append((a, b))
        else:
            t, h = (a, b) if rank[a] < rank[b] else (b, a)
            directed.append((t, h))
    return Pdag(names, directed, undirected)


def random_mpdags(seed: int, count: int, n_nodes=(2, 3, 4, 5), p_edge: float = 0.5):
    """Yield ``count`` distinct MPDAGs from closing random PDAGs."""
    rng = random.Random(seed)
    seen = set()
    made = 0
    while made < count:
        n = rng.choice(n_nodes)
        try:
            g = close(random_pdag(rng, n, p_edge))
        except InconsistentKnowledgeError:
            continue
        key = (g.nodes, g.directed, g.undirected)
        if key in seen:
            continue
        seen.add(key)
        made += 1
        yield g
