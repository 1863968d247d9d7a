"""Brute-force verification machinery.

Everything here favors being obviously correct over being fast: discrete
evaluation enumerates the full joint (capped at 2**20 configurations),
the equivalence class is enumerated DAG by DAG, and linear-Gaussian
covariances come from explicit path sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from . import paths
from .estimate import Dataset
from .formula import IdFormula
from .graphs import GraphError, Pdag, possibly_causal_extension_ok
from .meek import InconsistentKnowledgeError, close, is_mpdag

CONFIG_CAP = 2**20


class DegenerateConditioningError(ValueError):
    """A formula factor conditions on a zero-probability event."""


def _require_mpdag(g: Pdag) -> Pdag:
    if g.class_tag == "pdag":
        if not is_mpdag(g):
            raise GraphError("graph is not maximally oriented")
        return g.validate_as("mpdag")
    return g


# ---------------------------------------------------------------------------
# Equivalence-class enumeration
# ---------------------------------------------------------------------------


def enumerate_dags(g: Pdag) -> list[Pdag]:
    """All DAGs represented by the MPDAG ``g``.

    Branch and bound: pick an undirected edge, try both orientations,
    re-close, recurse.  Every returned DAG has the adjacencies and
    unshielded colliders of ``g`` and contains all its directed edges.
    The output is sorted by the orientation bitstring over the sorted
    skeleton, so it is canonical regardless of evaluation order.
    """
    out: list[Pdag] = []

    def rec(h: Pdag) -> None:
        if not h.undirected:
            out.append(h.validate_as("dag"))
            return
        a, b = min(h.undirected)
        for pair in ((a, b), (b, a)):
            try:
                rec(close(h, (pair,)))
            except InconsistentKnowledgeError:
                continue

    rec(_require_mpdag(g))
    skeleton = sorted(
        {(min(a, b), max(a, b)) for a, b in g.directed} | set(g.undirected)
    )

    def bits(d: Pdag) -> tuple[int, ...]:
        return tuple(0 if d.has_directed(a, b) else 1 for a, b in skeleton)

    out.sort(key=bits)
    return out


# ---------------------------------------------------------------------------
# Discrete models and g-formula evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteModel:
    """Per-node conditional probability tables for a DAG.

    ``cpts[v]`` has axes ``(v, *sorted(parents))``; every column (fixed
    parent configuration) sums to one.
    """

    dag: Pdag
    cards: Mapping[str, int]
    cpts: Mapping[str, np.ndarray]

    def __post_init__(self):
        if self.dag.undirected:
            raise GraphError("discrete models require a DAG")
        for v in self.dag.nodes:
            if self.cards.get(v, 0) < 2:
                raise GraphError(f"cardinality of {v} must be >= 2")
            cpt = self.cpts[v]
            expected = (self.cards[v],) + tuple(
                self.cards[p] for p in sorted(self.dag.parents_of(v))
            )
            if cpt.shape != expected:
                raise GraphError(f"cpt shape mismatch at {v}: {cpt.shape} != {expected}")
            if np.any(cpt < 0) or not np.allclose(cpt.sum(axis=0), 1.0, atol=1e-12):
                raise GraphError(f"cpt columns at {v} must be distributions")


@dataclass(frozen=True)
class MarginalTable:
    """A distribution over configurations of ``nodes`` (sorted)."""

    nodes: tuple[str, ...]
    table: np.ndarray

    def prob(self, assign: Mapping[str, int]) -> float:
        idx = tuple(assign[n] for n in self.nodes)
        return float(self.table[idx])

    def tv_distance(self, other: "MarginalTable") -> float:
        if self.nodes != other.nodes:
            raise ValueError("tables are over different node sets")
        return 0.5 * float(np.abs(self.table - other.table).sum())


@dataclass(frozen=True)
class InterventionalTable:
    """f(y | do(x)) for every configuration jointly.

    Axes are ``x_nodes + y_nodes`` (each sorted); an x axis of size one
    means the quantity does not depend on that intervened variable.
    """

    x_nodes: tuple[str, ...]
    y_nodes: tuple[str, ...]
    table: np.ndarray

    def slice_x(self, x_assign: Mapping[str, int]) -> MarginalTable:
        t = self.table
        for i, n in enumerate(self.x_nodes):
            take = x_assign[n] if t.shape[i] > 1 else 0
            t = np.take(t, [take], axis=i)
        t = t.reshape(t.shape[len(self.x_nodes):])
        return MarginalTable(self.y_nodes, t)

    def max_tv(self, other: "InterventionalTable") -> float:
        """Largest total-variation distance over intervened configurations."""
        if self.x_nodes != other.x_nodes or self.y_nodes != other.y_nodes:
            raise ValueError("tables are over different node sets")
        diff = np.abs(self.table - other.table)
        y_axes = tuple(range(diff.ndim - len(self.y_nodes), diff.ndim))
        tv = 0.5 * diff.sum(axis=y_axes) if y_axes else 0.5 * diff
        return float(np.max(tv))


def random_model(dag: Pdag, cardinalities: Mapping[str, int], seed: int) -> DiscreteModel:
    """CPT entries drawn column-wise from a symmetric Dirichlet(1).

    The generator is ``numpy.random.Generator(PCG64(seed))``, pinned so
    golden numbers stay stable across platforms.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    cpts: dict[str, np.ndarray] = {}
    for v in dag.nodes:
        pa = sorted(dag.parents_of(v))
        n_cols = math.prod(cardinalities[p] for p in pa) if pa else 1
        draw = rng.dirichlet(np.ones(cardinalities[v]), size=n_cols)
        cpts[v] = np.ascontiguousarray(
            draw.T.reshape((cardinalities[v],) + tuple(cardinalities[p] for p in pa))
        )
    return DiscreteModel(dag=dag, cards=dict(cardinalities), cpts=cpts)


def _check_cap(cards: Mapping[str, int], nodes: Sequence[str]) -> None:
    total = math.prod(cards[n] for n in nodes)
    if total > CONFIG_CAP:
        raise GraphError(f"joint has {total} configurations; cap is {CONFIG_CAP}")


def _expand(nodes: Sequence[str], table: np.ndarray, table_axes: Sequence[str]) -> np.ndarray:
    """Reshape ``table`` so it broadcasts over the full ``nodes`` space."""
    pos = {n: i for i, n in enumerate(nodes)}
    order = sorted(range(len(table_axes)), key=lambda i: pos[table_axes[i]])
    t = np.transpose(table, order)
    shape = [1] * len(nodes)
    for i in order:
        shape[pos[table_axes[i]]] = table.shape[i]
    return t.reshape(shape)


def joint_table(m: DiscreteModel) -> np.ndarray:
    """The observational joint, axes following ``m.dag.nodes``."""
    nodes = m.dag.nodes
    _check_cap(m.cards, nodes)
    full = np.ones([m.cards[n] for n in nodes])
    for v in nodes:
        axes = [v] + sorted(m.dag.parents_of(v))
        full = full * _expand(nodes, m.cpts[v], axes)
    return full


def model_from_joint(
    joint: np.ndarray, nodes: Sequence[str], cards: Mapping[str, int], dag: Pdag
) -> DiscreteModel:
    """Refactor a joint according to another DAG over the same nodes.

    Conditionals at zero-probability parent configurations are filled
    uniformly; they carry no mass.
    """
    cpts: dict[str, np.ndarray] = {}
    for v in dag.nodes:
        keep = [v] + sorted(dag.parents_of(v))
        drop = tuple(i for i, n in enumerate(nodes) if n not in keep)
        marg = joint.sum(axis=drop)
        kept_in_order = [n for n in nodes if n in keep]
        marg = np.transpose(marg, [kept_in_order.index(n) for n in keep])
        den = marg.sum(axis=0, keepdims=True)
        cpt = np.divide(
            marg, den, out=np.full_like(marg, 1.0 / cards[v]), where=den > 0
        )
        cpts[v] = cpt
    return DiscreteModel(dag=dag, cards=dict(cards), cpts=cpts)


def gformula_table(m: DiscreteModel, X: Iterable[str], Y: Iterable[str]) -> InterventionalTable:
    """Truncated factorization f(y | do(x)) for all (x, y) at once."""
    xs = m.dag.require(X)
    ys = m.dag.require(Y)
    if xs & ys:
        raise GraphError("X and Y must be disjoint")
    nodes = m.dag.nodes
    _check_cap(m.cards, nodes)
    full = np.ones([m.cards[n] for n in nodes])
    for v in nodes:
        if v in xs:
            continue
        axes = [v] + sorted(m.dag.parents_of(v))
        full = full * _expand(nodes, m.cpts[v], axes)
    drop = tuple(i for i, n in enumerate(nodes) if n not in xs | ys)
    table = full.sum(axis=drop)
    kept = [n for n in nodes if n in xs | ys]
    target = sorted(xs) + sorted(ys)
    table = np.transpose(table, [kept.index(n) for n in target])
    return InterventionalTable(tuple(sorted(xs)), tuple(sorted(ys)), table)


def gformula_eval(m: DiscreteModel, x_assign: Mapping[str, int], Y: Iterable[str]) -> MarginalTable:
    """Marginal of Y under do(x), evaluated by full enumeration."""
    return gformula_table(m, frozenset(x_assign), Y).slice_x(x_assign)


def id_formula_table(f: IdFormula, m: DiscreteModel) -> InterventionalTable:
    """Evaluate a formula against the observational joint of ``m``.

    Every factor is computed by marginalizing the joint; the product is
    then summed over the formula's integration set.  Raises
    :class:`DegenerateConditioningError` when any needed conditional has a
    zero-probability conditioning configuration.
    """
    nodes = m.dag.nodes
    formula_nodes = set(f.intervened) | set(f.response)
    for factor in f.factors:
        formula_nodes |= factor.targets | factor.given
    for n in formula_nodes:
        if n not in m.dag:
            raise GraphError(f"formula node {n} missing from the model")

    joint = joint_table(m)
    pos = {n: i for i, n in enumerate(nodes)}
    prod = np.ones([1] * len(nodes))
    degenerate = False
    for factor in f.factors:
        keep = factor.targets | factor.given
        drop = tuple(i for i, n in enumerate(nodes) if n not in keep)
        num = joint.sum(axis=drop, keepdims=True)
        den = num.sum(axis=tuple(pos[t] for t in factor.targets), keepdims=True)
        bad = den == 0
        degenerate = degenerate or bool(bad.any())
        prod = prod * np.divide(num, den, out=np.zeros_like(num), where=~bad)
    if degenerate:
        raise DegenerateConditioningError("conditioning on a zero-probability event")

    io_axes = tuple(pos[n] for n in f.integrate_over)
    table = prod.sum(axis=io_axes, keepdims=True) if io_axes else prod
    keep_nodes = f.intervened | f.response
    drop_axes = tuple(i for i, n in enumerate(nodes) if n not in keep_nodes)
    assert all(table.shape[i] == 1 for i in drop_axes)
    if drop_axes:
        table = table.squeeze(axis=drop_axes)
    kept = [n for n in nodes if n in keep_nodes]
    target = sorted(f.intervened) + sorted(f.response)
    table = np.transpose(table, [kept.index(n) for n in target])
    return InterventionalTable(tuple(sorted(f.intervened)), tuple(sorted(f.response)), table)


def eval_id_formula(f: IdFormula, m: DiscreteModel, x_assign: Mapping[str, int]) -> MarginalTable:
    """Distribution of the response under the formula at a fixed x."""
    if frozenset(x_assign) != f.intervened:
        raise GraphError("x assignment must cover exactly the intervened set")
    return id_formula_table(f, m).slice_x(x_assign)


# ---------------------------------------------------------------------------
# Linear-Gaussian models, path covariances, and disagreement witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianModel:
    """Linear structural equation model with independent Gaussian noise.

    ``coeffs`` maps directed edges to their coefficients and
    ``noise_vars`` holds the residual variances.  The witness builder
    chooses residual variances so every variable has variance one, which
    is what the path-sum covariance rule assumes.
    """

    dag: Pdag
    coeffs: Mapping[tuple[str, str], float]
    noise_vars: Mapping[str, float]

    def __post_init__(self):
        if self.dag.undirected:
            raise GraphError("gaussian models require a DAG")
        for edge in self.coeffs:
            if edge not in self.dag.directed:
                raise GraphError(f"coefficient for non-edge {edge}")
        for v in self.dag.nodes:
            if self.noise_vars.get(v, -1.0) < 0:
                raise GraphError(f"noise variance of {v} must be nonnegative")

    def coeff(self, tail: str, head: str) -> float:
        return float(self.coeffs.get((tail, head), 0.0))

    def coefficient_matrix(self) -> np.ndarray:
        """A with A[j, i] = coefficient of node_i -> node_j."""
        idx = {n: i for i, n in enumerate(self.dag.nodes)}
        a = np.zeros((len(idx), len(idx)))
        for (t, h), c in self.coeffs.items():
            a[idx[h], idx[t]] = c
        return a

    def topological_order(self) -> list[str]:
        order: list[str] = []
        placed: set[str] = set()
        pending = list(self.dag.nodes)
        while pending:
            for n in pending:
                if self.dag.parents_of(n) <= placed:
                    order.append(n)
                    placed.add(n)
                    pending.remove(n)
                    break
            else:
                raise GraphError("cyclic model")
        return order


def wright_cov(m: GaussianModel) -> tuple[tuple[str, ...], np.ndarray]:
    """Covariance matrix by summing edge-coefficient products over all
    collider-free paths; assumes the unit-variance construction, so the
    diagonal is one."""
    nodes = m.dag.nodes
    idx = {n: i for i, n in enumerate(nodes)}
    cov = np.eye(len(nodes))

    def edge_coeff(a: str, b: str) -> float:
        return m.coeff(a, b) if m.dag.has_directed(a, b) else m.coeff(b, a)

    def paths_between(a: str, b: str):
        found: list[float] = []

        def walk(path: list[str]) -> None:
            u = path[-1]
            for w in sorted(m.dag.neighbors(u)):
                if w in path:
                    continue
                if len(path) >= 2:
                    prev = path[-2]
                    if m.dag.has_directed(prev, u) and m.dag.has_directed(w, u):
                        continue  # collider at u
                path.append(w)
                if w == b:
                    found.append(
                        math.prod(edge_coeff(p, q) for p, q in zip(path, path[1:]))
                    )
                else:
                    walk(path)
                path.pop()

        walk([a])
        return found

    for i, a in enumerate(nodes):
        for b in nodes[i + 1 :]:
            s = float(sum(paths_between(a, b)))
            cov[idx[a], idx[b]] = cov[idx[b], idx[a]] = s
    return nodes, cov


def interventional_means(m: GaussianModel, x_assign: Mapping[str, float]) -> dict[str, float]:
    """E[V | do(x)] for every node of a zero-mean linear SEM."""
    means: dict[str, float] = {}
    for v in m.topological_order():
        if v in x_assign:
            means[v] = float(x_assign[v])
        else:
            means[v] = sum(m.coeff(p, v) * means[p] for p in m.dag.parents_of(v))
    return means


def simulate(m: GaussianModel, n: int, seed: int) -> Dataset:
    """Draw ``n`` rows from the SEM; columns follow the graph node order."""
    rng = np.random.Generator(np.random.PCG64(seed))
    cols = {v: None for v in m.dag.nodes}
    for v in m.topological_order():
        x = math.sqrt(m.noise_vars[v]) * rng.standard_normal(n)
        for p in m.dag.parents_of(v):
            c = m.coeff(p, v)
            if c != 0.0:
                x = x + c * cols[p]
        cols[v] = x
    return Dataset(columns=list(m.dag.nodes), rows=np.column_stack([cols[v] for v in m.dag.nodes]))


def _witness_paths(g: Pdag, xs: frozenset, ys: frozenset) -> list[paths.Path]:
    """All proper possibly causal paths from X to Y starting with an
    undirected edge, shortest first."""
    found: list[paths.Path] = []

    def walk(path: list[str]) -> None:
        u = path[-1]
        for w in sorted(g.neighbors(u)):
            if w in path or w in xs:
                continue
            if not possibly_causal_extension_ok(g, path, w):
                continue
            path.append(w)
            if w in ys:
                found.append(tuple(path))
            else:
                walk(path)
            path.pop()

    for x in sorted(xs):
        for w in sorted(g.und_neighbors(x)):
            if w in xs:
                continue
            if w in ys:
                found.append((x, w))
            else:
                walk([x, w])
    found.sort(key=lambda p: (len(p), p))
    return found


def nonid_witness(
    g: Pdag,
    X: Iterable[str],
    Y: Iterable[str],
    coeffs: Union[float, Sequence[float]] = 0.5,
) -> tuple[GaussianModel, GaussianModel, float]:
    """Two unit-variance Gaussian models with identical observational law
    and different interventional means.

    A witness path q = <X, V1, ..., Y> is realized as X -> V1 -> ... -> Y
    in one represented DAG and as X <- V1 -> ... -> Y in another; edge
    coefficients off the path are zero, so both models share the same
    covariance while E[Y | do(x)] differs by the product of the path
    coefficients (returned as ``delta``).
    """
    g = _require_mpdag(g)
    xs = g.require(X)
    ys = g.require(Y)
    candidates = _witness_paths(g, xs, ys)
    if not candidates:
        raise GraphError("effect is identifiable; no witness path exists")

    picked = None
    for q in candidates:
        forward = list(zip(q, q[1:]))
        flipped = [(q[1], q[0])] + forward[1:]
        try:
            d1 = enumerate_dags(close(g, forward))[0]
            d2 = enumerate_dags(close(g, flipped))[0]
        except InconsistentKnowledgeError:
            continue
        picked = (q, d1, d2)
        break
    if picked is None:
        raise GraphError("no witness path is realizable in both orientations")
    q, d1, d2 = picked

    k = len(q) - 1
    if isinstance(coeffs, (int, float)):
        cs = [float(coeffs)] * k
    else:
        cs = [float(c) for c in coeffs]
        if len(cs) != k:
            raise GraphError(f"need {k} coefficients for a {k}-edge path")
    if any(not 0.0 < abs(c) < 1.0 for c in cs):
        raise GraphError("path coefficients must lie in (0, 1) in magnitude")

    def build(dag: Pdag, edges: Sequence[tuple[str, str]]) -> GaussianModel:
        coeff_map = {e: c for e, c in zip(edges, cs)}
        for e in coeff_map:
            if e not in dag.directed:
                raise GraphError(f"witness edge {e} missing after closure")
        noise = {}
        for v in dag.nodes:
            into = [c for (t, h), c in coeff_map.items() if h == v]
            assert len(into) <= 1, "witness path gives each node one parent"
            noise[v] = 1.0 - (into[0] ** 2 if into else 0.0)
        return GaussianModel(dag=dag, coeffs=coeff_map, noise_vars=noise)

    m1 = build(d1, list(zip(q, q[1:])))
    m2 = build(d2, [(q[1], q[0])] + list(zip(q[1:], q[2:])))
    delta = math.prod(abs(c) for c in cs)
    return m1, m2, delta


# ---------------------------------------------------------------------------
# Cross-DAG agreement sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AgreementReport:
    n_dags: int
    n_models: int
    max_cross_dag_tv: float
    max_formula_tv: float


def cross_dag_agreement(
    g: Pdag,
    X: Iterable[str],
    Y: Iterable[str],
    formula: IdFormula,
    *,
    n_models: int = 20,
    seed: int = 0,
    card: int = 2,
    dags: Optional[list[Pdag]] = None,
) -> AgreementReport:
    """Check that every represented DAG assigns the same interventional law
    and that the formula reproduces it.

    For each random model (built on DAGs round-robin), the joint is
    refactored along every DAG in the class and the truncated
    factorization is compared across DAGs and against the formula, over
    all intervention configurations at once.
    """
    g = _require_mpdag(g)
    xs, ys = g.require(X), g.require(Y)
    if dags is None:
        dags = enumerate_dags(g)
    cards = {n: card for n in g.nodes}
    max_tv = 0.0
    max_formula = 0.0
    for k in range(n_models):
        base = dags[k % len(dags)]
        model = random_model(base, cards, seed=seed + k)
        joint = joint_table(model)
        reference: Optional[InterventionalTable] = None
        for d in dags:
            refit = model if d is base else model_from_joint(joint, g.nodes, cards, d)
            table = gformula_table(refit, xs, ys)
            if reference is None:
                reference = table
            else:
                max_tv = max(max_tv, reference.max_tv(table))
        assert reference is not None
        formula_table = id_formula_table(formula, model)
        max_formula = max(max_formula, reference.max_tv(formula_table))
    return AgreementReport(len(dags), n_models, max_tv, max_formula)
