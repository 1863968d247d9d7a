"""Closure of a PDAG into a maximally oriented PDAG.

Four orientation rules are applied to a fixpoint.  Each rule eliminates
one of the four forbidden induced subgraphs that characterize maximal
orientation, so a graph is maximally oriented exactly when no rule fires:

* rule 1: ``c -> a - b`` with c, b nonadjacent        =>  ``a -> b``
* rule 2: ``a -> c -> b`` with ``a - b``              =>  ``a -> b``
* rule 3: ``a - b``, ``a - c``, ``a - d``, ``c -> b``, ``d -> b``,
  c, d nonadjacent                                    =>  ``a -> b``
* rule 4: ``a - b``, ``a - c``, ``a - d``, ``c -> d``, ``d -> b``,
  c, b nonadjacent                                    =>  ``a -> b``
"""

from __future__ import annotations

import random
from typing import Iterable, Optional

from .graphs import GraphError, GraphParseError, Pdag, parse_graph

BackgroundKnowledge = frozenset[tuple[str, str]]

# (rule index, tail, head): orient tail -> head
RuleApplication = tuple[int, str, str]


class InconsistentKnowledgeError(GraphError):
    """Background knowledge conflicts with the graph or with itself."""


class _Scratch:
    """Mutable edge sets used during closure; tolerates directed cycles."""

    def __init__(self, g: Pdag):
        self.nodes = g.nodes
        self.directed: set[tuple[str, str]] = set(g.directed)
        self.undirected: set[tuple[str, str]] = set(g.undirected)

    def has_dir(self, a: str, b: str) -> bool:
        return (a, b) in self.directed

    def has_und(self, a: str, b: str) -> bool:
        return (min(a, b), max(a, b)) in self.undirected

    def adjacent(self, a: str, b: str) -> bool:
        return self.has_dir(a, b) or self.has_dir(b, a) or self.has_und(a, b)

    def und_neighbors(self, n: str) -> list[str]:
        return sorted(
            b if a == n else a for a, b in self.undirected if n in (a, b)
        )

    def parents(self, n: str) -> list[str]:
        return sorted(a for a, b in self.directed if b == n)

    def orient(self, tail: str, head: str) -> None:
        self.undirected.discard((min(tail, head), max(tail, head)))
        self.directed.add((tail, head))

    def rule_applications(self) -> list[RuleApplication]:
        """All currently fireable orientations, sorted for determinism."""
        apps: set[RuleApplication] = set()
        for a, b in sorted(self.undirected):
            for tail, head in ((a, b), (b, a)):
                rule = self._which_rule(tail, head)
                if rule is not None:
                    apps.add((rule, tail, head))
        return sorted(apps)

    def _which_rule(self, a: str, b: str) -> Optional[int]:
        """Lowest rule index demanding ``a -> b`` (``a - b`` undirected)."""
        # rule 1: c -> a, a - b, c and b nonadjacent
        for c in self.parents(a):
            if c != b and not self.adjacent(c, b):
                return 1
        # rule 2: a -> c -> b
        for c in self.parents(b):
            if self.has_dir(a, c):
                return 2
        und_a = self.und_neighbors(a)
        pa_b = self.parents(b)
        # rule 3: a - c -> b, a - d -> b, c and d nonadjacent
        cands3 = [c for c in und_a if c in pa_b]
        for i, c in enumerate(cands3):
            for d in cands3[i + 1 :]:
                if not self.adjacent(c, d):
                    return 3
        # rule 4: a - c, c -> d, a - d, d -> b, c and b nonadjacent
        for d in und_a:
            if not self.has_dir(d, b):
                continue
            for c in und_a:
                if c != d and self.has_dir(c, d) and not self.adjacent(c, b):
                    return 4
        return None

    def has_consistent_extension(self) -> bool:
        """True when some DAG orients the undirected edges without adding
        a directed cycle or a new unshielded collider.

        Sink elimination: repeatedly find a node with no outgoing arrows
        whose undirected neighbors are adjacent to all its other
        neighbors, orient its undirected edges into it, and remove it.
        """
        directed = set(self.directed)
        undirected = set(self.undirected)
        alive = set(self.nodes)

        def neighbors(n):
            out = set()
            for a, b in directed:
                if a == n:
                    out.add(b)
                elif b == n:
                    out.add(a)
            for a, b in undirected:
                if a == n:
                    out.add(b)
                elif b == n:
                    out.add(a)
            return out

        while alive:
            for v in sorted(alive):
                if any(a == v for a, b in directed):
                    continue
                und_nb = {b if a == v else a for a, b in undirected if v in (a, b)}
                rest = neighbors(v) - und_nb
                adj = {n: neighbors(n) for n in und_nb}
                if all(rest <= adj[w] | {w} for w in und_nb) and all(
                    u in adj[w] for u in und_nb for w in und_nb if u != w
                ):
                    directed = {(a, b) for a, b in directed if v not in (a, b)}
                    undirected = {(a, b) for a, b in undirected if v not in (a, b)}
                    alive.remove(v)
                    break
            else:
                return False
        return True

    def has_directed_cycle(self) -> bool:
        children: dict[str, list[str]] = {n: [] for n in self.nodes}
        indeg = {n: 0 for n in self.nodes}
        for a, b in self.directed:
            children[a].append(b)
            indeg[b] += 1
        queue = [n for n in self.nodes if indeg[n] == 0]
        seen = 0
        while queue:
            n = queue.pop()
            seen += 1
            for c in children[n]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    queue.append(c)
        return seen < len(self.nodes)


def is_mpdag(g: Pdag) -> bool:
    """True when no orientation rule fires, i.e. no forbidden induced
    subgraph occurs.  Assumes ``g`` is acyclic (enforced by ``Pdag``)."""
    return not _Scratch(g).rule_applications()


def close(
    g: Pdag,
    bk: Iterable[tuple[str, str]] = (),
    *,
    rng: random.Random | None = None,
) -> Pdag:
    """Close ``g`` plus background knowledge into its maximal orientation.

    Each ``(tail, head)`` pair in ``bk`` must be an adjacency of ``g`` and
    is oriented as ``tail -> head`` before the rules run.  The result
    contains every directed edge of the input and is tagged ``"mpdag"``.

    ``rng`` randomizes which fireable rule is applied at each step; the
    default applies the least (rule index, then edge) application, which
    is deterministic.  The closure itself is order-independent.

    Raises
    ------
    InconsistentKnowledgeError
        If ``bk`` contains a pair in both orientations, demands orienting
        an edge against an existing direction, names a non-adjacent pair,
        a rule demands reversing an orientation the closure already made,
        the closure would create a directed cycle, or the closed graph
        would represent no DAG at all (no consistent extension).
    """
    scratch = _Scratch(g)
    oriented: list[tuple[str, str]] = []
    pairs = sorted(frozenset(bk))
    for tail, head in pairs:
        if (head, tail) in pairs:
            raise InconsistentKnowledgeError(
                f"background knowledge orients {tail} and {head} both ways"
            )
        if not scratch.adjacent(tail, head):
            raise InconsistentKnowledgeError(
                f"background knowledge pair {tail} -> {head} is not an adjacency"
            )
        if scratch.has_dir(tail, head):
            continue
        if scratch.has_dir(head, tail):
            raise InconsistentKnowledgeError(
                f"background knowledge {tail} -> {head} opposes existing edge"
            )
        scratch.orient(tail, head)
        oriented.append((tail, head))

    while True:
        # A rule pattern demanding the reverse of an orientation made by
        # the knowledge or by an earlier rule means no DAG is compatible
        # with the input (input edges are exempt: an arrow into an
        # existing v-structure is not a demand).
        for tail, head in oriented:
            rule = scratch._which_rule(head, tail)
            if rule is not None:
                raise InconsistentKnowledgeError(
                    f"rule {rule} demands {head} -> {tail} against {tail} -> {head}"
                )
        apps = scratch.rule_applications()
        if not apps:
            break
        _, tail, head = apps[0] if rng is None else rng.choice(apps)
        scratch.orient(tail, head)
        oriented.append((tail, head))

    if scratch.has_directed_cycle():
        raise InconsistentKnowledgeError(
            "closure creates a directed cycle; knowledge is inconsistent"
        )
    if not scratch.has_consistent_extension():
        raise InconsistentKnowledgeError(
            "closure represents no DAG (no consistent extension exists)"
        )
    return Pdag(g.nodes, scratch.directed, scratch.undirected, "mpdag")


def parse_background_knowledge(text: str) -> BackgroundKnowledge:
    """Parse a background-knowledge file: edge-list format, directed lines only."""
    g = parse_graph(text)
    if g.undirected:
        a, b = sorted(g.undirected)[0]
        raise GraphParseError(0, f"background knowledge must be directed: {a} -- {b}")
    return frozenset(g.directed)
