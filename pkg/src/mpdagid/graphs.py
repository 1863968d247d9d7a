"""Partially directed graphs over named nodes.

A :class:`Pdag` holds directed and undirected edges with at most one edge
per node pair and no directed cycles.  Graph values are immutable after
construction, so they hash, compare, and can be shared across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

NODE_NAME = re.compile(r"[A-Za-z0-9_.]+\Z")

ClassTag = Literal["pdag", "dag", "cpdag", "mpdag"]
Relation = Literal[
    "parents",
    "ancestors",
    "descendants",
    "possible_ancestors",
    "possible_descendants",
]

class GraphError(ValueError):
    """Invalid graph structure, class tag, or graph query."""


class GraphParseError(GraphError):
    """Malformed edge-list input; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class UnknownNodeError(GraphError):
    """A queried node is not part of the graph."""


@dataclass(frozen=True)
class Edge:
    """A single edge; ``kind`` is ``"directed"`` (a -> b) or ``"undirected"``."""

    a: str
    b: str
    kind: Literal["directed", "undirected"]


def _check_name(name: str) -> str:
    if not isinstance(name, str) or not NODE_NAME.match(name):
        raise GraphError(f"invalid node name: {name!r}")
    return name


class Pdag:
    """Immutable partially directed acyclic graph.

    Parameters
    ----------
    nodes:
        Node names in presentation order (duplicates rejected).
    directed:
        Iterable of ``(tail, head)`` pairs.
    undirected:
        Iterable of unordered pairs (any endpoint order).
    class_tag:
        Validity assertion.  ``"pdag"`` only requires acyclicity,
        ``"dag"`` additionally forbids undirected edges, and
        ``"cpdag"``/``"mpdag"`` additionally require closure under the
        orientation rules (none of the four forbidden induced subgraphs
        occurs).  The tag is checked eagerly at construction.
    """

    __slots__ = (
        "nodes",
        "directed",
        "undirected",
        "class_tag",
        "_parents",
        "_children",
        "_und",
        "_hash",
    )

    def __init__(
        self,
        nodes: Iterable[str],
        directed: Iterable[tuple[str, str]] = (),
        undirected: Iterable[tuple[str, str]] = (),
        class_tag: ClassTag = "pdag",
    ):
        node_list: list[str] = []
        seen: set[str] = set()
        for n in nodes:
            _check_name(n)
            if n in seen:
                raise GraphError(f"duplicate node: {n}")
            seen.add(n)
            node_list.append(n)
        object.__setattr__(self, "nodes", tuple(node_list))

        parents: dict[str, set[str]] = {n: set() for n in node_list}
        children: dict[str, set[str]] = {n: set() for n in node_list}
        und: dict[str, set[str]] = {n: set() for n in node_list}

        pairs: set[frozenset[str]] = set()
        d_edges: set[tuple[str, str]] = set()
        for a, b in directed:
            self._check_endpoints(seen, a, b, pairs)
            d_edges.add((a, b))
            parents[b].add(a)
            children[a].add(b)
        u_edges: set[tuple[str, str]] = set()
        for a, b in undirected:
            self._check_endpoints(seen, a, b, pairs)
            u_edges.add((min(a, b), max(a, b)))
            und[a].add(b)
            und[b].add(a)

        object.__setattr__(self, "directed", frozenset(d_edges))
        object.__setattr__(self, "undirected", frozenset(u_edges))
        object.__setattr__(self, "_parents", parents)
        object.__setattr__(self, "_children", children)
        object.__setattr__(self, "_und", und)
        object.__setattr__(self, "_hash", None)

        if class_tag not in ("pdag", "dag", "cpdag", "mpdag"):
            raise GraphError(f"unknown class tag: {class_tag!r}")
        object.__setattr__(self, "class_tag", class_tag)

        if self._has_directed_cycle():
            raise GraphError("graph contains a directed cycle")
        if class_tag == "dag" and u_edges:
            raise GraphError("dag tag forbids undirected edges")
        if class_tag in ("cpdag", "mpdag"):
            from . import meek

            if not meek.is_mpdag(self):
                raise GraphError(
                    f"{class_tag} tag rejected: an orientation rule still fires"
                )

    @staticmethod
    def _check_endpoints(known, a, b, pairs) -> None:
        for n in (a, b):
            if n not in known:
                raise UnknownNodeError(f"unknown node: {n}")
        if a == b:
            raise GraphError(f"self-loop at {a}")
        pair = frozenset((a, b))
        if pair in pairs:
            raise GraphError(f"more than one edge between {a} and {b}")
        pairs.add(pair)

    # -- basic queries ---------------------------------------------------

    def __contains__(self, node: str) -> bool:
        return node in self._parents

    def require(self, nodes: Iterable[str]) -> frozenset[str]:
        """Return ``nodes`` as a frozenset, raising on unknown members."""
        out = frozenset(nodes)
        for n in out:
            if n not in self._parents:
                raise UnknownNodeError(f"unknown node: {n}")
        return out

    def parents_of(self, node: str) -> frozenset[str]:
        return frozenset(self._parents[node])

    def children_of(self, node: str) -> frozenset[str]:
        return frozenset(self._children[node])

    def und_neighbors(self, node: str) -> frozenset[str]:
        return frozenset(self._und[node])

    def neighbors(self, node: str) -> frozenset[str]:
        return frozenset(self._parents[node] | self._children[node] | self._und[node])

    def adjacent(self, a: str, b: str) -> bool:
        return b in self._parents[a] or b in self._children[a] or b in self._und[a]

    def has_directed(self, tail: str, head: str) -> bool:
        return (tail, head) in self.directed

    def has_undirected(self, a: str, b: str) -> bool:
        return (min(a, b), max(a, b)) in self.undirected

    def edges(self) -> list[Edge]:
        """All edges in a deterministic (sorted) order."""
        out = [Edge(a, b, "directed") for a, b in sorted(self.directed)]
        out += [Edge(a, b, "undirected") for a, b in sorted(self.undirected)]
        out.sort(key=lambda e: (e.a, e.b, e.kind))
        return out

    def __eq__(self, other) -> bool:
        # Value equality: node set and edge sets; presentation order and
        # class tag are not part of graph identity.
        if not isinstance(other, Pdag):
            return NotImplemented
        return (
            set(self.nodes) == set(other.nodes)
            and self.directed == other.directed
            and self.undirected == other.undirected
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((frozenset(self.nodes), self.directed, self.undirected))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return (
            f"Pdag(nodes={len(self.nodes)}, directed={len(self.directed)}, "
            f"undirected={len(self.undirected)}, tag={self.class_tag})"
        )

    # -- transformations -------------------------------------------------

    def validate_as(self, class_tag: ClassTag) -> "Pdag":
        """Re-validate this graph under ``class_tag`` and return it re-tagged."""
        return Pdag(self.nodes, self.directed, self.undirected, class_tag)

    def induced_subgraph(self, keep: Iterable[str]) -> "Pdag":
        """Subgraph on ``keep`` with every edge whose endpoints both remain.

        The class tag is downgraded to ``"pdag"``: closure properties are
        not preserved by taking induced subgraphs.
        """
        kept = self.require(keep)
        nodes = tuple(n for n in self.nodes if n in kept)
        directed = [(a, b) for a, b in self.directed if a in kept and b in kept]
        undirected = [(a, b) for a, b in self.undirected if a in kept and b in kept]
        return Pdag(nodes, directed, undirected, "pdag")

    def undirected_subgraph(self) -> "Pdag":
        """Same node set, only the undirected edges retained."""
        return Pdag(self.nodes, (), self.undirected, "pdag")

    # -- ancestral relations ----------------------------------------------

    def ancestors(self, xs: Iterable[str]) -> frozenset[str]:
        """Nodes with a causal (fully directed) path into ``xs``, plus ``xs``."""
        return self._directed_reach(xs, self._parents)

    def descendants(self, xs: Iterable[str]) -> frozenset[str]:
        """Nodes reachable from ``xs`` along causal paths, plus ``xs``."""
        return self._directed_reach(xs, self._children)

    def _directed_reach(self, xs, step) -> frozenset[str]:
        frontier = list(self.require(xs))
        seen = set(frontier)
        while frontier:
            n = frontier.pop()
            for m in step[n]:
                if m not in seen:
                    seen.add(m)
                    frontier.append(m)
        return frozenset(seen)

    def set_parents(self, xs: Iterable[str]) -> frozenset[str]:
        """Union of parents of the members of ``xs``, minus ``xs`` itself."""
        xset = self.require(xs)
        out: set[str] = set()
        for x in xset:
            out |= self._parents[x]
        return frozenset(out - xset)

    def possible_descendants(self, xs: Iterable[str]) -> frozenset[str]:
        """Nodes at the far end of a possibly causal path from ``xs``.

        A path is possibly causal when no edge in the graph points from a
        later path node back to an earlier one; the condition ranges over
        all node pairs on the path, not just consecutive ones.  The search
        enumerates simple paths exhaustively, which is exact on every PDAG
        at the graph sizes this library targets.
        """
        xset = self.require(xs)
        reached: set[str] = set(xset)

        def walk(path: list[str], on_path: set[str]) -> None:
            u = path[-1]
            for w in sorted(self._children[u] | self._und[u]):
                if w in on_path or not possibly_causal_extension_ok(self, path, w):
                    continue
                reached.add(w)
                path.append(w)
                on_path.add(w)
                walk(path, on_path)
                path.pop()
                on_path.remove(w)

        for x in sorted(xset):
            walk([x], {x})
        return frozenset(reached)

    def possible_ancestors(self, xs: Iterable[str]) -> frozenset[str]:
        """Nodes with a possibly causal path into ``xs``, plus ``xs``."""
        xset = self.require(xs)
        out = set(xset)
        for w in self.nodes:
            if w in out:
                continue
            if self.possible_descendants([w]) & xset:
                out.add(w)
        return frozenset(out)

    def to_edgelist(self) -> str:
        """Render in the edge-list text format (parse round-trips)."""
        lines = []
        linked = {e.a for e in self.edges()} | {e.b for e in self.edges()}
        for n in sorted(set(self.nodes) - linked):
            lines.append(f"node {n}")
        for e in self.edges():
            mark = "->" if e.kind == "directed" else "--"
            lines.append(f"{e.a} {mark} {e.b}")
        return "\n".join(lines) + ("\n" if lines else "")

    # -- internals ---------------------------------------------------------

    def _has_directed_cycle(self) -> bool:
        indeg = {n: len(self._parents[n]) for n in self.nodes}
        queue = [n for n in self.nodes if indeg[n] == 0]
        seen = 0
        while queue:
            n = queue.pop()
            seen += 1
            for c in self._children[n]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    queue.append(c)
        return seen < len(self.nodes)


def possibly_causal_extension_ok(g: Pdag, path: Sequence[str], w: str) -> bool:
    """True when appending ``w`` keeps ``path`` possibly causal.

    Requires the new edge to leave the current endpoint (``u -> w`` or
    ``u - w``) and rejects any directed edge from ``w`` back into a node
    already on the path.
    """
    u = path[-1]
    if not (g.has_directed(u, w) or g.has_undirected(u, w)):
        return False
    return all(not g.has_directed(w, v) for v in path)


def parse_graph(text: str) -> Pdag:
    """Parse the edge-list format into a ``Pdag`` tagged ``"pdag"``.

    Format: one edge per line, ``A -> B`` (directed) or ``A -- B``
    (undirected); ``# ...`` comments; blank lines ignored; isolated nodes
    declared as ``node A``.  Node order is first-appearance order.
    """
    nodes: list[str] = []
    seen: set[str] = set()
    directed: list[tuple[str, str]] = []
    undirected: list[tuple[str, str]] = []
    pairs: set[frozenset[str]] = set()

    def note(name: str, lineno: int) -> None:
        if not NODE_NAME.match(name):
            raise GraphParseError(lineno, f"invalid node name: {name!r}")
        if name not in seen:
            seen.add(name)
            nodes.append(name)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) == 2 and tokens[0] == "node":
            note(tokens[1], lineno)
            continue
        if len(tokens) != 3 or tokens[1] not in ("->", "--"):
            raise GraphParseError(lineno, f"malformed line: {raw.strip()!r}")
        a, mark, b = tokens
        note(a, lineno)
        note(b, lineno)
        if a == b:
            raise GraphParseError(lineno, f"self-loop at {a}")
        pair = frozenset((a, b))
        if pair in pairs:
            raise GraphParseError(lineno, f"more than one edge between {a} and {b}")
        pairs.add(pair)
        if mark == "->":
            directed.append((a, b))
        else:
            undirected.append((a, b))

    return Pdag(nodes, directed, undirected, "pdag")


def induced_subgraph(g: Pdag, keep: Iterable[str]) -> Pdag:
    return g.induced_subgraph(keep)


def undirected_subgraph(g: Pdag) -> Pdag:
    return g.undirected_subgraph()


def relatives(g: Pdag, xs: Iterable[str], relation: Relation) -> frozenset[str]:
    """Ancestral-relation query for a node set.

    ``parents`` follows the set convention (union of parents minus the set
    itself); the other relations include the set members themselves.
    """
    if relation == "parents":
        return g.set_parents(xs)
    if relation == "ancestors":
        return g.ancestors(xs)
    if relation == "descendants":
        return g.descendants(xs)
    if relation == "possible_ancestors":
        return g.possible_ancestors(xs)
    if relation == "possible_descendants":
        return g.possible_descendants(xs)
    raise GraphError(f"unknown relation: {relation!r}")
