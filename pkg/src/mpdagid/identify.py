"""Causal effect identification and adjustment in MPDAGs.

``identify`` decides whether f(y | do(x)) is computable from every
observational density compatible with the graph, and emits the symbolic
factorization when it is.  ``check_adjustment`` and
``find_adjustment_set`` implement the generalized adjustment criterion,
which is sufficient but not necessary for identification.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Literal, Optional

from . import paths
from .buckets import pco
from .formula import Factor, IdFormula
from .graphs import GraphError, Pdag
from .meek import is_mpdag


class NotTruncatableError(GraphError):
    """An undirected edge joins the intervened set to the rest of the graph."""


@dataclass(frozen=True)
class IdentifyResult:
    """Either a formula or a witness path proving non-identifiability.

    The witness is a proper possibly causal path from X to Y that starts
    with an undirected edge; any such path defeats identification.
    """

    formula: Optional[IdFormula] = None
    witness: Optional[paths.Path] = None

    @property
    def identifiable(self) -> bool:
        return self.formula is not None


@dataclass(frozen=True)
class AdjustmentResult:
    status: Literal["set_found", "none_exists", "zero_effect"]
    adjustment: Optional[frozenset[str]] = None
    reason: Optional[Literal["not_amenable", "blocked_path_unachievable"]] = None


def _require_mpdag(g: Pdag) -> None:
    if g.class_tag == "pdag" and not is_mpdag(g):
        raise GraphError("graph is not maximally oriented; close it first")


def _bucket_factors(g: Pdag, buckets) -> tuple[Factor, ...]:
    return tuple(Factor(targets=b, given=g.set_parents(b)) for b in buckets)


def identify(g: Pdag, X: Iterable[str], Y: Iterable[str]) -> IdentifyResult:
    """Decide identifiability of f(y | do(x)) in the MPDAG ``g``.

    When no proper possibly causal path from X to Y starts with an
    undirected edge, the effect is identifiable and the returned formula
    multiplies f(b_i | pa(b_i)) over the partial causal ordering of the
    ancestors of Y outside X, integrating out the non-response ancestors.
    With X empty this reduces to the observational ancestor factorization
    of the marginal of Y.  When X is nonempty and no possibly causal path
    from X to Y exists at all, the simplified formula f(y) is returned.
    """
    _require_mpdag(g)
    xs = g.require(X)
    ys = g.require(Y)
    if not ys:
        raise GraphError("Y must be nonempty")
    if xs & ys:
        raise GraphError("X and Y must be disjoint")

    if xs:
        witness = paths.amenability_witness(g, xs, ys)
        if witness is not None:
            return IdentifyResult(witness=witness)
        if not paths.exists_possibly_causal(g, xs, ys):
            return IdentifyResult(
                formula=IdFormula(
                    factors=(Factor(targets=ys),), intervened=xs, response=ys
                )
            )
    ancestors = g.induced_subgraph(frozenset(g.nodes) - xs).ancestors(ys)
    buckets = pco(g, ancestors)
    return IdentifyResult(
        formula=IdFormula(
            factors=_bucket_factors(g, buckets), intervened=xs, response=ys
        )
    )


def identify_long_form(g: Pdag, X: Iterable[str], Y: Iterable[str]) -> IdFormula:
    """The ancestor factorization without the zero-effect simplification.

    Used by verification to confirm that the f(y) shortcut agrees with the
    full product after marginalization.  Requires an identifiable query.
    """
    _require_mpdag(g)
    xs, ys = g.require(X), g.require(Y)
    if xs and paths.amenability_witness(g, xs, ys) is not None:
        raise GraphError("effect is not identifiable")
    ancestors = g.induced_subgraph(frozenset(g.nodes) - xs).ancestors(ys)
    buckets = pco(g, ancestors)
    return IdFormula(
        factors=_bucket_factors(g, buckets), intervened=xs, response=ys
    )


def truncated_factorization(g: Pdag, X: Iterable[str]) -> IdFormula:
    """f(v' | do(x)) over the buckets containing no intervened node.

    Raises :class:`NotTruncatableError` when some undirected edge joins X
    to the rest of the graph, in which case the full interventional joint
    is not identifiable.  With X empty this is the observational
    factorization f(v).
    """
    _require_mpdag(g)
    xs = g.require(X)
    rest = frozenset(g.nodes) - xs
    if not rest:
        raise GraphError("X covers the whole graph; nothing to factorize")
    for a, b in g.undirected:
        if (a in xs) != (b in xs):
            inside, outside = (a, b) if a in xs else (b, a)
            raise NotTruncatableError(
                f"undirected edge {inside} -- {outside} leaves the intervened set"
            )
    buckets = [b for b in pco(g, g.nodes) if not b & xs]
    return IdFormula(
        factors=_bucket_factors(g, buckets), intervened=xs, response=rest
    )


def check_adjustment(g: Pdag, X, Y, Z) -> bool:
    """Generalized adjustment criterion for Z relative to (X, Y).

    Z qualifies when (1) no proper possibly causal path from X to Y starts
    with an undirected edge, (2) Z avoids the forbidden set, and (3) Z
    blocks every proper non-causal definite-status path from X to Y.
    """
    _require_mpdag(g)
    xs, ys = g.require(X), g.require(Y)
    zs = g.require(Z)
    if xs & ys or zs & (xs | ys) or not xs or not ys:
        raise GraphError("X, Y, Z must be pairwise disjoint; X, Y nonempty")
    if paths.exists_proper_pcp_starting_undirected(g, xs, ys):
        return False
    if zs & paths.forbidden_set(g, xs, ys):
        return False
    return paths.unblocked_proper_noncausal_path(g, xs, ys, zs) is None


def adjustment_formula(X, Y, Z) -> IdFormula:
    """The adjustment functional ∫ f(y | x, z) f(z) dz as an IdFormula."""
    xs, ys, zs = frozenset(X), frozenset(Y), frozenset(Z)
    factors = [Factor(targets=ys, given=xs | zs)]
    if zs:
        factors.insert(0, Factor(targets=zs))
    return IdFormula(factors=tuple(factors), intervened=xs, response=ys)


def find_adjustment_set(g: Pdag, X, Y) -> AdjustmentResult:
    """Search for an adjustment set relative to (X, Y).

    For singleton X and Y the parent set of X is complete: it is an
    adjustment set whenever any exists (and Y being a parent of X means
    the effect is zero).  For set-valued X or Y the search is exhaustive
    over subsets of the nodes outside X, Y, and the forbidden set, which
    is intended for small graphs only.
    """
    _require_mpdag(g)
    xs, ys = g.require(X), g.require(Y)
    if not xs or not ys or xs & ys:
        raise GraphError("X and Y must be nonempty and disjoint")

    if len(xs) == 1 and len(ys) == 1:
        (x,) = xs
        (y,) = ys
        if y in g.parents_of(x):
            return AdjustmentResult(status="zero_effect")
        if paths.exists_proper_pcp_starting_undirected(g, xs, ys):
            return AdjustmentResult(status="none_exists", reason="not_amenable")
        return AdjustmentResult(status="set_found", adjustment=g.set_parents(xs))

    if paths.exists_proper_pcp_starting_undirected(g, xs, ys):
        return AdjustmentResult(status="none_exists", reason="not_amenable")
    universe = sorted(frozenset(g.nodes) - xs - ys - paths.forbidden_set(g, xs, ys))
    for size in range(len(universe) + 1):
        for combo in itertools.combinations(universe, size):
            if check_adjustment(g, xs, ys, frozenset(combo)):
                return AdjustmentResult(status="set_found", adjustment=frozenset(combo))
    return AdjustmentResult(status="none_exists", reason="blocked_path_unachievable")
