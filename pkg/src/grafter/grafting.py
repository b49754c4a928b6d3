"""Multivalued grafting: concatenations and planar end-block k-graftings."""

from __future__ import annotations

from dataclasses import dataclass

from . import plant as pl
from .errors import ArityMismatch, KTooLarge
from .plant import Plant

SUFFIX_PREFIX = "suffix-prefix"   # last k roots of upper onto first k leaves of lower
PREFIX_SUFFIX = "prefix-suffix"   # first k roots of upper onto last k leaves of lower


@dataclass(frozen=True)
class GraftingSpec:
    upper: Plant
    lower: Plant
    k: int
    attachment: str = SUFFIX_PREFIX


def _bump(p: Plant, *parts: Plant) -> Plant:
    return p.with_graftings(sum(q.graftings for q in parts) + 1)


def tensor(p: Plant, q: Plant) -> Plant:
    """The 0-grafting: ``p`` beside ``q``, ``p`` on the left."""
    pl.require_valid(p)
    pl.require_valid(q)
    return _bump(pl.tensor(p, q), p, q)


def k_graftings(spec: GraftingSpec) -> Plant:
    up, lo, k = spec.upper, spec.lower, spec.k
    if k < 1 or k > min(up.outputs, lo.inputs):
        raise KTooLarge(f"k={k} outside 1..min({up.outputs}, {lo.inputs})")
    n, m = up.outputs, lo.inputs
    if spec.attachment == SUFFIX_PREFIX:
        joins = {n - k + j: j for j in range(k)}
        # lower's free leaves sit right of upper's leaves; upper's free roots left of lower's roots
        leaves = [("U", i) for i in range(up.inputs)] + [("W", i) for i in range(k, m)]
        roots = [("U", r) for r in range(n - k)] + [("W", r) for r in range(lo.outputs)]
    elif spec.attachment == PREFIX_SUFFIX:
        joins = {j: m - k + j for j in range(k)}
        leaves = [("W", i) for i in range(m - k)] + [("U", i) for i in range(up.inputs)]
        roots = [("W", r) for r in range(lo.outputs)] + [("U", r) for r in range(k, n)]
    else:
        raise ValueError(f"unknown attachment {spec.attachment!r}")
    return _bump(pl.glue(up, lo, joins, leaves, roots), up, lo)


def graft_all(p: Plant, q: Plant) -> list[Plant]:
    """Every plant obtained by grafting ``p`` and ``q`` in either order, sorted by code."""
    pl.require_valid(p)
    pl.require_valid(q)
    found: dict[bytes, Plant] = {}
    for a, b in ((p, q), (q, p)):
        found.setdefault(tensor(a, b).code, tensor(a, b))
        for k in range(1, min(a.outputs, b.inputs) + 1):
            for att in (SUFFIX_PREFIX, PREFIX_SUFFIX):
                r = k_graftings(GraftingSpec(a, b, k, att))
                found.setdefault(r.code, r)
    return [found[c] for c in sorted(found)]


def full_compose(top: Plant, bottom: Plant) -> Plant:
    if top.outputs != bottom.inputs:
        raise ArityMismatch(f"cannot compose {top.arity} with {bottom.arity}")
    if top.outputs == 0:
        return tensor(top, bottom)
    return k_graftings(GraftingSpec(top, bottom, top.outputs))
