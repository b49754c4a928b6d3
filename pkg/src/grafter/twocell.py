"""2-cells between plants: typing, interchange normal forms and integer sums.

Every well-typed 2-cell term flattens to a *pasting*: a source plant plus a
sequence of steps ``(C, g)``, each applying the footpath ``g`` inside the
one-hole context ``C``.  Two adjacent steps acting on disjoint parts of the
current plant may be swapped (interchange); the normal form of a term is the
lexicographically least step sequence reachable by such swaps.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from . import plant as pl
from .errors import ContextArityMismatch, IllTyped, NotParallel, UnknownFootpath, VerticalMismatch
from .plant import Plant
from .render import plant_term
from .syntax import Ctx, Gen, Horiz, Id2, Term, Vert

# sequences whose swap class grows beyond this are normalized greedily
CLOSURE_LIMIT = 5000


@dataclass(frozen=True)
class Step:
    context: Plant
    name: str

    @cached_property
    def key(self) -> tuple:
        return (self.context.code, self.name)


@dataclass(frozen=True)
class Pasting:
    source: Plant
    target: Plant
    steps: tuple[Step, ...] = ()

    @property
    def key(self) -> tuple:
        return (self.source.code, self.target.code, tuple(s.key for s in self.steps))

    @property
    def size(self) -> int:
        return len(self.steps)

    def plants(self, alphabet) -> list[Plant]:
        """The plants visited: source, each intermediate plant, target."""
        out = [self.source]
        for s in self.steps:
            out.append(pl.substitute(s.context, alphabet.footpath(s.name).target))
        return out


def _cache(alphabet, name):
    store = alphabet.__dict__.setdefault("_cell_caches", {})
    return store.setdefault(name, {})


# -- typing --------------------------------------------------------------------

def flatten(term: Term, alphabet) -> Pasting:
    """Type ``term`` and unfold it into a pasting."""
    if isinstance(term, Gen):
        if term.name in alphabet.footpaths:
            decl = alphabet.footpaths[term.name]
            ctx = pl.hole(decl.source.inputs, decl.source.outputs)
            return Pasting(decl.source, decl.target, (Step(ctx, term.name),))
        if term.name in alphabet.composites:
            cache = _cache(alphabet, "composites")
            if term.name not in cache:
                cache[term.name] = flatten(alphabet.composites[term.name].body, alphabet)
            return cache[term.name]
        raise UnknownFootpath(f"unknown footpath or composite {term.name!r}")
    if isinstance(term, Id2):
        pl.require_valid(term.plant)
        return Pasting(term.plant, term.plant, ())
    if isinstance(term, Vert):
        a = flatten(term.first, alphabet)
        b = flatten(term.second, alphabet)
        if a.target != b.source:
            raise VerticalMismatch(
                f"vertical composite: target {plant_term_or_code(a.target)} "
                f"differs from source {plant_term_or_code(b.source)}")
        return Pasting(a.source, b.target, a.steps + b.steps)
    if isinstance(term, Horiz):
        a = flatten(term.left, alphabet)
        b = flatten(term.right, alphabet)
        steps = tuple(Step(pl.tensor(s.context, b.source), s.name) for s in a.steps)
        steps += tuple(Step(pl.tensor(a.target, s.context), s.name) for s in b.steps)
        return Pasting(pl.tensor(a.source, b.source), pl.tensor(a.target, b.target), steps)
    if isinstance(term, Ctx):
        ctx = term.context
        holes = ctx.holes()
        if len(holes) != 1:
            raise IllTyped(f"a context needs exactly one hole, found {len(holes)}")
        pl.require_valid(ctx)
        body = flatten(term.body, alphabet)
        if tuple(ctx.sigs[holes[0]]) != tuple(body.source.arity):
            raise ContextArityMismatch(
                f"hole arity {ctx.sigs[holes[0]][0]}->{ctx.sigs[holes[0]][1]} "
                f"does not match 2-cell arity {body.source.arity}")
        label = ctx.labels[holes[0]]
        steps = tuple(Step(pl.substitute(ctx, s.context, label), s.name) for s in body.steps)
        return Pasting(pl.substitute(ctx, body.source, label), pl.substitute(ctx, body.target, label), steps)
    raise TypeError(f"not a 2-cell term: {term!r}")


def typecheck(term: Term, alphabet) -> tuple[Plant, Plant]:
    p = flatten(term, alphabet)
    return p.source, p.target


def plant_term_or_code(p: Plant) -> str:
    try:
        return plant_term(p)
    except Exception:
        return p.code.decode()


# -- interchange -----------------------------------------------------------------

def swaps(first: Step, second: Step, alphabet) -> list[tuple[Step, Step]]:
    """All ways of performing ``second`` before ``first`` when they act on disjoint parts."""
    cache = _cache(alphabet, "swaps")
    key = (first.key, second.key)
    if key in cache:
        return cache[key]
    g1 = alphabet.footpath(first.name)
    g2 = alphabet.footpath(second.name)
    c1a = pl.relabel(first.context, "?", "?a")
    found = {}
    for e in pl.occurrences(c1a, g2.source, label="?b"):
        after_first = pl.relabel(pl.substitute(e, g1.target, "?a"), "?b", "?")
        if after_first != second.context:
            continue
        new_second = Step(pl.relabel(pl.substitute(e, g1.source, "?a"), "?b", "?"), second.name)
        new_first = Step(pl.relabel(pl.substitute(e, g2.target, "?b"), "?a", "?"), first.name)
        found.setdefault((new_second.key, new_first.key), (new_second, new_first))
    result = [found[k] for k in sorted(found)]
    cache[key] = result
    return result


def _explore(steps: tuple[Step, ...], alphabet, limit: int) -> dict | None:
    start = tuple(steps)
    seen = {tuple(s.key for s in start): start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for i in range(len(cur) - 1):
            for a, b in swaps(cur[i], cur[i + 1], alphabet):
                nxt = cur[:i] + (a, b) + cur[i + 2:]
                k = tuple(s.key for s in nxt)
                if k not in seen:
                    seen[k] = nxt
                    if len(seen) > limit:
                        return None
                    queue.append(nxt)
    return seen


def swap_class(steps: tuple[Step, ...], alphabet, limit: int = CLOSURE_LIMIT) -> list[tuple[Step, ...]] | None:
    """Every step sequence reachable by interchange swaps, or None past ``limit``."""
    cache = _cache(alphabet, "members")
    key = tuple(s.key for s in steps)
    members = cache.get(key)
    if members is None:
        found = _explore(steps, alphabet, CLOSURE_LIMIT)
        if found is None:
            return None
        members = [found[k] for k in sorted(found)]
        for k in found:
            cache[k] = members
    return members if len(members) <= limit else None


def _greedy_normal(steps: tuple[Step, ...], alphabet) -> tuple[Step, ...]:
    # pick the least step that can be bubbled to the front, then recurse on the rest
    out = []
    cur = list(steps)
    while cur:
        best = None
        for j in range(len(cur)):
            seq = list(cur)
            ok = True
            for i in range(j, 0, -1):
                opts = swaps(seq[i - 1], seq[i], alphabet)
                if not opts:
                    ok = False
                    break
                seq[i - 1], seq[i] = opts[0]
            if ok and (best is None or seq[0].key < best[0].key):
                best = seq
        out.append(best[0])
        cur = best[1:]
    return tuple(out)


def normal_pasting(p: Pasting, alphabet) -> Pasting:
    cache = _cache(alphabet, "normal")
    if p.key in cache:
        return cache[p.key]
    if len(p.steps) < 2:
        result = p
    else:
        members = swap_class(p.steps, alphabet)
        best = members[0] if members is not None else _greedy_normal(p.steps, alphabet)
        result = Pasting(p.source, p.target, tuple(best))
    cache[p.key] = result
    return result


def to_term(p: Pasting) -> Term:
    if not p.steps:
        return Id2(p.source)
    result = None
    for s in p.steps:
        t = Gen(s.name) if _bare_hole(s.context) else Ctx(s.context, Gen(s.name))
        result = t if result is None else Vert(result, t)
    return result


def _bare_hole(ctx: Plant) -> bool:
    return len(ctx.labels) == 1 and ctx.labels[0] == "?" and tuple(ctx.arity) == ctx.sigs[0]


def normalize(term: Term, alphabet) -> Term:
    return to_term(normal_pasting(flatten(term, alphabet), alphabet))


def normal_key(term: Term, alphabet) -> tuple:
    return normal_pasting(flatten(term, alphabet), alphabet).key


def format_step(s: Step) -> str:
    if _bare_hole(s.context):
        return s.name
    return f"({plant_term_or_code(s.context)})[{s.name}]"


def format_pasting(p: Pasting) -> str:
    if not p.steps:
        return f"id2({plant_term_or_code(p.source)})"
    return " ; ".join(format_step(s) for s in p.steps)


def format_term(term: Term) -> str:
    if isinstance(term, Gen):
        return term.name
    if isinstance(term, Id2):
        return f"id2({plant_term_or_code(term.plant)})"
    if isinstance(term, Vert):
        return f"{format_term(term.first)} ; {format_term(term.second)}"
    if isinstance(term, Horiz):
        def wrap(t):
            return f"({format_term(t)})" if isinstance(t, Vert) else format_term(t)
        return f"{wrap(term.left)} * {wrap(term.right)}"
    if isinstance(term, Ctx):
        return f"({plant_term_or_code(term.context)})[{format_term(term.body)}]"
    raise TypeError(term)


# -- sums ------------------------------------------------------------------------

class TwoCellSum:
    """Finite integer combination of parallel normalized pastings."""

    def __init__(self, coeffs: dict | None = None, reps: dict | None = None,
                 source: Plant | None = None, target: Plant | None = None):
        self.coeffs = {k: c for k, c in (coeffs or {}).items() if c}
        self.reps = {k: (reps or {})[k] for k in self.coeffs}
        self.source = source
        self.target = target

    @classmethod
    def of(cls, pastings: Iterable[tuple[int, Pasting]], alphabet, source=None, target=None) -> TwoCellSum:
        coeffs: dict = {}
        reps: dict = {}
        for c, p in pastings:
            n = normal_pasting(p, alphabet)
            if source is None:
                source, target = n.source, n.target
            elif n.source != source or n.target != target:
                raise NotParallel(
                    f"summands are not parallel: {format_pasting(n)} vs source "
                    f"{plant_term_or_code(source)} / target {plant_term_or_code(target)}")
            coeffs[n.key] = coeffs.get(n.key, 0) + c
            reps[n.key] = n
        return cls(coeffs, reps, source, target)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, Term]], alphabet) -> TwoCellSum:
        return cls.of(((c, flatten(t, alphabet)) for c, t in terms), alphabet)

    @classmethod
    def parse(cls, text: str, alphabet) -> TwoCellSum:
        return cls.from_terms(alphabet.sum(text), alphabet)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: TwoCellSum):
        if self.source is None or other.source is None:
            return
        if self.source != other.source or self.target != other.target:
            raise NotParallel("sums are not parallel")

    def __add__(self, other: TwoCellSum) -> TwoCellSum:
        self._check(other)
        coeffs = dict(self.coeffs)
        reps = {**self.reps, **other.reps}
        for k, c in other.coeffs.items():
            coeffs[k] = coeffs.get(k, 0) + c
        return TwoCellSum(coeffs, reps, self.source or other.source, self.target or other.target)

    def scale(self, k: int) -> TwoCellSum:
        return TwoCellSum({t: k * c for t, c in self.coeffs.items()}, self.reps, self.source, self.target)

    def __neg__(self) -> TwoCellSum:
        return self.scale(-1)

    def __sub__(self, other: TwoCellSum) -> TwoCellSum:
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TwoCellSum) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def items(self) -> list[tuple[int, Pasting]]:
        return [(self.coeffs[k], self.reps[k]) for k in sorted(self.coeffs)]

    def __repr__(self) -> str:
        return f"TwoCellSum({format_sum(self)!r})"


def sum_add(a: TwoCellSum, b: TwoCellSum) -> TwoCellSum:
    return a + b


def sum_scale(k: int, a: TwoCellSum) -> TwoCellSum:
    return a.scale(k)


def format_sum(s: TwoCellSum) -> str:
    if s.is_zero():
        return "0"
    parts = []
    for c, p in s.items():
        body = format_pasting(p)
        if len(s.coeffs) > 1 and " ; " in body:
            body = f"({body})"
        mag = "" if abs(c) == 1 else f"{abs(c)} "
        sign = "-" if c < 0 else "+"
        parts.append((sign, f"{mag}{body}"))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text
