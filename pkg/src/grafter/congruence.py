"""Word problems for plants and 2-cells.

Plant relations are applied as contextual rewrites in both directions.  Cell
relations (strict 3-cells, possibly between integer sums) are instantiated
inside contexts and inside longer pastings; equality of two sums is then a
question of span membership over the discovered instances.  The search is
bounded, so a negative answer is always ``NotEstablished``, never a disproof.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from . import plant as pl
from . import twocell as tc
from .alphabet import CellRelation, PlantRelation
from .errors import ArityMismatch, IllTyped, NotParallel
from .plant import Plant
from .twocell import Pasting, Step, TwoCellSum

# swap classes larger than this are not scanned for relation matches
MATCH_CLASS_LIMIT = 200
# nodes explored when computing a plant's class representative
CLASS_LIMIT = 400
# hole label used while rewriting plants, so 2-cell contexts keep their own hole
REWRITE_HOLE = "?rw"
# new instances collected between two span-membership checks
SOLVE_EVERY = 64


@dataclass(frozen=True)
class Budget:
    max_size: int = 8
    max_steps: int = 10_000

    @classmethod
    def default(cls) -> Budget:
        """The default budget, overridden by ``GRAFTER_BUDGET`` (``steps`` or ``size,steps``)."""
        text = os.environ.get("GRAFTER_BUDGET", "").strip()
        if not text:
            return cls()
        return cls.parse(text)

    @classmethod
    def parse(cls, text: str) -> Budget:
        parts = [int(x) for x in text.replace(":", ",").split(",") if x.strip()]
        if len(parts) == 1:
            return cls(max_steps=parts[0])
        if len(parts) == 2:
            return cls(max_size=parts[0], max_steps=parts[1])
        raise ValueError(f"budget must be 'steps' or 'size,steps', got {text!r}")


# -- results -------------------------------------------------------------------

@dataclass(frozen=True)
class RewriteStep:
    relation: str
    direction: str          # "->" applies lhs to rhs, "<-" the reverse
    context: Plant
    result: Plant


@dataclass
class Related:
    trace: list

    def __bool__(self):
        return True


@dataclass
class NotEstablished:
    reason: str
    exhausted: bool = False

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Instance:
    """One relation instance: ``pre ; C[side] ; post`` for every summand of the relation."""
    relation: str
    pre: tuple
    context: Plant
    post: tuple
    source: Plant
    target: Plant


@dataclass
class Equal:
    certificate: list = field(default_factory=list)   # (coefficient, Instance)

    def __bool__(self):
        return True


@dataclass
class CompiledRelation:
    name: str
    lhs: list        # (coefficient, Pasting)
    rhs: list
    source: Plant
    target: Plant

    def sides(self):
        for c, p in self.lhs:
            yield c, p
        for c, p in self.rhs:
            yield -c, p


# -- session ---------------------------------------------------------------------

class Session:
    def __init__(self, alphabet, plant_relations=None, cell_relations=None, budget: Budget | None = None):
        self.alphabet = alphabet
        self.plant_relations: list[PlantRelation] = list(
            alphabet.plant_relations if plant_relations is None else plant_relations)
        cell_relations = alphabet.cell_relations if cell_relations is None else cell_relations
        self.budget = budget or Budget.default()
        self._class_cache: dict[bytes, bytes] = {}
        self.relations: list[CompiledRelation] = [self._compile(r) for r in cell_relations]

    # plants modulo the plant relations
    @property
    def quotient(self) -> bool:
        return bool(self.plant_relations)

    def _rewrites(self, p: Plant):
        for rel in self.plant_relations:
            for direction, lhs, rhs in (("->", rel.lhs, rel.rhs), ("<-", rel.rhs, rel.lhs)):
                for ctx in pl.occurrences(p, lhs, label=REWRITE_HOLE):
                    yield RewriteStep(rel.name, direction, ctx, pl.substitute(ctx, rhs, REWRITE_HOLE))

    def plant_class(self, p: Plant) -> bytes:
        """A representative code of ``p``'s congruence class (smallest plant found)."""
        if not self.quotient:
            return p.code
        if p.code in self._class_cache:
            return self._class_cache[p.code]
        bound = len(p.labels)
        seen = {p.code: p}
        queue = deque([p])
        while queue and len(seen) < CLASS_LIMIT:
            cur = queue.popleft()
            for step in self._rewrites(cur):
                q = step.result
                if len(q.labels) <= bound and q.code not in seen:
                    seen[q.code] = q
                    queue.append(q)
        rep = min(seen.values(), key=lambda q: (len(q.labels), q.code)).code
        for code in seen:
            self._class_cache.setdefault(code, rep)
        self._class_cache[p.code] = rep
        return rep

    def term_key(self, p: Pasting) -> tuple:
        n = tc.normal_pasting(p, self.alphabet)
        if not self.quotient:
            return n.key
        return (self.plant_class(n.source), self.plant_class(n.target),
                tuple((self.plant_class(s.context), s.name) for s in n.steps))

    def vector(self, s: TwoCellSum) -> dict:
        out: dict = {}
        for c, p in s.items():
            k = self.term_key(p)
            out[k] = out.get(k, 0) + c
        return {k: c for k, c in out.items() if c}

    def _parallel(self, a: Plant, b: Plant) -> bool:
        return a == b or (self.quotient and self.plant_class(a) == self.plant_class(b))

    def _compile(self, rel: CellRelation) -> CompiledRelation:
        terms = []
        for side in (rel.lhs, rel.rhs):
            terms.append([(c, tc.normal_pasting(tc.flatten(t, self.alphabet), self.alphabet)) for c, t in side])
        everything = terms[0] + terms[1]
        if not everything:
            raise IllTyped(f"relation {rel.name!r} has no terms")
        src, tgt = everything[0][1].source, everything[0][1].target
        for _, p in everything:
            if not (self._parallel(p.source, src) and self._parallel(p.target, tgt)):
                raise NotParallel(f"relation {rel.name!r} relates non-parallel 2-cells")
        return CompiledRelation(rel.name, terms[0], terms[1], src, tgt)

    # -- helpers over pastings --------------------------------------------------
    def plants_before(self, steps: tuple, source: Plant, target: Plant) -> list[Plant]:
        """Plant in front of each step, then the final plant."""
        out = [pl.substitute(s.context, self.alphabet.footpath(s.name).source) for s in steps]
        if steps:
            last = steps[-1]
            out.append(pl.substitute(last.context, self.alphabet.footpath(last.name).target))
        else:
            out.append(source)
        return out

    def whisker(self, ctx: Plant, p: Pasting) -> tuple:
        return tuple(Step(pl.substitute(ctx, s.context), s.name) for s in p.steps)

    def instance_terms(self, inst: Instance) -> list[tuple[int, Pasting]]:
        rel = self._relation(inst.relation)
        out = []
        for c, side in rel.sides():
            steps = inst.pre + self.whisker(inst.context, side) + inst.post
            out.append((c, Pasting(inst.source, inst.target, steps)))
        return out

    def instance_vector(self, inst: Instance) -> dict:
        vec: dict = {}
        for c, p in self.instance_terms(inst):
            k = self.term_key(p)
            vec[k] = vec.get(k, 0) + c
        return {k: c for k, c in vec.items() if c}

    def _relation(self, name: str) -> CompiledRelation:
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(name)

    def _matches(self, steps: tuple, source: Plant, target: Plant, identity_sides: bool | None = None):
        """Yield ``(relation, pos, k, context)`` for every relation side found in ``steps``.

        ``identity_sides`` restricts the search to sides without steps (True)
        or with steps (False).
        """
        plants = self.plants_before(steps, source, target)
        n = len(steps)
        for rel in self.relations:
            for _, side in rel.sides():
                k = len(side.steps)
                if identity_sides is not None and identity_sides != (k == 0):
                    continue
                names = sorted(s.name for s in side.steps)
                side_steps = tc.normal_pasting(side, self.alphabet).steps
                for pos in range(n - k + 1):
                    if k and sorted(s.name for s in steps[pos:pos + k]) != names:
                        continue
                    for ctx in pl.occurrences(plants[pos], side.source):
                        if k:
                            block = tc.normal_pasting(Pasting(plants[pos], plants[pos + k], steps[pos:pos + k]),
                                                      self.alphabet).steps
                            mine = tc.normal_pasting(
                                Pasting(plants[pos], plants[pos + k], self.whisker(ctx, Pasting(side.source, side.target, side_steps))),
                                self.alphabet).steps
                            if tuple(s.key for s in block) != tuple(s.key for s in mine):
                                continue
                        yield rel, pos, k, ctx

    # -- public operations -------------------------------------------------------
    def plant_congruent(self, p: Plant, q: Plant):
        if p.arity != q.arity:
            raise ArityMismatch(f"plants of arity {p.arity} and {q.arity} are never related")
        if p == q:
            return Related([])
        extra = max((max(len(r.lhs.labels), len(r.rhs.labels)) for r in self.plant_relations), default=0)
        bound = max(len(p.labels), len(q.labels)) + extra
        parent: dict[bytes, tuple] = {p.code: None}
        queue = deque([p])
        steps = 0
        while queue:
            cur = queue.popleft()
            for rw in self._rewrites(cur):
                steps += 1
                if steps > self.budget.max_steps:
                    return NotEstablished("rewrite budget exhausted", exhausted=True)
                r = rw.result
                if len(r.labels) > bound or r.code in parent:
                    continue
                parent[r.code] = (cur.code, rw)
                if r == q:
                    trace = []
                    code = r.code
                    while parent[code] is not None:
                        prev, step = parent[code]
                        trace.append(step)
                        code = prev
                    return Related(trace[::-1])
                queue.append(r)
        return NotEstablished("no chain of plant rewrites found within the size bound")

    def equal(self, a: TwoCellSum, b: TwoCellSum):
        self._check_parallel(a, b)
        goal = self.vector(a)
        for k, c in self.vector(b).items():
            goal[k] = goal.get(k, 0) - c
        goal = {k: c for k, c in goal.items() if c}
        if not goal:
            return Equal([])
        source = (a.source or b.source)
        target = (a.target or b.target)
        instances: list[Instance] = []
        vectors: list[dict] = []
        seen_vec: set = set()
        seen_terms: set = set()
        frontier = []
        for s in (a, b):
            for _, p in s.items():
                if self.term_key(p) not in seen_terms:
                    seen_terms.add(self.term_key(p))
                    frontier.append(p)
        work = 0
        exhausted = False
        solved_at = 0

        def attempt():
            solution = solve_span(vectors, goal)
            if solution is None:
                return None
            return Equal([(c, instances[i]) for i, c in enumerate(solution) if c])

        while frontier and not exhausted:
            nxt = []
            # relation sides with steps first; identity sides (insertions) are far more numerous
            for identity_sides in (False, True):
                for term in frontier:
                    if identity_sides:
                        # an insertion into one ordering differs from an insertion into
                        # another ordering by further instances, so one ordering suffices
                        reps = [term.steps]
                    else:
                        reps = tc.swap_class(term.steps, self.alphabet, MATCH_CLASS_LIMIT) or [term.steps]
                    for rep in reps:
                        for rel, pos, k, ctx in self._matches(rep, source, target, identity_sides):
                            work += 1
                            if work > self.budget.max_steps:
                                exhausted = True
                                break
                            inst = Instance(rel.name, rep[:pos], ctx, rep[pos + k:], source, target)
                            vec = self.instance_vector(inst)
                            sig = frozenset(vec.items())
                            if not vec or sig in seen_vec:
                                continue
                            seen_vec.add(sig)
                            instances.append(inst)
                            vectors.append(vec)
                            for _, p in self.instance_terms(inst):
                                key = self.term_key(p)
                                if len(p.steps) <= self.budget.max_size and key not in seen_terms:
                                    seen_terms.add(key)
                                    nxt.append(tc.normal_pasting(p, self.alphabet))
                        if exhausted:
                            break
                    if len(instances) - solved_at >= SOLVE_EVERY:
                        solved_at = len(instances)
                        found = attempt()
                        if found:
                            return found
                    if exhausted:
                        break
                if len(instances) > solved_at:
                    solved_at = len(instances)
                    found = attempt()
                    if found:
                        return found
                if exhausted:
                    break
            frontier = nxt
        if exhausted:
            return NotEstablished(f"saturation budget of {self.budget.max_steps} steps exhausted "
                                  f"({len(instances)} relation instances found)", exhausted=True)
        return NotEstablished(f"saturation finished without a certificate "
                              f"({len(instances)} relation instances within size {self.budget.max_size})")

    def _check_parallel(self, a: TwoCellSum, b: TwoCellSum):
        if a.source is None or b.source is None:
            return
        if not (self._parallel(a.source, b.source) and self._parallel(a.target, b.target)):
            raise NotParallel("the two sides are not parallel 2-cells")

    def replay(self, result: Equal, a: TwoCellSum, b: TwoCellSum) -> bool:
        """Independently re-derive every instance of a certificate and check the sum."""
        goal = self.vector(a)
        for k, c in self.vector(b).items():
            goal[k] = goal.get(k, 0) - c
        total: dict = {}
        for coef, inst in result.certificate:
            rel = self._relation(inst.relation)
            # the instance must really contain one side of the relation
            hit = False
            for c, side in rel.sides():
                steps = inst.pre + self.whisker(inst.context, side) + inst.post
                plants = self.plants_before(steps, inst.source, inst.target)
                at = plants[len(inst.pre)]
                if self._parallel(pl.substitute(inst.context, side.source), at):
                    hit = True
                    break
            if not hit:
                return False
            for k, c in self.instance_vector(inst).items():
                total[k] = total.get(k, 0) + coef * c
        total = {k: c for k, c in total.items() if c}
        goal = {k: c for k, c in goal.items() if c}
        return total == goal

    def check_diagram(self, cells: list) -> list[tuple[int, int, object]]:
        sums = [c if isinstance(c, TwoCellSum) else TwoCellSum.of([(1, tc.flatten(c, self.alphabet))], self.alphabet)
                for c in cells]
        for s in sums[1:]:
            self._check_parallel(sums[0], s)
        report = []
        for i in range(len(sums)):
            for j in range(i + 1, len(sums)):
                report.append((i, j, self.equal(sums[i], sums[j])))
        return report

    def enumerate_paths(self, source: Plant, target: Plant, max_len: int) -> list[Pasting]:
        """Normalized pastings from ``source`` to ``target`` with at most ``max_len`` steps."""
        return enumerate_paths(self.alphabet, source, target, max_len)


# -- path enumeration ------------------------------------------------------------

def _forward(alphabet, plant: Plant):
    for name, decl in alphabet.footpaths.items():
        for ctx in pl.occurrences(plant, decl.source):
            yield Step(ctx, name), pl.substitute(ctx, decl.target)


def _backward(alphabet, plant: Plant):
    for name, decl in alphabet.footpaths.items():
        for ctx in pl.occurrences(plant, decl.target):
            yield Step(ctx, name), pl.substitute(ctx, decl.source)


def enumerate_paths(alphabet, source: Plant, target: Plant, max_len: int) -> list[Pasting]:
    pl.require_valid(source)
    pl.require_valid(target)
    fwd_depth = (max_len + 1) // 2
    bwd_depth = max_len // 2
    # levels: plant code -> {prefix normal key: steps}
    fwd = [{source.code: {(): ()}}]
    plants = {source.code: source, target.code: target}
    for _ in range(fwd_depth):
        level: dict = {}
        for code, prefixes in fwd[-1].items():
            for step, nxt in _forward(alphabet, plants[code]):
                plants.setdefault(nxt.code, nxt)
                for steps in prefixes.values():
                    seq = steps + (step,)
                    key = tc.normal_pasting(Pasting(source, nxt, seq), alphabet).key
                    level.setdefault(nxt.code, {}).setdefault(key, seq)
        fwd.append(level)
    bwd = [{target.code: {(): ()}}]
    for _ in range(bwd_depth):
        level = {}
        for code, suffixes in bwd[-1].items():
            for step, prev in _backward(alphabet, plants[code]):
                plants.setdefault(prev.code, prev)
                for steps in suffixes.values():
                    seq = (step,) + steps
                    key = tc.normal_pasting(Pasting(prev, target, seq), alphabet).key
                    level.setdefault(prev.code, {}).setdefault(key, seq)
        bwd.append(level)
    found: dict = {}
    for length in range(max_len + 1):
        i = (length + 1) // 2
        j = length - i
        for code, prefixes in fwd[i].items():
            suffixes = bwd[j].get(code)
            if not suffixes:
                continue
            for pre in prefixes.values():
                for suf in suffixes.values():
                    p = tc.normal_pasting(Pasting(source, target, pre + suf), alphabet)
                    found.setdefault(p.key, p)
    return [found[k] for k in sorted(found)]


# -- linear algebra --------------------------------------------------------------

def solve_span(vectors: list[dict], goal: dict) -> list[int] | None:
    """Integer coefficients ``x`` with ``sum x_i * vectors[i] == goal``, or None.

    Solved over the rationals with free variables set to zero; a rational but
    non-integral solution counts as not found.
    """
    if not goal:
        return [0] * len(vectors)
    if not vectors:
        return None
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix

    rows = sorted({k for v in vectors for k in v} | set(goal))
    index = {k: i for i, k in enumerate(rows)}
    if any(k not in {kk for v in vectors for kk in v} for k in goal):
        return None
    n = len(vectors)
    data: dict = {}
    for j, v in enumerate(vectors):
        for k, c in v.items():
            data.setdefault(index[k], {})[j] = QQ(c)
    for k, c in goal.items():
        data.setdefault(index[k], {})[n] = QQ(c)
    aug = DomainMatrix(data, (len(rows), n + 1), QQ)
    reduced, pivots = aug.to_sparse().rref()
    if n in pivots:
        return None
    sol = [Fraction(0)] * n
    rref = reduced.to_dod()
    for r, col in enumerate(pivots):
        val = rref.get(r, {}).get(n, QQ(0))
        sol[col] = Fraction(int(val.numerator), int(val.denominator))
    if any(x.denominator != 1 for x in sol):
        return None
    return [int(x) for x in sol]


# -- module-level wrappers -------------------------------------------------------

def plant_congruent(s: Session, p: Plant, q: Plant):
    return s.plant_congruent(p, q)


def equal(s: Session, a: TwoCellSum, b: TwoCellSum):
    return s.equal(a, b)


def check_diagram(s: Session, cells: list):
    return s.check_diagram(cells)
