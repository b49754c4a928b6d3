"""Plants: planar open diagrams with ordered leaves (top) and roots (bottom).

A plant is stored as a bijection between *downstream* ports (vertex input
slots and boundary roots) and *upstream* ports (boundary leaves and vertex
output slots).  Ports are plain tuples::

    ("L", i)      boundary leaf i            (upstream)
    ("o", v, j)   output slot j of vertex v  (upstream)
    ("i", v, j)   input slot j of vertex v   (downstream)
    ("R", i)      boundary root i            (downstream)

Vertex labels starting with ``?`` are holes; a plant with exactly one hole
is a context.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

from .errors import ArityMismatch, FormatError, InvalidPlant

Port = tuple

HOLE = "?"


class Arity(NamedTuple):
    inputs: int
    outputs: int

    def __str__(self) -> str:
        return f"{self.inputs}->{self.outputs}"


@dataclass(frozen=True, eq=False)
class Plant:
    inputs: int
    outputs: int
    labels: tuple[str, ...]
    sigs: tuple[tuple[int, int], ...]
    up: dict = field(repr=False)
    graftings: int = 0

    # -- basic structure -------------------------------------------------
    @property
    def arity(self) -> Arity:
        return Arity(self.inputs, self.outputs)

    @property
    def letters(self) -> int:
        """Number of generator occurrences (vertices); identity wires count zero."""
        return len(self.labels)

    @cached_property
    def down(self) -> dict:
        return {u: d for d, u in self.up.items()}

    def downstream_ports(self) -> Iterator[Port]:
        for v, (nin, _) in enumerate(self.sigs):
            for j in range(nin):
                yield ("i", v, j)
        for r in range(self.outputs):
            yield ("R", r)

    def upstream_ports(self) -> Iterator[Port]:
        for i in range(self.inputs):
            yield ("L", i)
        for v, (_, nout) in enumerate(self.sigs):
            for j in range(nout):
                yield ("o", v, j)

    def holes(self) -> list[int]:
        return [v for v, lab in enumerate(self.labels) if lab.startswith(HOLE)]

    # -- identity --------------------------------------------------------
    @cached_property
    def code(self) -> bytes:
        return canonicalize(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Plant):
            return NotImplemented
        return self.code == other.code

    def __hash__(self) -> int:
        return hash(self.code)

    def __str__(self) -> str:
        return self.code.decode("ascii")

    def with_graftings(self, graftings: int) -> Plant:
        return Plant(self.inputs, self.outputs, self.labels, self.sigs, self.up, graftings)

    @classmethod
    def from_code(cls, code: bytes | str) -> Plant:
        """Rebuild a plant from its canonical serialization."""
        text = code.decode("ascii") if isinstance(code, bytes) else code
        try:
            head, verts, wires = text.split("|")
            m, n = (int(x) for x in head.split(">"))
            labels, sigs = [], []
            if verts:
                for item in verts.split(","):
                    lab, nin, nout = item.rsplit(":", 2)
                    labels.append(lab)
                    sigs.append((int(nin), int(nout)))
            ups = wires.split(",") if wires else []
            downs = [("i", v, j) for v, (nin, _) in enumerate(sigs) for j in range(nin)]
            downs += [("R", r) for r in range(n)]
            if len(ups) != len(downs):
                raise ValueError("port count")
            up = {}
            for d, tok in zip(downs, ups):
                if tok.startswith("L"):
                    up[d] = ("L", int(tok[1:]))
                else:
                    v, j = tok.split(".")
                    up[d] = ("o", int(v), int(j))
        except ValueError as exc:
            raise FormatError(f"malformed plant code {text!r}") from exc
        plant = cls(m, n, tuple(labels), tuple(sigs), up)
        report = validate(plant)
        if not report.valid:
            raise FormatError(f"plant code {text!r} is not a valid plant: {report.violations[0]}")
        return plant


# -- constructors ------------------------------------------------------------

def identity(width: int = 1) -> Plant:
    return Plant(width, width, (), (), {("R", i): ("L", i) for i in range(width)})


def generator(label: str, inputs: int, outputs: int) -> Plant:
    up = {("i", 0, j): ("L", j) for j in range(inputs)}
    up.update({("R", j): ("o", 0, j) for j in range(outputs)})
    return Plant(inputs, outputs, (label,), ((inputs, outputs),), up)


def hole(inputs: int, outputs: int, label: str = HOLE) -> Plant:
    return generator(label, inputs, outputs)


# -- validity ----------------------------------------------------------------

@dataclass
class ValidityReport:
    violations: list[str]

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def _incidence_problem(p: Plant) -> str | None:
    if p.inputs < 0 or p.outputs < 0:
        return "negative arity"
    if len(p.labels) != len(p.sigs):
        return "labels and slot signatures differ in length"
    downs = set(p.downstream_ports())
    ups = set(p.upstream_ports())
    for d in downs:
        if d not in p.up:
            return f"incidence: downstream port {d} is not connected"
    seen = set()
    for d, u in p.up.items():
        if d not in downs:
            return f"incidence: {d} is not a downstream port of this plant"
        if u not in ups:
            return f"incidence: {u} is not an upstream port of this plant"
        if u in seen:
            return f"incidence: upstream port {u} has more than one edge"
        seen.add(u)
    for u in ups:
        if u not in seen:
            return f"incidence: upstream port {u} is not connected"
    return None


def _topological_order(p: Plant) -> list[int] | None:
    indeg = [0] * len(p.labels)
    succ: list[list[int]] = [[] for _ in p.labels]
    for d, u in p.up.items():
        if d[0] == "i" and u[0] == "o":
            succ[u[1]].append(d[1])
            indeg[d[1]] += 1
    ready = [v for v, k in enumerate(indeg) if k == 0]
    order = []
    while ready:
        v = ready.pop()
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return order if len(order) == len(p.labels) else None


def _node(port: Port):
    return "B" if port[0] in ("L", "R") else port[1]


def _rotations(p: Plant) -> dict:
    """Clockwise cyclic order of ports around each vertex and the outer boundary."""
    rot = {}
    for v, (nin, nout) in enumerate(p.sigs):
        rot[v] = [("i", v, j) for j in range(nin)] + [("o", v, j) for j in reversed(range(nout))]
    rot["B"] = [("L", i) for i in reversed(range(p.inputs))] + [("R", r) for r in range(p.outputs)]
    return rot


def is_planar(p: Plant) -> bool:
    """Genus-zero test for the fixed rotation system (strip boundary as one node)."""
    rot = _rotations(p)
    succ = {}
    for node, ports in rot.items():
        for k, port in enumerate(ports):
            succ[port] = ports[(k + 1) % len(ports)]
    twin = {}
    for d, u in p.up.items():
        twin[d] = u
        twin[u] = d
    parent = {node: node for node in rot}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d, u in p.up.items():
        a, b = find(_node(d)), find(_node(u))
        if a != b:
            parent[a] = b
    faces: dict = {}
    visited = set()
    for dart in twin:
        if dart in visited:
            continue
        x = dart
        while x not in visited:
            visited.add(x)
            x = succ[twin[x]]
        root = find(_node(dart))
        faces[root] = faces.get(root, 0) + 1
    euler: dict = {}
    for node in rot:
        root = find(node)
        euler[root] = euler.get(root, 0) + 1
    for d, u in p.up.items():
        root = find(_node(d))
        euler[root] -= 1
    for root, chi in euler.items():
        if chi + faces.get(root, 1) != 2:
            return False
    return True


def validate(p: Plant) -> ValidityReport:
    problem = _incidence_problem(p)
    if problem:
        return ValidityReport([problem])
    if _topological_order(p) is None:
        return ValidityReport(["acyclicity: the diagram contains a directed cycle"])
    if not is_planar(p):
        return ValidityReport(["planarity: no crossing-free embedding respects the boundary and slot orders"])
    return ValidityReport([])


def require_valid(p: Plant) -> Plant:
    report = validate(p)
    if not report.valid:
        raise InvalidPlant(report.violations[0])
    return p


# -- canonical form ----------------------------------------------------------

def _bfs(p: Plant, seeds: Iterable[int], seen: set[int]) -> list[int]:
    order = []
    queue = deque()
    for v in seeds:
        if v not in seen:
            seen.add(v)
            order.append(v)
            queue.append(v)
    while queue:
        v = queue.popleft()
        nin, nout = p.sigs[v]
        nbrs = [p.up[("i", v, j)] for j in range(nin)] + [p.down[("o", v, j)] for j in range(nout)]
        for port in nbrs:
            if port[0] in ("i", "o") and port[1] not in seen:
                seen.add(port[1])
                order.append(port[1])
                queue.append(port[1])
    return order


def _serialize(p: Plant, order: list[int]) -> str:
    pos = {v: k for k, v in enumerate(order)}
    verts = ",".join(f"{p.labels[v]}:{p.sigs[v][0]}:{p.sigs[v][1]}" for v in order)

    def fmt(u):
        return f"L{u[1]}" if u[0] == "L" else f"{pos[u[1]]}.{u[2]}"

    wires = [fmt(p.up[("i", v, j)]) for v in order for j in range(p.sigs[v][0])]
    wires += [fmt(p.up[("R", r)]) for r in range(p.outputs)]
    return f"{p.inputs}>{p.outputs}|{verts}|{','.join(wires)}"


def canonical_order(p: Plant) -> list[int]:
    """Vertex order that depends only on the isotopy class of ``p``."""
    seen: set[int] = set()
    seeds = []
    for i in range(p.inputs):
        d = p.down[("L", i)]
        if d[0] == "i":
            seeds.append(d[1])
    for r in range(p.outputs):
        u = p.up[("R", r)]
        if u[0] == "o":
            seeds.append(u[1])
    order = _bfs(p, seeds, seen)
    floating = [v for v in range(len(p.labels)) if v not in seen]
    if floating:
        # closed components carry no boundary anchor; order them by their own minimal code
        comps = []
        pending = set(floating)
        while pending:
            start = min(pending)
            comp = _bfs(p, [start], set())
            pending -= set(comp)
            best = None
            for s in comp:
                local = _bfs(p, [s], set())
                key = _serialize_local(p, local)
                if best is None or key < best[0]:
                    best = (key, local)
            comps.append(best)
        comps.sort(key=lambda kv: kv[0])
        for _, local in comps:
            order.extend(local)
    return order


def _serialize_local(p: Plant, order: list[int]) -> str:
    pos = {v: k for k, v in enumerate(order)}
    parts = []
    for v in order:
        nin, nout = p.sigs[v]
        ins = ";".join(f"{pos[p.up[('i', v, j)][1]]}.{p.up[('i', v, j)][2]}" for j in range(nin))
        parts.append(f"{p.labels[v]}:{nin}:{nout}[{ins}]")
    return ",".join(parts)


def canonicalize(p: Plant) -> bytes:
    if _incidence_problem(p):
        raise InvalidPlant(_incidence_problem(p))
    return _serialize(p, canonical_order(p)).encode("ascii")


def iso_eq(p: Plant, q: Plant) -> bool:
    require_valid(p)
    require_valid(q)
    return p.code == q.code


def renumbered(p: Plant, order: list[int]) -> Plant:
    """The same diagram with vertices listed in ``order``."""
    pos = {v: k for k, v in enumerate(order)}

    def mp(port):
        if port[0] in ("i", "o"):
            return (port[0], pos[port[1]], port[2])
        return port

    up = {mp(d): mp(u) for d, u in p.up.items()}
    return Plant(p.inputs, p.outputs, tuple(p.labels[v] for v in order),
                 tuple(p.sigs[v] for v in order), up, p.graftings)


def canonical_plant(p: Plant) -> Plant:
    return renumbered(p, canonical_order(p))


# -- gluing ------------------------------------------------------------------

def glue(upper: Plant, lower: Plant, joins: dict[int, int], leaves: list, roots: list) -> Plant:
    """Join roots of ``upper`` to leaves of ``lower``.

    ``joins`` maps an upper root index to a lower leaf index.  ``leaves`` and
    ``roots`` list the remaining boundary ports of the result in order, as
    ``("U", i)`` / ``("W", i)`` pairs.
    """
    off = len(upper.labels)
    leaf_pos = {src: k for k, src in enumerate(leaves)}
    root_pos = {src: k for k, src in enumerate(roots)}
    joined_from = {w: u for u, w in joins.items()}

    def up_of(side, port):
        if port[0] == "L":
            if side == "W" and port[1] in joined_from:
                return up_of("U", upper.up[("R", joined_from[port[1]])])
            return ("L", leaf_pos[(side, port[1])])
        return ("o", port[1] + (off if side == "W" else 0), port[2])

    up = {}
    for d, u in upper.up.items():
        if d[0] == "R":
            if d[1] in joins:
                continue
            up[("R", root_pos[("U", d[1])])] = up_of("U", u)
        else:
            up[d] = up_of("U", u)
    for d, u in lower.up.items():
        if d[0] == "R":
            up[("R", root_pos[("W", d[1])])] = up_of("W", u)
        else:
            up[("i", d[1] + off, d[2])] = up_of("W", u)
    return Plant(len(leaves), len(roots), upper.labels + lower.labels, upper.sigs + lower.sigs, up)


def tensor(p: Plant, q: Plant) -> Plant:
    """Side-by-side juxtaposition, ``p`` on the left; no grading bump."""
    leaves = [("U", i) for i in range(p.inputs)] + [("W", i) for i in range(q.inputs)]
    roots = [("U", r) for r in range(p.outputs)] + [("W", r) for r in range(q.outputs)]
    return glue(p, q, {}, leaves, roots)


def compose(top: Plant, bottom: Plant) -> Plant:
    """All roots of ``top`` onto all leaves of ``bottom``; no grading bump."""
    if top.outputs != bottom.inputs:
        raise ArityMismatch(
            f"cannot compose: {top.outputs} output(s) feed {bottom.inputs} input(s)")
    joins = {r: r for r in range(top.outputs)}
    leaves = [("U", i) for i in range(top.inputs)]
    roots = [("W", r) for r in range(bottom.outputs)]
    return glue(top, bottom, joins, leaves, roots)


def relabel(p: Plant, old: str, new: str) -> Plant:
    labels = tuple(new if lab == old else lab for lab in p.labels)
    return Plant(p.inputs, p.outputs, labels, p.sigs, p.up, p.graftings)


def substitute(context: Plant, q: Plant, label: str = HOLE) -> Plant:
    """Fill the hole labelled ``label`` in ``context`` with ``q``."""
    holes = [v for v, lab in enumerate(context.labels) if lab == label]
    if len(holes) != 1:
        raise InvalidPlant(f"expected exactly one hole labelled {label!r}, found {len(holes)}")
    h = holes[0]
    if tuple(context.sigs[h]) != (q.inputs, q.outputs):
        raise ArityMismatch(
            f"hole {label} has arity {context.sigs[h][0]}->{context.sigs[h][1]}, "
            f"filler has {q.inputs}->{q.outputs}")
    keep = [v for v in range(len(context.labels)) if v != h]
    cmap = {v: k for k, v in enumerate(keep)}
    off = len(keep)

    def up_c(u, depth=0):
        if depth > len(context.labels) + len(q.labels) + 2:
            raise InvalidPlant("hole is wired into itself")
        if u[0] == "L":
            return u
        if u[1] == h:
            return up_q(q.up[("R", u[2])], depth + 1)
        return ("o", cmap[u[1]], u[2])

    def up_q(u, depth=0):
        if u[0] == "L":
            return up_c(context.up[("i", h, u[1])], depth + 1)
        return ("o", u[1] + off, u[2])

    up = {}
    for d, u in context.up.items():
        if d[0] == "i":
            if d[1] == h:
                continue
            up[("i", cmap[d[1]], d[2])] = up_c(u)
        else:
            up[d] = up_c(u)
    for d, u in q.up.items():
        if d[0] == "i":
            up[("i", d[1] + off, d[2])] = up_q(u)
    labels = tuple(context.labels[v] for v in keep) + q.labels
    sigs = tuple(context.sigs[v] for v in keep) + q.sigs
    return Plant(context.inputs, context.outputs, labels, sigs, up)


# -- pattern occurrences -----------------------------------------------------

def occurrences(p: Plant, pattern: Plant, label: str = HOLE) -> list[Plant]:
    """Every context ``C`` (hole labelled ``label``) with ``C[pattern]`` equal to ``p``.

    The pattern's vertices are matched injectively onto equally labelled
    vertices of ``p``; identity wires running straight through the pattern
    are matched onto edges of ``p``.  Candidate contexts that are not valid
    plants (a cycle through the hole, crossings) are discarded.
    """
    pv = len(pattern.labels)
    cands = []
    for a in range(pv):
        cands.append([v for v in range(len(p.labels))
                      if p.labels[v] == pattern.labels[a] and p.sigs[v] == pattern.sigs[a]])
    internal = [(d, u) for d, u in pattern.up.items() if d[0] == "i" and u[0] == "o"]
    passes = [(i, pattern.down[("L", i)][1]) for i in range(pattern.inputs)
              if pattern.down[("L", i)][0] == "R"]
    found: dict[bytes, Plant] = {}

    def consistent(phi):
        for d, u in internal:
            if d[1] in phi and u[1] in phi:
                if p.up[("i", phi[d[1]], d[2])] != ("o", phi[u[1]], u[2]):
                    return False
        return True

    def extend(a, phi, used):
        if a == pv:
            yield dict(phi)
            return
        for v in cands[a]:
            if v in used:
                continue
            phi[a] = v
            if consistent(phi):
                used.add(v)
                yield from extend(a + 1, phi, used)
                used.discard(v)
            del phi[a]

    for phi in extend(0, {}, set()):
        image = set(phi.values())
        free_edges = [d for d, u in p.up.items()
                      if not (d[0] == "i" and d[1] in image) and not (u[0] == "o" and u[1] in image)]
        free_edges.sort()
        for cut in itertools.permutations(free_edges, len(passes)):
            ctx = _carve(p, pattern, phi, image, dict(zip((i for i, _ in passes), cut)), label)
            if ctx is None or not validate(ctx).valid:
                continue
            found.setdefault(ctx.code, ctx)
    return [found[k] for k in sorted(found)]


def _carve(p, pattern, phi, image, cut, label):
    keep = [v for v in range(len(p.labels)) if v not in image]
    cmap = {v: k for k, v in enumerate(keep)}
    h = len(keep)
    out_map = {}
    for r in range(pattern.outputs):
        u = pattern.up[("R", r)]
        if u[0] == "o":
            out_map[(phi[u[1]], u[2])] = r

    def map_up(u):
        if u[0] == "L":
            return u
        if u[1] in image:
            r = out_map.get((u[1], u[2]))
            return None if r is None else ("o", h, r)
        return ("o", cmap[u[1]], u[2])

    def map_down(d):
        return d if d[0] == "R" else ("i", cmap[d[1]], d[2])

    cut_edges = set(cut.values())
    up = {}
    for d, u in p.up.items():
        if (d[0] == "i" and d[1] in image) or d in cut_edges:
            continue
        m = map_up(u)
        if m is None:
            return None
        up[map_down(d)] = m
    for i in range(pattern.inputs):
        qd = pattern.down[("L", i)]
        if qd[0] == "R":
            d = cut[i]
            src = p.up[d]
            if src[0] == "o" and src[1] in image:
                return None
            up[("i", h, i)] = map_up(src)
            up[map_down(d)] = ("o", h, qd[1])
        else:
            src = p.up[("i", phi[qd[1]], qd[2])]
            if src[0] == "o" and src[1] in image:
                return None
            up[("i", h, i)] = map_up(src)
    labels = tuple(p.labels[v] for v in keep) + (label,)
    sigs = tuple(p.sigs[v] for v in keep) + ((pattern.inputs, pattern.outputs),)
    ctx = Plant(p.inputs, p.outputs, labels, sigs, up)
    if _incidence_problem(ctx):
        return None
    return ctx
