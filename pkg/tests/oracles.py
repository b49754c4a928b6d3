"""Independent oracles used by the tests.

Nothing here calls the canonical-form, planarity, interchange or solver code
of the package; the oracles work on raw plant dictionaries and syntax trees.
"""

from __future__ import annotations

import itertools

import networkx as nx

from grafter.syntax import Gen, Horiz, Id2, Vert


# -- plant isomorphism ---------------------------------------------------------------

def _map_port(port, phi):
    if port[0] in ("o", "i"):
        return (port[0], phi[port[1]], port[2])
    return port


def brute_iso(p, q) -> bool:
    """Exhaustive search for a vertex bijection preserving labels, port order and boundary order."""
    if (p.inputs, p.outputs) != (q.inputs, q.outputs) or len(p.labels) != len(q.labels):
        return False
    n = len(p.labels)
    for perm in itertools.permutations(range(n)):
        if any(p.labels[v] != q.labels[perm[v]] or p.sigs[v] != q.sigs[perm[v]] for v in range(n)):
            continue
        if all(q.up[_map_port(d, perm)] == _map_port(u, perm) for d, u in p.up.items()):
            return True
    return False


# -- planarity -------------------------------------------------------------------------

def _rotations(p):
    """Clockwise port order around each node; the boundary is the single node ``B``."""
    rot = {}
    for v, (nin, nout) in enumerate(p.sigs):
        rot[("v", v)] = [("i", v, j) for j in range(nin)] + [("o", v, j) for j in reversed(range(nout))]
    rot["B"] = [("R", r) for r in range(p.outputs)] + [("L", i) for i in reversed(range(p.inputs))]
    return rot


def euler_planar(p) -> bool:
    """Genus zero of the port-order embedding, by counting face orbits directly."""
    rot = _rotations(p)
    succ = {}
    for ports in rot.values():
        for k, port in enumerate(ports):
            succ[port] = ports[(k + 1) % len(ports)]
    partner = {}
    for d, u in p.up.items():
        partner[d], partner[u] = u, d
    owner = {port: node for node, ports in rot.items() for port in ports}
    seen, faces = set(), 0
    for start in partner:
        if start in seen:
            continue
        faces += 1
        port = start
        while port not in seen:
            seen.add(port)
            port = succ[partner[port]]
    g = nx.Graph()
    g.add_nodes_from(rot)
    for d, u in p.up.items():
        g.add_edge(owner[d], owner[u])
    if not p.up:
        g.remove_node("B")
    isolated = sum(1 for node in g if g.degree(node) == 0 and not rot[node])
    V, E, C = g.number_of_nodes(), len(p.up), nx.number_connected_components(g)
    return V - E + faces + isolated == 2 * C


def wheel_planar(p) -> bool:
    """Abstract planarity of the plant with every node replaced by a wheel.

    Wheels fix each rotation only up to reflection, so this is a necessary
    condition for planarity of the embedded plant, not a sufficient one.
    """
    g = nx.Graph()
    for node, ports in _rotations(p).items():
        g.add_node((node, "hub"))
        for k, port in enumerate(ports):
            g.add_edge((node, "hub"), port)
            if len(ports) > 1:
                g.add_edge(port, ports[(k + 1) % len(ports)])
    for d, u in p.up.items():
        g.add_edge(d, u)
    return nx.check_planarity(g)[0]


# -- 2-cells of strand generators --------------------------------------------------------

def wire_semantics(term, alphabet):
    """Denotation of a term built from 1->1 footpath leaves: per-wire generator sequences."""
    if isinstance(term, Gen):
        return ((alphabet.footpath(term.name).source.code,), ((term.name,),))
    if isinstance(term, Id2):
        return ((term.plant.code,), ((),))
    if isinstance(term, Horiz):
        sa, wa = wire_semantics(term.left, alphabet)
        sb, wb = wire_semantics(term.right, alphabet)
        return sa + sb, wa + wb
    if isinstance(term, Vert):
        sa, wa = wire_semantics(term.first, alphabet)
        sb, wb = wire_semantics(term.second, alphabet)
        if sa != sb:
            raise TypeError("ill-typed")
        return sa, tuple(x + y for x, y in zip(wa, wb))
    raise TypeError(term)


def leaves(term) -> int:
    if isinstance(term, Vert):
        return leaves(term.first) + leaves(term.second)
    if isinstance(term, Horiz):
        return leaves(term.left) + leaves(term.right)
    return 1


def width(term) -> int:
    if isinstance(term, Horiz):
        return width(term.left) + width(term.right)
    if isinstance(term, Vert):
        return width(term.first)
    return 1


def _is_unit(term) -> bool:
    if isinstance(term, Id2):
        return True
    if isinstance(term, Horiz):
        return _is_unit(term.left) and _is_unit(term.right)
    if isinstance(term, Vert):
        return _is_unit(term.first) and _is_unit(term.second)
    return False


def enumerate_terms(leaf_terms, max_leaves):
    """All well-typed terms over ``leaf_terms`` with at most ``max_leaves`` leaves.

    Every leaf maps one strand to one strand, so a term is well typed exactly
    when both sides of each vertical composite have the same width.
    """
    by = {1: list(leaf_terms)}
    for n in range(2, max_leaves + 1):
        out = []
        for i in range(1, n):
            for a in by[i]:
                for b in by[n - i]:
                    out.append(Horiz(a, b))
                    if width(a) == width(b):
                        out.append(Vert(a, b))
        by[n] = out
    return [t for n in sorted(by) for t in by[n]]


def _units(w, unit_leaf, max_leaves):
    """Identity terms of width ``w`` (horizontal bracketings of unit leaves)."""
    if w == 1:
        return [unit_leaf]
    out = []
    for i in range(1, w):
        for a in _units(i, unit_leaf, max_leaves):
            for b in _units(w - i, unit_leaf, max_leaves):
                out.append(Horiz(a, b))
    return out


def _rewrites_at(t, unit_leaf, max_leaves):
    """Terms one interchange, unit or associativity rewrite away, at the root."""
    out = []
    if isinstance(t, Vert):
        a, b = t.first, t.second
        if isinstance(a, Vert):
            out.append(Vert(a.first, Vert(a.second, b)))
        if isinstance(b, Vert):
            out.append(Vert(Vert(a, b.first), b.second))
        if _is_unit(a):
            out.append(b)
        if _is_unit(b):
            out.append(a)
        if isinstance(a, Horiz) and isinstance(b, Horiz) and width(a.left) == width(b.left):
            out.append(Horiz(Vert(a.left, b.left), Vert(a.right, b.right)))
    if isinstance(t, Horiz):
        a, b = t.left, t.right
        if isinstance(a, Horiz):
            out.append(Horiz(a.left, Horiz(a.right, b)))
        if isinstance(b, Horiz):
            out.append(Horiz(Horiz(a, b.left), b.right))
        if isinstance(a, Vert) and isinstance(b, Vert):
            out.append(Vert(Horiz(a.first, b.first), Horiz(a.second, b.second)))
    # unit insertion, bounded by size
    room = max_leaves - leaves(t)
    if room >= 1:
        for u in _units(width(t), unit_leaf, max_leaves):
            if leaves(u) <= room:
                out.append(Vert(u, t))
                out.append(Vert(t, u))
    return out


def _neighbours(t, unit_leaf, max_leaves):
    yield from _rewrites_at(t, unit_leaf, max_leaves)
    if isinstance(t, Vert):
        for x in _neighbours(t.first, unit_leaf, max_leaves):
            yield Vert(x, t.second)
        for x in _neighbours(t.second, unit_leaf, max_leaves):
            yield Vert(t.first, x)
    elif isinstance(t, Horiz):
        for x in _neighbours(t.left, unit_leaf, max_leaves):
            yield Horiz(x, t.right)
        for x in _neighbours(t.right, unit_leaf, max_leaves):
            yield Horiz(t.left, x)


def rewrite_classes(terms, unit_leaf, max_leaves):
    """Connected components of ``terms`` under rewrites that stay within the size bound."""
    universe = set(terms)
    parent = {t: t for t in terms}

    def find(t):
        while parent[t] is not t:
            parent[t] = parent[parent[t]]
            t = parent[t]
        return t

    for t in terms:
        for n in _neighbours(t, unit_leaf, max_leaves):
            if n in universe and leaves(n) <= max_leaves:
                a, b = find(t), find(n)
                if a is not b:
                    parent[a] = b
    return {t: find(t) for t in terms}


# -- garden ----------------------------------------------------------------------------

def garden_by_brute_iso(generators, max_letters, graft):
    """Level-by-level grafting closure, deduplicated by exhaustive isomorphism search."""
    buckets: dict = {}
    levels = {1: []}

    def add(p, level):
        key = (p.inputs, p.outputs, tuple(sorted(p.labels)))
        for q in buckets.get(key, []):
            if brute_iso(p, q):
                return
        buckets.setdefault(key, []).append(p)
        levels[level].append(p)

    for g in generators:
        add(g, 1)
    for total in range(2, max_letters + 1):
        levels[total] = []
        for i in range(1, total):
            for a in levels[i]:
                for b in levels[total - i]:
                    for p in graft(a, b):
                        add(p, total)
    return {n: len(ps) for n, ps in levels.items()}
