"""Text output for plants: term syntax, Graphviz DOT and an ASCII strip drawing."""

from __future__ import annotations

from .errors import InvalidPlant
from .plant import Plant, canonical_plant, require_valid


def _atom(p: Plant, v: int) -> str:
    label = p.labels[v]
    if label == "?":
        nin, nout = p.sigs[v]
        return f"?{nin}->{nout}"
    return label


def layers(p: Plant) -> list[list] | None:
    """Split ``p`` into horizontal layers, each one vertex beside identity wires.

    Returns a list of ``(before, vertex, after)`` triples, where ``before`` and
    ``after`` count the identity wires to the left and right, or ``None`` if no
    decomposition was found (which does not happen for valid plants).
    """
    n = len(p.labels)
    roots = [p.up[("R", r)] for r in range(p.outputs)]

    def ready(frontier, v):
        nin = p.sigs[v][0]
        ins = [p.up[("i", v, j)] for j in range(nin)]
        if any(u not in frontier for u in ins):
            return None
        if nin == 0:
            return list(range(len(frontier) + 1))
        start = frontier.index(ins[0])
        if frontier[start:start + nin] != ins:
            return None
        return [start]

    def search(frontier, done, out):
        if len(done) == n:
            return out if frontier == roots else None
        for v in range(n):
            if v in done:
                continue
            spots = ready(frontier, v)
            if not spots:
                continue
            nin, nout = p.sigs[v]
            for s in spots:
                outs = [("o", v, j) for j in range(nout)]
                nxt = frontier[:s] + outs + frontier[s + nin:]
                found = search(nxt, done | {v}, out + [(s, v, len(frontier) - s - nin)])
                if found is not None:
                    return found
            if nin > 0:
                # a vertex with inputs has one placement; trying others first changes nothing
                return None
        return None

    return search([("L", i) for i in range(p.inputs)], frozenset(), [])


def plant_term(p: Plant) -> str:
    """A plant term (in the parser's grammar) denoting ``p``."""
    p = canonical_plant(p)
    if not p.labels:
        if p.inputs == 0:
            raise InvalidPlant("the empty plant has no term")
        return " * ".join(["id"] * p.inputs)
    steps = layers(p)
    if steps is None:
        raise InvalidPlant("plant admits no layered decomposition")
    rows = []
    for before, v, after in steps:
        parts = ["id"] * before + [_atom(p, v)] + ["id"] * after
        row = " * ".join(parts)
        rows.append(f"({row})" if len(parts) > 1 and len(steps) > 1 else row)
    return " ; ".join(rows)


def to_dot(p: Plant, name: str = "plant") -> str:
    require_valid(p)
    p = canonical_plant(p)
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    if p.inputs:
        leaves = " ".join(f"L{i};" for i in range(p.inputs))
        lines.append(f"  {{ rank=source; {leaves} }}")
    for i in range(p.inputs):
        lines.append(f'  L{i} [shape=point, xlabel="leaf {i}"];')
    for v, label in enumerate(p.labels):
        nin, nout = p.sigs[v]
        lines.append(f'  v{v} [shape=box, label="{label}", comment="{nin}->{nout}"];')
    for r in range(p.outputs):
        lines.append(f'  R{r} [shape=point, xlabel="root {r}"];')
    if p.outputs:
        roots = " ".join(f"R{r};" for r in range(p.outputs))
        lines.append(f"  {{ rank=sink; {roots} }}")

    def ref(port):
        kind = port[0]
        if kind == "L":
            return f"L{port[1]}", ""
        if kind == "R":
            return f"R{port[1]}", ""
        return f"v{port[1]}", f"{'out' if kind == 'o' else 'in'}{port[2]}"

    for d in sorted(p.up, key=lambda d: (d[0] != "i", d[1:])):
        u = p.up[d]
        (a, ta), (b, hb) = ref(u), ref(d)
        attrs = []
        if ta:
            attrs.append(f'taillabel="{ta}"')
        if hb:
            attrs.append(f'headlabel="{hb}"')
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {a} -> {b}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_ascii(p: Plant) -> str:
    """Draw ``p`` top to bottom, one vertex per row, wires as ``|``."""
    require_valid(p)
    p = canonical_plant(p)
    if not p.labels:
        return "\n".join(["  ".join(["|"] * p.inputs)] if p.inputs else [""]) + "\n"
    steps = layers(p)
    width = p.inputs
    out = []
    for before, v, after in steps:
        nin, nout = p.sigs[v]
        wires = ["|"] * width
        if wires:
            out.append("  ".join(wires))
        box = f"[{_atom(p, v)} {nin}>{nout}]"
        out.append("  ".join(["|"] * before + [box] + ["|"] * after))
        width = before + nout + after
    if width:
        out.append("  ".join(["|"] * width))
    return "\n".join(out) + "\n"


def render(p: Plant, fmt: str = "ascii") -> str:
    if fmt == "dot":
        return to_dot(p)
    if fmt == "ascii":
        return to_ascii(p)
    raise ValueError(f"unknown render format {fmt!r}")
