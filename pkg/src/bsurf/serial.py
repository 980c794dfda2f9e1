"""JSON round-tripping for diagrams, states, paths, and triples, plus DOT
export.  Rationals cross the boundary as "p/q" strings, never floats;
serialization is canonical so identical objects give byte-identical text.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .core_diagram import DiagramWindow, Edge, FinitePath, Level
from .iet_zip import PermutationPair, TripleData
from .induction import RauzyGraph
from .path_space import PathDescriptor, TailSpec
from .states_charts import State


def parse_rational(text) -> Fraction:
    return Fraction(str(text))


def format_rational(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def window_to_json(w: DiagramWindow) -> dict:
    return {
        "levels": [{"index": lv.index, "vertices": list(lv.vertices)} for lv in w.levels],
        "edges": [
            {"level": e.level, "id": e.id, "source": e.source, "range": e.range,
             "r_rank": e.r_rank, "s_rank": e.s_rank}
            for es in w.edges for e in es
        ],
    }


def window_from_json(data) -> DiagramWindow:
    levels = tuple(Level(lv["index"], tuple(lv["vertices"]))
                   for lv in sorted(data["levels"], key=lambda d: d["index"]))
    by_level = {}
    for e in data["edges"]:
        by_level.setdefault(e["level"], []).append(
            Edge(level=e["level"], id=e["id"], source=e["source"], range=e["range"],
                 r_rank=e["r_rank"], s_rank=e["s_rank"]))
    edges = tuple(tuple(sorted(by_level.get(lv.index, ()), key=lambda e: e.id))
                  for lv in levels[1:])
    return DiagramWindow(levels=levels, edges=edges)


def state_to_json(st: State) -> dict:
    return {
        "nu_r": {str(n): {v: format_rational(x) for v, x in vec.items()}
                 for n, vec in st.nu_r.items()},
        "nu_s": {str(n): {v: format_rational(x) for v, x in vec.items()}
                 for n, vec in st.nu_s.items()},
    }


def state_from_json(data) -> State:
    return State(
        nu_r={int(n): {v: parse_rational(x) for v, x in vec.items()}
              for n, vec in data["nu_r"].items()},
        nu_s={int(n): {v: parse_rational(x) for v, x in vec.items()}
              for n, vec in data["nu_s"].items()},
    )


def tail_to_json(t: TailSpec) -> dict:
    out = {"kind": t.kind}
    if t.symbol is not None:
        out["symbol"] = t.symbol
    if t.cycle:
        out["cycle"] = list(t.cycle)
    return out


def tail_from_json(data) -> TailSpec:
    return TailSpec(data["kind"], symbol=data.get("symbol"),
                    cycle=tuple(data.get("cycle", ())))


def path_to_json(p: PathDescriptor) -> dict:
    return {
        "left": tail_to_json(p.left),
        "core": {"start_level": p.core.start_level, "edges": list(p.core.ids())},
        "right": tail_to_json(p.right),
    }


def path_from_json(data, w: DiagramWindow) -> PathDescriptor:
    start = data["core"]["start_level"]
    edges = tuple(w.edge_by_id(start + 1 + k, eid)
                  for k, eid in enumerate(data["core"]["edges"]))
    return PathDescriptor(tail_from_json(data["left"]),
                          FinitePath(start, edges),
                          tail_from_json(data["right"]))


def triple_to_json(t: TripleData) -> dict:
    return {
        "pi": str(t.perm),
        "lambda": {a: format_rational(x) for a, x in t.lam.items()},
        "tau": {a: format_rational(x) for a, x in t.tau.items()},
    }


def triple_from_json(data, allow_small=False) -> TripleData:
    perm = PermutationPair.parse(data["pi"], allow_small=allow_small)
    return TripleData(perm,
                      {a: parse_rational(x) for a, x in data["lambda"].items()},
                      {a: parse_rational(x) for a, x in data["tau"].items()})


def window_to_dot(w: DiagramWindow) -> str:
    """Left-to-right layout, vertices by declaration order, edges labeled
    'id:r_rank/s_rank'."""
    lines = ["digraph bratteli {", "  rankdir=LR;"]
    for lv in w.levels:
        lines.append(f'  subgraph cluster_{lv.index.__str__().replace("-", "m")} {{')
        lines.append(f'    label="V_{lv.index}";')
        for v in lv.vertices:
            lines.append(f'    "{lv.index}:{v}" [label="{v}"];')
        lines.append("  }")
    for es in w.edges:
        for e in es:
            lines.append(
                f'  "{e.level - 1}:{e.source}" -> "{e.level}:{e.range}" '
                f'[label="{e.id}:{e.r_rank}/{e.s_rank}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def rauzy_graph_to_dot(g: RauzyGraph) -> str:
    lines = ["digraph rauzy {", "  rankdir=LR;"]

    def name(key):
        return "".join(str(k) for k in key)

    for node in g.nodes:
        rep = g.representatives[node]
        label = str(rep).replace(" / ", "\\n")
        lines.append(f'  "{name(node)}" [label="{label}"];')
    for a, eps, b in g.edges:
        lines.append(f'  "{name(a)}" -> "{name(b)}" [label="{eps}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
