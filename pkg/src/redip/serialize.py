"""JSON interchange and Graphviz export for automata.

The JSON schema:

    {
      "alphabet": ["x", "r"],
      "states": 4,
      "edges": [{"src": 0, "dst": 1, "weight": "1/2", "symbol": "x"}, ...],
      "initial": {"0": "9/10"},
      "final": {"3": "1/2"}
    }

Weights are decimal-free fraction strings ("3" or "9/10"), never floats. The
"symbol" key is omitted for unlabeled edges.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import InvalidWeight, PgaParseError
from .pga import Edge, Pga, make_pga
from .rational import format_weight, parse_weight

_TOP_KEYS = {"alphabet", "states", "edges", "initial", "final"}
_EDGE_KEYS = {"src", "dst", "weight", "symbol"}


def pga_to_dict(a: Pga) -> dict[str, Any]:
    edges = []
    for e in a.edges:
        item: dict[str, Any] = {"src": e.src, "dst": e.dst, "weight": format_weight(e.weight)}
        if e.symbol is not None:
            item["symbol"] = e.symbol
        edges.append(item)
    return {
        "alphabet": list(a.alphabet),
        "states": a.num_states,
        "edges": edges,
        "initial": {str(q): format_weight(w) for q, w in sorted(a.initial.items())},
        "final": {str(q): format_weight(w) for q, w in sorted(a.final.items())},
    }


def pga_from_dict(data: Any) -> Pga:
    if not isinstance(data, dict):
        raise PgaParseError(f"expected an object, got {type(data).__name__}")
    extra = set(data) - _TOP_KEYS
    if extra:
        raise PgaParseError(f"unknown keys {sorted(extra)}")
    missing = _TOP_KEYS - set(data)
    if missing:
        raise PgaParseError(f"missing keys {sorted(missing)}")
    alphabet = data["alphabet"]
    if not isinstance(alphabet, list) or not all(isinstance(v, str) for v in alphabet):
        raise PgaParseError("alphabet must be a list of strings")
    states = data["states"]
    if not isinstance(states, int) or isinstance(states, bool) or states < 1:
        raise PgaParseError(f"states must be a positive integer, got {states!r}")
    if not isinstance(data["edges"], list):
        raise PgaParseError("edges must be a list")
    edges = []
    for pos, item in enumerate(data["edges"]):
        if not isinstance(item, dict):
            raise PgaParseError(f"edge {pos} is not an object")
        extra = set(item) - _EDGE_KEYS
        if extra:
            raise PgaParseError(f"edge {pos} has unknown keys {sorted(extra)}")
        try:
            src, dst = item["src"], item["dst"]
            weight = item["weight"]
        except KeyError as exc:
            raise PgaParseError(f"edge {pos} is missing {exc.args[0]}") from exc
        for name, v in (("src", src), ("dst", dst)):
            if not isinstance(v, int) or isinstance(v, bool):
                raise PgaParseError(f"edge {pos}: {name} must be an integer")
            if not 0 <= v < states:
                raise PgaParseError(
                    f"edge {pos} references state {v} of a {states}-state automaton"
                )
        symbol = item.get("symbol")
        if symbol is not None and symbol not in alphabet:
            raise PgaParseError(f"edge {pos}: symbol {symbol!r} not in alphabet")
        try:
            w = parse_weight(weight)
        except InvalidWeight as exc:
            raise PgaParseError(f"edge {pos}: {exc}") from exc
        edges.append(Edge(src, dst, w, symbol))

    def weight_map(key: str) -> dict[int, Any]:
        raw = data[key]
        if not isinstance(raw, dict):
            raise PgaParseError(f"{key} must be an object")
        out = {}
        for qs, ws in raw.items():
            try:
                q = int(qs)
            except (TypeError, ValueError):
                raise PgaParseError(f"{key}: state key {qs!r} is not an integer") from None
            if not 0 <= q < states:
                raise PgaParseError(f"{key} references state {q} of a {states}-state automaton")
            try:
                out[q] = parse_weight(ws)
            except InvalidWeight as exc:
                raise PgaParseError(f"{key}[{q}]: {exc}") from exc
        return out

    return make_pga(alphabet, states, edges, weight_map("initial"), weight_map("final"))


def pga_to_json(a: Pga) -> str:
    return json.dumps(pga_to_dict(a), indent=2) + "\n"


def pga_from_json(text: str) -> Pga:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PgaParseError(f"invalid JSON: {exc}") from exc
    return pga_from_dict(data)


def load_pga(path: str) -> Pga:
    with open(path, "r", encoding="utf-8") as fh:
        return pga_from_json(fh.read())


def save_pga(a: Pga, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(pga_to_json(a))


def _edge_label(e: Edge) -> str:
    if e.symbol is None:
        return format_weight(e.weight)
    if e.weight == 1:
        return e.symbol
    return f"{format_weight(e.weight)}·{e.symbol}"


def pga_to_dot(a: Pga, name: str = "pga") -> str:
    """Graphviz rendering: circles for states, dangling arrows for initial and
    final weights (unlabeled when the weight is 1)."""
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  node [shape=circle fontname="monospace"];']
    for q in range(a.num_states):
        lines.append(f"  q{q} [label=\"{q}\"];")
    for q, w in sorted(a.initial.items()):
        lines.append(f"  __in{q} [shape=none label=\"\" width=0 height=0];")
        label = "" if w == 1 else f" [label=\"{format_weight(w)}\"]"
        lines.append(f"  __in{q} -> q{q}{label};")
    for q, w in sorted(a.final.items()):
        lines.append(f"  __out{q} [shape=none label=\"\" width=0 height=0];")
        label = "" if w == 1 else f" [label=\"{format_weight(w)}\"]"
        lines.append(f"  q{q} -> __out{q}{label};")
    for e in a.edges:
        lines.append(f"  q{e.src} -> q{e.dst} [label=\"{_edge_label(e)}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"
