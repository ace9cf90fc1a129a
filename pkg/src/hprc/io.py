"""Text format for hypergraphs and deterministic JSON output.

Format (hMETIS-like, 0-based vertex ids, '#' starts a comment)::

    n m [fn=<kind>]
    mu: mu_0 ... mu_{n-1}          (optional)
    w_h [fn=<kind>] v_1 ... v_k    (m lines)

Kinds: standard, star, clique, card:p=<real>, card:g=<g0>,<g1>,...
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import DomainError, ParseError
from .hypergraph import CutFunctionSpec, Hyperedge, Hypergraph


def parse_cut_fn(text: str, line: int | None = None, col: int | None = None) -> CutFunctionSpec:
    try:
        if text in ("standard", "star", "clique"):
            return CutFunctionSpec(text)
        for prefix in ("card:", "cardinality:"):
            if text.startswith(prefix):
                arg = text[len(prefix):]
                if arg.startswith("p="):
                    return CutFunctionSpec.cardinality(p=float(arg[2:]))
                if arg.startswith("g="):
                    return CutFunctionSpec.cardinality(table=[float(v) for v in arg[2:].split(",")])
    except (ValueError, DomainError) as exc:
        raise ParseError(f"bad cut function {text!r}: {exc}", line, col) from exc
    raise ParseError(f"unknown cut function {text!r}", line, col)


def _tokens(line: str):
    """(token, 1-based column) pairs."""
    out = []
    i = 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((line[i:j], i + 1))
        i = j
    return out


def _int(tok, lineno, col, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected integer {what}, got {tok!r}", lineno, col) from None


def _float(tok, lineno, col, what):
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(f"expected number {what}, got {tok!r}", lineno, col) from None
    if not math.isfinite(v):
        raise ParseError(f"{what} must be finite", lineno, col)
    return v


def parse_hypergraph(text: str, override: CutFunctionSpec | None = None) -> Hypergraph:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = _tokens(body)
        if toks:
            lines.append((lineno, toks))
    if not lines:
        raise ParseError("empty input", 1, 1)
    lineno, toks = lines[0]
    if len(toks) not in (2, 3):
        raise ParseError("header must be 'n m [fn=<kind>]'", lineno, 1)
    n = _int(toks[0][0], lineno, toks[0][1], "vertex count")
    m = _int(toks[1][0], lineno, toks[1][1], "edge count")
    if n < 1 or m < 0:
        raise ParseError("need n >= 1 and m >= 0", lineno, 1)
    default = CutFunctionSpec.standard()
    if len(toks) == 3:
        tok, col = toks[2]
        if not tok.startswith("fn="):
            raise ParseError(f"unexpected header token {tok!r}", lineno, col)
        default = parse_cut_fn(tok[3:], lineno, col)
    rest = lines[1:]
    mu = None
    if rest and rest[0][1][0][0] == "mu:":
        lineno, toks = rest[0]
        vals = toks[1:]
        if len(vals) != n:
            raise ParseError(f"mu line has {len(vals)} values, expected {n}", lineno, 1)
        mu = [_float(t, lineno, c, "vertex measure") for t, c in vals]
        for (t, c), v in zip(vals, mu):
            if v <= 0:
                raise ParseError("vertex measures must be positive", lineno, c)
        rest = rest[1:]
    if len(rest) != m:
        where = rest[m][0] if len(rest) > m else (rest[-1][0] if rest else lines[0][0])
        raise ParseError(f"expected {m} hyperedge lines, found {len(rest)}", where, 1)
    edges = []
    for lineno, toks in rest:
        w = _float(toks[0][0], lineno, toks[0][1], "weight")
        if w <= 0:
            raise ParseError("weights must be positive", lineno, toks[0][1])
        spec = default
        body = toks[1:]
        if body and body[0][0].startswith("fn="):
            spec = parse_cut_fn(body[0][0][3:], lineno, body[0][1])
            body = body[1:]
        if override is not None:
            spec = override
        verts = []
        for t, c in body:
            v = _int(t, lineno, c, "vertex id")
            if not (0 <= v < n):
                raise ParseError(f"vertex id {v} out of range 0..{n - 1}", lineno, c)
            if v in verts:
                raise ParseError(f"vertex {v} repeated in hyperedge", lineno, c)
            verts.append(v)
        if len(verts) < 2:
            raise ParseError("hyperedge needs at least two vertices", lineno, toks[0][1])
        try:
            Hyperedge(tuple(verts), w, spec)
            Hypergraph(n, [(verts, w, spec)])
        except DomainError as exc:
            raise ParseError(str(exc), lineno, 1) from exc
        edges.append((verts, w, spec))
    return Hypergraph(n, edges, mu)


def read_hypergraph(path, override: CutFunctionSpec | None = None) -> Hypergraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_hypergraph(text, override)


def _num(v: float) -> str:
    v = float(v)
    return str(int(v)) if v.is_integer() else repr(v)


def format_hypergraph(G: Hypergraph) -> str:
    lines = [f"{G.n} {G.m}"]
    if not np.all(G.mu == 1.0):
        lines.append("mu: " + " ".join(_num(v) for v in G.mu))
    for e in G.edges:
        if e.spec.kind == "oracle":
            raise DomainError("oracle cut functions cannot be written to a file")
        lines.append(" ".join([_num(e.weight), "fn=" + e.spec.label()] + [str(v) for v in e.vertices]))
    return "\n".join(lines) + "\n"


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, finite floats, non-finite values as strings."""
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def read_vector(path, n: int) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        stripped = text.strip()
        if stripped.startswith("["):
            vals = [float(v) for v in json.loads(stripped)]
        else:
            vals = [float(t) for t in stripped.split()]
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad vector file: {exc}") from exc
    if len(vals) != n:
        raise ParseError(f"vector has {len(vals)} entries, expected {n}")
    return np.array(vals)


def parse_id_list(arg: str, n: int) -> list[int]:
    """Vertex ids from 'a,b,c' or from a file holding whitespace/comma-separated ids."""
    p = Path(arg)
    text = p.read_text() if p.is_file() else arg
    toks = text.replace(",", " ").split()
    try:
        ids = sorted({int(t) for t in toks})
    except ValueError as exc:
        raise ParseError(f"bad vertex list: {exc}") from exc
    if any(not (0 <= v < n) for v in ids):
        raise ParseError("vertex id out of range in cut")
    return ids


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read JSON from {path}: {exc}") from exc
