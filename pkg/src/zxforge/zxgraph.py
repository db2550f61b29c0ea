"""ZX-diagrams as open multigraphs, and their tensor semantics.

Spiders are unnormalized: a Z spider with phase ``a`` maps ``|0..0> -> |0..0>``,
``|1..1> -> e^{ia}|1..1>`` and kills every other basis state; an X spider does the
same in the ``|+>/|->`` basis. Phases are stored as exact fractions of pi in
``[0, 2)``. The Hadamard node is the normalized H matrix.

Leg direction is irrelevant for the spider and Hadamard tensors, so edges are
unordered; only boundary positions fix how the evaluated tensor is read as an
``H_n -> H_m`` matrix.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import count

import numpy as np

from .circuits import Circuit, expand_ccnot
from .errors import MalformedDiagram, TooLarge, UnsupportedGate
from .qcore import HADAMARD, SQRT2

Z, X, H, IN, OUT = "Z", "X", "H", "in", "out"
SPIDERS = (Z, X)
KINDS = (Z, X, H, IN, OUT)

MAX_BOUNDARY = 10
MAX_NODES = 64
MAX_RANK = 24


def norm_phase(phase) -> Fraction:
    """Reduce a phase (a multiple of pi) into [0, 2)."""
    return Fraction(phase) % 2


def format_phase(phase: Fraction) -> str:
    return f"{phase.numerator}/{phase.denominator}"


def parse_phase(text: str) -> Fraction:
    num, _, den = str(text).partition("/")
    return norm_phase(Fraction(int(num), int(den) if den else 1))


@dataclass(frozen=True)
class ZxNode:
    id: int
    kind: str
    phase: Fraction = Fraction(0)
    pos: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedDiagram(f"unknown node kind {self.kind!r}")
        object.__setattr__(self, "phase", norm_phase(self.phase) if self.kind in SPIDERS else Fraction(0))
        if self.kind in (IN, OUT):
            if self.pos is None or self.pos < 0:
                raise MalformedDiagram(f"boundary node {self.id} needs a position")
        elif self.pos is not None:
            raise MalformedDiagram(f"only boundary nodes carry a position (node {self.id})")

    @property
    def is_spider(self) -> bool:
        return self.kind in SPIDERS

    @property
    def is_boundary(self) -> bool:
        return self.kind in (IN, OUT)


def _edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a <= b else (b, a)


class ZxDiagram:
    """Open undirected multigraph of spiders, Hadamard nodes and boundaries.

    Edges form a multiset of unordered pairs; self-loops are allowed. ``scalar``
    is the global factor multiplying the denoted map.
    """

    def __init__(self, nodes=(), edges=(), scalar: complex = 1.0):
        self.nodes: dict[int, ZxNode] = {}
        for n in nodes:
            if n.id in self.nodes:
                raise MalformedDiagram(f"duplicate node id {n.id}")
            self.nodes[n.id] = n
        self.edges: list[tuple[int, int]] = []
        for a, b in edges:
            self.add_edge(a, b)
        self.scalar = complex(scalar)

    # construction -------------------------------------------------------
    def copy(self) -> ZxDiagram:
        d = ZxDiagram(scalar=self.scalar)
        d.nodes = dict(self.nodes)
        d.edges = list(self.edges)
        return d

    def fresh_id(self) -> int:
        return max(self.nodes, default=-1) + 1

    def add_node(self, kind: str, phase=0, pos: int | None = None) -> int:
        nid = self.fresh_id()
        self.nodes[nid] = ZxNode(nid, kind, Fraction(phase), pos)
        return nid

    def add_edge(self, a: int, b: int) -> None:
        if a not in self.nodes or b not in self.nodes:
            raise MalformedDiagram(f"edge ({a}, {b}) has a missing endpoint")
        self.edges.append(_edge(a, b))

    def remove_edge(self, a: int, b: int) -> None:
        try:
            self.edges.remove(_edge(a, b))
        except ValueError:
            raise MalformedDiagram(f"no edge ({a}, {b})") from None

    def remove_node(self, v: int) -> None:
        del self.nodes[v]
        self.edges = [e for e in self.edges if v not in e]

    def set_phase(self, v: int, phase) -> None:
        self.nodes[v] = replace(self.nodes[v], phase=norm_phase(phase))

    def set_kind(self, v: int, kind: str) -> None:
        self.nodes[v] = replace(self.nodes[v], kind=kind)

    # queries ------------------------------------------------------------
    def neighbors(self, v: int) -> list[int]:
        """Neighbors with multiplicity; a self-loop lists ``v`` twice."""
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            if b == v:
                out.append(a)
        return out

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def edge_count(self, a: int, b: int) -> int:
        return self.edges.count(_edge(a, b))

    def self_loops(self, v: int) -> int:
        return self.edges.count((v, v))

    def boundary(self, kind: str) -> list[int]:
        ids = [n.id for n in self.nodes.values() if n.kind == kind]
        return sorted(ids, key=lambda i: self.nodes[i].pos)

    def inputs(self) -> list[int]:
        return self.boundary(IN)

    def outputs(self) -> list[int]:
        return self.boundary(OUT)

    @property
    def n_inputs(self) -> int:
        return len(self.inputs())

    @property
    def m_outputs(self) -> int:
        return len(self.outputs())

    def spiders(self) -> list[int]:
        return sorted(v for v, n in self.nodes.items() if n.is_spider)

    def hadamards(self) -> list[int]:
        return sorted(v for v, n in self.nodes.items() if n.kind == H)

    def counts(self) -> dict:
        return {"nodes": len(self.nodes), "edges": len(self.edges),
                "hadamards": len(self.hadamards())}

    def components(self) -> list[set[int]]:
        adj = {v: set() for v in self.nodes}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        seen, comps = set(), []
        for v in sorted(self.nodes):
            if v in seen:
                continue
            stack, comp = [v], set()
            while stack:
                u = stack.pop()
                if u in comp:
                    continue
                comp.add(u)
                stack.extend(adj[u] - comp)
            seen |= comp
            comps.append(comp)
        return comps

    def validate(self) -> None:
        for a, b in self.edges:
            if a not in self.nodes or b not in self.nodes:
                raise MalformedDiagram(f"edge ({a}, {b}) has a missing endpoint")
        for v, n in self.nodes.items():
            deg = self.degree(v)
            if n.kind == H and deg != 2:
                raise MalformedDiagram(f"Hadamard node {v} has degree {deg}")
            if n.is_boundary and deg != 1:
                raise MalformedDiagram(f"boundary node {v} has degree {deg}")
        for kind in (IN, OUT):
            pos = sorted(self.nodes[v].pos for v in self.boundary(kind))
            if pos != list(range(len(pos))):
                raise MalformedDiagram(f"{kind} positions {pos} are not 0..{len(pos) - 1}")

    def canonical(self) -> tuple:
        nodes = tuple(sorted((n.id, n.kind, n.phase, n.pos if n.pos is not None else -1)
                             for n in self.nodes.values()))
        return nodes, tuple(sorted(self.edges)), self.scalar

    def same_as(self, other: ZxDiagram) -> bool:
        return self.canonical() == other.canonical()

    def relabel(self, mapping: dict[int, int]) -> ZxDiagram:
        d = ZxDiagram(scalar=self.scalar)
        for v, n in self.nodes.items():
            d.nodes[mapping[v]] = replace(n, id=mapping[v])
        d.edges = [_edge(mapping[a], mapping[b]) for a, b in self.edges]
        return d

    def __repr__(self):
        return (f"ZxDiagram({len(self.nodes)} nodes, {len(self.edges)} edges, "
                f"{self.n_inputs}->{self.m_outputs}, scalar={self.scalar:.6g})")

    # composition --------------------------------------------------------
    def tensor(self, other: ZxDiagram) -> ZxDiagram:
        """Side-by-side juxtaposition; ``other``'s wires come after ours."""
        off = self.fresh_id()
        d = self.copy()
        n_in, n_out = self.n_inputs, self.m_outputs
        for v, n in other.nodes.items():
            pos = n.pos
            if n.kind == IN:
                pos += n_in
            elif n.kind == OUT:
                pos += n_out
            d.nodes[v + off] = replace(n, id=v + off, pos=pos)
        d.edges.extend(_edge(a + off, b + off) for a, b in other.edges)
        d.scalar = self.scalar * other.scalar
        return d

    def then(self, other: ZxDiagram) -> ZxDiagram:
        """Sequential composition: ``other`` applied after ``self``."""
        if self.m_outputs != other.n_inputs:
            raise MalformedDiagram(f"cannot plug {self.m_outputs} outputs into {other.n_inputs} inputs")
        off = self.fresh_id()
        d = self.copy()
        for v, n in other.nodes.items():
            d.nodes[v + off] = replace(n, id=v + off)
        d.edges.extend(_edge(a + off, b + off) for a, b in other.edges)
        d.scalar = self.scalar * other.scalar
        for o, i in zip(self.outputs(), other.inputs()):
            i += off
            (a,), (b,) = d.neighbors(o), d.neighbors(i)
            d.remove_node(o)
            d.remove_node(i)
            d.add_edge(a, b)
        return d


def wire(n: int = 1) -> ZxDiagram:
    """Identity diagram on ``n`` qubits."""
    d = ZxDiagram()
    for k in range(n):
        i = d.add_node(IN, pos=k)
        o = d.add_node(OUT, pos=k)
        d.add_edge(i, o)
    return d


def spider(kind: str, phase=0, n_in: int = 1, n_out: int = 1) -> ZxDiagram:
    d = ZxDiagram()
    ins = [d.add_node(IN, pos=k) for k in range(n_in)]
    s = d.add_node(kind, phase)
    outs = [d.add_node(OUT, pos=k) for k in range(n_out)]
    for b in ins + outs:
        d.add_edge(b, s)
    return d


def hadamard_box() -> ZxDiagram:
    d = ZxDiagram()
    i = d.add_node(IN, pos=0)
    h = d.add_node(H)
    o = d.add_node(OUT, pos=0)
    d.add_edge(i, h)
    d.add_edge(h, o)
    return d


# evaluation --------------------------------------------------------------

_EIGHTH_ROOTS = [complex(np.cos(k * np.pi / 4), np.sin(k * np.pi / 4)) for k in range(8)]
_EIGHTH_ROOTS[0], _EIGHTH_ROOTS[2], _EIGHTH_ROOTS[4], _EIGHTH_ROOTS[6] = 1, 1j, -1, -1j


def phase_factor(phase) -> complex:
    """``e^{i pi phase}``, exact for multiples of pi/4."""
    phase = norm_phase(phase)
    if (4 * phase).denominator == 1:
        return _EIGHTH_ROOTS[int(4 * phase)]
    return complex(np.exp(1j * np.pi * float(phase)))


def spider_tensor(kind: str, phase: Fraction, legs: int) -> np.ndarray | complex:
    ph = phase_factor(phase)
    if legs == 0:
        return np.array(1 + ph)
    if kind == Z:
        t = np.zeros((2,) * legs, dtype=complex)
        t[(0,) * legs] = 1.0
        t[(1,) * legs] = ph
        return t
    parity = np.indices((2,) * legs).sum(axis=0) % 2
    return (1 + ph * (1 - 2 * parity)).astype(complex) / SQRT2**legs


def _contract_pair(a, la, b, lb):
    shared = [x for x in la if x in lb]
    out = [x for x in la if x not in shared] + [x for x in lb if x not in shared]
    letters = {x: chr(65 + k) if k < 26 else chr(71 + k) for k, x in enumerate(dict.fromkeys(la + lb))}
    spec = ("".join(letters[x] for x in la) + "," + "".join(letters[x] for x in lb)
            + "->" + "".join(letters[x] for x in out))
    return np.einsum(spec, a, b), out


def _reduce_self(t, labels):
    if len(set(labels)) == len(labels):
        return t, labels
    out = [x for x in labels if labels.count(x) == 1]
    letters = {x: chr(65 + k) if k < 26 else chr(71 + k) for k, x in enumerate(dict.fromkeys(labels))}
    spec = "".join(letters[x] for x in labels) + "->" + "".join(letters[x] for x in out)
    return np.einsum(spec, t), out


def eval_diagram(d: ZxDiagram) -> np.ndarray:
    """The ``2**m x 2**n`` matrix denoted by ``d``, scalar included."""
    d.validate()
    ins, outs = d.inputs(), d.outputs()
    if len(ins) + len(outs) > MAX_BOUNDARY or len(d.nodes) > MAX_NODES:
        raise TooLarge(f"diagram with {len(d.nodes)} nodes and {len(ins)}+{len(outs)} boundaries "
                       "exceeds the evaluator caps")
    fresh = count()
    ends: dict[int, list] = {v: [] for v in d.nodes}
    for a, b in d.edges:
        label = next(fresh)
        ends[a].append(label)
        ends[b].append(label)
    open_label = {}
    tensors = []
    for v in sorted(d.nodes):
        n = d.nodes[v]
        if n.is_boundary:
            open_label[v] = next(fresh)
            tensors.append((np.eye(2, dtype=complex), [open_label[v], ends[v][0]]))
        elif n.kind == H:
            tensors.append((HADAMARD, ends[v]))
        else:
            tensors.append((spider_tensor(n.kind, n.phase, len(ends[v])), ends[v]))
    tensors = [_reduce_self(t, lab) for t, lab in tensors]

    while len(tensors) > 1:
        best = None
        for i in range(len(tensors)):
            li = tensors[i][1]
            for j in range(i + 1, len(tensors)):
                lj = tensors[j][1]
                shared = len(set(li) & set(lj))
                rank = len(li) + len(lj) - 2 * shared
                key = (shared == 0, rank, i, j)
                if best is None or key < best:
                    best = key
        _, rank, i, j = best
        if rank > MAX_RANK:
            raise TooLarge(f"intermediate tensor of rank {rank} exceeds the cap of {MAX_RANK}")
        (a, la), (b, lb) = tensors[i], tensors[j]
        merged = _contract_pair(a, la, b, lb)
        tensors = [t for k, t in enumerate(tensors) if k not in (i, j)] + [merged]

    if tensors:
        t, labels = tensors[0]
    else:
        t, labels = np.array(1.0 + 0j), []
    order = [open_label[v] for v in outs] + [open_label[v] for v in ins]
    t = np.transpose(t, [labels.index(x) for x in order]) if order else t
    return d.scalar * np.asarray(t, dtype=complex).reshape(2 ** len(outs), 2 ** len(ins))


# circuits ----------------------------------------------------------------

def circuit_to_zx(c: Circuit) -> ZxDiagram:
    """Translate a circuit gate by gate; the result denotes exactly its unitary."""
    c = expand_ccnot(c)
    d = ZxDiagram()
    frontier = [d.add_node(IN, pos=q) for q in range(c.n_qubits)]

    def append(q, kind, phase=0):
        v = d.add_node(kind, phase)
        d.add_edge(frontier[q], v)
        frontier[q] = v
        return v

    for g in c.gates:
        k = g.kind
        if k == "H":
            append(g.targets[0], H)
        elif k in ("Z", "S", "T", "SD", "TD", "RZ"):
            append(g.targets[0], Z, g.phase)
        elif k in ("X", "RX"):
            append(g.targets[0], X, g.phase)
        elif k == "Y":
            # Y = i X Z
            append(g.targets[0], Z, 1)
            append(g.targets[0], X, 1)
            d.scalar *= 1j
        elif k == "CNOT":
            ctrl = append(g.targets[0], Z)
            targ = append(g.targets[1], X)
            d.add_edge(ctrl, targ)
            d.scalar *= SQRT2
        else:
            raise UnsupportedGate(f"no ZX translation for {k}")
    for q in range(c.n_qubits):
        o = d.add_node(OUT, pos=q)
        d.add_edge(frontier[q], o)
    return d


# serialization -----------------------------------------------------------

def to_dict(d: ZxDiagram) -> dict:
    nodes = []
    for v in sorted(d.nodes):
        n = d.nodes[v]
        entry = {"id": v, "kind": n.kind}
        if n.is_spider:
            entry["phase"] = format_phase(n.phase)
        if n.is_boundary:
            entry["pos"] = n.pos
        nodes.append(entry)
    return {"nodes": nodes, "edges": [list(e) for e in sorted(d.edges)],
            "scalar": {"re": d.scalar.real, "im": d.scalar.imag}}


def from_dict(data: dict) -> ZxDiagram:
    try:
        nodes = []
        for entry in data["nodes"]:
            kind = entry["kind"]
            phase = parse_phase(entry["phase"]) if "phase" in entry else Fraction(0)
            nodes.append(ZxNode(int(entry["id"]), kind, phase, entry.get("pos")))
        scalar = data.get("scalar", {"re": 1.0, "im": 0.0})
        d = ZxDiagram(nodes, [tuple(e) for e in data["edges"]],
                      complex(scalar["re"], scalar["im"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MalformedDiagram):
            raise
        raise MalformedDiagram(f"bad diagram document: {exc}") from exc
    d.validate()
    return d


def to_json(d: ZxDiagram) -> str:
    return json.dumps(to_dict(d), indent=2, sort_keys=True) + "\n"


def from_json(text: str) -> ZxDiagram:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDiagram(f"invalid JSON: {exc}") from exc
    return from_dict(data)


_DOT_STYLE = {
    Z: 'shape=circle, style=filled, fillcolor=green',
    X: 'shape=circle, style=filled, fillcolor=red',
    H: 'shape=box, style=filled, fillcolor=yellow',
    IN: 'shape=plaintext',
    OUT: 'shape=plaintext',
}


def to_dot(d: ZxDiagram) -> str:
    lines = ["digraph zx {", "  rankdir=TB;", "  edge [dir=none];"]
    for v in sorted(d.nodes):
        n = d.nodes[v]
        if n.is_spider:
            label = "" if n.phase == 0 else _phase_label(n.phase)
        elif n.kind == H:
            label = "H"
        else:
            label = f"{n.kind}{n.pos}"
        lines.append(f'  n{v} [label="{label}", {_DOT_STYLE[n.kind]}];')
    for a, b in sorted(d.edges):
        lines.append(f"  n{a} -> n{b};")
    if d.scalar != 1:
        lines.append(f'  label="scalar = {d.scalar:.12g}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _phase_label(phase: Fraction) -> str:
    if phase.denominator == 1:
        return "π" if phase.numerator == 1 else f"{phase.numerator}π"
    num = "" if phase.numerator == 1 else str(phase.numerator)
    return f"{num}π/{phase.denominator}"


def export(d: ZxDiagram, format: str = "json") -> str:
    if format == "json":
        return to_json(d)
    if format == "dot":
        return to_dot(d)
    raise ValueError(f"unknown export format {format!r}")


def load_diagram(path) -> ZxDiagram:
    with open(path, encoding="utf-8") as fh:
        return from_json(fh.read())


def is_isomorphic(a: ZxDiagram, b: ZxDiagram) -> bool:
    """Graph isomorphism respecting kinds, phases and boundary positions (scalar ignored)."""
    import networkx as nx
    from networkx.algorithms.isomorphism import categorical_node_match

    def graph(d):
        g = nx.MultiGraph()
        for v, n in d.nodes.items():
            g.add_node(v, key=(n.kind, n.phase, n.pos))
        g.add_edges_from(d.edges)
        return g

    return nx.is_isomorphic(graph(a), graph(b), node_match=categorical_node_match("key", None))
