import json
from fractions import Fraction
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zxforge.circuits import Gate, circuit_unitary, parse_circuit
from zxforge.errors import MalformedDiagram, TooLarge
from zxforge.zxgraph import (H, IN, OUT, X, Z, ZxDiagram, ZxNode, circuit_to_zx, eval_diagram,
                             export, from_json, hadamard_box, is_isomorphic, load_diagram,
                             norm_phase, parse_phase, spider, to_dot, to_json, wire)

from diagrams import random_diagram

S2 = np.sqrt(2)
PLUS = np.array([1, 1]) / S2
MINUS = np.array([1, -1]) / S2
ALPHA = Fraction(1, 3)
E = np.exp(1j * np.pi / 3)


def data_path(name):
    return resources.files("zxforge").joinpath("data", name)


# the six elementary one-qubit diagrams, as (diagram, middle-column value)
ELEMENTARY = [
    ("green state", spider(Z, 0, 0, 1), np.array([[1], [1]])),
    ("red state", spider(X, 0, 0, 1), S2 * np.array([[1], [0]])),
    ("green effect", spider(Z, 0, 1, 0), np.array([[1, 1]])),
    ("red effect", spider(X, 0, 1, 0), S2 * np.array([[1, 0]])),
    ("green phase", spider(Z, ALPHA, 1, 1), np.diag([1, E])),
    ("red phase", spider(X, ALPHA, 1, 1), np.outer(PLUS, PLUS) + E * np.outer(MINUS, MINUS)),
]


@pytest.mark.parametrize("name,d,expected", ELEMENTARY, ids=[e[0] for e in ELEMENTARY])
def test_elementary_table(name, d, expected):
    np.testing.assert_allclose(eval_diagram(d), expected, atol=1e-12)


def test_state_right_column_forms():
    np.testing.assert_allclose(eval_diagram(spider(Z, 0, 0, 1))[:, 0], S2 * PLUS, atol=1e-12)
    # the effects carry sqrt 2, matching the explicit sums <0|+<1| and <+|+<-|
    np.testing.assert_allclose(eval_diagram(spider(Z, 0, 1, 0))[0], S2 * PLUS, atol=1e-12)


def test_spider_case_map():
    m = eval_diagram(spider(Z, 0, 2, 1))
    np.testing.assert_allclose(m, [[1, 0, 0, 0], [0, 0, 0, 1]])


def test_bare_wire_and_hadamard():
    np.testing.assert_array_equal(eval_diagram(wire()), np.eye(2))
    h = eval_diagram(hadamard_box())
    np.testing.assert_allclose(h, np.array([[1, 1], [1, -1]]) / S2, atol=1e-15)
    np.testing.assert_allclose(eval_diagram(hadamard_box().then(hadamard_box())), np.eye(2),
                               atol=1e-15)


def test_closed_diagrams_are_scalars():
    assert eval_diagram(spider(Z, 0, 0, 0)).shape == (1, 1)
    np.testing.assert_allclose(eval_diagram(spider(Z, 0, 0, 0)), [[2]])
    np.testing.assert_allclose(eval_diagram(spider(X, 1, 0, 0)), [[0]], atol=1e-15)
    loop = ZxDiagram()
    v = loop.add_node(Z, Fraction(1, 2))
    loop.add_edge(v, v)
    np.testing.assert_allclose(eval_diagram(loop), [[1 + 1j]], atol=1e-15)


def test_phase_normalization():
    assert norm_phase(Fraction(9, 4)) == Fraction(1, 4)
    assert norm_phase(Fraction(-1, 2)) == Fraction(3, 2)
    assert parse_phase("-1/4") == Fraction(7, 4)
    with pytest.raises(ValueError):
        parse_phase("pi")


@pytest.mark.parametrize("text", [
    "qubits 1\nH 0\n", "qubits 1\nZ 0\n", "qubits 1\nY 0\n", "qubits 2\nCNOT 0 1\n",
    "qubits 2\nCNOT 1 0\n", "qubits 1\nRX 1/3 0\nRZ 5/7 0\nS 0\nTD 0\n",
    "qubits 3\nCCNOT 0 1 2\n", "qubits 3\nH 1\nCNOT 1 2\nT 0\nCCNOT 2 0 1\nX 1\n",
])
def test_circuit_to_zx_matches_unitary(text):
    c = parse_circuit(text)
    np.testing.assert_allclose(eval_diagram(circuit_to_zx(c)), circuit_unitary(c), atol=1e-9)


def test_single_gate_translations():
    d = circuit_to_zx(parse_circuit("qubits 1\nH 0\n"))
    assert d.counts()["hadamards"] == 1 and len(d.nodes) == 3
    d = circuit_to_zx(parse_circuit("qubits 1\nZ 0\n"))
    (v,) = d.spiders()
    assert d.nodes[v].kind == Z and d.nodes[v].phase == 1
    d = circuit_to_zx(parse_circuit("qubits 2\nCNOT 0 1\n"))
    assert sorted(d.nodes[v].kind for v in d.spiders()) == [X, Z]
    np.testing.assert_array_equal(np.round(eval_diagram(d).real, 12),
                                  [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def test_json_roundtrip_is_byte_identical():
    for seed in range(20):
        d = random_diagram(seed)
        text = to_json(d)
        back = from_json(text)
        assert to_json(back) == text
        np.testing.assert_allclose(eval_diagram(back), eval_diagram(d), atol=1e-12)


def test_one_wire_json():
    doc = json.loads(export(wire(), "json"))
    assert len(doc["nodes"]) == 2 and len(doc["edges"]) == 1
    assert {n["kind"] for n in doc["nodes"]} == {IN, OUT}


def test_dot_export_colours():
    d = load_diagram(data_path("fig_zx_comp1.zx.json"))
    dot = to_dot(d)
    assert dot.startswith("digraph")
    assert dot.count("fillcolor=green") + dot.count("fillcolor=red") == 4
    dot = export(circuit_to_zx(parse_circuit("qubits 1\nH 0\n")), "dot")
    assert "shape=box" in dot and "yellow" in dot


@pytest.mark.parametrize("doc", [
    '{"nodes": [{"id": 0, "kind": "Q"}], "edges": []}',
    '{"nodes": [{"id": 0, "kind": "in", "pos": 0}], "edges": []}',
    '{"nodes": [{"id": 0, "kind": "H"}], "edges": [[0, 1]]}',
    '{"nodes": [{"id": 0, "kind": "Z", "phase": "1/2"}, {"id": 0, "kind": "X"}], "edges": []}',
    '{"nodes": [{"id": 0, "kind": "in", "pos": 1}, {"id": 1, "kind": "out", "pos": 0}], '
    '"edges": [[0, 1]]}',
    'not json',
    '{"edges": []}',
])
def test_malformed_documents(doc):
    with pytest.raises(MalformedDiagram):
        from_json(doc)


def test_unknown_gate_is_rejected():
    with pytest.raises(ValueError):
        Gate("FOO", (0,))


def test_too_many_boundaries():
    with pytest.raises(TooLarge):
        eval_diagram(wire(6))


def test_relabelling_preserves_evaluation():
    rng = np.random.default_rng(3)
    for seed in range(30):
        d = random_diagram(seed)
        ids = sorted(d.nodes)
        perm = dict(zip(ids, (int(i) + 100 for i in rng.permutation(ids))))
        e = d.relabel(perm)
        np.testing.assert_allclose(eval_diagram(e), eval_diagram(d), atol=1e-12)
        assert is_isomorphic(d, e)


def test_edge_order_is_irrelevant():
    d = random_diagram(11)
    shuffled = ZxDiagram(list(d.nodes.values()), list(reversed(sorted(d.edges))), d.scalar)
    np.testing.assert_allclose(eval_diagram(shuffled), eval_diagram(d), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_composition_is_matrix_product_and_kron(s1, s2):
    rng = np.random.default_rng(s1 * 10_001 + s2)
    def one_qubit():
        kind = [Z, X][rng.integers(2)]
        return spider(kind, Fraction(int(rng.integers(8)), 4), 1, 1)
    a, b = one_qubit(), one_qubit()
    if rng.random() < 0.5:
        a = a.then(hadamard_box())
    np.testing.assert_allclose(eval_diagram(a.then(b)), eval_diagram(b) @ eval_diagram(a),
                               atol=1e-9)
    np.testing.assert_allclose(eval_diagram(a.tensor(b)),
                               np.kron(eval_diagram(a), eval_diagram(b)), atol=1e-9)


def test_node_invariants():
    with pytest.raises(MalformedDiagram):
        ZxNode(0, IN)
    with pytest.raises(MalformedDiagram):
        ZxNode(0, Z, 0, pos=1)
    d = ZxDiagram()
    h = d.add_node(H)
    with pytest.raises(MalformedDiagram):
        d.validate()
    assert h in d.hadamards()
