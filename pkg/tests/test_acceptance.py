"""End-to-end acceptance checks, one per criterion.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion is
printed in the terminal summary) or directly with ``python tests/test_acceptance.py``.
"""
import collections
import sys
from importlib import resources
from itertools import product
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from diagrams import random_diagram  # noqa: E402
from test_infogeo import random_full_rank_family  # noqa: E402

from zxforge import hopf, infogeo  # noqa: E402
from zxforge.circuits import (Circuit, Gate, apply_circuit, circuit_unitary,  # noqa: E402
                              cloning_counterexample, parse_circuit)
from zxforge.qcore import HADAMARD, KET0, KET1, KET_MINUS, KET_PLUS, PAULI_X, PAULI_Z, \
    StateVector  # noqa: E402
from zxforge.zxgraph import X, Z, eval_diagram, is_isomorphic, load_diagram, spider  # noqa: E402
from zxforge.zxrules import RuleId, apply_rule, find_matches, simplify, \
    verify_equivalence  # noqa: E402

RESULTS = {}


def data(name):
    return load_diagram(resources.files("zxforge").joinpath("data", name))


def gate_semantics():
    cnot = circuit_unitary(parse_circuit("qubits 2\nCNOT 0 1\n"))
    ok = np.array_equal(cnot, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    dev = max(np.max(np.abs(HADAMARD @ KET0 - KET_PLUS)), np.max(np.abs(HADAMARD @ KET1 - KET_MINUS)))
    ok &= dev <= 1e-12
    ok &= np.allclose(HADAMARD @ PAULI_Z @ HADAMARD, PAULI_X, atol=1e-12, rtol=0)
    ccnot = Circuit(3, (Gate("CCNOT", (0, 1, 2)),))
    for bits in ("".join(b) for b in product("01", repeat=3)):
        target = str(1 - int(bits[2])) if bits[:2] == "11" else bits[2]
        out = apply_circuit(ccnot, StateVector.basis(bits)).amplitudes
        ok &= np.array_equal(out, StateVector.basis(bits[:2] + target).amplitudes)
    return bool(ok), f"CNOT exact, H deviation {dev:.1e}, 8 CCNOT basis states"


def no_cloning():
    f = cloning_counterexample().fidelities
    ok = abs(f["0"] - 1) <= 1e-12 and abs(f["1"] - 1) <= 1e-12 and abs(f["+"] - 0.5) <= 1e-12
    return ok, f"fidelities |0>: {f['0']:.12g}, |1>: {f['1']:.12g}, |+>: {f['+']:.12g}"


def evaluator_table():
    s2, e = np.sqrt(2), np.exp(1j * np.pi / 3)
    plus, minus = np.array([1, 1]) / s2, np.array([1, -1]) / s2
    rows = [
        (spider(Z, 0, 0, 1), s2 * plus[:, None]),
        (spider(X, 0, 0, 1), s2 * np.array([[1], [0]])),
        (spider(Z, 0, 1, 0), s2 * plus[None, :]),
        (spider(X, 0, 1, 0), s2 * np.array([[1, 0]])),
        (spider(Z, "1/3", 1, 1), np.diag([1, e])),
        (spider(X, "1/3", 1, 1), np.outer(plus, plus) + e * np.outer(minus, minus)),
    ]
    dev = max(float(np.max(np.abs(eval_diagram(d) - m))) for d, m in rows)
    return dev <= 1e-12, f"6 rows, max deviation {dev:.1e}"


def rewrite_soundness():
    counts, violations = collections.Counter(), 0
    for seed in range(500):
        d = random_diagram(seed)
        before = eval_diagram(d)
        for rule in RuleId:
            for site in find_matches(d, rule):
                post, _ = apply_rule(d, rule, site, verify=False)
                counts[rule] += 1
                violations += np.max(np.abs(eval_diagram(post) - before)) > 1e-9
    covered = all(counts[r] > 0 for r in RuleId)
    return violations == 0 and covered, \
        f"{sum(counts.values())} rewrites over 9 rules, {violations} violations"


def worked_examples():
    ok, notes = True, []
    for start, final in (("fig_zx_comp1", "fig_zx_comp1_final"), ("fig_ex2", "fig_ex2_final")):
        d = data(f"{start}.zx.json")
        out, steps = simplify(d)
        iso = is_isomorphic(out, data(f"{final}.zx.json"))
        sound = verify_equivalence(d, out).equivalent
        ok &= iso and sound
        notes.append(f"{start}: {'/'.join(s.rule.value for s in steps)}")
    return ok, "; ".join(notes)


def hopf_suites():
    red, green = hopf.zx_structures()
    ok = True
    for h in (hopf.assemble(red, green), hopf.assemble(green, red)):
        r = hopf.check_unnormalized_bialgebra(h)
        r.merge(hopf.check_antipode(h), "antipode")
        ok &= r.ok
    ok &= not hopf.check_unnormalized_bialgebra(green).ok
    for n in range(1, 6):
        pair = hopf.build_group_algebra(n)
        r = hopf.check_f_hopf(pair)
        ok &= r.ok and max(r.deviations.values()) == 0.0
        ok &= hopf.check_hopf(hopf.assemble(*pair)).ok
    ok &= hopf.check_hopf(hopf.assemble(red, green).normalized()).ok
    return bool(ok), "ZX at sqrt 2, green/green rejected, Z_1..Z_5 exact, rescaled passes"


def f_algebra():
    devs = [hopf.check_f_algebra(h.m, h.eta, h.delta, h.eps).deviations["frobenius"]
            for h in hopf.zx_structures()]
    return max(devs) <= 1e-12, f"Frobenius deviations {devs[0]:.1e}, {devs[1]:.1e}"


def qfi_consistency():
    rng = np.random.default_rng(5)
    worst, spectral = 0.0, 0.0
    for _ in range(100):
        f = random_full_rank_family(rng)
        rep = infogeo.qfi_report(f, rng.normal())
        worst = max(worst, rep.trace_vs_eigen_sum)
        spectral = max(spectral, rep.spectral_deviation)
    diag = max(abs(infogeo.qfi(infogeo.diag_qubit_family(), t) - 1 / (t * (1 - t)))
               for t in np.linspace(0.1, 0.9, 10))
    fq = infogeo.qfi(infogeo.bloch_theta_density(), 0.3)
    q = infogeo.qgt(infogeo.bloch_theta_state(), 0.3)[0, 0].real
    ok = worst <= 1e-9 and diag <= 1e-8 and abs(fq - 1) <= 1e-8 and abs(fq - 4 * q) <= 1e-8
    return ok, (f"trace vs eigen-sum {worst:.1e}, diagonal {diag:.1e}, Bloch F_Q {fq:.12g}; "
                f"spectral formula deviation (reported) {spectral:.1e}")


def qgt_fubini_study():
    rng = np.random.default_rng(12)
    pull = kahler = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 4))
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        g = infogeo.fubini_study(z)
        pull = max(pull, float(np.max(np.abs(infogeo.chart_metric(z) - g))))
        kahler = max(kahler, float(np.max(np.abs(infogeo.kahler_metric(z) - g))))
    base = infogeo.bloch_theta_state()
    scaled = infogeo.StateFamily(
        lambda t: (2 + np.sin(t[0]) + 1j * np.cos(3 * t[0])) * base.state(t), 1)
    proj = max(float(np.max(np.abs(infogeo.qgt(scaled, t) - infogeo.qgt(base, t))))
               for t in rng.uniform(0, 3, size=10))
    ok = pull <= 1e-8 and kahler <= 1e-6 and proj <= 1e-8
    return ok, f"pullback {pull:.1e}, Kahler {kahler:.1e}, projective {proj:.1e}"


def classical_fisher():
    rng = np.random.default_rng(1)
    cov = 0.0
    for _ in range(20):
        d, n = int(rng.integers(1, 4)), int(rng.integers(2, 6))
        f = infogeo.softmax_family(rng.normal(size=(n, d)), rng.normal(size=n))
        theta = rng.normal(size=d)
        cov = max(cov, float(np.max(np.abs(infogeo.fisher_matrix(f, theta)
                                           - infogeo.gradient_covariance(f, theta)))))
    for t in (0.2, 0.5, 0.7):
        b = infogeo.bernoulli_family()
        cov = max(cov, abs(infogeo.fisher_matrix(b, t) - infogeo.gradient_covariance(b, t)).max())
    deltas = [0.08, 0.04, 0.02, 0.01, 0.005]
    slopes = [infogeo.kl_quadratic_check(infogeo.bernoulli_family(), 0.5, deltas).slope,
              infogeo.kl_quadratic_check(infogeo.bernoulli_family(), 0.3, deltas).slope]
    f = infogeo.softmax_family(rng.normal(size=(4, 2)), rng.normal(size=4))
    slopes.append(infogeo.kl_quadratic_check(f, rng.normal(size=2), deltas).slope)
    ent = max(abs(infogeo.shannon_entropy([1, 0, 0])),
              max(abs(infogeo.shannon_entropy(np.ones(n) / n) - np.log(n)) for n in (2, 3, 8)))
    ok = cov <= 1e-9 and min(slopes) >= 2.7 and ent <= 1e-12
    return ok, (f"covariance {cov:.1e}, KL slopes "
                f"{', '.join(f'{s:.2f}' for s in slopes)}, entropy {ent:.1e}")


CRITERIA = [
    (1, "gate semantics", gate_semantics),
    (2, "no-cloning", no_cloning),
    (3, "ZX evaluator table", evaluator_table),
    (4, "rewrite soundness", rewrite_soundness),
    (5, "worked examples", worked_examples),
    (6, "Hopf suites", hopf_suites),
    (7, "F-algebra condition", f_algebra),
    (8, "QFI consistency", qfi_consistency),
    (9, "QGT / Fubini-Study", qgt_fubini_study),
    (10, "classical Fisher", classical_fisher),
]


def summary_line(number, title, passed, detail):
    return f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}: {detail}"


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"c{c[0]}" for c in CRITERIA])
def test_criterion(number, title, check):
    passed, detail = check()
    RESULTS[number] = summary_line(number, title, passed, detail)
    print(RESULTS[number])
    assert passed, detail


if __name__ == "__main__":
    failed = 0
    for number, title, check in CRITERIA:
        passed, detail = check()
        failed += not passed
        print(summary_line(number, title, passed, detail))
    sys.exit(1 if failed else 0)
