"""Local rewrite rules on ZX-diagrams, a terminating simplifier and a soundness checker.

Every rule changes ``d.scalar`` by a fixed, documented factor so that the
rewritten diagram denotes exactly the same matrix as the original:

=============  ====================================================  ==================
rule           site                                                  scalar factor
=============  ====================================================  ==================
SpiderFuse     ``(u, v)`` same-colour spiders sharing >= 1 edge,     1
               or ``(v, v)`` for a spider carrying self-loops
IdentityRemove ``(v,)`` phase-0 spider with two non-loop legs        1
ColorChange    ``(v,)`` spider with >= 1 Hadamard leg, or            1
               ``(h1, h2)`` adjacent Hadamard nodes
PiCopy         ``(p, v)`` degree-1 pi spider on opposite-colour      e^{i a} sqrt2^(1-k)
               spider ``v`` (phase a, k other legs)
PiCommute      ``(p, v)`` degree-2 pi spider next to an              e^{i a}
               opposite-colour spider of phase a
CopyRule       ``(p, v)`` degree-1 phase-0 spider on an              sqrt2^(1-k)
               opposite-colour spider with k other legs
Bialgebra      ``(z1, z2, x1, x2)`` phase-0 K_{2,2}, all degree 3    1/sqrt2
HopfCancel     ``(u, v)`` opposite colours sharing >= 2 edges        1/2
ScalarD        sorted ids of a closed component                      its value
=============  ====================================================  ==================
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import NoMatch, SoundnessViolation, StepLimitExceeded, TooLarge, TypeMismatch
from .qcore import SQRT2, eq_tol
from .zxgraph import H, X, Z, ZxDiagram, eval_diagram, phase_factor

PI = Fraction(1)


class RuleId(str, Enum):
    SpiderFuse = "SpiderFuse"
    IdentityRemove = "IdentityRemove"
    ColorChange = "ColorChange"
    PiCopy = "PiCopy"
    PiCommute = "PiCommute"
    CopyRule = "CopyRule"
    Bialgebra = "Bialgebra"
    HopfCancel = "HopfCancel"
    ScalarD = "ScalarD"


@dataclass(frozen=True)
class RewriteStep:
    rule: RuleId
    site: tuple[int, ...]
    removed: tuple[int, ...]
    produced: tuple[int, ...]
    scalar_delta: complex

    def to_dict(self) -> dict:
        return {"rule": self.rule.value, "site": list(self.site), "removed": list(self.removed),
                "produced": list(self.produced),
                "scalar_delta": {"re": self.scalar_delta.real, "im": self.scalar_delta.imag}}


def steps_to_json(steps) -> str:
    return json.dumps([s.to_dict() for s in steps], indent=2, sort_keys=True) + "\n"


def _other(c: str) -> str:
    return X if c == Z else Z


def _is_spider(d, v):
    return v in d.nodes and d.nodes[v].is_spider


def _non_loop_neighbors(d, v):
    return [w for w in d.neighbors(v) if w != v]


# matchers ----------------------------------------------------------------

def _match_fuse(d, site):
    if len(site) != 2:
        return False
    u, v = site
    if not (_is_spider(d, u) and _is_spider(d, v)):
        return False
    if u == v:
        return d.self_loops(v) > 0
    return u < v and d.nodes[u].kind == d.nodes[v].kind and d.edge_count(u, v) > 0


def _match_identity(d, site):
    if len(site) != 1 or not _is_spider(d, site[0]):
        return False
    v = site[0]
    return d.nodes[v].phase == 0 and d.degree(v) == 2 and d.self_loops(v) == 0


def _hadamard_legs(d, v):
    legs = []
    for w in _non_loop_neighbors(d, v):
        if d.nodes[w].kind == H and d.edge_count(v, w) == 1 and d.self_loops(w) == 0:
            # a leg ending in another Hadamard is left to the Hadamard-pair form
            (far,) = [x for x in d.neighbors(w) if x != v]
            if d.nodes[far].kind != H:
                legs.append(w)
    return legs


def _match_color(d, site):
    if len(site) == 1:
        return _is_spider(d, site[0]) and len(_hadamard_legs(d, site[0])) > 0
    if len(site) == 2:
        a, b = site
        return (a < b and a in d.nodes and b in d.nodes and d.nodes[a].kind == H
                and d.nodes[b].kind == H and d.edge_count(a, b) == 1
                and d.self_loops(a) == 0 and d.self_loops(b) == 0)
    return False


def _match_state_copy(d, site, phase):
    if len(site) != 2:
        return False
    p, v = site
    if not (_is_spider(d, p) and _is_spider(d, v)) or p == v:
        return False
    np_, nv = d.nodes[p], d.nodes[v]
    return (np_.kind != nv.kind and np_.phase == phase and d.degree(p) == 1
            and d.edge_count(p, v) == 1)


def _match_pi_commute(d, site):
    if len(site) != 2:
        return False
    p, v = site
    if not (_is_spider(d, p) and _is_spider(d, v)) or p == v:
        return False
    np_, nv = d.nodes[p], d.nodes[v]
    return (np_.kind != nv.kind and np_.phase == PI and d.degree(p) == 2
            and d.self_loops(p) == 0 and d.edge_count(p, v) == 1)


def _match_bialgebra(d, site):
    if len(site) != 4 or len(set(site)) != 4:
        return False
    z1, z2, x1, x2 = site
    if not all(_is_spider(d, v) for v in site):
        return False
    if not (z1 < z2 and x1 < x2):
        return False
    c = d.nodes[z1].kind
    if d.nodes[z2].kind != c or d.nodes[x1].kind != _other(c) or d.nodes[x2].kind != _other(c):
        return False
    if any(d.nodes[v].phase != 0 or d.degree(v) != 3 or d.self_loops(v) for v in site):
        return False
    if d.edge_count(z1, z2) or d.edge_count(x1, x2):
        return False
    return all(d.edge_count(z, x) == 1 for z in (z1, z2) for x in (x1, x2))


def _match_hopf(d, site):
    if len(site) != 2:
        return False
    u, v = site
    return (u < v and _is_spider(d, u) and _is_spider(d, v)
            and d.nodes[u].kind != d.nodes[v].kind and d.edge_count(u, v) >= 2)


def _closed_component(d, comp):
    return all(not d.nodes[v].is_boundary for v in comp)


def _match_scalar(d, site):
    if not site or any(v not in d.nodes for v in site):
        return False
    comps = d.components()
    return any(comp == set(site) and _closed_component(d, comp) for comp in comps)


def matches(d: ZxDiagram, rule: RuleId, site) -> bool:
    site = tuple(site)
    rule = RuleId(rule)
    if rule is RuleId.SpiderFuse:
        return _match_fuse(d, site)
    if rule is RuleId.IdentityRemove:
        return _match_identity(d, site)
    if rule is RuleId.ColorChange:
        return _match_color(d, site)
    if rule is RuleId.PiCopy:
        return _match_state_copy(d, site, PI)
    if rule is RuleId.CopyRule:
        return _match_state_copy(d, site, Fraction(0))
    if rule is RuleId.PiCommute:
        return _match_pi_commute(d, site)
    if rule is RuleId.Bialgebra:
        return _match_bialgebra(d, site)
    if rule is RuleId.HopfCancel:
        return _match_hopf(d, site)
    if rule is RuleId.ScalarD:
        return _match_scalar(d, site)
    raise AssertionError(rule)


def find_matches(d: ZxDiagram, rule: RuleId) -> list[tuple[int, ...]]:
    """All sites of ``rule`` in ``d``, lowest node ids first."""
    rule = RuleId(rule)
    ids = sorted(d.nodes)
    spiders = d.spiders()
    sites = []
    if rule is RuleId.SpiderFuse:
        for u in spiders:
            if d.self_loops(u):
                sites.append((u, u))
            for v in sorted(set(_non_loop_neighbors(d, u))):
                if u < v and _match_fuse(d, (u, v)):
                    sites.append((u, v))
    elif rule is RuleId.IdentityRemove:
        sites = [(v,) for v in spiders if _match_identity(d, (v,))]
    elif rule is RuleId.ColorChange:
        for v in ids:
            if _match_color(d, (v,)):
                sites.append((v,))
            elif d.nodes[v].kind == H:
                for w in sorted(set(_non_loop_neighbors(d, v))):
                    if _match_color(d, (v, w)):
                        sites.append((v, w))
    elif rule in (RuleId.PiCopy, RuleId.CopyRule, RuleId.PiCommute):
        for p in spiders:
            for v in sorted(set(_non_loop_neighbors(d, p))):
                if matches(d, rule, (p, v)):
                    sites.append((p, v))
    elif rule is RuleId.Bialgebra:
        for z1 in spiders:
            xs = sorted(set(_non_loop_neighbors(d, z1)))
            for i, x1 in enumerate(xs):
                for x2 in xs[i + 1:]:
                    common = set(_non_loop_neighbors(d, x1)) & set(_non_loop_neighbors(d, x2))
                    for z2 in sorted(common):
                        if z2 > z1 and _match_bialgebra(d, (z1, z2, x1, x2)):
                            sites.append((z1, z2, x1, x2))
    elif rule is RuleId.HopfCancel:
        for u in spiders:
            for v in sorted(set(_non_loop_neighbors(d, u))):
                if _match_hopf(d, (u, v)):
                    sites.append((u, v))
    elif rule is RuleId.ScalarD:
        for comp in d.components():
            if _closed_component(d, comp):
                sites.append(tuple(sorted(comp)))
    sites.sort()
    return sites


# rewriters ---------------------------------------------------------------
# Each takes a private working copy, mutates it and returns (removed, produced, scalar).

def _rw_fuse(d, site):
    u, v = site
    if u != v:
        d.set_phase(u, d.nodes[u].phase + d.nodes[v].phase)
        # u-v edges and loops on v all end up as loops on the fused spider
        moved = [w for w in d.neighbors(v) if w not in (u, v)]
        d.remove_node(v)
        for w in moved:
            d.add_edge(u, w)
        removed = (v,)
    else:
        removed = ()
    d.edges = [e for e in d.edges if e != (u, u)]
    return removed, (), 1.0


def _rw_identity(d, site):
    (v,) = site
    a, b = d.neighbors(v)
    d.remove_node(v)
    d.add_edge(a, b)
    return (v,), (), 1.0


def _rw_color(d, site):
    if len(site) == 2:
        h1, h2 = site
        (a,) = [w for w in d.neighbors(h1) if w != h2]
        (b,) = [w for w in d.neighbors(h2) if w != h1]
        d.remove_node(h1)
        d.remove_node(h2)
        d.add_edge(a, b)
        return (h1, h2), (), 1.0
    (v,) = site
    hlegs = _hadamard_legs(d, v)
    plain = [w for w in _non_loop_neighbors(d, v)]
    for h in hlegs:
        plain.remove(h)
    d.set_kind(v, _other(d.nodes[v].kind))
    for h in hlegs:
        (x,) = [w for w in d.neighbors(h) if w != v]
        d.remove_node(h)
        d.add_edge(v, x)
    produced = []
    for w in plain:
        d.remove_edge(v, w)
        h = d.add_node(H)
        d.add_edge(v, h)
        d.add_edge(h, w)
        produced.append(h)
    return tuple(hlegs), tuple(produced), 1.0


def _rw_state_copy(d, site):
    p, v = site
    colour, phase = d.nodes[p].kind, d.nodes[p].phase
    alpha = d.nodes[v].phase
    legs = [w for w in _non_loop_neighbors(d, v) if w != p]
    d.remove_node(p)
    d.remove_node(v)
    produced = []
    for w in legs:
        s = d.add_node(colour, phase)
        d.add_edge(s, w)
        produced.append(s)
    k = len(legs)
    scalar = SQRT2 ** (1 - k)
    if phase == PI:
        scalar *= phase_factor(alpha)
    return (p, v), tuple(produced), scalar


def _rw_pi_commute(d, site):
    p, v = site
    colour = d.nodes[p].kind
    alpha = d.nodes[v].phase
    (w,) = [x for x in d.neighbors(p) if x != v]
    legs = [x for x in _non_loop_neighbors(d, v) if x != p]
    produced = []
    for x in legs:
        d.remove_edge(v, x)
        s = d.add_node(colour, PI)
        d.add_edge(v, s)
        d.add_edge(s, x)
        produced.append(s)
    d.remove_node(p)
    d.add_edge(w, v)
    d.set_phase(v, -alpha)
    return (p,), tuple(produced), phase_factor(alpha)


def _rw_bialgebra(d, site):
    z1, z2, x1, x2 = site
    c = d.nodes[z1].kind

    def external(v, pair):
        return [w for w in d.neighbors(v) if w not in pair][0]

    ext_z = [external(z, (x1, x2)) for z in (z1, z2)]
    ext_x = [external(x, (z1, z2)) for x in (x1, x2)]
    for v in site:
        d.remove_node(v)
    a = d.add_node(_other(c))
    b = d.add_node(c)
    for w in ext_z:
        d.add_edge(a, w)
    for w in ext_x:
        d.add_edge(b, w)
    d.add_edge(a, b)
    return tuple(site), (a, b), 1 / SQRT2


def _rw_hopf(d, site):
    u, v = site
    d.remove_edge(u, v)
    d.remove_edge(u, v)
    return (), (), 0.5


def _rw_scalar(d, site):
    sub = ZxDiagram([d.nodes[v] for v in site], [e for e in d.edges if e[0] in site])
    value = complex(eval_diagram(sub)[0, 0])
    for v in site:
        d.remove_node(v)
    return tuple(site), (), value


_REWRITERS = {
    RuleId.SpiderFuse: _rw_fuse,
    RuleId.IdentityRemove: _rw_identity,
    RuleId.ColorChange: _rw_color,
    RuleId.PiCopy: _rw_state_copy,
    RuleId.CopyRule: _rw_state_copy,
    RuleId.PiCommute: _rw_pi_commute,
    RuleId.Bialgebra: _rw_bialgebra,
    RuleId.HopfCancel: _rw_hopf,
    RuleId.ScalarD: _rw_scalar,
}


def _try_eval(d):
    try:
        return eval_diagram(d)
    except TooLarge:
        return None


def apply_rule(d: ZxDiagram, rule: RuleId, site, verify: bool = True, tol: float | None = None):
    """Rewrite ``d`` at ``site``; returns ``(new_diagram, step)`` and leaves ``d`` untouched.

    With ``verify`` the pre- and post-diagrams are evaluated (when small enough)
    and a ``SoundnessViolation`` is raised if they differ entrywise by more than ``tol``.
    """
    rule = RuleId(rule)
    site = tuple(site)
    if not matches(d, rule, site):
        raise NoMatch(f"{rule.value} does not match at {site}")
    out = d.copy()
    removed, produced, delta = _REWRITERS[rule](out, site)
    delta = complex(delta)
    out.scalar *= delta
    step = RewriteStep(rule, site, tuple(removed), tuple(produced), delta)
    if verify:
        tol = eq_tol() if tol is None else tol
        before = _try_eval(d)
        after = _try_eval(out) if before is not None else None
        if before is not None and after is not None:
            dev = float(np.max(np.abs(before - after), initial=0.0))
            if dev > tol:
                raise SoundnessViolation(f"{rule.value} at {site} changed the map by {dev:.3g}")
    return out, step


def replay(d: ZxDiagram, step: RewriteStep) -> ZxDiagram:
    return apply_rule(d, step.rule, step.site, verify=False)[0]


# simplification ----------------------------------------------------------

@dataclass
class SimplifyConfig:
    step_limit: int | None = None
    verify: bool = False
    tol: float | None = None


def _size(d):
    return len(d.nodes) + len(d.edges)


def _exhaust_cheap(d, steps, apply):
    while True:
        site = next(iter(find_matches(d, RuleId.SpiderFuse)), None)
        rule = RuleId.SpiderFuse
        if site is None:
            site = next(iter(find_matches(d, RuleId.IdentityRemove)), None)
            rule = RuleId.IdentityRemove
        if site is None:
            return d
        d, step = apply(d, rule, site)
        steps.append(step)


def _hadamard_gain(d, site):
    """Net number of Hadamard nodes a ColorChange at ``site`` removes."""
    if len(site) == 2:
        return 2
    v = site[0]
    h = len(_hadamard_legs(d, v))
    return 2 * h - len(_non_loop_neighbors(d, v))


def simplify(d: ZxDiagram, config: SimplifyConfig | None = None):
    """Rewrite to a fixpoint of the rule strategy; returns ``(diagram, steps)``.

    Priority: ScalarD, SpiderFuse, IdentityRemove, ColorChange (largest Hadamard
    reduction first, never one that keeps the count),
    then PiCopy / CopyRule / PiCommute, HopfCancel and Bialgebra. Every accepted
    move strictly shrinks ``nodes + edges``: the copy and commute rules are only
    taken when, followed by exhaustive fusion and identity removal, they do so.
    That measure makes the loop terminate; confluence is not claimed.
    """
    config = config or SimplifyConfig()
    limit = config.step_limit if config.step_limit is not None else 10 * max(len(d.nodes), 1)
    steps: list[RewriteStep] = []

    def apply(diag, rule, site):
        if len(steps) >= limit:
            raise StepLimitExceeded(f"simplify exceeded {limit} steps")
        return apply_rule(diag, rule, site, verify=config.verify, tol=config.tol)

    d = d.copy()
    while True:
        site = next(iter(find_matches(d, RuleId.ScalarD)), None)
        if site is not None:
            d, step = apply(d, RuleId.ScalarD, site)
            steps.append(step)
            continue
        size = _size(d)
        d = _exhaust_cheap(d, steps, apply)
        if _size(d) < size:
            continue
        gains = [(-_hadamard_gain(d, s), s) for s in find_matches(d, RuleId.ColorChange)]
        gains = [g for g in gains if g[0] < 0]
        if gains:
            site = min(gains)[1]
            d, step = apply(d, RuleId.ColorChange, site)
            steps.append(step)
            continue
        moved = False
        for rule in (RuleId.PiCopy, RuleId.CopyRule, RuleId.PiCommute):
            for site in find_matches(d, rule):
                trial_steps: list[RewriteStep] = []
                trial, step = apply(d, rule, site)
                trial_steps.append(step)
                trial = _exhaust_cheap(trial, trial_steps, lambda g, r, s: apply_rule(
                    g, r, s, verify=config.verify, tol=config.tol))
                if _size(trial) < size:
                    if len(steps) + len(trial_steps) > limit:
                        raise StepLimitExceeded(f"simplify exceeded {limit} steps")
                    d = trial
                    steps.extend(trial_steps)
                    moved = True
                    break
            if moved:
                break
        if moved:
            continue
        for rule in (RuleId.HopfCancel, RuleId.Bialgebra):
            site = next(iter(find_matches(d, rule)), None)
            if site is not None:
                d, step = apply(d, rule, site)
                steps.append(step)
                moved = True
                break
        if not moved:
            return d, steps


# equivalence -------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    deviation: float
    phase: complex = 1.0
    tol: float = field(default=1e-9)

    def to_dict(self) -> dict:
        return {"equivalent": self.equivalent, "deviation": self.deviation,
                "phase": {"re": self.phase.real, "im": self.phase.imag}, "tol": self.tol}


def compare_matrices(a, b, up_to_global_phase: bool = False, tol: float | None = None) -> EquivalenceReport:
    tol = eq_tol() if tol is None else tol
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise TypeMismatch(f"maps of shape {a.shape} and {b.shape} are not comparable")
    phase = 1.0 + 0j
    if up_to_global_phase:
        overlap = np.vdot(b, a)
        if abs(overlap) > 0:
            phase = overlap / abs(overlap)
    dev = float(np.max(np.abs(a - phase * b), initial=0.0))
    return EquivalenceReport(dev <= tol, dev, complex(phase), tol)


def verify_equivalence(a: ZxDiagram, b: ZxDiagram, up_to_global_phase: bool = False,
                       tol: float | None = None) -> EquivalenceReport:
    if (a.n_inputs, a.m_outputs) != (b.n_inputs, b.m_outputs):
        raise TypeMismatch(f"{a.n_inputs}->{a.m_outputs} vs {b.n_inputs}->{b.m_outputs}")
    return compare_matrices(eval_diagram(a), eval_diagram(b), up_to_global_phase, tol)
