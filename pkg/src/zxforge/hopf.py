"""Finite-dimensional (co)algebra tensors and numerical checks of the Hopf axioms.

A structure is a bag of raw matrices; nothing is assumed at construction, so
defective structures can be built and rejected by the checks. Conventions, for
``A = C^d`` with ``A (x) A`` indexed by ``i*d + j``:

* ``m``: ``d x d^2``, ``eta``: length ``d``, ``delta``: ``d^2 x d``,
  ``eps``: length ``d``, ``S``: ``d x d``, ``lozenge``: the normalization constant.

With ``lozenge = 1`` the unnormalized axioms reduce to the ordinary Hopf ones.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ShapeError
from .qcore import SQRT2

AXIOM_TOL = 1e-12


def swap_matrix(d: int) -> np.ndarray:
    """The flip ``a (x) b -> b (x) a`` on ``C^d (x) C^d``."""
    p = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            p[j * d + i, i * d + j] = 1.0
    return p


@dataclass(frozen=True, eq=False)
class HopfStructure:
    m: np.ndarray
    eta: np.ndarray
    delta: np.ndarray
    eps: np.ndarray
    S: np.ndarray
    lozenge: float = 1.0
    name: str = ""

    def __post_init__(self):
        for attr in ("m", "eta", "delta", "eps", "S"):
            object.__setattr__(self, attr, np.asarray(getattr(self, attr), dtype=complex))
        object.__setattr__(self, "eta", self.eta.reshape(-1))
        object.__setattr__(self, "eps", self.eps.reshape(-1))
        if self.lozenge == 0:
            raise ShapeError("the normalization constant must be nonzero")

    @property
    def dim(self) -> int:
        return self.eta.shape[0]

    def validate(self) -> None:
        d = self.dim
        expected = {"m": (d, d * d), "eta": (d,), "delta": (d * d, d), "eps": (d,), "S": (d, d)}
        for attr, shape in expected.items():
            if getattr(self, attr).shape != shape:
                raise ShapeError(f"{attr} has shape {getattr(self, attr).shape}, expected {shape}")

    def normalized(self) -> HopfStructure:
        """Rescale to an ordinary (lozenge = 1) Hopf structure.

        ``delta -> lozenge * delta`` and ``eps -> eps / lozenge``. The antipode is
        kept as is: with the ``lozenge**2``-weighted antipode axiom used here,
        ``m (S (x) id) delta' = lozenge * m (S (x) id) delta = eta eps'``. Scaling
        ``S`` by ``lozenge**-2`` as well would break that axiom unless lozenge = 1.
        """
        z = self.lozenge
        return replace(self, delta=z * self.delta, eps=self.eps / z, lozenge=1.0)

    def with_lozenge(self, lozenge) -> HopfStructure:
        return replace(self, lozenge=lozenge)


def assemble(mult: HopfStructure, comult: HopfStructure, name: str = "") -> HopfStructure:
    """Product, unit, antipode and constant of ``mult`` with the coproduct and counit of ``comult``."""
    if mult.dim != comult.dim:
        raise ShapeError(f"dimensions {mult.dim} and {comult.dim} differ")
    return HopfStructure(mult.m, mult.eta, comult.delta, comult.eps, mult.S, mult.lozenge,
                         name or f"{mult.name}/{comult.name}")


@dataclass
class AxiomReport:
    deviations: dict = field(default_factory=dict)
    tol: float = AXIOM_TOL

    def add(self, name: str, *mats) -> None:
        devs = [float(np.max(np.abs(a - b), initial=0.0))
                for i, a in enumerate(mats) for b in mats[i + 1:]]
        self.deviations[name] = max(devs)

    def passed(self, name: str) -> bool:
        return self.deviations[name] <= self.tol

    @property
    def ok(self) -> bool:
        return all(self.passed(k) for k in self.deviations)

    @property
    def failures(self) -> list[str]:
        return [k for k in self.deviations if not self.passed(k)]

    def merge(self, other: AxiomReport, prefix: str) -> None:
        for k, v in other.deviations.items():
            self.deviations[f"{prefix}.{k}"] = v

    def to_dict(self) -> dict:
        return {"tol": self.tol, "ok": self.ok,
                "axioms": {k: {"deviation": v, "passed": self.passed(k)}
                           for k, v in self.deviations.items()}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _eye(d):
    return np.eye(d, dtype=complex)


def _col(v):
    return v.reshape(-1, 1)


def _row(v):
    return v.reshape(1, -1)


def check_algebra(h: HopfStructure) -> AxiomReport:
    h.validate()
    i = _eye(h.dim)
    r = AxiomReport()
    r.add("associativity", h.m @ np.kron(h.m, i), h.m @ np.kron(i, h.m))
    r.add("unitality", h.m @ np.kron(_col(h.eta), i), i, h.m @ np.kron(i, _col(h.eta)))
    return r


def check_coalgebra(h: HopfStructure) -> AxiomReport:
    h.validate()
    i = _eye(h.dim)
    r = AxiomReport()
    r.add("coassociativity", np.kron(h.delta, i) @ h.delta, np.kron(i, h.delta) @ h.delta)
    r.add("counitality", np.kron(_row(h.eps), i) @ h.delta, i, np.kron(i, _row(h.eps)) @ h.delta)
    return r


def check_unnormalized_bialgebra(h: HopfStructure) -> AxiomReport:
    h.validate()
    d, z = h.dim, h.lozenge
    i = _eye(d)
    r = AxiomReport()
    r.add("comult_of_unit", z * (h.delta @ h.eta), np.kron(h.eta, h.eta))
    middle = np.kron(np.kron(i, swap_matrix(d)), i)
    r.add("comult_of_product",
          z * (np.kron(h.m, h.m) @ middle @ np.kron(h.delta, h.delta)), h.delta @ h.m)
    r.add("counit_of_unit", np.array([h.eps @ h.eta]), np.array([z]))
    r.add("counit_of_product", z * (h.eps @ h.m), np.kron(h.eps, h.eps))
    return r


def check_antipode(h: HopfStructure) -> AxiomReport:
    h.validate()
    z2 = h.lozenge**2
    i = _eye(h.dim)
    r = AxiomReport()
    r.add("antipode",
          z2 * (h.m @ np.kron(h.S, i) @ h.delta),
          np.outer(h.eta, h.eps),
          z2 * (h.m @ np.kron(i, h.S) @ h.delta))
    return r


def check_f_algebra(m, eta, delta, eps) -> AxiomReport:
    """The Frobenius compatibility of a product and coproduct."""
    m, delta = np.asarray(m, dtype=complex), np.asarray(delta, dtype=complex)
    d = np.asarray(eta).reshape(-1).shape[0]
    if m.shape != (d, d * d) or delta.shape != (d * d, d) or np.asarray(eps).size != d:
        raise ShapeError(f"inconsistent shapes m{m.shape}, delta{delta.shape} for dimension {d}")
    i = _eye(d)
    r = AxiomReport()
    r.add("frobenius", np.kron(i, m) @ np.kron(delta, i), delta @ m, np.kron(m, i) @ np.kron(i, delta))
    return r


def check_hopf(h: HopfStructure) -> AxiomReport:
    """Algebra, coalgebra, unnormalized bialgebra and antipode checks together."""
    r = AxiomReport()
    for name, check in (("algebra", check_algebra), ("coalgebra", check_coalgebra),
                        ("bialgebra", check_unnormalized_bialgebra), ("antipode", check_antipode)):
        r.merge(check(h), name)
    return r


def check_f_hopf(pair) -> AxiomReport:
    """Both F-algebras plus full Hopf checks on the two mixed-colour assemblies.

    ``pair = (red, green)``; each mixed assembly takes its product, unit,
    antipode and constant from one colour and its coproduct and counit from the other.
    """
    red, green = pair
    if red.dim != green.dim:
        raise ShapeError(f"dimensions {red.dim} and {green.dim} differ")
    r = AxiomReport()
    for label, h in (("red", red), ("green", green)):
        h.validate()
        r.merge(check_f_algebra(h.m, h.eta, h.delta, h.eps), f"{label}.f_algebra")
        r.merge(check_algebra(h), f"{label}.algebra")
        r.merge(check_coalgebra(h), f"{label}.coalgebra")
    r.merge(check_hopf(assemble(red, green)), "red_m/green_delta")
    r.merge(check_hopf(assemble(green, red)), "green_m/red_delta")
    return r


def build_group_algebra(n: int):
    """The (red, green) F-algebra pair on the group algebra of the cyclic group Z_n.

    red: ``m(g, h) = gh``, ``eta = e``, ``delta(g) = sum_{hl=g} h (x) l``, ``eps(g) = [g = e]``.
    green: ``m(g, h) = [g = h] g``, ``eta = sum_g g``, ``delta(g) = g (x) g``, ``eps(g) = 1``.
    Both carry the antipode ``S(g) = g^-1`` and constant 1.
    """
    if n < 1:
        raise ValueError("group order must be positive")
    m_red = np.zeros((n, n * n))
    delta_red = np.zeros((n * n, n))
    m_green = np.zeros((n, n * n))
    delta_green = np.zeros((n * n, n))
    S = np.zeros((n, n))
    for g in range(n):
        S[(-g) % n, g] = 1
        m_green[g, g * n + g] = 1
        delta_green[g * n + g, g] = 1
        for h in range(n):
            m_red[(g + h) % n, g * n + h] = 1
            delta_red[h * n + (g - h) % n, g] = 1
    unit = np.zeros(n)
    unit[0] = 1
    red = HopfStructure(m_red, unit, delta_red, unit, S, 1.0, name=f"red(Z{n})")
    green = HopfStructure(m_green, np.ones(n), delta_green, np.ones(n), S, 1.0, name=f"green(Z{n})")
    return red, green


def zx_structures():
    """The (red, green) structures on C^2 read off single-spider diagrams, lozenge = sqrt 2.

    Products are 2->1 spiders, units 0->1, coproducts 1->2 and counits 1->0; the
    antipode is the identity.
    """
    from .zxgraph import X, Z, eval_diagram, spider

    def of(colour):
        return HopfStructure(
            m=eval_diagram(spider(colour, 0, 2, 1)),
            eta=eval_diagram(spider(colour, 0, 0, 1)),
            delta=eval_diagram(spider(colour, 0, 1, 2)),
            eps=eval_diagram(spider(colour, 0, 1, 0)),
            S=np.eye(2),
            lozenge=SQRT2,
            name="red" if colour == X else "green",
        )

    return of(X), of(Z)
