"""Classical and quantum information geometry.

Classical side: Fisher matrix, Shannon entropy and the quadratic approximation of
the KL divergence. Quantum side: symmetric logarithmic derivative (SLD), quantum
Fisher information by three formulas, the quantum geometric tensor (QGT) and the
Fubini-Study metric.

Derivatives come from analytic callbacks when a family provides them, otherwise
from central finite differences (step ``h``, default 1e-5).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BadProbabilities, DegenerateSupport, ZeroState
from .qcore import PSD_TOL, STRUCT_TOL, dagger, hermitian_eig, is_hermitian

SUPPORT_TOL = 1e-12
FD_STEP = 1e-5
FD_STEP_2ND = 1e-4
SLD_CUTOFF = 1e-12


def central_diff(fn: Callable, x, h: float = FD_STEP) -> np.ndarray:
    """Jacobian of ``fn`` at ``x``; the last axis indexes the parameters."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    cols = []
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = h
        cols.append((np.asarray(fn(x + e)) - np.asarray(fn(x - e))) / (2 * h))
    return np.stack(cols, axis=-1)


# classical ---------------------------------------------------------------

@dataclass
class ProbFamily:
    """``theta -> p(theta)`` over ``dim_outcomes`` outcomes; ``jacobian`` returns ``dp_k/dtheta_i``."""
    p: Callable
    dim_param: int
    dim_outcomes: int
    jacobian: Callable | None = None
    h: float = FD_STEP

    def probs(self, theta) -> np.ndarray:
        p = np.asarray(self.p(np.atleast_1d(np.asarray(theta, dtype=float))), dtype=float)
        if p.shape != (self.dim_outcomes,):
            raise BadProbabilities(f"family returned shape {p.shape}, expected ({self.dim_outcomes},)")
        if np.any(p < 0) or abs(p.sum() - 1) > 1e-10:
            raise BadProbabilities(f"p(theta) = {p} is not a probability vector")
        return p

    def jac(self, theta) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        if self.jacobian is not None:
            return np.asarray(self.jacobian(theta), dtype=float).reshape(self.dim_outcomes, self.dim_param)
        return central_diff(self.p, theta, self.h)


def _supported(p):
    if np.any(p <= SUPPORT_TOL):
        raise DegenerateSupport(f"some outcome probability is <= {SUPPORT_TOL}: {p}")


def fisher_matrix(f: ProbFamily, theta) -> np.ndarray:
    """``F_ij = sum_k p_k d_i log p_k d_j log p_k``."""
    p = f.probs(theta)
    _supported(p)
    score = f.jac(theta) / p[:, None]
    F = score.T @ (p[:, None] * score)
    return (F + F.T) / 2


def gradient_covariance(f: ProbFamily, theta, h: float = FD_STEP) -> np.ndarray:
    """Covariance of the gradient of the information loss ``-log p_k`` under ``p``.

    Gradients are Richardson-extrapolated central differences of ``log p`` itself,
    independent of ``f.jacobian``.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    p = f.probs(theta)
    _supported(p)

    def log_p(t):
        return np.log(f.probs(t))

    grads = -(4 * central_diff(log_p, theta, h / 2) - central_diff(log_p, theta, h)) / 3
    mean = p @ grads
    centred = grads - mean
    return centred.T @ (p[:, None] * centred)


def shannon_entropy(p) -> float:
    """Entropy in nats, with ``0 log 0 = 0``."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0) or abs(p.sum() - 1) > 1e-10:
        raise BadProbabilities(f"{p} is not a probability vector")
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum())


def kl_divergence(q, p) -> float:
    """``KL(q || p) = sum_k q_k log(q_k / p_k)``."""
    q, p = np.asarray(q, dtype=float), np.asarray(p, dtype=float)
    nz = q > 0
    return float(np.sum(q[nz] * (np.log(q[nz]) - np.log(p[nz]))))


@dataclass
class KLReport:
    deltas: list
    kl: list
    quadratic: list
    residuals: list
    slope: float
    min_slope: float = 2.7

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.slope) and self.slope >= self.min_slope)

    def to_dict(self) -> dict:
        return {"deltas": self.deltas, "kl": self.kl, "quadratic": self.quadratic,
                "residuals": self.residuals, "slope": self.slope, "passed": self.passed}


def kl_quadratic_check(f: ProbFamily, theta, deltas, direction=None, min_slope: float = 2.7) -> KLReport:
    """Compare ``KL(p(theta + dw) || p(theta))`` with ``dw^T F dw / 2``.

    Scalar ``deltas`` are step lengths along ``direction`` (default: the normalized
    all-ones vector). The residual's log-log slope against ``|dw|`` is fitted over
    the nonzero steps; third-order agreement means a slope of about 3 or more.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if direction is None:
        direction = np.ones_like(theta)
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    p0 = f.probs(theta)
    _supported(p0)
    F = fisher_matrix(f, theta)
    sizes, kls, quads, res = [], [], [], []
    for delta in deltas:
        dw = np.asarray(delta, dtype=float)
        dw = dw * direction if dw.ndim == 0 else dw
        q = f.probs(theta + dw)
        _supported(q)
        kl = kl_divergence(q, p0)
        quad = 0.5 * float(dw @ F @ dw)
        sizes.append(float(np.linalg.norm(dw)))
        kls.append(kl)
        quads.append(quad)
        res.append(abs(kl - quad))
    pts = [(s, r) for s, r in zip(sizes, res) if s > 0 and r > 0]
    if len(pts) >= 2:
        xs, ys = np.log([s for s, _ in pts]), np.log([r for _, r in pts])
        slope = float(np.polyfit(xs, ys, 1)[0])
    else:
        slope = float("nan")
    return KLReport(sizes, kls, quads, res, slope, min_slope)


# quantum -----------------------------------------------------------------

@dataclass
class DensityFamily:
    """Single-parameter family ``theta -> rho(theta)``; ``derivative`` returns ``d rho / d theta``."""
    rho: Callable
    derivative: Callable | None = None
    h: float = FD_STEP

    def at(self, theta: float) -> np.ndarray:
        m = np.asarray(self.rho(float(theta)), dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or not is_hermitian(m):
            raise ValueError("rho(theta) is not a Hermitian square matrix")
        if abs(np.trace(m) - 1) > STRUCT_TOL or np.min(np.linalg.eigvalsh(m)) < -PSD_TOL:
            raise ValueError("rho(theta) is not a density matrix")
        return m

    def drho(self, theta: float) -> np.ndarray:
        theta = float(theta)
        if self.derivative is not None:
            return np.asarray(self.derivative(theta), dtype=complex)
        h = self.h
        return (np.asarray(self.rho(theta + h)) - np.asarray(self.rho(theta - h))) / (2 * h)


@dataclass
class SLD:
    L: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    drho_eig: np.ndarray
    residual: float

    @property
    def L_eig(self) -> np.ndarray:
        v = self.eigenvectors
        return dagger(v) @ self.L @ v


def sld(f: DensityFamily, theta: float) -> SLD:
    """Symmetric logarithmic derivative ``L`` with ``d rho = (L rho + rho L) / 2``.

    In the eigenbasis of ``rho``: ``L_ij = 2 (d rho)_ij / (p_i + p_j)``, and 0 where
    ``p_i + p_j <= 1e-12``. The residual of the defining relation is measured off
    the kernel-kernel block.
    """
    rho = f.at(theta)
    drho = f.drho(theta)
    p, v = hermitian_eig(rho)
    d_eig = dagger(v) @ drho @ v
    s = p[:, None] + p[None, :]
    mask = s > SLD_CUTOFF
    L_eig = np.where(mask, 2 * d_eig / np.where(mask, s, 1.0), 0.0)
    L = v @ L_eig @ dagger(v)
    L = (L + dagger(L)) / 2
    rel = v.conj().T @ (drho - (L @ rho + rho @ L) / 2) @ v
    residual = float(np.max(np.abs(np.where(mask, rel, 0.0)), initial=0.0))
    return SLD(L, p, v, d_eig, residual)


def qfi(f: DensityFamily, theta: float, method: str = "trace") -> float:
    """Quantum Fisher information.

    ``trace``: ``tr[rho L^2]``. ``eigen_sum``: ``sum_{k in support} sum_l p_k L_kl L_lk``
    in the eigenbasis. ``spectral``: eigenvalue term ``sum (d p_i)^2 / p_i`` plus the
    eigenvector term with weights ``4 p_i (p_i - p_j)^2 / (p_i + p_j)^2``, where
    ``<psi_i | d psi_j> = (d rho)_ij / (p_j - p_i)`` for distinct eigenvalues.
    """
    s = sld(f, theta)
    if method == "trace":
        rho = f.at(theta)
        return float(np.real(np.trace(rho @ s.L @ s.L)))
    p, Le = s.eigenvalues, s.L_eig
    support = p > SLD_CUTOFF
    if method == "eigen_sum":
        terms = p[:, None] * Le * Le.T
        return float(np.real(terms[support].sum()))
    if method == "spectral":
        d = s.drho_eig
        dp = np.real(np.diag(d))
        classical = float(np.sum(dp[support] ** 2 / p[support]))
        quantum = 0.0
        for i in np.flatnonzero(support):
            for j in range(len(p)):
                gap = p[j] - p[i]
                if i == j or abs(gap) <= SLD_CUTOFF:
                    continue
                overlap = abs(d[i, j] / gap) ** 2
                quantum += 4 * p[i] * (p[i] - p[j]) ** 2 / (p[i] + p[j]) ** 2 * overlap
        return classical + quantum
    raise ValueError(f"unknown QFI method {method!r}")


@dataclass
class QfiReport:
    trace: float
    eigen_sum: float
    spectral: float
    sld_residual: float
    classical_term: float = field(default=0.0)

    @property
    def trace_vs_eigen_sum(self) -> float:
        return abs(self.trace - self.eigen_sum)

    @property
    def spectral_deviation(self) -> float:
        return abs(self.spectral - self.trace)

    def to_dict(self) -> dict:
        return {"trace": self.trace, "eigen_sum": self.eigen_sum, "spectral": self.spectral,
                "classical_term": self.classical_term,
                "trace_vs_eigen_sum": self.trace_vs_eigen_sum,
                "spectral_deviation": self.spectral_deviation, "sld_residual": self.sld_residual}


def qfi_report(f: DensityFamily, theta: float) -> QfiReport:
    s = sld(f, theta)
    p = s.eigenvalues
    dp = np.real(np.diag(s.drho_eig))
    support = p > SLD_CUTOFF
    return QfiReport(qfi(f, theta, "trace"), qfi(f, theta, "eigen_sum"), qfi(f, theta, "spectral"),
                     s.residual, float(np.sum(dp[support] ** 2 / p[support])))


@dataclass
class StateFamily:
    """``theta -> |psi(theta)>``, not necessarily normalized; ``jacobian`` returns ``d psi / d theta_i`` as columns."""
    psi: Callable
    dim_param: int
    jacobian: Callable | None = None
    h: float = FD_STEP

    def state(self, theta) -> np.ndarray:
        return np.asarray(self.psi(np.atleast_1d(np.asarray(theta, dtype=float))), dtype=complex)

    def jac(self, theta) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        if self.jacobian is not None:
            return np.asarray(self.jacobian(theta), dtype=complex).reshape(-1, self.dim_param)
        return central_diff(lambda t: self.state(t), theta, self.h)


def qgt(f: StateFamily, theta) -> np.ndarray:
    """``Q_ij = <d_i psi|d_j psi>/<psi|psi> - <d_i psi|psi><psi|d_j psi>/<psi|psi>^2``."""
    psi = f.state(theta)
    dpsi = f.jac(theta)
    norm = float(np.real(np.vdot(psi, psi)))
    if norm <= SUPPORT_TOL:
        raise ZeroState("<psi|psi> vanishes")
    overlap = dagger(dpsi) @ psi
    Q = dagger(dpsi) @ dpsi / norm - np.outer(overlap, overlap.conj()) / norm**2
    return (Q + dagger(Q)) / 2


def fubini_study(z) -> np.ndarray:
    """``g_{i jbar} = ((1 + |z|^2) delta_ij - conj(z_i) z_j) / (1 + |z|^2)^2``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    n2 = 1 + float(np.real(np.vdot(z, z)))
    return (n2 * np.eye(len(z)) - np.outer(z.conj(), z)) / n2**2


def kahler_potential(z) -> float:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return float(np.log1p(np.real(np.vdot(z, z))))


def kahler_metric(z, h: float = FD_STEP_2ND, potential: Callable = kahler_potential) -> np.ndarray:
    """``d^2 K / dz_i d conj(z_j)`` by central differences in real coordinates.

    Uses ``d_i dbar_j = (d_xi d_xj + d_yi d_yj + i (d_xi d_yj - d_yi d_xj)) / 4``.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    n = len(z)
    x0 = np.concatenate([z.real, z.imag])

    def K(x):
        return potential(x[:n] + 1j * x[n:])

    def d2(a, b):
        ea, eb = np.zeros(2 * n), np.zeros(2 * n)
        ea[a] = h
        eb[b] = h
        return (K(x0 + ea + eb) - K(x0 + ea - eb) - K(x0 - ea + eb) + K(x0 - ea - eb)) / (4 * h * h)

    g = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            xi, yi, xj, yj = i, n + i, j, n + j
            g[i, j] = (d2(xi, xj) + d2(yi, yj) + 1j * (d2(xi, yj) - d2(yi, xj))) / 4
    return g


# built-in families ---------------------------------------------------------

def bernoulli_family() -> ProbFamily:
    return ProbFamily(lambda t: np.array([t[0], 1 - t[0]]), 1, 2,
                      jacobian=lambda t: np.array([[1.0], [-1.0]]))


def softmax_family(W, b=None) -> ProbFamily:
    """``p(theta) = softmax(W theta + b)`` with the analytic Jacobian."""
    W = np.asarray(W, dtype=float)
    n, d = W.shape
    b = np.zeros(n) if b is None else np.asarray(b, dtype=float)

    def p(t):
        a = W @ t + b
        e = np.exp(a - a.max())
        return e / e.sum()

    def jac(t):
        q = p(t)
        return (np.diag(q) - np.outer(q, q)) @ W

    return ProbFamily(p, d, n, jacobian=jac)


def constant_prob_family(p0) -> ProbFamily:
    p0 = np.asarray(p0, dtype=float)
    return ProbFamily(lambda t: p0.copy(), 1, len(p0), jacobian=lambda t: np.zeros((len(p0), 1)))


def bloch_theta_state() -> StateFamily:
    """``cos(theta/2)|0> + sin(theta/2)|1>``."""
    return StateFamily(
        lambda t: np.array([np.cos(t[0] / 2), np.sin(t[0] / 2)], dtype=complex), 1,
        jacobian=lambda t: np.array([[-np.sin(t[0] / 2) / 2], [np.cos(t[0] / 2) / 2]], dtype=complex))


def pure_density_family(sf: StateFamily) -> DensityFamily:
    """``rho = |psi><psi| / <psi|psi>`` for a one-parameter state family."""
    def rho(t):
        psi = sf.state(t)
        return np.outer(psi, psi.conj()) / np.real(np.vdot(psi, psi))

    def drho(t):
        psi = sf.state(t)
        dpsi = sf.jac(t)[:, 0]
        nrm = np.real(np.vdot(psi, psi))
        dn = 2 * np.real(np.vdot(psi, dpsi))
        outer = np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj())
        return outer / nrm - np.outer(psi, psi.conj()) * dn / nrm**2

    return DensityFamily(rho, drho)


def bloch_theta_density() -> DensityFamily:
    return pure_density_family(bloch_theta_state())


def diag_qubit_family() -> DensityFamily:
    """``rho(theta) = diag(theta, 1 - theta)``."""
    return DensityFamily(lambda t: np.diag([t, 1 - t]).astype(complex),
                         lambda t: np.diag([1.0, -1.0]).astype(complex))


def constant_density_family(rho0) -> DensityFamily:
    rho0 = np.asarray(rho0, dtype=complex)
    return DensityFamily(lambda t: rho0.copy(), lambda t: np.zeros_like(rho0))


def chart_family(n: int) -> StateFamily:
    """``psi = (1, z_1, ..., z_n)`` with real parameters ``(Re z, Im z)``."""
    def psi(t):
        return np.concatenate([[1.0], t[:n] + 1j * t[n:]])

    def jac(t):
        J = np.zeros((n + 1, 2 * n), dtype=complex)
        for i in range(n):
            J[i + 1, i] = 1
            J[i + 1, n + i] = 1j
        return J

    return StateFamily(psi, 2 * n, jacobian=jac)


def chart_metric(z, finite_differences: bool = False) -> np.ndarray:
    """The QGT of the affine chart pulled back to ``z``, as the coefficients of ``dz_i d conj(z_j)``.

    Along the real directions ``x_i = Re z_i`` the QGT equals ``<d_zi psi|d_zj psi>``-type
    entries, which are the coefficients of ``d conj(z_i) dz_j``; transposing gives the
    Fubini-Study convention.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    n = len(z)
    fam = chart_family(n)
    if finite_differences:
        fam = StateFamily(fam.psi, fam.dim_param)
    Q = qgt(fam, np.concatenate([z.real, z.imag]))
    return Q[:n, :n].T
