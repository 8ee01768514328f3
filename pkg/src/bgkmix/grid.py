"""Uniform Cartesian velocity lattice, quadrature moments, discrete
Maxwellians and anisotropic Gaussians, SPD factorization, entropy.

Quadrature is the midpoint rule with weight dv^d per node; for resolved
Gaussians this is spectrally accurate and symmetry cancellations of odd
moments are exact.  All reductions run in a fixed (numpy) order so
results are reproducible run to run.

Temperature uses the d-dimensional normalization
T = (m / (d n)) * sum w |v-u|^2 f; in three dimensions this is the usual
factor 3 convention, and lower grid dimensions scale the factor with d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDensityError, NoConvergenceError, NotSpdError

N_FLOOR = 1e-30  # separates "empty cell" from "division blow-up"


def _per_axis(value, dim: int, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = np.full(dim, float(arr))
    if arr.shape != (dim,):
        raise ValueError(f"{name} must be scalar or length {dim}")
    return arr


class VelocityGrid:
    """Midpoint-rule lattice over [vmin, vmax]^d.

    Nodes sit at cell centers, so a grid symmetric about the origin has
    exactly paired +/-v nodes and odd moments of even functions cancel
    to round-off.
    """

    def __init__(self, dim: int = 3, vmin=-8.0, vmax=8.0, points=32):
        if dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3 (got {dim})")
        self.dim = dim
        lo = _per_axis(vmin, dim, "vmin")
        hi = _per_axis(vmax, dim, "vmax")
        pts = np.asarray(points)
        if pts.ndim == 0:
            pts = np.full(dim, int(pts))
        pts = pts.astype(int)
        if pts.shape != (dim,):
            raise ValueError(f"points must be scalar or length {dim}")
        if np.any(pts < 8):
            raise ValueError(f"need at least 8 points per axis (got {pts})")
        if np.any(lo >= hi):
            raise ValueError(f"vmin must be below vmax per axis: {lo}, {hi}")
        self.vmin = lo
        self.vmax = hi
        self.points = pts
        self.dv = (hi - lo) / pts
        self.weight = float(np.prod(self.dv))
        self.axes = [lo[i] + (np.arange(pts[i]) + 0.5) * self.dv[i]
                     for i in range(dim)]
        mesh = np.meshgrid(*self.axes, indexing="ij")
        self.nodes = np.stack([m.reshape(-1) for m in mesh], axis=1)
        self.speed2 = np.einsum("ni,ni->n", self.nodes, self.nodes)
        self.nnodes = self.nodes.shape[0]

    @classmethod
    def reference(cls) -> "VelocityGrid":
        """32 points per axis on [-8, 8]^3."""
        return cls(dim=3, vmin=-8.0, vmax=8.0, points=32)

    def density(self, f: np.ndarray) -> float:
        """Quadrature number density of one distribution array."""
        return self.weight * float(np.sum(f))


@dataclass
class MomentSet:
    """Quadrature moments of one species.

    n       number density
    u       mean velocity (d,)
    T       temperature, trace(P) / (d n)
    P       pressure tensor m * int (v-u)(x)(v-u) f dv, symmetric (d, d)
    Q       raw energy flux (1/2) int |v|^2 v f dv (d,)
    Qtilde  peculiar heat flux m * int (v-u) |v-u|^2 f dv (d,)
    """

    n: float
    u: np.ndarray
    T: float
    P: np.ndarray | None = None
    Q: np.ndarray | None = None
    Qtilde: np.ndarray | None = None


@dataclass
class SpdTensor:
    """Symmetric positive-definite matrix with its Cholesky factor."""

    matrix: np.ndarray
    chol: np.ndarray


def moments(f: np.ndarray, mass: float, grid: VelocityGrid,
            n_floor: float = N_FLOOR) -> MomentSet:
    """Full moment set of a distribution array.

    Raises DegenerateDensityError when the quadrature density is below
    n_floor; mean velocity and temperature are undefined there.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.nnodes,):
        raise ValueError(f"distribution shape {f.shape} does not match grid "
                         f"({grid.nnodes} nodes)")
    w = grid.weight
    n = w * float(np.sum(f))
    if n < n_floor:
        raise DegenerateDensityError(n, n_floor)
    u = w * (f @ grid.nodes) / n
    c = grid.nodes - u
    P = mass * w * np.einsum("n,ni,nj->ij", f, c, c)
    P = 0.5 * (P + P.T)  # bitwise symmetric despite summation reassociation
    T = float(np.trace(P)) / (grid.dim * n)
    Q = 0.5 * w * ((grid.speed2 * f) @ grid.nodes)
    csq = np.einsum("ni,ni->n", c, c)
    Qt = mass * w * ((csq * f) @ c)
    return MomentSet(n=n, u=u, T=T, P=P, Q=Q, Qtilde=Qt)


def maxwellian_on_grid(n: float, u, T: float, mass: float,
                       grid: VelocityGrid) -> np.ndarray:
    """Drifting Maxwellian sampled at the grid nodes.

    Nodewise n / (2 pi T/m)^(d/2) * exp(-|v-u|^2 / (2 T/m)).
    """
    if T <= 0.0:
        raise ValueError(f"temperature must be positive (got {T})")
    if n < 0.0:
        raise ValueError(f"density must be nonnegative (got {n})")
    u = np.asarray(u, dtype=float)
    theta = T / mass
    c = grid.nodes - u
    expo = np.einsum("ni,ni->n", c, c) / (2.0 * theta)
    return n / (2.0 * math.pi * theta) ** (grid.dim / 2.0) * np.exp(-expo)


def spd_factor(matrix) -> SpdTensor:
    """Cholesky-factor a symmetric matrix; fail identifies the pivot.

    The matrix must be symmetric to 1e-12 (relative).  Factorization
    succeeds exactly when all eigenvalues are positive.
    """
    M = np.asarray(matrix, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    scale = max(1.0, float(np.max(np.abs(M))))
    if float(np.max(np.abs(M - M.T))) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric within 1e-12")
    d = M.shape[0]
    L = np.zeros_like(M)
    for j in range(d):
        s = M[j, j] - float(np.dot(L[j, :j], L[j, :j]))
        if s <= 0.0:
            raise NotSpdError(pivot=j, value=s, matrix=M)
        L[j, j] = math.sqrt(s)
        for i in range(j + 1, d):
            L[i, j] = (M[i, j] - float(np.dot(L[i, :j], L[j, :j]))) / L[j, j]
    return SpdTensor(matrix=M.copy(), chol=L)


def _forward_sub(L: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Solve L w = c rowwise for c of shape (N, d)."""
    d = L.shape[0]
    w = np.empty_like(c)
    for i in range(d):
        acc = c[:, i].copy()
        for k in range(i):
            acc -= L[i, k] * w[:, k]
        w[:, i] = acc / L[i, i]
    return w


def _backward_sub(L: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Solve L^T z = w rowwise for w of shape (N, d)."""
    d = L.shape[0]
    z = np.empty_like(w)
    for i in reversed(range(d)):
        acc = w[:, i].copy()
        for k in range(i + 1, d):
            acc -= L[k, i] * z[:, k]
        z[:, i] = acc / L[i, i]
    return z


def _gaussian_from_chol(n: float, u: np.ndarray, Lcov: np.ndarray,
                        grid: VelocityGrid) -> np.ndarray:
    """Gaussian with covariance Lcov Lcov^T, evaluated via the factor."""
    c = grid.nodes - u
    w = _forward_sub(Lcov, c)
    expo = 0.5 * np.einsum("ni,ni->n", w, w)
    norm = n / ((2.0 * math.pi) ** (grid.dim / 2.0)
                * float(np.prod(np.diag(Lcov))))
    return norm * np.exp(-expo)


def gaussian_on_grid(n: float, u, tensor, mass: float,
                     grid: VelocityGrid) -> np.ndarray:
    """Anisotropic Gaussian with temperature tensor `tensor`.

    Nodewise n / sqrt(det(2 pi T/m)) * exp(-(v-u) . (T/m)^-1 . (v-u) / 2),
    evaluated through the triangular factor (never an explicit inverse),
    which stays stable near the positive-definiteness boundary.  A plain
    matrix is factored first; factorization failure propagates.
    """
    if n < 0.0:
        raise ValueError(f"density must be nonnegative (got {n})")
    spd = tensor if isinstance(tensor, SpdTensor) else spd_factor(tensor)
    u = np.asarray(u, dtype=float)
    Lcov = spd.chol / math.sqrt(mass)
    return _gaussian_from_chol(n, u, Lcov, grid)


def _raw_moments(f: np.ndarray, grid: VelocityGrid):
    """(number, momentum (d,), energy-scalar sum w |v|^2 f)."""
    w = grid.weight
    return (w * float(np.sum(f)),
            w * (f @ grid.nodes),
            w * float(np.sum(grid.speed2 * f)))


def _tri_index(dim: int) -> list[tuple[int, int]]:
    """Upper-triangle index order: diagonal first, then off-diagonal."""
    idx = [(i, i) for i in range(dim)]
    idx += [(i, j) for i in range(dim) for j in range(i + 1, dim)]
    return idx


def match_moments(n: float, u, T: float, mass: float, grid: VelocityGrid,
                  tol: float = 1e-13, max_iter: int = 50,
                  return_info: bool = False) -> np.ndarray:
    """Discrete Maxwellian whose quadrature (n, u, T) hit the targets.

    Newton-corrects the Maxwellian parameters so the discrete moments
    match to `tol` (relative).  If the analytic parameters already match,
    the sampled Maxwellian is returned unchanged after zero iterations.

    Raises NoConvergenceError when the grid cannot represent the target
    (too coarse, or support clipped by the domain).
    """
    if n <= 0.0 or T <= 0.0:
        raise ValueError(f"targets require n > 0 and T > 0 (got {n}, {T})")
    u = np.asarray(u, dtype=float)
    d = grid.dim
    vth = math.sqrt(T / mass)
    unorm = float(np.linalg.norm(u))
    raw_target = np.concatenate(
        [[n], n * u, [n * (unorm * unorm + d * T / mass)]])
    basis = np.concatenate(
        [np.ones((grid.nnodes, 1)), grid.nodes, grid.speed2[:, None]], axis=1)

    p = np.concatenate([[n], u, [T]])
    for it in range(max_iter + 1):
        f = maxwellian_on_grid(p[0], p[1:1 + d], p[1 + d], mass, grid)
        qn, qmom, qe = _raw_moments(f, grid)
        if qn > 0.0:
            qu = qmom / qn
            qT = mass * (qe - qn * float(qu @ qu)) / (d * qn)
            ok = (abs(qn - n) <= tol * n
                  and float(np.linalg.norm(qu - u)) <= tol * (vth + unorm)
                  and abs(qT - T) <= tol * T)
            if ok:
                return (f, it) if return_info else f
        if it == max_iter:
            break
        resid = np.concatenate([[qn], qmom, [qe]]) - raw_target
        pn, pu, pT = p[0], p[1:1 + d], p[1 + d]
        theta = pT / mass
        c = grid.nodes - pu
        csq = np.einsum("ni,ni->n", c, c)
        deriv = np.empty((grid.nnodes, d + 2))
        deriv[:, 0] = f / pn
        for j in range(d):
            deriv[:, 1 + j] = f * c[:, j] / theta
        deriv[:, 1 + d] = f * (csq / (2.0 * theta * pT) - d / (2.0 * pT))
        jac = grid.weight * np.einsum("na,nb->ab", basis, deriv)
        try:
            step = np.linalg.solve(jac, resid)
        except np.linalg.LinAlgError as exc:
            raise NoConvergenceError(
                f"singular Jacobian while matching (n={n}, T={T})") from exc
        shrink = 1.0
        while shrink >= 2.0 ** -20:
            cand = p - shrink * step
            if cand[0] > 0.0 and cand[1 + d] > 0.0 and np.all(np.isfinite(cand)):
                break
            shrink *= 0.5
        else:
            raise NoConvergenceError(
                f"no admissible Newton step while matching (n={n}, T={T})")
        p = p - shrink * step
    raise NoConvergenceError(
        f"moment matching did not converge in {max_iter} iterations "
        f"(n={n}, T={T}; grid too coarse or support clipped)")


def match_gaussian(n: float, u, tensor, mass: float, grid: VelocityGrid,
                   tol: float = 1e-13, max_iter: int = 50,
                   return_info: bool = False) -> np.ndarray:
    """Discrete Gaussian whose quadrature (n, u, T-tensor) hit the targets.

    Analogue of match_moments for anisotropic targets: Newton on
    (n, u, covariance) against the raw moments (1, v, v(x)v).
    """
    if n <= 0.0:
        raise ValueError(f"targets require n > 0 (got {n})")
    spd = tensor if isinstance(tensor, SpdTensor) else spd_factor(tensor)
    u = np.asarray(u, dtype=float)
    d = grid.dim
    tri = _tri_index(d)
    ntri = len(tri)
    sigma_t = spd.matrix / mass
    tscale = float(np.trace(spd.matrix)) / d
    vth = math.sqrt(tscale / mass)
    unorm = float(np.linalg.norm(u))

    raw_target = np.concatenate(
        [[n], n * u, [n * (u[i] * u[j] + sigma_t[i, j]) for i, j in tri]])
    basis = np.concatenate(
        [np.ones((grid.nnodes, 1)), grid.nodes,
         np.stack([grid.nodes[:, i] * grid.nodes[:, j] for i, j in tri],
                  axis=1)], axis=1)

    def unpack(p):
        sig = np.empty((d, d))
        for k, (i, j) in enumerate(tri):
            sig[i, j] = sig[j, i] = p[1 + d + k]
        return p[0], p[1:1 + d], sig

    p = np.concatenate([[n], u, [sigma_t[i, j] for i, j in tri]])
    for it in range(max_iter + 1):
        pn, pu, sig = unpack(p)
        try:
            Lcov = np.linalg.cholesky(sig)
        except np.linalg.LinAlgError as exc:
            raise NoConvergenceError(
                "covariance left the positive-definite cone") from exc
        f = _gaussian_from_chol(pn, pu, Lcov, grid)
        w = grid.weight
        qn = w * float(np.sum(f))
        qmom = w * (f @ grid.nodes)
        qS = w * np.einsum("n,ni,nj->ij", f, grid.nodes, grid.nodes)
        if qn > 0.0:
            qu = qmom / qn
            qsig = qS / qn - np.outer(qu, qu)
            dev = float(np.max(np.abs(mass * qsig - spd.matrix)))
            ok = (abs(qn - n) <= tol * n
                  and float(np.linalg.norm(qu - u)) <= tol * (vth + unorm)
                  and dev <= tol * tscale)
            if ok:
                return (f, it) if return_info else f
        if it == max_iter:
            break
        resid = np.concatenate(
            [[qn], qmom, [qS[i, j] for i, j in tri]]) - raw_target
        c = grid.nodes - pu
        z = _backward_sub(Lcov, _forward_sub(Lcov, c))
        sig_inv = np.linalg.inv(sig)
        deriv = np.empty((grid.nnodes, 1 + d + ntri))
        deriv[:, 0] = f / pn
        for j in range(d):
            deriv[:, 1 + j] = f * z[:, j]
        for k, (i, j) in enumerate(tri):
            if i == j:
                deriv[:, 1 + d + k] = 0.5 * f * (z[:, i] ** 2 - sig_inv[i, i])
            else:
                deriv[:, 1 + d + k] = f * (z[:, i] * z[:, j] - sig_inv[i, j])
        jac = grid.weight * np.einsum("na,nb->ab", basis, deriv)
        try:
            step = np.linalg.solve(jac, resid)
        except np.linalg.LinAlgError as exc:
            raise NoConvergenceError(
                "singular Jacobian while matching Gaussian") from exc
        shrink = 1.0
        while shrink >= 2.0 ** -20:
            cand = p - shrink * step
            cn, cu, csig = unpack(cand)
            if cn > 0.0 and np.all(np.isfinite(cand)):
                try:
                    np.linalg.cholesky(csig)
                    break
                except np.linalg.LinAlgError:
                    pass
            shrink *= 0.5
        else:
            raise NoConvergenceError(
                "no admissible Newton step while matching Gaussian")
        p = p - shrink * step
    raise NoConvergenceError(
        f"Gaussian moment matching did not converge in {max_iter} iterations")


def _xlogx_sum(f: np.ndarray) -> float:
    """Sum of f log f with the 0 log 0 = 0 convention.

    Nonpositive values contribute exactly zero; negative excursions of a
    non-positivity-preserving integrator are clamped here only, never in
    the state itself.
    """
    out = 0.0
    pos = f > 0.0
    if np.any(pos):
        vals = f[pos]
        out = float(np.sum(vals * np.log(vals)))
    return out


def h_functional(f1: np.ndarray, f2: np.ndarray, grid: VelocityGrid) -> float:
    """Entropy functional sum_k sum_nodes w f_k log f_k."""
    return grid.weight * (_xlogx_sum(np.asarray(f1, dtype=float))
                          + _xlogx_sum(np.asarray(f2, dtype=float)))
