"""Local polynomial patches and the minimal curvature radius.

Around a base point, the sample is summarized by a d-plane plus symmetric
tensors of degrees 2..k-1 mapping the plane into ambient space, fitted by
least squares on the h-window under an operator-norm cap. Differentiating
the patch at an interior offset v gives a recentered tangent frame and a
second-order term; twice its normal component is the curvature form whose
largest operator norm over all patches and offsets inverts into the
minimal curvature radius.

The fit alternates tensor least squares (projector frozen, monomial basis
on bandwidth-rescaled coordinates) with a projector update by uncentered
PCA of the curvature-corrected neighbors, keeping the best objective seen.
The fitted second-degree tensor is the quadratic chart coefficient, half
the classical curvature; the factor two is restored when the curvature
form is assembled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations

import numpy as np

from .errors import (
    IllConditionedError,
    InsufficientDataError,
    InvalidInputError,
)
from .geometry import ModelParams, PointCloud
from .rng import rng_stream

__all__ = [
    "PatchConfig",
    "LocalPatch",
    "RecenteredFrame",
    "CurvatureEstimate",
    "bandwidth",
    "default_tensor_cap",
    "fit_patch",
    "patch_eval",
    "recentered_frame",
    "tensor_opnorm",
    "min_curvature_radius",
    "curvature_radius_estimate",
]

# Fraction of the bandwidth where patch evaluation stays well-posed.
_EVAL_DOMAIN = 7.0 / 8.0

# In-plane tolerance for offsets handed to patch operations.
_PLANE_TOL = 1e-8


def bandwidth(params: ModelParams, n: int, C: float = 1.0) -> float:
    """Window size (C * f_max^2 * log n / (f_min^3 * n))^(1/d)."""
    if int(n) < 2:
        raise InvalidInputError(f"sample size must be >= 2, got {n}")
    if not (C > 0 and math.isfinite(C)):
        raise InvalidInputError(f"tuning constant must be positive, got {C}")
    ratio = C * params.f_max**2 * math.log(int(n)) / (params.f_min**3 * int(n))
    return float(ratio ** (1.0 / params.d))


def default_tensor_cap(h: float, k: int) -> float:
    """Cap t = min(1/(4h), h^(-1/k)).

    Both the solver's full-rank condition t*h <= 1/4 and the scale
    condition t^k * h <= 1 hold for this choice at every bandwidth.
    """
    if not (h > 0 and math.isfinite(h)):
        raise InvalidInputError(f"bandwidth must be positive and finite, got {h}")
    if int(k) < 2:
        raise InvalidInputError(f"order k must be >= 2, got {k}")
    return float(min(1.0 / (4.0 * h), h ** (-1.0 / int(k))))


@dataclass(frozen=True)
class PatchConfig:
    """Dimensions and scales of one local fit.

    d is the plane dimension, k the expansion order (tensors run over
    degrees 2..k-1), h the window radius, and t the operator-norm cap
    max_j ||T^(j)||^(1/(j-1)) <= t enforced on the fitted tensors.
    """

    d: int
    k: int
    h: float
    t: float
    max_iters: int = 20
    tol: float = 1e-10

    def __post_init__(self) -> None:
        if int(self.d) < 1:
            raise InvalidInputError(f"plane dimension must be >= 1, got {self.d}")
        if int(self.k) < 2:
            raise InvalidInputError(f"order k must be >= 2, got {self.k}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "k", int(self.k))
        if not (self.h > 0 and math.isfinite(self.h)):
            raise InvalidInputError(f"bandwidth must be positive and finite, got {self.h}")
        if not (self.t > 0 and math.isfinite(self.t)):
            raise InvalidInputError(f"tensor cap must be positive and finite, got {self.t}")
        if int(self.max_iters) < 1:
            raise InvalidInputError(f"max_iters must be >= 1, got {self.max_iters}")
        object.__setattr__(self, "max_iters", int(self.max_iters))
        if not (self.tol >= 0):
            raise InvalidInputError(f"tolerance must be >= 0, got {self.tol}")


@dataclass(frozen=True)
class LocalPatch:
    """One fitted polynomial patch.

    frame holds an orthonormal basis of the plane as columns; tensors[j-2]
    has shape (D,) + (d,)*j and acts on frame coordinates. objective is
    the attained localized mean squared residual (window sum divided by
    n - 1) and n_window the neighbor count that entered the fit.
    """

    base_index: int
    center: np.ndarray
    projector: np.ndarray
    frame: np.ndarray
    tensors: tuple
    bandwidth: float
    tensor_cap: float
    objective: float
    n_window: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        object.__setattr__(self, "projector", np.asarray(self.projector, dtype=float))
        object.__setattr__(self, "frame", np.asarray(self.frame, dtype=float))
        object.__setattr__(
            self, "tensors", tuple(np.asarray(T, dtype=float) for T in self.tensors)
        )
        P = self.projector
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise InvalidInputError("projector must be a square matrix")
        if np.max(np.abs(P - P.T)) > 1e-10 or np.max(np.abs(P @ P - P)) > 1e-10:
            raise InvalidInputError("projector must be symmetric and idempotent")
        d = self.frame.shape[1]
        if abs(float(np.trace(P)) - d) > 1e-8:
            raise InvalidInputError("projector rank does not match the plane dimension")
        for j, T in enumerate(self.tensors, start=2):
            if T.shape != (self.frame.shape[0],) + (d,) * j:
                raise InvalidInputError(f"degree-{j} tensor has shape {T.shape}")
            nrm = _diag_norm(T)
            if nrm ** (1.0 / (j - 1)) > self.tensor_cap + 1e-9:
                raise InvalidInputError(f"degree-{j} tensor violates the cap")

    @property
    def dim(self) -> int:
        return self.frame.shape[0]

    @property
    def plane_dim(self) -> int:
        return self.frame.shape[1]


@dataclass(frozen=True)
class RecenteredFrame:
    """Differential data of a patch at an interior offset.

    J maps frame coordinates to ambient space (the patch derivative at v),
    tangent spans its image, projector_v projects onto it, and sff is the
    curvature form on tangent coordinates with values in the normal space.
    """

    v: np.ndarray
    J: np.ndarray
    tangent: np.ndarray
    projector_v: np.ndarray
    sff: np.ndarray


@dataclass(frozen=True)
class CurvatureEstimate:
    """Smallest curvature radius over all patches and interior offsets.

    per_patch_minima[i] is patch i's own minimum radius over its offset
    grid; R_ell_hat is the global minimum and arg its (patch index,
    ambient offset) witness. flat marks the all-zero-curvature case where
    the radius is +inf and no witness exists.
    """

    R_ell_hat: float
    arg: tuple[int, np.ndarray] | None
    per_patch_minima: np.ndarray
    flat: bool

    def __post_init__(self) -> None:
        if not (self.R_ell_hat > 0):
            raise InvalidInputError("curvature radius must be positive")


def _monomials(d: int, degree: int) -> list[tuple[int, ...]]:
    return list(combinations_with_replacement(range(d), degree))


def _multiplicity(m: tuple[int, ...]) -> int:
    out = math.factorial(len(m))
    for i in set(m):
        out //= math.factorial(m.count(i))
    return out


def _predict(tensors: tuple, xi: np.ndarray) -> np.ndarray:
    """Sum of T^(j)(xi^(tensor j)) over degrees, vectorized over rows of xi."""
    out = None
    letters = "abdefgijklnopq"
    for j, T in enumerate(tensors, start=2):
        spec = "c" + letters[:j] + "," + ",".join("m" + x for x in letters[:j]) + "->mc"
        term = np.einsum(spec, T, *([xi] * j))
        out = term if out is None else out + term
    if out is None:
        raise InvalidInputError("patch has no tensors to evaluate")
    return out


def _contract(T: np.ndarray, v: np.ndarray, times: int) -> np.ndarray:
    for _ in range(times):
        T = T @ v
    return T


def _diag_norm(T: np.ndarray) -> float:
    """max over unit v in the plane of ||T(v, ..., v)||."""
    T = np.asarray(T, dtype=float)
    j = T.ndim - 1
    d = T.shape[1] if j else 1
    if j == 0:
        return float(np.linalg.norm(T))
    if d == 1:
        return float(np.linalg.norm(_contract(T, np.ones(1), j)))
    if d == 2:
        def val(theta: float) -> float:
            u = np.array([math.cos(theta), math.sin(theta)])
            return float(np.linalg.norm(_contract(T, u, j)))

        grid = np.linspace(0.0, math.pi, max(64, 32 * j), endpoint=False)
        values = [val(th) for th in grid]
        best = int(np.argmax(values))
        step = grid[1] - grid[0]
        return _golden_max(val, grid[best] - step, grid[best] + step)[1]
    return _ascent_norm(T, j, d)


def _golden_max(f, lo: float, hi: float, tol: float = 1e-10) -> tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    e = a + invphi * (b - a)
    fc, fe = f(c), f(e)
    while b - a > tol:
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + invphi * (b - a)
            fe = f(e)
    x = 0.5 * (a + b)
    return x, max(f(x), fc, fe)


def _ascent_norm(T: np.ndarray, j: int, d: int) -> float:
    # 64 seeded restarts of projected gradient ascent on the unit sphere.
    rng = rng_stream(7, j, d)
    best = 0.0
    for _ in range(64):
        u = rng.standard_normal(d)
        u /= np.linalg.norm(u)
        step = 0.5
        fu = np.linalg.norm(_contract(T, u, j))
        for _ in range(200):
            lin = _contract(T, u, j - 1)  # (D, d)
            w = lin @ u
            grad = j * (lin.T @ w)
            cand = u + step * grad
            nrm = np.linalg.norm(cand)
            if nrm == 0.0:
                break
            cand /= nrm
            fc = np.linalg.norm(_contract(T, cand, j))
            if fc > fu:
                u, fu = cand, fc
                step *= 1.3
            else:
                step *= 0.5
                if step < 1e-12:
                    break
        best = max(best, float(fu))
    return best


def tensor_opnorm(sff: np.ndarray) -> float:
    """Largest ||sff(u, u)|| over unit directions u of the plane.

    Exact in one dimension; an angle grid with golden-section refinement
    in two; the best of 64 seeded projected-gradient ascents beyond.
    """
    sff = np.asarray(sff, dtype=float)
    if sff.ndim != 3 or sff.shape[1] != sff.shape[2] or sff.shape[1] < 1:
        raise InvalidInputError(f"curvature form must have shape (D, d, d), got {sff.shape}")
    return _diag_norm(sff)


def _cap_tensors(tensors: list[np.ndarray], t: float) -> list[np.ndarray]:
    out = []
    for j, T in enumerate(tensors, start=2):
        nrm = _diag_norm(T)
        limit = t ** (j - 1)
        if nrm > limit:
            T = T * (limit / nrm)
        out.append(T)
    return out


def _plane_coords(patch_frame: np.ndarray, v: np.ndarray, h: float, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    D = patch_frame.shape[0]
    if v.shape[0] != D:
        raise InvalidInputError(f"{name} has dimension {v.shape[0]}, ambient is {D}")
    coords = patch_frame.T @ v
    if np.linalg.norm(v - patch_frame @ coords) > _PLANE_TOL * (np.linalg.norm(v) + h):
        raise InvalidInputError(f"{name} does not lie in the patch plane")
    return coords


def fit_patch(cloud: PointCloud, i: int, cfg: PatchConfig) -> LocalPatch:
    """Fit plane and tensors to the h-window around sample point i.

    Alternates tensor least squares in the monomial basis (projector
    frozen) with a projector update by uncentered PCA of the neighbors
    minus their fitted higher-order part, starting from the local PCA
    plane. The cap is enforced by rescaling violating tensors, and the
    best objective seen is returned, so the result is never worse than
    the PCA-initialized fit.
    """
    pts = cloud.points
    n, D = pts.shape
    if not (0 <= int(i) < n):
        raise InvalidInputError(f"base index {i} out of range for {n} points")
    i = int(i)
    if cfg.d >= D:
        raise InvalidInputError(f"plane dimension {cfg.d} must be below ambient {D}")
    offsets = pts - pts[i]
    dist = np.linalg.norm(offsets, axis=1)
    window = (dist <= cfg.h) & (np.arange(n) != i)
    X = offsets[window]
    m = X.shape[0]
    if m < cfg.d + 2:
        raise InsufficientDataError(
            f"{m} neighbors within h={cfg.h:.4g} of point {i}, need at least {cfg.d + 2}"
        )

    degrees = list(range(2, cfg.k))
    monomials = [(j, mono) for j in degrees for mono in _monomials(cfg.d, j)]
    X_scaled = X / cfg.h

    def tensors_for(E: np.ndarray) -> list[np.ndarray]:
        if not monomials:
            return []
        xi_s = X_scaled @ E
        design = np.empty((m, len(monomials)))
        for col, (_, mono) in enumerate(monomials):
            design[:, col] = np.prod(xi_s[:, mono], axis=1)
        target = X_scaled - (X_scaled @ E) @ E.T
        gamma, *_ = np.linalg.lstsq(design, target, rcond=None)
        tensors = []
        for j in degrees:
            T = np.zeros((D,) + (cfg.d,) * j)
            for col, (jj, mono) in enumerate(monomials):
                if jj != j:
                    continue
                value = gamma[col] * (cfg.h ** (1 - j) / _multiplicity(mono))
                for perm in set(permutations(mono)):
                    T[(slice(None),) + perm] = value
            tensors.append(T)
        return _cap_tensors(tensors, cfg.t)

    def objective_for(E: np.ndarray, tensors: list[np.ndarray]) -> float:
        xi = X @ E
        normal = X - xi @ E.T
        resid = normal - _predict(tuple(tensors), xi) if tensors else normal
        return float(np.sum(resid**2)) / (n - 1)

    def pca_plane(Y: np.ndarray) -> np.ndarray:
        _, _, vt = np.linalg.svd(Y, full_matrices=False)
        return vt[: cfg.d].T

    E = pca_plane(X)
    best = None
    prev_obj = math.inf
    for _ in range(cfg.max_iters):
        tensors = tensors_for(E)
        obj = objective_for(E, tensors)
        if best is None or obj < best[0]:
            best = (obj, E, tensors)
        if prev_obj - obj <= cfg.tol * max(abs(prev_obj), 1e-300):
            break
        prev_obj = obj
        xi = X @ E
        corrected = X - _predict(tuple(tensors), xi) if tensors else X
        E = pca_plane(corrected)

    obj, E, tensors = best
    return LocalPatch(
        base_index=i,
        center=pts[i].copy(),
        projector=E @ E.T,
        frame=E,
        tensors=tuple(tensors),
        bandwidth=cfg.h,
        tensor_cap=cfg.t,
        objective=obj,
        n_window=m,
    )


def patch_eval(patch: LocalPatch, v) -> np.ndarray:
    """Point of the patch at in-plane offset v: center + v + sum T^(j)(v)."""
    coords = _plane_coords(patch.frame, v, patch.bandwidth, "offset v")
    if np.linalg.norm(coords) > _EVAL_DOMAIN * patch.bandwidth:
        raise InvalidInputError(
            f"offset norm {np.linalg.norm(coords):.4g} outside the patch domain "
            f"{_EVAL_DOMAIN * patch.bandwidth:.4g}"
        )
    out = patch.center + patch.frame @ coords
    for j, T in enumerate(patch.tensors, start=2):
        out = out + _contract(T, coords, j)
    return out


def recentered_frame(patch: LocalPatch, v) -> RecenteredFrame:
    """Tangent frame and curvature form of the patch at offset v.

    J collects the patch derivative columns; the second-order coefficient
    is recentered through J's inverse onto the new tangent plane, and its
    normal component, doubled, gives the curvature form (the fitted
    coefficient is half the second derivative).
    """
    coords = _plane_coords(patch.frame, v, patch.bandwidth, "offset v")
    h, t = patch.bandwidth, patch.tensor_cap
    if np.linalg.norm(coords) > 0.25 * h * (1.0 + 1e-12):
        raise InvalidInputError("offset must satisfy ||v|| <= h/4")
    if t * h > 0.25 * (1.0 + 1e-12):
        raise InvalidInputError("recentering requires t * h <= 1/4")
    D, d = patch.frame.shape
    J = patch.frame.copy()
    for j, T in enumerate(patch.tensors, start=2):
        J = J + j * _contract(T, coords, j - 1)
    U, s, Vt = np.linalg.svd(J, full_matrices=False)
    if s[-1] <= 1e-8 * s[0]:
        raise IllConditionedError("patch derivative is numerically singular")
    tangent = U
    projector_v = U @ U.T
    pinv = Vt.T @ np.diag(1.0 / s) @ U.T
    second = np.zeros((D, d, d))
    for j, T in enumerate(patch.tensors, start=2):
        second = second + (math.comb(j, 2)) * _contract(T, coords, j - 2)
    A = pinv @ tangent
    mixed = np.einsum("cpq,pa,qb->cab", second, A, A)
    normal_part = mixed - np.einsum("ce,eab->cab", projector_v, mixed)
    sff = 2.0 * normal_part
    return RecenteredFrame(
        v=np.asarray(v, dtype=float).reshape(-1).copy(),
        J=J,
        tangent=tangent,
        projector_v=projector_v,
        sff=sff,
    )


def _patch_grid(patch: LocalPatch, g: int) -> np.ndarray:
    d = patch.plane_dim
    r = 0.25 * patch.bandwidth
    axes = [np.linspace(-r, r, g) for _ in range(d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([m.reshape(-1) for m in mesh], axis=1)
    keep = np.linalg.norm(coords, axis=1) <= r * (1.0 + 1e-12)
    return coords[keep]


def min_curvature_radius(patches, grid: int = 9) -> CurvatureEstimate:
    """Smallest curvature radius over patches and their offset grids.

    Evaluates the curvature form on a regular grid of g points per axis
    inside the ball of radius h/4, refines around the grid argmax by
    one golden-section pass per axis, and inverts the largest operator
    norm found. All-zero curvature is reported as +inf with a flat flag.
    """
    patches = list(patches)
    if not patches:
        raise InvalidInputError("need at least one patch")
    g = int(grid)
    if g < 5:
        raise InvalidInputError(f"grid resolution must be >= 5 per axis, got {grid}")
    best_curv = 0.0
    best_arg = None
    minima = np.empty(len(patches))
    for p_idx, patch in enumerate(patches):
        coords = _patch_grid(patch, g)
        values = np.array(
            [tensor_opnorm(recentered_frame(patch, patch.frame @ c).sff) for c in coords]
        )
        k = int(np.argmax(values))
        c_star, v_star = coords[k].copy(), float(values[k])
        r = 0.25 * patch.bandwidth
        step = 2.0 * r / (g - 1)
        for axis in range(patch.plane_dim):
            def along(x: float) -> float:
                c = c_star.copy()
                c[axis] = x
                if np.linalg.norm(c) > r:
                    return -math.inf
                return tensor_opnorm(recentered_frame(patch, patch.frame @ c).sff)

            lo = max(c_star[axis] - step, -r)
            hi = min(c_star[axis] + step, r)
            x_best, f_best = _golden_max(along, lo, hi)
            if f_best > v_star:
                c_star[axis] = x_best
                v_star = f_best
        minima[p_idx] = 1.0 / v_star if v_star > 0 else math.inf
        if v_star > best_curv:
            best_curv = v_star
            best_arg = (p_idx, patch.frame @ c_star)
    if best_curv == 0.0:
        return CurvatureEstimate(math.inf, None, minima, True)
    return CurvatureEstimate(1.0 / best_curv, best_arg, minima, False)


def curvature_radius_estimate(
    cloud: PointCloud,
    params: ModelParams,
    *,
    h: float | None = None,
    t: float | None = None,
    grid: int = 9,
    stride: int = 1,
    C: float = 1.0,
    max_iters: int = 20,
    tol: float = 1e-10,
) -> CurvatureEstimate:
    """Fit patches at every stride-th sample point and take the radius minimum.

    h defaults to bandwidth(params, n, C) and t to default_tensor_cap.
    """
    if int(stride) < 1:
        raise InvalidInputError(f"stride must be >= 1, got {stride}")
    n = len(cloud)
    if h is None:
        h = bandwidth(params, n, C)
    if t is None:
        t = default_tensor_cap(h, params.k)
    cfg = PatchConfig(params.d, params.k, float(h), float(t), max_iters, tol)
    patches = [fit_patch(cloud, i, cfg) for i in range(0, n, int(stride))]
    return min_curvature_radius(patches, grid)
