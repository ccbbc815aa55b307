"""Synthetic shapes with known geometry.

Each shape knows how to sample itself uniformly with respect to intrinsic
volume, report its closed-form invariants (reach, weak feature size,
minimal curvature radius), and build an intrinsic metric table on a
sampled cloud. Metrics are exact where a closed form exists (circle,
sphere, wedge, parallel circles) and fine-grained numerical otherwise
(ellipse arc-length table, torus neighborhood graph); approximate tables
are flagged on the oracle.

Randomness: samplers take a `numpy.random.Generator`; the top-level
`sample` builds one from a seed via `rng_stream` (Philox, counter-based,
documented stream splitting).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import InvalidInputError, ResolutionError
from .geometry import FiniteMetricSpace, PointCloud
from .rng import rng_stream

__all__ = [
    "OracleSet",
    "Shape",
    "Circle",
    "Sphere",
    "Ellipse",
    "Torus",
    "FlatTorus",
    "Wedge",
    "ParallelCircles",
    "TurnWidget",
    "BumpedCylinder",
    "make_shape",
    "list_shapes",
    "sample",
    "oracle_metric",
    "wedge_mu_reach",
    "turn_widget",
    "TurnWidgetProfile",
    "widget_circle",
    "bumped_cylinder_map",
    "bump_geodesic_gap",
    "GapResult",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class OracleSet:
    """Closed-form invariants of a shape.

    reach: distance to the medial axis. wfs: weak feature size. r_ell:
    minimal curvature radius (inf for flat pieces). diam: Euclidean
    diameter. exact_metric: whether oracle_metric is a closed form rather
    than a fine numerical approximation.
    """

    reach: float
    wfs: float
    r_ell: float
    diam: float
    exact_metric: bool

    def __post_init__(self) -> None:
        if math.isfinite(self.reach) and math.isfinite(self.wfs) and self.reach > self.wfs:
            raise InvalidInputError("oracle violates reach <= wfs")


class Shape:
    """Base class for synthetic shapes."""

    kind = "abstract"
    dim = 2            # ambient dimension
    intrinsic_dim = 1

    def sample_points(self, n: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def oracle(self) -> OracleSet:
        raise InvalidInputError(f"shape {self.kind!r} has no closed-form oracle")

    def metric_table(self, points: np.ndarray) -> np.ndarray:
        raise InvalidInputError(f"shape {self.kind!r} has no oracle metric")

    def tangent_projectors(self, points: np.ndarray) -> np.ndarray:
        raise InvalidInputError(f"shape {self.kind!r} has no tangent oracle")


def _check_positive(**kwargs) -> None:
    for name, value in kwargs.items():
        if not (value > 0 and math.isfinite(value)):
            raise InvalidInputError(f"{name} must be positive and finite, got {value}")


def _circle_angles(points: np.ndarray, radius: float, what: str) -> np.ndarray:
    norms = np.linalg.norm(points[:, :2], axis=1)
    if np.max(np.abs(norms - radius)) > 1e-6 * radius:
        raise InvalidInputError(f"points do not lie on the {what} (radius mismatch)")
    return np.arctan2(points[:, 1], points[:, 0])


def _arc_table(angles: np.ndarray, radius: float) -> np.ndarray:
    d = np.abs(angles[:, None] - angles[None, :])
    d = np.minimum(d, _TWO_PI - d)
    return radius * d


@dataclass(frozen=True)
class Circle(Shape):
    """Round circle of radius R in the plane."""

    R: float
    kind = "circle"
    dim = 2
    intrinsic_dim = 1

    def __post_init__(self) -> None:
        _check_positive(R=self.R)

    def sample_points(self, n, rng):
        theta = rng.uniform(0.0, _TWO_PI, size=n)
        return self.R * np.column_stack([np.cos(theta), np.sin(theta)])

    def oracle(self):
        return OracleSet(self.R, self.R, self.R, 2.0 * self.R, True)

    def metric_table(self, points):
        return _arc_table(_circle_angles(points, self.R, "circle"), self.R)

    def tangent_projectors(self, points):
        t = np.column_stack([-points[:, 1], points[:, 0]]) / self.R
        return np.einsum("ni,nj->nij", t, t)


@dataclass(frozen=True)
class Sphere(Shape):
    """Round d-sphere of radius R in R^(d+1)."""

    d: int
    R: float
    kind = "sphere"

    def __post_init__(self) -> None:
        if int(self.d) < 1:
            raise InvalidInputError("sphere dimension must be >= 1")
        object.__setattr__(self, "d", int(self.d))
        _check_positive(R=self.R)

    @property
    def dim(self):
        return self.d + 1

    @property
    def intrinsic_dim(self):
        return self.d

    def sample_points(self, n, rng):
        g = rng.standard_normal(size=(n, self.d + 1))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        return self.R * g

    def oracle(self):
        return OracleSet(self.R, self.R, self.R, 2.0 * self.R, True)

    def metric_table(self, points):
        norms = np.linalg.norm(points, axis=1)
        if np.max(np.abs(norms - self.R)) > 1e-6 * self.R:
            raise InvalidInputError("points do not lie on the sphere")
        cosang = np.clip(points @ points.T / self.R**2, -1.0, 1.0)
        out = self.R * np.arccos(cosang)
        # arccos residue off exact 1.0 leaves junk on the diagonal
        np.fill_diagonal(out, 0.0)
        return out

    def tangent_projectors(self, points):
        u = points / self.R
        eye = np.eye(self.d + 1)
        return eye[None, :, :] - np.einsum("ni,nj->nij", u, u)


@dataclass(frozen=True)
class Ellipse(Shape):
    """Ellipse x = a cos t, y = b sin t with a >= b > 0."""

    a: float
    b: float
    kind = "ellipse"
    dim = 2
    intrinsic_dim = 1

    def __post_init__(self) -> None:
        _check_positive(a=self.a, b=self.b)
        if self.a < self.b:
            raise InvalidInputError("ellipse requires a >= b")

    def _speed(self, t):
        return np.sqrt((self.a * np.sin(t)) ** 2 + (self.b * np.cos(t)) ** 2)

    def sample_points(self, n, rng):
        # Rejection against the circumscribed rate a makes t arc-length uniform.
        out = np.empty(0)
        while out.size < n:
            t = rng.uniform(0.0, _TWO_PI, size=2 * (n - out.size) + 16)
            u = rng.uniform(0.0, 1.0, size=t.size)
            out = np.concatenate([out, t[u * self.a <= self._speed(t)]])
        t = out[:n]
        return np.column_stack([self.a * np.cos(t), self.b * np.sin(t)])

    def oracle(self):
        r_osc = self.b**2 / self.a
        return OracleSet(r_osc, self.b, r_osc, 2.0 * self.a, self.a == self.b)

    def _params_of(self, points):
        t = np.arctan2(points[:, 1] / self.b, points[:, 0] / self.a)
        rebuilt = np.column_stack([self.a * np.cos(t), self.b * np.sin(t)])
        if np.max(np.linalg.norm(rebuilt - points, axis=1)) > 1e-6 * self.a:
            raise InvalidInputError("points do not lie on the ellipse")
        return np.mod(t, _TWO_PI)

    @lru_cache(maxsize=1)
    def _arclength_grid(self):
        t = np.linspace(0.0, _TWO_PI, 1 << 18)
        s = integrate.cumulative_trapezoid(self._speed(t), t, initial=0.0)
        return t, s

    def arc_coordinates(self, points):
        t_grid, s_grid = self._arclength_grid()
        return np.interp(self._params_of(points), t_grid, s_grid), float(s_grid[-1])

    def metric_table(self, points):
        s, total = self.arc_coordinates(points)
        d = np.abs(s[:, None] - s[None, :])
        return np.minimum(d, total - d)

    def tangent_projectors(self, points):
        t = self._params_of(points)
        v = np.column_stack([-self.a * np.sin(t), self.b * np.cos(t)])
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        return np.einsum("ni,nj->nij", v, v)


@dataclass(frozen=True)
class Torus(Shape):
    """Torus of revolution in R^3 with center radius Rc and tube radius r."""

    Rc: float
    r: float
    kind = "torus"
    dim = 3
    intrinsic_dim = 2

    def __post_init__(self) -> None:
        _check_positive(Rc=self.Rc, r=self.r)
        if self.Rc <= self.r:
            raise InvalidInputError("torus requires Rc > r")

    def sample_points(self, n, rng):
        phi = rng.uniform(0.0, _TWO_PI, size=n)
        # Tube angle is area-weighted by (Rc + r cos theta).
        theta = np.empty(0)
        while theta.size < n:
            cand = rng.uniform(0.0, _TWO_PI, size=2 * (n - theta.size) + 16)
            u = rng.uniform(0.0, 1.0, size=cand.size)
            accept = u * (self.Rc + self.r) <= self.Rc + self.r * np.cos(cand)
            theta = np.concatenate([theta, cand[accept]])
        theta = theta[:n]
        ring = self.Rc + self.r * np.cos(theta)
        return np.column_stack([ring * np.cos(phi), ring * np.sin(phi), self.r * np.sin(theta)])

    def oracle(self):
        rch = min(self.r, self.Rc - self.r)
        return OracleSet(rch, rch, rch, 2.0 * (self.Rc + self.r), False)

    def _angles_of(self, points):
        phi = np.arctan2(points[:, 1], points[:, 0])
        rho = np.hypot(points[:, 0], points[:, 1]) - self.Rc
        theta = np.arctan2(points[:, 2], rho)
        ring = self.Rc + self.r * np.cos(theta)
        rebuilt = np.column_stack(
            [ring * np.cos(phi), ring * np.sin(phi), self.r * np.sin(theta)]
        )
        if np.max(np.linalg.norm(rebuilt - points, axis=1)) > 1e-6 * self.r:
            raise InvalidInputError("points do not lie on the torus")
        return theta, phi

    def metric_table(self, points):
        # No closed form. A neighborhood graph at a few mean spacings is
        # accurate for pairs far apart, but pairs at separations near the
        # graph radius carry an O(radius/separation) hop-quantization
        # overestimate; use FlatTorus when exact distances matter.
        from .graphs import all_pairs_geodesics, build_graph

        n = points.shape[0]
        if n < 32:
            raise ResolutionError("torus metric table needs at least 32 points")
        area = _TWO_PI**2 * self.Rc * self.r
        radius = 3.5 * math.sqrt(area / n)
        graph = build_graph(PointCloud(points), radius)
        table = all_pairs_geodesics(graph)
        if not np.all(np.isfinite(table)):
            raise ResolutionError("torus sample too sparse: neighborhood graph is disconnected")
        return table

    def tangent_projectors(self, points):
        theta, phi = self._angles_of(points)
        e_t = np.column_stack(
            [-np.sin(theta) * np.cos(phi), -np.sin(theta) * np.sin(phi), np.cos(theta)]
        )
        e_p = np.column_stack([-np.sin(phi), np.cos(phi), np.zeros_like(phi)])
        return np.einsum("ni,nj->nij", e_t, e_t) + np.einsum("ni,nj->nij", e_p, e_p)


@dataclass(frozen=True)
class FlatTorus(Shape):
    """Product of two circles S^1(r1) x S^1(r2) embedded in R^4.

    Unlike the revolution torus this has closed-form geodesics: the
    intrinsic metric is the flat product metric on the two wrapped angle
    differences. The nearest-point map degenerates where either circle
    factor hits its center, so the reach is min(r1, r2), and the same
    value is the weak feature size and the osculating radius.
    """

    r1: float
    r2: float
    kind = "flat-torus"
    dim = 4
    intrinsic_dim = 2

    def __post_init__(self) -> None:
        _check_positive(r1=self.r1, r2=self.r2)

    def sample_points(self, n, rng):
        # The flat metric makes angle-uniform sampling area-uniform.
        u = rng.uniform(0.0, _TWO_PI, size=n)
        v = rng.uniform(0.0, _TWO_PI, size=n)
        return np.column_stack(
            [
                self.r1 * np.cos(u),
                self.r1 * np.sin(u),
                self.r2 * np.cos(v),
                self.r2 * np.sin(v),
            ]
        )

    def oracle(self):
        rch = min(self.r1, self.r2)
        return OracleSet(rch, rch, rch, 2.0 * math.hypot(self.r1, self.r2), True)

    def _angles_of(self, points):
        n1 = np.linalg.norm(points[:, :2], axis=1)
        n2 = np.linalg.norm(points[:, 2:], axis=1)
        if np.max(np.abs(n1 - self.r1)) > 1e-6 * self.r1 or np.max(
            np.abs(n2 - self.r2)
        ) > 1e-6 * self.r2:
            raise InvalidInputError("points do not lie on the flat torus")
        return np.arctan2(points[:, 1], points[:, 0]), np.arctan2(points[:, 3], points[:, 2])

    def metric_table(self, points):
        u, v = self._angles_of(points)
        du = np.abs(u[:, None] - u[None, :])
        dv = np.abs(v[:, None] - v[None, :])
        du = np.minimum(du, _TWO_PI - du)
        dv = np.minimum(dv, _TWO_PI - dv)
        return np.hypot(self.r1 * du, self.r2 * dv)

    def tangent_projectors(self, points):
        u, v = self._angles_of(points)
        z = np.zeros_like(u)
        e_u = np.column_stack([-np.sin(u), np.cos(u), z, z])
        e_v = np.column_stack([z, z, -np.sin(v), np.cos(v)])
        return np.einsum("ni,nj->nij", e_u, e_u) + np.einsum("ni,nj->nij", e_v, e_v)


@dataclass(frozen=True)
class Wedge(Shape):
    """Two segments of equal length meeting at the origin with angle alpha."""

    alpha: float
    arm_length: float = 1.0
    kind = "wedge"
    dim = 2
    intrinsic_dim = 1

    def __post_init__(self) -> None:
        _check_positive(arm_length=self.arm_length)
        if not (0.0 < self.alpha < math.pi):
            raise InvalidInputError("wedge angle must lie in (0, pi)")

    def _arm_dirs(self):
        return np.array([[1.0, 0.0], [math.cos(self.alpha), math.sin(self.alpha)]])

    def sample_points(self, n, rng):
        arm = rng.integers(0, 2, size=n)
        t = rng.uniform(0.0, self.arm_length, size=n)
        return t[:, None] * self._arm_dirs()[arm]

    def oracle(self):
        diam = self.arm_length * max(1.0, 2.0 * math.sin(self.alpha / 2.0))
        return OracleSet(0.0, math.inf, math.inf, diam, True)

    def arm_coordinates(self, points):
        """Classify each point onto an arm and return (arm index, apex distance)."""
        t = np.linalg.norm(points, axis=1)
        dirs = self._arm_dirs()
        scores = points @ dirs.T
        arm = np.argmax(scores, axis=1)
        rebuilt = t[:, None] * dirs[arm]
        if np.max(np.linalg.norm(rebuilt - points, axis=1)) > 1e-6 * self.arm_length:
            raise InvalidInputError("points do not lie on the wedge")
        return arm, t

    def metric_table(self, points):
        arm, t = self.arm_coordinates(points)
        same = arm[:, None] == arm[None, :]
        return np.where(same, np.abs(t[:, None] - t[None, :]), t[:, None] + t[None, :])

    def mu_reach(self, mu: float) -> float:
        if not (0.0 < mu <= 1.0):
            raise InvalidInputError("mu must lie in (0, 1]")
        return 0.0 if mu >= math.sin(self.alpha / 2.0) else math.inf


@dataclass(frozen=True)
class ParallelCircles(Shape):
    """Two coaxial circles of radius R in planes z = +w and z = -w.

    The closest approach between the components is the bottleneck 2w, so
    for w < R the reach and weak feature size both equal w while the
    curvature radius stays R. Cross-component intrinsic distances are +inf.
    """

    R: float
    w: float
    kind = "parallel-circles"
    dim = 3
    intrinsic_dim = 1

    def __post_init__(self) -> None:
        _check_positive(R=self.R, w=self.w)

    def sample_points(self, n, rng):
        theta = rng.uniform(0.0, _TWO_PI, size=n)
        z = self.w * np.where(rng.integers(0, 2, size=n) == 0, -1.0, 1.0)
        return np.column_stack([self.R * np.cos(theta), self.R * np.sin(theta), z])

    def oracle(self):
        rch = min(self.R, self.w)
        return OracleSet(rch, rch, self.R, 2.0 * math.hypot(self.R, self.w), True)

    def metric_table(self, points):
        if np.max(np.abs(np.abs(points[:, 2]) - self.w)) > 1e-6 * self.w:
            raise InvalidInputError("points do not lie on the parallel circles")
        angles = _circle_angles(points, self.R, "parallel circles")
        arcs = _arc_table(angles, self.R)
        same = np.sign(points[:, 2])[:, None] == np.sign(points[:, 2])[None, :]
        return np.where(same, arcs, np.inf)

    def tangent_projectors(self, points):
        t = np.zeros_like(points)
        t[:, 0] = -points[:, 1] / self.R
        t[:, 1] = points[:, 0] / self.R
        return np.einsum("ni,nj->nij", t, t)


# ---------------------------------------------------------------------------
# Turn widget: a mollified ramp profile that turns a straight profile line
# onto a circle of radius R_alpha = 1 / sin(alpha), with derivative bounds
# uniform in alpha after rescaling.

_KERNEL_H = 1.0 / 100.0


def _kernel_base(x: float) -> float:
    if abs(x) >= 1.0:
        return 0.0
    return math.exp(-1.0 / (1.0 - x * x))


@lru_cache(maxsize=1)
def _kernel_norm() -> float:
    val, _ = integrate.quad(_kernel_base, -1.0, 1.0, epsabs=1e-14, epsrel=1e-13)
    return 1.0 / val


def _kernel_moments(b: float) -> tuple[float, float]:
    """(integral of K_h, integral of x K_h) over [-h, b], b in [-h, h]."""
    c0 = _kernel_norm()
    if b <= -_KERNEL_H:
        return 0.0, 0.0
    b = min(b, _KERNEL_H)
    u = b / _KERNEL_H
    m0, _ = integrate.quad(_kernel_base, -1.0, u, epsabs=1e-13, epsrel=1e-12)
    m1, _ = integrate.quad(lambda s: s * _kernel_base(s), -1.0, u, epsabs=1e-13, epsrel=1e-12)
    return c0 * m0, c0 * m1 * _KERNEL_H


@dataclass(frozen=True)
class TurnWidgetProfile:
    """Sampled widget profile and its closed-form pieces."""

    alpha: float
    R: float
    R_alpha: float
    t_star: float
    scale: float
    t: np.ndarray
    G: np.ndarray
    G_prime: np.ndarray
    curve: np.ndarray  # (n, 2) graph points after rescaling by scale


def turn_widget(alpha: float, R: float, t_grid) -> TurnWidgetProfile:
    """Mollified turning profile G_alpha sampled on t_grid, rescaled to radius R.

    G_alpha is the ramp A_alpha(t) = max(0, C(1) + (t-1) C'(1)) smoothed by a
    compactly supported mollifier of width 1/100, where C(t) = R_alpha -
    sqrt(R_alpha^2 - t^2) is the circle of radius R_alpha = 1/sin(alpha).
    The profile vanishes identically near 0, agrees with the tangent line of
    the circle near 1, and is convex with G < C on (0, 1). The returned curve
    is the graph (t, G(t)) dilated by R / R_alpha.
    """
    if not (0.0 < alpha <= math.pi / 4.0):
        raise InvalidInputError("turn widget angle must lie in (0, pi/4]")
    _check_positive(R=R)
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise InvalidInputError("t_grid must be a nonempty 1d array")
    if np.any(t < 0.0) or np.any(t > 1.0 + 1e-12):
        raise InvalidInputError("t_grid must lie inside [0, 1]")

    r_alpha = 1.0 / math.sin(alpha)
    c1 = r_alpha - math.sqrt(r_alpha**2 - 1.0)          # C(1) = tan(alpha/2)
    c1p = 1.0 / math.sqrt(r_alpha**2 - 1.0)             # C'(1) = tan(alpha)
    t_star = 1.0 - c1 / c1p                             # ramp root, = 1/(1+cos a)
    if t_star <= _KERNEL_H:
        raise InvalidInputError("ramp root too close to 0 for the mollifier width")

    g = np.empty_like(t)
    gp = np.empty_like(t)
    for idx, ti in enumerate(t):
        x0 = ti - t_star
        if x0 <= -_KERNEL_H:
            g[idx] = 0.0
            gp[idx] = 0.0
        elif x0 >= _KERNEL_H:
            g[idx] = c1 + (ti - 1.0) * c1p
            gp[idx] = c1p
        else:
            m0, m1 = _kernel_moments(x0)
            g[idx] = (c1 + (ti - 1.0) * c1p) * m0 - c1p * m1
            gp[idx] = c1p * m0
    scale = R / r_alpha
    curve = scale * np.column_stack([t, g])
    return TurnWidgetProfile(alpha, R, r_alpha, t_star, scale, t, g, gp, curve)


def widget_circle(alpha: float, t) -> np.ndarray:
    """The comparison circle profile C_alpha(t) = R_alpha - sqrt(R_alpha^2 - t^2)."""
    if not (0.0 < alpha <= math.pi / 4.0):
        raise InvalidInputError("turn widget angle must lie in (0, pi/4]")
    r_alpha = 1.0 / math.sin(alpha)
    t = np.asarray(t, dtype=float)
    return r_alpha - np.sqrt(r_alpha**2 - t**2)


@dataclass(frozen=True)
class TurnWidget(Shape):
    """Planar curve given by the rescaled widget graph over [0, 1]."""

    alpha: float
    R: float
    kind = "turn-widget"
    dim = 2
    intrinsic_dim = 1

    def __post_init__(self) -> None:
        _check_positive(R=self.R)
        if not (0.0 < self.alpha <= math.pi / 4.0):
            raise InvalidInputError("turn widget angle must lie in (0, pi/4]")

    def sample_points(self, n, rng):
        r_alpha = 1.0 / math.sin(self.alpha)
        c1p = 1.0 / math.sqrt(r_alpha**2 - 1.0)
        speed_max = math.sqrt(1.0 + c1p**2)
        t = np.empty(0)
        while t.size < n:
            cand = rng.uniform(0.0, 1.0, size=2 * (n - t.size) + 16)
            prof = turn_widget(self.alpha, self.R, cand)
            u = rng.uniform(0.0, 1.0, size=cand.size)
            speed = np.sqrt(1.0 + prof.G_prime**2)
            t = np.concatenate([t, cand[u * speed_max <= speed]])
        prof = turn_widget(self.alpha, self.R, t[:n])
        return prof.curve


# ---------------------------------------------------------------------------
# Bumped cylinder: a cylinder section carrying a bump of height ~ c eps^k and
# width eps, used to probe how geodesic lengths respond to C^k perturbations.


@dataclass(frozen=True)
class BumpedCylinder(Shape):
    """Cylinder section with a radial mollifier bump of width eps.

    For d=1 the base shape is the circle of radius R in the plane and the
    bump displaces the second coordinate by c * eps^k * K(w / eps) where w
    is the first coordinate and K the mollifier profile exp(-1/(1-u^2)).
    For d=2 the base is {s1^2 + s3^2 = R^2, |s2| <= 3R} in R^3 with the
    bump on the third coordinate driven by ||(s1, s2)||.
    """

    R: float
    c: float
    eps: float
    k: int = 2
    d: int = 1
    ell: float | None = None
    kind = "bumped-cylinder"

    def __post_init__(self) -> None:
        _check_positive(R=self.R, c=self.c)
        if not (self.eps >= 0.0 and math.isfinite(self.eps)):
            raise InvalidInputError(f"eps must be finite and >= 0, got {self.eps}")
        if int(self.k) < 2:
            raise InvalidInputError("bump order k must be >= 2")
        if int(self.d) not in (1, 2):
            raise InvalidInputError("bumped cylinder supports d in {1, 2}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "d", int(self.d))
        if self.eps > self.c * self.R:
            raise InvalidInputError("bump width must satisfy eps <= c * R")
        if self.ell is None:
            # Probe endpoints default to four bump widths out, far enough that
            # they sit outside the bump support; eps=0 falls back to R/2.
            default = 4.0 * self.eps if self.eps > 0.0 else self.R / 2.0
            object.__setattr__(self, "ell", default)
        object.__setattr__(self, "ell", float(self.ell))
        if not (0.0 < self.ell < self.R) or self.ell < self.eps:
            raise InvalidInputError(
                "endpoint offset must satisfy 0 < ell < R and ell >= eps"
            )

    @property
    def dim(self):
        return self.d + 1

    @property
    def intrinsic_dim(self):
        return self.d

    def _bump_height(self, w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        if self.eps == 0.0:
            return np.zeros_like(w)
        u = w / self.eps
        out = np.zeros_like(u)
        inside = np.abs(u) < 1.0
        out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
        return self.c * self.eps**self.k * out

    def base_graph_points(self, w: np.ndarray) -> np.ndarray:
        """Apex chart of the unbumped circle: (w, sqrt(R^2 - w^2)). d=1 only."""
        if self.d != 1:
            raise InvalidInputError("apex chart is defined for d=1")
        w = np.asarray(w, dtype=float)
        if np.any(np.abs(w) >= self.R):
            raise InvalidInputError("chart coordinate must satisfy |w| < R")
        return np.column_stack([w, np.sqrt(self.R**2 - w**2)])

    def bumped_graph_points(self, w: np.ndarray) -> np.ndarray:
        pts = self.base_graph_points(w)
        pts[:, 1] += self._bump_height(w)
        return pts

    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        """The fixed probe endpoints at chart coordinates -ell and +ell."""
        pts = self.base_graph_points(np.array([-self.ell, self.ell]))
        return pts[0], pts[1]

    def sample_points(self, n, rng):
        if self.d == 1:
            grid = np.linspace(0.0, _TWO_PI, 4096, endpoint=False)
            speed = self._curve_speed(grid)
            cap = 1.001 * float(speed.max())
            u = np.empty(0)
            while u.size < n:
                cand = rng.uniform(0.0, _TWO_PI, size=2 * (n - u.size) + 16)
                acc = rng.uniform(0.0, 1.0, size=cand.size)
                u = np.concatenate([u, cand[acc * cap <= self._curve_speed(cand)]])
            u = u[:n]
            w = self.R * np.sin(u)
            h = self.R * np.cos(u) + self._bump_height(w)
            return np.column_stack([w, h])
        # d=2: angle is uniform and the bump correction to the area element is
        # folded in by rejection against the local metric determinant.
        out = np.empty((0, 3))
        while out.shape[0] < n:
            m = 2 * (n - out.shape[0]) + 16
            u = rng.uniform(0.0, _TWO_PI, size=m)
            z = rng.uniform(-3.0 * self.R, 3.0 * self.R, size=m)
            acc = rng.uniform(0.0, 1.0, size=m)
            pts, weight = self._surface_points(u, z)
            out = np.vstack([out, pts[acc * 1.5 <= weight]])
        return out[:n]

    def _curve_speed(self, u: np.ndarray) -> np.ndarray:
        w = self.R * np.sin(u)
        dbump = np.zeros_like(w)
        if self.eps > 0.0:
            inside = np.abs(w) < self.eps
            v = w[inside] / self.eps
            kv = np.exp(-1.0 / (1.0 - v**2))
            dbump[inside] = (
                self.c * self.eps ** (self.k - 1) * kv * (-2.0 * v) / (1.0 - v**2) ** 2
            )
        dx = self.R * np.cos(u)
        dy = -self.R * np.sin(u) + dbump * self.R * np.cos(u)
        return np.hypot(dx, dy)

    def _surface_points(self, u: np.ndarray, z: np.ndarray):
        s1 = self.R * np.sin(u)
        s3 = self.R * np.cos(u)
        wn = np.hypot(s1, z)
        height = self._bump_height(wn)
        pts = np.column_stack([s1, z, s3 + height])
        inside = (wn < self.eps) & (wn > 0)
        grad = np.zeros((u.size, 2))
        v = wn[inside] / self.eps
        kv = np.exp(-1.0 / (1.0 - v**2))
        mag = self.c * self.eps ** (self.k - 1) * kv * (-2.0 * v) / (1.0 - v**2) ** 2
        grad[inside, 0] = mag * s1[inside] / wn[inside]
        grad[inside, 1] = mag * z[inside] / wn[inside]
        b1 = np.column_stack([self.R * np.cos(u), np.zeros_like(u), -self.R * np.sin(u)])
        b2 = np.column_stack([np.zeros_like(u), np.ones_like(u), np.zeros_like(u)])
        d1 = grad[:, 0] * self.R * np.cos(u)
        d2 = grad[:, 1]
        g11 = np.einsum("ij,ij->i", b1, b1) + d1 * d1
        g12 = np.einsum("ij,ij->i", b1, b2) + d1 * d2
        g22 = np.einsum("ij,ij->i", b2, b2) + d2 * d2
        weight = np.sqrt(np.maximum(g11 * g22 - g12**2, 0.0)) / self.R
        return pts, weight


def bumped_cylinder_map(shape: BumpedCylinder, x) -> np.ndarray:
    """Ambient displacement x -> x + c eps^k K(w/eps) e_(d+1).

    w is the first-d coordinate block of x and K the mollifier profile; the
    map is the identity wherever ||w|| >= eps. Accepts one point or an
    (n, d+1) array and returns the same layout.
    """
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts).astype(float).copy()
    if pts.shape[1] != shape.d + 1:
        raise InvalidInputError(
            f"expected points in R^{shape.d + 1}, got dimension {pts.shape[1]}"
        )
    w = np.linalg.norm(pts[:, : shape.d], axis=1)
    pts[:, shape.d] += shape._bump_height(w)
    return pts[0] if single else pts


@dataclass(frozen=True)
class GapResult:
    """Geodesic lengths between the fixed probe endpoints, with and without bump."""

    d_base: float
    d_bumped: float
    gap: float
    n_graph: int
    graph_radius: float


def bump_geodesic_gap(shape: BumpedCylinder, n_graph: int = 256) -> GapResult:
    """Length excess of the bumped apex arc between the probe endpoints.

    Both curves are sampled on the same chart grid and measured with a
    neighborhood-graph geodesic; the shared discretization cancels in the
    difference. Raises ResolutionError if the graph radius exceeds eps/4.
    """
    from .graphs import build_graph, graph_geodesic

    if shape.d != 1:
        raise InvalidInputError("the geodesic gap probe is implemented for curves (d=1)")
    if n_graph < 16:
        raise InvalidInputError("n_graph must be at least 16")
    w = np.linspace(-shape.ell, shape.ell, n_graph)
    base = shape.base_graph_points(w)
    bumped = shape.bumped_graph_points(w)
    seg = np.linalg.norm(np.diff(base, axis=0), axis=1)
    radius = 3.0 * float(seg.max())
    # eps=0 is the identity map, so there is no bump scale to resolve.
    if shape.eps > 0.0 and radius > shape.eps / 4.0:
        raise ResolutionError(
            f"graph radius {radius:.4g} exceeds eps/4 = {shape.eps / 4.0:.4g}; increase n_graph"
        )
    d0 = graph_geodesic(build_graph(PointCloud(base), radius), 0, n_graph - 1)
    d1 = graph_geodesic(build_graph(PointCloud(bumped), radius), 0, n_graph - 1)
    return GapResult(d0, d1, d1 - d0, n_graph, radius)


# ---------------------------------------------------------------------------
# Registry and top-level sampling.

_SHAPES = {
    "circle": (Circle, ("R",)),
    "sphere": (Sphere, ("d", "R")),
    "ellipse": (Ellipse, ("a", "b")),
    "torus": (Torus, ("Rc", "r")),
    "flat-torus": (FlatTorus, ("r1", "r2")),
    "wedge": (Wedge, ("alpha", "arm_length")),
    "parallel-circles": (ParallelCircles, ("R", "w")),
    "turn-widget": (TurnWidget, ("alpha", "R")),
    "bumped-cylinder": (BumpedCylinder, ("R", "c", "eps", "k", "d", "ell")),
}


def list_shapes() -> dict:
    """Mapping of shape kind to its parameter names."""
    return {kind: spec[1] for kind, spec in _SHAPES.items()}


def make_shape(kind: str, **params) -> Shape:
    key = str(kind).lower().replace("_", "-")
    if key not in _SHAPES:
        raise InvalidInputError(
            f"unknown shape {kind!r}; available: {', '.join(sorted(_SHAPES))}"
        )
    cls, names = _SHAPES[key]
    unknown = set(params) - set(names)
    if unknown:
        raise InvalidInputError(f"unknown parameters for {key}: {sorted(unknown)}")
    int_fields = {"d", "k"}
    kwargs = {k: (int(v) if k in int_fields else float(v)) for k, v in params.items()}
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise InvalidInputError(f"missing parameters for {key}: {exc}") from exc


def sample(shape: Shape, n: int, seed: int) -> PointCloud:
    """Draw n points from the shape using the stream rng_stream(seed)."""
    if n < 1:
        raise InvalidInputError("sample size must be >= 1")
    return PointCloud(shape.sample_points(int(n), rng_stream(seed)))


def oracle_metric(shape: Shape, cloud: PointCloud) -> FiniteMetricSpace:
    """Intrinsic metric table of the shape restricted to the sampled points."""
    table = shape.metric_table(cloud.points)
    return FiniteMetricSpace(cloud, table, intrinsic=True)


def wedge_mu_reach(alpha: float, mu: float) -> float:
    """mu-reach of the infinite wedge: 0 at and above sin(alpha/2), inf below."""
    return Wedge(alpha, 1.0).mu_reach(mu)
