"""Spherical distortion radius of finite intrinsic metric spaces.

Each pair of points rules out comparison spheres that are too large: on a
sphere of radius r, two points a Euclidean chord apart can be at geodesic
distance at most 2r*arcsin(chord/2r). The radius of a space is the largest
r no separated pair rules out, floored at delta/2 where the comparison is
vacuous. The reduction to a min over pairs is exact because each pair's
feasible radii form an interval down from its own cutoff.

The stability half of the module turns Hausdorff and distortion budgets
into a certified deviation bound for the radius, and the two assumption
checkers probe finite samples for the structural hypotheses (local
spreadability, sub-Euclidean distances) behind the Lipschitz constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .geometry import FiniteMetricSpace, PointCloud, pairwise_distances
from .rng import rng_stream

__all__ = [
    "ALPHA_STAR",
    "SdrResult",
    "StabilityBudget",
    "ManifoldConstants",
    "AssumptionVerdict",
    "phi",
    "phi_inverse",
    "pair_radius",
    "sdr_delta",
    "sdr_value",
    "wedge_sdr_oracle",
    "xi_bound",
    "lip_constant",
    "stability_budget",
    "manifold_constants",
    "check_spreadable",
    "check_subeuclidean",
]

# Critical wedge opening 2*arcsin(2/pi). At and above it the corner stops
# pinching the comparison sphere and the radius sits at the floor delta/2.
ALPHA_STAR = 2.0 * math.asin(2.0 / math.pi)

# Roots beyond this are reported as +inf: the pair no longer constrains
# any radius that could matter.
_PHI_CLAMP = 1e9

_HALF_PI = 0.5 * math.pi


def phi(u):
    """u * arcsin(1/u), a decreasing bijection from [1, inf) onto (1, pi/2]."""
    arr = np.asarray(u, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 1.0):
        raise InvalidInputError("phi requires u >= 1")
    with np.errstate(invalid="ignore"):
        out = arr * np.arcsin(1.0 / arr)
    out = np.where(np.isinf(arr), 1.0, out)
    if np.ndim(u) == 0:
        return float(out)
    return out


def _phi_inverse_array(c: np.ndarray) -> np.ndarray:
    # Bisection on [1, max(2, 2/(c-1))]; phi(u) > 1 + 1/(6u^2) puts the
    # root below 2/(c-1) for every c in the domain. 110 halvings bring the
    # widest representable bracket (~2/ulp(1)) under 1e-12 absolute.
    lo = np.ones_like(c)
    hi = np.maximum(2.0, 2.0 / (c - 1.0))
    _bisect_phi(lo, hi, c, 110)
    root = 0.5 * (lo + hi)
    return np.where(root > _PHI_CLAMP, np.inf, root)


def _bisect_phi(lo: np.ndarray, hi: np.ndarray, c: np.ndarray, iters: int) -> None:
    # Halve [lo, hi] in place around the root of phi(u) = c. Buffers are
    # reused across iterations; the per-step arithmetic matches the naive
    # mid * arcsin(1/mid) expression operation for operation.
    mid = np.empty_like(lo)
    val = np.empty_like(lo)
    right_of_mid = np.empty(lo.shape, dtype=bool)
    for _ in range(iters):
        np.add(lo, hi, out=mid)
        mid *= 0.5
        np.divide(1.0, mid, out=val)
        np.arcsin(val, out=val)
        val *= mid
        np.greater(val, c, out=right_of_mid)
        np.copyto(lo, mid, where=right_of_mid)
        np.invert(right_of_mid, out=right_of_mid)
        np.copyto(hi, mid, where=right_of_mid)


def phi_inverse(c: float) -> float:
    """The unique u >= 1 with phi(u) = c, for c in (1, pi/2].

    Bisection to absolute tolerance 1e-12 on u. Values of c near 1 give
    huge roots; beyond 1e9 the result is reported as +inf.
    """
    c = float(c)
    if math.isnan(c) or c <= 1.0 or c > _HALF_PI:
        raise InvalidInputError(f"phi_inverse requires 1 < c <= pi/2, got {c}")
    return float(_phi_inverse_array(np.asarray([c]))[0])


def pair_radius(chord: float, geo: float) -> float:
    """Largest comparison-sphere radius a single pair tolerates.

    A pair at Euclidean gap `chord` and intrinsic distance `geo` is
    feasible on spheres of radius r exactly when geo <= 2r*arcsin(chord/2r)
    (with +inf beyond chord > 2r); the feasible radii form an interval
    whose right endpoint is returned. Straight pairs (geo = chord)
    constrain nothing and give +inf; geo >= (pi/2)*chord saturates at
    chord/2; in between the value is (chord/2)*phi_inverse(geo/chord).
    """
    if not (chord > 0 and math.isfinite(chord)):
        raise InvalidInputError(f"chord must be positive and finite, got {chord}")
    if math.isnan(geo) or geo < chord:
        raise InvalidInputError(
            f"intrinsic distance {geo} below chord {chord}: table is not intrinsic"
        )
    if geo == chord:
        return math.inf
    if geo >= _HALF_PI * chord:
        return 0.5 * chord
    ratio = geo / chord
    if ratio <= 1.0:
        return math.inf
    return 0.5 * chord * float(_phi_inverse_array(np.asarray([min(ratio, _HALF_PI)]))[0])


def _pair_radius_array(chords: np.ndarray, geos: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        ratio = geos / chords
    out = np.full(chords.shape, np.inf)
    saturated = ratio >= _HALF_PI
    out[saturated] = 0.5 * chords[saturated]
    middle = (ratio > 1.0) & ~saturated
    if np.any(middle):
        out[middle] = 0.5 * chords[middle] * _phi_inverse_array(ratio[middle])
    return out


def _min_pair_radius(chords: np.ndarray, geos: np.ndarray) -> float:
    # Minimum of _pair_radius_array without resolving every root. A
    # truncated run of the same bisection gives each pair an enclosing
    # bracket; pairs whose lower end clears the best upper end cannot
    # attain the min, and the survivors get the full iteration count from
    # the original bracket, so the result is bit-identical to the dense
    # path's minimum.
    with np.errstate(invalid="ignore"):
        ratio = geos / chords
    saturated = ratio >= _HALF_PI
    cap = float(np.min(0.5 * chords[saturated])) if np.any(saturated) else math.inf
    middle = (ratio > 1.0) & ~saturated
    if not np.any(middle):
        return cap
    half = 0.5 * chords[middle]
    c = ratio[middle]
    lo = np.ones_like(c)
    hi = np.maximum(2.0, 2.0 / (c - 1.0))
    _bisect_phi(lo, hi, c, 40)
    r_lo = half * lo
    # Roots that may exceed the clamp resolve to +inf, so their actual
    # value has no finite upper bound yet.
    r_hi = np.where(hi <= _PHI_CLAMP, half * hi, np.inf)
    best_hi = min(cap, float(np.min(r_hi)))
    survivors = r_lo <= best_hi
    if not np.any(survivors):
        return cap
    exact = half[survivors] * _phi_inverse_array(c[survivors])
    return min(cap, float(np.min(exact)))


@dataclass(frozen=True)
class SdrResult:
    """Radius of a space at one separation scale, with its evidence.

    value is max(floor, min over recorded pairs of their radius); +inf
    exactly when no pair is separated or every recorded radius is +inf.
    critical_pair indexes the minimizing pair into the cloud (None when
    value is +inf), and pair_indices/pair_radii list every pair at
    Euclidean separation >= delta with its radius.
    """

    value: float
    floor: float
    critical_pair: tuple[int, int] | None
    pair_indices: np.ndarray
    pair_radii: np.ndarray

    def __post_init__(self) -> None:
        if self.value < self.floor:
            raise InvalidInputError("radius below the floor delta/2")


def sdr_delta(space: FiniteMetricSpace, delta: float) -> SdrResult:
    """Spherical distortion radius of the space at separation delta.

    Pairs at Euclidean distance at least delta each cap the radius at
    pair_radius(chord, geo); the value is the smallest cap, floored at
    delta/2. No separated pair (delta beyond the diameter) gives +inf.
    Requires a table declared intrinsic.
    """
    if not (delta > 0 and math.isfinite(delta)):
        raise InvalidInputError(f"separation delta must be positive and finite, got {delta}")
    if not space.intrinsic:
        raise InvalidInputError("sdr needs an intrinsic metric table (distances >= chords)")
    floor = 0.5 * delta
    n = len(space)
    iu = np.triu_indices(n, k=1)
    chords = space.cloud.pairwise()[iu]
    keep = chords >= delta
    idx_i = iu[0][keep]
    idx_j = iu[1][keep]
    pair_indices = np.column_stack([idx_i, idx_j])
    radii = _pair_radius_array(chords[keep], space.table[iu][keep])
    if radii.size == 0 or not np.any(np.isfinite(radii)):
        return SdrResult(math.inf, floor, None, pair_indices, radii)
    k = int(np.argmin(radii))
    value = max(floor, float(radii[k]))
    return SdrResult(value, floor, (int(idx_i[k]), int(idx_j[k])), pair_indices, radii)


def sdr_value(space: FiniteMetricSpace, delta: float) -> float:
    """Radius at separation delta, value only.

    Same number as sdr_delta(space, delta).value, skipping the per-pair
    evidence arrays; pairs that provably cannot attain the minimum are
    discarded early, which matters on dense tables.
    """
    if not (delta > 0 and math.isfinite(delta)):
        raise InvalidInputError(f"separation delta must be positive and finite, got {delta}")
    if not space.intrinsic:
        raise InvalidInputError("sdr needs an intrinsic metric table (distances >= chords)")
    floor = 0.5 * delta
    n = len(space)
    iu = np.triu_indices(n, k=1)
    chords = space.cloud.pairwise()[iu]
    keep = chords >= delta
    if not np.any(keep):
        return math.inf
    lowest = _min_pair_radius(chords[keep], space.table[iu][keep])
    if not math.isfinite(lowest):
        return math.inf
    return max(floor, lowest)


def wedge_sdr_oracle(alpha: float, delta: float) -> float:
    """Closed-form radius of the planar two-arm wedge with opening alpha.

    delta/2 below the critical opening ALPHA_STAR, and
    (delta/2)*phi_inverse(1/sin(alpha/2)) at or above it; openings so flat
    that 1/sin(alpha/2) rounds to 1 give +inf (the wedge degenerates to a
    line).
    """
    if not (0.0 < alpha < math.pi):
        raise InvalidInputError(f"wedge opening must lie in (0, pi), got {alpha}")
    if not (delta > 0 and math.isfinite(delta)):
        raise InvalidInputError(f"separation delta must be positive and finite, got {delta}")
    if alpha < ALPHA_STAR:
        return 0.5 * delta
    c = 1.0 / math.sin(0.5 * alpha)
    if c <= 1.0:
        return math.inf
    u = float(_phi_inverse_array(np.asarray([min(c, _HALF_PI)]))[0])
    return 0.5 * delta * u if math.isfinite(u) else math.inf


def xi_bound(r: float, delta0: float) -> float:
    """Radius-perturbation constant 384*(1+pi)*r^4/delta0^4."""
    if not (r >= 0):
        raise InvalidInputError(f"radius must be nonnegative, got {r}")
    if not (delta0 > 0 and math.isfinite(delta0)):
        raise InvalidInputError(f"delta0 must be positive and finite, got {delta0}")
    if r == 0.0:
        return 0.0
    return 384.0 * (1.0 + math.pi) * (r / delta0) ** 4


def lip_constant(delta0: float, delta1: float, r1: float, C0: float, C1: float) -> float:
    """Lipschitz constant of the radius in delta over [delta0, delta1].

    Equals (192*r1^3/(C0*delta0^3)) * (C1 + pi*r1/delta0) with r1 the
    radius at the top scale delta1 and C0, C1 the spreadability and
    sub-Euclidean constants.
    """
    if not (0 < delta0 < delta1):
        raise InvalidInputError(f"scales must satisfy 0 < delta0 < delta1, got {delta0}, {delta1}")
    if not (r1 > 0):
        raise InvalidInputError(f"r1 must be positive, got {r1}")
    if not (C0 > 0 and C1 > 0):
        raise InvalidInputError(f"constants must be positive, got C0={C0}, C1={C1}")
    return (192.0 * r1**3 / (C0 * delta0**3)) * (C1 + math.pi * r1 / delta0)


@dataclass(frozen=True)
class StabilityBudget:
    """Certified deviation budget for the radius under perturbation.

    upsilon combines the distortion budget nu (scaled by delta1, which
    dominates every admissible working scale) with the Hausdorff budget
    epsilon. zeta0 = xi0 + 2*L0 multiplies upsilon in the deviation bound;
    applicable reports the smallness condition under which the bound is
    proved.
    """

    delta0: float
    delta1: float
    epsilon: float
    nu: float
    upsilon: float
    xi0: float
    L0: float
    zeta0: float
    applicable: bool

    def __post_init__(self) -> None:
        for name in ("delta0", "delta1", "epsilon", "nu", "upsilon", "xi0", "L0", "zeta0"):
            if getattr(self, name) < 0:
                raise InvalidInputError(f"{name} must be nonnegative")


def stability_budget(
    delta0: float,
    delta1: float,
    epsilon: float,
    nu: float,
    sdr_at_delta1: float,
    C0: float,
    C1: float,
) -> StabilityBudget:
    """Assemble the deviation budget from perturbation sizes and constants.

    epsilon bounds the Hausdorff distance between the two supports and nu
    the relative metric distortion at scale delta0. The budget certifies
    |radius(K) - radius(K')| <= zeta0 * upsilon at working scales inside
    (delta0 + 2*epsilon, delta1 - 2*epsilon) whenever applicable is True.
    """
    if not (0 < delta0 < delta1) or not math.isfinite(delta1):
        raise InvalidInputError(f"scales must satisfy 0 < delta0 < delta1, got {delta0}, {delta1}")
    if epsilon < 0 or nu < 0:
        raise InvalidInputError("perturbation budgets must be nonnegative")
    if not (sdr_at_delta1 > 0):
        raise InvalidInputError(f"sdr_at_delta1 must be positive, got {sdr_at_delta1}")
    upsilon = max(delta1 * nu, epsilon)
    xi0 = xi_bound(2.0 * sdr_at_delta1, delta0)
    L0 = lip_constant(delta0, delta1, sdr_at_delta1, C0, C1)
    zeta0 = xi0 + 2.0 * L0
    applicable = upsilon == 0.0 or xi0 * upsilon <= 2.0 * sdr_at_delta1
    return StabilityBudget(
        delta0, delta1, float(epsilon), float(nu), upsilon, xi0, L0, zeta0, bool(applicable)
    )


@dataclass(frozen=True)
class ManifoldConstants:
    """Assumption parameters certified for manifolds of known reach."""

    eps0: float
    Delta0: float
    C0: float
    Delta1: float
    C1: float


def manifold_constants(reach: float) -> ManifoldConstants:
    """Spreadability and sub-Euclidean parameters valid at a given reach.

    eps0 = reach/4, Delta0 = reach, C0 = 3/16, Delta1 = reach/2, C1 = 2.
    """
    if not (reach > 0 and math.isfinite(reach)):
        raise InvalidInputError(f"reach must be positive and finite, got {reach}")
    return ManifoldConstants(reach / 4.0, reach, 3.0 / 16.0, reach / 2.0, 2.0)


@dataclass(frozen=True)
class AssumptionVerdict:
    """Outcome of an empirical assumption check on a finite sample.

    checked counts the (pair, scale) combinations probed; counterexamples
    lists the failing ones. worst_ratio is populated by the sub-Euclidean
    check with the largest distance-to-chord ratio seen.
    """

    passed: bool
    checked: int
    counterexamples: tuple
    worst_ratio: float | None = None


def _assumption_params(params, names: tuple[str, ...]):
    out = []
    for name in names:
        if isinstance(params, dict):
            if name not in params:
                raise InvalidInputError(f"missing assumption parameter {name!r}")
            out.append(float(params[name]))
        else:
            if not hasattr(params, name):
                raise InvalidInputError(f"missing assumption parameter {name!r}")
            out.append(float(getattr(params, name)))
    return out


def check_spreadable(
    cloud: PointCloud, params, trials: int = 200, seed: int = 0
) -> AssumptionVerdict:
    """Probe a sample for local spreadability.

    For randomly chosen pairs (x, y) at Euclidean distance at most Delta0
    and scales eps in {eps0, eps0/2, eps0/4}, searches the sample for a
    witness within eps of one endpoint and at least ||x-y|| + C0*eps from
    the other. Fails with the (i, j, eps) list of pairs lacking a witness.
    Verdicts are finite-sample evidence, not proofs: scales below the
    sample resolution can fail even on spreadable shapes.
    """
    Delta0, eps0, C0 = _assumption_params(params, ("Delta0", "eps0", "C0"))
    if not (Delta0 > 0 and eps0 > 0 and C0 > 0):
        raise InvalidInputError("spreadability parameters must be positive")
    if trials < 1:
        raise InvalidInputError(f"trials must be >= 1, got {trials}")
    pts = cloud.points
    dmat = pairwise_distances(pts)
    iu = np.triu_indices(len(cloud), k=1)
    ok = (dmat[iu] > 0) & (dmat[iu] <= Delta0)
    cand_i, cand_j = iu[0][ok], iu[1][ok]
    if cand_i.size == 0:
        return AssumptionVerdict(True, 0, ())
    rng = rng_stream(seed)
    if cand_i.size <= int(trials):
        chosen = np.arange(cand_i.size)
    else:
        chosen = rng.choice(cand_i.size, size=int(trials), replace=False)
    scales = (eps0, eps0 / 2.0, eps0 / 4.0)
    bad: list[tuple[int, int, float]] = []
    checked = 0
    for sel in chosen:
        i, j = int(cand_i[sel]), int(cand_j[sel])
        gap = dmat[i, j]
        da, db = dmat[i], dmat[j]
        for eps in scales:
            checked += 1
            need = gap + C0 * eps
            found = np.any((db <= eps) & (da >= need)) or np.any((da <= eps) & (db >= need))
            if not found:
                bad.append((i, j, eps))
    return AssumptionVerdict(len(bad) == 0, checked, tuple(bad))


def check_subeuclidean(space: FiniteMetricSpace, Delta1: float, C1: float) -> AssumptionVerdict:
    """Verify distances stay within C1 times the chord at short range.

    Checks d(x, y) <= C1*||x-y|| for every pair at Euclidean distance in
    (0, Delta1], reporting the worst distance-to-chord ratio and the
    violating pairs.
    """
    if not (Delta1 > 0 and C1 > 0):
        raise InvalidInputError("Delta1 and C1 must be positive")
    if not space.intrinsic:
        raise InvalidInputError("sub-Euclidean check needs an intrinsic metric table")
    n = len(space)
    iu = np.triu_indices(n, k=1)
    chords = space.cloud.pairwise()[iu]
    keep = (chords > 0) & (chords <= Delta1)
    if not np.any(keep):
        return AssumptionVerdict(True, 0, (), worst_ratio=0.0)
    ratios = space.table[iu][keep] / chords[keep]
    ii, jj = iu[0][keep], iu[1][keep]
    bad = np.flatnonzero(ratios > C1)
    counterexamples = tuple((int(ii[b]), int(jj[b])) for b in bad)
    return AssumptionVerdict(
        bad.size == 0, int(ratios.size), counterexamples, worst_ratio=float(np.max(ratios))
    )
