"""Convex scatterers on the unit cell, configuration validation, ray tracing.

Scatterer boundaries are either circles or low-order Fourier radial
perturbations of circles, rho(theta) = R * (1 + sum_k a_k cos(k theta) +
b_k sin(k theta)), k >= 2. This family supports closed-form ray intersection
for disks, cheap curvature/C3 checks, and stays closed under the perturbation
models of the ensemble module.

Conventions: boundary arclength r runs counterclockwise from theta = 0; the
"inward" normal points into the billiard domain, i.e. away from the scatterer
interior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

CLEARANCE_MIN = 1e-4
COLLISION_EPS = 1e-12
N_CURV = 4096  # dense samples for curvature / C3 validation
H_SCAN = 0.02  # sign-change scan step for Fourier-boundary ray roots


class HorizonViolationError(RuntimeError):
    """A ray found no scatterer within the flight cap: invalid configuration."""


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


@dataclass(frozen=True)
class ScattererShape:
    """Radial shape rho(theta) = radius * (1 + Fourier modes k = 2..K).

    fourier_coeffs holds (a_k, b_k) pairs starting at k = 2; empty for a disk.
    """

    radius: float
    fourier_coeffs: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be positive and finite, got {self.radius}")

    @property
    def is_disk(self) -> bool:
        return len(self.fourier_coeffs) == 0

    @property
    def kind(self) -> str:
        return "Disk" if self.is_disk else "FourierDisk"

    def with_radius(self, radius: float) -> "ScattererShape":
        return ScattererShape(radius, self.fourier_coeffs)

    # mode-sum bounds sum_k k^p sqrt(a_k^2 + b_k^2), used for interval checks
    def mode_sum(self, power: int) -> float:
        return sum(
            (k**power) * math.hypot(a, b)
            for k, (a, b) in enumerate(self.fourier_coeffs, start=2)
        )

    def rho(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.ones_like(theta)
        for k, (a, b) in enumerate(self.fourier_coeffs, start=2):
            out = out + a * np.cos(k * theta) + b * np.sin(k * theta)
        return self.radius * out

    def drho(self, theta, order: int = 1):
        """Derivative of rho with respect to theta, order in {1, 2, 3}."""
        theta = np.asarray(theta, dtype=float)
        out = np.zeros_like(theta)
        for k, (a, b) in enumerate(self.fourier_coeffs, start=2):
            c, s = np.cos(k * theta), np.sin(k * theta)
            if order == 1:
                out = out + k * (-a * s + b * c)
            elif order == 2:
                out = out + k * k * (-a * c - b * s)
            elif order == 3:
                out = out + k**3 * (a * s - b * c)
            else:
                raise ValueError("order must be 1, 2 or 3")
        return self.radius * out

    def speed(self, theta):
        """|dp/dtheta| = sqrt(rho^2 + rho'^2)."""
        return np.sqrt(self.rho(theta) ** 2 + self.drho(theta) ** 2)

    def curvature(self, theta):
        r = self.rho(theta)
        r1 = self.drho(theta, 1)
        r2 = self.drho(theta, 2)
        return (r * r + 2.0 * r1 * r1 - r * r2) / (r * r + r1 * r1) ** 1.5

    def perimeter(self) -> float:
        if self.is_disk:
            return 2.0 * math.pi * self.radius
        # periodic trapezoid rule: spectrally accurate for analytic speed
        theta = np.linspace(0.0, 2.0 * math.pi, 4096, endpoint=False)
        return float(np.mean(self.speed(theta)) * 2.0 * math.pi)

    def area(self) -> float:
        if self.is_disk:
            return math.pi * self.radius**2
        theta = np.linspace(0.0, 2.0 * math.pi, 4096, endpoint=False)
        return float(np.mean(self.rho(theta) ** 2) * math.pi)


class _ArclengthMap:
    """Cumulative arclength table with Gauss-polished inversion."""

    _GX, _GW = np.polynomial.legendre.leggauss(8)

    def __init__(self, shape: ScattererShape, n_grid: int = 8192):
        self.shape = shape
        self.theta = np.linspace(0.0, 2.0 * math.pi, n_grid + 1)
        # per-interval Gauss-Legendre keeps the cumulative table ~1e-14 accurate
        mid = 0.5 * (self.theta[:-1] + self.theta[1:])
        half = 0.5 * (self.theta[1] - self.theta[0])
        nodes = mid[:, None] + half * self._GX[None, :]
        seg = half * (shape.speed(nodes) @ self._GW)
        self.s = np.concatenate(([0.0], np.cumsum(seg)))
        self.total = float(self.s[-1])

    def s_of_theta(self, theta: float) -> float:
        theta = theta % (2.0 * math.pi)
        i = min(int(np.searchsorted(self.theta, theta) - 1), len(self.theta) - 2)
        i = max(i, 0)
        a = self.theta[i]
        mid = 0.5 * (a + theta)
        half = 0.5 * (theta - a)
        seg = half * float(self.shape.speed(mid + half * self._GX) @ self._GW)
        return float(self.s[i] + seg)

    def theta_of_s(self, s: float) -> float:
        s = s % self.total
        theta = float(np.interp(s, self.s, self.theta))
        for _ in range(4):
            theta -= (self.s_of_theta(theta) - s) / float(self.shape.speed(theta))
        return theta % (2.0 * math.pi)


@dataclass(frozen=True)
class Scatterer:
    """One obstacle: base center in [0,1)^2 plus its shape; perimeter cached."""

    base_center: Vec2
    shape: ScattererShape
    perimeter: float = field(default=0.0)

    def __post_init__(self):
        true_perimeter = self.shape.perimeter()
        if self.perimeter == 0.0:
            object.__setattr__(self, "perimeter", true_perimeter)
        elif abs(self.perimeter - true_perimeter) > 1e-10 * true_perimeter:
            raise ValueError(
                f"cached perimeter {self.perimeter} differs from integrated "
                f"arclength {true_perimeter} by more than 1e-10 relative"
            )
        if self.shape.is_disk:
            object.__setattr__(self, "_arcmap", None)
        else:
            object.__setattr__(self, "_arcmap", _ArclengthMap(self.shape))

    def theta_of_r(self, r: float) -> float:
        if self.shape.is_disk:
            return r / self.shape.radius
        return self._arcmap.theta_of_s(r)

    def r_of_theta(self, theta: float) -> float:
        if self.shape.is_disk:
            return (theta % (2.0 * math.pi)) * self.shape.radius
        return self._arcmap.s_of_theta(theta)

    def max_rho(self) -> float:
        if self.shape.is_disk:
            return self.shape.radius
        theta = np.linspace(0.0, 2.0 * math.pi, N_CURV, endpoint=False)
        return float(np.max(self.shape.rho(theta)))


@dataclass(frozen=True)
class CellConfiguration:
    """Base Z^2-periodic layout plus declared validation constants.

    tau_star / kappa_star / e_star are the declared windows (tau* <= tau <=
    1/tau*, etc.); theta0 is the C2 deformation budget granted to perturbation
    models.
    """

    scatterers: tuple[Scatterer, ...]
    tau_star: float = 1e-4
    kappa_star: float = 0.2
    e_star: float = 10.0
    theta0: float = 0.05

    def __post_init__(self):
        if len(self.scatterers) == 0:
            raise ValueError("configuration needs at least one scatterer")
        object.__setattr__(self, "scatterers", tuple(self.scatterers))

    @property
    def n_scatterers(self) -> int:
        return len(self.scatterers)

    def perimeters(self) -> list[float]:
        return [s.perimeter for s in self.scatterers]

    def perimeter_fractions(self) -> list[float]:
        total = sum(self.perimeters())
        return [p / total for p in self.perimeters()]

    def free_area(self) -> float:
        return 1.0 - sum(s.shape.area() for s in self.scatterers)

    def mean_free_path(self) -> float:
        """pi |Q| / |dQ| for the cell; exact under the invariant measure."""
        return math.pi * self.free_area() / sum(self.perimeters())

    def tau_cap(self) -> float:
        return 1.0 / self.tau_star


@dataclass(frozen=True)
class Ray:
    """Origin in plane coordinates (cell offsets included), unit direction."""

    origin: Vec2
    direction: Vec2

    def __post_init__(self):
        n = self.direction.norm()
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"direction must be unit length, |v| = {n}")


@dataclass(frozen=True)
class RayHit:
    scatterer_index: int
    cell: tuple[int, int]
    r_hit: float
    tau: float


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str]
    tau_min: float
    tau_max: float
    kappa_min: float
    kappa_max: float
    e_max: float
    min_clearance: float
    support_conditioned: bool
    horizon_finite: bool

    def __str__(self) -> str:
        head = "PASS" if self.ok else "FAIL"
        lines = [
            f"{head}: tau in [{self.tau_min:.6g}, {self.tau_max:.6g}], "
            f"kappa in [{self.kappa_min:.6g}, {self.kappa_max:.6g}], "
            f"E_max {self.e_max:.6g}, clearance {self.min_clearance:.6g}, "
            f"conditioned={self.support_conditioned}, horizon_finite={self.horizon_finite}"
        ]
        lines += [f"  violated: {v}" for v in self.violations]
        return "\n".join(lines)


@dataclass(frozen=True)
class HorizonReport:
    finite: bool
    tau_max_estimate: float
    witness: tuple[int, int] | None = None


def boundary_point(s: Scatterer, r: float) -> tuple[Vec2, Vec2, Vec2, float]:
    """Boundary sample at arclength r: (position, unit tangent, inward normal,
    curvature). The inward normal points into the billiard domain."""
    if not (0.0 <= r < s.perimeter):
        raise ValueError(f"arclength {r} outside [0, {s.perimeter})")
    theta = s.theta_of_r(r)
    rho = float(s.shape.rho(theta))
    drho = float(s.shape.drho(theta))
    ct, st = math.cos(theta), math.sin(theta)
    pos = Vec2(s.base_center.x + rho * ct, s.base_center.y + rho * st)
    tx = drho * ct - rho * st
    ty = drho * st + rho * ct
    sp = math.hypot(tx, ty)
    tangent = Vec2(tx / sp, ty / sp)
    normal = Vec2(tangent.y, -tangent.x)  # outward from the scatterer = into Q
    return pos, tangent, normal, float(s.shape.curvature(theta))


def shape_validation_errors(shape: ScattererShape, e_star: float) -> list[str]:
    """Dense sampling plus a Lipschitz interval bound from the Fourier modes."""
    errors: list[str] = []
    if shape.is_disk:
        if 1.0 / shape.radius > e_star + 1e-15 or shape.radius > e_star:
            errors.append(f"C3 proxy {max(shape.radius, 0.0):g} exceeds E* = {e_star}")
        return errors

    a1 = shape.mode_sum(0)
    if a1 >= 1.0:
        return [f"Fourier modes too large: sum of amplitudes {a1:.3g} >= 1"]
    R = shape.radius
    s_min = R * (1.0 - a1)
    s_sup = [R * (1.0 + a1), R * shape.mode_sum(1), R * shape.mode_sum(2), R * shape.mode_sum(3)]

    theta = np.linspace(0.0, 2.0 * math.pi, N_CURV, endpoint=False)
    half = math.pi / N_CURV
    rho = shape.rho(theta)
    lip_rho = s_sup[1]
    if float(np.min(rho)) - lip_rho * half <= 0.0:
        errors.append("radial function not strictly positive")

    kappa = shape.curvature(theta)
    # |kappa'| bound from sup-norms of rho and its derivatives
    S1, S2, S3, S4 = s_sup
    n_sup = S1 * S1 + 2.0 * S2 * S2 + S1 * S3
    dn = 2.0 * S1 * S2 + 5.0 * S2 * S3 + S1 * S4
    dd = 2.0 * S1 * S2 + 2.0 * S2 * S3
    lip_kappa = dn / s_min**3 + 1.5 * n_sup * dd / s_min**5
    if float(np.min(kappa)) - lip_kappa * half <= 0.0:
        errors.append("curvature not strictly positive (sampled + interval bound)")

    e_measured = max(
        float(np.max(np.abs(rho))),
        float(np.max(np.abs(shape.drho(theta, 1)))),
        float(np.max(np.abs(shape.drho(theta, 2)))),
        float(np.max(np.abs(shape.drho(theta, 3)))),
    )
    if e_measured > e_star:
        errors.append(f"C3 proxy {e_measured:g} exceeds E* = {e_star}")
    return errors


def measured_curvature_range(cfg: CellConfiguration) -> tuple[float, float]:
    lo, hi = math.inf, -math.inf
    theta = np.linspace(0.0, 2.0 * math.pi, N_CURV, endpoint=False)
    for s in cfg.scatterers:
        k = s.shape.curvature(theta)
        lo = min(lo, float(np.min(k)))
        hi = max(hi, float(np.max(k)))
    return lo, hi


def measured_e_max(cfg: CellConfiguration) -> float:
    theta = np.linspace(0.0, 2.0 * math.pi, N_CURV, endpoint=False)
    out = 0.0
    for s in cfg.scatterers:
        sh = s.shape
        if sh.is_disk:
            out = max(out, sh.radius)
            continue
        out = max(
            out,
            float(np.max(np.abs(sh.rho(theta)))),
            float(np.max(np.abs(sh.drho(theta, 1)))),
            float(np.max(np.abs(sh.drho(theta, 2)))),
            float(np.max(np.abs(sh.drho(theta, 3)))),
        )
    return out


def _pair_clearance(s1: Scatterer, c1: Vec2, s2: Scatterer, c2: Vec2) -> float:
    """Distance between the two boundaries (negative if closures overlap)."""
    if s1.shape.is_disk and s2.shape.is_disk:
        return (c2 - c1).norm() - s1.shape.radius - s2.shape.radius
    # sampled boundaries; adequate for validation of smooth convex shapes
    th = np.linspace(0.0, 2.0 * math.pi, 512, endpoint=False)
    r1 = s1.shape.rho(th)
    p1 = np.stack([c1.x + r1 * np.cos(th), c1.y + r1 * np.sin(th)], axis=1)
    r2 = s2.shape.rho(th)
    p2 = np.stack([c2.x + r2 * np.cos(th), c2.y + r2 * np.sin(th)], axis=1)

    def _penetration(points, center, shape):
        rel = points - np.array([center.x, center.y])
        dist = np.hypot(rel[:, 0], rel[:, 1])
        rho = shape.rho(np.arctan2(rel[:, 1], rel[:, 0]))
        return float(np.min(dist - rho))

    pen = min(_penetration(p2, c1, s1.shape), _penetration(p1, c2, s2.shape))
    if pen < 0.0:
        return pen
    d2 = np.sum((p1[:, None, :] - p2[None, :, :]) ** 2, axis=2)
    return float(np.sqrt(np.min(d2)))


def neighbor_pairs(
    cfg: CellConfiguration, reach: int = 2
) -> Iterable[tuple[int, int, int, int, float]]:
    """(i, j, lx, ly, clearance) for scatterer i in cell 0 vs j in cell l,
    deduplicated, over |l| <= reach. Covers every pair that can interact for
    unit-cell scatterers with sub-cell radii."""
    n = cfg.n_scatterers
    for i in range(n):
        for j in range(n):
            for lx in range(-reach, reach + 1):
                for ly in range(-reach, reach + 1):
                    if (j, lx, ly) <= (i, 0, 0):
                        continue
                    ci = cfg.scatterers[i].base_center
                    cj = cfg.scatterers[j].base_center
                    cjl = Vec2(cj.x + lx, cj.y + ly)
                    gap = _pair_clearance(cfg.scatterers[i], ci, cfg.scatterers[j], cjl)
                    yield i, j, lx, ly, gap


def min_clearance(cfg: CellConfiguration, reach: int = 2) -> float:
    return min(gap for *_ignored, gap in neighbor_pairs(cfg, reach))


def _direction_sweep(cfg: CellConfiguration, q_max: int, margin: float):
    """Yield (p, q, covered) for coprime directions up to q_max; covered means
    the scatterer projections (shrunk by margin per side) close every corridor
    with that direction."""
    dirs = []
    for p in range(0, q_max + 1):
        for q in range(-q_max, q_max + 1):
            if p == 0 and q != 1:
                continue
            if p > 0 and math.gcd(p, abs(q)) != 1:
                continue
            dirs.append((p, q))
    for p, q in dirs:
        norm = math.hypot(p, q)
        nx, ny = -q / norm, p / norm
        period = 1.0 / norm
        intervals = []
        for s in cfg.scatterers:
            c_proj = nx * s.base_center.x + ny * s.base_center.y
            if s.shape.is_disk:
                w_lo = w_hi = s.shape.radius
            else:
                th = np.linspace(0.0, 2.0 * math.pi, 1024, endpoint=False)
                rho = s.shape.rho(th)
                proj = rho * (np.cos(th) * nx + np.sin(th) * ny)
                w_hi = float(np.max(proj))
                w_lo = -float(np.min(proj))
            lo = c_proj - w_lo + margin
            hi = c_proj + w_hi - margin
            if hi > lo:
                intervals.append((lo % period, hi - lo))
        yield p, q, _circle_covered(intervals, period)


def _circle_covered(intervals: Sequence[tuple[float, float]], period: float) -> bool:
    if not intervals:
        return False
    if any(width >= period for _, width in intervals):
        return True
    ivs = sorted(intervals)
    # unroll one period: an interval wrapping past `period` is split
    events = []
    for lo, width in ivs:
        hi = lo + width
        if hi <= period:
            events.append((lo, hi))
        else:
            events.append((lo, period))
            events.append((0.0, hi - period))
    events.sort()
    if events[0][0] > 0.0:
        return False
    reach = 0.0
    for lo, hi in events:
        if lo > reach + 1e-15:
            return False
        reach = max(reach, hi)
    return reach >= period - 1e-15


def ray_intersect(cfg, ray: Ray, tau_cap: float | None = None) -> RayHit:
    """First intersection of the ray with any scatterer lattice translate.

    cfg may be a CellConfiguration or a realized configuration; it only needs
    .scatterers and .tau_cap(). Disks are solved in closed form; Fourier
    boundaries by sign-change scan at H_SCAN plus bisection polished to 1e-12.
    Raises HorizonViolationError when nothing is hit within the cap.
    """
    scatterers = cfg.scatterers
    if tau_cap is None:
        tau_cap = cfg.tau_cap()
    ox, oy = ray.origin.x, ray.origin.y
    vx, vy = ray.direction.x, ray.direction.y
    reach = max(s.max_rho() for s in scatterers) + 1.0

    window = 2.0
    while True:
        search = min(window, tau_cap)
        ex, ey = ox + vx * search, oy + vy * search
        lx_lo = math.floor(min(ox, ex) - reach)
        lx_hi = math.floor(max(ox, ex) + reach)
        ly_lo = math.floor(min(oy, ey) - reach)
        ly_hi = math.floor(max(oy, ey) + reach)
        best: RayHit | None = None
        best_t = search
        for j, s in enumerate(scatterers):
            for lx in range(lx_lo, lx_hi + 1):
                for ly in range(ly_lo, ly_hi + 1):
                    cx = s.base_center.x + lx
                    cy = s.base_center.y + ly
                    t = _first_root(s.shape, ox - cx, oy - cy, vx, vy, best_t)
                    if t is not None and t < best_t:
                        px, py = ox + t * vx - cx, oy + t * vy - cy
                        theta = math.atan2(py, px) % (2.0 * math.pi)
                        best_t = t
                        best = RayHit(j, (lx, ly), s.r_of_theta(theta), t)
        if best is not None:
            return best
        if search >= tau_cap:
            raise HorizonViolationError(
                f"no scatterer within tau_cap = {tau_cap} from ({ox}, {oy})"
            )
        window *= 2.0


def _first_root(shape: ScattererShape, wx, wy, vx, vy, t_max) -> float | None:
    """Smallest t in (COLLISION_EPS, t_max) with |w + t v| = rho(angle)."""
    if shape.is_disk:
        R = shape.radius
        b = wx * vx + wy * vy
        cc = wx * wx + wy * wy - R * R
        if b >= 0.0:
            return None  # receding; origins inside a translate are never valid
        disc = b * b - cc
        if disc <= 0.0:
            return None
        t = -b - math.sqrt(disc)
        if t <= COLLISION_EPS or t >= t_max:
            return None
        return t

    rho_max = float(np.max(shape.rho(np.linspace(0, 2 * math.pi, 256, endpoint=False))))

    def g(t: float) -> float:
        px, py = wx + t * vx, wy + t * vy
        d = math.hypot(px, py)
        return d - float(shape.rho(math.atan2(py, px)))

    # only scan the t-range where the ray is within reach of the curve
    b = wx * vx + wy * vy
    c0 = wx * wx + wy * wy - rho_max * rho_max
    disc = b * b - c0
    if disc <= 0.0:
        return None
    lo = max(-b - math.sqrt(disc), COLLISION_EPS)
    hi = min(-b + math.sqrt(disc), t_max)
    if hi <= lo:
        return None
    t_prev, g_prev = lo, g(lo)
    if g_prev < 0.0:
        return None  # starting inside this translate: not a valid configuration
    t = lo
    while t < hi:
        t = min(t + H_SCAN, hi)
        g_cur = g(t)
        if g_cur < 0.0:
            a_t, b_t = t_prev, t
            for _ in range(80):
                m = 0.5 * (a_t + b_t)
                if g(m) > 0.0:
                    a_t = m
                else:
                    b_t = m
                if b_t - a_t < 1e-12:
                    break
            return 0.5 * (a_t + b_t)
        t_prev, g_prev = t, g_cur
    return None


def check_finite_horizon(
    cfg: CellConfiguration,
    q_max: int = 12,
    mc_samples: int = 100_000,
    seed: int = 0,
    margin: float | None = None,
) -> HorizonReport:
    """Deterministic coprime-direction corridor sweep plus a Monte Carlo
    flight cap; finite only if both pass. margin defaults to cfg.theta0 (the
    sweep must close corridors for every draw within the budget)."""
    if mc_samples <= 0:
        raise ValueError("mc_samples must be positive")
    if margin is None:
        margin = cfg.theta0
    witness = None
    for p, q, covered in _direction_sweep(cfg, q_max, margin):
        if not covered:
            witness = (p, q)
            break
    sweep_ok = witness is None

    from .dynamics import sample_mu0  # local import avoids a cycle
    from .rng import SplitMix64, derive_stream_seed

    rng = SplitMix64(derive_stream_seed(seed, 0xF1, 0))
    tau_max = 0.0
    mc_ok = True
    cap = cfg.tau_cap()
    for _ in range(mc_samples):
        x = sample_mu0(cfg, rng)
        s = cfg.scatterers[x.scatterer]
        pos, tangent, normal, _k = boundary_point(s, x.r)
        cphi, sphi = math.cos(x.phi), math.sin(x.phi)
        direction = Vec2(
            cphi * normal.x + sphi * tangent.x, cphi * normal.y + sphi * tangent.y
        )
        try:
            hit = ray_intersect(cfg, Ray(pos, direction), tau_cap=cap)
        except HorizonViolationError:
            mc_ok = False
            break
        tau_max = max(tau_max, hit.tau)
    return HorizonReport(sweep_ok and mc_ok, tau_max if mc_ok else math.inf, witness)


def validate_configuration(
    cfg: CellConfiguration,
    q_max: int = 12,
    mc_samples: int = 20_000,
) -> ValidationReport:
    """Check every CellConfiguration invariant; failures are reported, not
    raised."""
    violations: list[str] = []

    for idx, s in enumerate(cfg.scatterers):
        for msg in shape_validation_errors(s.shape, cfg.e_star):
            violations.append(f"scatterer {idx}: {msg}")
        c = s.base_center
        if not (0.0 <= c.x < 1.0 and 0.0 <= c.y < 1.0):
            violations.append(f"scatterer {idx}: center {c} outside [0,1)^2")

    clearance = math.inf
    for i, j, lx, ly, gap in neighbor_pairs(cfg):
        if gap < CLEARANCE_MIN:
            violations.append(
                f"closures overlap or nearly touch: scatterer {i} vs {j} in cell "
                f"({lx},{ly}), clearance {gap:.6g} < {CLEARANCE_MIN}"
            )
        clearance = min(clearance, gap)

    # disjointness must survive every draw in the deformation budget; if the
    # unconditional margin fails, the draw law is conditioned (support excludes
    # layouts with clearance < CLEARANCE_MIN) and we flag rather than fail
    support_conditioned = clearance < 2.0 * cfg.theta0 + CLEARANCE_MIN

    kappa_lo, kappa_hi = measured_curvature_range(cfg)
    if not (cfg.kappa_star <= kappa_lo):
        violations.append(f"kappa_min {kappa_lo:.6g} below K* = {cfg.kappa_star}")
    if not (kappa_hi <= 1.0 / cfg.kappa_star):
        violations.append(f"kappa_max {kappa_hi:.6g} above 1/K* = {1.0 / cfg.kappa_star}")

    e_meas = measured_e_max(cfg)
    if e_meas > cfg.e_star:
        violations.append(f"E_max {e_meas:.6g} above E* = {cfg.e_star}")

    horizon = HorizonReport(False, math.inf, None)
    tau_min = clearance  # certified lower bound: flights join distinct boundaries
    if not any("overlap" in v for v in violations):
        horizon = check_finite_horizon(cfg, q_max=q_max, mc_samples=mc_samples)
        if not horizon.finite:
            msg = "horizon not finite"
            if horizon.witness is not None:
                msg += f" (open corridor along direction {horizon.witness})"
            violations.append(msg)
        if not (cfg.tau_star <= tau_min):
            violations.append(f"tau_min {tau_min:.6g} below tau* = {cfg.tau_star}")
        if horizon.finite and not (horizon.tau_max_estimate <= 1.0 / cfg.tau_star):
            violations.append(
                f"tau_max {horizon.tau_max_estimate:.6g} above 1/tau* = {1.0 / cfg.tau_star}"
            )
    else:
        violations.append("horizon check skipped: overlapping configuration")

    return ValidationReport(
        ok=not violations,
        violations=violations,
        tau_min=tau_min,
        tau_max=horizon.tau_max_estimate,
        kappa_min=kappa_lo,
        kappa_max=kappa_hi,
        e_max=e_meas,
        min_clearance=clearance,
        support_conditioned=support_conditioned,
        horizon_finite=horizon.finite,
    )
