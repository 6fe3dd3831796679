"""Probability space of scatterer perturbations and configuration realization.

Two models: per-scatterer center translations (preserves the invariant measure
exactly) and radial Fourier deformations (arclength restored by radius
rescaling). Draws are uniform on the parameter box, conditioned on the
realized layout keeping every pairwise clearance >= CLEARANCE_MIN so that
every environment is a genuine disjoint-scatterer billiard table; for well
separated configurations the conditioning never triggers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    CLEARANCE_MIN,
    CellConfiguration,
    Scatterer,
    ScattererShape,
    Vec2,
    _pair_clearance,
    boundary_point,
    neighbor_pairs,
)

MAX_DRAW_ATTEMPTS = 10_000


class DrawRejectedError(RuntimeError):
    """No valid environment found within MAX_DRAW_ATTEMPTS redraws."""


@dataclass(frozen=True)
class PerturbationModel:
    """Law of one environment: kind in {"translation", "radial_fourier"}.

    max_offset caps each center-shift component (sup norm); mode_amplitudes
    cap the per-mode radial coefficients |a_k|, |b_k| for modes k = 2, 3, ...
    """

    kind: str
    max_offset: float = 0.0
    mode_amplitudes: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("translation", "radial_fourier"):
            raise ValueError(f"unknown perturbation kind {self.kind!r}")
        if self.max_offset < 0.0 or any(a < 0.0 for a in self.mode_amplitudes):
            raise ValueError("perturbation amplitudes must be nonnegative")
        object.__setattr__(self, "mode_amplitudes", tuple(self.mode_amplitudes))

    @property
    def is_zero(self) -> bool:
        if self.kind == "translation":
            return self.max_offset == 0.0
        return all(a == 0.0 for a in self.mode_amplitudes)

    def _mode_sums(self) -> tuple[float, float, float]:
        a1 = sum(self.mode_amplitudes) * math.sqrt(2.0)  # sqrt(a^2+b^2) <= cap*sqrt2
        a2 = sum(k * a for k, a in enumerate(self.mode_amplitudes, start=2)) * math.sqrt(2.0)
        a3 = sum(k * k * a for k, a in enumerate(self.mode_amplitudes, start=2)) * math.sqrt(2.0)
        return a1, a2, a3

    def max_boundary_shift(self, base: CellConfiguration) -> float:
        """Bound on how far any boundary point can move in one draw."""
        if self.kind == "translation":
            return math.sqrt(2.0) * self.max_offset
        a1, a2, _ = self._mode_sums()
        if a1 >= 0.5:
            return math.inf
        r_max = max(s.shape.radius for s in base.scatterers)
        d0, e_theta, _, _ = _radial_deformation_bounds(a1, a2, 0.0)
        return r_max * (d0 + e_theta)

    def delta_budget_bound(self, base: CellConfiguration) -> float:
        """Upper bound on the C2 deformation distance over the whole support.

        Conservative interval arithmetic on the coefficient caps; used to
        verify the model respects the configuration's theta0 budget.
        """
        if self.kind == "translation":
            return base.n_scatterers * math.sqrt(2.0) * self.max_offset
        a1, a2, a3 = self._mode_sums()
        if a1 >= 0.5:
            return math.inf
        total = 0.0
        for s in base.scatterers:
            R = s.shape.radius
            d0, e_theta, e_alpha, e_kappa = _radial_deformation_bounds(a1, a2, a3)
            total += R * (d0 + e_theta) + (e_theta + e_alpha) + (e_kappa + e_theta + e_alpha) / R
        return total


def _radial_deformation_bounds(a1: float, a2: float, a3: float):
    """Sup-norm bounds for a perimeter-rescaled radial deformation of a circle.

    Inputs are bounds on |f|, |f'|, |f''| of the relative mode sum f; returns
    (D0, E_theta, E_alpha, E_kappa):
      D0      >= sup |rho - R| / R
      E_theta >= sup |theta(s) - s/R|          (arclength reparametrization)
      E_alpha >= sup tangent tilt angle
      E_kappa >= sup |R * kappa - 1|
    """
    e_r = a1 + a2 * a2  # radius rescale drift from perimeter matching
    d0 = e_r + (1.0 + e_r) * a1
    a2h = (1.0 + e_r) * a2
    a3h = (1.0 + e_r) * a3
    d1 = d0 + a2h  # sup |speed - R| / R
    if d1 >= 0.9:
        return math.inf, math.inf, math.inf, math.inf
    e_theta = 2.0 * math.pi * d1 / (1.0 - d1)
    e_alpha = a2h / (1.0 - d0) if d0 < 1.0 else math.inf
    n_hi = (1.0 + d0) ** 2 + 2.0 * a2h * a2h + (1.0 + d0) * a3h
    n_lo = (1.0 - d0) ** 2 - (1.0 + d0) * a3h
    den_hi = ((1.0 + d0) ** 2 + a2h * a2h) ** 1.5
    den_lo = (1.0 - d0) ** 3
    if den_lo <= 0.0 or n_lo <= 0.0:
        return d0, e_theta, e_alpha, math.inf
    e_kappa = max(abs(n_hi / den_lo - 1.0), abs(n_lo / den_hi - 1.0))
    return d0, e_theta, e_alpha, e_kappa


@dataclass(frozen=True)
class EnvironmentDraw:
    """One realized parameter vector: offsets (I, 2) for translation, radial
    coefficients (I, K-1, 2) for radial_fourier."""

    kind: str
    offsets: np.ndarray | None = None
    coeffs: np.ndarray | None = None

    def is_zero_draw(self) -> bool:
        if self.kind == "translation":
            return not np.any(self.offsets)
        return not np.any(self.coeffs)


@dataclass(frozen=True)
class RealizedConfiguration:
    """Base configuration seen through one environment draw."""

    base: CellConfiguration
    draw: EnvironmentDraw
    scatterers: tuple[Scatterer, ...]

    def tau_cap(self) -> float:
        return self.base.tau_cap()

    @property
    def n_scatterers(self) -> int:
        return len(self.scatterers)


@dataclass(frozen=True)
class DrawSupport:
    """Tight scatterer pairs that can approach within the rejection threshold;
    draws violating clearance >= CLEARANCE_MIN on any of them are redrawn."""

    pairs: tuple[tuple[int, int, int, int], ...]  # (i, j, lx, ly)

    @classmethod
    def for_model(cls, base: CellConfiguration, model: PerturbationModel) -> "DrawSupport":
        slack = 2.0 * model.max_boundary_shift(base)
        tight = tuple(
            (i, j, lx, ly)
            for i, j, lx, ly, gap in neighbor_pairs(base)
            if gap < slack + CLEARANCE_MIN
        )
        return cls(tight)

    @property
    def unconditioned(self) -> bool:
        return len(self.pairs) == 0


def validate_model(base: CellConfiguration, model: PerturbationModel) -> None:
    """Reject models whose support can exceed the theta0 deformation budget."""
    bound = model.delta_budget_bound(base)
    if bound > base.theta0:
        raise ValueError(
            f"perturbation model exceeds deformation budget: bound {bound:.6g} "
            f"> theta0 = {base.theta0}"
        )


def draw_environment(
    model: PerturbationModel,
    rng,
    base: CellConfiguration | None = None,
    support: DrawSupport | None = None,
) -> EnvironmentDraw:
    """Uniform draw on the parameter box; when base is given, redraw until the
    realized layout is a valid (pairwise clearance >= CLEARANCE_MIN) table."""
    if base is None:
        raise ValueError("draw_environment needs the base configuration for sizing")
    if support is None:
        support = DrawSupport.for_model(base, model)
    for _ in range(MAX_DRAW_ATTEMPTS):
        draw = _raw_draw(model, rng, base.n_scatterers)
        if support.unconditioned or _draw_valid(base, model, draw, support):
            return draw
    raise DrawRejectedError(
        f"no valid environment in {MAX_DRAW_ATTEMPTS} attempts; model support "
        "is incompatible with the configuration"
    )


def _raw_draw(model: PerturbationModel, rng, n: int) -> EnvironmentDraw:
    if model.kind == "translation":
        off = np.empty((n, 2))
        for i in range(n):
            off[i, 0] = (2.0 * rng.random() - 1.0) * model.max_offset
            off[i, 1] = (2.0 * rng.random() - 1.0) * model.max_offset
        return EnvironmentDraw("translation", offsets=off)
    k = len(model.mode_amplitudes)
    coeffs = np.empty((n, k, 2))
    for i in range(n):
        for m in range(k):
            coeffs[i, m, 0] = (2.0 * rng.random() - 1.0) * model.mode_amplitudes[m]
            coeffs[i, m, 1] = (2.0 * rng.random() - 1.0) * model.mode_amplitudes[m]
    return EnvironmentDraw("radial_fourier", coeffs=coeffs)


def _draw_valid(
    base: CellConfiguration,
    model: PerturbationModel,
    draw: EnvironmentDraw,
    support: DrawSupport,
) -> bool:
    if model.kind == "translation":
        sc = base.scatterers
        off = draw.offsets
        for i, j, lx, ly in support.pairs:
            dx = sc[j].base_center.x + lx + off[j, 0] - sc[i].base_center.x - off[i, 0]
            dy = sc[j].base_center.y + ly + off[j, 1] - sc[i].base_center.y - off[i, 1]
            gap = math.hypot(dx, dy) - sc[i].shape.radius - sc[j].shape.radius
            if gap < CLEARANCE_MIN:
                return False
        return True
    realized = _realize_unchecked(base, draw)
    sc = realized.scatterers
    for i, j, lx, ly in support.pairs:
        cj = sc[j].base_center
        gap = _pair_clearance(sc[i], sc[i].base_center, sc[j], Vec2(cj.x + lx, cj.y + ly))
        if gap < CLEARANCE_MIN:
            return False
    return True


def _realize_unchecked(base: CellConfiguration, draw: EnvironmentDraw) -> RealizedConfiguration:
    if draw.kind == "translation":
        moved = tuple(
            Scatterer(
                Vec2(s.base_center.x + draw.offsets[i, 0], s.base_center.y + draw.offsets[i, 1]),
                s.shape,
                s.perimeter,
            )
            for i, s in enumerate(base.scatterers)
        )
        return RealizedConfiguration(base, draw, moved)

    out = []
    for i, s in enumerate(base.scatterers):
        if not s.shape.is_disk:
            raise ValueError("radial_fourier perturbations require disk base shapes")
        coeffs = tuple((float(a), float(b)) for a, b in draw.coeffs[i])
        shape = s.shape
        if any(a != 0.0 or b != 0.0 for a, b in coeffs):
            deformed = ScattererShape(s.shape.radius, coeffs)
            # perimeter is 1-homogeneous in the radius, so one Newton step of
            # radius rescaling restores the base arclength exactly (to
            # quadrature accuracy)
            scale = s.perimeter / deformed.perimeter()
            shape = deformed.with_radius(s.shape.radius * scale)
        out.append(Scatterer(s.base_center, shape))
    return RealizedConfiguration(base, draw, tuple(out))


def realize(base: CellConfiguration, draw: EnvironmentDraw) -> RealizedConfiguration:
    """Apply a draw to the base configuration; asserts disjointness, which
    cannot fail for draws produced by draw_environment."""
    realized = _realize_unchecked(base, draw)
    if not draw.is_zero_draw():
        sc = realized.scatterers
        for i, j, lx, ly, _gap in neighbor_pairs(base):
            cj = sc[j].base_center
            gap = _pair_clearance(sc[i], sc[i].base_center, sc[j], Vec2(cj.x + lx, cj.y + ly))
            if gap < 0.0:
                raise AssertionError(
                    f"realized configuration overlaps (scatterers {i}, {j} cell "
                    f"({lx},{ly})): draw outside the conditioned support"
                )
    return realized


def delta_C2(realized: RealizedConfiguration, base: CellConfiguration) -> float:
    """C2 distance sum_i |u_i - u~_i| between arclength parametrizations of the
    base and realized boundaries (positions, unit tangents, curvature vectors),
    sampled densely over a common arclength grid."""
    if realized.n_scatterers != base.n_scatterers:
        raise ValueError("scatterer count mismatch")
    total = 0.0
    for s_base, s_real in zip(base.scatterers, realized.scatterers):
        base_disk = s_base.shape.is_disk
        if not base_disk and s_base.shape.kind != s_real.shape.kind:
            raise ValueError("shape kind mismatch between base and realized scatterer")
        if abs(s_base.perimeter - s_real.perimeter) > 1e-6 * s_base.perimeter:
            raise ValueError("parametrization domains differ (unequal perimeters)")
        total += _curve_c2_distance(s_base, s_real)
    return total


def _curve_c2_distance(s1: Scatterer, s2: Scatterer, n_samples: int = 1024) -> float:
    if s1.shape.is_disk and s2.shape.is_disk and s1.shape.radius == s2.shape.radius:
        # pure translation: derivatives cancel exactly
        return (s2.base_center - s1.base_center).norm()
    sup0 = sup1 = sup2 = 0.0
    for k in range(n_samples):
        r = (k / n_samples) * s1.perimeter * (1.0 - 1e-15)
        p1, t1, n1, k1 = boundary_point(s1, r)
        p2, t2, n2, k2 = boundary_point(s2, r)
        sup0 = max(sup0, math.hypot(p2.x - p1.x, p2.y - p1.y))
        sup1 = max(sup1, math.hypot(t2.x - t1.x, t2.y - t1.y))
        # u'' = kappa * curve-inward normal; boundary_point's normal is outward
        sup2 = max(
            sup2,
            math.hypot(k2 * n2.x - k1 * n1.x, k2 * n2.y - k1 * n1.y),
        )
    return sup0 + sup1 + sup2
