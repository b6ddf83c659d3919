"""Deterministic quadrature for weakly singular disk integrals and contours.

Area rules are polar rules centered at the singularity of the intended
integrand: the polar Jacobian r cancels a 1/|z - center| singularity exactly,
and quadratic radial grading (panel edges at (k/P)^2) tames r*log(r).  The
radial extent is rescaled per angle to the distance from the center to the
disk boundary, so every panel integrand stays smooth in the normalized
(s, theta) coordinates.

Weights carry the 2i area factor (dzbar ^ dz = 2i dx dy), and contour weights
carry dz = i R e^{i theta} dtheta, so operator formulas transcribe literally.

Rule construction is side-effect free; node evaluation is vectorized and
reduced with numpy's pairwise summation in a fixed order, so results are
reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import NonFiniteSample, ResolutionTooLow
from .geometry import AREA_FACTOR, DiskDomain

DEFAULT_RESOLUTION = (64, 128)
DEFAULT_CONTOUR_COUNT = 256


@dataclass(frozen=True)
class AreaRule:
    """Nodes/weights for integrating f dzbar^dz over a disk.

    `center` is the singularity location the radial grading points at.
    `resolution` is the requested (n_radial, n_angular).
    """

    nodes: np.ndarray
    weights: np.ndarray
    center: complex
    resolution: tuple[int, int]
    domain: DiskDomain


@dataclass(frozen=True)
class ContourRule:
    """Nodes on the circle |z - center| = R with dz weights (counterclockwise)."""

    nodes: np.ndarray
    weights: np.ndarray
    count: int
    domain: DiskDomain


@lru_cache(maxsize=64)
def _graded_radial_rule(n_radial: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [0, 1] with panel edges at (k/P)^2."""
    order = 8 if n_radial >= 16 else 4
    panels = max(1, n_radial // order)
    edges = (np.arange(panels + 1) / panels) ** 2
    x, w = leggauss(order)
    s = np.concatenate([(e0 + e1) / 2 + (e1 - e0) / 2 * x
                        for e0, e1 in zip(edges[:-1], edges[1:])])
    ws = np.concatenate([(e1 - e0) / 2 * w
                         for e0, e1 in zip(edges[:-1], edges[1:])])
    return s, ws


@lru_cache(maxsize=64)
def _symmetric_angles(n: int) -> tuple[np.ndarray, np.ndarray]:
    """cos/sin at 2*pi*k/n with conjugation symmetry enforced exactly."""
    theta = 2.0 * np.pi * np.arange(n) / n
    c, s = np.cos(theta), np.sin(theta)
    for j in range(1, (n + 1) // 2):
        c[n - j] = c[j]
        s[n - j] = -s[j]
    if n % 2 == 0:
        c[n // 2], s[n // 2] = -1.0, 0.0
    c[0], s[0] = 1.0, 0.0
    return c, s


def _drop_degenerate(nodes: np.ndarray, weights: np.ndarray):
    """Drop zero-weight nodes (directions with zero radial extent collapse
    onto the rule center, where singular integrands are undefined)."""
    keep = weights != 0
    if np.all(keep):
        return nodes, weights
    return nodes[keep], weights[keep]


def _snap_tiny(rho: np.ndarray, radius: float) -> np.ndarray:
    """Zero out radial extents so small their nodes would round onto the
    center; their weights (~rho^2) are far below quadrature accuracy."""
    return np.where(rho < radius * 1e-12, 0.0, rho)


def _boundary_distance(domain: DiskDomain, center: complex,
                       cos_t: np.ndarray, sin_t: np.ndarray) -> np.ndarray:
    """Distance from `center` to the circle along each direction."""
    e = center - domain.center
    x = e.real * cos_t + e.imag * sin_t
    under = domain.radius**2 - abs(e) ** 2 + x * x
    return np.maximum(-x + np.sqrt(np.maximum(under, 0.0)), 0.0)


def build_area_rule(domain: DiskDomain, singularity: complex,
                    resolution: tuple[int, int] = DEFAULT_RESOLUTION) -> AreaRule:
    """Polar rule centered at `singularity`, covering the whole disk.

    Angular rule: equispaced trapezoid (spectrally accurate since the radial
    extent is a smooth periodic function of the angle).  Radial rule: graded
    Gauss-Legendre panels on [0, rho(theta)].
    """
    n_radial, n_angular = resolution
    if n_radial < 4 or n_angular < 8:
        raise ResolutionTooLow(f"need n_radial >= 4 and n_angular >= 8, got {resolution}")
    singularity = domain.validate_point(singularity)

    cos_t, sin_t = _symmetric_angles(n_angular)
    unit = cos_t + 1j * sin_t
    rho = _snap_tiny(_boundary_distance(domain, singularity, cos_t, sin_t), domain.radius)
    s, ws = _graded_radial_rule(n_radial)

    nodes = singularity + (rho[None, :] * s[:, None]) * unit[None, :]
    # dA = r dr dtheta = rho^2 s ds dtheta
    weights = AREA_FACTOR * (rho[None, :] ** 2 * s[:, None] * ws[:, None]) * (2 * np.pi / n_angular)
    nodes, weights = _drop_degenerate(nodes.ravel(), weights.ravel())
    return AreaRule(nodes=nodes, weights=weights,
                    center=singularity, resolution=(n_radial, n_angular), domain=domain)


def build_half_rule(domain: DiskDomain, center: complex, other: complex,
                    resolution: tuple[int, int] = DEFAULT_RESOLUTION) -> AreaRule:
    """Rule on the half of the disk nearer `center` than `other`.

    The disk is cut along the perpendicular bisector of [center, other]; the
    piece containing `center` gets a polar rule centered on it.  The angular
    axis uses Gauss-Legendre panels split at the two angles where the
    bisector meets the circle, so the radial-extent kink never sits inside a
    panel.  Two such rules (swapping the roles) tile the disk exactly.
    """
    n_radial, n_angular = resolution
    if n_radial < 4 or n_angular < 8:
        raise ResolutionTooLow(f"need n_radial >= 4 and n_angular >= 8, got {resolution}")
    center = domain.validate_point(center)
    other = domain.validate_point(other)
    sep = abs(other - center)
    if sep == 0:
        raise ValueError("center and other must differ")

    u = (other - center) / sep
    iu = 1j * u
    m0 = (center + other) / 2
    # bisector line m0 + t*iu meets the circle |z - d| = R at two angles
    beta = (np.conj(iu) * (m0 - domain.center)).real
    disc = max(beta * beta - (abs(m0 - domain.center) ** 2 - domain.radius**2), 0.0)
    root = math.sqrt(disc)
    cut_angles = sorted(
        float(np.angle((m0 + t * iu) - center)) % (2 * np.pi) for t in (-beta - root, -beta + root))
    a0, a1 = cut_angles
    arcs = [(a0, a1), (a1, a0 + 2 * np.pi)]

    order = 8
    theta_parts, wt_parts = [], []
    x, w = leggauss(order)
    for lo, hi in arcs:
        span = hi - lo
        panels = max(1, round(span / (2 * np.pi) * n_angular / order))
        # cosine-cluster panel edges toward the arc endpoints: the integrand's
        # radial extent is steepest near the bisector-circle corners
        t = np.linspace(0.0, 1.0, panels + 1)
        edges = lo + span * (1.0 - np.cos(np.pi * t)) / 2.0
        for e0, e1 in zip(edges[:-1], edges[1:]):
            theta_parts.append((e0 + e1) / 2 + (e1 - e0) / 2 * x)
            wt_parts.append((e1 - e0) / 2 * w)
    theta = np.concatenate(theta_parts)
    wt = np.concatenate(wt_parts)

    cos_t, sin_t = np.cos(theta), np.sin(theta)
    unit = cos_t + 1j * sin_t
    rho_d = _boundary_distance(domain, center, cos_t, sin_t)
    d_bis = cos_t * u.real + sin_t * u.imag  # Re(e^{i theta} conj(u))
    with np.errstate(divide="ignore"):
        rho_b = np.where(d_bis > 1e-15, (sep / 2) / np.where(d_bis > 1e-15, d_bis, 1.0), np.inf)
    rho = _snap_tiny(np.minimum(rho_d, rho_b), domain.radius)

    s, ws = _graded_radial_rule(n_radial)
    nodes = center + (rho[None, :] * s[:, None]) * unit[None, :]
    weights = AREA_FACTOR * (rho[None, :] ** 2 * s[:, None] * ws[:, None]) * wt[None, :]
    nodes, weights = _drop_degenerate(nodes.ravel(), weights.ravel())
    return AreaRule(nodes=nodes, weights=weights,
                    center=center, resolution=(n_radial, n_angular), domain=domain)


def build_contour_rule(radius: float, count: int = DEFAULT_CONTOUR_COUNT,
                       center: complex = 0j) -> ContourRule:
    """Equispaced trapezoid rule on |z - center| = radius, weights carry dz."""
    if count < 8:
        raise ResolutionTooLow(f"contour rule needs count >= 8, got {count}")
    domain = DiskDomain(radius, center)
    cos_t, sin_t = _symmetric_angles(count)
    unit = cos_t + 1j * sin_t
    nodes = center + radius * unit
    weights = 1j * radius * unit * (2 * np.pi / count)
    return ContourRule(nodes=nodes, weights=weights, count=count, domain=domain)


def integrate(rule: AreaRule | ContourRule, integrand) -> complex:
    """Weighted sum of integrand samples at the rule nodes.

    The integrand should accept a complex ndarray and return matching shape;
    scalar-only callables are accepted with a pointwise fallback.
    """
    nodes = rule.nodes
    try:
        vals = np.asarray(integrand(nodes), dtype=complex)
        if vals.shape == ():
            vals = np.full(nodes.shape, complex(vals))
        elif vals.shape != nodes.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([complex(integrand(z)) for z in nodes])
    if not np.all(np.isfinite(vals)):
        raise NonFiniteSample("integrand produced NaN/Inf at a quadrature node")
    return complex(np.sum(rule.weights * vals))
