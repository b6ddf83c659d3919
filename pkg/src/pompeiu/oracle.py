"""Independent brute-force references for the closed-form machinery.

Nothing here touches the closed-form kernels: nested operator application
composes single-operator quadratures, the lemma left-hand sides are quadrated
directly from their defining integrals with two-center singular rules, and
polynomial test fields carry exact coefficient-level Wirtinger calculus.

Discrete Hoelder/semi-norm estimators are sups over finite seeded samples and
therefore lower bounds of the continuum quantities; they are only ever used
on the small side of one-sided inequality checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RectBivariateSpline

from .errors import CoincidentPoints, DepthCap, DomainError
from .geometry import DiskDomain, wirtinger_split
from .kernels import COINCIDENCE_EPS
from .operators import ScalarField, apply_mixed, apply_T, apply_Tbar
from .quadrature import build_area_rule, build_contour_rule, build_half_rule, integrate

MAX_POLY_DEGREE = 8
MAX_PROGRAM_LENGTH = 4
MIN_PAIR_SEPARATION = 1e-6


# ---------------------------------------------------------------------------
# Exact polynomial fields  sum c[p,q] z^p zbar^q
# ---------------------------------------------------------------------------

class PolynomialField:
    """Polynomial in z and conj(z) with exact Wirtinger differentiation.

    Coefficients are held as a dense (p, q) array; degree in each variable is
    capped at 8 (the fields only exist as smooth test vehicles).
    """

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim != 2:
            raise DomainError("coefficients must be a 2-D array c[p, q]")
        if c.shape[0] - 1 > MAX_POLY_DEGREE or c.shape[1] - 1 > MAX_POLY_DEGREE:
            raise DomainError(f"polynomial degree exceeds cap {MAX_POLY_DEGREE}")
        self.coeffs = c

    @classmethod
    def from_dict(cls, entries: dict[tuple[int, int], complex]) -> "PolynomialField":
        if not entries:
            return cls(np.zeros((1, 1), dtype=complex))
        pmax = max(p for p, _ in entries)
        qmax = max(q for _, q in entries)
        c = np.zeros((pmax + 1, qmax + 1), dtype=complex)
        for (p, q), v in entries.items():
            c[p, q] = v
        return cls(c)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        zb = np.conj(z)
        total = np.zeros(z.shape, dtype=complex)
        for p in range(self.coeffs.shape[0] - 1, -1, -1):
            row = self.coeffs[p]
            acc = np.zeros(z.shape, dtype=complex)
            for q in range(row.shape[0] - 1, -1, -1):
                acc *= zb
                acc += row[q]
            total *= z
            total += acc
        return total if total.shape else complex(total)

    def wirtinger(self, mu: int, nu: int) -> "PolynomialField":
        """Exact d^mu dbar^nu by coefficient shifts."""
        c = self.coeffs
        for _ in range(mu):
            p = np.arange(1, c.shape[0])
            c = c[1:, :] * p[:, None] if c.shape[0] > 1 else np.zeros((1, c.shape[1]), complex)
        for _ in range(nu):
            q = np.arange(1, c.shape[1])
            c = c[:, 1:] * q[None, :] if c.shape[1] > 1 else np.zeros((c.shape[0], 1), complex)
        return PolynomialField(c)

    def to_field(self, domain: DiskDomain, alpha: float = 0.5) -> ScalarField:
        return ScalarField(self, domain, alpha, "polynomial")

    def __repr__(self):
        terms = [f"({v:g})z^{p}zb^{q}" for (p, q), v in np.ndenumerate(self.coeffs) if v != 0]
        return " + ".join(terms) or "0"


def wirtinger_exact(p: PolynomialField, mu: int, nu: int) -> PolynomialField:
    """Exact coefficient-level d^mu dbar^nu of a polynomial field."""
    return p.wirtinger(mu, nu)


def exact_transform(field: PolynomialField, radius: float,
                    conjugate: bool = False) -> PolynomialField:
    """Exact single transform of a polynomial field on the origin-centered disk.

    Apply the interior inversion identity to the antiderivative
    F = z^p zbar^(q+1)/(q+1): the transform of the monomial is F minus its
    boundary Cauchy integral, and on |z| = R the latter is the residue of
    R^(2(q+1)) z^(p-q-1)/(z - target), nonzero only when p >= q+1.  The
    conjugate transform mirrors the roles of the exponents.
    """
    out: dict[tuple[int, int], complex] = {}

    def add(key, val):
        out[key] = out.get(key, 0j) + val

    for (p, q), v in np.ndenumerate(field.coeffs):
        if v == 0:
            continue
        if not conjugate:
            add((p, q + 1), v / (q + 1))
            if p >= q + 1:
                add((p - q - 1, 0), -v * radius ** (2 * (q + 1)) / (q + 1))
        else:
            add((p + 1, q), v / (p + 1))
            if q >= p + 1:
                add((0, q - p - 1), -v * radius ** (2 * (p + 1)) / (p + 1))
    return PolynomialField.from_dict(out)


# ---------------------------------------------------------------------------
# Nested operator application (the literal composition route)
# ---------------------------------------------------------------------------

class _PolarGridField:
    """Complex field memoized on a polar grid with bicubic interpolation."""

    def __init__(self, domain: DiskDomain, radii, angles, values):
        pad = 3
        ang_ext = np.concatenate([angles[-pad:] - 2 * np.pi, angles, angles[:pad] + 2 * np.pi])
        vals_ext = np.concatenate([values[:, -pad:], values, values[:, :pad]], axis=1)
        self.domain = domain
        self._re = RectBivariateSpline(radii, ang_ext, vals_ext.real, kx=3, ky=3)
        self._im = RectBivariateSpline(radii, ang_ext, vals_ext.imag, kx=3, ky=3)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        w = z - self.domain.center
        r = np.minimum(np.abs(w), self.domain.radius)
        theta = np.mod(np.angle(w), 2 * np.pi)
        flat_r, flat_t = np.ravel(r), np.ravel(theta)
        vals = self._re.ev(flat_r, flat_t) + 1j * self._im.ev(flat_r, flat_t)
        return vals.reshape(z.shape) if z.shape else complex(vals[0])


_SINGLE_OPS = {"T": apply_T, "Tbar": apply_Tbar}


class NestedOracle:
    """Evaluate operator words like [T, T, Tbar] by literal composition.

    The outermost operator is quadrated directly at the requested target.
    Each deeper intermediate field is materialized once, on demand, on a
    polar grid (one single-operator quadrature per grid node) and then
    interpolated at the parent rule's nodes; the grids are memoized per
    program suffix.  Exact per-node nesting costs O(N^depth) and is
    unusable beyond depth 2, while the memoized route is linear in depth and
    still never touches the closed-form kernels.

    The memo table is confined to this instance; share an instance across
    threads only for reads after warm-up.
    """

    def __init__(self, f: ScalarField, resolution=(24, 48), grid_shape=(40, 80),
                 top_resolution=(64, 128)):
        if not isinstance(f.domain, DiskDomain):
            raise DomainError("nested application is defined for disk fields")
        self.f = f
        self.domain = f.domain
        self.resolution = tuple(resolution)
        self.top_resolution = tuple(top_resolution)
        self.grid_shape = tuple(grid_shape)
        self._memo: dict[tuple[str, ...], object] = {(): f.evaluator}

    def _field_for(self, suffix: tuple[str, ...]):
        if suffix not in self._memo:
            inner = self._field_for(suffix[1:])
            self._memo[suffix] = self._materialize(suffix[0], inner)
        return self._memo[suffix]

    def _materialize(self, op: str, inner_evaluator) -> _PolarGridField:
        # One base rule per radius; rules at other angles are its rotations
        # (the disk is rotation-invariant about its center), so each grid row
        # is one batched quadrature:  1/(w - z) = e^{-i t}/(n0 - r)  with
        # w = center + e^{i t} n0,  z = center + e^{i t} r.
        nr, nt = self.grid_shape
        radii = np.linspace(0.0, self.domain.radius, nr)
        angles = 2 * np.pi * np.arange(nt) / nt
        phases = np.exp(1j * angles)
        values = np.empty((nr, nt), dtype=complex)
        for i, r in enumerate(radii):
            base = build_area_rule(self.domain, self.domain.center + r, self.resolution)
            n0 = base.nodes - self.domain.center
            nodes_all = self.domain.center + phases[:, None] * n0[None, :]
            fvals = np.asarray(inner_evaluator(nodes_all), dtype=complex)
            if op == "T":
                integrand = fvals / (phases[:, None] * (n0[None, :] - r))
            else:
                integrand = fvals / (np.conj(phases)[:, None] * (np.conj(n0)[None, :] - r))
            values[i, :] = np.sum(base.weights[None, :] * integrand, axis=1) / (-2j * np.pi)
        return _PolarGridField(self.domain, radii, angles, values)

    def evaluate(self, z: complex, program) -> complex:
        program = tuple(program)
        if len(program) == 0:
            raise DomainError("empty operator program")
        if len(program) > MAX_PROGRAM_LENGTH:
            raise DepthCap(f"program length {len(program)} exceeds cap {MAX_PROGRAM_LENGTH}")
        for op in program:
            if op not in _SINGLE_OPS:
                raise DomainError(f"unknown operator {op!r}; expected 'T' or 'Tbar'")
        field = ScalarField(self._field_for(program[1:]), self.domain, self.f.hoelder_alpha)
        rule = build_area_rule(self.domain, complex(z), self.top_resolution)
        return _SINGLE_OPS[program[0]](field, complex(z), rule=rule)


def nested_apply(f: ScalarField, z, program, resolution=(24, 48),
                 grid_shape=(40, 80), top_resolution=(64, 128)):
    """One-shot nested application; accepts a scalar or a sequence of targets."""
    oracle = NestedOracle(f, resolution, grid_shape, top_resolution)
    if np.ndim(z) == 0:
        return oracle.evaluate(complex(z), program)
    return np.array([oracle.evaluate(complex(w), program) for w in np.asarray(z).ravel()])


# ---------------------------------------------------------------------------
# Direct quadrature of the kernel lemmas' left-hand sides
# ---------------------------------------------------------------------------

def two_center_integrate(func, domain: DiskDomain, a: complex, b: complex,
                         resolution=(64, 128)) -> complex:
    """Integrate f dzbar^dz with grading toward both a and b.

    The disk is split along the perpendicular bisector of [a, b]; each half
    carries a polar rule centered on its own singularity, so both 1/(z-a)
    and 1/(zbar-bbar) factors are tamed by the radial Jacobian.
    """
    rule_a = build_half_rule(domain, a, b, resolution)
    rule_b = build_half_rule(domain, b, a, resolution)
    return integrate(rule_a, func) + integrate(rule_b, func)


def lemma_lhs_quadrature(kind: str, a: complex, b: complex, indices, radius: float,
                         resolution=(64, 128), contour_count: int = 256) -> complex:
    """Direct numeric value of a kernel identity's defining integral.

    kind 'lem4': area integral of (z-b)^(k-1) / ((z-a)(zbar-bbar)), indices=k.
    kind 'lem5': contour integral of (zbar-bbar)^l (z-b)^(nu-1)/(z-a), indices=(l, nu).
    kind 'lem6': area integral of (zbar-abar)^(mu-1)(z-b)^(nu-1)/((z-a)(zbar-bbar)),
                 indices=(mu, nu).
    """
    a, b = complex(a), complex(b)
    if abs(a - b) < COINCIDENCE_EPS * radius:
        raise CoincidentPoints("lemma left-hand sides need a != b")
    domain = DiskDomain(radius)
    bb = np.conj(b)

    if kind == "lem4":
        k = int(indices) if np.ndim(indices) == 0 else int(indices[0])
        func = lambda z: (z - b) ** (k - 1) / ((z - a) * (np.conj(z) - bb))
        return two_center_integrate(func, domain, a, b, resolution)
    if kind == "lem5":
        l, nu = (int(i) for i in indices)
        rule = build_contour_rule(radius, contour_count)
        return integrate(rule, lambda z: (np.conj(z) - bb) ** l * (z - b) ** (nu - 1) / (z - a))
    if kind == "lem6":
        mu, nu = (int(i) for i in indices)
        ab = np.conj(a)
        func = lambda z: ((np.conj(z) - ab) ** (mu - 1) * (z - b) ** (nu - 1)
                          / ((z - a) * (np.conj(z) - bb)))
        return two_center_integrate(func, domain, a, b, resolution)
    raise DomainError(f"unknown lemma kind {kind!r}")


# ---------------------------------------------------------------------------
# Discrete Hoelder machinery
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HoelderEstimate:
    """Discrete sup estimate of a difference-quotient semi-norm (a lower bound)."""

    alpha: float
    order: int
    value: float
    budget: int


def _disk_samples(rng, count: int, radius: float):
    u = rng.random(count)
    v = rng.random(count)
    return radius * np.sqrt(u) * np.exp(2j * np.pi * v)


def _scalar(value) -> complex:
    return complex(np.asarray(value).ravel()[0])


def hoelder_seminorm(f: ScalarField, alpha: float, k: int = 1,
                     sample_budget: int = 400, seed: int = 0) -> HoelderEstimate:
    """Discrete k-th order Hoelder quotient sup over seeded sample tuples.

    Pairs keep a minimum separation of 1e-6 R per perturbed factor.  The
    estimate is monotone non-decreasing in the budget for a fixed seed
    (larger budgets extend the same sample stream).
    """
    if not (0.0 < alpha < 1.0):
        raise DomainError("alpha must be in (0,1) strictly")
    n = f.factors
    if k < 0 or k > n:
        raise DomainError(f"difference-quotient order {k} not in 0..{n}")
    radius = f.domain.radius
    rng = np.random.default_rng(seed)

    if k == 0:
        pts = [_disk_samples(rng, sample_budget, radius) for _ in range(n)]
        vals = np.abs(f(*pts))
        return HoelderEstimate(alpha, 0, float(np.max(vals)), sample_budget)

    best = 0.0
    for _ in range(sample_budget):
        base = [complex(_disk_samples(rng, 1, radius)[0]) for _ in range(n)]
        idx = sorted(rng.choice(n, size=k, replace=False).tolist()) if k < n else list(range(n))
        primes = {}
        for j in idx:
            while True:
                cand = complex(_disk_samples(rng, 1, radius)[0])
                if abs(cand - base[j]) >= MIN_PAIR_SEPARATION * radius:
                    primes[j] = cand
                    break
        total = 0j
        for mask in range(1 << k):
            point = list(base)
            bits = 0
            for pos, j in enumerate(idx):
                if mask >> pos & 1:
                    point[j] = primes[j]
                    bits += 1
            sign = -1.0 if bits % 2 else 1.0
            total += sign * _scalar(f(*[np.asarray(p) for p in point]))
        denom = math.prod(abs(base[j] - primes[j]) ** alpha for j in idx)
        best = max(best, abs(total) / denom)
    return HoelderEstimate(alpha, k, best, sample_budget)


def disk_norm_estimate(f: ScalarField, alpha: float, sample_budget: int = 400,
                       seed: int = 0) -> float:
    """Discrete sup|f| + (2R)^alpha * H_alpha[f] on the disk (a lower bound)."""
    sup = hoelder_seminorm(f, alpha, k=0, sample_budget=sample_budget, seed=seed).value
    hol = hoelder_seminorm(f, alpha, k=1, sample_budget=sample_budget, seed=seed + 1).value
    return sup + (2 * f.domain.radius) ** alpha * hol


def polydisc_norm_estimate(f: ScalarField, alpha: float, sample_budget: int = 200,
                           seed: int = 0) -> float:
    """Discrete sum over k of (2R)^(k alpha)/k! * H^(k)_alpha[f]."""
    n = f.factors
    total = 0.0
    for k in range(n + 1):
        est = hoelder_seminorm(f, alpha, k=k, sample_budget=sample_budget, seed=seed + k).value
        total += (2 * f.domain.radius) ** (k * alpha) / math.factorial(k) * est
    return total


# ---------------------------------------------------------------------------
# One-sided semi-norm bound check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormBoundReport:
    holds: bool
    lhs: float
    rhs: float
    m: int
    alpha: float
    constants: tuple[float, float, float]


def bound_constants(alpha: float) -> tuple[float, float, float]:
    """(C0, C4, C5) = (12/(a(1-a)), 2^(a+1)/a, 4/(a(1-a)))."""
    if not (0.0 < alpha < 1.0):
        raise DomainError("alpha must be in (0,1) strictly")
    return (12.0 / (alpha * (1 - alpha)),
            2.0 ** (alpha + 1) / alpha,
            4.0 / (alpha * (1 - alpha)))


def check_norm_bound(f: ScalarField, mu: int, nu: int, alpha: float,
                     resolution=(32, 64), sup_points: int = 8, pairs: int = 8,
                     seed: int = 0, fd_step: float | None = None) -> NormBoundReport:
    """One-sided check of the m-th semi-norm growth bound for T^mu Tbar^nu.

    The left side is a discrete estimate (finite-difference derivatives of
    pointwise transform values, sampled sups and Hoelder quotients); discrete
    sups under-estimate the continuum ones, so `holds` failing would disprove
    the inequality while passing is consistent with it.  The bound constant
    is astronomically larger than the estimator noise for every admissible
    alpha, which keeps the check meaningful despite FD error.
    """
    m = mu + nu
    if m > 4:
        raise DomainError("norm-bound check supports mu + nu <= 4")
    radius = f.domain.radius
    C0, C4, C5 = bound_constants(alpha)
    rhs_const = 2.0 ** ((m - 1) * m // 2) * (C4 * m + C0 + (m - 1) * C5) ** m
    rhs = rhs_const * disk_norm_estimate(f, alpha, seed=seed)

    h = fd_step if fd_step is not None else (1e-12) ** (1.0 / (m + 2)) * radius
    rng = np.random.default_rng(seed + 17)
    sites = _disk_samples(rng, sup_points, 0.6 * radius)
    pair_a = _disk_samples(rng, pairs, 0.6 * radius)
    pair_b = _disk_samples(rng, pairs, 0.6 * radius)
    keep = np.abs(pair_a - pair_b) >= MIN_PAIR_SEPARATION * radius
    pair_a, pair_b = pair_a[keep], pair_b[keep]

    memo: dict[complex, complex] = {}

    def g(zarr):
        zarr = np.atleast_1d(np.asarray(zarr, dtype=complex))
        out = np.empty(zarr.shape, dtype=complex)
        for idx, zz in np.ndenumerate(zarr):
            zz = complex(zz)
            if zz not in memo:
                memo[zz] = apply_mixed(f, zz, mu, nu, resolution)
            out[idx] = memo[zz]
        return out

    lhs = 0.0
    for i in range(m + 1):
        j = m - i
        stencil = wirtinger_split(i, j)
        deriv = lambda z: stencil.apply_richardson(g, complex(z), h)
        sup = max(abs(deriv(z)) for z in sites)
        hol = max((abs(deriv(za) - deriv(zb)) / abs(za - zb) ** alpha
                   for za, zb in zip(pair_a, pair_b)), default=0.0)
        lhs = max(lhs, sup + (2 * radius) ** alpha * hol)

    return NormBoundReport(holds=lhs <= rhs, lhs=lhs, rhs=rhs, m=m,
                           alpha=alpha, constants=(C0, C4, C5))
