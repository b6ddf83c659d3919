"""Solution assembly for d^mu dbar^nu u = A on the disk.

Solutions are parametrized by holomorphic free functions (restricted here to
polynomials, which are dense, have exact derivatives, and keep every term
computable by the closed-form kernels).  A solution value is one quadrature
pass per target point: the rule is centered on the target and the integrand
assembles all kernel groups at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonRealRHS
from .geometry import DiskDomain, wirtinger_split
from .kernels import c3, g_diag, g_mixed
from .operators import ScalarField, cached_area_rule
from .quadrature import DEFAULT_RESOLUTION, integrate

BIHARMONIC_IMAG_TOL = 1e-12


@dataclass(frozen=True)
class HolomorphicPolynomial:
    """Finite Taylor series at 0; identically anti-derivative-free in zbar."""

    coefficients: tuple[complex, ...]

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coefficients)
        if len(coeffs) > 21:
            raise DomainError("polynomial degree capped at 20")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def zero(cls) -> "HolomorphicPolynomial":
        return cls((0j,))

    @classmethod
    def monomial(cls, degree: int, coefficient: complex = 1.0) -> "HolomorphicPolynomial":
        return cls((0j,) * degree + (complex(coefficient),))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for c in reversed(self.coefficients):
            out = out * z + c
        return out if out.shape else complex(out)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)


@dataclass(frozen=True)
class SolutionSpec:
    """Orders, right-hand side, and free holomorphic data of one problem.

    g_list supplies the nu holomorphic terms (g_0..g_{nu-1}); f_list the mu
    conjugated terms (f_0..f_{mu-1}).  rhs may be None for the homogeneous
    problem.
    """

    mu: int
    nu: int
    rhs: ScalarField | None
    g_list: tuple[HolomorphicPolynomial, ...]
    f_list: tuple[HolomorphicPolynomial, ...]

    def __post_init__(self):
        if self.mu < 1 or self.nu < 1:
            raise DomainError("orders mu, nu must be >= 1")
        if len(self.g_list) != self.nu:
            raise DomainError(f"need exactly nu={self.nu} g-polynomials, got {len(self.g_list)}")
        if len(self.f_list) != self.mu:
            raise DomainError(f"need exactly mu={self.mu} f-polynomials, got {len(self.f_list)}")


def _domain_of(spec: SolutionSpec, domain: DiskDomain | None) -> DiskDomain:
    if spec.rhs is not None:
        return spec.rhs.domain
    if domain is None:
        raise DomainError("homogeneous problems need an explicit domain")
    return domain


def solve_pde(spec: SolutionSpec, domain: DiskDomain | None = None,
              resolution=DEFAULT_RESOLUTION):
    """Evaluator z -> u(z) with d^mu dbar^nu u = rhs.

    u = g_0(z) + integral of [ sum_{j=1}^{nu-1} G_j g_j + G_nu conj(f_0)
    + sum_{i=1}^{mu-1} G_{nu,i} conj(f_i) + G_{nu,mu} A ], where G_l is the
    pure-power kernel and G_{a,b} the mixed kernel; the composition T^nu
    Tbar^mu inverts dbar^nu d^mu up to the holomorphic data.
    """
    mu, nu = spec.mu, spec.nu
    dom = _domain_of(spec, domain)
    radius = dom.radius
    rhs = spec.rhs

    def u(z: complex) -> complex:
        z = complex(z)
        rule = cached_area_rule(dom, dom.validate_point(z), tuple(resolution))

        def group(w):
            total = np.zeros(w.shape, dtype=complex)
            for j in range(1, nu):
                gj = spec.g_list[j]
                if not gj.is_zero:
                    total = total + g_diag(z, w, j) * gj(w)
            f0 = spec.f_list[0]
            if not f0.is_zero:
                total = total + g_diag(z, w, nu) * np.conj(f0(w))
            for i in range(1, mu):
                fi = spec.f_list[i]
                if not fi.is_zero:
                    total = total + g_mixed(z, w, nu, i, radius) * np.conj(fi(w))
            if rhs is not None:
                total = total + g_mixed(z, w, nu, mu, radius) * rhs(w)
            return total

        return complex(spec.g_list[0](np.asarray(z)) + integrate(rule, group))

    return u


def solve_homogeneous(spec: SolutionSpec, domain: DiskDomain | None = None,
                      resolution=DEFAULT_RESOLUTION):
    """Evaluator for d^mu dbar^nu u = 0 built from the free holomorphic data."""
    if spec.rhs is not None:
        spec = SolutionSpec(spec.mu, spec.nu, None, spec.g_list, spec.f_list)
    return solve_pde(spec, domain, resolution)


def solve_biharmonic(rhs: ScalarField, h1: HolomorphicPolynomial,
                     h2: HolomorphicPolynomial, resolution=DEFAULT_RESOLUTION):
    """Evaluator z -> real u(z) with LaplacianSquared u = rhs (rhs real-valued).

    u = Re( (1/(32 pi i)) * integral of K22(z, w) rhs(w) dwbar^dw )
        + |z|^2 Re(h1(z)) + Re(h2(z)),

    where K22 is the (2,2) mixed kernel: the integral term is Re(T^2 Tbar^2
    rhs / 16) and LaplacianSquared = 16 d^2 dbar^2.  The harmonic parts are
    the real parts of the supplied holomorphic polynomials.
    """
    dom = rhs.domain
    if not isinstance(dom, DiskDomain):
        raise DomainError("biharmonic solver needs a disk right-hand side")
    radius = dom.radius

    def u(z: complex) -> float:
        z = complex(z)
        rule = cached_area_rule(dom, dom.validate_point(z), tuple(resolution))
        samples = np.asarray(rhs(rule.nodes), dtype=complex)
        if np.any(np.abs(samples.imag) > BIHARMONIC_IMAG_TOL):
            raise NonRealRHS("biharmonic right-hand side must be real-valued")
        kernel = c3(z, rule.nodes, 2, 2, radius)
        integral = np.sum(rule.weights * kernel * samples) / (32j * np.pi)
        har = abs(z) ** 2 * complex(h1(np.asarray(z))).real + complex(h2(np.asarray(z))).real
        return float(integral.real + har)

    return u


def fd_residual(u, mu: int, nu: int, rhs: ScalarField, points,
                h: float | None = None, richardson: bool = True) -> np.ndarray:
    """|FD[d^mu dbar^nu] u(z) - rhs(z)| at each target point.

    Step defaults to (1e-12)^(1/(mu+nu+2)) * R, balancing truncation against
    quadrature noise in the sampled values.
    """
    dom = rhs.domain
    if not isinstance(dom, DiskDomain):
        raise DomainError("fd_residual needs a disk right-hand side")
    stencil = wirtinger_split(mu, nu)
    step = h if h is not None else (1e-12) ** (1.0 / (mu + nu + 2)) * dom.radius

    def u_vec(zarr):
        zarr = np.atleast_1d(np.asarray(zarr, dtype=complex))
        return np.array([u(complex(zz)) for zz in zarr.ravel()],
                        dtype=complex).reshape(zarr.shape)

    out = []
    for z in points:
        z = complex(z)
        stencil.check_inside(dom, z, step)
        if richardson:
            val = stencil.apply_richardson(u_vec, z, step)
        else:
            val = stencil.apply(u_vec, z, step)
        out.append(abs(val - complex(rhs(np.asarray(z)))))
    return np.array(out)
