"""Closed-form kernels for the iterated disk transforms.

`c3(a, b, mu, nu)` is the kernel that turns the (mu + nu)-fold iterated
transform T^mu Tbar^nu into a single area integral; `c1` is its polynomial
log-companion part, `c2` the boundary residue sum, and `c8` the polydisc
tensor prefactor.  `g_diag` / `g_mixed` are the same kernels normalized for
the PDE solution formulas.

Every closed form here is derived from the residue calculus and held to the
defining integrals numerically: the oracle module quadrates each kernel's
left-hand side directly, and the acceptance suite pins the agreement.  The
explicit low-order kernels in `c3_special_cases` come from an independent
operator-identity decomposition and agree with `c3` to machine precision.

Conventions: area element dzbar^dz = 2i dx dy; the logarithm is evaluated as
log(R^2) + PrincipalLog(1 - a*conj(b)/R^2) - log|a - b|^2, whose argument
lies in the open right half-plane for interior points, so the principal
branch is continuous.

All functions are pure and broadcast over numpy arrays in `a` and/or `b`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoincidentPoints, DomainError, OrderTooLarge
from .geometry import MultiIndex

#: orders above this are rejected (factorials overflow usefulness at desk scale)
MAX_ORDER = 20

#: |a - b| below COINCIDENCE_EPS * R raises CoincidentPoints
COINCIDENCE_EPS = 1e-14

TWO_PI_I = 2j * np.pi


def _pascal_rows(n_max: int) -> list[list[int]]:
    rows = [[1]]
    for n in range(1, n_max + 1):
        prev = rows[-1]
        rows.append([1] + [prev[k - 1] + prev[k] for k in range(1, n)] + [1])
    return rows


_PASCAL = _pascal_rows(MAX_ORDER)


def binomial(n: int, k: int) -> int:
    """Binomial coefficient from the Pascal-recurrence table (n <= 20)."""
    if n < 0 or k < 0 or k > n:
        return 0
    if n > MAX_ORDER:
        raise OrderTooLarge(f"binomial order {n} exceeds cap {MAX_ORDER}")
    return _PASCAL[n][k]


def _check_order(name: str, value: int, minimum: int = 1) -> int:
    value = int(value)
    if value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    if value > MAX_ORDER:
        raise OrderTooLarge(f"{name}={value} exceeds cap {MAX_ORDER}")
    return value


def require_separated(a, b, radius: float, eps: float = COINCIDENCE_EPS):
    """Raise CoincidentPoints where |a - b| is below the relative epsilon."""
    gap = np.abs(np.asarray(a) - np.asarray(b))
    if np.any(gap < eps * radius):
        raise CoincidentPoints(
            f"|a-b| below {eps:g}*R; kernel not defined at coincidence")


def log_term(a, b, radius: float):
    """log((R^2 - a*conj(b)) / |a-b|^2) on the continuous principal branch."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return (2.0 * math.log(radius)
            + np.log(1.0 - a * np.conj(b) / radius**2)
            - 2.0 * np.log(np.abs(a - b)))


def c1(a, b, k: int):
    """Polynomial companion of the log kernel; c1(a, b, 1) == 0.

    Double sum over l = 1..k-1 of (-b^l / l) * sum_j C(k-1, j)
    * a^(k-1-l-j) * (-b)^j, the residue-series coefficients of the boundary
    log expansion.
    """
    k = _check_order("k", k)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    total = np.zeros(np.broadcast(a, b).shape, dtype=complex)
    for l in range(1, k):
        inner = sum(binomial(k - 1, j) * a ** (k - 1 - l - j) * (-b) ** j
                    for j in range(k - l))
        total = total + (-(b**l) / l) * inner
    return total if total.shape else complex(total)


def c2(a, b, l: int, nu: int, radius: float):
    """Residue value of the boundary integral of (zb-bb)^l (z-b)^(nu-1)/(z-a).

    Sum over 0 <= p <= l, 0 <= q <= nu-1 with p <= q of
    C(l,p) C(nu-1,q) R^(2p) (-conj(b))^(l-p) (-b)^(nu-1-q) a^(q-p).
    """
    l = _check_order("l", l)
    nu = _check_order("nu", nu)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    bb = np.conj(b)
    total = np.zeros(np.broadcast(a, b).shape, dtype=complex)
    for p in range(l + 1):
        for q in range(p, nu):
            total = total + (binomial(l, p) * binomial(nu - 1, q)
                             * radius ** (2 * p) * (-bb) ** (l - p)
                             * (-b) ** (nu - 1 - q) * a ** (q - p))
    return total if total.shape else complex(total)


def c3(a, b, mu: int, nu: int, radius: float):
    """Kernel of the single-integral form of T^mu Tbar^nu.

    2*pi*i * c3(a, b, mu, nu) equals the area integral over the R-disk of
    (zb - ab)^(mu-1) (z - b)^(nu-1) / ((z - a)(zb - bb)) dzbar^dz.
    """
    mu = _check_order("mu", mu)
    nu = _check_order("nu", nu)
    require_separated(a, b, radius)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    diff_bar = np.conj(b) - np.conj(a)
    total = diff_bar ** (mu - 1) * (c1(a, b, nu) + (a - b) ** (nu - 1) * log_term(a, b, radius))
    for l in range(1, mu):
        total = total + (binomial(mu - 1, l) * diff_bar ** (mu - 1 - l) / l
                         * (c2(a, b, l, nu, radius) - (-diff_bar) ** l * (a - b) ** (nu - 1)))
    return total if total.shape else complex(total)


def c8(mu: MultiIndex, nu: MultiIndex) -> complex:
    """Tensor prefactor (-1)^|mu| / ((mu-1)! (nu-1)! (2 pi i)^n)."""
    mu.require_positive()
    nu.require_positive().require_length(len(mu))
    n = len(mu)
    sign = -1.0 if mu.order % 2 else 1.0
    return complex(sign / (mu.shifted_factorial() * nu.shifted_factorial() * TWO_PI_I**n))


def g_diag(z, zeta, l: int):
    """Kernel of the pure power T^l: (-1)^l (zb - wb)^(l-1) / (2 pi i (l-1)! (zeta - z))."""
    l = _check_order("l", l)
    z = np.asarray(z, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    gap = np.abs(zeta - z)
    if np.any(gap == 0.0):
        raise CoincidentPoints("g_diag undefined at zeta == z")
    out = ((-1.0) ** l * (np.conj(zeta) - np.conj(z)) ** (l - 1)
           / (TWO_PI_I * math.factorial(l - 1) * (zeta - z)))
    return out if out.shape else complex(out)


def g_mixed(z, zeta, mu: int, nu: int, radius: float):
    """Kernel of the mixed power T^mu Tbar^nu (first index = T order)."""
    mu = _check_order("mu", mu)
    nu = _check_order("nu", nu)
    sign = -1.0 if mu % 2 else 1.0
    scale = sign / (TWO_PI_I * math.factorial(mu - 1) * math.factorial(nu - 1))
    out = scale * np.asarray(c3(z, zeta, mu, nu, radius))
    return out if out.shape else complex(out)


# ---------------------------------------------------------------------------
# Explicit low-order kernels, derived independently of the general formula by
# decomposing the defining integral against the exact polynomial moments
# (write zb-ab = (zb-bb) + (bb-ab) and z-b = (z-a) + (a-b), then use the
# closed moments of 1/(z-a), 1/(zb-bb) and their product).  Golden references
# for c3.
# ---------------------------------------------------------------------------

def _special_11(a, b, radius):
    return log_term(a, b, radius)


def _special_12(a, b, radius):
    return -b + (a - b) * log_term(a, b, radius)


def _special_21(a, b, radius):
    return (np.conj(b) - np.conj(a)) * log_term(a, b, radius) - np.conj(a)


def _special_22(a, b, radius):
    return (radius**2 - np.abs(a) ** 2 + 2 * np.conj(a) * b - np.abs(b) ** 2
            + (np.conj(b) - np.conj(a)) * (a - b) * log_term(a, b, radius))


#: (mu, nu) -> explicit kernel, for cross-checking the general c3
c3_special_cases = {
    (1, 1): _special_11,
    (1, 2): _special_12,
    (2, 1): _special_21,
    (2, 2): _special_22,
}


@dataclass(frozen=True)
class KernelQuery:
    """Validated point pair + orders for a kernel evaluation."""

    a: complex
    b: complex
    mu: int
    nu: int
    radius: float
    epsilon: float = COINCIDENCE_EPS

    def __post_init__(self):
        if self.radius <= 0 or not math.isfinite(self.radius):
            raise DomainError(f"radius must be positive, got {self.radius}")
        for name, point in (("a", self.a), ("b", self.b)):
            if abs(point) > self.radius * (1 + 1e-12):
                raise DomainError(f"{name}={point} outside the closed disk of radius {self.radius}")
        _check_order("mu", self.mu)
        _check_order("nu", self.nu)
        require_separated(self.a, self.b, self.radius, self.epsilon)

    def evaluate(self) -> complex:
        return complex(c3(self.a, self.b, self.mu, self.nu, self.radius))
