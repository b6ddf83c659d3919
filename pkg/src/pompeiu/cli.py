"""Command-line surface: kernel evaluation, operator application, solving,
verification suites, and grid export.

Complex values print as `re±imi` with 15 significant digits.  Grid output is
CSV (`x,y,re,im`, header row, row-major) or JSON with a config echo.  Usage
errors exit 2, numeric failures exit 1, and `verify` exits nonzero when any
property fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field as dataclass_field, replace

import numpy as np

from . import kernels, operators, oracle, solver
from .errors import PompeiuError
from .expressions import parse_complex, parse_expression, to_coefficients
from .geometry import DiskDomain, MultiIndex, PolydiscDomain
from .operators import (ScalarField, apply_2T, apply_2Tbar, apply_conjugate_dual,
                        apply_mixed, apply_polydisc, apply_S, apply_Sbar, apply_T,
                        apply_T_power, apply_Tbar, apply_Tbar_power,
                        evaluate_on_grid, field_from_expression)


def format_complex(z: complex) -> str:
    z = complex(z)
    sign = "-" if z.imag < 0 else "+"
    return f"{z.real:.15g}{sign}{abs(z.imag):.15g}i"


@dataclass(frozen=True)
class RunConfig:
    radius: float = 1.0
    n_radial: int = 64
    n_angular: int = 128
    contour_count: int = 256
    tolerances: dict = dataclass_field(default_factory=dict)
    output: str | None = None
    seed: int = 0

    @property
    def resolution(self) -> tuple[int, int]:
        return (self.n_radial, self.n_angular)

    @classmethod
    def from_json(cls, path: str) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    def tolerance(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig.from_json(args.config) if getattr(args, "config", None) else RunConfig()
    overrides = {}
    for attr, key in (("R", "radius"), ("nr", "n_radial"), ("ntheta", "n_angular"),
                      ("contour_n", "contour_count"), ("seed", "seed"), ("out", "output")):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
    return replace(cfg, **overrides) if overrides else cfg


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--R", type=float, default=None, help="disk radius")
    p.add_argument("--nr", type=int, default=None, help="radial quadrature nodes")
    p.add_argument("--ntheta", type=int, default=None, help="angular quadrature nodes")
    p.add_argument("--contour-n", dest="contour_n", type=int, default=None,
                   help="contour rule node count")
    p.add_argument("--config", default=None, help="JSON RunConfig file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="output path (default: stdout)")


def _multi_index(text: str) -> MultiIndex:
    return MultiIndex(tuple(int(part) for part in text.split(",")))


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="pmp", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    kern = sub.add_parser("kernel", help="evaluate closed-form kernels")
    kern_sub = kern.add_subparsers(dest="action", required=True)
    ke = kern_sub.add_parser("eval")
    ke.add_argument("--kind", choices=["c1", "c2", "c3", "c8", "gdiag", "gmixed"], default="c3")
    ke.add_argument("--a", default="0", help="target point (z)")
    ke.add_argument("--b", default="0", help="source point (eta/zeta)")
    ke.add_argument("--mu", default="1")
    ke.add_argument("--nu", default="1")
    ke.add_argument("--k", type=int, default=1, help="order for c1/gdiag")
    ke.add_argument("--l", type=int, default=1, help="first order for c2")
    _add_common(ke)

    op = sub.add_parser("op", help="apply transforms to a field")
    op_sub = op.add_subparsers(dest="action", required=True)
    oa = op_sub.add_parser("apply")
    oa.add_argument("--op", required=True,
                    choices=["T", "Tbar", "S", "Sbar", "2T", "2Tbar", "mixed", "dual", "polydisc"])
    oa.add_argument("--f", required=True, help="field expression")
    oa.add_argument("--z", required=True, help="target point (comma list on the polydisc)")
    oa.add_argument("--power", type=int, default=1, help="iterate T/Tbar this many times")
    oa.add_argument("--mu", default="1")
    oa.add_argument("--nu", default="1")
    oa.add_argument("--n", type=int, default=1, help="polydisc factor count")
    oa.add_argument("--alpha", type=float, default=0.5)
    _add_common(oa)

    so = sub.add_parser("solve", help="assemble a solution of d^mu dbar^nu u = A")
    so.add_argument("--mu", type=int, default=1)
    so.add_argument("--nu", type=int, default=1)
    so.add_argument("--rhs", default=None, help="right-hand side expression (omit: homogeneous)")
    so.add_argument("--g", action="append", default=None, help="g_j expression (repeat nu times)")
    so.add_argument("--f", action="append", default=None, help="f_i expression (repeat mu times)")
    so.add_argument("--biharmonic", action="store_true",
                    help="solve LaplacianSquared u = rhs with harmonic parts --h1/--h2")
    so.add_argument("--h1", default="0")
    so.add_argument("--h2", default="0")
    so.add_argument("--z", default=None, help="evaluate at this point")
    so.add_argument("--grid", type=int, default=None, help="export an N x N grid")
    so.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_common(so)

    ve = sub.add_parser("verify", help="run a seeded property suite")
    ve.add_argument("--suite", required=True, choices=["kernels", "operators", "pde", "norms"])
    _add_common(ve)

    ex = sub.add_parser("export", help="sample a field or transform on a grid")
    ex.add_argument("--f", required=True, help="field expression")
    ex.add_argument("--op", default=None,
                    choices=["T", "Tbar", "mixed"], help="transform to apply at each grid point")
    ex.add_argument("--mu", type=int, default=1)
    ex.add_argument("--nu", type=int, default=1)
    ex.add_argument("--grid", type=int, default=17)
    ex.add_argument("--extent", type=float, default=0.95)
    ex.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_common(ex)
    return top


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommand bodies
# ---------------------------------------------------------------------------

def _cmd_kernel(args, cfg: RunConfig) -> int:
    a, b = parse_complex(args.a), parse_complex(args.b)
    R = cfg.radius
    kind = args.kind
    if kind == "c1":
        value = kernels.c1(a, b, args.k)
    elif kind == "c2":
        value = kernels.c2(a, b, args.l, int(args.nu), R)
    elif kind == "c3":
        value = kernels.KernelQuery(a, b, int(args.mu), int(args.nu), R).evaluate()
    elif kind == "c8":
        value = kernels.c8(_multi_index(args.mu), _multi_index(args.nu))
    elif kind == "gdiag":
        value = kernels.g_diag(a, b, args.k)
    else:
        value = kernels.g_mixed(a, b, int(args.mu), int(args.nu), R)
    _emit(format_complex(value) + "\n", cfg)
    return 0


def _cmd_op(args, cfg: RunConfig) -> int:
    R, res = cfg.radius, cfg.resolution
    if args.op == "polydisc":
        domain = PolydiscDomain(args.n, R)
        f = field_from_expression(args.f, domain, args.alpha)
        z = tuple(parse_complex(part) for part in args.z.split(","))
        # per-factor rules default smaller than the disk resolution; explicit
        # flags override
        poly_res = (args.nr, args.ntheta) if args.nr and args.ntheta \
            else operators.POLYDISC_RESOLUTION
        value = apply_polydisc(f, z, _multi_index(args.mu), _multi_index(args.nu), poly_res)
        _emit(format_complex(value) + "\n", cfg)
        return 0

    domain = DiskDomain(R)
    f = field_from_expression(args.f, domain, args.alpha)
    z = parse_complex(args.z)
    if args.op in ("T", "Tbar") and args.power > 1:
        fn = apply_T_power if args.op == "T" else apply_Tbar_power
        value = fn(f, z, args.power, res)
    elif args.op == "T":
        value = apply_T(f, z, res)
    elif args.op == "Tbar":
        value = apply_Tbar(f, z, res)
    elif args.op == "S":
        value = apply_S(f, z, cfg.contour_count)
    elif args.op == "Sbar":
        value = apply_Sbar(f, z, cfg.contour_count)
    elif args.op == "2T":
        value = apply_2T(f, z, res)
    elif args.op == "2Tbar":
        value = apply_2Tbar(f, z, res)
    elif args.op == "mixed":
        value = apply_mixed(f, z, int(args.mu), int(args.nu), res)
    else:
        value = apply_conjugate_dual(f, z, int(args.mu), int(args.nu), res)
    _emit(format_complex(value) + "\n", cfg)
    return 0


def _grid_text(grid, fmt: str) -> str:
    return grid.to_csv_text() if fmt == "csv" else grid.to_json_text()


def _cmd_solve(args, cfg: RunConfig) -> int:
    domain = DiskDomain(cfg.radius)
    if args.biharmonic:
        if args.rhs is None:
            raise PompeiuError("--biharmonic needs --rhs")
        rhs = field_from_expression(args.rhs, domain)
        h1 = _poly_from_expression(args.h1)
        h2 = _poly_from_expression(args.h2)
        u = solver.solve_biharmonic(rhs, h1, h2, cfg.resolution)
    else:
        mu, nu = args.mu, args.nu
        g_texts = args.g if args.g is not None else ["0"] * nu
        f_texts = args.f if args.f is not None else ["0"] * mu
        spec = solver.SolutionSpec(
            mu=mu, nu=nu,
            rhs=None if args.rhs is None else field_from_expression(args.rhs, domain),
            g_list=tuple(_poly_from_expression(t) for t in g_texts),
            f_list=tuple(_poly_from_expression(t) for t in f_texts),
        )
        u = solver.solve_pde(spec, domain, cfg.resolution)

    if args.grid is not None:
        config_echo = {"radius": cfg.radius, "resolution": list(cfg.resolution),
                       "seed": cfg.seed, "command": "solve"}
        grid = evaluate_on_grid(u, domain, args.grid, config=config_echo)
        _emit(_grid_text(grid, args.format), cfg)
        return 0
    if args.z is None:
        raise PompeiuError("solve needs --z or --grid")
    _emit(format_complex(u(parse_complex(args.z))) + "\n", cfg)
    return 0


def _poly_from_expression(text: str) -> solver.HolomorphicPolynomial:
    coeffs = to_coefficients(parse_expression(text), 1)
    degree = 0
    for ((p, q),) in coeffs:
        if q != 0:
            raise PompeiuError(f"free functions must be holomorphic; {text!r} uses zbar")
        degree = max(degree, p)
    dense = [0j] * (degree + 1)
    for ((p, _),), v in coeffs.items():
        dense[p] = v
    return solver.HolomorphicPolynomial(tuple(dense))


def _cmd_export(args, cfg: RunConfig) -> int:
    domain = DiskDomain(cfg.radius)
    f = field_from_expression(args.f, domain)
    res = cfg.resolution
    if args.op is None:
        func = lambda z: complex(f(np.asarray(z)))
    elif args.op == "T":
        func = lambda z: apply_T(f, z, res)
    elif args.op == "Tbar":
        func = lambda z: apply_Tbar(f, z, res)
    else:
        func = lambda z: apply_mixed(f, z, args.mu, args.nu, res)
    config_echo = {"radius": cfg.radius, "resolution": list(res), "seed": cfg.seed,
                   "field": f.description, "op": args.op or "none", "command": "export"}
    grid = evaluate_on_grid(func, domain, args.grid, args.extent, config=config_echo)
    _emit(_grid_text(grid, args.format), cfg)
    return 0


# ---------------------------------------------------------------------------
# Verification suites
# ---------------------------------------------------------------------------

def _suite_kernels(cfg: RunConfig, report) -> int:
    rng = np.random.default_rng(cfg.seed)
    R = cfg.radius
    failures = 0
    tol = cfg.tolerance("kernel_oracle", 1e-4)
    for trial in range(4):
        a, b = _separated_pair(rng, R)
        for mu, nu in ((1, 1), (2, 1), (1, 2), (2, 2)):
            lhs = oracle.lemma_lhs_quadrature("lem6", a, b, (mu, nu), R, cfg.resolution)
            rhs = 2j * np.pi * kernels.c3(a, b, mu, nu, R)
            err = abs(lhs - rhs) / max(1.0, abs(lhs))
            failures += report(err <= tol, f"kernel c3({mu},{nu}) vs quadrature", err)
    for l in (1, 2):
        for nu in (1, 2):
            a, b = _separated_pair(rng, R)
            lhs = oracle.lemma_lhs_quadrature("lem5", a, b, (l, nu), R,
                                              contour_count=cfg.contour_count)
            rhs = 2j * np.pi * kernels.c2(a, b, l, nu, R)
            failures += report(abs(lhs - rhs) <= cfg.tolerance("contour", 1e-10),
                               f"kernel c2({l},{nu}) vs contour", abs(lhs - rhs))
    for (mu, nu), special in kernels.c3_special_cases.items():
        a, b = _separated_pair(rng, R)
        err = abs(special(a, b, R) - kernels.c3(a, b, mu, nu, R))
        failures += report(err <= cfg.tolerance("special", 1e-12),
                           f"explicit kernel ({mu},{nu}) vs general", err)
    return failures


def _suite_operators(cfg: RunConfig, report) -> int:
    rng = np.random.default_rng(cfg.seed)
    R = cfg.radius
    domain = DiskDomain(R)
    failures = 0
    for l in range(4):
        z = _interior_point(rng, 0.7 * R)
        f = ScalarField(lambda w, l=l: np.conj(w) ** l, domain, 0.5, f"zbar^{l}")
        got = apply_T(f, z, cfg.resolution)
        want = np.conj(z) ** (l + 1) / (l + 1)
        err = abs(got - want) / max(1.0, abs(want))
        failures += report(err <= cfg.tolerance("golden", 1e-8), f"T(zbar^{l}) golden", err)
    poly = oracle.PolynomialField(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    f = poly.to_field(domain)
    dbar = oracle.wirtinger_exact(poly, 0, 1).to_field(domain)
    for _ in range(3):
        z = _interior_point(rng, 0.6 * R)
        got = apply_T(dbar, z, cfg.resolution) + apply_S(f, z, cfg.contour_count)
        err = abs(got - complex(poly(np.asarray(z))))
        failures += report(err <= cfg.tolerance("interior_identity", 1e-7),
                           "T dbar f + S f = f", err)
    return failures


def _suite_pde(cfg: RunConfig, report) -> int:
    rng = np.random.default_rng(cfg.seed)
    domain = DiskDomain(cfg.radius)
    failures = 0
    rhs = operators.constant_field(4.0, domain)
    spec = solver.SolutionSpec(1, 1, rhs, (solver.HolomorphicPolynomial.zero(),),
                               (solver.HolomorphicPolynomial.zero(),))
    u = solver.solve_pde(spec, resolution=cfg.resolution)
    pts = [_interior_point(rng, 0.5 * cfg.radius) for _ in range(3)]
    res = solver.fd_residual(u, 1, 1, rhs, pts)
    failures += report(float(np.max(res)) <= cfg.tolerance("pde_residual", 4e-2),
                       "d dbar u = 4 residual", float(np.max(res)))
    return failures


def _suite_norms(cfg: RunConfig, report) -> int:
    rng = np.random.default_rng(cfg.seed)
    domain = DiskDomain(cfg.radius)
    failures = 0
    for alpha in (0.25, 0.5, 0.75):
        coeffs = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        f = oracle.PolynomialField(coeffs).to_field(domain, alpha)
        rep = oracle.check_norm_bound(f, 1, 1, alpha, resolution=(24, 48),
                                      sup_points=4, pairs=4, seed=cfg.seed)
        failures += report(rep.holds, f"norm bound alpha={alpha}", rep.lhs / rep.rhs)
    return failures


def _separated_pair(rng, R: float):
    while True:
        a = _interior_point(rng, 0.8 * R)
        b = _interior_point(rng, 0.8 * R)
        if abs(a - b) >= 0.05 * R:
            return a, b


def _interior_point(rng, radius: float) -> complex:
    return complex(radius * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()))


def _cmd_verify(args, cfg: RunConfig) -> int:
    lines = []

    def report(ok: bool, name: str, measure) -> int:
        lines.append(f"{'PASS' if ok else 'FAIL'} {name} ({measure:.3g})")
        return 0 if ok else 1

    suite = {"kernels": _suite_kernels, "operators": _suite_operators,
             "pde": _suite_pde, "norms": _suite_norms}[args.suite]
    failures = suite(cfg, report)
    _emit("\n".join(lines) + "\n", cfg)
    return 1 if failures else 0


def run_command(argv) -> int:
    """Parse argv and execute; returns the process exit status."""
    args = build_parser().parse_args(argv)
    cfg = _config_from_args(args)
    try:
        if args.command == "kernel":
            return _cmd_kernel(args, cfg)
        if args.command == "op":
            return _cmd_op(args, cfg)
        if args.command == "solve":
            return _cmd_solve(args, cfg)
        if args.command == "verify":
            return _cmd_verify(args, cfg)
        if args.command == "export":
            return _cmd_export(args, cfg)
    except PompeiuError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
