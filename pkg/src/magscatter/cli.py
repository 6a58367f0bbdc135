"""Command line: ``magscatter <command> [options]``.

Exit codes: 0 success, 1 computation error, 2 usage error.  Every failure
writes one JSON object ``{code, message, context}`` to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .amplitude import (
    cross_section,
    essential_spectrum_2d,
    essential_spectrum_3d,
    fibonacci_sphere,
    circle_frame_3d,
    singular_amplitude_2d,
    singular_amplitude_3d,
)
from .circulation import half_plane_flux_f, line_circulation_I, rotate_perp
from .errors import MagScatterError
from .fields import ConvexSection, FieldSpec, dump_field_config, load_field_config, total_flux_2d, _parse_value
from .gauge import (
    ShortRangePotential3D,
    decompose_potential,
    example_potential_3d,
    modified_ab_potential_3d,
)
from .numerics import DEFAULT_CONFIG, EpsilonSchedule
from .solenoid import (
    SolenoidGeometry,
    torus_flux_section,
    torus_g,
    torus_kappa,
    torus_spectrum,
)
from .verify import run_suite

COMMANDS = ("flux", "potential", "circulation", "amplitude2d", "amplitude3d", "spectrum",
            "crosssection", "solenoid", "verify")


class UsageError(Exception):
    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, prog=self.prog)


# ----------------------------------------------------------------------------
# Output


def fmt(x) -> str:
    """Float with 17 significant digits (round-trips exactly)."""
    return format(float(x), ".17g")


def to_json(obj) -> str:
    """JSON text with every float printed by :func:`fmt`; non-finite floats become null."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    return json.dumps(obj)


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return fmt(v)
    return str(v)


class Writer:
    """Collects records and writes them once, as JSONL or CSV."""

    def __init__(self, path, fmt_name):
        self.path = path
        self.format = fmt_name
        self.header = None
        self.rows = []

    def record(self, obj: dict):
        self.rows.append(obj)

    def table(self, header, rows):
        self.header = list(header)
        self.rows.extend(rows)

    def text(self) -> str:
        if self.header is not None and self.format == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\r\n")
            w.writerow(self.header)
            for r in self.rows:
                w.writerow([_cell(v) for v in r])
            return buf.getvalue()
        lines = []
        for r in self.rows:
            if self.header is not None:
                r = dict(zip(self.header, r))
            lines.append(to_json(r))
        return "".join(line + "\n" for line in lines)

    def flush(self, stdout):
        out = self.text()
        if self.path:
            with open(self.path, "w", encoding="utf-8", newline="") as fh:
                fh.write(out)
        else:
            stdout.write(out)


# ----------------------------------------------------------------------------
# Arguments


def _positive(name):
    def conv(raw):
        try:
            v = float(raw)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} expects a number, got {raw!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"{name} must be positive, got {raw!r}")
        return v
    return conv


def _count(name):
    def conv(raw):
        try:
            v = int(raw)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} expects an integer, got {raw!r}") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be at least 1, got {raw!r}")
        return v
    return conv


def _common(p, field=True, fmt_default="jsonl"):
    if field:
        p.add_argument("--field", help="catalog family name")
        p.add_argument("--config", help="field config file; wins over --field/--param")
        p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                       help="family parameter (repeatable); vectors as comma lists")
        p.add_argument("--dump-spec", action="store_true", help="echo the parsed field config and stop")
    p.add_argument("--abs-tol", type=_positive("--abs-tol"), default=DEFAULT_CONFIG.abs_tol)
    p.add_argument("--rel-tol", type=_positive("--rel-tol"), default=DEFAULT_CONFIG.rel_tol)
    p.add_argument("--output", "-o", help="output file (default stdout)")
    p.add_argument("--format", choices=("jsonl", "csv"), default=fmt_default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="magscatter", description="Magnetic potentials, circulations and scattering amplitudes.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("flux", help="total flux of a 2D field")
    _common(p)

    p = sub.add_parser("potential", help="sample a vector potential on a grid")
    _common(p, fmt_default="csv")
    p.add_argument("--gauge", choices=("transversal", "asymptotic", "regular", "short_range"), default="transversal")
    p.add_argument("--grid", type=_count("--grid"), default=8, help="points per axis")
    p.add_argument("--extent", type=_positive("--extent"), default=3.0, help="half width of the sampling box")

    p = sub.add_parser("circulation", help="half-plane flux f and I(omega, omega_plus)")
    _common(p, fmt_default="csv")
    p.add_argument("--omega-count", type=_count("--omega-count"), default=16)

    p = sub.add_parser("amplitude2d", help="2D singular amplitude kernel on a direction grid")
    _common(p)
    p.add_argument("--n", type=_count("--n"), default=8, help="number of directions")

    p = sub.add_parser("amplitude3d", help="3D principal-value kernel q on an (omega, tau) grid")
    _common(p)
    p.add_argument("--homogeneous", choices=("modified_ab", "example"),
                   help="use a closed-form homogeneous potential instead of --field")
    p.add_argument("--alpha", type=float, default=0.5, help="modified AB flux parameter")
    p.add_argument("--coeffs", default="1,-0.4,-0.6", help="example potential coefficients a1,a2,a3 (sum 0)")
    p.add_argument("--omega-count", type=_count("--omega-count"), default=4)
    p.add_argument("--tau-count", type=_count("--tau-count"), default=4)
    p.add_argument("--eps-start", type=_positive("--eps-start"), default=EpsilonSchedule.eps_start)
    p.add_argument("--eps-steps", type=_count("--eps-steps"), default=EpsilonSchedule.steps)

    p = sub.add_parser("spectrum", help="essential spectrum of the scattering matrix")
    _common(p)
    p.add_argument("--samples", type=_count("--samples"), default=128, help="2D direction samples")
    p.add_argument("--grid-size", type=_count("--grid-size"), default=32, help="3D direction grid")
    p.add_argument("--n-theta", type=_count("--n-theta"), default=64, help="3D circle samples")

    p = sub.add_parser("crosssection", help="2D forward cross section of the singular amplitude")
    _common(p, fmt_default="csv")
    p.add_argument("--lam", type=_positive("--lam"), default=1.0, help="energy")
    p.add_argument("--n", type=_count("--n"), default=16, help="number of angular separations")
    p.add_argument("--min-sep", type=_positive("--min-sep"), default=0.01)
    p.add_argument("--max-sep", type=_positive("--max-sep"), default=1.0)

    p = sub.add_parser("solenoid", help="toroidal solenoid report")
    _common(p, field=False)
    p.add_argument("--l", type=_positive("--l"), default=2.0, help="distance from the axis to the section centre")
    p.add_argument("--r", type=_positive("--r"), default=1.0, help="disc section radius")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--section", choices=("disc", "ellipse"), default="disc")
    p.add_argument("--a", type=_positive("--a"), help="ellipse semi-axis along rho")
    p.add_argument("--b", type=_positive("--b"), help="ellipse semi-axis along x3")
    p.add_argument("--z0", type=float, default=0.0, help="ellipse centre height")
    p.add_argument("--table-size", type=_count("--table-size"), default=11)

    p = sub.add_parser("verify", help="run the self-verification suites")
    p.add_argument("--suite", choices=("gauge", "circulation", "amplitude", "solenoid", "all"), default="all")
    p.add_argument("--output", "-o", help="output file (default stdout)")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    return parser


def _field_spec(args, dimension=None) -> FieldSpec:
    params = {}
    for item in args.param:
        if "=" not in item:
            raise UsageError(f"--param expects NAME=VALUE, got {item!r}", flag="--param")
        k, v = item.split("=", 1)
        params[k.strip()] = _parse_value(v)
    if args.config:
        spec = load_field_config(args.config)
        spec = FieldSpec(spec.dimension, spec.family, {**params, **spec.params})
    elif args.field:
        spec = FieldSpec.catalog(args.field, **params)
    else:
        raise UsageError("one of --field or --config is required", flag="--field")
    if dimension is not None and spec.dimension != dimension:
        raise UsageError(f"{args.command} needs a {dimension}D field, got {spec.family}", flag="--field")
    return spec


def _cfg(args):
    return DEFAULT_CONFIG.replace(abs_tol=args.abs_tol, rel_tol=args.rel_tol)


def _vec(w):
    return [float(t) for t in w]


# ----------------------------------------------------------------------------
# Commands


def cmd_flux(args, out):
    spec = _field_spec(args, 2)
    val, err = total_flux_2d(spec, _cfg(args))
    out.record({"flux": val, "error": err})


def cmd_potential(args, out):
    spec = _field_spec(args)
    cfg = _cfg(args)
    d = spec.dimension
    if args.gauge == "short_range":
        if d != 3:
            raise UsageError("--gauge short_range needs a 3D field", flag="--gauge")
        A, tag = ShortRangePotential3D(spec, cfg=cfg), "short_range_3d"
    else:
        dec = decompose_potential(spec, cfg)
        A = {"transversal": dec.full, "asymptotic": dec.a_inf, "regular": dec.a_reg}[args.gauge]
        tag = {"transversal": "transversal", "asymptotic": "a_inf", "regular": "a_reg"}[args.gauge]
    axis = np.linspace(-args.extent, args.extent, args.grid)
    grid = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    grid = grid[np.linalg.norm(grid, axis=1) > 0]
    vals = np.asarray(A(grid))
    names = ["x1", "x2", "x3"][:d] + ["A1", "A2", "A3"][:d] + ["gauge_tag"]
    out.table(names, [list(map(float, p)) + list(map(float, v)) + [tag] for p, v in zip(grid, vals)])


def cmd_circulation(args, out):
    spec = _field_spec(args, 2)
    cfg = _cfg(args)
    a_inf = decompose_potential(spec, cfg).a_inf
    rows = []
    for k in range(args.omega_count):
        th = 2 * math.pi * k / args.omega_count
        w = np.array([math.cos(th), math.sin(th)])
        f = half_plane_flux_f(spec, w, cfg)
        I = line_circulation_I(a_inf, w, rotate_perp(w)[0], cfg)
        rows.append([th, f, I, I - f])
    out.table(["omega_angle", "f", "I_plus", "defect"], rows)


def cmd_amplitude2d(args, out):
    spec = _field_spec(args, 2)
    amp = singular_amplitude_2d(spec, _cfg(args))
    out.record({"delta_coeff": amp.delta_coeff, "pv_coeff": amp.pv_coeff, "flux": amp.flux})
    th = 2 * math.pi * np.arange(args.n) / args.n
    ws = np.stack([np.cos(th), np.sin(th)], axis=-1)
    phases = np.asarray(amp.phase(th))
    for i, w in enumerate(ws):
        for j, wp in enumerate(ws):
            if i == j:
                continue
            det = w[0] * wp[1] - w[1] * wp[0]
            if abs(det) < 1e-15:
                continue
            val = np.exp(1j * phases[i]) * amp.pv_coeff * np.sign(det) / np.linalg.norm(w - wp)
            out.record({"omega": _vec(w), "omega_p": _vec(wp), "re": val.real, "im": val.imag})


def _a_inf_3d(args, cfg):
    if args.homogeneous == "modified_ab":
        return modified_ab_potential_3d(args.alpha)
    if args.homogeneous == "example":
        try:
            a = [float(t) for t in args.coeffs.split(",")]
        except ValueError:
            raise UsageError(f"--coeffs expects three numbers, got {args.coeffs!r}", flag="--coeffs") from None
        if len(a) != 3:
            raise UsageError(f"--coeffs expects three numbers, got {args.coeffs!r}", flag="--coeffs")
        return example_potential_3d(*a)
    return decompose_potential(_field_spec(args, 3), cfg).a_inf


def cmd_amplitude3d(args, out):
    cfg = _cfg(args)
    sched = EpsilonSchedule(eps_start=args.eps_start, steps=args.eps_steps)
    amp = singular_amplitude_3d(_a_inf_3d(args, cfg), cfg, sched)
    for w in fibonacci_sphere(args.omega_count):
        e1, e2 = circle_frame_3d(w)
        p = amp.p_av(w)
        out.record({"omega": _vec(w), "p_av_re": p.real, "p_av_im": p.imag})
        for k in range(args.tau_count):
            t = 2 * math.pi * (k + 0.5) / args.tau_count
            tau = math.cos(t) * e1 + math.sin(t) * e2
            q = amp.q_kernel(w, tau)
            out.record({"omega": _vec(w), "omega_p": _vec(w + tau), "tau": _vec(tau), "re": q.real, "im": q.imag})


def cmd_spectrum(args, out):
    cfg = _cfg(args)
    spec = _field_spec(args)
    if spec.dimension == 2:
        sp = essential_spectrum_2d(spec, args.samples, cfg)
    elif spec.family == "toroidal_solenoid_3d":
        sp = torus_spectrum(SolenoidGeometry.from_spec(spec))
    else:
        sp = essential_spectrum_3d(decompose_potential(spec, cfg).a_inf, args.grid_size, cfg, args.n_theta)
    out.record(sp.to_json())


def cmd_crosssection(args, out):
    spec = _field_spec(args, 2)
    amp = singular_amplitude_2d(spec, _cfg(args))
    seps = np.geomspace(args.min_sep, args.max_sep, args.n)
    w = np.array([1.0, 0.0])
    rows = []
    for s in seps:
        wp = np.array([math.cos(s), math.sin(s)])
        rows.append([float(s), cross_section(amp.kernel(w, wp), args.lam, 2)])
    out.table(["angle_sep", "sigma"], rows)


def cmd_solenoid(args, out):
    if args.section == "ellipse":
        if args.a is None or args.b is None:
            raise UsageError("--section ellipse needs --a and --b", flag="--section")
        geom = SolenoidGeometry(args.alpha, ConvexSection.ellipse(args.l, args.a, args.b, args.z0))
    else:
        if args.r >= args.l:
            raise UsageError("--r must be smaller than --l", flag="--r")
        geom = SolenoidGeometry.disc(args.l, args.r, args.alpha)
    cfg = _cfg(args)
    rep = torus_flux_section(geom, cfg)
    n = args.table_size
    z = np.linspace(geom.z1, geom.z2, n + 2)[1:-1]
    lo, hi = torus_kappa(z, geom.shape)
    g = torus_g(z, geom)
    out.record({
        "geometry": dict(geom.shape.params(), alpha=geom.alpha),
        "tangency": [geom.z1, geom.z2],
        "orientation": "section normal +e_phi (counterclockwise about x3)",
        "kappa": [{"z": a, "kappa_minus": b, "kappa_plus": c} for a, b, c in zip(z, lo, hi)],
        "g": [{"z": a, "g": b} for a, b in zip(z, g)],
        "U0": rep.U0,
        "Phi_s_quadrature": rep.phi_quadrature,
        "Phi_s_quadrature_error": rep.error,
        "Phi_s_minus_U0_defect": rep.defect,
        "spectrum": torus_spectrum(rep.phi_quadrature).to_json(),
    })


def cmd_verify(args, out):
    checks = run_suite(args.suite)
    out.table(["suite", "name", "defect", "threshold", "passed"],
              [[c.suite, c.name, c.defect, c.threshold, c.passed] for c in checks])
    return 0 if all(c.passed for c in checks) else 1


HANDLERS = {
    "flux": cmd_flux,
    "potential": cmd_potential,
    "circulation": cmd_circulation,
    "amplitude2d": cmd_amplitude2d,
    "amplitude3d": cmd_amplitude3d,
    "spectrum": cmd_spectrum,
    "crosssection": cmd_crosssection,
    "solenoid": cmd_solenoid,
    "verify": cmd_verify,
}


def _fail(stderr, code, message, context):
    stderr.write(to_json({"code": code, "message": message, "context": context}) + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "dump_spec", False):
            stdout.write(dump_field_config(_field_spec(args)))
            return 0
        out = Writer(args.output, args.format)
        status = HANDLERS[args.command](args, out) or 0
        out.flush(stdout)
        return status
    except UsageError as exc:
        _fail(stderr, "usage_error", exc.message, exc.context)
        return 2
    except MagScatterError as exc:
        d = exc.to_dict()
        _fail(stderr, d["code"], d["message"], d["context"])
        return 1
    except (ValueError, ArithmeticError, TypeError, OSError) as exc:
        _fail(stderr, type(exc).__name__, str(exc), {})
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
