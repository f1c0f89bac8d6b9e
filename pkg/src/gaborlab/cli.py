"""Command-line front end: analyses, sweeps, and report emission.

Batch semantics, deterministic artifacts: identical configs produce
byte-identical JSON and CSV. Exit codes: 1 invalid configuration,
2 density gate violation, 3 accuracy or resource failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .dual_window import dual_norms, gamma_time, solve_coefficients
from .elliptic import build_context, growth_constant
from .errors import ConfigError, GaborlabError
from .frame import analyze, janssen_bounds, lower_bound_estimate, wexler_raz_residual
from .hermite_bargmann import SampledSignal, default_grid, hermite_signal, stft_time_quadrature
from .lattice import Lattice2D, from_generators, rect, scale, square
from .zak import half_integer_criterion, zak_transform

_PLUMBING = "plumbing"


class _Parser(argparse.ArgumentParser):
    """argparse terminates with code 2 on usage errors; we reserve 2 for
    the density gate, so usage errors are remapped to ConfigError."""

    def error(self, message):
        raise ConfigError(message)


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: subcommand plus its validated options."""

    command: str
    options: dict

    def echo(self) -> dict:
        out = {"command": self.command}
        for key, val in self.options.items():
            out[key] = val
        return out


def _parse_floats(text: str, count: int, flag: str):
    parts = text.split(",")
    if len(parts) != count:
        raise ConfigError(f"{flag} expects {count} comma-separated values")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"{flag}: {exc}") from None


def _build_lattice(opts: dict) -> Lattice2D:
    given = [k for k in ("lattice", "rect", "square") if opts.get(k)]
    if len(given) > 1:
        raise ConfigError("lattice flags are mutually exclusive: "
                          + ", ".join("--" + g for g in given))
    if not given:
        raise ConfigError("one of --lattice, --rect, --square is required")
    kind = given[0]
    if kind == "lattice":
        a11, a12, a21, a22 = _parse_floats(opts["lattice"], 4, "--lattice")
        L = from_generators(np.array([[a11, a12], [a21, a22]]))
    elif kind == "rect":
        a, b = _parse_floats(opts["rect"], 2, "--rect")
        L = rect(a, b)
    else:
        L = square(float(opts["square"]))
    q = opts.get("scale")
    if q is not None:
        L = scale(L, float(q))
    return L


def _fmt(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def _write_csv(path: str, provenance: dict, header, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for key in sorted(provenance):
            fh.write(f"# {key}: {provenance[key]}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _emit_json(obj: dict, path: str = None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_analyze(cfg: RunConfig) -> int:
    o = cfg.options
    L = _build_lattice(o)
    rep = analyze(L, int(o["n"]), radius=float(o["radius"]),
                  reconstruction_radius=o.get("reconstruct"))
    doc = rep.to_json_dict()
    doc["config"] = cfg.echo()
    _emit_json(doc, o.get("json"))
    if o.get("csv"):
        flat = {k: v for k, v in doc.items()
                if isinstance(v, (int, float, str)) and v is not None}
        _write_csv(o["csv"],
                   {"tool": f"gaborlab {__version__}",
                    "report": "frame-report/1"},
                   ["key", "value"],
                   [(k, flat[k]) for k in sorted(flat)])
    return 0


def _cmd_dual(cfg: RunConfig) -> int:
    o = cfg.options
    L = _build_lattice(o)
    n = int(o["n"])
    model = solve_coefficients(L, n)
    j = n if o.get("j") is None else int(o["j"])
    if not 0 <= j <= n:
        raise ConfigError(f"--j must lie in [0, {n}]")
    tmax = float(o["tmax"])
    dt = float(o["dt"])
    if tmax <= 0 or dt <= 0:
        raise ConfigError("--tmax and --dt must be positive")
    t = np.arange(-tmax, tmax + dt / 2, dt)
    gj = gamma_time(model, j, t)
    l2, m1_bound, m1_quad = dual_norms(model, j)
    wr = wexler_raz_residual(model, float(o["radius"]))
    doc = {
        "schema": "dual-window/1",
        "n": n,
        "j": j,
        "lattice": L.to_json_dict(),
        "rho": model.rho,
        "kappa": model.kappa_decay,
        "norms": {"l2": l2, "m1_quadrature": m1_quad, "m1_bound": m1_bound},
        "residuals": {"wexler_raz": wr},
        "provenance": {
            "norms": "Bargmann-domain quadrature with certified tails",
            "residuals": "Wexler-Raz biorthogonality on the adjoint lattice",
            "samples": "inverse Bargmann transform of the sigma-power dual",
        },
        "config": cfg.echo(),
    }
    _emit_json(doc, o.get("json"))
    if o.get("csv"):
        sig = SampledSignal(gj, float(t[0]), dt)
        sig.to_csv(
            o["csv"],
            tool=f"gaborlab {__version__}",
            content=f"dual window component j={j} of n={n}",
            lattice=json.dumps(L.to_json_dict(), sort_keys=True),
        )
    return 0


def _cmd_sweep(cfg: RunConfig) -> int:
    o = cfg.options
    base = square(float(o["base_square"]))
    q0, q1 = float(o["scale_from"]), float(o["scale_to"])
    steps = int(o["steps"])
    if steps < 2:
        raise ConfigError("--steps must be at least 2")
    if not (0 < q0 < q1):
        raise ConfigError("--scale-from/--scale-to must satisfy 0 < from < to")
    n = int(o["n"])
    rows = []
    for q in np.linspace(q0, q1, steps):
        L = scale(base, float(q))
        model = solve_coefficients(L, n)
        est = lower_bound_estimate(model)
        for j in range(n + 1):
            l2, m1_bound, m1_quad = dual_norms(model, j)
            rows.append((float(q), L.area, model.rho, j,
                         l2, m1_quad, m1_bound, est))
    header = ["q", "s", "rho", "j", "l2_norm", "m1_quadrature",
              "m1_bound", "lower_bound_estimate"]
    prov = {
        "tool": f"gaborlab {__version__}",
        "content": "dual-window norm sweep over scaled lattices",
        "lower_bound_estimate":
            "inverse packing count over squared dual M1 norm (kappa=1)",
        "norms": "Bargmann-domain quadrature with certified tails",
    }
    if o.get("csv"):
        _write_csv(o["csv"], prov, header, rows)
    doc = {
        "schema": "sweep/1",
        "n": n,
        "rows": [dict(zip(header, row)) for row in rows],
        "provenance": prov,
        "config": cfg.echo(),
    }
    _emit_json(doc, o.get("json"))
    return 0


def _cmd_zak_check(cfg: RunConfig) -> int:
    o = cfg.options
    n = int(o["n"])
    a = float(o["a"])
    nx, nxi = (int(v) for v in _parse_floats(o["grid"], 2, "--grid"))
    inf_val, sup_val, is_frame = half_integer_criterion(n, a, nx, nxi)
    doc = {
        "schema": "zak-check/1",
        "n": n,
        "a": a,
        "b": 0.5 / a,
        "grid": [nx, nxi],
        "inf": inf_val,
        "sup": sup_val,
        "is_frame": is_frame,
        "threshold": 1e-6,
        "provenance": {
            "criterion": "Zak multiplication-operator criterion at ab = 1/2",
            "threshold": _PLUMBING,
        },
        "config": cfg.echo(),
    }
    _emit_json(doc, o.get("json"))
    if o.get("csv"):
        from .zak import _zak_values

        x = a * np.arange(nx) / nx
        xi = np.arange(nxi) / nxi
        z1 = _zak_values(n, a, x, xi)
        z2 = _zak_values(n, a, x - a / 2.0, xi)
        m = np.abs(z1) ** 2 + np.abs(z2) ** 2
        rows = ((float(x[i]), float(xi[jj]), float(m[i, jj]))
                for i in range(nx) for jj in range(nxi))
        _write_csv(o["csv"],
                   {"tool": f"gaborlab {__version__}",
                    "content": f"Zak criterion surface for H_{n}, a={a:g}"},
                   ["x", "xi", "m"], rows)
    return 0


def _cmd_elliptic_check(cfg: RunConfig) -> int:
    o = cfg.options
    L = _build_lattice(o)
    ctx = build_context(L, tol=float(o["tol"]))
    legendre = abs(ctx.eta1 * ctx.lattice.omega2
                   - ctx.eta2 * ctx.lattice.omega1 - 2j * np.pi)
    doc = {
        "schema": "elliptic-check/1",
        "lattice": L.to_json_dict(),
        "eta1": [ctx.eta1.real, ctx.eta1.imag],
        "eta2": [ctx.eta2.real, ctx.eta2.imag],
        "legendre_residual": float(legendre),
        "alpha": ctx.alpha,
        "a_const": [ctx.a_const.real, ctx.a_const.imag],
        "growth_constant": growth_constant(ctx),
        "provenance": {
            "legendre_residual": "Legendre relation",
            "growth_constant":
                "sup of the modified sigma envelope over the fundamental cell",
            "eta": "quasi-period increments of the Weierstrass zeta function",
        },
        "config": cfg.echo(),
    }
    _emit_json(doc, o.get("json"))
    return 0


def _cmd_stft(cfg: RunConfig) -> int:
    o = cfg.options
    n = int(o["n"])
    if o.get("input"):
        sig = SampledSignal.from_csv(o["input"])
    else:
        sig = hermite_signal(int(o["signal_order"]))
    xmax, ximax, nx, nxi = _parse_floats(o["grid"], 4, "--grid")
    nx, nxi = int(nx), int(nxi)
    if nx < 2 or nxi < 2 or xmax <= 0 or ximax <= 0:
        raise ConfigError("--grid expects xmax,ximax,nx,nxi with "
                          "positive extents and sizes at least 2")
    xs = np.linspace(-xmax, xmax, nx)
    xis = np.linspace(-ximax, ximax, nxi)
    rows = []
    for x in xs:
        for xi in xis:
            val = stft_time_quadrature(sig, n, complex(x, xi))
            rows.append((float(x), float(xi), abs(val)))
    _write_csv(o["csv"],
               {"tool": f"gaborlab {__version__}",
                "content":
                    f"STFT magnitude against the order-{n} Hermite window"},
               ["x", "xi", "magnitude"], rows)
    return 0


_HANDLERS = {
    "analyze": _cmd_analyze,
    "dual": _cmd_dual,
    "sweep": _cmd_sweep,
    "zak-check": _cmd_zak_check,
    "elliptic-check": _cmd_elliptic_check,
    "stft": _cmd_stft,
}


def _add_lattice_flags(p) -> None:
    p.add_argument("--lattice", help="generator matrix a11,a12,a21,a22")
    p.add_argument("--rect", help="rectangular lattice aZ x bZ as a,b")
    p.add_argument("--square", type=float, help="square lattice of area s")
    p.add_argument("--scale", type=float,
                   help="multiply the chosen lattice by q")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gaborlab",
                     description="Gabor frame analysis with Hermite windows")
    parser.add_argument("--version", action="version",
                        version=f"gaborlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full frame certification report")
    _add_lattice_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--radius", type=float, default=3.0)
    p.add_argument("--reconstruct", type=float, default=None,
                   help="also run reconstruction truncated at this radius")
    p.add_argument("--json", help="report path (default stdout)")
    p.add_argument("--csv", help="flat key,value report copy")
    p.add_argument("--config", help="JSON file overriding flags")

    p = sub.add_parser("dual", help="construct a dual window")
    _add_lattice_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, default=None,
                   help="component index (default n)")
    p.add_argument("--tmax", type=float, default=6.0)
    p.add_argument("--dt", type=float, default=1.0 / 64.0)
    p.add_argument("--radius", type=float, default=3.0,
                   help="Wexler-Raz residual radius")
    p.add_argument("--json", help="header path (default stdout)")
    p.add_argument("--csv", help="sample path (t, re, im)")
    p.add_argument("--config", help="JSON file overriding flags")

    p = sub.add_parser("sweep", help="dual norms over scaled lattices")
    p.add_argument("--base-square", dest="base_square", type=float,
                   required=True, help="area of the base square lattice")
    p.add_argument("--scale-from", dest="scale_from", type=float, required=True)
    p.add_argument("--scale-to", dest="scale_to", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", help="row dump path (default stdout)")
    p.add_argument("--csv", help="plot-ready sweep table")
    p.add_argument("--config", help="JSON file overriding flags")

    p = sub.add_parser("zak-check", help="half-integer density Zak criterion")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--grid", default="512,512", help="nx,nxi")
    p.add_argument("--json", help="verdict path (default stdout)")
    p.add_argument("--csv", help="criterion surface dump")
    p.add_argument("--config", help="JSON file overriding flags")

    p = sub.add_parser("elliptic-check", help="lattice constants diagnostic")
    _add_lattice_flags(p)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--json", help="output path (default stdout)")
    p.add_argument("--config", help="JSON file overriding flags")

    p = sub.add_parser("stft", help="STFT magnitude grid for plotting")
    p.add_argument("--n", type=int, default=0, help="Hermite window order")
    p.add_argument("--signal-order", dest="signal_order", type=int, default=0,
                   help="Hermite order of the input signal")
    p.add_argument("--input", help="sampled input signal CSV (t, re, im)")
    p.add_argument("--grid", default="3,3,61,61", help="xmax,ximax,nx,nxi")
    p.add_argument("--csv", required=True, help="magnitude grid path")
    p.add_argument("--config", help="JSON file overriding flags")
    return parser


def parse_config(argv) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    opts = vars(ns)
    command = opts.pop("command")
    cfg_path = opts.pop("config", None)
    if cfg_path:
        try:
            with open(cfg_path, encoding="utf-8") as fh:
                overrides = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"--config: {exc}") from None
        if not isinstance(overrides, dict):
            raise ConfigError("--config must contain a JSON object")
        for key, val in overrides.items():
            attr = key.replace("-", "_")
            if attr not in opts:
                raise ConfigError(f"--config: unknown option {key!r}")
            opts[attr] = val
    return RunConfig(command=command, options=opts)


def run(config: RunConfig) -> int:
    return _HANDLERS[config.command](config)


def entry(argv=None) -> int:
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
        code = run(config)
    except GaborlabError as exc:
        sys.stderr.write(f"gaborlab: error: {exc}\n")
        code = exc.exit_code
    return code


if __name__ == "__main__":
    sys.exit(entry())
