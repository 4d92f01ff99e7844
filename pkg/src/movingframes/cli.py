"""Command-line front end.

Exit status: 0 success, 1 verification failure, 2 bad input, 3 numerical
failure.  Errors are reported on stderr as one JSON record.
"""
import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import demos, io
from .atlas import FrameField, identification_residual, klein_side_gluing, mobius_gluing, sphere_frame
from .config import DEFAULT
from .dilation import (
    ComplementField,
    HolonomyReport,
    canonical_field,
    continue_complement,
    det_normalized_field,
    holonomy_with_refinement,
)
from .errors import FrameError
from .frames import DilationPair, Frame, dilate, is_parseval, parseval_normalize, parseval_tangent_dimension, stack_residual

COMMANDS = ("verify", "dilate", "holonomy", "dimcheck", "demo")
DEMOS = ("sphere", "mobius", "klein", "obstruction")
LOOP_SAMPLES = 400
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    tol: float = DEFAULT.parseval
    resolution: int = 50
    seed: int = 0
    demo: Optional[str] = None
    pairs: list = field(default_factory=lambda: [(3, 2), (4, 2), (5, 3)])
    holonomy: bool = False
    refine_depth: int = 6
    method: str = "canonical"
    samples: int = 5

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.resolution < 2:
            raise ValueError("resolution must be at least 2")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if (self.command == "demo") != (self.demo is not None):
            raise ValueError("a demo name is required exactly when command is 'demo'")
        if self.demo is not None and self.demo not in DEMOS:
            raise ValueError(f"unknown demo {self.demo!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.refine_depth < 0:
            raise ValueError("refine depth must be non-negative")


def _need(path, what):
    if path is None:
        raise FrameError(f"{what} requires --input")
    return path


def _load(path):
    if path.endswith(".csv"):
        return io.read_field_csv(path)
    return io.read_json(path)


def _write(obj, path):
    if path is not None:
        io.write_json(obj, path)


def _verify(cfg):
    obj = _load(_need(cfg.input, "verify"))
    rows = []
    if isinstance(obj, Frame):
        rows.append({"index": 0, "residual": is_parseval(obj, cfg.tol).residual})
    elif isinstance(obj, DilationPair):
        rows.append({"index": 0, "residual": stack_residual(obj.stacked)})
    elif isinstance(obj, ComplementField):
        for i, r in enumerate(obj.stack_residuals()):
            rows.append({"index": i, "uv": obj.base.points[i].tolist(), "residual": r})
    elif isinstance(obj, FrameField):
        for i, ((u, v), F) in enumerate(obj.samples):
            rows.append({"index": i, "uv": [u, v], "residual": is_parseval(F, cfg.tol).residual})
    elif isinstance(obj, HolonomyReport):
        rows.append({"index": 0, "residual": obj.residual})
    else:
        ok = bool(obj.get("ok", False))
        return (EXIT_OK if ok else EXIT_FAIL), {"kind": "verify", "source": obj.get("kind"), "ok": ok}
    worst = max(r["residual"] for r in rows)
    ok = worst <= cfg.tol
    report = {"kind": "verify", "tol": cfg.tol, "samples": rows, "worstResidual": worst, "ok": ok}
    return (EXIT_OK if ok else EXIT_FAIL), report


def _dilate(cfg):
    obj = _load(_need(cfg.input, "dilate"))
    if isinstance(obj, Frame):
        pair = dilate(obj, cfg.tol)
        _write(pair, cfg.output)
        ok = pair.residual <= cfg.tol
        return (EXIT_OK if ok else EXIT_FAIL), {"kind": "dilate", "residual": pair.residual, "ok": ok}
    if isinstance(obj, ComplementField):
        obj = obj.base
    if not isinstance(obj, FrameField):
        raise FrameError("dilate expects a Frame or FrameField document")
    if cfg.method == "canonical":
        cf = canonical_field(obj, cfg.tol)
    elif cfg.method == "detNormalized":
        cf = det_normalized_field(obj, cfg.tol)
    else:
        cf = continue_complement(obj, demos.default_seed(obj), cfg.tol)
    _write(cf, cfg.output)
    ok = cf.max_stack_residual <= cfg.tol
    return (EXIT_OK if ok else EXIT_FAIL), {
        "kind": "dilate", "method": cf.method, "maxStackResidual": cf.max_stack_residual, "ok": ok,
    }


def _holonomy(cfg):
    loop = _load(_need(cfg.input, "holonomy"))
    if isinstance(loop, ComplementField):
        loop = loop.base
    if not isinstance(loop, FrameField):
        raise FrameError("holonomy expects a FrameField ordered along a closed loop")
    report = holonomy_with_refinement(loop, demos.default_seed(loop), max_depth=cfg.refine_depth, tol=cfg.tol)
    _write(report, cfg.output)
    return EXIT_OK, {"kind": "holonomy", **io.holonomy_to_dict(report)}


def _dimcheck(cfg):
    rng = np.random.default_rng(cfg.seed)
    rows, ok = [], True
    for k, n in cfg.pairs:
        if k < n or n < 1:
            raise FrameError(f"invalid pair k={k}, n={n}: need k >= n >= 1")
        expected = k * n - n * (n + 1) // 2
        for _ in range(cfg.samples):
            F = parseval_normalize(Frame(rng.standard_normal((n, k))))
            measured = parseval_tangent_dimension(F)
            ok &= measured == expected
            rows.append({"k": k, "n": n, "measured": measured, "expected": expected})
    report = {"kind": "dimcheck", "seed": cfg.seed, "rows": rows, "ok": bool(ok)}
    _write(report, cfg.output)
    return (EXIT_OK if ok else EXIT_FAIL), report


def _demo(cfg):
    out = cfg.output or f"demo-{cfg.demo}"
    os.makedirs(out, exist_ok=True)
    res = cfg.resolution
    report = {"kind": "demo", "demo": cfg.demo, "resolution": res}
    if cfg.demo == "sphere":
        f = demos.sphere_field(res)
        worst_parseval = max(is_parseval(F, cfg.tol).residual for F in f.frames)
        formula = max(
            float(np.max(np.abs(f.ambient(i) - sphere_frame(_sphere_point(q)).matrix)))
            for i, q in enumerate(f.points)
        )
        report.update(maxParsevalResidual=worst_parseval, maxFormulaDeviation=formula,
                      ok=worst_parseval <= cfg.tol and formula <= 1e-10)
    elif cfg.demo in ("mobius", "klein"):
        f = demos.band_field(cfg.demo, res)
        gluings = {"mobius": mobius_gluing()}
        if cfg.demo == "klein":
            gluings["side"] = klein_side_gluing()
        resid = {name: identification_residual(f, g) for name, g in gluings.items()}
        worst_parseval = max(is_parseval(F, cfg.tol).residual for F in f.frames)
        report.update(identificationResidual=resid, maxParsevalResidual=worst_parseval,
                      ok=worst_parseval <= cfg.tol and max(resid.values()) <= 1e-10)
        if cfg.holonomy:
            loop = demos.mobius_loop(LOOP_SAMPLES)
            hol = holonomy_with_refinement(loop, demos.default_seed(loop), max_depth=cfg.refine_depth, tol=cfg.tol)
            io.write_json(loop, os.path.join(out, "loop.json"))
            io.write_json(hol, os.path.join(out, "holonomy.json"))
            report["holonomy"] = io.holonomy_to_dict(hol)
    else:
        scan = demos.sphere_obstruction(4 * res, 2 * res)
        report.update(scan, ok=scan["maxDistanceToZero"] <= 0.05 and min(scan["hitsPerZero"]) >= 1)
        f = None
    if f is not None:
        io.write_json(f, os.path.join(out, "field.json"))
        io.write_field_csv(f, os.path.join(out, "field.csv"))
    io.write_json(report, os.path.join(out, "report.json"))
    return (EXIT_OK if report["ok"] else EXIT_FAIL), report


def _sphere_point(q):
    u, v = q
    return np.array([np.sin(v) * np.cos(u), np.sin(v) * np.sin(u), np.cos(v)])


HANDLERS = {"verify": _verify, "dilate": _dilate, "holonomy": _holonomy, "dimcheck": _dimcheck, "demo": _demo}


def run(cfg):
    """Execute ``cfg``; returns ``(exit_status, report)`` and never raises FrameError."""
    try:
        return HANDLERS[cfg.command](cfg)
    except FrameError as exc:
        status = {"verification": EXIT_FAIL, "numerical": EXIT_NUMERIC}.get(exc.kind, EXIT_INPUT)
        return status, exc.record()
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return EXIT_INPUT, {"error": type(exc).__name__, "kind": "input", "message": str(exc)}


def _pair(text):
    try:
        k, n = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'k,n', got {text!r}") from None
    return k, n


def build_parser():
    p = argparse.ArgumentParser(prog="movingframes", description="Moving Parseval frames: verify, dilate, holonomy.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("demo", nargs="?", choices=DEMOS, help="demo name (only with 'demo')")
    p.add_argument("--input")
    p.add_argument("--output")
    p.add_argument("--tol", type=float, default=DEFAULT.parseval)
    p.add_argument("--resolution", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairs", type=_pair, nargs="+", default=[(3, 2), (4, 2), (5, 3)])
    p.add_argument("--samples", type=int, default=5, help="random frames per pair for dimcheck")
    p.add_argument("--holonomy", action="store_true")
    p.add_argument("--refine-depth", type=int, default=6)
    p.add_argument("--method", choices=("canonical", "continuation", "detNormalized"), default="canonical")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command, input=args.input, output=args.output, tol=args.tol,
            resolution=args.resolution, seed=args.seed, demo=args.demo, pairs=args.pairs,
            holonomy=args.holonomy, refine_depth=args.refine_depth, method=args.method, samples=args.samples,
        )
    except ValueError as exc:
        print(json.dumps({"error": "ValueError", "kind": "input", "message": str(exc)}), file=sys.stderr)
        return EXIT_INPUT
    status, report = run(cfg)
    if "error" in report:
        print(json.dumps(report, sort_keys=True), file=sys.stderr)
    else:
        print(_summary(cfg, report))
    return status


def _summary(cfg, report):
    if cfg.command == "verify" and "samples" in report:
        lines = [f"{'index':>6} {'u':>10} {'v':>10} {'residual':>12}"]
        for r in report["samples"]:
            u, v = r.get("uv", (float("nan"), float("nan")))
            lines.append(f"{r['index']:>6} {u:>10.5f} {v:>10.5f} {r['residual']:>12.3e}")
        lines.append(f"worst residual {report['worstResidual']:.3e} (tol {report['tol']:.1e}): "
                     + ("PASS" if report["ok"] else "FAIL"))
        return "\n".join(lines)
    if cfg.command == "dimcheck":
        lines = [f"{'k':>3} {'n':>3} {'measured':>9} {'expected':>9}"]
        lines += [f"{r['k']:>3} {r['n']:>3} {r['measured']:>9} {r['expected']:>9}" for r in report["rows"]]
        return "\n".join(lines)
    return json.dumps(report, indent=2, sort_keys=True)


if __name__ == "__main__":
    sys.exit(main())
