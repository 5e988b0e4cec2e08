"""Command line front end: ``rankrange {classify,plot,compare,member,sample}``.

Exit codes: 0 success, 2 bad arguments or input files, 3 a library check
failed (invalid matrix, non-Hermitian data, non-convergence), 4 the two
engines disagree.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from rankrange import svg
from rankrange.closed_form import (
    angle_data,
    classify,
    region_contains,
    set_Ckm,
    set_Dk,
)
from rankrange.compare import ENDPOINT_TOL, REGION_TOL, compare_descriptor
from rankrange.core_linalg import (
    InvalidInputError,
    JordanScalarModel,
    as_square,
    materialize,
)
from rankrange.eigen import EigenConvergenceError
from rankrange.geometry import EmptyRegionError, UnboundedRegionError
from rankrange.sampler import (
    DEFAULT_RESOLUTION,
    SpectrumSampler,
    SupportProfile,
    estimate_range,
    member_many,
    outer_region,
    refine_thin,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_DISAGREE = 4
PLOT_RESOLUTION = 360


class UsageError(Exception):
    """Bad command line or input file; maps to exit code 2."""


def parse_complex(text: str) -> complex:
    """Accept ``1-2i``, ``1-2j``, ``-0.5``, ``2i`` and the like."""
    s = str(text).strip().replace(" ", "").replace("I", "j").replace("i", "j")
    if s.endswith("j") and (s == "j" or s[-2] in "+-"):
        s = s[:-1] + "1j"
    try:
        return complex(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _round(obj):
    """Round floats to 12 significant digits throughout a JSON-able structure."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(f"{obj:.12g}")
    if isinstance(obj, complex):
        return [_round(obj.real), _round(obj.imag)]
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _round(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return _round(obj.item())
    return obj


def dumps(obj) -> str:
    return json.dumps(_round(obj), indent=2, sort_keys=True) + "\n"


def load_matrix(path: str) -> np.ndarray:
    """Read ``{"rows": N, "entries": [[re, im], ...]}`` (row-major)."""
    try:
        data = json.loads(Path(path).read_text())
        rows = int(data["rows"])
        entries = np.asarray(data["entries"], dtype=float)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read matrix file {path}: {exc}") from exc
    if rows < 1 or entries.shape != (rows * rows, 2):
        raise UsageError(f"matrix file {path}: expected {rows * rows} [re, im] pairs")
    return as_square((entries[:, 0] + 1j * entries[:, 1]).reshape(rows, rows))


def _model(args) -> JordanScalarModel | None:
    if args.matrix_file:
        return None
    if args.n is None or args.m is None:
        raise UsageError("give --n and --m (and --alpha/--beta), or --matrix-file")
    return JordanScalarModel(args.n, args.m, args.alpha, args.beta)


def _matrix(args, model) -> np.ndarray:
    return load_matrix(args.matrix_file) if model is None else materialize(model)


def _ks(args, dim: int) -> list[int]:
    if args.k is None:
        raise UsageError("--k is required")
    if args.k == "all":
        return list(range(1, dim + 1))
    try:
        k = int(args.k)
    except ValueError as exc:
        raise UsageError(f"--k must be an integer or 'all', got {args.k!r}") from exc
    if not 1 <= k <= dim:
        raise UsageError(f"--k={k} out of range 1..{dim}")
    return [k]


def _angle_set_dict(aset) -> dict:
    return {
        "kind": aset.kind,
        "intervals": [
            {"lo": lo, "hi": hi, "lo_closed": lc, "hi_closed": hc} for lo, hi, lc, hc in aset.intervals()
        ],
    }


def classify_record(model: JordanScalarModel, k: int) -> dict:
    desc = classify(model, k)
    ad = angle_data(model, k)
    out = desc.to_dict()
    out["angles"] = {
        "phi_k": ad.phi_k,
        "psi_km": ad.psi_km,
        "delta_k": ad.delta_k,
        "eta_km": ad.eta_km,
        "cos_phi_k": ad.cos_phi_k,
        "cos_psi_km": ad.cos_psi_km,
    }
    out["D_k"] = _angle_set_dict(set_Dk(model, k)) if k <= model.n else None
    out["C_km"] = _angle_set_dict(set_Ckm(model, k))
    return out


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _one_or_many(records: list, many: bool):
    return records if many else records[0]


def cmd_classify(args) -> int:
    model = _model(args)
    if model is None:
        raise UsageError("classify needs a model (--n --m --alpha --beta), not a matrix file")
    ks = _ks(args, model.dim)
    _emit(args, dumps(_one_or_many([classify_record(model, k) for k in ks], args.k == "all")))
    return EXIT_OK


def cmd_sample(args) -> int:
    model = _model(args)
    t = _matrix(args, model)
    ks = _ks(args, t.shape[0])
    sampler = SpectrumSampler(t)
    if args.theta:
        thetas = np.radians(np.asarray(args.theta, dtype=float))
        spec = sampler.spectra(thetas)
    else:
        thetas, spec = sampler.grid_spectra(args.resolution)
    records = [SupportProfile(k, thetas, spec[:, k - 1]).to_dict() for k in ks]
    _emit(args, dumps(_one_or_many(records, args.k == "all")))
    return EXIT_OK


def cmd_member(args) -> int:
    model = _model(args)
    t = _matrix(args, model)
    ks = _ks(args, t.shape[0])
    engine = args.engine if model is not None else "sampler"
    records = []
    for k in ks:
        rec = {"k": k, "mu": args.mu, "engines": []}
        if engine in ("closed", "both"):
            inside = region_contains(classify(model, k), args.mu)
            rec["closed"] = "inside" if inside else "outside"
            rec["engines"].append("closed")
        if engine in ("sampler", "both"):
            rec["sampler"] = str(member_many(t, k, [args.mu], args.resolution, args.tol)[0])
            rec["engines"].append("sampler")
        records.append(rec)
    _emit(args, dumps(_one_or_many(records, args.k == "all")))
    return EXIT_OK


def cmd_compare(args) -> int:
    model = _model(args)
    if model is None:
        raise UsageError("compare needs a model (--n --m --alpha --beta)")
    ks = _ks(args, model.dim)
    sampler = SpectrumSampler(materialize(model))
    thetas, spec = sampler.grid_spectra(args.resolution)
    region_tol = args.tol if args.tol is not None else REGION_TOL
    records, ok = [], True
    for k in ks:
        profile = SupportProfile(k, thetas, spec[:, k - 1])
        profile, region = refine_thin(sampler, profile, outer_region(profile))
        rep = compare_descriptor(model, classify(model, k), profile, region, region_tol, ENDPOINT_TOL)
        ok = ok and rep.agree
        records.append(rep.to_dict())
    _emit(args, dumps(_one_or_many(records, args.k == "all")))
    return EXIT_OK if ok else EXIT_DISAGREE


def plot_svg(model, t, k: int, resolution: int, show_sets: bool) -> str:
    """SVG for one ``k``: closed-form boundary (if a model), sampled support lines."""
    canvas = svg.Canvas()
    profile, region = estimate_range(t, k, resolution)
    note = None
    title = f"k={k}"
    if model is not None:
        desc = classify(model, k)
        title = f"n={model.n} m={model.m} k={k} case {desc.case_id}"
        anchor = [model.alpha, model.beta] if model.m else [model.alpha]
        canvas.cover(anchor)
        if desc.is_empty:
            note = "empty"
        else:
            svg.draw_descriptor(canvas, desc)
        if show_sets:
            radius = model.gap if model.gap > 0 else 1.0
            if k <= model.n:
                svg.draw_angle_set(canvas, set_Dk(model, k), model.alpha, radius, model.psi, "#1f4fd8")
            svg.draw_angle_set(canvas, set_Ckm(model, k), model.alpha, radius, model.psi, "#d81f1f")
    else:
        if region.is_empty:
            note = "empty"
        else:
            svg.draw_region(canvas, region)
    x0, y0, x1, y1 = canvas.bounds()
    half = max(x1 - x0, y1 - y0, 0.5) * 0.65
    cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    box = (cx - half, cy - half, cx + half, cy + half)
    svg.draw_support_lines(canvas, profile.thetas, profile.lambdas, box)
    return svg.render(canvas, title, note)


def cmd_plot(args) -> int:
    model = _model(args)
    t = _matrix(args, model)
    ks = _ks(args, t.shape[0])
    resolution = args.resolution if args.resolution_given else PLOT_RESOLUTION
    if args.format == "json":
        records = []
        for k in ks:
            _, region = estimate_range(t, k, resolution)
            rec = {"k": k, "sampler_region": region.to_dict()}
            if model is not None:
                rec["closed"] = classify_record(model, k)
            records.append(rec)
        _emit(args, dumps(_one_or_many(records, args.k == "all")))
        return EXIT_OK
    if len(ks) > 1:
        if not args.output:
            raise UsageError("--k all with SVG output needs --output (one file per k)")
        base = Path(args.output)
        for k in ks:
            path = base.with_name(f"{base.stem}_k{k}{base.suffix or '.svg'}")
            path.write_text(plot_svg(model, t, k, resolution, args.show_sets))
        return EXIT_OK
    _emit(args, plot_svg(model, t, ks[0], resolution, args.show_sets))
    return EXIT_OK


class _Resolution(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.resolution_given = True


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="Jordan block size")
    common.add_argument("--m", type=int, help="size of the scalar block")
    common.add_argument("--k", help="rank index, or 'all'")
    common.add_argument("--alpha", type=parse_complex, default=0j, help="Jordan eigenvalue, e.g. -1-1i")
    common.add_argument("--beta", type=parse_complex, default=0j, help="scalar block eigenvalue")
    common.add_argument("--matrix-file", help='JSON {"rows": N, "entries": [[re, im], ...]}')
    common.add_argument(
        "--resolution", type=int, default=DEFAULT_RESOLUTION, action=_Resolution, help="number of sampled angles"
    )
    common.add_argument("--format", choices=("json", "svg"), default="json")
    common.add_argument("--output", help="write here instead of stdout")
    common.add_argument("--tol", type=float, default=None, help="membership / comparison tolerance")

    parser = argparse.ArgumentParser(prog="rankrange", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="closed-form case and parameters")
    p_plot = sub.add_parser("plot", parents=[common], help="SVG figure (or JSON geometry)")
    p_plot.add_argument("--show-sets", action="store_true", help="mark D_k (blue) and C_km (red)")
    p_plot.set_defaults(format="svg")
    sub.add_parser("compare", parents=[common], help="cross-check the two engines")
    p_member = sub.add_parser("member", parents=[common], help="membership of a point")
    p_member.add_argument("--mu", type=parse_complex, required=True)
    p_member.add_argument("--engine", choices=("closed", "sampler", "both"), default="both")
    p_sample = sub.add_parser("sample", parents=[common], help="sampled support profile")
    p_sample.add_argument("--theta", type=float, nargs="+", help="angles in degrees (default: uniform grid)")
    parser.set_defaults(resolution_given=False)
    return parser


COMMANDS = {
    "classify": cmd_classify,
    "plot": cmd_plot,
    "compare": cmd_compare,
    "member": cmd_member,
    "sample": cmd_sample,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_PARSE
    if args.resolution < 8:
        print("error: --resolution must be at least 8", file=sys.stderr)
        return EXIT_PARSE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvalidInputError, EigenConvergenceError, EmptyRegionError, UnboundedRegionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
