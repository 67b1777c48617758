"""Command-line front end.

    phasefilter run bench.txt --out results/
    phasefilter figures --out figs/
    phasefilter validate --quick

Exit status: 0 success, 1 failed validation, 2 bad command line, 3 scenario
file error, 4 runtime error, 5 state clipped by the grid.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
import warnings

import numpy as np

from . import __version__, outputs, states
from .grid import GridError
from .kernels import BACKEND
from .optics import detector_transmittance
from .scenario_file import ScenarioParseError, print_scenario, read_scenario
from .scenarios import (
    GridSpec,
    ScenarioSpec,
    Source,
    delayed_choice_spec,
    detector_filter_spec,
    double_slit_spec,
    run_scenario,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARSE = 3
EXIT_RUNTIME = 4
EXIT_CLIPPING = 5

OUTPUT_ENV = "PHASEFILTER_OUTPUT_DIR"
FIGURE_GRID = GridSpec(512, 80.0)


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _grid_override(spec_grid: GridSpec, args) -> GridSpec:
    n = args.grid_n if args.grid_n is not None else spec_grid.n
    extent = args.grid_extent if args.grid_extent is not None else spec_grid.extent
    return GridSpec(n, extent)


def _output_dir(args, fallback=None) -> str:
    out = args.out or fallback or os.environ.get(OUTPUT_ENV)
    if not out:
        raise CliError(f"no output directory: pass --out or set {OUTPUT_ENV}", EXIT_RUNTIME)
    os.makedirs(out, exist_ok=True)
    return out


def _manifest(spec: ScenarioSpec, files) -> dict:
    return {
        "tool": "phasefilter",
        "version": __version__,
        "kernel_backend": BACKEND,
        "grid": {"n": spec.grid.n, "extent": spec.grid.extent, "center": 0.0, "hbar": 1.0},
        "scenario": print_scenario(spec),
        "files": files,
    }


def write_run(spec: ScenarioSpec, directory: str) -> dict:
    """Run ``spec`` and write its tables, metrics and manifest into ``directory``."""
    result = run_scenario(spec)
    names = []
    for plane in result.planes:
        names += outputs.write_plane(directory, plane)
    metrics = {
        "planes": [plane.metrics() for plane in result.planes],
        "chain_fractions": list(result.chain_fractions),
        "passed_fraction": result.passed_fraction,
    }
    outputs.write_json(os.path.join(directory, "metrics.json"), metrics)
    with open(os.path.join(directory, "scenario.txt"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(print_scenario(spec))
    names += ["metrics.json", "scenario.txt"]
    outputs.write_json(os.path.join(directory, "manifest.json"), _manifest(spec, outputs.file_digests(directory, names)))
    return metrics


def cmd_run(args) -> int:
    try:
        spec = read_scenario(args.scenario)
    except OSError as exc:
        raise CliError(f"cannot read {args.scenario}: {exc}", EXIT_PARSE) from None
    try:
        spec = dataclasses.replace(spec, grid=_grid_override(spec.grid, args))
    except (GridError, ValueError) as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    out = _output_dir(args, spec.output.directory)
    args._error_dir = out
    metrics = write_run(spec, out)
    for plane in metrics["planes"]:
        print(
            f"tau={plane['tau']:g}: visibility_q={plane['visibility_q']:.4f} "
            f"visibility_p={plane['visibility_p']:.4f} passed={plane['passed_fraction']:.4f}"
        )
    print(f"wrote {out}")
    return EXIT_OK


# --- figures ------------------------------------------------------------------


def _figure_specs(grid: GridSpec) -> list:
    return [
        ("fig02_incident_beam", ScenarioSpec(Source("gaussian", {"q_i": 1.0}), planes=(0.0,), grid=grid)),
        ("fig03_04_double_slit", double_slit_spec(grid=grid)),
        ("fig06_detector_qd2.4", detector_filter_spec(2.4, grid=grid)),
        ("fig08_detector_qd4", detector_filter_spec(4.0, grid=grid)),
        ("fig10_11_12_delayed_choice", delayed_choice_spec(grid=grid)),
    ]


def _transmittance_table(path, grid: GridSpec, q_d: float, d=4.0, q_f=1.0) -> None:
    g = grid.build()
    slits = states.double_slit_state(g, d, q_f)
    det = detector_transmittance(g, q_d, d)
    outputs.write_table(
        path,
        "q[length]\tslits[1/sqrt(length)]\tdetector[1]",
        (g.q, slits.amp.real, det.amp.real),
    )


def cmd_figures(args) -> int:
    grid = _grid_override(FIGURE_GRID, args)
    out = _output_dir(args)
    args._error_dir = out
    index = {}
    for name, spec in _figure_specs(grid):
        sub = os.path.join(out, name)
        os.makedirs(sub, exist_ok=True)
        write_run(spec, sub)
        index[name] = outputs.file_digests(sub, sorted(os.listdir(sub)))
        print(f"wrote {sub}")
    for fig, q_d in (("fig05_transmittance_qd2.4", 2.4), ("fig07_transmittance_qd4", 4.0)):
        sub = os.path.join(out, fig)
        os.makedirs(sub, exist_ok=True)
        _transmittance_table(os.path.join(sub, "transmittance.tsv"), grid, q_d)
        index[fig] = outputs.file_digests(sub, ["transmittance.tsv"])
        print(f"wrote {sub}")
    sub = os.path.join(out, "fig09_lens_setup")
    os.makedirs(sub, exist_ok=True)
    K, p0, d, q_f = 2.0, 3.0, 4.0, 1.0
    setup = {
        "K": K,
        "p0": p0,
        "d": d,
        "q_f": q_f,
        "planes": [0.0, 1.0, 3.0],
        # lobe centres leave +-d with momentum -+(p0 + 2 d / K^2) and cross here
        "ray_crossing_tau": d / (p0 + 2.0 * d / K**2),
        "lens_phase": "exp(-i q^2 / K^2)",
        "tilt_phase": "exp(-+i p0 q / hbar) on the +-d lobe",
    }
    outputs.write_json(os.path.join(sub, "setup.json"), setup)
    index["fig09_lens_setup"] = outputs.file_digests(sub, ["setup.json"])
    print(f"wrote {sub}")
    outputs.write_json(
        os.path.join(out, "manifest.json"),
        {"tool": "phasefilter", "version": __version__, "kernel_backend": BACKEND,
         "grid": {"n": grid.n, "extent": grid.extent}, "figures": index},
    )
    return EXIT_OK


# --- validate -----------------------------------------------------------------


def cmd_validate(args) -> int:
    from .validation import run_checks

    results = run_checks(quick=args.quick, callback=lambda c: print(c.line(), flush=True))
    failed = [c for c in results if not c.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VALIDATION if failed else EXIT_OK


# --- entry point --------------------------------------------------------------


def _add_grid_flags(p):
    p.add_argument("--grid-n", type=int, default=None, help="override the number of grid samples (even)")
    p.add_argument("--grid-extent", type=float, default=None, help="override the grid extent, in slit widths")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phasefilter", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a scenario file and write tables, metrics and a manifest")
    p.add_argument("scenario", help="scenario description file")
    p.add_argument("--out", help=f"output directory (default: the file's [output] directory, then ${OUTPUT_ENV})")
    _add_grid_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("figures", help="write the data behind the reference figure set")
    p.add_argument("--out", help=f"output directory (default: ${OUTPUT_ENV})")
    _add_grid_flags(p)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("validate", help="run the numerical self-checks and report pass/fail per property")
    p.add_argument("--quick", action="store_true", help="skip the full bench runs")
    p.set_defaults(func=cmd_validate)
    return parser


def _record_error(args, exc, code) -> None:
    directory = getattr(args, "_error_dir", None)
    print(f"phasefilter: error: {exc}", file=sys.stderr)
    if directory:
        try:
            os.makedirs(directory, exist_ok=True)
            outputs.write_json(
                os.path.join(directory, "error.json"),
                {"error": type(exc).__name__, "message": str(exc), "exit_code": code},
            )
        except OSError:
            pass


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    np.seterr(all="ignore")
    args._error_dir = getattr(args, "out", None)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except CliError as exc:
        _record_error(args, exc, exc.code)
        return exc.code
    except ScenarioParseError as exc:
        _record_error(args, exc, EXIT_PARSE)
        return EXIT_PARSE
    except states.ClippingError as exc:
        _record_error(args, exc, EXIT_CLIPPING)
        return EXIT_CLIPPING
    except (ValueError, GridError, OSError) as exc:
        _record_error(args, exc, EXIT_RUNTIME)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
