"""Command line front end.

Subcommands: covariance, spectrum, check, represent, simulate, verify,
limits. Every one that needs process parameters reads the same JSON
schema with keys p, H, sigma, rho, eta. Numeric CSV output uses %.12g.

Exit codes: 0 success (check: admissible; verify: gate passed), 1 for a
negative answer or a failed embedding, 2 for bad input.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from .circulant import (
    CirculantEmbeddingError,
    SimulationConfig,
    build_plan,
    simulate,
)
from .covariance import increment_covariance, mfbm_covariance
from .existence import (
    SpecialCase,
    admissible_boundary,
    check_admissibility,
    max_correlation,
)
from .limits import KernelSide, KernelSpec, limit_target, simulate_partial_sums
from .params import MfbmParams, load_params, params_to_dict, validate
from .representations import (
    CovarianceExistenceError,
    ma_from_spectral,
    spectral_factor,
    spectral_factor_p2,
)
from .spectral import coherence, cross_spectral_density
from .stats import compare_report

__all__ = ["main", "build_parser"]

_FMT = "%.12g"


def _fmt(x) -> str:
    return _FMT % float(x)


def _parse_grid(text: str) -> np.ndarray:
    """Grid argument: 'start:stop:count' or a comma separated list."""
    text = text.strip()
    if ":" in text:
        fields = text.split(":")
        if len(fields) != 3:
            raise ValueError(f"grid {text!r} must look like start:stop:count")
        start, stop, count = float(fields[0]), float(fields[1]), int(fields[2])
        if count < 1:
            raise ValueError("grid count must be positive")
        return np.linspace(start, stop, count)
    return np.array([float(f) for f in text.split(",") if f.strip() != ""])


def _parse_int_grid(text: str) -> list[int]:
    values = _parse_grid(text)
    out = []
    for v in values:
        if v != int(v):
            raise ValueError(f"expected integers, got {v}")
        out.append(int(v))
    return out


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _write_rows(path: str | None, header: list[str], rows) -> None:
    handle, owned = _open_out(path)
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if owned:
            handle.close()


def _load_valid_params(path: str) -> MfbmParams:
    params = load_params(path)
    report = validate(params)
    if not report.ok:
        raise ValueError(f"invalid parameter file {path}:\n{report}")
    return params


def _cmd_covariance(args) -> int:
    params = _load_valid_params(args.params)
    lags = _parse_grid(args.lags)
    rows = []
    for h in lags:
        for i in range(params.p):
            for j in range(params.p):
                g = increment_covariance(params, i, j, h, args.delta)
                rows.append([i, j, _fmt(h), _fmt(args.delta), _fmt(g)])
    _write_rows(args.out, ["i", "j", "h", "delta", "gamma"], rows)
    return 0


def _cmd_spectrum(args) -> int:
    params = _load_valid_params(args.params)
    omegas = _parse_grid(args.omegas)
    rows = []
    for w in omegas:
        for i in range(params.p):
            for j in range(params.p):
                s = cross_spectral_density(params, i, j, w, args.delta)
                c = coherence(params, i, j) if i != j else 1.0
                rows.append(
                    [i, j, _fmt(w), _fmt(args.delta), _fmt(s.real), _fmt(s.imag), _fmt(c)]
                )
    _write_rows(
        args.out, ["i", "j", "omega", "delta", "re_S", "im_S", "coherence"], rows
    )
    return 0


def _cmd_check(args) -> int:
    params = _load_valid_params(args.params)
    if args.boundary:
        if params.p != 2:
            raise ValueError("--boundary needs a two component parameter file")
        curve = admissible_boundary(
            params.H[0], params.H[1], n_points=args.points, one_tol=params.one_tol
        )
        _write_rows(
            args.out, ["rho", "eta_prime"], [[_fmt(a), _fmt(b)] for a, b in curve]
        )
        return 0
    if args.max_corr_grid is not None:
        hs = _parse_grid(args.max_corr_grid)
        case = SpecialCase(args.case)
        rows = []
        for h1 in hs:
            for h2 in hs:
                rows.append([_fmt(h1), _fmt(h2), _fmt(max_correlation(h1, h2, case))])
        _write_rows(args.out, ["H1", "H2", "max_rho"], rows)
        return 0
    report = check_admissibility(params, psd_tol=args.psd_tol)
    print(
        f"admissible: {report.admissible}  "
        f"min_eigenvalue: {_fmt(report.min_eigenvalue)}  "
        f"threshold: {_fmt(report.threshold)}"
        + (
            f"  coherence: {_fmt(report.coherence)}"
            if report.coherence is not None
            else ""
        )
    )
    return 0 if report.admissible else 1


def _cmd_represent(args) -> int:
    params = _load_valid_params(args.params)
    if params.p == 2:
        factor = spectral_factor_p2(params)
    else:
        factor = spectral_factor(params)
    a = factor.matrix
    payload = {
        "A_re": a.real.tolist(),
        "A_im": a.imag.tolist(),
        "M_plus": None,
        "M_minus": None,
    }
    try:
        ma = ma_from_spectral(a, params.H)
        payload["M_plus"] = ma.m_plus.tolist()
        payload["M_minus"] = ma.m_minus.tolist()
    except ValueError as exc:
        print(f"moving average weights omitted: {exc}", file=sys.stderr)
    handle, owned = _open_out(args.out)
    try:
        json.dump(payload, handle, indent=2)
        handle.write("\n")
    finally:
        if owned:
            handle.close()
    return 0


def _cmd_simulate(args) -> int:
    params = _load_valid_params(args.params)
    config = SimulationConfig(
        n=args.n,
        m=args.m,
        seed=args.seed,
        replicates=args.replicates,
        eig_policy=args.eig_policy,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    plan = build_plan(params, config)
    paths = simulate(plan, config, integrate=args.integrate)
    header = ["t"] + [f"X_{k + 1}" for k in range(params.p)]
    for path in paths:
        t0 = 0 if args.integrate else 1
        rows = [
            [str(t0 + t)] + [_fmt(v) for v in row] for t, row in enumerate(path.values)
        ]
        _write_rows(str(out_dir / f"path_{path.replicate:05d}.csv"), header, rows)
    wall = time.perf_counter() - start
    manifest = {
        "params": params_to_dict(params),
        "n": config.n,
        "replicates": config.replicates,
        "seed": config.seed,
        "eig_policy": str(config.eig_policy.value),
        "integrate": bool(args.integrate),
        "m": plan.m,
        "truncated_mass": plan.truncated_mass,
        "exact": plan.exact,
        "wall_time_seconds": wall,
    }
    with open(out_dir / "manifest.json", "w") as handle:
        json.dump(manifest, handle, indent=2)
        handle.write("\n")
    print(f"wrote {len(paths)} paths to {out_dir} (m={plan.m}, exact={plan.exact})")
    return 0


def _read_path_csv(path: Path) -> tuple[np.ndarray, bool]:
    """One replicate file: increment or integrated values, flag integrated."""
    with open(path, newline="") as handle:
        header = handle.readline().strip().split(",")
        if not header or header[0] != "t":
            raise ValueError(f"{path} does not look like a path file")
        data = np.loadtxt(handle, delimiter=",", ndmin=2)
    ts, values = data[:, 0], data[:, 1:]
    integrated = ts[0] == 0.0
    return values, integrated


def _cmd_verify(args) -> int:
    params = _load_valid_params(args.params)
    files = sorted(Path(args.paths).glob("*.csv"))
    ensembles = []
    integrated_flags = set()
    for f in files:
        try:
            values, integrated = _read_path_csv(f)
        except ValueError:
            continue  # not a path file, e.g. a previously written report
        ensembles.append(values)
        integrated_flags.add(integrated)
    if not ensembles:
        raise ValueError(f"no path files found under {args.paths}")
    if len(integrated_flags) != 1:
        raise ValueError("mixed integrated and increment path files")
    values = np.stack(ensembles)
    if integrated_flags.pop():
        values = np.diff(values, axis=1)
    lags = _parse_int_grid(args.lags)
    comparisons, summary = compare_report(values, params, lags, delta=args.delta)
    rows = [
        [
            c.i,
            c.j,
            c.h,
            _fmt(c.delta),
            _fmt(c.empirical),
            _fmt(c.theoretical),
            _fmt(c.stderr),
            _fmt(c.z),
            c.n_replicates,
        ]
        for c in comparisons
    ]
    _write_rows(
        args.out,
        ["i", "j", "h", "delta", "empirical", "theoretical", "stderr", "z", "n_replicates"],
        rows,
    )
    print(summary, file=sys.stderr)
    return 0 if summary.ok else 1


def _kernel_cell(payload) -> KernelSide | None:
    if payload is None:
        return None
    if not isinstance(payload, dict):
        raise ValueError("kernel grid cells must be objects or null")
    extra = set(payload) - {"regime", "alpha", "d"}
    if extra:
        raise ValueError(f"unknown kernel cell keys {sorted(extra)}")
    return KernelSide(
        regime=payload["regime"], alpha=payload["alpha"], d=payload.get("d", 0.0)
    )


def _load_kernel_spec(path: str) -> KernelSpec:
    with open(path) as handle:
        payload = json.load(handle)
    for key in ("plus", "minus"):
        if key not in payload:
            raise ValueError(f"kernel spec is missing {key!r}")
    plus = tuple(tuple(_kernel_cell(c) for c in row) for row in payload["plus"])
    minus = tuple(tuple(_kernel_cell(c) for c in row) for row in payload["minus"])
    spec = KernelSpec(plus=plus, minus=minus, truncation=payload.get("truncation"))
    if "p" in payload and payload["p"] != spec.p:
        raise ValueError(f"declared p={payload['p']} but grids are {spec.p} wide")
    return spec


def _cmd_limits(args) -> int:
    spec = _load_kernel_spec(args.kernels)
    target = limit_target(spec)
    taus = _parse_grid(args.taus)
    rows = []
    for n in _parse_int_grid(args.n_grid):
        vals = simulate_partial_sums(
            spec,
            n=n,
            taus=taus,
            seed=args.seed,
            replicates=args.replicates,
            noise=args.noise,
        )
        r = vals.shape[0]
        for ti, tau in enumerate(taus):
            for i in range(spec.p):
                for j in range(spec.p):
                    prod = vals[:, ti, i] * vals[:, ti, j]
                    emp = prod.mean()
                    se = prod.std(ddof=1) / np.sqrt(r) if r > 1 else 0.0
                    tgt = mfbm_covariance(target.params, i, j, tau, tau)
                    rows.append(
                        [n, _fmt(tau), i, j, _fmt(emp), _fmt(tgt), _fmt(se)]
                    )
    _write_rows(
        args.out,
        ["n", "tau", "component_i", "component_j", "empirical_cov", "target_cov", "mc_stderr"],
        rows,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfbm",
        description="Exact simulation and second order analysis of "
        "multivariate fractional Brownian motion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cov = sub.add_parser("covariance", help="increment cross-covariances on a lag grid")
    cov.add_argument("--params", required=True, help="parameter JSON file")
    cov.add_argument("--lags", required=True, help="lag grid, start:stop:count or list")
    cov.add_argument("--delta", type=float, default=1.0, help="increment step")
    cov.add_argument("--out", default=None, help="output CSV (default stdout)")
    cov.set_defaults(func=_cmd_covariance)

    spec = sub.add_parser("spectrum", help="cross-spectral density on a frequency grid")
    spec.add_argument("--params", required=True)
    spec.add_argument("--omegas", required=True, help="frequency grid, nonzero")
    spec.add_argument("--delta", type=float, default=1.0)
    spec.add_argument("--out", default=None)
    spec.set_defaults(func=_cmd_spectrum)

    chk = sub.add_parser("check", help="admissibility test and admissible-set data")
    chk.add_argument("--params", required=True)
    chk.add_argument("--psd-tol", type=float, default=1e-10)
    chk.add_argument(
        "--boundary",
        action="store_true",
        help="emit the admissible boundary curve for the file's two H values",
    )
    chk.add_argument("--points", type=int, default=361, help="boundary resolution")
    chk.add_argument(
        "--max-corr-grid",
        default=None,
        help="emit max admissible correlation over this H grid",
    )
    chk.add_argument(
        "--case",
        default=SpecialCase.WELL_BALANCED.value,
        choices=[c.value for c in SpecialCase],
        help="special case for --max-corr-grid",
    )
    chk.add_argument("--out", default=None)
    chk.set_defaults(func=_cmd_check)

    rep = sub.add_parser("represent", help="spectral factor and moving average weights")
    rep.add_argument("--params", required=True)
    rep.add_argument("--out", default=None, help="output JSON (default stdout)")
    rep.set_defaults(func=_cmd_represent)

    sim = sub.add_parser("simulate", help="draw exact sample paths")
    sim.add_argument("--params", required=True)
    sim.add_argument("--n", type=int, required=True, help="path length")
    sim.add_argument("--replicates", type=int, default=1)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--m", type=int, default=None, help="embedding order override")
    sim.add_argument(
        "--integrate",
        action="store_true",
        help="emit integrated paths from zero instead of increments",
    )
    sim.add_argument(
        "--eig-policy",
        default="grow",
        choices=["fail", "grow", "truncate"],
        help="response to a non-PSD embedding",
    )
    sim.add_argument("--out", required=True, help="output directory")
    sim.set_defaults(func=_cmd_simulate)

    ver = sub.add_parser("verify", help="compare a path ensemble against closed forms")
    ver.add_argument("--paths", required=True, help="directory of path CSVs")
    ver.add_argument("--params", required=True)
    ver.add_argument("--lags", default="0:20:21", help="integer lag grid")
    ver.add_argument("--delta", type=float, default=1.0)
    ver.add_argument("--out", default=None, help="comparison CSV (default stdout)")
    ver.set_defaults(func=_cmd_verify)

    lim = sub.add_parser("limits", help="partial sum statistics against the limit law")
    lim.add_argument("--kernels", required=True, help="kernel spec JSON file")
    lim.add_argument("--n-grid", default="512,1024,2048", help="path lengths")
    lim.add_argument("--taus", default="0.5,1.0", help="partial sum fractions in [0,1]")
    lim.add_argument("--replicates", type=int, default=200)
    lim.add_argument("--seed", type=int, default=0)
    lim.add_argument("--noise", default="gaussian", choices=["gaussian", "rademacher"])
    lim.add_argument("--out", default=None)
    lim.set_defaults(func=_cmd_limits)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CirculantEmbeddingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
