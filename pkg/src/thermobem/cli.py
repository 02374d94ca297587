"""Command-line front end.

Subcommands: ``solve-laplace``, ``solve-time``, ``verify``,
``probe-coercivity``.  All numeric output is CSV (17 significant digits,
header row mandatory) plus a JSON run manifest validated against the
published schema.  The CQ frequency cache root comes from the
THERMOBEM_CACHE environment variable.
"""

from __future__ import annotations

import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import click
import numpy as np

from .cq import (CQConfig, TimeSignal, cache_root, cq_forward,
                 cq_frequencies, cq_inverse, march, smooth_ramp)
from .errors import ThermoBEMError
from .io_utils import (RunConfig, complex_header, complex_table, load_config,
                       validate_manifest, write_csv, write_manifest)
from .operators import eval_potential, point_source_rhs, probe_coercivity, \
    solve_bie
from .verification import run_verification

logger = logging.getLogger(__name__)


def _trig_profile(config: RunConfig) -> np.ndarray:
    """Band-limited random spatial profile at the midpoints, (3n,) real."""
    curve = config.curve
    rng = np.random.default_rng(config.seed)
    t = curve.t_mid
    w = np.zeros(3 * curve.n)
    for c in range(3):
        for k in range(config.data.modes + 1):
            a, b = rng.normal(size=2)
            w[c * curve.n:(c + 1) * curve.n] += (a * np.cos(k * t)
                                                 + b * np.sin(k * t))
    return w


def _file_profile(config: RunConfig) -> np.ndarray:
    """Complex (3n,) midpoint values from a two-column re,im CSV."""
    raw = np.loadtxt(config.data.path, delimiter=",", skiprows=1, ndmin=2)
    if raw.shape != (3 * config.curve.n, 2):
        raise click.ClickException(
            f"data file {config.data.path} must have {3 * config.curve.n} "
            f"rows and 2 columns (re,im), got {raw.shape}")
    return raw[:, 0] + 1j * raw[:, 1]


def _laplace_rhs(config: RunConfig, s: complex) -> np.ndarray:
    data = config.data
    if data.profile == "point_source":
        return point_source_rhs(config.kind, config.curve, config.params, s,
                                data.source, data.charge)
    if data.profile == "trig":
        return _trig_profile(config).astype(complex)
    if data.profile == "file":
        return _file_profile(config)
    return np.zeros(3 * config.curve.n, dtype=complex)


def _time_data(config: RunConfig) -> np.ndarray:
    """Space-time boundary data (3n, n_steps + 1), real."""
    cfg = config.cq
    ramp = smooth_ramp(cfg.times - config.data.delay,
                       power=config.data.ramp_power)
    if config.data.profile == "point_source":
        # synthesize the causal point-source traces on the run's own
        # contour (the transform pair used by the marching itself)
        n = config.curve.n
        N, R = cfg.N, cfg.R
        s_nodes = cq_frequencies(cfg)
        psihat = cq_forward(ramp, R, N)
        rhs_all = np.zeros((3 * n, N), dtype=complex)
        for l in range(N // 2 + 1):
            rhs_all[:, l] = point_source_rhs(
                config.kind, config.curve, config.params,
                complex(s_nodes[l]), config.data.source, config.data.charge)
            lm = (N - l) % N
            if lm != l:
                rhs_all[:, lm] = np.conj(rhs_all[:, l])
        return cq_inverse(rhs_all * psihat, R, cfg.n_steps + 1).real
    if config.data.profile == "trig":
        return np.outer(_trig_profile(config), ramp)
    if config.data.profile == "file":
        w = _file_profile(config)
        if np.abs(w.imag).max() > 0:
            raise click.ClickException(
                "time runs need real spatial data (imaginary part given)")
        return np.outer(w.real, ramp)
    return np.zeros((3 * config.curve.n, cfg.n_steps + 1))


def _prepare_out(out: str, paths: list, force: bool) -> None:
    os.makedirs(out, exist_ok=True)
    clashes = [p for p in paths if os.path.exists(p)]
    if clashes and not force:
        raise click.ClickException(
            "refusing to overwrite existing output (use --force): "
            + ", ".join(clashes))


def _manifest_header(config: RunConfig, command: str) -> dict:
    return {"command": command,
            "kind": config.kind,
            "side": "interior" if config.interior else "exterior",
            "curve": config.curve.spec(),
            "params": config.params.as_dict(),
            "data": {"profile": config.data.profile},
            "seed": config.seed}


@click.group()
@click.option("--log-level", default="INFO", show_default=True,
              help="Logging level for progress output on stderr.")
def main(log_level):
    """Boundary-element solver for Laplace-domain thermoelasticity."""
    logging.basicConfig(level=getattr(logging, log_level.upper(), 20),
                        stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command("solve-laplace")
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True), help="Run configuration file.")
@click.option("--out", "out_dir", required=True, type=click.Path(),
              help="Output directory.")
@click.option("--force", is_flag=True, help="Overwrite existing outputs.")
@click.option("--threads", default=1, show_default=True,
              help="Parallel solves across frequencies.")
def solve_laplace(config_path, out_dir, force, threads):
    """Solve the boundary problem at each configured frequency."""
    config = load_config(config_path)
    if config.frequencies is None:
        raise click.ClickException(
            "solve-laplace needs a [frequencies] section (found [time])")
    sign = -1.0 if config.interior else 1.0
    names = []
    for i in range(len(config.frequencies)):
        names.append((os.path.join(out_dir,
                                   f"{config.prefix}_f{i:03d}_density.csv"),
                      os.path.join(out_dir,
                                   f"{config.prefix}_f{i:03d}_field.csv")))
    manifest_path = os.path.join(out_dir, f"{config.prefix}_manifest.json")
    _prepare_out(out_dir, [p for pair in names for p in pair]
                 + [manifest_path], force)

    def solve_one(i):
        s = config.frequencies[i]
        t0 = time.perf_counter()
        rhs = _laplace_rhs(config, s)
        sol = solve_bie(config.kind, config.curve, config.params, s,
                        sign * rhs)
        potk = "QSD" if config.kind == "SD" else "QDS"
        field = sign * eval_potential(potk, config.curve, config.params, s,
                                      sol.density, config.observation)
        return sol, field, time.perf_counter() - t0

    try:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(solve_one,
                                        range(len(config.frequencies))))
        else:
            results = [solve_one(i) for i in
                       range(len(config.frequencies))]
    except ThermoBEMError as exc:
        raise click.ClickException(str(exc)) from exc

    curve = config.curve
    runs = []
    for i, (sol, field, wall) in enumerate(results):
        s = config.frequencies[i]
        dens = sol.density.reshape(3, curve.n).T        # (n, 3)
        dens_tab = np.column_stack([np.arange(curve.n), curve.t_node,
                                    curve.x_node, complex_table(dens)])
        write_csv(names[i][0],
                  ["index", "t", "x", "y"]
                  + complex_header(["ux", "uy", "theta"]), dens_tab)
        field_tab = np.column_stack([np.arange(len(config.observation)),
                                     config.observation,
                                     complex_table(field)])
        write_csv(names[i][1],
                  ["index", "x", "y"] + complex_header(["ux", "uy",
                                                        "theta"]),
                  field_tab)
        runs.append({"s": [s.real, s.imag], "n": curve.n,
                     "residual": sol.residual,
                     "condition_estimate": 1.0 / max(sol.rcond, 1e-300),
                     "wall_time_s": wall,
                     "density_csv": os.path.basename(names[i][0]),
                     "field_csv": os.path.basename(names[i][1])})
    manifest = _manifest_header(config, "solve-laplace")
    manifest["runs"] = runs
    validate_manifest(manifest)
    write_manifest(manifest_path, manifest)
    click.echo(f"wrote {len(runs)} frequency solves to {out_dir}")


@main.command("solve-time")
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True), help="Run configuration file.")
@click.option("--out", "out_dir", required=True, type=click.Path(),
              help="Output directory.")
@click.option("--force", is_flag=True, help="Overwrite existing outputs.")
@click.option("--threads", default=1, show_default=True,
              help="Parallel solves across contour frequencies.")
def solve_time(config_path, out_dir, force, threads):
    """March the time-domain problem with convolution quadrature."""
    config = load_config(config_path)
    if config.cq is None:
        raise click.ClickException(
            "solve-time needs a [time] section (found [frequencies])")
    cfg = config.cq
    series_path = os.path.join(out_dir, f"{config.prefix}_series.csv")
    manifest_path = os.path.join(out_dir, f"{config.prefix}_manifest.json")
    _prepare_out(out_dir, [series_path, manifest_path], force)

    sign = -1.0 if config.interior else 1.0
    t0 = time.perf_counter()
    g = sign * _time_data(config)
    try:
        out = march(config.kind, config.curve, config.params,
                    TimeSignal(values=g, dt=cfg.dt), config.observation,
                    cfg, threads=threads, cache_dir=cache_root())
    except ThermoBEMError as exc:
        raise click.ClickException(str(exc)) from exc
    wall = time.perf_counter() - t0
    u = sign * out.values                        # (m, 3, n_times)

    m = len(config.observation)
    cols = u.transpose(2, 0, 1).reshape(-1, 3 * m)   # (n_times, m*3)
    table = np.column_stack([np.arange(cfg.n_steps + 1), cfg.times,
                             complex_table(cols)])
    comp_names = [f"{c}_p{j}" for j in range(m)
                  for c in ("ux", "uy", "theta")]
    write_csv(series_path, ["step", "t"] + complex_header(comp_names),
              table)
    manifest = _manifest_header(config, "solve-time")
    manifest["time"] = {"dt": cfg.dt, "n_steps": cfg.n_steps,
                        "method": cfg.method, "R": cfg.R, "N": cfg.N}
    manifest["series_csv"] = os.path.basename(series_path)
    manifest["wall_time_s"] = wall
    validate_manifest(manifest)
    write_manifest(manifest_path, manifest)
    click.echo(f"wrote time series ({cfg.n_steps + 1} steps, {m} points) "
               f"to {out_dir} in {wall:.1f} s")


@main.command("verify")
@click.option("--tier", type=click.Choice(["fast", "full"]), default="fast",
              show_default=True, help="Problem sizes for the oracle suites.")
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Directory for report.json (default: stdout).")
@click.option("--force", is_flag=True, help="Overwrite existing outputs.")
@click.option("--threads", default=1, show_default=True,
              help="Parallel solves inside the CQ suites.")
@click.option("--seed", default=0, show_default=True,
              help="Seed for randomized oracle configurations.")
def verify(tier, out_dir, force, threads, seed):
    """Run the oracle suites; nonzero exit on any failure."""
    report = run_verification(tier=tier, seed=seed, threads=threads,
                              cache_dir=cache_root())
    payload = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_dir is not None:
        report_path = os.path.join(out_dir, "report.json")
        _prepare_out(out_dir, [report_path], force)
        with open(report_path, "w", newline="\n") as f:
            f.write(payload)
    else:
        click.echo(payload, nl=False)
    for suite in report["suites"]:
        click.echo(f"{suite['name']:<16} "
                   f"{'PASS' if suite['passed'] else 'FAIL'}", err=True)
    if not report["passed"]:
        raise click.exceptions.Exit(1)


@main.command("probe-coercivity")
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True), help="Run configuration file.")
@click.option("--out", "out_dir", required=True, type=click.Path(),
              help="Output directory.")
@click.option("--force", is_flag=True, help="Overwrite existing outputs.")
@click.option("--n-probe", default=16, show_default=True,
              help="Random band-limited probe densities per frequency.")
def probe_coercivity_cmd(config_path, out_dir, force, n_probe):
    """Probe energy-pairing positivity along the configured frequencies."""
    config = load_config(config_path)
    if config.frequencies is None:
        raise click.ClickException(
            "probe-coercivity needs a [frequencies] section")
    csv_path = os.path.join(out_dir, f"{config.prefix}_coercivity.csv")
    manifest_path = os.path.join(out_dir, f"{config.prefix}_manifest.json")
    _prepare_out(out_dir, [csv_path, manifest_path], force)
    t0 = time.perf_counter()
    rows = []
    try:
        for s in config.frequencies:
            rep = probe_coercivity(config.kind, config.curve, config.params,
                                   s, n_probe=n_probe, seed=config.seed)
            rows.append([s.real, s.imag, rep.min_real, rep.inv_norm_l2,
                         rep.inv_norm_sobolev, rep.bound_ratio_l2,
                         rep.bound_ratio_sobolev])
    except ThermoBEMError as exc:
        raise click.ClickException(str(exc)) from exc
    write_csv(csv_path,
              ["re_s", "im_s", "min_real_pairing", "inv_norm_l2",
               "inv_norm_sobolev", "bound_ratio_l2", "bound_ratio_sobolev"],
              np.asarray(rows))
    manifest = _manifest_header(config, "probe-coercivity")
    manifest["csv"] = os.path.basename(csv_path)
    manifest["wall_time_s"] = time.perf_counter() - t0
    validate_manifest(manifest)
    write_manifest(manifest_path, manifest)
    click.echo(f"probed {len(rows)} frequencies; results in {csv_path}")


if __name__ == "__main__":
    main()
