"""tasepkit command-line interface.

Six verbs over one engine:

* ``tasepkit green``    - Green function tables G_t(x | y)
* ``tasepkit ggf``      - generalized Green function values
* ``tasepkit boundary`` - boundary measures and their normalization
* ``tasepkit current``  - joint jump-off CDFs from the Fredholm determinant
* ``tasepkit simulate`` - Monte Carlo jump-off statistics
* ``tasepkit airy``     - rescaled kernel against its Airy_2 limit

Every verb writes CSV plus a JSON sidecar with ``--output``, prints JSON
with ``--json`` and a table otherwise. Exit code 2 means invalid input, 3
means a truncation or quadrature did not converge.
"""

from __future__ import annotations

import functools
import itertools
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from . import __version__
from .asymptotics.scaling import (
    ScalingContext,
    convergence_table,
    mean_jump_off_estimate,
)
from .core.boundary import (
    NBoundary,
    Staircase,
    boundary_layer,
    boundary_measure,
    boundary_normalization,
)
from .core.fcore import set_binomial_cap
from .core.green import ggf_det, green_det, reachable_configs
from .core.lattice import ParticleConfig, SpaceTimeConfig
from .core.params import ConvergenceError, ParameterError, TasepError
from .kernel.fredholm import CurrentQuery, TruncationPolicy, joint_current_prob
from .oracle.enumerate import enumerate_green
from .presets import RunConfig, list_preset_ids, load_config_file, load_preset
from .simulation.montecarlo import run_jump_off
from .utils.io import (
    format_scalar,
    rows_to_json,
    sidecar_payload,
    write_csv,
    write_sidecar,
)

console = Console()
err_console = Console(stderr=True)

COLUMNS: dict[str, list[tuple[str, str]]] = {
    "green": [
        ("x", "final coordinates x_1 > ... > x_N"),
        ("y", "initial coordinates y_1 > ... > y_N"),
        ("t", "number of time steps"),
        ("G", "transition probability G_t(x | y)"),
        ("oracle", "trajectory enumeration (with --oracle only)"),
    ],
    "ggf": [
        ("final", "final points x:t"),
        ("initial", "initial points x:t"),
        ("GGF", "generalized Green function"),
    ],
    "boundary": [
        ("config", "exit points x:t, one per particle"),
        ("t_last", "exit time of the last particle"),
        ("measure", "probability of leaving through config"),
    ],
    "current": [
        ("labels", "particle labels n_1 < ... < n_m"),
        ("thresholds", "thresholds a_1 .. a_m"),
        ("probability", "P(t_{n_i} <= a_i for all i), Fredholm"),
        ("error", "last change under horizon doubling"),
        ("mc", "Monte Carlo estimate (with --mc only)"),
        ("mc_stderr", "standard error of mc (with --mc only)"),
    ],
    "simulate": [
        ("label", "particle label n"),
        ("mean", "mean jump-off time t_n"),
        ("stderr", "standard error of mean"),
        ("mean_over_L", "mean / L with L = (x + N) / gamma"),
        ("estimate", "omega(n / L) plus the Tracy-Widom shift"),
        ("relative_error", "|mean_over_L / estimate - 1|"),
    ],
    "simulate-histogram": [
        ("label", "particle label n"),
        ("t", "jump-off time"),
        ("count", "trials with t_n = t"),
        ("pmf", "count / kept trials"),
        ("stderr", "standard error of pmf"),
    ],
    "airy": [
        ("L", "scale parameter"),
        ("u1", "rescaled label of the first argument"),
        ("s1", "rescaled time of the first argument"),
        ("u2", "rescaled label of the second argument"),
        ("s2", "rescaled time of the second argument"),
        ("value", "L^{1/3} times the conjugated kernel"),
        ("limit", "kappa_t times the extended Airy kernel"),
        ("deviation", "|value - limit|"),
    ],
}


@click.group()
@click.version_option(__version__, prog_name="tasepkit")
@click.option(
    "--verbose", "-v", is_flag=True, help="Log progress to stderr."
)
def main(verbose: bool) -> None:
    """tasepkit: exact and asymptotic TASEP with backward-sequential update."""
    if verbose:
        logging.basicConfig(
            level=logging.DEBUG,
            format="%(message)s",
            handlers=[RichHandler(console=err_console, show_path=False)],
        )


def run_options(func: Callable[..., None]) -> Callable[..., None]:
    """Options shared by every computing verb."""
    options = [
        click.option("--p", "p", default=None, help="Hopping probability."),
        click.option(
            "--mode",
            type=click.Choice(["exact", "float"]),
            default=None,
            help="Arithmetic mode.",
        ),
        click.option(
            "--config",
            "config_file",
            type=click.Path(dir_okay=False, exists=True, path_type=Path),
            default=None,
            help="YAML run configuration; flags override it.",
        ),
        click.option(
            "--preset", default=None, help="Packaged preset id."
        ),
        click.option(
            "--output",
            type=click.Path(dir_okay=False, path_type=Path),
            default=None,
            help="CSV path; a <output>.json sidecar is written next to it.",
        ),
        click.option("--json", "as_json", is_flag=True, help="Emit JSON."),
        click.option(
            "--schema", is_flag=True, help="Describe the output columns."
        ),
        click.option(
            "--threads", type=int, default=None, help="Worker threads."
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _int_list(text: Optional[str]) -> Optional[list[int]]:
    if text is None:
        return None
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise ParameterError(f"expected comma-separated integers: {text!r}")


def _points(text: str) -> SpaceTimeConfig:
    """Parse ``"x:t,x:t"`` into a space-time configuration."""
    try:
        pts = [
            tuple(int(v) for v in item.split(":"))
            for item in text.replace(" ", "").split(",")
            if item
        ]
    except ValueError:
        raise ParameterError(f"expected points like 2:5,1:7, got {text!r}")
    if any(len(pt) != 2 for pt in pts):
        raise ParameterError(f"expected points like 2:5,1:7, got {text!r}")
    return SpaceTimeConfig(tuple(pts))  # type: ignore[arg-type]


def _kernel_points(text: Optional[str]) -> Optional[list[list[float]]]:
    if text is None:
        return None
    try:
        pts = [
            [float(v) for v in item.split(",")]
            for item in text.split(";")
            if item.strip()
        ]
    except ValueError:
        raise ParameterError(f"expected u1,s1,u2,s2;... got {text!r}")
    if any(len(pt) != 4 for pt in pts):
        raise ParameterError(f"expected u1,s1,u2,s2;... got {text!r}")
    return pts


def _fmt_points(config: SpaceTimeConfig) -> str:
    return " ".join(f"{x}:{t}" for x, t in config)


def _resolve(command: str, common: dict[str, Any], **flags: Any) -> RunConfig:
    """Defaults, then preset, then config file, then explicit flags."""
    cfg = RunConfig(command=command)
    if common.get("preset"):
        try:
            cfg = load_preset(common["preset"])
        except KeyError as exc:
            raise ParameterError(str(exc.args[0]))
        if cfg.command not in (None, command):
            raise ParameterError(
                f"preset '{common['preset']}' targets '{cfg.command}', "
                f"not '{command}'"
            )
    if common.get("config_file"):
        cfg = load_config_file(common["config_file"])
    cfg = cfg.merged(
        {
            "command": command,
            "p": common.get("p"),
            "mode": common.get("mode"),
            "threads": common.get("threads"),
            **flags,
        }
    )
    set_binomial_cap(cfg.binomial_cap)
    cfg.params.to_dict()  # raises on a bad p or mode
    return cfg


def _handles_errors(func: Callable[..., None]) -> Callable[..., None]:
    """Map library errors to exit codes 2 (input) and 3 (convergence)."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        if kwargs.get("schema"):
            _print_schema(func.__name__, kwargs.get("as_json", False))
            return
        try:
            func(*args, **kwargs)
        except ConvergenceError as exc:
            err_console.print(f"[red]Did not converge: {exc}[/red]")
            raise SystemExit(3)
        except TasepError as exc:
            err_console.print(f"[red]{exc}[/red]")
            raise SystemExit(2)

    return wrapper


def _print_schema(command: str, as_json: bool) -> None:
    keys = [k for k in COLUMNS if k == command or k.startswith(command + "-")]
    if as_json:
        data = {k: dict(COLUMNS[k]) for k in keys}
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
        return
    for key in keys:
        table = Table(title=key, show_header=True, header_style="bold")
        table.add_column("Column")
        table.add_column("Meaning")
        for name, meaning in COLUMNS[key]:
            table.add_row(name, meaning)
        console.print(table)


def _emit(
    cfg: RunConfig,
    columns: Sequence[str],
    rows: list[dict[str, Any]],
    common: dict[str, Any],
    extra: Optional[dict[str, Any]] = None,
) -> None:
    payload = sidecar_payload(
        __version__, cfg.command or "", cfg.to_dict(), columns, extra
    )
    output = common.get("output")
    if output:
        write_csv(output, columns, rows)
        side = write_sidecar(output, payload)
        if not common.get("as_json"):
            console.print(f"[green]Wrote {output} and {side.name}[/green]")
    if common.get("as_json"):
        # Raw stdout so pipelines capture clean JSON.
        sys.stdout.write(rows_to_json(rows, payload))
        return
    if output:
        return
    table = Table(show_header=True, header_style="bold")
    for name in columns:
        table.add_column(name)
    for row in rows:
        table.add_row(*(str(format_scalar(row.get(c, ""))) for c in columns))
    console.print(table)
    for key, value in (extra or {}).items():
        console.print(f"[bold]{key}[/bold]: {format_scalar(value)}")


# -- green --------------------------------------------------------------


@main.command()
@run_options
@click.option("--y", "y", default=None, help="Initial coordinates, e.g. 0,-1.")
@click.option(
    "--x", "x", default=None, help="Final coordinates (default all)."
)
@click.option("--t", "t", type=int, default=None, help="Number of steps.")
@click.option(
    "--oracle", is_flag=True, help="Add the trajectory enumeration column."
)
@_handles_errors
def green(
    y: Optional[str],
    x: Optional[str],
    t: Optional[int],
    oracle: bool,
    **common: Any,
) -> None:
    """Green function table G_t(x | y)."""
    cfg = _resolve("green", common, t=t)
    params = cfg.params
    coords = _int_list(y)
    if coords is None:
        if cfg.n_particles is None:
            raise ParameterError("give --y or n_particles in a config")
        start = ParticleConfig.step(cfg.n_particles)
    else:
        start = ParticleConfig(tuple(coords))
    steps = 0 if cfg.t is None else cfg.t
    finals = (
        [ParticleConfig(tuple(_int_list(x) or []))]
        if x is not None
        else list(reachable_configs(start, steps))
    )
    columns = [c for c, _ in COLUMNS["green"]]
    if not oracle:
        columns.remove("oracle")
    rows = []
    for final in finals:
        row: dict[str, Any] = {
            "x": final.coords,
            "y": start.coords,
            "t": steps,
            "G": green_det(final, start, steps, params),
        }
        if oracle:
            row["oracle"] = enumerate_green(final, start, steps, params)
        rows.append(row)
    total = sum((r["G"] for r in rows), params.zero)
    _emit(cfg, columns, rows, common, {"total": total})


# -- ggf ----------------------------------------------------------------


@main.command()
@run_options
@click.option("--final", "final", required=True, help="Points x:t,x:t,...")
@click.option("--initial", "initial", required=True, help="Points x:t,...")
@_handles_errors
def ggf(final: str, initial: str, **common: Any) -> None:
    """Generalized Green function of one admissible pair."""
    cfg = _resolve("ggf", common)
    fin, ini = _points(final), _points(initial)
    value = ggf_det(fin, ini, cfg.params)
    rows = [
        {"final": _fmt_points(fin), "initial": _fmt_points(ini), "GGF": value}
    ]
    _emit(cfg, [c for c, _ in COLUMNS["ggf"]], rows, common)


# -- boundary -----------------------------------------------------------


@main.command()
@run_options
@click.option(
    "--kind",
    type=click.Choice(["space", "time"]),
    default="space",
    help="Fixed-space (vertical) or fixed-time (horizontal) boundary.",
)
@click.option("--at", "at", type=int, required=True, help="Site or time.")
@click.option("-N", "--n-particles", "n_particles", type=int, default=None)
@click.option(
    "--t-max", type=int, default=20, help="Last exit time listed."
)
@click.option("--tail-tol", type=float, default=None)
@_handles_errors
def boundary(
    kind: str,
    at: int,
    n_particles: Optional[int],
    t_max: int,
    tail_tol: Optional[float],
    **common: Any,
) -> None:
    """Exit measure of the step initial condition on an N-boundary."""
    cfg = _resolve(
        "boundary", common, n_particles=n_particles, tail_tol=tail_tol
    )
    big_n = cfg.n_particles or 1
    if kind == "space":
        base = Staircase.fixed_space(at)
    else:
        base = Staircase.fixed_time(at)
    nb = NBoundary(base, big_n)
    initial = SpaceTimeConfig.equal_time(ParticleConfig.step(big_n), 0)
    params = cfg.params
    rows = []
    for horizon in range(0, t_max + 1):
        for config in boundary_layer(nb, initial, horizon):
            rows.append(
                {
                    "config": _fmt_points(config),
                    "t_last": horizon,
                    "measure": boundary_measure(config, nb, initial, params),
                }
            )
    total = boundary_normalization(nb, initial, params, cfg.tail_tol)
    _emit(
        cfg,
        [c for c, _ in COLUMNS["boundary"]],
        rows,
        common,
        {"normalization": total, "boundary": base.to_dict()},
    )


# -- current ------------------------------------------------------------


@main.command()
@run_options
@click.option("-N", "--n-particles", "n_particles", type=int, default=None)
@click.option("--x", "x", type=int, default=None, help="Window floor x.")
@click.option("--labels", default=None, help="Labels, e.g. 2,4.")
@click.option("--thresholds", default=None, help="Thresholds, e.g. 12,18.")
@click.option(
    "--grid",
    is_flag=True,
    help="Emit every threshold vector with 1 <= b_i <= a_i.",
)
@click.option("--stab-tol", type=float, default=None)
@click.option("--mc", is_flag=True, help="Add Monte Carlo estimates.")
@click.option("--trials", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--t-cap", type=int, default=None)
@_handles_errors
def current(
    n_particles: Optional[int],
    x: Optional[int],
    labels: Optional[str],
    thresholds: Optional[str],
    grid: bool,
    stab_tol: Optional[float],
    mc: bool,
    trials: Optional[int],
    seed: Optional[int],
    t_cap: Optional[int],
    **common: Any,
) -> None:
    """Joint jump-off CDF from the Fredholm determinant."""
    cfg = _resolve(
        "current",
        common,
        n_particles=n_particles,
        x=x,
        labels=_int_list(labels),
        thresholds=_int_list(thresholds),
        stab_tol=stab_tol,
        trials=trials,
        seed=seed,
        t_cap=t_cap,
    )
    if cfg.n_particles is None or cfg.x is None or not cfg.labels:
        raise ParameterError("current needs N, x, labels and thresholds")
    vectors = [tuple(cfg.thresholds)]
    if grid:
        vectors = list(
            itertools.product(*(range(1, a + 1) for a in cfg.thresholds))
        )
    sample = None
    if mc:
        cap = cfg.t_cap or max(cfg.thresholds) + math.ceil(
            8 * (cfg.x + cfg.n_particles) / float(cfg.params.p)
        )
        sample = run_jump_off(
            cfg.n_particles,
            cfg.x,
            cfg.params,
            cap,
            cfg.trials,
            cfg.seed,
            threads=cfg.threads,
        )
    columns = [c for c, _ in COLUMNS["current"]]
    if sample is None:
        columns = columns[:4]
    rows = []
    for vec in vectors:
        query = CurrentQuery(
            tuple(cfg.labels), vec, cfg.x, cfg.n_particles
        )
        prob, err = joint_current_prob(
            query, cfg.params, TruncationPolicy(stab_tol=cfg.stab_tol)
        )
        row: dict[str, Any] = {
            "labels": cfg.labels,
            "thresholds": list(vec),
            "probability": prob,
            "error": err,
        }
        if sample is not None:
            row["mc"], row["mc_stderr"] = sample.cdf(cfg.labels, vec)
        rows.append(row)
    extra = None
    if sample is not None:
        extra = {
            "kept": sample.kept,
            "censored": sample.censored,
            "t_cap": sample.t_cap,
        }
    _emit(cfg, columns, rows, common, extra)


# -- simulate -----------------------------------------------------------


@main.command()
@run_options
@click.option("-N", "--n-particles", "n_particles", type=int, default=None)
@click.option("--x", "x", type=int, default=None, help="Window floor x.")
@click.option("--labels", default=None, help="Labels to report.")
@click.option("--trials", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--t-cap", type=int, default=None)
@click.option("--gamma", type=float, default=None)
@click.option(
    "--histogram", is_flag=True, help="Per-time counts instead of means."
)
@_handles_errors
def simulate(
    n_particles: Optional[int],
    x: Optional[int],
    labels: Optional[str],
    trials: Optional[int],
    seed: Optional[int],
    t_cap: Optional[int],
    gamma: Optional[float],
    histogram: bool,
    **common: Any,
) -> None:
    """Monte Carlo jump-off times from the step initial condition."""
    cfg = _resolve(
        "simulate",
        common,
        n_particles=n_particles,
        x=x,
        labels=_int_list(labels),
        trials=trials,
        seed=seed,
        t_cap=t_cap,
        gamma=gamma,
    )
    if cfg.n_particles is None or cfg.x is None:
        raise ParameterError("simulate needs N and x")
    big_n = cfg.n_particles
    cap = cfg.t_cap or math.ceil(8 * (cfg.x + big_n) / float(cfg.params.p))
    sample = run_jump_off(
        big_n,
        cfg.x,
        cfg.params,
        cap,
        cfg.trials,
        cfg.seed,
        threads=cfg.threads,
    )
    wanted = cfg.labels or list(range(1, big_n + 1))
    rows: list[dict[str, Any]] = []
    if histogram:
        key = "simulate-histogram"
        for n in wanted:
            for t, count in sample.histogram(n).items():
                pmf, err = sample.pmf(n, t)
                rows.append(
                    {
                        "label": n,
                        "t": t,
                        "count": count,
                        "pmf": pmf,
                        "stderr": err,
                    }
                )
    else:
        key = "simulate"
        scale = (cfg.x + big_n) / cfg.gamma
        for n in wanted:
            mean, err = sample.mean(n)
            estimate = mean_jump_off_estimate(
                n / scale, cfg.gamma, int(round(scale)), cfg.params
            )
            rows.append(
                {
                    "label": n,
                    "mean": mean,
                    "stderr": err,
                    "mean_over_L": mean / scale,
                    "estimate": estimate,
                    "relative_error": abs(mean / scale / estimate - 1.0),
                }
            )
    _emit(
        cfg,
        [c for c, _ in COLUMNS[key]],
        rows,
        common,
        {"kept": sample.kept, "censored": sample.censored, "t_cap": cap},
    )


# -- airy ---------------------------------------------------------------


@main.command()
@run_options
@click.option("--scales", default=None, help="Scales L, e.g. 50,100,200.")
@click.option(
    "--points", default=None, help="Kernel arguments u1,s1,u2,s2;..."
)
@click.option("--gamma", type=float, default=None)
@_handles_errors
def airy(
    scales: Optional[str],
    points: Optional[str],
    gamma: Optional[float],
    **common: Any,
) -> None:
    """Rescaled kernel against kappa_t times the extended Airy kernel."""
    cfg = _resolve(
        "airy",
        common,
        scales=_int_list(scales),
        points=_kernel_points(points),
        gamma=gamma,
    )
    if not cfg.scales or not cfg.points:
        raise ParameterError("airy needs scales and points")
    ctx = ScalingContext(cfg.params, cfg.gamma)
    table = convergence_table(
        [tuple(pt) for pt in cfg.points],  # type: ignore[misc]
        cfg.scales,
        ctx,
        threads=cfg.threads,
    )
    rows = [row.to_dict() for row in table]
    _emit(
        cfg,
        [c for c, _ in COLUMNS["airy"]],
        rows,
        common,
        {"kappa_h": ctx.kappa_h, "kappa_t": ctx.kappa_t},
    )


# -- presets ------------------------------------------------------------


@main.command()
@click.option("--json", "as_json", is_flag=True, help="Emit JSON.")
def presets(as_json: bool) -> None:
    """List packaged run presets."""
    loaded = [load_preset(pid) for pid in list_preset_ids()]
    if as_json:
        data = [cfg.to_dict() for cfg in loaded]
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
        return
    table = Table(show_header=True, header_style="bold")
    table.add_column("Preset")
    table.add_column("Command")
    table.add_column("Description")
    for cfg in loaded:
        table.add_row(cfg.id or "-", cfg.command or "-", cfg.description or "")
    console.print(table)


if __name__ == "__main__":  # pragma: no cover
    main()
