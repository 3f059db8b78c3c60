"""Command-line surface: experiment drivers with bit-stable CSV/JSON output."""

from __future__ import annotations

import csv
import io
import json
import sys

import click

from .ebk import QuantumNumbers, SeparableSystem, ebk_spectrum
from .errors import CONVERGENCE_ERRORS, ConfigError, QhjError
from .oracle import OracleConfig, oracle_eigenvalue
from .potentials import KINDS, PotentialModel, SolverConfig
from .qmf import build_contour, quantum_action, transport_wavefunction
from .classical import turning_points
from .quantize import qhj_energy, spectrum
from .wkb import residue_identity_check, wkb_energy

_SPECTRUM_COLUMNS = (
    "n", "E_qhj", "E_wkb", "E_oracle", "E_closed_form", "J_over_hbar",
    "node_count", "residual_quantization", "residual_im", "residual_closure",
)

_SOLVER_KEYS = {
    "hbar", "energy_tol", "action_tol", "quadrature_tol",
    "contour_margin", "contour_nodes", "max_iterations",
}
_ORACLE_KEYS = {"domain_halfwidth", "grid_points", "refinement_rounds"}

#: Row errors that reflect the request, not a numerical failure.
_BENIGN_ERRORS = ("no bound state", "beyond well capacity")


def _fmt(value) -> str:
    """12 significant digits, lowercase exponent; blanks for missing values."""
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return f"{value:.11e}"


def _parse_params(text: str) -> dict:
    params: dict = {}
    if not text:
        return params
    for item in text.split(","):
        if "=" not in item:
            raise ConfigError(f"bad parameter {item!r}; expected key=value")
        key, value = item.split("=", 1)
        key = key.strip()
        if key == "coeffs":
            params[key] = [float(c) for c in value.split(":")]
        else:
            try:
                params[key] = float(value)
            except ValueError as exc:
                raise ConfigError(f"bad numeric value for {key!r}: {value!r}") from exc
    return params


def _check_keys(block: dict, allowed: set, where: str):
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config file must contain a JSON object")
    _check_keys(cfg, {"potential", "system", "solver", "oracle"}, "config")
    if "potential" in cfg:
        _check_keys(cfg["potential"], {"kind", "params", "mass"}, "config.potential")
    if "system" in cfg:
        _check_keys(cfg["system"], {"coordinates"}, "config.system")
        for i, coord in enumerate(cfg["system"]["coordinates"]):
            _check_keys(coord, {"label", "kind", "params", "mass"}, f"config.system.coordinates[{i}]")
    if "solver" in cfg:
        _check_keys(cfg["solver"], _SOLVER_KEYS, "config.solver")
    if "oracle" in cfg:
        _check_keys(cfg["oracle"], _ORACLE_KEYS, "config.oracle")
    return cfg


def _build_model(kind: str, params: dict, mass: float) -> PotentialModel:
    if kind not in KINDS:
        raise ConfigError(f"unknown potential kind {kind!r}")
    params = dict(params)
    mass = float(params.pop("mass", mass))
    if kind == "quartic" and "lambda" in params:
        params["lam"] = params.pop("lambda")
    if kind == "harmonic":
        params.setdefault("omega", 1.0)
    elif kind == "quartic":
        params.setdefault("lam", 1.0)
    if kind == "polynomial" and "coeffs" in params:
        params["coeffs"] = tuple(params["coeffs"])
    return PotentialModel(kind, mass, params)


def _resolve_model(config: dict, potential: str | None, params: str | None, mass: float | None):
    block = config.get("potential", {})
    kind = potential or block.get("kind")
    if kind is None:
        raise ConfigError("no potential specified (use --potential or a config file)")
    merged = dict(block.get("params", {}))
    if params:
        merged.update(_parse_params(params))
    m = mass if mass is not None else block.get("mass", 1.0)
    return _build_model(kind, merged, float(m))


def _resolve_solver(config: dict, hbar: float | None) -> SolverConfig:
    kwargs = dict(config.get("solver", {}))
    if hbar is not None:
        kwargs["hbar"] = hbar
    return SolverConfig(**kwargs)


def _resolve_oracle(config: dict) -> OracleConfig:
    return OracleConfig(**config.get("oracle", {}))


def _emit(rows, columns, fmt, out_path):
    """Serialize rows deterministically and write them out."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(col)) if col != "error" else (row.get(col) or "")
                             for col in columns])
        text = buf.getvalue()
    else:
        text = json.dumps({"rows": rows}, indent=2) + "\n"
    _write(text, out_path)


def _write(text, out_path):
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _common_options(f):
    f = click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                     default=None, help="JSON config file; flags override its values.")(f)
    f = click.option("--hbar", type=float, default=None, help="Planck constant over 2 pi.")(f)
    f = click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
                     help="Output file (default: stdout).")(f)
    f = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")(f)
    f = click.option("--seedless", is_flag=True, default=False,
                     help="Reserved; no RNG is used anywhere.")(f)
    return f


def _potential_options(f):
    f = click.option("--potential", type=click.Choice(KINDS), default=None)(f)
    f = click.option("--params", default=None,
                     help="Comma-separated key=value pairs, e.g. D=8,a=1.")(f)
    f = click.option("--mass", type=float, default=None)(f)
    return f


def _run(body) -> int:
    try:
        return body() or 0
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except CONVERGENCE_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        return 3
    except QhjError as exc:
        click.echo(f"error: {exc}", err=True)
        return 3


@click.group()
def main():
    """Bound-state quantization via complex-contour loop actions."""


@main.command("spectrum")
@_common_options
@_potential_options
@click.option("--levels", type=int, required=True, help="Highest level index to solve.")
@click.option("--methods", default="qhj,wkb,oracle,closed",
              help="Comma-separated subset of qhj,wkb,oracle,closed.")
def cmd_spectrum(config_path, hbar, out_path, fmt, seedless, potential, params, mass,
                 levels, methods):
    """Solve levels 0..N with the requested methods and tabulate them."""

    def body():
        config = _load_config(config_path)
        model = _resolve_model(config, potential, params, mass)
        cfg = _resolve_solver(config, hbar)
        ocfg = _resolve_oracle(config)
        method_tuple = tuple(m.strip() for m in methods.split(",") if m.strip())
        unknown = set(method_tuple) - {"qhj", "wkb", "oracle", "closed"}
        if unknown:
            raise ConfigError(f"unknown methods: {sorted(unknown)}")
        if levels < 0:
            raise ConfigError("--levels must be nonnegative")
        rows = spectrum(model, levels, method_tuple, cfg, ocfg)
        any_error = any(r.error for r in rows)
        hard_error = any(
            r.error and not any(b in r.error for b in _BENIGN_ERRORS) for r in rows
        )
        columns = _SPECTRUM_COLUMNS + (("error",) if any_error else ())
        dicts = [
            {col: getattr(r, col if col != "error" else "error") for col in columns}
            for r in rows
        ]
        _emit(dicts, columns, fmt, out_path)
        return 3 if hard_error else 0

    sys.exit(_run(body))


@main.command("verify")
@_common_options
@_potential_options
@click.option("--level", type=int, required=True)
@click.option("--margins", default=None,
              help="Comma-separated contour margins for an invariance sweep.")
def cmd_verify(config_path, hbar, out_path, fmt, seedless, potential, params, mass,
               level, margins):
    """Solve one level and report the loop action and its residuals."""

    def body():
        config = _load_config(config_path)
        model = _resolve_model(config, potential, params, mass)
        cfg = _resolve_solver(config, hbar)
        if level < 0:
            raise ConfigError("--level must be nonnegative")
        E, act = qhj_energy(model, level, cfg)
        report = {
            "level": level,
            "energy": E,
            "J_re": act.J.real,
            "J_im": act.J.imag,
            "J_over_hbar": act.J.real / cfg.hbar,
            "n_est": act.n_est,
            "residual_quantization": act.quantization_residual,
            "residual_im": act.im_residual,
            "residual_closure": act.closure_residual,
        }
        if margins:
            sweep = []
            values = []
            for m in margins.split(","):
                mcfg = SolverConfig(**{**_solver_kwargs(cfg), "contour_margin": float(m)})
                _, mact = qhj_energy(model, level, mcfg)
                sweep.append({"margin": float(m), "J_over_hbar": mact.J.real / mcfg.hbar})
                values.append(mact.J.real / mcfg.hbar)
            report["margins"] = sweep
            report["J_spread"] = max(values) - min(values)
        _write(json.dumps(report, indent=2) + "\n", out_path)

    sys.exit(_run(body))


def _solver_kwargs(cfg: SolverConfig) -> dict:
    return {
        "hbar": cfg.hbar,
        "energy_tol": cfg.energy_tol,
        "action_tol": cfg.action_tol,
        "quadrature_tol": cfg.quadrature_tol,
        "contour_margin": cfg.contour_margin,
        "contour_nodes": cfg.contour_nodes,
        "max_iterations": cfg.max_iterations,
    }


@main.command("wkb-check")
@_common_options
@_potential_options
@click.option("--energies", required=True,
              help="Comma-separated energies at which to run the residue check.")
def cmd_wkb_check(config_path, hbar, out_path, fmt, seedless, potential, params, mass,
                  energies):
    """Check the turning-point residue identity against -h/2."""

    def body():
        config = _load_config(config_path)
        model = _resolve_model(config, potential, params, mass)
        cfg = _resolve_solver(config, hbar)
        results = []
        for text in energies.split(","):
            E = float(text)
            contour = build_contour(model, turning_points(model, E), cfg)
            rep = residue_identity_check(model, E, contour, cfg)
            results.append({
                "energy": E,
                "value_re": rep.value.real,
                "value_im": rep.value.imag,
                "target": rep.target,
                "deviation": rep.deviation,
                "passed": rep.passed,
            })
        _write(json.dumps({"rows": results}, indent=2) + "\n", out_path)

    sys.exit(_run(body))


@main.command("ebk")
@_common_options
@click.option("--coord", "coords", multiple=True,
              help="Coordinate spec kind:key=value,...; repeat per coordinate.")
@click.option("--qn", required=True, help="Comma-separated quantum numbers.")
def cmd_ebk(config_path, hbar, out_path, fmt, seedless, coords, qn):
    """Quantize a separable system loop by loop."""

    def body():
        config = _load_config(config_path)
        cfg = _resolve_solver(config, hbar)
        coordinates = []
        if coords:
            for i, text in enumerate(coords):
                kind, _, rest = text.partition(":")
                params = _parse_params(rest)
                coordinates.append((f"q{i + 1}", _build_model(kind, params, params.get("mass", 1.0))))
        elif "system" in config:
            for i, block in enumerate(config["system"]["coordinates"]):
                model = _build_model(block["kind"], block.get("params", {}),
                                     block.get("mass", 1.0))
                coordinates.append((block.get("label", f"q{i + 1}"), model))
        else:
            raise ConfigError("no system specified (use --coord or a config file)")
        try:
            numbers = QuantumNumbers(tuple(int(v) for v in qn.split(",")))
        except ValueError as exc:
            raise ConfigError(f"bad quantum numbers {qn!r}") from exc
        system = SeparableSystem(tuple(coordinates))
        result = ebk_spectrum(system, numbers, cfg)
        if fmt == "json":
            payload = {
                "total_energy": result.total_energy,
                "loops": [
                    {
                        "coordinate": system.label(i),
                        "n": numbers.values[i],
                        "energy": result.coordinate_energies[i],
                        "loop_action_over_hbar": result.loop_actions[i].J.real / cfg.hbar,
                        "semiclassical_action_over_h": result.semiclassical_actions[i] / cfg.h,
                    }
                    for i in range(system.dimension)
                ],
            }
            _write(json.dumps(payload, indent=2) + "\n", out_path)
        else:
            columns = ("coordinate", "n", "energy", "loop_action_over_hbar",
                       "semiclassical_action_over_h")
            rows = [
                {
                    "coordinate": system.label(i),
                    "n": numbers.values[i],
                    "energy": result.coordinate_energies[i],
                    "loop_action_over_hbar": result.loop_actions[i].J.real / cfg.hbar,
                    "semiclassical_action_over_h": result.semiclassical_actions[i] / cfg.h,
                }
                for i in range(system.dimension)
            ]
            rows.append({"coordinate": "total", "n": sum(numbers.values),
                         "energy": result.total_energy,
                         "loop_action_over_hbar": None,
                         "semiclassical_action_over_h": None})
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([row["coordinate"]] + [_fmt(row[c]) for c in columns[1:]])
            _write(buf.getvalue(), out_path)

    sys.exit(_run(body))


@main.command("hbar-scan")
@_common_options
@_potential_options
@click.option("--level", type=int, required=True)
@click.option("--halvings", type=int, default=3, help="Times hbar is halved after the start.")
def cmd_hbar_scan(config_path, hbar, out_path, fmt, seedless, potential, params, mass,
                  level, halvings):
    """Tabulate the semiclassical error across hbar halvings."""

    def body():
        config = _load_config(config_path)
        model = _resolve_model(config, potential, params, mass)
        base = _resolve_solver(config, hbar)
        ocfg = _resolve_oracle(config)
        if halvings < 0:
            raise ConfigError("--halvings must be nonnegative")
        rows = []
        for k in range(halvings + 1):
            h = base.hbar / 2**k
            cfg = SolverConfig(**{**_solver_kwargs(base), "hbar": h})
            e_wkb = wkb_energy(model, level, cfg)
            e_oracle = oracle_eigenvalue(model, level, ocfg, hbar=h)
            rows.append({"hbar": h, "E_wkb": e_wkb, "E_oracle": e_oracle,
                         "abs_diff": abs(e_wkb - e_oracle)})
        columns = ("hbar", "E_wkb", "E_oracle", "abs_diff")
        _emit(rows, columns, fmt, out_path)

    sys.exit(_run(body))


if __name__ == "__main__":
    main()
