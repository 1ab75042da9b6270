"""Batch command-line interface.

Subcommands:

* ``verify``   certify the reduction for one ladder size and report any
               deviation from previously reported matrices;
* ``pauli``    emit the Pauli decomposition as JSON;
* ``synth``    emit a one-step Trotter circuit and its gate counts;
* ``run``      sweep the dynamics of the configured observables over a
               time grid and write a CSV (or JSON) time series;
* ``fidelity`` compare average gate fidelities of the native and scaled
               ZZ-rotation implementations over an angle grid.

All randomness is derived from the root seed recorded in the output, so a
given configuration reproduces its output byte for byte.  The environment
variable ``RKSIM_THREADS`` caps the number of worker threads used to fan
out independent sweeps.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import engine, reduction
from .circuits import MODES, NATIVE, count_gates, circuit_to_text, synthesize_trotter
from .engine import ExactEvolver, NoiseModel
from .fidelity import (average_gate_fidelity, rzz_native_channel,
                       rzz_scaled_channel, rzz_unitary)
from .lattice import (LadderGeometry, build_reference_state, flipped_plaquettes,
                      reachable_states)
from .pauli import decompose_hamiltonian
from .reduction import build_effective_hamiltonian, build_reduction_report

BACKEND_ORDER = ("exact", "ideal", "noisy")


class ConfigError(ValueError):
    """Configuration problem, message prefixed with the offending field path."""


@dataclass
class RunConfig:
    """Declarative description of one dynamics run."""

    n_plaquettes: int
    dt: float
    t_max: float
    lam: float = 1.0
    j_coupling: float = 1.0
    trotter_mode: str = NATIVE
    backends: tuple[str, ...] = ("exact", "ideal")
    noise: NoiseModel = field(default_factory=NoiseModel)
    observables: tuple[str, ...] = ("F",)
    seed: int = 0
    output_path: str | None = None

    def __post_init__(self) -> None:
        if self.n_plaquettes < 2:
            raise ConfigError("n_plaquettes: must be at least 2")
        if self.dt <= 0:
            raise ConfigError("dt: must be positive")
        if self.t_max < self.dt:
            raise ConfigError("t_max: must be at least dt")
        if self.trotter_mode not in MODES:
            raise ConfigError(f"trotter_mode: must be one of {MODES}")
        for backend in self.backends:
            if backend not in BACKEND_ORDER:
                raise ConfigError(f"backends: unknown backend {backend!r}")
        if self.seed < 0:
            raise ConfigError("seed: must be nonnegative")
        for name in self.observables:
            _parse_observable(name, self.n_plaquettes)

    def to_dict(self) -> dict:
        return {
            "n_plaquettes": self.n_plaquettes,
            "lambda": self.lam,
            "j_coupling": self.j_coupling,
            "dt": self.dt,
            "t_max": self.t_max,
            "trotter_mode": self.trotter_mode,
            "backends": list(self.backends),
            "noise": {
                "p1": self.noise.p1,
                "p2": self.noise.p2,
                "p_readout": self.noise.p_readout,
                "shots": self.noise.shots,
            },
            "observables": list(self.observables),
            "seed": self.seed,
            "output_path": self.output_path,
        }


_CONFIG_KEYS = {
    "n_plaquettes", "lambda", "j_coupling", "dt", "t_max", "trotter_mode",
    "backends", "noise", "observables", "seed", "output_path",
}
_NOISE_KEYS = {"p1", "p2", "p_readout", "shots"}


def config_from_dict(data: dict) -> RunConfig:
    """Strict parser: unknown fields are rejected, errors carry field paths."""
    if not isinstance(data, dict):
        raise ConfigError("config: expected a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"{sorted(unknown)[0]}: unknown field")
    missing = {"n_plaquettes", "dt", "t_max"} - set(data)
    if missing:
        raise ConfigError(f"{sorted(missing)[0]}: required field missing")

    def take(key, kind, default=None, path=None):
        if key not in data or data[key] is None:
            return default
        value = data[key]
        path = path or key
        if kind is float and isinstance(value, int):
            value = float(value)
        if not isinstance(value, kind) or isinstance(value, bool):
            raise ConfigError(f"{path}: expected {kind.__name__}")
        return value

    noise_data = data.get("noise", {})
    if not isinstance(noise_data, dict):
        raise ConfigError("noise: expected an object")
    unknown = set(noise_data) - _NOISE_KEYS
    if unknown:
        raise ConfigError(f"noise.{sorted(unknown)[0]}: unknown field")
    noise_kwargs = {}
    for key in _NOISE_KEYS:
        if key in noise_data:
            value = noise_data[key]
            if key == "shots":
                if not isinstance(value, int) or isinstance(value, bool):
                    raise ConfigError("noise.shots: expected int")
            elif isinstance(value, int) and not isinstance(value, bool):
                value = float(value)
            elif not isinstance(value, float):
                raise ConfigError(f"noise.{key}: expected number")
            noise_kwargs[key] = value
    try:
        noise = NoiseModel(**noise_kwargs)
    except ValueError as exc:
        raise ConfigError(f"noise: {exc}") from exc

    backends = data.get("backends", ["exact", "ideal"])
    if not isinstance(backends, list) or not backends:
        raise ConfigError("backends: expected a nonempty list")
    observables = data.get("observables", ["F"])
    if not isinstance(observables, list) or not observables:
        raise ConfigError("observables: expected a nonempty list")

    try:
        return RunConfig(
            n_plaquettes=take("n_plaquettes", int),
            dt=take("dt", float),
            t_max=take("t_max", float),
            lam=take("lambda", float, 1.0),
            j_coupling=take("j_coupling", float, 1.0),
            trotter_mode=take("trotter_mode", str, NATIVE),
            backends=tuple(dict.fromkeys(backends)),
            noise=noise,
            observables=tuple(dict.fromkeys(observables)),
            seed=take("seed", int, 0),
            output_path=take("output_path", str, None),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config: {exc}") from exc


def _parse_observable(name: str, n: int) -> tuple[str, int | None]:
    if name == "F":
        return name, None
    if name.startswith("C") and name[1:].isdigit():
        r = int(name[1:])
        if 1 <= r <= n // 2:
            return name, r
        raise ConfigError(f"observables: {name}: distance must lie in 1..{n // 2}")
    raise ConfigError(f"observables: unknown observable {name!r}")


def _max_workers() -> int:
    try:
        return max(1, int(os.environ.get("RKSIM_THREADS", "1")))
    except ValueError:
        return 1


def _fmt(x: float) -> str:
    return f"{x:.12g}"


# ---------------------------------------------------------------------------
# run

def _backend_rows(config: RunConfig, backend: str, grid: np.ndarray,
                  observables: list[tuple[str, np.ndarray]]) -> list[tuple]:
    eff = build_effective_hamiltonian(config.n_plaquettes, config.j_coupling, config.lam)
    tag = backend if backend != "noisy" else f"noisy_{config.trotter_mode}"
    rows = []
    if backend == "exact":
        evolver = ExactEvolver(eff)
        psi0 = np.zeros(eff.dim)
        psi0[0] = 1.0
        for t in grid:
            state = evolver.state(psi0, t)
            for name, values in observables:
                rows.append((t, tag, name, engine.vector_expectation(state, values), None, None))
        return rows

    decomposition = decompose_hamiltonian(eff)
    step = synthesize_trotter(decomposition, config.dt, 1, config.trotter_mode)
    dim = 1 << eff.qubits
    if backend == "ideal":
        psi = np.zeros(dim, dtype=complex)
        psi[0] = 1.0
        for k, t in enumerate(grid):
            if k:
                psi = engine.run_ideal(step, psi)
            for name, values in observables:
                rows.append((t, tag, name, engine.vector_expectation(psi, values), None, None))
        return rows

    backend_index = BACKEND_ORDER.index(backend)
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    for k, t in enumerate(grid):
        if k:
            rho = engine.evolve_density(step, config.noise, rho)
        rng = np.random.default_rng(np.random.SeedSequence([config.seed, backend_index, k]))
        counts = engine.sample_counts(rho, config.noise, rng)
        for name, values in observables:
            mean, stderr, discard = engine.sampled_expectation(counts, values)
            rows.append((t, tag, name, mean, stderr, discard))
    return rows


def run_time_series(config: RunConfig) -> list[tuple]:
    """All rows of the configured sweep: (t, backend, observable, value,
    stderr, discard_fraction), grouped by backend in canonical order."""
    eff = build_effective_hamiltonian(config.n_plaquettes, config.j_coupling, config.lam)
    observables = []
    for name in config.observables:
        _, r = _parse_observable(name, config.n_plaquettes)
        if r is None:
            observables.append((name, engine.orbit_flippable_values(eff.basis)))
        else:
            observables.append((name, engine.orbit_correlation_values(
                eff.basis, config.n_plaquettes, r)))
    n_steps = int(math.floor(config.t_max / config.dt + 1e-9))
    grid = np.arange(n_steps + 1) * config.dt
    backends = [b for b in BACKEND_ORDER if b in config.backends]

    workers = min(_max_workers(), len(backends))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(
                lambda b: _backend_rows(config, b, grid, observables), backends))
    else:
        chunks = [_backend_rows(config, b, grid, observables) for b in backends]
    return [row for chunk in chunks for row in chunk]


def rows_to_csv(rows: list[tuple], seed: int) -> str:
    lines = [f"# seed={seed}", "t,backend,observable,value,stderr,discard_fraction"]
    for t, tag, name, value, stderr, discard in rows:
        lines.append(",".join([
            _fmt(t), tag, name, _fmt(value),
            "" if stderr is None else _fmt(stderr),
            "" if discard is None else _fmt(discard),
        ]))
    return "\n".join(lines) + "\n"


def rows_to_json(rows: list[tuple], seed: int) -> str:
    payload = {
        "seed": seed,
        "rows": [
            {"t": t, "backend": tag, "observable": name, "value": value,
             "stderr": stderr, "discard_fraction": discard}
            for t, tag, name, value, stderr, discard in rows
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def gnuplot_script(csv_path: str, rows: list[tuple]) -> str:
    backends = list(dict.fromkeys(row[1] for row in rows))
    observables = list(dict.fromkeys(row[2] for row in rows))
    lines = [
        f'# plot companion for {csv_path}',
        'set datafile separator ","',
        'set key outside',
        'set xlabel "t"',
    ]
    for obs in observables:
        series = ", ".join(
            f'"{csv_path}" using 1:((strcol(2) eq "{tag}" && strcol(3) eq "{obs}") ? $4 : NaN) '
            f'with linespoints title "{tag}"' for tag in backends)
        lines.append(f'set ylabel "{obs}"')
        lines.append(f"plot {series}")
        lines.append("pause -1")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# verify

def verification_report(n: int, j: float = 1.0, lam: float = 1.0) -> dict:
    """Reduction report plus invariant checks, as a JSON-ready dict."""
    if n > 20:
        raise ConfigError("N: configuration-level verification supports N <= 20")
    report = build_reduction_report(n, j, lam)
    checks: dict[str, object] = {"projection_certified": True}

    eff = build_effective_hamiltonian(n, j, lam)
    proj = reduction.projection_matrix(n)
    full = reduction.config_space_hamiltonian(n, j, lam)
    evals, evecs = np.linalg.eigh(eff.matrix)
    lifted = proj.T @ evecs
    residual = np.max(np.abs(full @ lifted - lifted * evals[np.newaxis, :]))
    checks["spectrum_containment"] = bool(residual < 1e-10)

    if n % 2 == 0 and n <= 12:
        geometry = LadderGeometry(n)
        reference = build_reference_state(geometry)
        states = reachable_states(reference)
        masks = {flipped_plaquettes(state, reference) for state in states}
        configs = set(reduction.enumerate_configs(n))
        checks["lattice_bijection"] = bool(
            len(masks) == len(states) and masks == configs)
    else:
        checks["lattice_bijection"] = None

    if reduction.reference_data.reported_matrix(n) is None:
        checks["reported_matrix"] = "unavailable"
    elif not report.discrepancies:
        checks["reported_matrix"] = "match"
    else:
        checks["reported_matrix"] = "discrepancies"

    ok = all(value is not False for value in checks.values()) and all(
        d.oracle_confirms_computed for d in report.discrepancies)
    payload = report.to_dict()
    payload["checks"] = checks
    payload["ok"] = ok
    return payload


# ---------------------------------------------------------------------------
# fidelity

def fidelity_sweep(thetas: list[float], noise: NoiseModel) -> list[tuple[float, float, float]]:
    def one(theta: float) -> tuple[float, float, float]:
        ideal = rzz_unitary(theta)
        native = average_gate_fidelity(ideal, rzz_native_channel(theta, noise))
        scaled = average_gate_fidelity(ideal, rzz_scaled_channel(theta, noise))
        return theta, native, scaled

    workers = min(_max_workers(), len(thetas))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, thetas))
    return [one(theta) for theta in thetas]


# ---------------------------------------------------------------------------
# argument parsing and dispatch

def _write_output(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--seed", type=int, help="root RNG seed override")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format for tabular commands")

    parser = argparse.ArgumentParser(
        prog="rksim",
        description="Rokhsar-Kivelson ladder reduction, circuits, and dynamics")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", parents=[common],
                              help="certify the reduction for one ladder size")
    p_verify.add_argument("n", type=int, help="number of plaquettes")

    p_pauli = sub.add_parser("pauli", parents=[common],
                             help="Pauli decomposition of the reduced Hamiltonian")
    p_pauli.add_argument("n", type=int)
    p_pauli.add_argument("--lam", type=float, default=1.0,
                         help="potential coupling (default 1.0)")

    p_synth = sub.add_parser("synth", parents=[common],
                             help="one-step Trotter circuit and gate counts")
    p_synth.add_argument("n", type=int)
    p_synth.add_argument("--lam", type=float, default=1.0)
    p_synth.add_argument("--dt", type=float, required=True, help="Trotter step")
    p_synth.add_argument("--mode", choices=MODES, default=NATIVE)

    sub.add_parser("run", parents=[common],
                   help="time-series sweep described by --config")

    p_fid = sub.add_parser("fidelity", parents=[common],
                           help="average gate fidelity of native vs scaled RZZ")
    p_fid.add_argument("--thetas", help="comma-separated angles in radians "
                                        "(default: k*pi/16 for k=1..8)")
    p_fid.add_argument("--p1", type=float, default=NoiseModel.p1)
    p_fid.add_argument("--p2", type=float, default=NoiseModel.p2)
    p_fid.add_argument("--p-readout", type=float, default=NoiseModel.p_readout)
    return parser


def _cmd_verify(args) -> int:
    payload = verification_report(args.n)
    _write_output(json.dumps(payload, indent=2) + "\n", args.out)
    return 0 if payload["ok"] else 1


def _cmd_pauli(args) -> int:
    eff = build_effective_hamiltonian(args.n, 1.0, args.lam)
    decomposition = decompose_hamiltonian(eff)
    _write_output(decomposition.to_json() + "\n", args.out)
    if args.out:
        print(f"{len(decomposition)} Pauli terms for N={args.n} "
              f"on {decomposition.qubits} qubits")
    return 0


def _cmd_synth(args) -> int:
    eff = build_effective_hamiltonian(args.n, 1.0, args.lam)
    decomposition = decompose_hamiltonian(eff)
    circuit = synthesize_trotter(decomposition, args.dt, 1, args.mode)
    counts = count_gates(circuit).to_dict()
    counts["qubits"] = circuit.qubits
    counts["n_terms"] = len(decomposition)
    if args.out:
        _write_output(circuit_to_text(circuit), args.out)
        sys.stdout.write(json.dumps(counts, indent=2) + "\n")
    else:
        sys.stdout.write(circuit_to_text(circuit))
        sys.stderr.write(json.dumps(counts, indent=2) + "\n")
    return 0


def _cmd_run(args) -> int:
    if not args.config:
        raise ConfigError("config: run requires --config")
    with open(args.config) as handle:
        data = json.load(handle)
    config = config_from_dict(data)
    if args.seed is not None:
        config.seed = args.seed
        if config.seed < 0:
            raise ConfigError("seed: must be nonnegative")
    rows = run_time_series(config)
    out = args.out or config.output_path
    if args.format == "json":
        _write_output(rows_to_json(rows, config.seed), out)
    else:
        _write_output(rows_to_csv(rows, config.seed), out)
        if out:
            with open(out + ".gnuplot", "w") as handle:
                handle.write(gnuplot_script(out, rows))
    return 0


def _cmd_fidelity(args) -> int:
    if args.thetas:
        try:
            thetas = [float(part) for part in args.thetas.split(",") if part.strip()]
        except ValueError as exc:
            raise ConfigError(f"thetas: {exc}") from exc
    else:
        thetas = [k * math.pi / 16 for k in range(1, 9)]
    for theta in thetas:
        if not 0.0 < theta <= math.pi / 2 + 1e-12:
            raise ConfigError("thetas: angles must lie in (0, pi/2]")
    noise = NoiseModel(p1=args.p1, p2=args.p2, p_readout=args.p_readout)
    table = fidelity_sweep(thetas, noise)
    if args.format == "json":
        payload = [{"theta": t, "f_avg_native": a, "f_avg_scaled": b} for t, a, b in table]
        _write_output(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = ["theta,f_avg_native,f_avg_scaled"]
        lines += [f"{_fmt(t)},{_fmt(a)},{_fmt(b)}" for t, a, b in table]
        _write_output("\n".join(lines) + "\n", args.out)
    return 0


_DISPATCH = {
    "verify": _cmd_verify,
    "pauli": _cmd_pauli,
    "synth": _cmd_synth,
    "run": _cmd_run,
    "fidelity": _cmd_fidelity,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except ConfigError as exc:
        sys.stderr.write(json.dumps({"error": str(exc)}) + "\n")
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(json.dumps({"error": str(exc)}) + "\n")
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
