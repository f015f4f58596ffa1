"""Scenario driver: majorasim <scenario> --config <path> [--out DIR] [--sweep k=v1,v2].

Scenarios
---------
braid          single braid of two adjacent wires, time-resolved correlations
braid-word     compiled braid word on a multi-wire network
deutsch-jozsa  two-qubit Deutsch-Jozsa (exact Fock run and/or Gaussian run)
spectrum       spectra and gaps of the protocol steps, zero-mode profiles

Each run writes a machine-readable summary.json (config echo, endpoint
observables, tolerances, pass/fail) and, for trajectory scenarios, a CSV
with the fixed column order  time, segment_index, step_label, phi,
iGL{m}GR{n}..., gap, purity_residual, total_parity.  Floats are serialized
with 17 significant digits, so identical configs give byte-identical CSVs.
Exit code 0 iff all in-run consistency checks pass.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path

import numpy as np

from . import builder, fock, spectral
from .backend import backend_name
from .builder import ErrorModel, WireParams
from .core import NetworkGeometry
from .evolution import (
    apply_exact_braid,
    correlation_matrix,
    evolve,
    exact_word_state,
    ground_state,
    total_parity,
    wire_parity,
)
from .schedule import (
    BraidMove,
    Ramp,
    compile_word,
    parse_braid_word,
    predicted_correlation_matrix,
    word_operator_order,
    word_time_order,
)

PURITY_LIMIT = 1e-6
PARITY_DRIFT_LIMIT = 1e-6
ANTISYMMETRY_LIMIT = 1e-10
CONTINUITY_LIMIT = 1e-12

SCENARIOS = ("braid", "braid-word", "deutsch-jozsa", "spectrum")


class ConfigError(ValueError):
    pass


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_summary(path: Path, summary: dict) -> None:
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Config validation
# ---------------------------------------------------------------------------

_COMMON_FIELDS = {
    "scenario": (str, None),
    "length": (int, None),
    "J": ((int, float), 1.0),
    "delta": ((int, float), 1.0),
    "mu": ((int, float), 0.0),
    "V": ((int, float), None),
    "alpha": ((int, float), 0.0),
    "zero_tol": ((int, float), 1e-8),
}

_EVOLUTION_FIELDS = {
    "ramp": (str, "smooth"),
    "T": ((int, float), 50.0),
    "dt": ((int, float), 0.02),
    "sample_stride": (int, 25),
    "compute_gap": (bool, True),
    "parity": (list, None),
    "observables": (list, None),
}

_SCHEMAS = {
    "braid": {
        **_COMMON_FIELDS,
        **_EVOLUTION_FIELDS,
        "n_wires": (int, 2),
        "wire": (int, 1),
        "direction": (str, "forward"),
    },
    "braid-word": {
        **_COMMON_FIELDS,
        **_EVOLUTION_FIELDS,
        "n_wires": (int, 3),
        "word": (str, None),
    },
    "deutsch-jozsa": {
        **_COMMON_FIELDS,
        "oracle": (str, None),
        "mode": (str, "gaussian"),
    },
    "spectrum": {
        **_COMMON_FIELDS,
        "n_wires": (int, 2),
        "direction": (str, "forward"),
        "n_phi": (int, 101),
    },
}

_REQUIRED = {
    "braid": ("scenario", "length"),
    "braid-word": ("scenario", "length", "word"),
    "deutsch-jozsa": ("scenario", "oracle"),
    "spectrum": ("scenario", "length"),
}


def validate_config(raw: dict, scenario: str) -> dict:
    """Strict schema check: unknown keys rejected, scenario must match."""
    if scenario not in _SCHEMAS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    schema = _SCHEMAS[scenario]
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"unknown config keys {unknown}; allowed: {sorted(schema)}")
    for key in _REQUIRED[scenario]:
        if key not in raw:
            raise ConfigError(f"missing required config key {key!r}")
    if raw["scenario"] != scenario:
        raise ConfigError(
            f"config is for scenario {raw['scenario']!r}, invoked as {scenario!r}"
        )
    config = {}
    for key, (types, default) in schema.items():
        value = raw.get(key, default)
        if value is not None and not isinstance(value, types):
            raise ConfigError(f"config key {key!r} has wrong type {type(value).__name__}")
        if isinstance(value, float) and not np.isfinite(value):
            raise ConfigError(f"config key {key!r} must be finite")
        config[key] = value
    return config


def _params(config: dict) -> WireParams:
    try:
        return WireParams(
            length=config["length"],
            hopping=float(config["J"]),
            pairing=float(config["delta"]),
            mu=float(config["mu"]),
            potential=None if config["V"] is None else float(config["V"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parity(config: dict, n_wires: int) -> tuple[str, ...]:
    parity = config.get("parity")
    if parity is None:
        return ("even",) * n_wires
    if len(parity) != n_wires or any(p not in ("even", "odd") for p in parity):
        raise ConfigError(f"parity must list 'even'/'odd' per wire, got {parity}")
    return tuple(parity)


def _parse_observable(token: str, n_wires: int) -> tuple[str, int, int]:
    parts = token.split()
    try:
        if len(parts) != 2 or parts[0][0] != "L" or parts[1][0] != "R":
            raise ValueError
        m, n = int(parts[0][1:]), int(parts[1][1:])
    except ValueError:
        raise ConfigError(f"bad observable {token!r}; expected e.g. 'L1 R2'") from None
    if not (1 <= m <= n_wires and 1 <= n <= n_wires):
        raise ConfigError(f"observable {token!r} outside 1..{n_wires}")
    return f"iGL{m}GR{n}", m - 1, n - 1


def _observables(config: dict, n_wires: int) -> list[tuple[str, int, int]]:
    tokens = config.get("observables")
    if tokens is None:
        if n_wires == 2:
            tokens = ["L1 R1", "L2 R2", "L2 R1", "L1 R2"]
        else:
            tokens = [f"L{m} R{n}" for m in range(1, n_wires + 1) for n in range(1, n_wires + 1)]
    return [_parse_observable(tok, n_wires) for tok in tokens]


# ---------------------------------------------------------------------------
# Trajectory scenarios
# ---------------------------------------------------------------------------


def _consistency_checks(traj, continuity: float) -> dict:
    checks = {
        "purity_residual": {"value": traj.max_purity_residual(), "tol": PURITY_LIMIT},
        "parity_drift": {"value": traj.max_parity_drift(), "tol": PARITY_DRIFT_LIMIT},
        "antisymmetry_residual": {
            "value": traj.max_antisymmetry_residual(),
            "tol": ANTISYMMETRY_LIMIT,
        },
        "continuity_residual": {"value": continuity, "tol": CONTINUITY_LIMIT},
    }
    for entry in checks.values():
        entry["pass"] = bool(entry["value"] <= entry["tol"])
    checks["all_pass"] = all(v["pass"] for k, v in checks.items() if k != "all_pass")
    return checks


def _trajectory_rows(traj) -> tuple[list[str], list[list]]:
    header = ["time", "segment_index", "step_label", "phi"]
    header += list(traj.observable_names)
    header += ["gap", "purity_residual", "total_parity"]
    rows = []
    for i in range(traj.n_samples):
        row = [
            float(traj.times[i]),
            int(traj.segment_index[i]),
            traj.step_labels[i],
            float(traj.phis[i]),
        ]
        row += [float(v) for v in traj.observables[i]]
        row += [
            float(traj.gaps[i]),
            float(traj.purity_residuals[i]),
            float(traj.total_parities[i]),
        ]
        rows.append(row)
    return header, rows


def _run_word_scenario(config: dict, out_dir: Path, word) -> int:
    n_wires = config["n_wires"]
    if n_wires < max(move.wire for move in word) + 2:
        raise ConfigError(f"word needs more wires than n_wires={n_wires}")
    params = _params(config)
    geometry = NetworkGeometry(n_wires, config["length"])
    error = ErrorModel(float(config["alpha"]))
    ramp = Ramp(config["ramp"], float(config["T"]))
    zero_tol = float(config["zero_tol"])

    schedule = compile_word(word, params, geometry, ramp, error)
    continuity = schedule.continuity_residual()

    h0 = schedule.initial_hamiltonian()
    parity = _parity(config, n_wires)
    state = ground_state(h0, geometry, parity, zero_tol)
    edge_modes = spectral.wire_edge_modes(h0, geometry, zero_tol)
    missing = [w for w in range(n_wires) if w not in edge_modes]
    if missing:
        raise ConfigError(f"wires {missing} have no zero modes (trivial phase?)")

    obs_spec = _observables(config, n_wires)
    observables = {
        name: (edge_modes[m][0], edge_modes[n][1]) for name, m, n in obs_spec
    }
    traj = evolve(
        state,
        schedule,
        dt=float(config["dt"]),
        observables=observables,
        sample_stride=config["sample_stride"],
        compute_gap=config["compute_gap"],
        zero_tol=zero_tol,
    )

    c0 = correlation_matrix(state, edge_modes)
    c_pred = predicted_correlation_matrix(word, c0)
    c_end = correlation_matrix(traj.final_state, edge_modes)
    exact_state = exact_word_state(state, word, edge_modes)
    gamma_err = float(np.max(np.abs(traj.final_state.gamma - exact_state.gamma)))

    endpoint = {
        "initial": {f"iGL{m + 1}GR{n + 1}": c0[m, n] for m in range(n_wires) for n in range(n_wires)},
        "observed": {f"iGL{m + 1}GR{n + 1}": c_end[m, n] for m in range(n_wires) for n in range(n_wires)},
        "predicted": {f"iGL{m + 1}GR{n + 1}": c_pred[m, n] for m in range(n_wires) for n in range(n_wires)},
        "max_abs_error": float(np.max(np.abs(c_end - c_pred))),
        "gamma_error_vs_exact_braid": gamma_err,
    }
    checks = _consistency_checks(traj, continuity)

    header, rows = _trajectory_rows(traj)
    _write_csv(out_dir / "trajectory.csv", header, rows)
    gaps = traj.gaps[np.isfinite(traj.gaps)]
    summary = {
        "scenario": config["scenario"],
        "config": config,
        "backend": backend_name(),
        "word": {
            "time_order": word_time_order(word),
            "operator_order": word_operator_order(word),
        },
        "endpoints": endpoint,
        "checks": checks,
        "gap_min": float(gaps.min()) if gaps.size else None,
        "initial_wire_parities": [
            wire_parity(state, geometry, w) for w in range(n_wires)
        ],
        "final_wire_parities": [
            wire_parity(traj.final_state, geometry, w) for w in range(n_wires)
        ],
        "orthogonality": {
            "max_drift": traj.max_ortho_drift,
            "n_reorthonormalizations": traj.n_reorthonormalizations,
        },
        "outputs": {"trajectory": "trajectory.csv"},
    }
    _write_summary(out_dir / "summary.json", summary)
    return 0 if checks["all_pass"] else 1


def run_braid(config: dict, out_dir: Path) -> int:
    n_wires = config["n_wires"]
    if n_wires < 2:
        raise ConfigError("braid scenario needs >= 2 wires")
    wire = config["wire"]
    if not (1 <= wire <= n_wires - 1):
        raise ConfigError(f"wire must be in 1..{n_wires - 1}, got {wire}")
    direction = config["direction"]
    if direction not in ("forward", "reverse"):
        raise ConfigError(f"direction must be forward or reverse, got {direction!r}")
    word = (BraidMove(wire - 1, direction == "reverse"),)
    return _run_word_scenario(config, out_dir, word)


def run_braid_word(config: dict, out_dir: Path) -> int:
    word = parse_braid_word(config["word"])
    return _run_word_scenario(config, out_dir, word)


# ---------------------------------------------------------------------------
# Deutsch-Jozsa
# ---------------------------------------------------------------------------


def _fock_section(result: fock.DJResult) -> dict:
    dominant = max(result.overlaps, key=lambda k: abs(result.overlaps[k]))
    amp = result.overlaps[dominant]
    return {
        "p00": result.p00,
        "verdict": result.verdict,
        "wire_parities": [float(p) for p in result.wire_parities],
        "final_amplitudes": {
            key: [val.real, val.imag] for key, val in sorted(result.overlaps.items())
        },
        "dominant_basis_state": dominant,
        "dominant_amplitude": [amp.real, amp.imag],
    }


def run_deutsch_jozsa(config: dict, out_dir: Path) -> int:
    oracle = config["oracle"]
    if oracle not in fock.ORACLE_IDS:
        raise ConfigError(f"oracle must be one of {fock.ORACLE_IDS}, got {oracle!r}")
    mode = config["mode"]
    if mode not in ("fock", "gaussian"):
        raise ConfigError(f"mode must be 'fock' or 'gaussian', got {mode!r}")

    if config["length"] is None:
        config = {**config, "length": 2}
    fock_result = fock.run_deutsch_jozsa(oracle)
    summary = {
        "scenario": config["scenario"],
        "config": config,
        "backend": backend_name(),
        "oracle": oracle,
        "mode": mode,
        "fock": _fock_section(fock_result),
        "verdict": fock_result.verdict,
    }
    checks: dict = {}

    if mode == "gaussian":
        params = _params(config)
        geometry = NetworkGeometry(3, config["length"])
        zero_tol = float(config["zero_tol"])
        h0 = builder.build_network(params, geometry)
        state = ground_state(h0, geometry, ("even", "odd", "even"), zero_tol)
        edge = spectral.wire_edge_modes(h0, geometry, zero_tol)
        if sorted(edge) != [0, 1, 2]:
            raise ConfigError("gaussian mode needs zero modes on all three wires")
        # braid-index order (g1L, g1R, g2L, g2R, g3L, g3R)
        braid_modes = [edge[w][side] for w in range(3) for side in (0, 1)]

        def wire_corrs(st):
            return [
                float(braid_modes[2 * w].v @ st.gamma @ braid_modes[2 * w + 1].v)
                for w in range(3)
            ]

        def parities(st):
            return [wire_parity(st, geometry, w) for w in range(3)]

        rows = []
        current = state
        rows.append(["start", *wire_corrs(current), *parities(current), total_parity(current), current.purity_residual()])
        index_pairs = {"U12": (0, 1), "U23": (1, 2), "U34": (2, 3), "U45": (3, 4), "U56": (4, 5)}
        for label in fock.dj_braid_word(oracle):
            i, j = index_pairs[label]
            current = apply_exact_braid(current, braid_modes[i], braid_modes[j])
            rows.append([label, *wire_corrs(current), *parities(current), total_parity(current), current.purity_residual()])

        header = [
            "braid",
            "iGL1GR1",
            "iGL2GR2",
            "iGL3GR3",
            "parity_w1",
            "parity_w2",
            "parity_w3",
            "total_parity",
            "purity_residual",
        ]
        _write_csv(out_dir / "dj_trace.csv", header, rows)

        final_corr = wire_corrs(current)
        gauss_signature = [int(np.sign(round(c, 6))) for c in final_corr]
        fock_signature = [int(np.sign(round(p, 6))) for p in fock_result.wire_parities]
        initial_corr = wire_corrs(state)
        gauss_verdict = (
            "constant"
            if gauss_signature == [int(np.sign(round(c, 6))) for c in initial_corr]
            else "balanced"
        )
        parity_drift = abs(total_parity(current) - total_parity(state))
        checks = {
            "purity_residual": {
                "value": current.purity_residual(),
                "tol": PURITY_LIMIT,
            },
            "parity_drift": {"value": parity_drift, "tol": PARITY_DRIFT_LIMIT},
            "antisymmetry_residual": {
                "value": float(np.max(np.abs(current.gamma + current.gamma.T))),
                "tol": ANTISYMMETRY_LIMIT,
            },
            "signature_match": {
                "value": float(gauss_signature != fock_signature),
                "tol": 0.5,
            },
        }
        summary["gaussian"] = {
            "initial_correlations": initial_corr,
            "final_correlations": final_corr,
            "initial_wire_parities": parities(state),
            "final_wire_parities": parities(current),
            "signature": gauss_signature,
            "fock_signature": fock_signature,
            "signature_match": gauss_signature == fock_signature,
            "verdict": gauss_verdict,
        }
        summary["verdict"] = gauss_verdict
        summary["outputs"] = {"trace": "dj_trace.csv"}

    for entry in checks.values():
        entry["pass"] = bool(entry["value"] <= entry["tol"])
    checks["all_pass"] = all(v["pass"] for k, v in checks.items() if k != "all_pass")
    summary["checks"] = checks
    _write_summary(out_dir / "summary.json", summary)
    return 0 if checks["all_pass"] else 1


# ---------------------------------------------------------------------------
# Spectrum
# ---------------------------------------------------------------------------


def run_spectrum(config: dict, out_dir: Path) -> int:
    params = _params(config)
    n_wires = config["n_wires"]
    geometry = NetworkGeometry(n_wires, config["length"])
    error = ErrorModel(float(config["alpha"]))
    direction = config["direction"]
    zero_tol = float(config["zero_tol"])
    n_phi = config["n_phi"]
    if n_phi < 2:
        raise ConfigError(f"n_phi must be >= 2, got {n_phi}")

    phis = np.linspace(0.0, np.pi / 2, n_phi)
    rows = []
    gap_min: dict[str, float] = {}
    n_energy = geometry.n_majorana // 2
    for step in builder.STEPS:
        terms = builder.step_terms(step, params, geometry, (0, 1), direction, error)
        step_gaps = []
        for phi in phis:
            rep = spectral.spectrum(terms.at(float(phi)), zero_tol)
            step_gaps.append(rep.gap)
            rows.append(
                [step, float(phi), rep.gap, rep.zero_count]
                + [float(e) for e in rep.energies]
            )
        gap_min[step] = float(min(step_gaps))
    header = ["step", "phi", "gap", "zero_count"] + [f"eps{k}" for k in range(n_energy)]
    _write_csv(out_dir / "spectrum_phi.csv", header, rows)

    h0 = builder.build_network(params, geometry)
    profile_rows = []
    edge = spectral.wire_edge_modes(h0, geometry, zero_tol) if params.in_topological_phase else {}
    for w in sorted(edge):
        left, right = edge[w]
        for site in range(geometry.length):
            o, e = geometry.site_labels(w, site)
            profile_rows.append(
                [
                    w + 1,
                    site,
                    float(left.v[o] ** 2 + left.v[e] ** 2),
                    float(right.v[o] ** 2 + right.v[e] ** 2),
                ]
            )
    _write_csv(
        out_dir / "zero_mode_profile.csv",
        ["wire", "site", "weight_left", "weight_right"],
        profile_rows,
    )

    continuity = builder.check_step_continuity(
        params, geometry, (0, 1), error, (direction,)
    )
    checks = {
        "continuity_residual": {
            "value": continuity.max_residual,
            "tol": CONTINUITY_LIMIT,
            "pass": continuity.ok,
        },
    }
    checks["all_pass"] = checks["continuity_residual"]["pass"]
    summary = {
        "scenario": config["scenario"],
        "config": config,
        "backend": backend_name(),
        "gap_min_per_step": gap_min,
        "gap_min": min(gap_min.values()),
        "zero_modes_per_wire": {str(w + 1): 2 for w in sorted(edge)},
        "checks": checks,
        "outputs": {
            "spectrum": "spectrum_phi.csv",
            "zero_mode_profile": "zero_mode_profile.csv",
        },
    }
    _write_summary(out_dir / "summary.json", summary)
    return 0 if checks["all_pass"] else 1


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

_RUNNERS = {
    "braid": run_braid,
    "braid-word": run_braid_word,
    "deutsch-jozsa": run_deutsch_jozsa,
    "spectrum": run_spectrum,
}


def preset_names() -> list[str]:
    root = resources.files("majorasim") / "presets"
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def load_preset(name: str) -> dict:
    path = resources.files("majorasim") / "presets" / f"{name}.json"
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}"
        ) from None


def _parse_sweep(text: str) -> tuple[str, list]:
    if "=" not in text:
        raise ConfigError(f"sweep must look like key=v1,v2,..., got {text!r}")
    key, _, values = text.partition("=")
    parsed = []
    for tok in values.split(","):
        tok = tok.strip()
        if not tok:
            raise ConfigError(f"empty sweep value in {text!r}")
        try:
            parsed.append(json.loads(tok))
        except json.JSONDecodeError:
            parsed.append(tok)
    return key.strip(), parsed


def _sweep_workers(n_runs: int) -> int:
    cap = os.environ.get("MAJORASIM_THREADS")
    if cap:
        try:
            return max(1, min(n_runs, int(cap)))
        except ValueError:
            raise ConfigError(f"MAJORASIM_THREADS must be an integer, got {cap!r}") from None
    return max(1, min(n_runs, os.cpu_count() or 1))


def _run_one(scenario: str, raw_config: dict, out_dir: Path) -> int:
    config = validate_config(raw_config, scenario)
    out_dir.mkdir(parents=True, exist_ok=True)
    return _RUNNERS[scenario](config, out_dir)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="majorasim",
        description="Braiding simulator for Majorana zero modes in Kitaev wire networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for scenario in SCENARIOS:
        p = sub.add_parser(scenario, help=f"run the {scenario} scenario")
        p.add_argument("--config", type=Path, help="path to a JSON run configuration")
        p.add_argument("--preset", type=str, help="name of a packaged preset config")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument(
            "--sweep",
            type=str,
            help="fan out over key=v1,v2,... (one subdirectory per value)",
        )
    sub.add_parser("presets", help="list packaged preset configs")

    args = parser.parse_args(argv)
    if args.command == "presets":
        for name in preset_names():
            print(name)
        return 0

    try:
        if (args.config is None) == (args.preset is None):
            raise ConfigError("provide exactly one of --config or --preset")
        if args.preset is not None:
            raw = load_preset(args.preset)
        else:
            try:
                raw = json.loads(args.config.read_text(encoding="utf-8"))
            except FileNotFoundError:
                raise ConfigError(f"config file not found: {args.config}") from None
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")

        if args.sweep:
            key, values = _parse_sweep(args.sweep)
            runs = []
            for value in values:
                cfg = dict(raw)
                cfg[key] = value
                runs.append((cfg, args.out / f"{key}={value}"))
            codes = []
            with ThreadPoolExecutor(max_workers=_sweep_workers(len(runs))) as pool:
                futures = [
                    pool.submit(_run_one, args.command, cfg, out) for cfg, out in runs
                ]
                codes = [f.result() for f in futures]
            args.out.mkdir(parents=True, exist_ok=True)
            _write_summary(
                args.out / "sweep_summary.json",
                {
                    "key": key,
                    "values": values,
                    "exit_codes": codes,
                    "runs": [str(out.name) for _, out in runs],
                },
            )
            return max(codes) if codes else 0

        return _run_one(args.command, raw, args.out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, spectral.ZeroModeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
