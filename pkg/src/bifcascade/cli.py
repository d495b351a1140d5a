"""Command-line front end.

    bifcascade cascade|criteria|verify|render --config run.json --out DIR

Exit codes: 0 success, 1 configuration error, 2 numerical failure or a failed
hard check.  ``CASCADE_PRECISION`` (decimal digits) overrides the configured
precision.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional

from . import verification
from .cascade import CascadeSpec, mlc_rate_diagnostic, run_cascade
from .criteria import lemma_quantities, milnor_series, theorem2_condition, theorem5_conditions
from .errors import CascadeError, LevelError
from .precision import BINARY64, PRECISION_ENV, Precision, precision_from_env
from .render import ImageWindow, Overlays, ppm_bytes, render
from .rotation import IntPower, RotationNumber, make_int
from .serialize import constants_from_json, constants_to_json, trace_csv, trace_to_json

log = logging.getLogger("bifcascade")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------- config

def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def config_precision(cfg: dict) -> Precision:
    if os.environ.get(PRECISION_ENV, "").strip():
        try:
            return precision_from_env()
        except ValueError as exc:
            raise ConfigError(f"{PRECISION_ENV}: {exc}") from exc
    digits = cfg.get("precision")
    if digits is None or int(digits) <= 16:
        return BINARY64
    return Precision(int(digits))


def _exact_int(q) -> int:
    if isinstance(q, IntPower):
        if q.log2 > 2 ** 22:
            raise ConfigError(f"{q} is too large to use as an exponent")
        return q.base ** q.exponent
    return q


def generate_sequence(gen: dict) -> list:
    kind = gen.get("kind")
    length = int(gen.get("length", 0))
    if length < 1:
        raise ConfigError("generator length must be positive")
    if kind == "constant":
        return [RotationNumber(int(gen.get("p", 1)), make_int(gen.get("q", 2)))] * length
    if kind == "tower":
        # q_{m+1} = 2^q_m, t_m = 1/q_m
        q = make_int(gen.get("q0", 2))
        out = [RotationNumber(1, q)]
        while len(out) < length:
            q = make_int(IntPower(2, _exact_int(q)))
            out.append(RotationNumber(1, q))
        return out
    raise ConfigError(f"unknown sequence generator {kind!r}")


def parse_sequence(section: dict, key: str = "sequence") -> list:
    if "generator" in section:
        return generate_sequence(section["generator"])
    if key not in section:
        raise ConfigError(f"missing '{key}'")
    try:
        return [RotationNumber.parse(t) for t in section[key]]
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(f"bad rotation number: {exc}") from exc


def cascade_spec(cfg: dict) -> CascadeSpec:
    sec = cfg.get("cascade")
    if not isinstance(sec, dict):
        raise ConfigError("missing 'cascade' section")
    args = parse_sequence(sec, "arguments")
    try:
        return CascadeSpec(tuple(args), int(sec.get("base_period", 1)), config_precision(cfg),
                           cfg.get("tol"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def constants(cfg: dict):
    try:
        return constants_from_json(cfg.get("constants"))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad constants: {exc}") from exc


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise ConfigError(f"expected [re, im], got {v!r}")


def _write(out: Path, name: str, text) -> None:
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    if isinstance(text, bytes):
        path.write_bytes(text)
    else:
        path.write_text(text, encoding="utf-8")


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


# ---------------------------------------------------------------- commands

def cmd_cascade(cfg: dict, out: Path) -> int:
    spec = cascade_spec(cfg)
    consts = constants(cfg)
    trace = run_cascade(spec, consts)
    doc = trace_to_json(trace)
    best, values = mlc_rate_diagnostic(spec)
    doc["mlc_rate"] = {"max": best, "values": values}
    doc["constants"] = constants_to_json(consts)
    _write(out, "trace.json", _dump(doc))
    _write(out, "trace.csv", trace_csv(trace))
    return EXIT_OK


def criteria_document(cfg: dict) -> dict:
    sec = cfg.get("criteria")
    if not isinstance(sec, dict):
        raise ConfigError("missing 'criteria' section")
    ts = parse_sequence(sec)
    if len(ts) < 2:
        raise ConfigError("criteria need at least two rotation numbers")
    consts = constants(cfg)
    a = float(sec.get("a", 0.6))
    Q = float(sec.get("Q", 1))
    k = int(sec.get("k", 0))
    n = int(sec.get("n", 1))
    if not 0 < a < 1:
        raise ConfigError("a must lie in (0, 1)")
    if not 0 <= k < len(ts):
        raise ConfigError("k must index the sequence")
    return {
        "sequence": [t.to_json() for t in ts],
        "constants": constants_to_json(consts),
        "milnor_series": milnor_series(ts).to_json(),
        "theorem2_condition": theorem2_condition(ts, a, Q).to_json(),
        "theorem5_conditions": theorem5_conditions(ts, k, consts).to_json(),
        "lemma_quantities": lemma_quantities(ts, n, consts, Q).to_json(),
    }


def cmd_criteria(cfg: dict, out: Path) -> int:
    _write(out, "criteria.json", _dump(criteria_document(cfg)))
    return EXIT_OK


def cmd_verify(cfg: dict, out: Path) -> int:
    consts = constants(cfg)
    tol = cfg.get("tol")
    results = verification.run_all(consts, tol, config_precision(cfg))
    hard_ok = all(r.passed for r in results if r.hard)
    doc = {"all_hard_checks_passed": hard_ok, "checks": [r.to_json() for r in results]}
    _write(out, "verify.json", _dump(doc))
    for r in results:
        kind = "hard" if r.hard else "diag"
        print(f"{'PASS' if r.passed else 'FAIL'} [{kind}] {r.name}: measured={r.measured:.6g} "
              f"threshold={r.threshold:.6g}")
    return EXIT_OK if hard_ok else EXIT_NUMERIC


def render_image(cfg: dict):
    sec = cfg.get("image")
    if not isinstance(sec, dict):
        raise ConfigError("missing 'image' section")
    overlays = Overlays()
    julia_c = sec.get("julia_c", [0.0, 0.0])
    trace = None
    if sec.get("overlay_cascade") or julia_c == "limit":
        trace = run_cascade(cascade_spec(cfg), constants(cfg))
        overlays = Overlays(touch_points=[complex(c) for c in trace.touch_points],
                            centers=[complex(W.center) for W in trace.components],
                            limit=complex(trace.limit))
    if julia_c == "limit":
        julia_c = complex(trace.limit)
    else:
        julia_c = _complex(julia_c)
    pixels = sec.get("pixels", [512, 512])
    try:
        window = ImageWindow(_complex(sec.get("center", [-0.75, 0.0])), float(sec.get("width", 3.0)),
                             (int(pixels[0]), int(pixels[1])), int(sec.get("max_iter", 2048)),
                             sec.get("mode", "parameter"), julia_c)
    except (ValueError, TypeError, IndexError) as exc:
        raise ConfigError(f"bad image window: {exc}") from exc
    if window.mode == "julia" and sec.get("delta_circle"):
        delta = constants(cfg).delta
        overlays = Overlays(delta_circle=delta)
    return render(window, overlays)


def cmd_render(cfg: dict, out: Path) -> int:
    rgb = render_image(cfg)
    try:
        _write(out, "render.ppm", ppm_bytes(rgb))
    except OSError as exc:
        raise ConfigError(f"cannot write image: {exc}") from exc
    return EXIT_OK


COMMANDS = {"cascade": cmd_cascade, "criteria": cmd_criteria, "verify": cmd_verify,
            "render": cmd_render}


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(prog="bifcascade", description=__doc__.split("\n")[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True)
    parser.add_argument("--out", required=True)
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    out = Path(ns.out)
    try:
        cfg = load_config(ns.config)
        return COMMANDS[ns.command](cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CascadeError as exc:
        payload = {"error": str(exc), "type": type(exc).__name__}
        if isinstance(exc, LevelError):
            payload["level"] = exc.level
            payload["cause"] = type(exc.cause).__name__
        print(f"numerical failure: {exc}", file=sys.stderr)
        try:
            _write(out, "error.json", _dump(payload))
        except OSError:
            pass
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entry() -> None:
    sys.exit(main())
