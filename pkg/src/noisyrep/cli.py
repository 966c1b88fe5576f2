"""Command-line front end.

Scenarios are described in flat ``key = value`` files (``#`` starts a
comment)::

    model = bb84            # bb84 | chain
    repeater = shield       # shield | shield-orthogonal | shield-asymptotic | none
    d = 2
    l = 4                   # chain model: one value, or one per repeater
    q = 0.1
    q_min = 0.0
    q_max = 0.3
    q_step = 0.005
    criterion = oneway      # oneway | twoway | precondition
    output = rates.csv

For ``model = chain`` also set ``n`` (number of repeaters) and either
``segment_noise`` (``phase``, ``bit`` or ``bb84``; every segment gets that
noise at strength ``q``) or explicit ``segments = b1,b2,b3,b4; ...`` with
``n + 1`` distributions.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Sequence

from noisyrep.bell_algebra import BellDiagonalDist
from noisyrep.chain import (
    ChainState,
    RepeaterModel,
    ShieldParams,
    bb84_dist,
    bb84_state,
    chain_state,
    shield_repeater,
    shield_repeater_asymptotic,
    shield_repeater_orthogonal,
    trivial_repeater,
)
from noisyrep.errors import FamilyMismatch, MultipleCrossings, NoCrossing, SizeLimit
from noisyrep.secrecy import CRITERIA, KeyRateReport, oneway_rate, qber_threshold

CSV_HEADER = "q,rate,lambda1,lambda2,lambda3,lambda4,precondition,twoway,fidelity"

EXIT_CONFIG = 2
EXIT_MODEL = 3
EXIT_OUTPUT = 4
EXIT_THRESHOLD = 5

REPEATERS = ("shield", "shield-orthogonal", "shield-asymptotic", "none")
SEGMENT_NOISE = ("phase", "bit", "bb84")


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"field '{key}'")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.line = line
        self.key = key


@dataclass
class ScenarioConfig:
    model: str = "bb84"
    repeater: str = "shield"
    d: int = 2
    l: tuple[int, ...] = (0,)
    n: int = 1
    q: float | None = None
    segments: tuple[BellDiagonalDist, ...] | None = None
    segment_noise: str = "phase"
    q_min: float = 0.0
    q_max: float = 0.5
    q_step: float = 0.005
    criterion: str = "oneway"
    output: str | None = None
    lines: dict[str, int] = field(default_factory=dict, repr=False)


def _parse_float(key: str, value: str, line: int) -> float:
    try:
        out = float(value)
    except ValueError:
        raise ConfigError(f"expected a number, got {value!r}", line, key) from None
    if not math.isfinite(out):
        raise ConfigError(f"expected a finite number, got {value!r}", line, key)
    return out


def _parse_int(key: str, value: str, line: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"expected an integer, got {value!r}", line, key) from None


def _parse_choice(key: str, value: str, line: int, choices: Sequence[str]) -> str:
    if value not in choices:
        raise ConfigError(f"expected one of {', '.join(choices)}; got {value!r}", line, key)
    return value


def _parse_segments(value: str, line: int) -> tuple[BellDiagonalDist, ...]:
    dists = []
    for part in value.split(";"):
        weights = [_parse_float("segments", w, line) for w in part.replace(",", " ").split()]
        try:
            dists.append(BellDiagonalDist(tuple(weights)))
        except ValueError as exc:
            raise ConfigError(str(exc), line, "segments") from None
    return tuple(dists)


def parse_config(text: str) -> ScenarioConfig:
    cfg = ScenarioConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError("expected 'key = value'", lineno)
        key, value = (part.strip() for part in content.split("=", 1))
        if key in cfg.lines:
            raise ConfigError(f"duplicate key (first set on line {cfg.lines[key]})", lineno, key)
        cfg.lines[key] = lineno
        if key == "model":
            cfg.model = _parse_choice(key, value, lineno, ("bb84", "chain"))
        elif key == "repeater":
            cfg.repeater = _parse_choice(key, value, lineno, REPEATERS)
        elif key == "d":
            cfg.d = _parse_int(key, value, lineno)
        elif key == "l":
            cfg.l = tuple(_parse_int(key, v, lineno) for v in value.replace(",", " ").split())
        elif key == "n":
            cfg.n = _parse_int(key, value, lineno)
        elif key in ("q", "q_min", "q_max", "q_step"):
            setattr(cfg, key, _parse_float(key, value, lineno))
        elif key == "segments":
            cfg.segments = _parse_segments(value, lineno)
        elif key == "segment_noise":
            cfg.segment_noise = _parse_choice(key, value, lineno, SEGMENT_NOISE)
        elif key == "criterion":
            cfg.criterion = _parse_choice(key, value, lineno, tuple(CRITERIA))
        elif key == "output":
            cfg.output = value
        else:
            raise ConfigError("unknown key", lineno, key)
    _validate(cfg)
    return cfg


def _validate(cfg: ScenarioConfig) -> None:
    line = cfg.lines.get

    if cfg.q is not None and not 0.0 <= cfg.q <= 0.5:
        raise ConfigError("QBER must lie in [0, 0.5]", line("q"), "q")
    if not 0.0 <= cfg.q_min < cfg.q_max <= 0.5:
        raise ConfigError("need 0 <= q_min < q_max <= 0.5", line("q_max") or line("q_min"), "q_max")
    if cfg.q_step <= 0:
        raise ConfigError("q_step must be positive", line("q_step"), "q_step")
    if cfg.repeater in ("shield", "shield-orthogonal"):
        if cfg.d < 2:
            raise ConfigError("d must be >= 2", line("d"), "d")
        if not cfg.l or any(v < 0 for v in cfg.l):
            raise ConfigError("l must be >= 0", line("l"), "l")
    if cfg.model == "bb84":
        if len(cfg.l) != 1:
            raise ConfigError("bb84 model takes a single l", line("l"), "l")
        return
    if cfg.n < 1:
        raise ConfigError("n must be >= 1", line("n"), "n")
    if len(cfg.l) not in (1, cfg.n):
        raise ConfigError(f"give one l or {cfg.n} values", line("l"), "l")
    if cfg.segments is not None and len(cfg.segments) != cfg.n + 1:
        raise ConfigError(f"need {cfg.n + 1} segment distributions", line("segments"), "segments")


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text)


def _repeater(kind: str, d: int, l: int) -> RepeaterModel:
    if kind == "shield":
        return shield_repeater(ShieldParams(d, l))
    if kind == "shield-orthogonal":
        return shield_repeater_orthogonal(ShieldParams(d, l))
    if kind == "shield-asymptotic":
        return shield_repeater_asymptotic()
    return trivial_repeater()


def _segment(kind: str, q: float) -> BellDiagonalDist:
    if kind == "bb84":
        return bb84_dist(q)
    if kind == "bit":
        return BellDiagonalDist((1 - q, 0.0, q, 0.0))
    return BellDiagonalDist((1 - q, q, 0.0, 0.0))


def build_model(cfg: ScenarioConfig) -> Callable[[float | None], ChainState]:
    """Map a QBER value to the scenario's end-to-end state."""
    if cfg.model == "bb84":
        rep = _repeater(cfg.repeater, cfg.d, cfg.l[0])
        return lambda q: bb84_state(q, rep)

    sizes = cfg.l * cfg.n if len(cfg.l) == 1 else cfg.l
    reps = [_repeater(cfg.repeater, cfg.d, size) for size in sizes]

    def model(q):
        if cfg.segments is not None:
            segs = cfg.segments
        else:
            segs = [_segment(cfg.segment_noise, q)] * (cfg.n + 1)
        return chain_state(segs, reps)

    return model


def fmt(value: float) -> str:
    return f"{value:.10f}"


def _flag(value: bool) -> str:
    return "true" if value else "false"


def csv_row(q: float, report: KeyRateReport) -> str:
    fields = [fmt(q), fmt(report.rate_oneway), *(fmt(v) for v in report.lambdas)]
    fields += [_flag(report.precondition_entangled), _flag(report.twoway_ok), fmt(report.fidelity)]
    return ",".join(fields)


def sweep_grid(cfg: ScenarioConfig) -> list[float]:
    count = math.floor((cfg.q_max - cfg.q_min) / cfg.q_step + 1e-9) + 1
    return [round(cfg.q_min + k * cfg.q_step, 12) for k in range(count)]


def render_report(cfg: ScenarioConfig, q: float | None, state: ChainState, report: KeyRateReport) -> str:
    lines = [f"model = {cfg.model}", f"repeater = {cfg.repeater}"]
    if q is not None:
        lines.append(f"q = {fmt(q)}")
    lines += [f"beta{k} = {fmt(b)}" for k, b in enumerate(state.beta, start=1)]
    lines += [f"lambda{k} = {fmt(v)}" for k, v in enumerate(report.lambdas, start=1)]
    lines += [
        f"x = {fmt(report.x)}",
        f"y1 = {fmt(report.y1)}",
        f"y3 = {fmt(report.y3)}",
        f"rate = {fmt(report.rate_oneway)}",
        f"precondition = {_flag(report.precondition_entangled)}",
        f"sufficient = {_flag(report.sufficient_entangled)}",
        f"twoway = {_flag(report.twoway_ok)}",
        f"fidelity = {fmt(report.fidelity)}",
    ]
    return "\n".join(lines) + "\n"


def _write(path: str | None, text: str, stdout) -> None:
    if path is None:
        stdout.write(text)
        return
    # newline="" keeps LF line endings on every platform
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_evaluate(cfg: ScenarioConfig, out: str | None, quiet: bool, stdout) -> int:
    if cfg.q is None and not (cfg.model == "chain" and cfg.segments is not None):
        raise ConfigError("evaluate needs q", key="q")
    state = build_model(cfg)(cfg.q)
    report = oneway_rate(state)
    stdout.write(fmt(report.rate_oneway) + "\n" if quiet else render_report(cfg, cfg.q, state, report))
    if out is not None:
        q = cfg.q if cfg.q is not None else float("nan")
        _write(out, CSV_HEADER + "\n" + csv_row(q, report) + "\n", stdout)
    return 0


def cmd_sweep(cfg: ScenarioConfig, out: str | None, quiet: bool, stdout) -> int:
    model = build_model(cfg)
    rows = [csv_row(q, oneway_rate(model(q))) for q in sweep_grid(cfg)]
    text = CSV_HEADER + "\n" + "".join(row + "\n" for row in rows)
    path = out or cfg.output
    _write(path, text, stdout)
    if not quiet and path is not None:
        print(f"wrote {len(rows)} rows to {path}", file=sys.stderr)
    return 0


def cmd_threshold(cfg: ScenarioConfig, out: str | None, quiet: bool, stdout) -> int:
    q_star = qber_threshold(build_model(cfg), cfg.criterion)
    if not quiet:
        print(f"criterion={cfg.criterion} repeater={cfg.repeater}", file=sys.stderr)
    stdout.write(f"{q_star:.6f}\n")
    if out is not None:
        _write(out, f"{q_star:.6f}\n", stdout)
    return 0


COMMANDS = {"evaluate": cmd_evaluate, "sweep": cmd_sweep, "threshold": cmd_threshold}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisyrep",
        description="Key rates and security thresholds for QKD through noisy repeaters.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("evaluate", "evaluate one state and print the key-rate report"),
        ("sweep", "tabulate the report over a QBER grid as CSV"),
        ("threshold", "find the largest QBER meeting the criterion"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="scenario file (key = value)")
        p.add_argument("--out", help="output path")
        p.add_argument("--quiet", action="store_true", help="print only the essential result")
    return parser


def main(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        buffer = io.StringIO()
        code = COMMANDS[args.command](cfg, args.out, args.quiet, buffer)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FamilyMismatch, SizeLimit) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    except (NoCrossing, MultipleCrossings) as exc:
        print(f"threshold error: {exc}", file=sys.stderr)
        return EXIT_THRESHOLD
    stdout.write(buffer.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
