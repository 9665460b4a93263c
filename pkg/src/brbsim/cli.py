"""Command-line front end: expand config files into runs and write CSV.

Config files hold ``key = value`` lines; ``#`` starts a comment. A value may
be a comma-separated list, and integers accept ``a..b`` or ``a..b:step``
ranges. Lists expand to the cross-product of all keys, in document order,
with integer values ascending.

    topology = random_regular
    n = 6..20:2
    k = 3
    protocol = dolev,mtd,bft
    policy = unbounded
    capacity = unbounded
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import sys
from dataclasses import replace
from pathlib import Path

from .engine import AUTO_CAPACITY, PLACEMENTS, ExperimentConfig, RunMetrics, sweep
from .errors import ConfigError, SweepError

CSV_COLUMNS = (
    "topology",
    "n",
    "k",
    "f",
    "protocol",
    "policy",
    "capacity",
    "adversary",
    "seed",
    "messages_total",
    "messages_correct",
    "latency_rounds",
    "quiescence_round",
    "delivered_correct",
    "safety_violations",
)

INT_KEYS = {"n", "k", "seed"}
AUTO_KEYS = {"f", "delivery_threshold", "round_cap"}
TEXT_KEYS = {"topology", "protocol", "policy", "adversary", "placement"}
KEYS = INT_KEYS | AUTO_KEYS | TEXT_KEYS | {"capacity", "strict"}
REQUIRED = ("topology", "n", "k")


def _int_items(raw: str, line: int) -> list[int]:
    try:
        if ".." not in raw:
            return [int(raw)]
        lo, _, rest = raw.partition("..")
        hi, _, step = rest.partition(":")
        lo_i, hi_i, step_i = int(lo), int(hi), int(step or 1)
    except ValueError:
        raise ConfigError(f"malformed integer or range {raw!r}", line) from None
    if step_i < 1 or hi_i < lo_i:
        raise ConfigError(f"empty or malformed range {raw!r}", line)
    return list(range(lo_i, hi_i + 1, step_i))


def _parse_values(key: str, text: str, line: int) -> list:
    items = [item.strip() for item in text.split(",")]
    if not text.strip() or any(not item for item in items):
        raise ConfigError(f"empty value for {key!r}", line)
    if key in TEXT_KEYS:
        return list(dict.fromkeys(items))
    if key == "strict":
        table = {"true": True, "false": False}
        if any(item.lower() not in table for item in items):
            raise ConfigError("strict must be true or false", line)
        return list(dict.fromkeys(table[item.lower()] for item in items))
    values: list = []
    for item in items:
        if key in AUTO_KEYS and item == "auto":
            values.append(None)
        elif key == "capacity" and item in (AUTO_CAPACITY, "unbounded"):
            values.append(AUTO_CAPACITY if item == AUTO_CAPACITY else None)
        else:
            values.extend(_int_items(item, line))
    symbolic = [v for v in values if not isinstance(v, int)]
    numeric = sorted({v for v in values if isinstance(v, int)})
    return list(dict.fromkeys(symbolic)) + numeric


def parse_config(text: str) -> list[ExperimentConfig]:
    """Expand a config file into validated configs (see the module docstring)."""
    assigned: dict[str, tuple[int, list]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        key, sep, value = body.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"expected 'key = value', got {body!r}", lineno)
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in assigned:
            raise ConfigError(f"duplicate key {key!r} (first set on line {assigned[key][0]})", lineno)
        assigned[key] = (lineno, _parse_values(key, value, lineno))
    for key in REQUIRED:
        if key not in assigned:
            raise ConfigError(f"missing required key {key!r}")

    keys = list(assigned)
    last_line = max(line for line, _ in assigned.values())
    configs = []
    for combo in itertools.product(*(assigned[key][1] for key in keys)):
        fields = dict(zip(keys, combo))
        try:
            configs.append(ExperimentConfig(**fields).validate())
        except ConfigError as exc:
            setting = ", ".join(f"{k}={v}" for k, v in fields.items())
            raise ConfigError(f"{exc} ({setting})", last_line) from None
    return configs


def csv_row(config: ExperimentConfig, m: RunMetrics) -> list:
    return [
        config.topology.value,
        config.n,
        config.k,
        m.f,
        config.protocol.value,
        config.policy.value,
        m.capacity,
        config.adversary.value,
        config.seed,
        m.messages_total,
        m.messages_correct,
        m.latency_rounds,
        m.quiescence_round,
        m.delivered_correct,
        m.safety_violations,
    ]


def render_csv(rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(["" if v is None else v for v in row])
    return buf.getvalue()


def run_configs(
    configs: list[ExperimentConfig], reps: int = 1, parallel: int = 1
) -> list[tuple[ExperimentConfig, RunMetrics]]:
    """One (config, metrics) pair per run, ordered by config index then repetition."""
    results = sweep(configs, reps, parallel)
    expanded = [replace(cfg, seed=cfg.seed + r) for cfg in configs for r in range(reps)]
    return list(zip(expanded, results))


def _load(path: str) -> list[ExperimentConfig]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from None
    try:
        return parse_config(text)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="brbsim", description="Byzantine reliable broadcast simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run every config in a file and write CSV")
    run_p.add_argument("config", help="config file")
    run_p.add_argument("--out", help="CSV path (default: standard output)")
    run_p.add_argument("--seed", type=int, help="override the base seed of every config")
    run_p.add_argument("--reps", type=int, default=1, help="repetitions per config (seeds seed..seed+reps-1)")
    run_p.add_argument("--parallel", type=int, default=1, help="worker processes")
    run_p.add_argument("--placement", choices=PLACEMENTS, help="override source/fault placement")

    val_p = sub.add_parser("validate", help="parse a config file and report the number of runs")
    val_p.add_argument("config", help="config file")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configs = _load(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if args.command == "validate":
        print(f"{len(configs)} config(s) valid")
        return 0

    if args.reps < 1 or args.parallel < 1:
        print("error: --reps and --parallel must be >= 1", file=sys.stderr)
        return 2
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.placement is not None:
        overrides["placement"] = args.placement
    configs = [replace(cfg, **overrides) for cfg in configs]

    try:
        results = run_configs(configs, args.reps, args.parallel)
    except SweepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = render_csv([csv_row(cfg, m) for cfg, m in results])

    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"error: {args.out}: {exc.strerror or exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)

    bad = [(cfg, m) for cfg, m in results if m.safety_violations]
    for cfg, m in bad:
        print(
            f"safety violation: {m.safety_violations} wrong deliveries in "
            f"{cfg.topology.value} n={cfg.n} k={cfg.k} protocol={cfg.protocol.value} seed={cfg.seed}",
            file=sys.stderr,
        )
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
