"""Command-line interface.

Subcommands:

  verify      run the full identity/invariant battery; exit 0 iff all pass
  synth       emit a pulse sequence for an encoded gate in text format
  lcu-sim     fault-injected leakage-unit batches, one CSV row per fault rate
  propagate   fault-insertion sweep through an encoded gate
  qec-sim     seeded Monte-Carlo error-correction rounds, CSV per trial

Any flag may also be supplied from a key=value config file via --config;
explicit flags override file values.
"""

from __future__ import annotations

import argparse
import json
import sys

from .encoding import BlockLayout
from .hamiltonians import ExchangeModel
from .lcu import synth_lcu
from .pulses import synth_encoded_cnot, synth_encoded_cp, synth_encoded_hadamard
from .simulate import (
    LCU_BATCH_HEADER,
    ErrorChannel,
    lcu_fault_batch,
    run_ft_round,
)
from .stabilizer import build_hybrid, propagate_fault

MODELS = tuple(m.value for m in ExchangeModel)


def _load_config(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SystemExit(f"config line without '=': {raw.rstrip()}")
            key, val = line.split("=", 1)
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _emit(text: str, args, stdout):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def _parse_channel(spec: str) -> ErrorChannel:
    parts = [float(x) for x in spec.split(",")]
    if len(parts) == 1:
        return ErrorChannel.bit_flip(parts[0])
    if len(parts) != 3:
        raise SystemExit("channel must be 'p' or 'px,py,pz'")
    return ErrorChannel(*parts)


def cmd_verify(args, stdout) -> int:
    from .verification import run_all

    results = run_all(fast=args.fast)
    for res in results:
        stdout.write(res.line() + "\n")
    failed = [r.number for r in results if not r.passed]
    if failed:
        stdout.write(f"FAILED criteria: {failed}\n")
        return 1
    stdout.write("all criteria passed\n")
    return 0


def _synthesize(gate: str, model: str, ideal_z: bool):
    if gate == "cnot":
        return synth_encoded_cnot(1, 2, model, ideal_z=ideal_z)
    if gate == "cp":
        return synth_encoded_cp((1, 2), model, ideal_z=ideal_z)
    if gate == "hadamard":
        return synth_encoded_hadamard(1, model, ideal_z=ideal_z)
    if gate == "lcu":
        return synth_lcu(model, ideal_z=ideal_z)
    raise SystemExit(f"unknown gate {gate!r}")


def cmd_synth(args, stdout) -> int:
    seq = _synthesize(args.gate, args.model, args.ideal_z)
    _emit(seq.to_text(), args, stdout)
    return 0


def cmd_lcu_sim(args, stdout) -> int:
    rates = [float(x) for x in args.fault_rates.split(",")]
    rows = [
        lcu_fault_batch(args.model, p, args.trials, args.seed, confidence=args.confidence)
        for p in rates
    ]
    if args.json:
        payload = [row.__dict__ for row in rows]
        _emit(json.dumps(payload, indent=2) + "\n", args, stdout)
    else:
        text = LCU_BATCH_HEADER + "\n" + "".join(row.as_csv() + "\n" for row in rows)
        _emit(text, args, stdout)
    return 0


def cmd_propagate(args, stdout) -> int:
    seq = _synthesize(args.gate, args.model, ideal_z=False)
    layout = BlockLayout(seq.n_qubits // 2)
    bounds = set(seq.segment_boundaries())
    positions = range(seq.pulse_count + 1) if args.sweep_insertions else sorted(bounds)
    rows = []
    for q in range(1, seq.n_qubits + 1):
        for pos in positions:
            r = propagate_fault(seq, q, args.letter, pos, layout)
            rows.append(r)
    if args.json:
        payload = [
            {
                "qubit": r.fault_qubit,
                "letter": r.fault_letter,
                "insert_after": r.insert_after,
                "boundary": r.boundary,
                "support": list(r.support),
                "leaking_blocks": list(r.leaking_blocks),
            }
            for r in rows
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args, stdout)
    else:
        lines = ["qubit,letter,insert_after,boundary,support,leaking_blocks"]
        for r in rows:
            lines.append(
                f"{r.fault_qubit},{r.fault_letter},{r.insert_after},"
                f"{int(r.boundary)},{'+'.join(map(str, r.support))},"
                f"{'+'.join(map(str, r.leaking_blocks))}"
            )
        _emit("\n".join(lines) + "\n", args, stdout)
    return 0


def cmd_qec_sim(args, stdout) -> int:
    code = build_hybrid(args.code)
    channel = _parse_channel(args.channel)
    lcu_on = args.lcu == "on"
    records = [
        run_ft_round(code, None, channel, lcu_on, master_seed=args.seed, trial=t)
        for t in range(args.trials)
    ]
    if args.json:
        payload = [
            {
                "trial": r.trial,
                "verdict": r.verdict,
                "fidelity": r.fidelity,
                "events": [[e.qubit, e.pauli, e.location] for e in r.events],
                "syndrome": list(r.syndrome),
                "recovery": r.recovery,
            }
            for r in records
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args, stdout)
        return 0
    lines = ["trial,verdict,fidelity,n_events,syndrome,recovery"]
    for r in records:
        syn = "".join(map(str, r.syndrome))
        lines.append(
            f"{r.trial},{r.verdict},{r.fidelity:.9f},{len(r.events)},{syn},{r.recovery}"
        )
    failures = sum(r.verdict in ("logical-failure", "leakage-failure") for r in records)
    lines.append(f"# failures,{failures},of,{args.trials}")
    _emit("\n".join(lines) + "\n", args, stdout)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="exchange-ft",
        description="encoded gates, leakage correction and hybrid-code simulation "
        "from exchange interactions",
    )
    parser.add_argument(
        "--config",
        help="key=value file supplying defaults; keys matching the chosen "
        "subcommand's flags are applied, explicit flags win",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    submap = {}

    p = submap["verify"] = sub.add_parser("verify", help="run the verification battery")
    p.add_argument("--fast", action="store_true", help="smaller Monte-Carlo sizes")
    p.set_defaults(func=cmd_verify)

    p = submap["synth"] = sub.add_parser("synth", help="emit a pulse sequence")
    p.add_argument("--model", choices=MODELS, default="xy")
    p.add_argument("--gate", choices=("cnot", "cp", "hadamard", "lcu"), required=True)
    p.add_argument("--ideal-z", action="store_true", help="keep differential-Z pulses ideal")
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = submap["lcu-sim"] = sub.add_parser("lcu-sim", help="fault-injected leakage-unit batches")
    p.add_argument("--model", choices=MODELS, default="xy")
    p.add_argument("--fault-rates", default="0.0,0.001,0.01", help="comma-separated rates")
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--confidence", type=float, default=0.99)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lcu_sim)

    p = submap["propagate"] = sub.add_parser("propagate", help="fault-insertion sweep through a gate")
    p.add_argument("--gate", choices=("cnot", "cp", "hadamard"), default="cnot")
    p.add_argument("--model", choices=MODELS, default="xy")
    p.add_argument("--letter", choices=("X", "Y", "Z"), default="X")
    p.add_argument("--sweep-insertions", action="store_true",
                   help="every pulse boundary, not just factor boundaries")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_propagate)

    p = submap["qec-sim"] = sub.add_parser("qec-sim", help="Monte-Carlo error-correction rounds")
    p.add_argument("--code", choices=("phase3", "five"), default="phase3")
    p.add_argument("--channel", default="0.001,0,0", help="'p' (bit flip) or 'px,py,pz'")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lcu", choices=("on", "off"), default="on")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_qec_sim)
    return parser, submap


def _apply_config(subparser, config: dict) -> None:
    defaults = {}
    for action in subparser._actions:
        if action.dest in config:
            raw = config[action.dest]
            if isinstance(action.const, bool) or isinstance(action.default, bool):
                defaults[action.dest] = raw.lower() in ("1", "true", "yes", "on")
            elif action.type is not None:
                defaults[action.dest] = action.type(raw)
            else:
                defaults[action.dest] = raw
            action.required = False
    subparser.set_defaults(**defaults)


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser, submap = build_parser()
    # a light pre-pass pulls out --config and the subcommand so config values
    # can stand in even for required flags
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    pre.add_argument("command", nargs="?")
    known, _ = pre.parse_known_args(argv)
    if known.config and known.command in submap:
        _apply_config(submap[known.command], _load_config(known.config))
    args = parser.parse_args(argv)
    return args.func(args, stdout)


if __name__ == "__main__":
    sys.exit(main())
