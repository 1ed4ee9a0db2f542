"""remitwatch command line.

Subcommands: simulate, train, evaluate, serve, replay. Service options
resolve as flags > REMITWATCH_* environment variables > config file.
"""

from __future__ import annotations

import argparse
import json
import sys

from .chainsim import ScenarioConfig, init_scenario
from .mlcore import classification_report, load_artifact
from .pipeline import read_dataset, schema_hash
from .service.config import load_service_config
from .service.runtime import ServiceRuntime


def cmd_simulate(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        config = ScenarioConfig.from_dict(json.load(fh))
    blocks = args.blocks
    if blocks is None:
        blocks = max(1, int(round(config.duration / config.mean_block_interval)))
    sim = init_scenario(config)
    sim.advance(blocks)
    count = sim.export_dataset(args.out)
    print(f"wrote {count} transactions over {blocks} blocks to {args.out}")
    return 0


def cmd_train(args) -> int:
    runtime = ServiceRuntime(args.data_dir)
    config = json.loads(args.model_config) if args.model_config else {}
    artifact = runtime.train_model(args.model, config, args.data,
                                   test_fraction=args.test_fraction)
    if args.out:
        from .mlcore import save_artifact
        save_artifact(artifact, args.out)
    print(json.dumps({"model_id": artifact.model_id,
                      "metrics": artifact.metrics.to_dict()}, indent=2))
    return 0


def cmd_evaluate(args) -> int:
    artifact = load_artifact(args.model)
    if artifact.feature_schema_hash != schema_hash():
        print("error: artifact feature schema does not match this build", file=sys.stderr)
        return 2
    header, records = read_dataset(args.data)
    corridor_risk = {f"{c[0]}->{c[1]}": c[2]
                     for c in header.get("config", {}).get("corridors", [])}
    ordered = sorted(records, key=lambda r: (r.timestamp_epoch, r.tx_hash))
    from .pipeline import build_matrix
    X, y, _hashes = build_matrix(ordered, corridor_risk)
    model = artifact.load_model()
    norm = artifact.load_normalizer()
    Z = (X - norm.mean) / norm.std if norm else X
    scores = model.predict_proba_batch(Z)
    report = classification_report(y.astype(int), (scores >= 0.5).astype(int), scores)
    print(json.dumps(report.to_dict(), indent=2))
    return 0


def cmd_serve(args) -> int:
    config = load_service_config(path=args.config, flags={
        "host": args.host, "port": args.port, "data_dir": args.data_dir,
        "scenario_path": args.scenario,
    })
    from .service.app import serve

    server, runtime = serve(config)
    host, port = server.server_address[:2]
    print(f"remitwatch service on http://{host}:{port} "
          f"(data dir {runtime.data_dir})", flush=True)
    try:
        import threading
        threading.Event().wait()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


def cmd_replay(args) -> int:
    runtime = ServiceRuntime(args.data_dir)
    if args.model:
        from .mlcore import load_artifact as load
        from .riskengine import TransactionScorer

        artifact = load(args.model)
        runtime.scorer = TransactionScorer(artifact, runtime.thresholds,
                                           runtime.corridor_risk)
    speed = args.speed if args.speed == "max" else float(args.speed)
    stats = runtime.stream_dataset(args.data, speed)
    print(json.dumps(stats, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="remitwatch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a labeled transaction dataset")
    p.add_argument("--config", required=True, help="scenario config JSON file")
    p.add_argument("--blocks", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("train", help="train a fraud model on a dataset")
    p.add_argument("--model", required=True, choices=["logistic", "gbm", "forest"])
    p.add_argument("--data", required=True)
    p.add_argument("--out", default=None, help="artifact output path")
    p.add_argument("--data-dir", default="./remitwatch-data")
    p.add_argument("--test-fraction", type=float, default=0.25)
    p.add_argument("--model-config", default=None, help="hyperparameter JSON")
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("evaluate", help="evaluate a model artifact on a dataset")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", default=None)
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--data-dir", default=None)
    p.add_argument("--scenario", default=None)
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("replay", help="re-run a dataset through scoring and rules")
    p.add_argument("--data", required=True)
    p.add_argument("--speed", default="max")
    p.add_argument("--model", default=None)
    p.add_argument("--data-dir", default="./remitwatch-data")
    p.set_defaults(fn=cmd_replay)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
