"""Run the default generated-conjugate experiment for each kind and write CSVs to results/."""
import argparse
import json
import pathlib
import time

from conjforge.harness import ExperimentConfig, rows_to_csv, run_experiment
from conjforge.rootsys import RootSystemKind

OUT = pathlib.Path(__file__).resolve().parent.parent / "results"

p = argparse.ArgumentParser()
p.add_argument("--kinds", default="A3,B3,C3,D4,G2,F4")
p.add_argument("--trials", type=int, default=1000)
p.add_argument("--seed", type=int, default=1)
args = p.parse_args()

OUT.mkdir(exist_ok=True)
summary = {}
for name in args.kinds.split(","):
    k = RootSystemKind.parse(name)
    cfg = ExperimentConfig(family=k.family, rank=k.rank, trials=args.trials, seed=args.seed)
    t0 = time.perf_counter()
    rows, agg = run_experiment(cfg)
    agg["seconds"] = round(time.perf_counter() - t0, 2)
    (OUT / f"{name}_seed{args.seed}.csv").write_text(rows_to_csv(rows))
    summary[name] = agg
    print(name, json.dumps(agg))
(OUT / f"summary_seed{args.seed}.json").write_text(json.dumps(summary, indent=1) + "\n")
