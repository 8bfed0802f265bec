"""Write the pinned A3 instance (seed 42, trial 0) used by the golden-file tests."""
import json
import pathlib

from conjforge.harness import ExperimentConfig, gen_instance

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden"

cfg = ExperimentConfig(family="A", rank=3, seed=42, trials=1)
u, v, w = gen_instance(cfg, 0)
OUT.mkdir(parents=True, exist_ok=True)
(OUT / "a3_seed42_trial0.json").write_text(json.dumps(
    {"config": cfg.to_json(), "trial": 0, "u": u.to_json(cfg.kind), "v": v.to_json(cfg.kind),
     "w_true": w.to_json()}, indent=1) + "\n")
(OUT / "a3_seed42_u.json").write_text(json.dumps(u.to_json(cfg.kind), indent=1) + "\n")
(OUT / "a3_seed42_v.json").write_text(json.dumps(v.to_json(cfg.kind), indent=1) + "\n")
print("wrote", sorted(p.name for p in OUT.iterdir()))
