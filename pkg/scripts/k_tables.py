"""Print multiplicative-sequence tables for the builtin genera and time them."""

import argparse
import time
from dataclasses import dataclass, field

from vgenera.multiseq import GenusSpec, genus_from_spec


@dataclass
class Config:
    genera: list = field(default_factory=lambda: ["signature", "a_hat", "todd", "witten"])
    max_weight: int = 5
    q_order: int = 2


def main(cfg: Config):
    for name in cfg.genera:
        spec = GenusSpec.named(name, cfg.q_order if name == "witten" else 0)
        start = time.perf_counter()
        _, ms = genus_from_spec(spec, cfg.max_weight)
        elapsed = time.perf_counter() - start
        print(f"# {name} ({spec.variables}), weights <= {cfg.max_weight}, {elapsed:.3f}s")
        for line in ms.render_lines():
            print(line)
        print()


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--genera", nargs="+", default=Config().genera)
    p.add_argument("--max-weight", type=int, default=Config.max_weight)
    p.add_argument("--q-order", type=int, default=Config.q_order)
    a = p.parse_args()
    main(Config(a.genera, a.max_weight, a.q_order))
