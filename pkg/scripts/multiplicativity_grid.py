"""Check vertical multiplicativity over a grid of fibre dimensions and report timings."""

import argparse
import time
from dataclasses import dataclass, field

from vgenera.multiseq import BUILTIN_GENERA, GenusSpec, degree_unit, genus_from_spec
from vgenera.vertical import FormalFibration, check_multiplicativity


@dataclass
class Config:
    genera: list = field(default_factory=lambda: list(BUILTIN_GENERA))
    fibre_dims: list = field(default_factory=lambda: [1, 2, 3, 4])
    max_degree: int = 16
    q_order: int = 2


def main(cfg: Config) -> int:
    failures = 0
    for name in cfg.genera:
        spec = GenusSpec.named(name, cfg.q_order if name == "witten" else 0)
        unit = degree_unit(spec.variables)
        _, ms = genus_from_spec(spec, (cfg.max_degree + 2 * max(cfg.fibre_dims)) // unit)
        start = time.perf_counter()
        passed = 0
        for q in cfg.fibre_dims:
            for q2 in cfg.fibre_dims:
                pi = FormalFibration("pi1", q, variables=spec.variables)
                pi2 = FormalFibration("pi2", q2, variables=spec.variables)
                ok = check_multiplicativity(ms, pi, pi2, cfg.max_degree).ok
                passed += ok
                failures += not ok
        total = len(cfg.fibre_dims) ** 2
        print(f"{name:<10} {passed}/{total} multiplicative to degree {cfg.max_degree}  ({time.perf_counter() - start:.2f}s)")
    return 1 if failures else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--genera", nargs="+", default=Config().genera)
    p.add_argument("--fibre-dims", nargs="+", type=int, default=Config().fibre_dims)
    p.add_argument("--max-degree", type=int, default=Config.max_degree)
    p.add_argument("--q-order", type=int, default=Config.q_order)
    a = p.parse_args()
    raise SystemExit(main(Config(a.genera, a.fibre_dims, a.max_degree, a.q_order)))
