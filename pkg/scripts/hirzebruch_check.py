"""Tabulate genera of projective spaces two ways: K-table pairing and [x^n] f^(n+1)."""

import argparse
from dataclasses import dataclass

from vgenera import oracles
from vgenera.bordism import cpn_character, genus_eval
from vgenera.multiseq import BUILTIN_GENERA, CHERN, GenusSpec, genus_from_spec


@dataclass
class Config:
    n_max: int = 8
    q_order: int = 2


def main(cfg: Config) -> int:
    mismatches = 0
    print(f"{'genus':<10} {'n':>2}  {'value':<32} agree")
    for name in BUILTIN_GENERA:
        spec = GenusSpec.named(name, cfg.q_order if name == "witten" else 0)
        weight = cfg.n_max if spec.variables == CHERN else cfg.n_max // 2
        f, ms = genus_from_spec(spec, weight)
        for n in range(1, cfg.n_max + 1):
            by_table = genus_eval(ms, cpn_character(n, spec.variables))
            by_coeff = oracles.cp_value_by_coefficient(f, n)
            agree = by_table == by_coeff
            mismatches += not agree
            if by_table != 0 or not agree:
                print(f"{name:<10} {n:>2}  {str(by_table):<32} {'yes' if agree else 'NO'}")
    print(f"mismatches: {mismatches}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n-max", type=int, default=Config.n_max)
    p.add_argument("--q-order", type=int, default=Config.q_order)
    a = p.parse_args()
    raise SystemExit(main(Config(a.n_max, a.q_order)))
