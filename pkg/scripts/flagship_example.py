"""Vertical A-hat genus of a fibre product of fibrations with fibre dimensions q and q'.

With q=2, q'=3 the degree-3 term is (1/576) p[1](pi1) p[1](pi2), the cup product
of the two degree -1/24 terms.
"""

import argparse
from dataclasses import dataclass

from vgenera.multiseq import GenusSpec, genus_from_spec
from vgenera.vertical import FormalFibration, check_multiplicativity, vertical_genus


@dataclass
class Config:
    genus: str = "a_hat"
    q: int = 2
    q2: int = 3
    max_degree: int = 12


def main(cfg: Config) -> int:
    pi, pi2 = FormalFibration("pi1", cfg.q), FormalFibration("pi2", cfg.q2)
    _, ms = genus_from_spec(GenusSpec.named(cfg.genus), (cfg.max_degree + cfg.q + cfg.q2) // 4)
    for label, fibs in (("pi1", [pi]), ("pi2", [pi2]), ("pi1 x pi2", [pi, pi2])):
        v = vertical_genus(ms, fibs, cfg.max_degree)
        print(f"{cfg.genus}({label}):")
        for d in v.degrees():
            print(f"  deg {d}: {v.homogeneous(d).render()}")
    report = check_multiplicativity(ms, pi, pi2, cfg.max_degree)
    print("genus of product vs cup product:")
    for line in report.lines():
        print("  " + line)
    return 0 if report.ok else 1


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--genus", default=Config.genus)
    p.add_argument("--q", type=int, default=Config.q)
    p.add_argument("--q2", type=int, default=Config.q2)
    p.add_argument("--max-degree", type=int, default=Config.max_degree)
    a = p.parse_args()
    raise SystemExit(main(Config(a.genus, a.q, a.q2, a.max_degree)))
