"""Command-line front end: ``vgenera {coeffs,eval,vertical,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from . import acceptance
from .bordism import evaluate_element, parse_element
from .errors import DomainError, InvariantViolation, UsageError, ValidationError
from .multiseq import (
    BUILTIN_GENERA,
    GenusSpec,
    characteristic_series,
    degree_unit,
    genus_from_spec,
    series_order_for,
)
from .scalars import scalar_to_json
from .vertical import (
    FormalFibration,
    base_class_to_json,
    check_multiplicativity_many,
    fibre_degree_bound,
    vertical_genus,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

_CONFIG_FIELDS = ("genus", "series_order", "max_degree", "q_order", "fibrations", "base_dim", "seed")


@dataclass(frozen=True)
class WorkspaceConfig:
    """Everything one invocation needs. ``series_order=None`` means "as high as the computation requires"."""

    genus: GenusSpec = field(default_factory=lambda: GenusSpec.named("a_hat"))
    series_order: int | None = None
    max_degree: int = 8
    q_order: int = 0
    fibrations: tuple = ()
    base_dim: int | None = None
    seed: int = 0

    def __post_init__(self):
        for name in ("series_order", "max_degree", "q_order", "base_dim", "seed"):
            v = getattr(self, name)
            if v is not None and (not isinstance(v, int) or isinstance(v, bool) or v < 0):
                raise ValidationError(f"{name}: expected a non-negative integer, got {v!r}")
        if self.series_order is not None and self.series_order < self.max_degree:
            raise ValidationError(f"series_order: {self.series_order} is below max_degree {self.max_degree}")
        if self.genus.q_order != self.q_order:
            object.__setattr__(self, "genus", replace(self.genus, q_order=self.q_order))
        fibs = tuple(
            f if f.variables == self.genus.variables else replace(f, variables=self.genus.variables)
            for f in self.fibrations
        )
        ids = [f.id for f in fibs]
        if len(set(ids)) != len(ids):
            raise ValidationError(f"fibrations: ids must be unique, got {ids}")
        object.__setattr__(self, "fibrations", fibs)

    @property
    def unit(self) -> int:
        return degree_unit(self.genus.variables)

    def order_for_weight(self, weight: int) -> int:
        need = series_order_for(self.genus.variables, weight)
        if self.series_order is None:
            return need
        if self.series_order < need:
            raise UsageError(f"series_order: {self.series_order} is too small, this computation needs {need}")
        return self.series_order

    def to_json(self) -> dict:
        return {
            "genus": self.genus.to_json(),
            "series_order": self.series_order,
            "max_degree": self.max_degree,
            "q_order": self.q_order,
            "fibrations": [f.to_json() for f in self.fibrations],
            "base_dim": self.base_dim,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "WorkspaceConfig":
        if not isinstance(data, Mapping):
            raise ValidationError("config: expected a JSON object")
        unknown = set(data) - set(_CONFIG_FIELDS)
        if unknown:
            raise ValidationError(f"config: unknown field(s) {sorted(unknown)}")
        kwargs = {k: data[k] for k in ("series_order", "max_degree", "base_dim", "seed") if data.get(k) is not None}
        genus = data.get("genus", "a_hat")
        spec = _genus_from_value(genus)
        kwargs["genus"] = spec
        kwargs["q_order"] = data.get("q_order", spec.q_order)
        kwargs["fibrations"] = tuple(FormalFibration.from_json(f) for f in data.get("fibrations", []))
        return cls(**kwargs)


def _genus_from_value(value) -> GenusSpec:
    if isinstance(value, str):
        return GenusSpec.named(value)
    if isinstance(value, Mapping):
        return GenusSpec.from_json(value)
    raise ValidationError(f"genus: expected a builtin name or an object, got {value!r}")


def _read_json(path: str, what: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"{what}: cannot read {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what}: {path!r} is not valid JSON ({exc.msg} at line {exc.lineno})") from None


def load_genus(value: str) -> GenusSpec:
    """A builtin name, or the path of a JSON genus definition."""
    if value in BUILTIN_GENERA or not os.path.exists(value):
        return GenusSpec.named(value)
    return _genus_from_value(_read_json(value, "genus"))


def build_config(args: argparse.Namespace) -> WorkspaceConfig:
    base = WorkspaceConfig.from_json(_read_json(args.config, "config")) if args.config else WorkspaceConfig()
    genus = load_genus(args.genus) if args.genus is not None else base.genus
    q_order = args.q_order if args.q_order is not None else (genus.q_order if args.genus is not None else base.q_order)
    fibrations = base.fibrations
    if args.fibration:
        fibrations = tuple(FormalFibration.parse(text, genus.variables) for text in args.fibration)
    return WorkspaceConfig(
        genus=genus,
        series_order=args.order if args.order is not None else base.series_order,
        max_degree=args.max_degree if args.max_degree is not None else base.max_degree,
        q_order=q_order,
        fibrations=fibrations,
        base_dim=args.base_dim if args.base_dim is not None else base.base_dim,
        seed=args.seed if args.seed is not None else base.seed,
    )


# --- commands --------------------------------------------------------------

@dataclass
class Outcome:
    code: int
    text: list
    document: dict


def cmd_coeffs(config: WorkspaceConfig) -> Outcome:
    weight = config.max_degree // config.unit
    order = config.order_for_weight(weight)
    _, ms = genus_from_spec(config.genus, weight)
    f_full = characteristic_series(config.genus, order)
    doc = {
        "command": "coeffs",
        "genus": config.genus.to_json(),
        "max_degree": config.max_degree,
        "f_series": f_full.to_json(),
        "k_table": ms.to_json(),
    }
    return Outcome(EXIT_OK, ms.render_lines(), doc)


def cmd_eval(config: WorkspaceConfig, expression: str, max_degree_given: bool) -> Outcome:
    element = parse_element(expression)
    if max_degree_given and element.degree > config.max_degree:
        raise UsageError(f"max_degree: {config.max_degree} is below the degree {element.degree} of the expression")
    # degrees off the grading lattice have no characteristic numbers and evaluate to 0
    weight = element.degree // config.unit
    config.order_for_weight(weight)
    _, ms = genus_from_spec(config.genus, weight)
    v = evaluate_element(ms, element)
    doc = {
        "command": "eval",
        "genus": config.genus.to_json(),
        "expression": expression,
        "element": element.to_json(),
        "value": scalar_to_json(v),
    }
    return Outcome(EXIT_OK, [str(v)], doc)


def cmd_vertical(config: WorkspaceConfig) -> Outcome:
    fibs = list(config.fibrations)
    if not fibs:
        raise UsageError("fibrations: declare at least one with --fibration id=<s>,q=<n>[,sign=<+-1>]")
    D = config.max_degree
    weight = fibre_degree_bound(fibs, D) // config.unit
    config.order_for_weight(weight)
    _, ms = genus_from_spec(config.genus, weight)
    text = [f"genus: {config.genus.name} ({config.genus.variables}), base degrees <= {D}"]
    singles = []
    for pi in fibs:
        v = vertical_genus(ms, [pi], D, config.base_dim)
        singles.append({"fibrations": [pi.id], "value": base_class_to_json(v)})
        text.append(f"vertical genus of {pi.id} (q={pi.fibre_dim}, sign={pi.sign:+d}):")
        text += _render_graded(v)
    product = vertical_genus(ms, fibs, D, config.base_dim)
    text.append(f"vertical genus of {' x '.join(f.id for f in fibs)}:")
    text += _render_graded(product)
    report = check_multiplicativity_many(ms, fibs, D, config.base_dim)
    text.append("multiplicativity:")
    text += ["  " + line for line in report.lines()]
    text.append(f"result: {'OK' if report.ok else 'MISMATCH'}")
    doc = {
        "command": "vertical",
        "genus": config.genus.to_json(),
        "max_degree": D,
        "base_dim": config.base_dim,
        "fibrations": [f.to_json() for f in fibs],
        "genera": singles,
        "product": base_class_to_json(product),
        "multiplicativity": {
            "ok": report.ok,
            "rows": [
                {
                    "degree": r.degree,
                    "product": base_class_to_json(r.product),
                    "cup": base_class_to_json(r.cup),
                    "ok": r.ok,
                }
                for r in report.rows
            ],
        },
    }
    return Outcome(EXIT_OK if report.ok else EXIT_FAILED, text, doc)


def _render_graded(v) -> list[str]:
    if not v:
        return ["  0"]
    return [f"  deg {d}: {v.homogeneous(d).render()}" for d in v.degrees()]


def cmd_verify(config: WorkspaceConfig, corrupt: bool = False) -> Outcome:
    results = acceptance.run_checks(seed=config.seed, corrupt=corrupt)
    passed = sum(r.ok for r in results)
    ok = passed == len(results)
    text = [r.line() for r in results]
    text.append(f"summary: {passed}/{len(results)} checks passed (seed {config.seed})")
    doc = {
        "command": "verify",
        "seed": config.seed,
        "checks": [r.to_json() for r in results],
        "passed": passed,
        "total": len(results),
        "ok": ok,
    }
    return Outcome(EXIT_OK if ok else EXIT_FAILED, text, doc)


# --- argument parsing ------------------------------------------------------

def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", metavar="FILE", help="JSON workspace file; flags override its fields")
    parser.add_argument("--genus", metavar="NAME|FILE", help=f"builtin ({', '.join(BUILTIN_GENERA)}) or JSON genus file")
    parser.add_argument("--order", type=int, metavar="N", help="order of the characteristic power series")
    parser.add_argument("--max-degree", type=int, metavar="D", help="highest (base) degree to compute")
    parser.add_argument("--q-order", type=int, metavar="M", help="truncation order in q for q-expansion genera")
    parser.add_argument("--fibration", action="append", metavar="id=S,q=N,sign=+-1", help="repeatable")
    parser.add_argument("--base-dim", type=int, metavar="N", help="dimension of the base; higher classes vanish")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--seed", type=int, metavar="S", help="seed for randomized checks (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vgenera", description="Exact computations with classical and vertical genera.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("coeffs", help="print the multiplicative sequence K_0, K_1, ...")
    _common(p)
    p = sub.add_parser("eval", help="evaluate a genus on a bordism expression such as '3*CP2^2 - 2*CP4'")
    _common(p)
    p.add_argument("expression", nargs="?", help="bordism expression")
    p.add_argument("--manifold-expr", metavar="EXPR", help="same as the positional expression")
    p = sub.add_parser("vertical", help="vertical genera of declared fibrations and their fibre product")
    _common(p)
    p = sub.add_parser("verify", help="run the acceptance checks")
    _common(p)
    p.add_argument("--corrupt-ktable", action="store_true", help=argparse.SUPPRESS)
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str]:
    """Run one command; returns ``(exit_code, stdout_text, stderr_text)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed its message
        return (EXIT_USAGE if exc.code else EXIT_OK), "", ""
    try:
        config = build_config(args)
        if args.command == "coeffs":
            out = cmd_coeffs(config)
        elif args.command == "eval":
            expr = args.manifold_expr if args.manifold_expr is not None else args.expression
            if expr is None:
                raise UsageError("expression: give a bordism expression or --manifold-expr")
            if args.manifold_expr is not None and args.expression is not None:
                raise UsageError("expression: give either a positional expression or --manifold-expr, not both")
            out = cmd_eval(config, expr, args.max_degree is not None)
        elif args.command == "vertical":
            out = cmd_vertical(config)
        else:
            out = cmd_verify(config, corrupt=args.corrupt_ktable)
    except (UsageError, DomainError) as exc:
        return EXIT_USAGE, "", f"vgenera: error: {exc}\n"
    except InvariantViolation as exc:
        return EXIT_FAILED, "", f"vgenera: internal check failed: {exc}\n"
    if args.format == "json":
        body = json.dumps(out.document, indent=2, ensure_ascii=False) + "\n"
    else:
        body = "".join(line + "\n" for line in out.text)
    return out.code, body, ""


def main(argv: Sequence[str] | None = None) -> int:
    code, out, err = run(argv)
    for stream, text in ((sys.stdout, out), (sys.stderr, err)):
        if text:
            if hasattr(stream, "reconfigure") and stream.encoding and stream.encoding.lower() != "utf-8":
                stream.reconfigure(encoding="utf-8")
            stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
