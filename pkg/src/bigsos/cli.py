"""Command-line front end.

Thin adapter over the library: parse a spec file, build the least model,
and print unfoldings, equivalence verdicts, or reports.  All output is
deterministic for a fixed seed; exit codes are 0 (ok), 1 (syntax),
2 (validation), 3 (non-monotone), 4 (non-convergence), 5 (internal).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .behaviour import Bottom
from .engine import (least_model, model_to_dot, model_to_json, unfold,
                     unfold_to_json)
from .errors import (BigsosError, NonConvergenceError, NonMonotoneError,
                     ParseError, UnknownStateError)
from .relations import (LawConfig, check_equivalence, congruence_test, law_suite,
                        suite_to_json)
from .speclang import check_monotone, parse_spec, validate_spec
from .terms import App, UniversePolicy, parse_term, print_term


@dataclass(frozen=True)
class Config:
    max_count: int = 500
    max_size: int = 12
    max_iters: int = 1000
    depth: int = 3
    seed: int = 0
    format: str = "text"
    force: bool = False

    def __post_init__(self):
        for name in ("max_count", "max_size", "max_iters"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.depth < 0:
            raise ValueError("depth must be a natural")

    def policy(self) -> UniversePolicy:
        return UniversePolicy(max_count=self.max_count, max_size=self.max_size)


def _add_common(sp) -> None:
    sp.add_argument("spec_file", help="rule specification file")
    sp.add_argument("--universe-count", type=int, default=500, metavar="N",
                    help="universe term budget (default 500)")
    sp.add_argument("--universe-size", type=int, default=12, metavar="N",
                    help="largest term admitted into the universe (default 12)")
    sp.add_argument("--max-iters", type=int, default=1000, metavar="N")
    sp.add_argument("-d", "--depth", type=int, default=3, metavar="D",
                    help="observation depth (default 3)")
    sp.add_argument("--seed", type=int, default=None, metavar="S",
                    help="PRNG seed; falls back to $BIGSOS_SEED, then 0")
    sp.add_argument("--format", choices=("json", "dot", "text"), default="text")
    sp.add_argument("--force", action="store_true",
                    help="iterate non-monotone specs anyway")


def _parse_args(argv):
    p = argparse.ArgumentParser(prog="bigsos",
                                description="monotone biGSOS specifications: "
                                            "least models, unfoldings, and laws")
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("check", help="validate a spec and report monotonicity")
    _add_common(sp)

    sp = sub.add_parser("model", help="compute and print the least model")
    _add_common(sp)
    sp.add_argument("terms", nargs="*", metavar="TERM",
                    help="extra closed seed terms for the universe")

    sp = sub.add_parser("unfold", help="observe a term for a few steps")
    _add_common(sp)
    sp.add_argument("term", metavar="TERM")

    sp = sub.add_parser("equiv", help="compare two terms in the least model")
    _add_common(sp)
    sp.add_argument("term1", metavar="TERM1")
    sp.add_argument("term2", metavar="TERM2")
    sp.add_argument("--rel", choices=("sim", "bisim"), default="bisim")

    sp = sub.add_parser("congruence", help="sampled congruence check")
    _add_common(sp)
    sp.add_argument("terms", nargs="*", metavar="TERM",
                    help="extra closed seed terms for the universe")
    sp.add_argument("--samples", type=int, default=50, metavar="N")

    sp = sub.add_parser("laws", help="run the depth-bounded law suite")
    _add_common(sp)

    return p.parse_args(argv)


def _config(args) -> Config:
    seed = args.seed if args.seed is not None else int(os.environ.get("BIGSOS_SEED", "0"))
    return Config(max_count=args.universe_count, max_size=args.universe_size,
                  max_iters=args.max_iters, depth=args.depth, seed=seed,
                  format=args.format, force=args.force)


def _load_spec(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


def _seed_terms(spec, texts) -> list:
    return [parse_term(text, spec.sig) for text in texts]


def _build_model(spec, extra_seeds, cfg: Config):
    seeds = [App(c) for c in spec.sig.constants()] + list(extra_seeds)
    return least_model(spec, seeds, cfg.policy(), cfg.max_iters, force=cfg.force)


# --- rendering ---------------------------------------------------------------------


def _model_text(model, report) -> list:
    lines = []
    for t in model.universe:
        v = model.behaviour[t]
        if model.kind.is_bottom(v):
            lines.append(f"{print_term(t)} ⊥")
            continue
        for lab, target in model.kind.transitions(v):
            arrow = f"-{lab}->"
            if model.kind.name == "wts":
                arrow = f"-{lab}[{v.weight(lab, target)}]->"
            lines.append(f"{print_term(t)} {arrow} {print_term(target)}")
    lines.append(f"-- iterations {report.iterations}, converged "
                 f"{'yes' if report.converged else 'no'}, oscillation "
                 f"{'yes' if report.oscillation_detected else 'no'}, "
                 f"frontier {report.frontier_size}")
    return lines


def _unfold_text(kind, tree) -> list:
    if kind.name == "stream":
        labels = []
        node = tree
        while node.step is not None:
            if isinstance(node.step, Bottom):
                labels.append("⊥")
                break
            labels.append(str(node.step.label))
            node = node.step.state
        return [" ".join(labels) if labels else "⊥"]
    lines = [print_term(tree.root)]

    def walk(node, indent):
        if node.step is None:
            return
        for lab, kid in kind.transitions(node.step):
            arrow = f"-{lab}->"
            if kind.name == "wts":
                arrow = f"-{lab}[{node.step.weight(lab, kid)}]->"
            mark = "  # opaque" if kid.opaque else ""
            lines.append("  " * indent + f"{arrow} {print_term(kid.root)}{mark}")
            walk(kid, indent + 1)

    walk(tree, 1)
    return lines


def _emit(out, lines) -> None:
    for line in lines:
        print(line, file=out)


# --- subcommands -------------------------------------------------------------------


def _cmd_check(spec, cfg, out) -> int:
    diags = validate_spec(spec)
    mon = check_monotone(spec)
    if cfg.format == "json":
        print(json.dumps({"diagnostics": [str(d) for d in diags],
                          "monotone": mon.monotone,
                          "offending_rules": list(mon.offending_rules)},
                         indent=2), file=out)
    else:
        for d in diags:
            print(str(d), file=out)
        if mon.monotone:
            print("monotone: yes", file=out)
        else:
            print("monotone: no (" + ", ".join(mon.offending_rules) + ")", file=out)
    if diags:
        return 2
    if not mon.monotone:
        return 3
    return 0


def _require_valid(spec, err) -> bool:
    diags = validate_spec(spec)
    for d in diags:
        print(str(d), file=err)
    return not diags


def _cmd_model(spec, args, cfg, out, err) -> int:
    model, report = _build_model(spec, _seed_terms(spec, args.terms), cfg)
    fmt = cfg.format
    if fmt == "dot" and model.kind.name != "lts":
        print("warning: dot export is only defined for lts models; emitting json",
              file=err)
        fmt = "json"
    if fmt == "dot":
        out.write(model_to_dot(model))
    elif fmt == "json":
        print(json.dumps(model_to_json(model, report), indent=2), file=out)
    else:
        _emit(out, _model_text(model, report))
    return 0 if report.converged else 4


def _cmd_unfold(spec, args, cfg, out, err) -> int:
    term = parse_term(args.term, spec.sig)
    model, report = _build_model(spec, [term], cfg)
    if not report.converged:
        print(f"error: no convergence within {report.iterations} iterations",
              file=err)
        return 4
    tree = unfold(model, term, cfg.depth)
    if cfg.format == "json":
        print(json.dumps(unfold_to_json(model.kind, tree), indent=2), file=out)
    else:
        if cfg.format == "dot":
            print("warning: dot export is only defined for models; emitting text",
                  file=err)
        _emit(out, _unfold_text(model.kind, tree))
    return 0


def _cmd_equiv(spec, args, cfg, out, err) -> int:
    t1 = parse_term(args.term1, spec.sig)
    t2 = parse_term(args.term2, spec.sig)
    model, report = _build_model(spec, [t1, t2], cfg)
    if not report.converged:
        print(f"error: no convergence within {report.iterations} iterations",
              file=err)
        return 4
    res = check_equivalence(model, t1, t2, relation=args.rel)
    if cfg.format == "json":
        payload = res.to_json()
        payload["relation"] = args.rel
        print(json.dumps(payload, indent=2), file=out)
    else:
        print(f"related: {'yes' if res.related else 'no'}", file=out)
        if res.related:
            print(f"witness: {args.rel} relation with {len(res.witness.pairs)} pairs",
                  file=out)
        elif res.witness is not None:
            print(f"witness: distinguishing depth {res.witness}", file=out)
        else:
            print("witness: none within the search bound", file=out)
    return 0


def _cmd_congruence(spec, args, cfg, out, err) -> int:
    model, report = _build_model(spec, _seed_terms(spec, args.terms), cfg)
    if not report.converged:
        print(f"error: no convergence within {report.iterations} iterations",
              file=err)
        return 4
    rep = congruence_test(spec, model, args.samples, depth=cfg.depth, seed=cfg.seed)
    if cfg.format == "json":
        print(json.dumps(rep.to_json(), indent=2), file=out)
    else:
        print(f"checked {rep.checked} skipped {rep.skipped} "
              f"violations {len(rep.violations)}", file=out)
        for v in rep.violations:
            print(f"  {print_term(v.left)} !~ {print_term(v.right)}", file=out)
    return 0


def _cmd_laws(spec, cfg, out) -> int:
    config = LawConfig(depth=cfg.depth, policy=cfg.policy())
    results = law_suite(spec, config)
    if cfg.format == "json":
        print(json.dumps(suite_to_json(results), indent=2), file=out)
    else:
        for r in results:
            print(f"{r.law}: {r.status}", file=out)
    return 0


def _dispatch(args, out, err) -> int:
    cfg = _config(args)
    spec = _load_spec(args.spec_file)
    if args.cmd == "check":
        return _cmd_check(spec, cfg, out)
    if not _require_valid(spec, err):
        return 2
    if args.cmd == "model":
        return _cmd_model(spec, args, cfg, out, err)
    if args.cmd == "unfold":
        return _cmd_unfold(spec, args, cfg, out, err)
    if args.cmd == "equiv":
        return _cmd_equiv(spec, args, cfg, out, err)
    if args.cmd == "congruence":
        return _cmd_congruence(spec, args, cfg, out, err)
    if args.cmd == "laws":
        return _cmd_laws(spec, cfg, out)
    raise BigsosError(f"unknown command {args.cmd!r}")  # argparse prevents this


def run(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = _parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return _dispatch(args, out, err)
    except ParseError as exc:
        print(f"error: {exc}", file=err)
        return 1
    except NonMonotoneError as exc:
        print(f"error: {exc}", file=err)
        return 3
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=err)
        return 4
    except UnknownStateError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    except BigsosError as exc:
        print(f"internal error: {exc}", file=err)
        return 5


def main() -> None:
    sys.exit(run())
