"""Command line entry point: ``colorgraph <command> ...``.

Exit codes: 0 success, 2 validation failure, 3 input/output problem,
4 bad configuration.  Failures print one JSON error record on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import algebra, bubbles, dimensions, dipoles, homology, jackets, melonic
from .config import RunConfig
from .graph import GraphFormatError, boundary_graph, dump, load, parse, serialize, validate

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_CONFIG = 0, 2, 3, 4


class ConfigError(Exception):
    pass


class ValidationFailed(Exception):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


@dataclass
class Output:
    data: object
    columns: list | None = None
    rows: list = field(default_factory=list)
    text: str | None = None
    comments: dict = field(default_factory=dict)
    status: int = EXIT_OK


# -- helpers ------------------------------------------------------------------------


def _read_graph(path):
    try:
        return load(path)
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from None
    except GraphFormatError as exc:
        if str(exc).startswith("malformed syntax"):
            raise OSError(f"cannot parse {path}: {exc}") from None
        raise ValidationFailed(f"{path}: {exc}", [v.to_dict() for v in exc.violations]) from None


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _window(text):
    values = _int_list(text)
    if len(values) != 2 or values[0] >= values[1]:
        raise argparse.ArgumentTypeError(f"window must be 't1,t2' with t1 < t2, got {text!r}")
    return tuple(values)


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _cell(x):
    if isinstance(x, float):
        return repr(x)
    return x


# -- commands -------------------------------------------------------------------------


def cmd_validate(args, cfg):
    try:
        with open(args.file, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read {args.file}: {exc.strerror or exc}") from None
    try:
        g = parse(raw, validate_graph=False)
    except GraphFormatError as exc:
        if str(exc).startswith("malformed syntax"):
            raise OSError(f"cannot parse {args.file}: {exc}") from None
        return Output({"valid": False, "violations": [{"clause": "color out of range",
                                                        "where": "document", "detail": str(exc)}]},
                      text=f"invalid: {exc}", status=EXIT_VALIDATION)
    report = validate(g)
    data = {"valid": report.ok, "violations": report.to_list()}
    lines = ["valid"] if report.ok else ["invalid"] + [f"  {v}" for v in report]
    return Output(data, ["clause", "where", "detail"],
                  [[v.clause, v.where, v.detail] for v in report],
                  "\n".join(lines), status=EXIT_OK if report.ok else EXIT_VALIDATION)


def cmd_boundary(args, cfg):
    g = _read_graph(args.file)
    if g.kind != "open":
        raise ValidationFailed("boundary graphs exist only for open graphs")
    bg = boundary_graph(g)
    data = {"dimension": bg.dimension,
            "vertices": [g.vertex_name(v) for v in bg.vertices],
            "vertex_colors": list(bg.vertex_colors),
            "edges": [[a, b, list(pair)] for a, b, pair in bg.edges]}
    lines = [f"boundary vertices: {len(bg.vertices)}  edges: {len(bg.edges)}"]
    lines += [f"  {a} -- {b}  colors {{{i},{j}}}" for a, b, (i, j) in bg.edges]
    return Output(data, ["a", "b", "color_i", "color_j"],
                  [[a, b, i, j] for a, b, (i, j) in bg.edges], "\n".join(lines))


def _closed_graph(path, what):
    g = _read_graph(path)
    if g.kind != "closed":
        raise ValidationFailed(f"{what} is defined for closed graphs only")
    return g


def cmd_bubbles(args, cfg):
    g = _read_graph(args.file)
    counts = bubbles.bubble_counts(g)
    data = {"counts": {str(d): n for d, n in counts.items()}}
    rows = [[d, n] for d, n in counts.items()]
    lines = [f"B[{d}] = {n}" for d, n in counts.items()]
    if g.kind == "closed":
        cx = bubbles.dual_complex(g)
        rep = bubbles.check_pseudomanifold(cx)
        data["f_vector"] = cx.f_vector()
        data["pseudomanifold"] = {"pure": rep.pure, "non_branching": rep.non_branching,
                                  "strongly_connected": rep.strongly_connected}
        lines.append(f"dual f-vector: {cx.f_vector()}")
        lines.append(f"pure={rep.pure} non_branching={rep.non_branching} "
                     f"strongly_connected={rep.strongly_connected}")
        if args.complex:
            data["complex"] = cx.to_dict()
    return Output(data, ["d", "count"], rows, "\n".join(lines))


def cmd_homology(args, cfg):
    g = _closed_graph(args.file, "colored homology")
    groups = homology.homology(g)
    pres = homology.fundamental_group_presentation(g)
    rank, torsion = pres.abelianization()
    data = {"groups": [{"degree": h.degree, "betti": h.betti, "torsion": list(h.torsion)}
                       for h in groups],
            "fundamental_group": {"generators": len(pres.generators),
                                  "relators": [[list(x) for x in r] for r in pres.relators],
                                  "abelianization": {"rank": rank, "torsion": list(torsion)}}}
    if args.matrices:
        data["boundary_matrices"] = {str(d): homology.boundary_matrix(g, d).tolist()
                                     for d in range(g.dimension + 1)}
    lines = [f"H_{h.degree} = {h}  (betti {h.betti}, torsion {list(h.torsion)})" for h in groups]
    lines.append(f"pi_1: {len(pres.generators)} generators, {len(pres.relators)} relators; "
                 f"abelianization rank {rank} torsion {list(torsion)}")
    return Output(data, ["degree", "betti", "torsion"],
                  [[h.degree, h.betti, " ".join(map(str, h.torsion))] for h in groups],
                  "\n".join(lines))


def cmd_reduce(args, cfg):
    g = _closed_graph(args.file, "routing")
    core, log = dipoles.route_to_core(g, args.policy, cfg.seed if args.policy == "random" else None)
    data = {"core": json.loads(serialize(core)), "log": log.to_dict(),
            "order": core.order, "is_core": dipoles.is_core(core)}
    if args.core_out:
        try:
            dump(core, args.core_out)
        except OSError as exc:
            raise OSError(f"cannot write {args.core_out}: {exc.strerror or exc}") from None
    lines = [serialize(core).decode()]
    lines += [f"contract color {c}: +{v} -{w}" for c, v, w in log.steps]
    return Output(data, ["step", "color", "positive", "negative"],
                  [[k, c, v, w] for k, (c, v, w) in enumerate(log.steps)], "\n".join(lines))


def cmd_degree(args, cfg):
    g = _closed_graph(args.file, "the degree")
    js = jackets.enumerate_jackets(g)
    omega = jackets.degree(g)
    residuals = {"bubble_identity": str(jackets.bubble_identity_residual(g)) if g.dimension >= 2 else "0",
                 "bubble_inequality_slack": jackets.bubble_inequality_slack(g) if g.dimension >= 2 else 0}
    data = {"degree": omega, "jackets": [{"cycle": list(j.cycle), "genus": j.genus} for j in js],
            "residuals": residuals}
    lines = [f"degree {omega}"]
    lines += [f"jacket {''.join(map(str, j.cycle))}: genus {j.genus}" for j in js]
    lines.append(f"bubble identity residual {residuals['bubble_identity']}; "
                 f"inequality slack {residuals['bubble_inequality_slack']}")
    return Output(data, ["cycle", "genus"],
                  [["".join(map(str, j.cycle)), j.genus] for j in js], "\n".join(lines))


def cmd_bracket(args, cfg):
    g1 = _closed_graph(args.first, "the bracket")
    g2 = _closed_graph(args.second, "the bracket")
    try:
        l1 = algebra.MarkedGraph(g1, args.mark1)
        l2 = algebra.MarkedGraph(g2, args.mark2)
        chain = algebra.bracket(l1, l2)
    except ValueError as exc:
        raise ValidationFailed(str(exc)) from None
    terms = chain.to_list()
    data = {"terms": [{"graph": json.loads(t["graph"]), "mark": t["mark"],
                       "coefficient": t["coefficient"]} for t in terms],
            "melonic_closed": algebra.is_melonic_closed(chain)}
    lines = [f"{t['coefficient']:>4} * [mark {t['mark']}] {t['graph'].decode()}" for t in terms] or ["0"]
    return Output(data, ["coefficient", "mark", "graph"],
                  [[t["coefficient"], t["mark"], t["graph"].decode()] for t in terms],
                  "\n".join(lines))


def cmd_count(args, cfg):
    ps = range(args.p + 1) if args.table else [args.p]
    values = [melonic.count_melonic(args.dim, p) for p in ps]
    data = {"counts": {str(p): str(v) for p, v in zip(ps, values)}}
    text = "\n".join(f"{p} {v}" for p, v in zip(ps, values)) if args.table else str(values[0])
    return Output(data, ["p", "count"], [[p, str(v)] for p, v in zip(ps, values)], text)


def _sample_summary(task):
    D, p, seed, hist = task
    tree = melonic.sample_uniform(D, p, seed)
    words = [melonic.word_of(tree, v) for v in range(tree.size)]
    tdepth = np.array([len(w) for w in words])
    depth = np.array([melonic.depth(w, D) for w in words])
    if hist:
        return Counter(depth.tolist())
    return [int(tdepth.max()), int(depth.max()), float(tdepth.mean()), float(depth.mean())]


def cmd_sample(args, cfg):
    seeds = np.random.SeedSequence(cfg.seed).spawn(args.n)
    if args.graphs:
        out = Path(args.graphs)
        try:
            out.mkdir(parents=True, exist_ok=True)
            for k, s in enumerate(seeds):
                tree = melonic.sample_uniform(args.dim, args.p, s)
                dump(melonic.tree_to_graph(tree), out / f"sample_{k:05d}.json")
        except OSError as exc:
            raise OSError(f"cannot write samples: {exc.strerror or exc}") from None
    results = dimensions._map(_sample_summary,
                              [(args.dim, args.p, s, args.histogram) for s in seeds], cfg.jobs)
    if args.histogram:
        total = Counter()
        for c in results:
            total.update(c)
        rows = [[d, total[d]] for d in sorted(total)]
        return Output({"histogram": {str(d): n for d, n in rows}}, ["depth", "count"], rows,
                      "\n".join(f"{d} {n}" for d, n in rows))
    rows = [[k] + r for k, r in enumerate(results)]
    cols = ["sample", "max_tree_depth", "max_depth", "mean_tree_depth", "mean_depth"]
    return Output({"samples": [dict(zip(cols, r)) for r in rows]}, cols, rows,
                  "\n".join(" ".join(map(str, r)) for r in rows))


def cmd_hausdorff(args, cfg):
    fit = dimensions.hausdorff_estimate(args.dim, args.p_list, args.samples, cfg.seed,
                                        args.estimator, args.model, cfg.jobs)
    ex = fit.extra
    rows = [[p, m, e, r] for p, m, e, r in zip(args.p_list, ex["mean_distance"],
                                                ex["mean_stderr"], ex["rescaled_mean"])]
    summary = {"exponent": fit.exponent, "stderr": fit.stderr,
               "hausdorff_dimension": ex["hausdorff_dimension"],
               "power_exponent": ex["power_exponent"], "offset": ex["offset"]}
    text = "\n".join([f"exponent {fit.exponent:.4f} +- {fit.stderr:.4f} "
                      f"(d_H = {ex['hausdorff_dimension']:.3f}, model {args.model})",
                      f"pure power-law exponent {ex['power_exponent']:.4f}"]
                     + [f"p={r[0]} mean={r[1]:.4f} +- {r[2]:.4f} rescaled={r[3]:.4f}" for r in rows])
    return Output(fit.to_dict(), ["p", "estimate", "stderr", "rescaled"], rows, text,
                  {"fit": summary})


def cmd_spectral(args, cfg):
    fit = dimensions.spectral_estimate(args.dim, args.p, args.window, args.samples, cfg.seed,
                                       args.method, args.walks, cfg.jobs)
    ex = fit.extra
    rows = [[int(t), y] for t, y in zip(fit.x, fit.y)]
    eff = dict((round(a, 6), b) for a, b in ex["effective_exponent"])
    rows = [[t, y, eff.get(round(float(np.sqrt(t * (t - 2))), 6), "")] for t, y in rows]
    summary = {"spectral_dimension": ex["spectral_dimension"], "stderr": ex["spectral_stderr"],
               "window": list(args.window), "odd_time_max": ex["odd_time_max"]}
    if "warning" in ex:
        summary["warning"] = ex["warning"]
        print(json.dumps({"warning": ex["warning"]}), file=sys.stderr)
    text = (f"d_S = {ex['spectral_dimension']:.4f} +- {ex['spectral_stderr']:.4f} "
            f"over t in {list(args.window)}")
    return Output(fit.to_dict(), ["t", "estimate", "effective_dimension"], rows, text,
                  {"fit": summary})


def cmd_susceptibility(args, cfg):
    fit = dimensions.susceptibility_check(args.dim, args.p_min, args.p_max)
    ex = fit.extra
    rows = [[int(p), y, y * p ** 1.5] for p, y in zip(fit.x, fit.y)]
    summary = {"slope": fit.exponent, "stderr": fit.stderr, "gamma": ex["gamma"],
               "prefactor_at_p_max": ex["prefactor_at_p_max"],
               "stated_prefactor": ex["stated_prefactor"],
               "asymptotic_prefactor": ex["asymptotic_prefactor"]}
    text = "\n".join([f"slope {fit.exponent:.5f} +- {fit.stderr:.2e}  (gamma {ex['gamma']:.4f})",
                      f"C_p z_c^p p^1.5 at p={args.p_max}: {ex['prefactor_at_p_max']:.6f}",
                      f"stated prefactor {ex['stated_prefactor']:.6f}; "
                      f"Stirling prefactor {ex['asymptotic_prefactor']:.6f}"])
    return Output(fit.to_dict(), ["p", "estimate", "scaled"], rows, text, {"fit": summary})


# -- parser ---------------------------------------------------------------------------


COMMANDS = {
    "validate": (cmd_validate, "text", "Check a graph file against every structural invariant."),
    "boundary": (cmd_boundary, "text", "Boundary graph of an open graph."),
    "bubbles": (cmd_bubbles, "text", "Bubble counts, dual complex and pseudomanifold checks."),
    "homology": (cmd_homology, "text", "Integer colored homology and a fundamental group presentation."),
    "reduce": (cmd_reduce, "text", "Contract 1-dipoles down to a core graph, with a replay log."),
    "degree": (cmd_degree, "text", "Degree, jacket genera and identity residuals."),
    "bracket": (cmd_bracket, "text", "Lie bracket of two marked graphs."),
    "count": (cmd_count, "text", "Number of rooted melonic graphs (Fuss-Catalan numbers)."),
    "sample": (cmd_sample, "csv", "Uniform random melonic trees: depth statistics or graph files."),
    "hausdorff": (cmd_hausdorff, "csv", "Distance scaling on sampled melonic balls."),
    "spectral": (cmd_spectral, "csv", "Return-probability scaling of random walks on melonic graphs."),
    "susceptibility": (cmd_susceptibility, "csv", "Asymptotics of the exact melonic counts."),
}


def build_parser():
    parser = Parser(prog="colorgraph", description="Computations on (D+1)-colored graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)
    for name, (_, default_format, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.add_argument("--format", choices=["text", "json", "csv"], default=default_format,
                        help=f"output format (default {default_format})")
        sp.add_argument("-o", "--output", help="write output to this file instead of stdout")
        sp.add_argument("--seed", type=int, default=0, help="master random seed (default 0)")
        sp.add_argument("--jobs", type=_positive, default=os.cpu_count() or 1,
                        help="worker processes (default: all cores); results do not depend on it")
        if name in ("validate", "boundary", "bubbles", "homology", "reduce", "degree"):
            sp.add_argument("file", help="graph file")
        if name == "bubbles":
            sp.add_argument("--complex", action="store_true", help="include the dual complex")
        if name == "homology":
            sp.add_argument("--matrices", action="store_true", help="include boundary matrices")
        if name == "reduce":
            sp.add_argument("--policy", choices=["bfs", "random"], default="bfs",
                            help="spanning-tree policy (default bfs; random uses --seed)")
            sp.add_argument("--core-out", help="also write the core graph to this file")
        if name == "bracket":
            sp.add_argument("first", help="first marked graph file")
            sp.add_argument("second", help="second marked graph file")
            sp.add_argument("--mark1", type=int, default=0, help="negative vertex marked in the first")
            sp.add_argument("--mark2", type=int, default=0, help="negative vertex marked in the second")
        if name in ("count", "sample", "hausdorff", "spectral", "susceptibility"):
            sp.add_argument("--dim", type=_positive, default=3, help="dimension D (default 3)")
        if name in ("count", "sample", "spectral"):
            sp.add_argument("--p", type=int, required=name != "spectral",
                            default=10000 if name == "spectral" else None,
                            help="number of elementary melons")
        if name == "count":
            sp.add_argument("--table", action="store_true", help="print all counts up to p")
        if name == "sample":
            sp.add_argument("-n", type=_positive, default=1, help="number of samples (default 1)")
            sp.add_argument("--graphs", help="directory for one graph file per sample")
            sp.add_argument("--histogram", action="store_true",
                            help="aggregate depth histogram instead of per-sample rows")
        if name == "hausdorff":
            sp.add_argument("--p-list", type=_int_list, default=[2 ** k for k in range(8, 15)],
                            help="comma-separated sizes (default 256,...,16384)")
            sp.add_argument("--samples", type=_positive, default=200, help="samples per size (default 200)")
            sp.add_argument("--estimator", choices=["bfs", "word"], default="bfs",
                            help="exact distances or depth-word estimate (default bfs)")
            sp.add_argument("--model", choices=["offset", "power"], default="offset",
                            help="fit A p^a + B or a pure power law (default offset)")
        if name == "spectral":
            sp.add_argument("--window", type=_window, default=(50, 500),
                            help="fit window t1,t2 (default 50,500)")
            sp.add_argument("--samples", type=_positive, default=200, help="sampled graphs (default 200)")
            sp.add_argument("--method", choices=["exact", "mc"], default="exact",
                            help="exact propagation or Monte-Carlo walkers (default exact)")
            sp.add_argument("--walks", type=_positive, default=1000,
                            help="walkers per graph for --method mc (default 1000)")
        if name == "susceptibility":
            sp.add_argument("--p-min", type=_positive, default=500, help="fit range start (default 500)")
            sp.add_argument("--p-max", type=_positive, default=1000, help="fit range end (default 1000)")
    return parser


def make_config(args) -> RunConfig:
    skip = {"command", "format", "output", "seed", "jobs", "dim", "p", "samples", "window",
            "file", "first", "second"}
    options = {k: (list(v) if isinstance(v, tuple) else v)
               for k, v in sorted(vars(args).items()) if k not in skip}
    inputs = [getattr(args, k) for k in ("file", "first", "second") if getattr(args, k, None)]
    return RunConfig(command=args.command, dimension=getattr(args, "dim", None),
                     p=getattr(args, "p", None), seed=args.seed,
                     samples=getattr(args, "samples", None), window=getattr(args, "window", None),
                     inputs=inputs, output=args.output, format=args.format, jobs=args.jobs,
                     options=options)


def render(out: Output, cfg: RunConfig, to_file: bool) -> str:
    if cfg.format == "json":
        doc = {"config": cfg.header(), "result": out.data}
        return json.dumps(doc, sort_keys=True, indent=2, default=str) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        buf.write(cfg.header_line() + "\n")
        for key, value in out.comments.items():
            buf.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(out.columns or ["value"])
        for row in out.rows:
            writer.writerow([_cell(x) for x in row])
        return buf.getvalue()
    text = out.text if out.text is not None else json.dumps(out.data, sort_keys=True)
    return (cfg.header_line() + "\n" if to_file else "") + text + "\n"


def _error(kind, message, **extra):
    record = {"error": kind, "message": message, **extra}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = make_config(args)
        if getattr(args, "p", None) is not None and args.p < 0:
            raise ConfigError("--p must be non-negative")
        if args.command == "hausdorff" and args.model == "offset" and len(args.p_list) < 3:
            raise ConfigError("--model offset needs at least 3 sizes in --p-list")
        if args.command == "susceptibility" and args.p_min >= args.p_max:
            raise ConfigError("--p-min must be below --p-max")
        out = COMMANDS[args.command][0](args, cfg)
        rendered = render(out, cfg, bool(cfg.output))
        if cfg.output:
            with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(rendered)
        else:
            sys.stdout.write(rendered)
        if out.status != EXIT_OK:
            _error("validation", "invariant violations", violations=out.data.get("violations", []))
        return out.status
    except ConfigError as exc:
        _error("config", str(exc))
        return EXIT_CONFIG
    except ValidationFailed as exc:
        _error("validation", str(exc), violations=exc.violations)
        return EXIT_VALIDATION
    except OSError as exc:
        _error("io", str(exc))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
