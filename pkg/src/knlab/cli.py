"""Command line: knlab {basis,structure,cocycle,verify,h2loc}.

Exit codes: 0 when every check passes, 1 on a verification failure,
2 on an invalid configuration or command line.
"""
import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .algebras import OPERATIONS, OperatorAlgebra, grading_analysis
from .basis import basis_element, window_labels
from .cocycles import function_cocycle, mixing_cocycle
from .config import ConfigError, load_config, parse_config, parse_target
from .exact.rational import point_str
from .exact.scalar import scalar_str
from .lab import cocycle_matrix
from .lie import invariant_form_space, linear_forms_vanishing_on_derived
from .report import Report, Table
from .tasks import TASK_FUNCTIONS, _vector, task_target

JOBS_ENV = "KNLAB_JOBS"
DEFAULT_TARGETS = ("D1", "sl(2)-current", "sl(2)+sl(2)-current", "abelian(2)-current", "gl(2)-D1")


def _context(cfg):
    ctx = {
        "surface": cfg.surface.describe(),
        "window": cfg.window,
        "lambdas": cfg.lambdas,
        "lie": cfg.lie.name if cfg.lie is not None else None,
        "R": str(cfg.R),
        "T": str(cfg.T),
    }
    if cfg.fault:
        ctx["fault"] = cfg.fault
    return ctx


def _coords_text(alg, coords):
    if not coords:
        return "0"
    return " + ".join(f"{scalar_str(c)}*{alg.label_name(k)}" for k, c in sorted(coords.items()))


# -- subcommands -------------------------------------------------------------------


def cmd_basis(cfg, args):
    rep = Report("basis", _context(cfg))
    surface = cfg.surface
    header = ["lambda", "n", "p", "name", "function", "orders"]
    rows = []
    for lam in cfg.lambdas:
        for n, p in window_labels(surface, cfg.window):
            b = basis_element(surface, lam, n, p)
            orders = " ".join(f"{point_str(P)}:{b.section.order_at(P)}" for P in surface.points)
            rows.append([lam, n, p, b.name, str(b.func), orders])
    rep.tables.append(Table("basis", header, rows))
    return rep


def cmd_structure(cfg, args):
    rep = Report("structure", _context(cfg))
    surface, W = cfg.surface, cfg.window
    for op in OPERATIONS:
        g = grading_analysis(surface, op, 0, W)
        rep.add("structure", f"almost-grading of {op}", g.ok, g.summary())
    L = OperatorAlgebra(surface, "L")
    rows = []
    labels = L.basis(W)
    for i, la in enumerate(labels):
        for lb in labels[i + 1:]:
            rows.append([L.label_name(la), L.label_name(lb), _coords_text(L, L.coordinates(L.bracket_labels(la, lb)))])
    rep.tables.append(Table("vector field brackets", ["a", "b", "[a,b]"], rows))
    lie = cfg.lie
    if lie is not None:
        rows = []
        for i in range(lie.dim):
            for j in range(i + 1, lie.dim):
                text = " + ".join(f"{scalar_str(c)}*{lie.labels[k]}" for k, c in sorted(lie.c[i][j].items()))
                rows.append([lie.labels[i], lie.labels[j], text or "0"])
        rep.tables.append(Table(f"{lie.name} brackets", ["x", "y", "[x,y]"], rows))
        forms = invariant_form_space(lie)
        rep.add("structure", f"{lie.name} invariant symmetric forms", None, f"dimension {len(forms)}")
        phis = linear_forms_vanishing_on_derived(lie)
        rep.add("structure", f"{lie.name} forms vanishing on [g,g]", None, f"dimension {len(phis)}")
    return rep


def cmd_cocycle(cfg, args):
    rep = Report("cocycle", _context(cfg))
    surface, W = cfg.surface, cfg.window
    entries = [(e.name, e.algebra, e.spec) for e in cfg.cocycles]
    if not entries:
        entries = [
            ("gamma_f", "A", function_cocycle()),
            ("gamma_v", "L", _vector(cfg)),
            ("gamma_m", "D1", mixing_cocycle(cfg.T)),
        ]
    for name, kind, spec in entries:
        alg = OperatorAlgebra(surface, kind, cfg.lie if kind in ("current", "D1g") else None)
        mat = cocycle_matrix(spec, alg, W)
        support = mat.level_support()
        levels = f"levels {min(support)}..{max(support)}" if support else "zero on the window"
        rep.add("cocycle", f"{name} on {alg.name} is antisymmetric", mat.is_antisymmetric(), levels)
        rows = [[mat.names[i]] + r for i, r in enumerate(mat.rows_as_strings())]
        rep.tables.append(Table(f"{name} on {alg.name}", [""] + mat.names, rows))
    return rep


def _run_task(job):
    raw, window, task, timing = job
    cfg = parse_config(raw, window)
    start = time.perf_counter()
    rep = TASK_FUNCTIONS[task](cfg)
    if timing:
        rep.add("timing", task, None, f"{time.perf_counter() - start:.2f}s")
    return rep


def _run_target(job):
    raw, window, text, timing = job
    cfg = parse_config(raw, window)
    start = time.perf_counter()
    rep, row = task_target(cfg, parse_target(text))
    if timing:
        rep.add("timing", text, None, f"{time.perf_counter() - start:.2f}s")
    return rep, row


def _map(fn, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(fn, jobs))


def cmd_verify(cfg, args):
    rep = Report("verify", _context(cfg))
    jobs = [(cfg.raw, cfg.window, t, args.timing) for t in cfg.tasks]
    for part in _map(_run_task, jobs, args.jobs):
        rep.extend(part)
    return rep


def cmd_h2loc(cfg, args):
    rep = Report("h2loc", _context(cfg))
    targets = [t.text for t in cfg.targets] or list(DEFAULT_TARGETS)
    jobs = [(cfg.raw, cfg.window, t, args.timing) for t in targets]
    rows = []
    for part, (text, alg, expected, rank, size) in _map(_run_target, jobs, args.jobs):
        rep.extend(part)
        rows.append([text, alg, size, "?" if expected is None else expected, rank, "certified lower bound"])
    rep.tables.insert(0, Table("dimensions", ["target", "algebra", "family", "expected", "certified", "kind"], rows))
    return rep


COMMANDS = {
    "basis": cmd_basis,
    "structure": cmd_structure,
    "cocycle": cmd_cocycle,
    "verify": cmd_verify,
    "h2loc": cmd_h2loc,
}


def _jobs(value):
    if value is not None:
        return value
    env = os.environ.get(JOBS_ENV)
    if env is None:
        return 1
    try:
        n = int(env)
    except ValueError:
        raise ConfigError(JOBS_ENV, f"expected an integer, got {env!r}") from None
    if n < 1:
        raise ConfigError(JOBS_ENV, "must be at least 1")
    return n


def build_parser():
    parser = argparse.ArgumentParser(prog="knlab", description="Exact Krichever-Novikov algebra laboratory.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__name__.replace("cmd_", "") + " report")
        p.add_argument("--config", help="YAML run configuration")
        p.add_argument("--window", type=int, help="degree window W (overrides the config)")
        p.add_argument("--out", help="directory for report files (default: stdout)")
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.add_argument("--jobs", type=int, help=f"worker processes (default: ${JOBS_ENV} or 1)")
        p.add_argument("--timing", action="store_true", help="add wall-clock timings to the report")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.window is not None and args.window < 1:
            raise ConfigError("--window", "must be at least 1")
        if args.jobs is not None and args.jobs < 1:
            raise ConfigError("--jobs", "must be at least 1")
        args.jobs = _jobs(args.jobs)
        if args.config:
            cfg = load_config(args.config)
        else:
            cfg = parse_config({})
        if args.window is not None:
            cfg = parse_config(cfg.raw, args.window)
    except ConfigError as exc:
        print(f"knlab: config error: {exc}", file=sys.stderr)
        return 2
    try:
        report = COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"knlab: config error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        for path in report.write(args.out, args.format):
            print(path)
    else:
        sys.stdout.write(report.render(args.format))
    if not report.passed:
        names = ", ".join(f"{r['task']} / {r['check']}" for r in report.failures)
        print(f"knlab: {len(report.failures)} check(s) failed: {names}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
