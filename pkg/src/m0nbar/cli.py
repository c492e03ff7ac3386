"""Command-line front end: table computation, caching and reports.

Subcommands:

  rep     compute/cache the equivariant tables and summarize them
  inv     fast integer path: quotient Poincare polynomials
  oracle  cross-check the recursion against the tree enumeration
  conj    conjecture suites (logconcave / mult / equiv / ultra / asymptotics)
  manin   rank-specialization cross-checks

Exit status is 0 even when a conjecture check fails (failures are data);
nonzero only on internal inconsistency: oracle mismatch, non-exact
division, integrality violation.

Every command writes its delimited table under <cache-dir>/reports/ in
the selected format and renders a matplotlib figure next to it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__, concavity, invariants, recursion, trees
from .recursion import RepTable
from .series import BiSeries
from .symfunc import IntegrityError, SymPoly, schur_slice

ENV_PREFIX = "M0NBAR_"


@dataclass
class EngineConfig:
    cap_n: int = 12
    cap_k: int = 10
    cache_dir: str = ".m0nbar-cache"
    workers: int = 1
    emit: str = "csv"  # json | csv | markdown

    def __post_init__(self):
        if self.cap_n < 1:
            raise ValueError("cap_n must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.emit not in ("json", "csv", "markdown"):
            raise ValueError(f"unknown emit format {self.emit!r}")

    @property
    def reports_dir(self) -> Path:
        return Path(self.cache_dir) / "reports"


# ---------------------------------------------------------------------------
# Cache files
# ---------------------------------------------------------------------------


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _dump_json(path: Path, payload: dict) -> None:
    _atomic_write(path, json.dumps(payload, indent=1, sort_keys=True) + "\n")


def _cache_ok(payload: dict, cap_n: int, cap_k: int) -> bool:
    return (payload.get("engine_version") == __version__
            and payload.get("cap_n", -1) >= cap_n
            and payload.get("cap_k", -1) >= cap_k)


def save_table(table: RepTable, cache_dir: str) -> None:
    base = Path(cache_dir)
    stamp = {"engine_version": table.meta["engine_version"],
             "created": table.meta["created"],
             "cap_n": table.cap_n, "cap_k": table.cap_k}
    for name, series in (("qplus", table.qplus), ("q", table.q), ("p", table.p)):
        for n, value in series.items():
            _dump_json(base / f"{name}_{n}.json",
                       {**stamp, "value": value.to_json_dict()})


def load_table(cache_dir: str, cap_n: int, cap_k: int) -> RepTable | None:
    """Load a cached table if its recorded caps dominate the request.

    SymPoly truncation is destructive, so lower-cap caches are never
    partially reused; cached values are re-truncated to the request.
    """
    base = Path(cache_dir)
    table = RepTable(cap_n, cap_k)
    for name, store in (("qplus", table.qplus), ("q", table.q), ("p", table.p)):
        n_lo = 3 if name == "p" else 1
        for n in range(n_lo, cap_n + 1):
            path = base / f"{name}_{n}.json"
            if not path.exists():
                return None
            try:
                payload = json.loads(path.read_text())
            except (OSError, json.JSONDecodeError) as exc:
                print(f"warning: corrupt cache file {path}: {exc}; recomputing",
                      file=sys.stderr)
                return None
            if not _cache_ok(payload, cap_n, cap_k):
                return None
            value = SymPoly.from_json_dict(payload["value"])
            store[n] = value.truncate(cap_n, cap_k)
    table.p[1] = table.qplus[1]
    table.p[2] = SymPoly.gen((2,), cap_n, cap_k)
    return table


def get_tables(config: EngineConfig, quiet: bool = False) -> tuple[RepTable, bool]:
    """Cached table when trustworthy, else rebuild and cache."""
    cached = load_table(config.cache_dir, config.cap_n, config.cap_k)
    if cached is not None:
        return cached, True
    table = recursion.build_tables(config.cap_n, config.cap_k)
    try:
        save_table(table, config.cache_dir)
    except OSError as exc:
        if not quiet:
            print(f"warning: could not write cache: {exc}", file=sys.stderr)
    return table, False


def save_biseries(path: Path, series: BiSeries) -> None:
    _dump_json(path, {"engine_version": __version__,
                      "cap_n": series.cap_n, "cap_k": series.cap_k,
                      "value": series.to_json_dict()})


def load_biseries(path: Path, cap_n: int, cap_k: int) -> BiSeries | None:
    """BiSeries caches may serve any smaller q-prefix at matching or
    dominating t-cap."""
    if not path.exists():
        return None
    try:
        payload = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None
    if not _cache_ok(payload, cap_n, cap_k):
        return None
    return BiSeries.from_json_dict(payload["value"]).truncate(cap_n, cap_k)


# ---------------------------------------------------------------------------
# Emitters
# ---------------------------------------------------------------------------


def _fmt_cell(value) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def emit_table(rows: list[dict], columns: list[str], path_base: Path,
               emit: str) -> Path:
    """Write rows to path_base.{csv,json,md} and return the path."""
    path_base.parent.mkdir(parents=True, exist_ok=True)
    if emit == "json":
        path = path_base.with_suffix(".json")
        payload = [{c: _fmt_cell(r[c]) for c in columns} for r in rows]
        _atomic_write(path, json.dumps(payload, indent=1) + "\n")
    elif emit == "csv":
        path = path_base.with_suffix(".csv")
        lines = [",".join(columns)]
        lines += [",".join(_fmt_cell(r[c]) for c in columns) for r in rows]
        _atomic_write(path, "\n".join(lines) + "\n")
    else:
        path = path_base.with_suffix(".md")
        lines = ["| " + " | ".join(columns) + " |",
                 "|" + "|".join("---" for _ in columns) + "|"]
        lines += ["| " + " | ".join(_fmt_cell(r[c]) for c in columns) + " |"
                  for r in rows]
        _atomic_write(path, "\n".join(lines) + "\n")
    return path


def _print_rows(rows: list[dict], columns: list[str], limit: int = 0) -> None:
    print("\t".join(columns))
    shown = rows if not limit or len(rows) <= limit else rows[:limit]
    for r in shown:
        print("\t".join(_fmt_cell(r[c]) for c in columns))
    if limit and len(rows) > limit:
        print(f"... ({len(rows) - limit} more rows in the report file)")


def _figure(path: Path, draw) -> Path:
    """Render one figure to path with a callback receiving (fig, ax)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    draw(fig, ax)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _markdown_matrix(rows: list[dict], value: str, path: Path) -> Path:
    """n x k matrix of one column, for human reading."""
    ns = sorted({r["n"] for r in rows})
    ks = sorted({r["k"] for r in rows})
    cell = {(r["n"], r["k"]): r[value] for r in rows}
    lines = ["| n\\k | " + " | ".join(str(k) for k in ks) + " |",
             "|" + "|".join("---" for _ in range(len(ks) + 1)) + "|"]
    for n in ns:
        lines.append("| " + str(n) + " | "
                     + " | ".join(str(cell.get((n, k), "")) for k in ks) + " |")
    _atomic_write(path, "\n".join(lines) + "\n")
    return path


def cmd_rep(config: EngineConfig) -> int:
    table, from_cache = get_tables(config)
    rows = []
    for n in range(2, config.cap_n + 1):
        for k in range(0, min(n - 1, config.cap_k + 1)):
            sl = schur_slice(table.q[n], n, k)
            rows.append({
                "n": n, "k": k,
                "schur_terms": len(sl),
                "mult_trivial": sl.get((n,), 0),
            })
    if config.emit == "markdown":
        path = _markdown_matrix(rows, "mult_trivial",
                                config.reports_dir / "rep_summary.md")
    else:
        path = emit_table(rows, ["n", "k", "schur_terms", "mult_trivial"],
                          config.reports_dir / "rep_summary", config.emit)
    fig = _figure(config.reports_dir / "rep_summary.png",
                  lambda f, ax: _draw_heat(ax, rows, config))
    _print_rows(rows, ["n", "k", "schur_terms", "mult_trivial"], limit=30)
    print(f"source: {'cache' if from_cache else 'recomputed'}")
    print(f"report: {path}\nfigure: {fig}")
    return 0


def _draw_heat(ax, rows, config):
    grid = [[0] * (config.cap_k + 1) for _ in range(config.cap_n + 1)]
    for r in rows:
        grid[r["n"]][r["k"]] = r["schur_terms"]
    im = ax.imshow(grid, aspect="auto", origin="lower", cmap="viridis")
    ax.set_xlabel("cohomological degree k")
    ax.set_ylabel("number of marked points n")
    ax.set_title("Schur support size of the graded characters")
    ax.figure.colorbar(im, ax=ax, label="# Schur terms")


def cmd_inv(config: EngineConfig) -> int:
    cap_k = config.cap_k
    q_path = Path(config.cache_dir) / "inv_q.json"
    p_path = Path(config.cache_dir) / "inv_p.json"
    q = load_biseries(q_path, config.cap_n, cap_k)
    p = load_biseries(p_path, config.cap_n, cap_k)
    if q is None or p is None:
        q = invariants.q_inv_up_to(config.cap_n, cap_k)
        p = invariants.p_inv_up_to(config.cap_n, cap_k, q)
        save_biseries(q_path, q)
        save_biseries(p_path, p)
    rows = [{"n": n, "k": k, "p": p[(n, k)], "q": q[(n, k)]}
            for n in range(3, config.cap_n + 1)
            for k in range(0, min(n - 1, cap_k + 1))]
    path = emit_table(rows, ["n", "k", "p", "q"],
                      config.reports_dir / "inv_table", config.emit)
    fig = _figure(config.reports_dir / "inv_logconcavity.png",
                  lambda f, ax: _draw_rows(ax, q, p, config.cap_n))
    _print_rows(rows, ["n", "k", "p", "q"], limit=30)
    lc_ok = all(
        concavity.check_log_concave([p[(n, k)] for k in range(n - 2)]).ok
        and concavity.check_log_concave([q[(n, k)] for k in range(n - 1)]).ok
        for n in range(3, config.cap_n + 1) if n - 2 <= cap_k)
    print(f"log-concavity of all complete rows: {'holds' if lc_ok else 'FAILS'}")
    print(f"report: {path}\nfigure: {fig}")
    return 0


def _draw_rows(ax, q, p, n: int):
    ks = list(range(n - 1))
    ax.plot(ks, [q[(n, k)] for k in ks], "o-", label=f"(n+1)-pointed quotient, n={n}")
    ax.plot(list(range(n - 2)), [p[(n, k)] for k in range(n - 2)], "s--",
            label=f"n-pointed quotient, n={n}")
    ax.set_yscale("log")
    ax.set_xlabel("cohomological degree k")
    ax.set_ylabel("Betti number")
    ax.set_title("Quotient Betti numbers")
    ax.legend()


def _oracle_task(args) -> tuple:
    n, k, got_slice = args
    expected = trees.oracle_q_dict(n, k)
    return (n, k, trees.count_trees(n, k), expected == got_slice)


def cmd_oracle(config: EngineConfig) -> int:
    n_max = min(config.cap_n, 12)  # full enumeration is a desk-scale validator
    table, _ = get_tables(EngineConfig(n_max, max(config.cap_k, n_max - 2),
                                       config.cache_dir, config.workers,
                                       config.emit))
    tasks = [(n, k, table.q[n].slice_nk(n, k))
             for n in range(2, n_max + 1) for k in range(0, n - 1)]
    if config.workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_oracle_task, tasks))
    else:
        results = [_oracle_task(t) for t in tasks]
    rows = []
    mismatches = 0
    for n, k, count, match in results:
        mismatches += 0 if match else 1
        rows.append({"n": n, "k": k, "trees": count,
                     "match": "ok" if match else "MISMATCH"})
    path = emit_table(rows, ["n", "k", "trees", "match"],
                      config.reports_dir / "oracle_check", config.emit)
    fig = _figure(config.reports_dir / "oracle_check.png",
                  lambda f, ax: _draw_counts(ax, rows))
    _print_rows(rows, ["n", "k", "trees", "match"], limit=40)
    print(f"report: {path}\nfigure: {fig}")
    if mismatches:
        first = next(r for r in rows if r["match"] != "ok")
        print(f"ORACLE MISMATCH at n={first['n']}, k={first['k']}", file=sys.stderr)
        return 2
    print("oracle equivalence: exact for all checked (n, k)")
    return 0


def _draw_counts(ax, rows):
    by_n: dict = {}
    for r in rows:
        by_n.setdefault(r["n"], 0)
        by_n[r["n"]] += r["trees"]
    ns = sorted(by_n)
    ax.semilogy(ns, [by_n[n] for n in ns], "o-")
    ax.set_xlabel("number of inputs n")
    ax.set_ylabel("weighted rooted trees (all weights)")
    ax.set_title("Size of the cross-checked tree classes")


def cmd_manin(config: EngineConfig) -> int:
    table, _ = get_tables(config)
    try:
        phi = invariants.manin_phi(config.cap_n, rep_table=table)
    except IntegrityError as exc:
        print(f"MANIN CROSS-CHECK FAILED: {exc}", file=sys.stderr)
        return 2
    euler_ok = invariants.euler_check(config.cap_n)
    rows = [{"n": n, "poincare": " ".join(map(str, row)),
             "euler": sum(row)} for n, row in sorted(phi.items())]
    path = emit_table(rows, ["n", "poincare", "euler"],
                      config.reports_dir / "manin_phi", config.emit)
    fig = _figure(config.reports_dir / "manin_phi.png",
                  lambda f, ax: _draw_euler(ax, phi))
    _print_rows(rows, ["n", "poincare", "euler"], limit=20)
    print(f"both phi routes agree up to n={min(config.cap_n, table.cap_n)}")
    print(f"euler identity to order q^{config.cap_n}: "
          f"{'holds' if euler_ok else 'FAILS'}")
    print(f"report: {path}\nfigure: {fig}")
    return 0 if euler_ok else 2


def _draw_euler(ax, phi):
    ns = sorted(phi)
    ax.semilogy(ns, [max(sum(phi[n]), 1) for n in ns], "o-")
    ax.set_xlabel("n")
    ax.set_ylabel("Euler characteristic of the (n+1)-pointed space")
    ax.set_title("Euler characteristics from the rank recursion")


def cmd_conj(config: EngineConfig, suite: str) -> int:
    out: dict = {"suite": suite, "engine_version": __version__}
    reports_dir = config.reports_dir
    if suite == "logconcave":
        cap_k = max(config.cap_k, config.cap_n - 2)
        q = invariants.q_inv_up_to(config.cap_n, cap_k)
        p = invariants.p_inv_up_to(config.cap_n, cap_k, q)
        failures = []
        for n in range(3, config.cap_n + 1):
            for name, row in (("p", [p[(n, k)] for k in range(n - 2)]),
                              ("q", [q[(n, k)] for k in range(n - 1)])):
                rep = concavity.check_log_concave(row, f"{name}_{n}")
                if not rep.ok:
                    failures.append(rep.to_json_dict())
        out.update({"conjecture": "log_concavity", "n_max": config.cap_n,
                    "verdict": "holds" if not failures else "fails",
                    "failures": failures})
        _figure(reports_dir / "conj_logconcave.png",
                lambda f, ax: _draw_rows(ax, q, p, config.cap_n))
    elif suite == "mult":
        table, _ = get_tables(config)
        verdict = "holds"
        per_n = []
        for n in range(3, config.cap_n + 1):
            if config.cap_k < n - 2:
                continue
            result = concavity.check_mult_lc_all(table, n)
            per_n.append(result)
            if result["verdict"] != "holds":
                verdict = "fails"
        out.update({"conjecture": "mult_lc", "verdict": verdict, "per_n": per_n})
    elif suite == "equiv":
        table, _ = get_tables(config)
        per_n = []
        verdict = "holds"
        for n in range(3, config.cap_n + 1):
            if config.cap_k < n - 2:
                continue
            result = concavity.check_equiv_lc(table, n, strong=True)
            per_n.append(result)
            if result["verdict"] != "holds":
                verdict = "fails"
        out.update({"conjecture": "equiv_lc", "mode": "strong",
                    "verdict": verdict, "per_n": per_n})
    elif suite == "ultra":
        n_max = max(config.cap_n, 200)
        q = invariants.q_inv_up_to(n_max, 4)
        witness = concavity.find_ultra_witness(q, n_max)
        out.update({"conjecture": "ultra_lc_failure", "n_max": n_max,
                    "witness": witness,
                    "verdict": "witness_found" if witness else "no_witness"})
        golden = Path(config.cache_dir) / "ultra_witness.json"
        if witness:
            _dump_json(golden, {"engine_version": __version__, **witness})
    elif suite == "asymptotics":
        n_list = [50, 100, 200, 300]
        q = invariants.q_inv_up_to(max(n_list), 6)
        p = invariants.p_inv_up_to(max(n_list), 6, q)
        rows = []
        for k in range(1, 5):
            rows.extend(concavity.asymptotic_report(k, n_list, q, p))
        cols = ["n", "k", "q_ratio", "p_ratio", "ultra_q_ratio",
                "ultra_p_ratio", "q_limit", "ultra_q_limit"]
        path = emit_table(rows, cols, reports_dir / "conj_asymptotics", config.emit)
        _figure(reports_dir / "conj_asymptotics.png",
                lambda f, ax: _draw_trend(ax, q, n_list))
        _print_rows(rows, cols)
        print(f"report: {path}")
        return 0
    else:
        raise ValueError(f"unknown suite {suite!r}")
    path = reports_dir / f"conj_{suite}.json"
    _dump_json(path, out)
    print(json.dumps({k: v for k, v in out.items() if k != "per_n"}, indent=1))
    print(f"report: {path}")
    return 0  # conjecture failures are data, not errors


def _draw_trend(ax, q, n_list):
    for k in range(1, 5):
        ax.plot(n_list, [float(concavity.leading_ratio(q, n, k)) for n in n_list],
                "o-", label=f"k={k}")
    ax.axhline(1.0, color="gray", linestyle=":")
    ax.set_xlabel("n")
    ax.set_ylabel("coefficient / leading asymptotic term")
    ax.set_title("Approach to the leading asymptotics")
    ax.legend()


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------


def _env_default(name: str, fallback):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return fallback
    return type(fallback)(raw) if not isinstance(fallback, str) else raw


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="m0nbar",
        description="Equivariant cohomology series of stable-curve moduli, "
                    "quotient Betti numbers, and log-concavity diagnostics.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--cap-n", type=int,
                        default=_env_default("CAP_N", 12),
                        help="maximal x/q-degree retained")
    parser.add_argument("--cap-k", type=int,
                        default=_env_default("CAP_K", 10),
                        help="maximal t-degree retained")
    parser.add_argument("--cache-dir", default=_env_default("CACHE_DIR", ".m0nbar-cache"))
    parser.add_argument("--workers", type=int, default=_env_default("WORKERS", 1))
    parser.add_argument("--emit", choices=["json", "csv", "markdown"],
                        default=_env_default("EMIT", "csv"))
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("rep", help="equivariant character tables")
    sub.add_parser("inv", help="quotient Poincare polynomials (fast path)")
    sub.add_parser("oracle", help="tree-oracle cross-check")
    conj = sub.add_parser("conj", help="conjecture suites")
    conj.add_argument("suite", choices=["logconcave", "mult", "equiv",
                                        "ultra", "asymptotics"])
    sub.add_parser("manin", help="rank specialization cross-checks")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = EngineConfig(cap_n=args.cap_n, cap_k=args.cap_k,
                          cache_dir=args.cache_dir, workers=args.workers,
                          emit=args.emit)
    t0 = time.time()
    try:
        if args.command == "rep":
            status = cmd_rep(config)
        elif args.command == "inv":
            status = cmd_inv(config)
        elif args.command == "oracle":
            status = cmd_oracle(config)
        elif args.command == "conj":
            status = cmd_conj(config, args.suite)
        elif args.command == "manin":
            status = cmd_manin(config)
        else:  # pragma: no cover
            raise AssertionError(args.command)
    except IntegrityError as exc:
        print(f"ENGINE INTEGRITY FAILURE: {exc}", file=sys.stderr)
        return 2
    print(f"elapsed: {time.time() - t0:.2f}s")
    return status


if __name__ == "__main__":
    sys.exit(main())
