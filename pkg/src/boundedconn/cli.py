"""Command-line entry point: ``solve``, ``oracle`` and ``verify``.

Exit codes: 0 success, 1 usage or parse error, 2 every random encoding was
singular, 3 ``verify`` found more mismatches than its threshold allows.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import kapc, kapvc
from .errors import BoundedConnError, EncodingExhausted, ParseError
from .field import DEFAULT_PRIME, PrimeField
from .graph import Digraph, cap_parallel_edges, format_graph, parse_graph, random_digraph
from .oracle import all_pairs_oracle
from .results import ConnectivityMatrix
from .sampling import DrawStats

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ENCODING = 2
EXIT_THRESHOLD = 3

MODES = ("edge", "vertex", "oracle-edge", "oracle-vertex")

Solver = Callable[[Digraph, int, int, int, PrimeField, DrawStats], ConnectivityMatrix]


class UsageError(BoundedConnError):
    pass


@dataclass
class RunConfig:
    mode: str = "edge"
    k: int = 1
    seed: int = 0
    prime: int | None = None
    trials: int = 1
    input: str | None = None
    output: str | None = None

    def validate(self) -> PrimeField:
        if self.mode not in MODES:
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.k < 1:
            raise UsageError("--k must be at least 1")
        if self.trials < 1 or self.trials % 2 == 0:
            raise UsageError("--trials must be an odd positive integer")
        if self.seed < 0:
            raise UsageError("--seed must be non-negative")
        return PrimeField(self.prime if self.prime is not None else DEFAULT_PRIME)


def prime_warning(mode: str, g: Digraph, k: int, p: int) -> str | None:
    """Message when ``p`` is below the size the failure bounds assume."""
    if mode.endswith("edge"):
        m_new = cap_parallel_edges(g, k).m + 2 * k * g.n
        if p < 2 * m_new**5:
            return f"prime {p} < 2*m_new^5 with m_new={m_new}; the per-pair failure bound is weaker than stated"
    elif p < 2 * g.n**5:
        return f"prime {p} < 2*n^5 with n={g.n}; the per-pair failure bound is weaker than stated"
    return None


def _edge_solver(g, k, seed, trials, field, stats):
    return kapc.solve_all_pairs(g, k, seed, trials, field, stats=stats)


def _vertex_solver(g, k, seed, trials, field, stats):
    return kapvc.solve_all_pairs(g, k, seed, trials, field, stats=stats)


SOLVERS: dict[str, Solver] = {"edge": _edge_solver, "vertex": _vertex_solver}


def solve_graph(config: RunConfig, g: Digraph, stats: DrawStats | None = None) -> ConnectivityMatrix:
    field = config.validate()
    if config.mode.startswith("oracle-"):
        return all_pairs_oracle(g, config.k, config.mode.split("-", 1)[1])
    return SOLVERS[config.mode](g, config.k, config.seed, config.trials, field, stats)


def _read_input(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write_output(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def run_solve(config: RunConfig) -> int:
    try:
        field = config.validate()
        g = parse_graph(_read_input(config.input))
        if not config.mode.startswith("oracle-"):
            msg = prime_warning(config.mode, g, config.k, field.p)
            if msg:
                print(f"warning: {msg}", file=sys.stderr)
        table = solve_graph(config, g)
    except EncodingExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENCODING
    except (BoundedConnError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write_output(config.output, table.format())
    return EXIT_OK


@dataclass
class VerifyConfig:
    mode: str = "edge"
    instances: int = 200
    n_min: int = 2
    n_max: int = 8
    m_max: int = 20
    k_max: int = 4
    seed: int = 0
    prime: int | None = None
    trials: int = 1
    threshold: float = 0.001


@dataclass
class VerifyReport:
    lines: list[str]
    instances: int
    pairs: int
    mismatches: int
    stats: DrawStats

    @property
    def mismatch_rate(self) -> float:
        return self.mismatches / self.pairs if self.pairs else 0.0

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)


def instance_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=(index,)).generate_state(1)[0])


def random_instance(cfg: VerifyConfig, index: int) -> tuple[int, Digraph, int]:
    """Reproducible (seed, graph, k) for sweep position ``index``."""
    iseed = instance_seed(cfg.seed, index)
    rng = np.random.default_rng(iseed)
    n = int(rng.integers(cfg.n_min, cfg.n_max + 1))
    m = int(rng.integers(0, cfg.m_max + 1))
    k = int(rng.integers(1, cfg.k_max + 1))
    g = random_digraph(rng, n, m, simple=(cfg.mode == "vertex"))
    return iseed, g, k


def run_verify(cfg: VerifyConfig, solver: Solver | None = None) -> tuple[int, VerifyReport]:
    """Sweep random instances, comparing the algebraic solver with the oracle.

    ``solver`` overrides the algebraic solver; tests use it to inject faults.
    """
    if cfg.mode not in SOLVERS:
        raise UsageError("verify --mode must be 'edge' or 'vertex'")
    if not 2 <= cfg.n_min <= cfg.n_max or cfg.m_max < 0 or cfg.k_max < 1 or cfg.instances < 0:
        raise UsageError("invalid sweep ranges")
    field = RunConfig(mode=cfg.mode, prime=cfg.prime, trials=cfg.trials, seed=cfg.seed).validate()
    solver = solver or SOLVERS[cfg.mode]
    stats = DrawStats()
    lines = []
    pairs = total = 0
    for i in range(cfg.instances):
        iseed, g, k = random_instance(cfg, i)
        got = solver(g, k, iseed, cfg.trials, field, stats)
        want = all_pairs_oracle(g, k, cfg.mode)
        bad = got.mismatches(want)
        pairs += g.n * (g.n - 1)
        total += len(bad)
        lines.append(f"instance {i}\tseed={iseed}\tn={g.n}\tm={g.m}\tk={k}\tmismatches={len(bad)}")
        for s, t in bad:
            lines.append(f"  mismatch ({s},{t}): solver={got[s, t]} oracle={want[s, t]}")
        if bad:
            lines.append("  graph: " + format_graph(g).strip().replace("\n", "; "))
    report = VerifyReport(lines, cfg.instances, pairs, total, stats)
    rate = report.mismatch_rate
    lines.append(
        f"summary\tmode={cfg.mode}\tinstances={cfg.instances}\tpairs={pairs}\tmismatches={total}"
        f"\trate={rate:.6g}\tthreshold={cfg.threshold:g}\tdraws={stats.draws}\tsingular_draws={stats.failures}"
    )
    return (EXIT_THRESHOLD if rate > cfg.threshold else EXIT_OK), report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="boundedconn", description="k-bounded all-pairs connectivity on directed graphs")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, modes):
        p.add_argument("--mode", choices=modes, default="edge")
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--input", default=None, help="edge-list file (default stdin)")
        p.add_argument("--output", default=None, help="output file (default stdout)")

    solve = sub.add_parser("solve", help="algebraic k-APC / k-APVC")
    common(solve, ("edge", "vertex"))
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--prime", type=int, default=None)
    solve.add_argument("--trials", type=int, default=1)

    oracle = sub.add_parser("oracle", help="max-flow ground truth")
    common(oracle, ("edge", "vertex"))

    verify = sub.add_parser("verify", help="compare the solver with the oracle on random graphs")
    verify.add_argument("--mode", choices=("edge", "vertex"), default="edge")
    verify.add_argument("--instances", type=int, default=200)
    verify.add_argument("--n-min", type=int, default=2)
    verify.add_argument("--n-max", type=int, default=8)
    verify.add_argument("--m-max", type=int, default=20)
    verify.add_argument("--k-max", type=int, default=4)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--prime", type=int, default=None)
    verify.add_argument("--trials", type=int, default=1)
    verify.add_argument("--threshold", type=float, default=0.001, help="largest tolerated mismatch rate over pairs")
    verify.add_argument("--output", default=None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        cfg = VerifyConfig(
            mode=args.mode,
            instances=args.instances,
            n_min=args.n_min,
            n_max=args.n_max,
            m_max=args.m_max,
            k_max=args.k_max,
            seed=args.seed,
            prime=args.prime,
            trials=args.trials,
            threshold=args.threshold,
        )
        try:
            code, report = run_verify(cfg)
            _write_output(args.output, report.text())
        except (BoundedConnError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        return code
    if args.command == "oracle":
        config = RunConfig(mode=f"oracle-{args.mode}", k=args.k, input=args.input, output=args.output)
    else:
        config = RunConfig(
            mode=args.mode,
            k=args.k,
            seed=args.seed,
            prime=args.prime,
            trials=args.trials,
            input=args.input,
            output=args.output,
        )
    return run_solve(config)


if __name__ == "__main__":
    sys.exit(main())
