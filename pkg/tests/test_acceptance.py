"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import time

import numpy as np
import pytest

from boundedconn import cli, kapc, kapvc
from boundedconn.field import PrimeField
from boundedconn.graph import format_graph, random_digraph, transform_for_kapc
from boundedconn.linalg import FpMatrix, bounded_rank, inverse, low_rank_inverse_update
from boundedconn.oracle import all_pairs_oracle, edge_connectivity
from boundedconn.results import ConnectivityMatrix
from oracles import sympy_rank

P61 = (1 << 61) - 1
SWEEP_INSTANCES = 200


@pytest.fixture(scope="module")
def field():
    return PrimeField(P61)


def report(capsys, number, name, ok, detail):
    with capsys.disabled():
        print(f"\nACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}  {name}: {detail}")
    assert ok, detail


def cli_sweep(mode, tmp_path, capsys):
    cfg = cli.VerifyConfig(mode=mode, seed=2024)
    mismatches = pairs = 0
    start = time.perf_counter()
    for i in range(SWEEP_INSTANCES):
        iseed, g, k = cli.random_instance(cfg, i)
        path = tmp_path / f"{mode}{i}.txt"
        path.write_text(format_graph(g))
        code = cli.main(["solve", "--mode", mode, "--k", str(k), "--seed", str(iseed), "--input", str(path)])
        out = capsys.readouterr().out
        assert code == cli.EXIT_OK
        got = ConnectivityMatrix.parse(out, k)
        mismatches += len(got.mismatches(all_pairs_oracle(g, k, mode)))
        pairs += g.n * (g.n - 1)
    return mismatches, pairs, time.perf_counter() - start


def test_01_edge_mode_matches_oracle(tmp_path, capsys):
    bad, pairs, elapsed = cli_sweep("edge", tmp_path, capsys)
    ok = bad <= 1 and elapsed < 60
    report(capsys, 1, "edge-mode oracle equivalence", ok,
           f"{SWEEP_INSTANCES} instances, {pairs} pairs, {bad} mismatches (<= 1), {elapsed:.1f}s (< 60s)")


def test_02_vertex_mode_matches_oracle(tmp_path, capsys):
    bad, pairs, elapsed = cli_sweep("vertex", tmp_path, capsys)
    ok = bad <= 1 and elapsed < 60
    report(capsys, 2, "vertex-mode oracle equivalence", ok,
           f"{SWEEP_INSTANCES} instances, {pairs} pairs, {bad} mismatches (<= 1), {elapsed:.1f}s (< 60s)")


def test_03_low_rank_inverse_identity(field, capsys):
    rng = np.random.default_rng(3)
    failures = 0
    for _ in range(100):
        a = int(rng.integers(1, 21))
        b = int(rng.integers(1, 6))
        left = FpMatrix.random(a, b, rng, field)
        right = FpMatrix.random(b, a, rng, field)
        direct = inverse(FpMatrix.identity(a, field) - left @ right)
        failures += low_rank_inverse_update(left, right) != direct
    report(capsys, 3, "exact low-rank inverse identity", failures == 0, f"100 cases, {failures} unequal")


def test_04_flow_vector_fixed_point(field, capsys):
    rng = np.random.default_rng(4)
    checked = failures = 0
    while checked < 20:
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, 4))
        room = 60 - 2 * k * n
        if room < 0:
            continue
        g = random_digraph(rng, n, int(rng.integers(0, room + 1)))
        enc = kapc.encode(g, k, rng, field)
        K = kapc.transfer_matrix(enc)
        assert K.rows <= 60
        for s in range(n):
            F = kapc.flow_vectors(enc, s)
            failures += F != F @ K + kapc.source_matrix(enc, s)
        checked += 1
    report(capsys, 4, "exact fixed point F = FK + H_s", failures == 0, f"20 graphs, {failures} failing sources")


def test_05_pair_matrix_equals_direct_product(field, capsys):
    rng = np.random.default_rng(5)
    failures = total = 0
    for _ in range(20):
        n = int(rng.integers(2, 11))
        k = int(rng.integers(1, 4))
        g = random_digraph(rng, n, int(rng.integers(0, 3 * n + 1)), simple=True)
        enc = kapvc.encode(g, k, rng, field)
        for s in range(n):
            for t in range(n):
                if s != t:
                    total += 1
                    failures += kapvc.assemble_F(enc, s, t) != kapvc.neighborhood_product(enc, s, t)
    report(capsys, 5, "exact pair matrix from D_ij", failures == 0, f"20 graphs, {total} pairs, {failures} unequal")


def test_06_bounded_rank(field, capsys):
    rng = np.random.default_rng(6)
    failures = 0
    for _ in range(1000):
        rows, cols = (int(v) for v in rng.integers(1, 13, size=2))
        r = int(rng.integers(0, min(rows, cols) + 1))
        if r:
            a = FpMatrix.random(rows, r, rng, field) @ FpMatrix.random(r, cols, rng, field)
        else:
            a = FpMatrix.zeros(rows, cols, field)
        want = sympy_rank(a.tolist(), P61)
        failures += sum(bounded_rank(a, k) != min(k, want) for k in range(1, 13))
    report(capsys, 6, "bounded_rank = min(k, rank)", failures == 0, f"1000 matrices x 12 k, {failures} wrong")


def test_07_transform_preserves_connectivity(capsys):
    rng = np.random.default_rng(7)
    failures = 0
    for _ in range(100):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(1, 4))
        g = random_digraph(rng, n, int(rng.integers(0, 21)))
        h = transform_for_kapc(g, k).new_graph
        for s in range(n):
            for t in range(n):
                if s != t:
                    failures += min(k, edge_connectivity(h, s, t)) != min(k, edge_connectivity(g, s, t))
    report(capsys, 7, "transform preserves min(k, lambda)", failures == 0, f"100 instances, {failures} pairs differ")


def test_08_random_projection_rank(field, capsys):
    rng = np.random.default_rng(8)
    hits = 0
    for _ in range(1000):
        r = int(rng.integers(0, 11))
        k = int(rng.integers(1, 6))
        m = FpMatrix.random(10, r, rng, field) @ FpMatrix.random(r, 10, rng, field) if r else FpMatrix.zeros(10, 10, field)
        gamma = FpMatrix.random(k + 1, 10, rng, field)
        hits += bounded_rank(gamma @ m, k + 1) == min(k + 1, r)
    report(capsys, 8, "rank(Gamma M) = min(k+1, rank M)", hits >= 999, f"{hits}/1000 successes (>= 999)")


def test_09_singular_draws_are_rare(capsys):
    draws = failures = 0
    for mode in ("edge", "vertex"):
        code, rep = cli.run_verify(cli.VerifyConfig(mode=mode, instances=SWEEP_INSTANCES, seed=909))
        assert code == cli.EXIT_OK
        draws += rep.stats.draws
        failures += rep.stats.failures
    rate = failures / draws
    report(capsys, 9, "singular encodings < 0.1% of draws", rate < 0.001, f"{failures}/{draws} draws singular")


def test_10_cli_is_deterministic(tmp_path, capsys):
    rng = np.random.default_rng(10)
    identical = True
    for mode in ("edge", "vertex"):
        path = tmp_path / f"{mode}.txt"
        path.write_text(format_graph(random_digraph(rng, 8, 20, simple=(mode == "vertex"))))
        outputs = []
        for _ in range(2):
            out_path = tmp_path / f"{mode}-{len(outputs)}.tsv"
            cli.main(["solve", "--mode", mode, "--k", "3", "--seed", "99", "--trials", "3",
                      "--input", str(path), "--output", str(out_path)])
            outputs.append(out_path.read_bytes())
        identical &= outputs[0] == outputs[1] and len(outputs[0]) > 0
    report(capsys, 10, "byte-identical repeated runs", identical, "edge and vertex mode, two runs each")


def test_11_desk_scale_performance(tmp_path, capsys):
    rng = np.random.default_rng(11)
    timings = {}
    for mode, n, m in (("edge", 40, 200), ("vertex", 100, 600)):
        path = tmp_path / f"{mode}.txt"
        path.write_text(format_graph(random_digraph(rng, n, m, simple=(mode == "vertex"))))
        start = time.perf_counter()
        code = cli.main(["solve", "--mode", mode, "--k", "4", "--input", str(path)])
        timings[mode] = time.perf_counter() - start
        out = capsys.readouterr().out
        assert code == cli.EXIT_OK and len(out.splitlines()) == n
    ok = all(t < 30 for t in timings.values())
    report(capsys, 11, "desk-scale performance", ok,
           f"edge n=40 m=200 k=4 {timings['edge']:.1f}s, vertex n=100 m=600 k=4 {timings['vertex']:.1f}s (< 30s each)")
