"""End-to-end acceptance checks, one test per criterion.

Every numeric comparison is an exact equality of integers or Fractions.
Run with ``pytest tests/test_acceptance.py`` (or execute this file) to get a
PASS/FAIL line per criterion in the terminal summary.
"""

import itertools
from collections import Counter
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from designcache import jsonio
from designcache.caching import BlockLabel, CachingMatrix, Point, PointBlock, build_scheme, greedy_cover, verify_cover
from designcache.delivery import make_library, random_demands, run_delivery
from designcache.designs import (
    complement_design,
    construct_affine_plane_bibd,
    construct_inversive_plane,
    construct_projective_plane_bibd,
    construct_transversal_design,
    trivial_t_design,
    verify_t_design,
)
from designcache.fixtures import builtin_design, parse_block, symbol_map
from designcache.metrics import scheme_metrics, scheme_parameters

GOLDEN = Path(__file__).parent / "golden"


def measured(scheme, design):
    matrix, cover = build_scheme(scheme, design)
    metrics = scheme_metrics(matrix, cover, scheme, scheme_parameters(scheme, design))
    return matrix, cover, metrics


def labels(name, points):
    inv = {i: s for s, i in symbol_map(name).items()}
    return "".join(inv[p] for p in sorted(points))


@pytest.mark.criterion(1, "Fano BIBD scheme and golden cover")
def test_fano_bibd_scheme_and_golden_cover():
    d = builtin_design("fano_7_3_1")
    m, cover, metrics = measured("bibd", d)
    assert (m.K, m.F, m.Q, cover.S) == (7, 7, 3, 7)
    assert m.uncached_fraction == Fraction(3, 7) and metrics.rate == Fraction(1)
    assert metrics.matches and not metrics.inconsistent_claims

    golden = (GOLDEN / "fano_bibd_cover.json").read_bytes()
    assert jsonio.dumps(jsonio.cover_to_dict(cover)).encode() == golden
    stored = jsonio.cover_from_dict(jsonio.json.loads(golden))
    first = stored.submatrices[symbol_map("fano_7_3_1")["1"]]
    assert {labels("fano_7_3_1", [m.rows[u].point]) for u in first.rows} == {"2", "4", "3"}
    assert {labels("fano_7_3_1", d.blocks[m.cols[f].block]) for f in first.cols} == {"127", "145", "136"}


@pytest.mark.criterion(2, "(9,3,1) affine-plane scheme decodes for 100 demand vectors")
def test_affine_three_rate_and_delivery():
    for d in (builtin_design("bibd_9_3_1"), construct_affine_plane_bibd(3)):
        m, cover, metrics = measured("bibd", d)
        assert (m.F, m.K, metrics.rate) == (12, 9, Fraction(3, 4))
        assert metrics.matches
    m, cover = build_scheme("bibd", builtin_design("bibd_9_3_1"))
    lib = make_library(9, m.F, 16, 0)
    for seed in range(100):
        report = run_delivery(m, cover, lib, random_demands(m.K, 9, seed), expected_rate=Fraction(3, 4))
        assert report.all_decoded and report.match, (seed, report.failures)


@pytest.mark.criterion(3, "(11,5,2) biplane scheme, M_{3,13467}, flagged submatrix count")
def test_biplane_scheme():
    name = "biplane_11_5_2"
    d = builtin_design(name)
    m, cover, metrics = measured("symm", d)
    assert (m.F, cover.S, metrics.rate) == (55, 55, Fraction(1))
    report = verify_cover(m, cover)
    assert report.is_valid_cover and report.overlap_count == 0

    sym = symbol_map(name)
    i = sym["3"]
    wanted = {
        (m.row_index(Point(sym[x])), m.col_index(PointBlock(d.blocks.index(parse_block(name, other)), i)))
        for x, other in {"1": "1235a", "4": "348ab", "6": "3569b", "7": "23789"}.items()
    }
    assert any(set(sub.pivots) == wanted for sub in cover)
    assert {labels(name, [m.rows[u].point]) for u, _ in wanted} == {"1", "4", "6", "7"}

    (flag,) = metrics.inconsistent_claims
    assert flag.field == "S" and flag.claimed == 11 and flag.measured == 55


@pytest.mark.criterion(4, "3-(8,4,1) Scheme 1 and T_{4,1}")
def test_steiner_scheme_one():
    name = "steiner_3_8_4"
    m, cover, metrics = measured("t1", builtin_design(name))
    assert (m.K, m.F, cover.S, metrics.rate) == (28, 56, 24, Fraction(3, 7))
    assert metrics.matches
    y = symbol_map(name)["4"]
    t41 = next(sub for sub in cover if all(m.cols[f].point == y for f in sub.cols))
    assert {labels(name, m.rows[u].points) for u in t41.rows} == {"37", "26", "15", "12", "35", "25", "16"}


@pytest.mark.criterion(5, "3-(8,4,1) Scheme 2 and T_{1,2}")
def test_steiner_scheme_two():
    name = "steiner_3_8_4"
    m, cover, metrics = measured("t2", builtin_design(name))
    assert (m.K, m.F, cover.S, metrics.rate) == (8, 56, 28, Fraction(1, 2))
    assert metrics.matches
    sym = symbol_map(name)
    D = {sym["1"], sym["2"]}
    t12 = next(sub for sub in cover if all(D <= set(m.cols[f].subset) for f in sub.cols))
    assert sorted(labels(name, [m.rows[u].point]) for u in t12.rows) == sorted("563478")


@pytest.mark.criterion(6, "TD(4,3) scheme and C_2")
def test_transversal_design_scheme():
    td = builtin_design("td_4_3")
    m, cover, metrics = measured("td", td)
    assert (m.K, m.F, cover.S, metrics.rate) == (9, 12, 12, Fraction(1))
    assert metrics.matches
    two = symbol_map("td_4_3")["2"]
    c2 = next(sub for sub in cover if all(two in td.blocks[m.rows[u].block] for u in sub.rows))
    assert {td.label(m.cols[f].point) for f in c2.cols} == {"4", "5", "6"}


@pytest.mark.criterion(7, "Scheme 2 on all 3-subsets of 6 points equals the classical rate")
def test_classical_scheme_equivalence():
    m, cover, metrics = measured("t2", trivial_t_design(6, 3))
    K, memory = 6, Fraction(1, 2)
    assert m.K == K and Fraction(1) - m.uncached_fraction == memory
    assert metrics.rate == Fraction(3, 4) == K * (1 - memory) / (1 + K * memory)


@pytest.mark.criterion(8, "inversive plane q=3: exhaustive triples, Scheme 1 metrics, flagged F")
def test_inversive_plane_three():
    d = construct_inversive_plane(3)
    assert (d.v, d.k, d.b) == (10, 4, 30)
    report = verify_t_design(d, 3, 1)
    assert report.passed
    counts = Counter(s for blk in d.blocks for s in itertools.combinations(blk, 3))
    assert len(counts) == 120 == len(list(itertools.combinations(range(10), 3)))
    assert set(counts.values()) == {1}

    m, cover, metrics = measured("t1", d)
    assert metrics.params == {"v": 10, "k": 4, "t": 3}
    assert metrics.matches and m.F == 120
    (flag,) = metrics.inconsistent_claims
    assert flag.field == "F" and flag.formula == "(q^2+1)(q+1)"
    assert flag.claimed == 40 and flag.measured == 120


def small_cases():
    cases = [("bibd", n, f) for n in ("fano_7_3_1", "bibd_9_3_1") for f in [lambda n=n: builtin_design(n)]]
    for n in (2, 3, 4, 5):
        cases.append(("bibd", f"projective {n}", lambda n=n: construct_projective_plane_bibd(n)))
        cases.append(("bibd", f"affine {n}", lambda n=n: construct_affine_plane_bibd(n)))
    cases.append(("symm", "biplane_11_5_2", lambda: builtin_design("biplane_11_5_2")))
    cases.append(("symm", "complement fano", lambda: complement_design(builtin_design("fano_7_3_1"))))
    cases.append(("symm", "all 3-subsets of 4", lambda: trivial_t_design(4, 3)))
    for scheme in ("t1", "t2"):
        cases.append((scheme, "steiner_3_8_4", lambda: builtin_design("steiner_3_8_4")))
        cases.append((scheme, "all 3-subsets of 6", lambda: trivial_t_design(6, 3)))
        for q in (2, 3, 4, 5):
            cases.append((scheme, f"inversive {q}", lambda q=q: construct_inversive_plane(q)))
    cases.append(("td", "td_4_3", lambda: builtin_design("td_4_3")))
    for q in (2, 3, 4, 5):
        for k in (q, q + 1):
            cases.append(("td", f"TD({k},{q})", lambda k=k, q=q: construct_transversal_design(k, q)))
    return cases


SMALL_CASES = small_cases()


@pytest.mark.criterion(9, "property suite over every scheme and design with q, n <= 5")
@pytest.mark.parametrize("scheme, label, make", SMALL_CASES, ids=[f"{s}:{l}" for s, l, _ in SMALL_CASES])
def test_property_suite(scheme, label, make):
    m, cover, metrics = measured(scheme, make())
    report = verify_cover(m, cover)
    assert report.is_valid_cover and report.overlap_count == 0
    assert m.K * m.Q == report.ones_covered == report.ones_total
    assert metrics.rate == Fraction(cover.S, m.F) and metrics.matches

    N = m.K
    lib = make_library(N, m.F, 8, 1)
    vectors = [(0,) * m.K, tuple(range(m.K)), (N - 1,) * m.K]
    vectors += [random_demands(m.K, N, seed) for seed in range(5)]
    for demands in vectors:
        result = run_delivery(m, cover, lib, demands)
        assert result.all_decoded, (demands, result.failures)


def random_constant_weight_matrix(seed):
    rng = np.random.default_rng(seed)
    K, F = int(rng.integers(1, 33)), int(rng.integers(1, 33))
    Q = int(rng.integers(1, F + 1))
    bits = np.zeros((K, F), dtype=bool)
    for u in range(K):
        bits[u, rng.choice(F, size=Q, replace=False)] = True
    return CachingMatrix([Point(u) for u in range(K)], [BlockLabel(f) for f in range(F)], bits)


@pytest.mark.criterion(10, "greedy cover always verifies")
def test_greedy_oracle_equivalence():
    for scheme, _, make in SMALL_CASES:
        m, _ = build_scheme(scheme, make())
        assert verify_cover(m, greedy_cover(m)).is_valid_cover
    for seed in range(200):
        m = random_constant_weight_matrix(seed)
        report = verify_cover(m, greedy_cover(m))
        assert report.is_valid_cover, seed


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
