from fractions import Fraction
from math import comb

import pytest

from designcache.caching import build_scheme
from designcache.designs import (
    construct_affine_plane_bibd,
    construct_inversive_plane,
    construct_projective_plane_bibd,
    construct_transversal_design,
    trivial_t_design,
)
from designcache.fixtures import builtin_design
from designcache.metrics import closed_form, family_formulas, scheme_metrics, scheme_parameters
from designcache.table import prime_powers, table1_rows


def metrics_for(scheme, design):
    m, cover = build_scheme(scheme, design)
    return scheme_metrics(m, cover, scheme, scheme_parameters(scheme, design))


@pytest.mark.parametrize("scheme, make, expected", [
    ("bibd", lambda: builtin_design("fano_7_3_1"), dict(K=7, F=7, S=7, rate=Fraction(1))),
    ("bibd", lambda: builtin_design("bibd_9_3_1"), dict(K=9, F=12, S=9, rate=Fraction(3, 4))),
    ("symm", lambda: builtin_design("biplane_11_5_2"), dict(K=11, F=55, S=55, rate=Fraction(1))),
    ("t1", lambda: builtin_design("steiner_3_8_4"), dict(K=28, F=56, S=24, rate=Fraction(3, 7))),
    ("t2", lambda: builtin_design("steiner_3_8_4"), dict(K=8, F=56, S=28, rate=Fraction(1, 2))),
    ("td", lambda: builtin_design("td_4_3"), dict(K=9, F=12, S=12, rate=Fraction(1))),
    ("t2", lambda: trivial_t_design(6, 3), dict(K=6, F=20, S=15, rate=Fraction(3, 4))),
])
def test_known_values(scheme, make, expected):
    m = metrics_for(scheme, make())
    assert m.matches
    for name, value in expected.items():
        assert getattr(m, name) == value
        assert m.predicted[name] == value


def test_closed_forms_by_hand():
    # values worked out directly from the scheme definitions
    assert closed_form("bibd", {"v": 13, "k": 4})["rate"] == Fraction(12, 12)
    assert closed_form("t2", {"v": 10, "k": 4, "t": 3})["rate"] == Fraction(3, 8)
    t1 = closed_form("t1", {"v": 10, "k": 4, "t": 3})
    assert t1["F"] == 120 and t1["K"] == 45 and t1["rate"] == Fraction(1, 4)
    assert t1["uncached_fraction"] == Fraction(1, 15)
    assert closed_form("td", {"k": 5, "n": 4})["F"] == 20


def test_inversive_scheme1_flags_claimed_subpacketization():
    m = metrics_for("t1", construct_inversive_plane(3))
    assert m.matches and m.F == 120 and m.rate == Fraction(1, 4)
    bad = m.inconsistent_claims
    assert [(c.field, c.claimed, c.measured) for c in bad] == [("F", 40, 120)]
    assert {c.field for c in m.claims if c.consistent} == {"K", "rate", "uncached_fraction"}


def test_inversive_scheme2_family_formulas_agree():
    m = metrics_for("t2", construct_inversive_plane(3))
    assert m.rate == Fraction(3, 8) and m.F == comb(10, 3)
    assert m.claims and not m.inconsistent_claims


def test_symmetric_scheme_flags_proof_count():
    m = metrics_for("symm", builtin_design("biplane_11_5_2"))
    assert m.matches
    (claim,) = m.inconsistent_claims
    assert claim.field == "S" and claim.claimed == 11 and claim.measured == 55


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_plane_family_formulas_consistent(n):
    for scheme, d in (("bibd", construct_projective_plane_bibd(n)), ("bibd", construct_affine_plane_bibd(n))):
        m = metrics_for(scheme, d)
        assert m.matches and m.claims and not m.inconsistent_claims


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_td_family_formulas_consistent(q):
    for k in (q, q + 1):
        m = metrics_for("td", construct_transversal_design(k, q))
        assert m.matches and m.claims and not m.inconsistent_claims


def test_complete_subset_rate_claim():
    m = metrics_for("t2", trivial_t_design(6, 3))
    names = {c.name for c in m.claims}
    assert "complete 3-subset design" in names and not m.inconsistent_claims


def test_family_formulas_not_applied_elsewhere():
    assert family_formulas("bibd", {"v": 15, "k": 3}) == []
    assert family_formulas("t2", {"v": 8, "k": 4, "t": 3}) == []


def test_prime_powers():
    assert prime_powers(16) == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def test_table_rows_all_match_with_expected_flags():
    rows = table1_rows(max_n=9, max_inversive_q=4)
    computed = [r for r in rows if not r.skipped]
    assert computed and all(r.ok for r in computed)
    flagged = {(r.scheme, r.design) for r in computed if r.metrics.inconsistent_claims}
    expected = {(r.scheme, r.design) for r in computed
                if r.scheme == "symm" or (r.scheme == "t1" and r.design.startswith("inversive"))}
    assert flagged == expected
    skipped = [r for r in rows if r.skipped]
    assert all(r.design.startswith("inversive") for r in skipped)


def test_table_row_examples():
    rows = {(r.scheme, r.design): r for r in table1_rows(max_n=4, max_inversive_q=3)}
    fano = rows[("bibd", "projective n=2")].metrics
    assert (fano.K, fano.F, fano.rate, fano.uncached_fraction) == (7, 7, 1, Fraction(3, 7))
    inv = rows[("t2", "inversive q=3")].metrics
    assert (inv.K, inv.F, inv.rate) == (10, 120, Fraction(3, 8))
    td = rows[("td", "transversal k=3 q=3")].metrics
    assert (td.K, td.F, td.rate) == (9, 9, 1)


def test_asymptotic_trends_over_prime_powers():
    """F grows linearly in K and 1 - M/N shrinks like 1/sqrt(K) for the plane families."""
    qs = prime_powers(9)
    for make in (construct_projective_plane_bibd, construct_affine_plane_bibd):
        ms = [metrics_for("bibd", make(n)) for n in qs]
        fractions = [m.uncached_fraction for m in ms]
        assert fractions == sorted(fractions, reverse=True)
        assert all(1 <= f * f * m.K <= Fraction(4, 3) for f, m in zip(fractions, ms))
        assert all(m.F <= 2 * m.K for m in ms)
    for q in qs[:4]:
        m = metrics_for("td", construct_transversal_design(q + 1, q))
        assert m.F <= 2 * m.K and m.uncached_fraction ** 2 * m.K == 1
