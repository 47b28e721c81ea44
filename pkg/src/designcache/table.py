"""Reproduce the per-scheme parameter table from constructed designs."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable, Iterator

from .caching import build_scheme, verify_cover
from .designs import (
    complement_design,
    construct_affine_plane_bibd,
    construct_inversive_plane,
    construct_projective_plane_bibd,
    construct_transversal_design,
    trivial_t_design,
)
from .errors import DesignCacheError
from .fixtures import builtin_design
from .gf import prime_power
from .metrics import SchemeMetrics, scheme_metrics, scheme_parameters

DEFAULT_MAX_N = 16
DEFAULT_MAX_INVERSIVE_Q = 16
CELL_BUDGET = 2 * 10**7


@dataclass(frozen=True)
class TableRow:
    scheme: str
    design: str
    metrics: SchemeMetrics | None = None
    cover_valid: bool | None = None
    overlaps: int | None = None
    skipped: str | None = None

    @property
    def ok(self) -> bool:
        """Measured values equal the closed forms and the cover verified."""
        return self.skipped is not None or bool(
            self.cover_valid and self.overlaps == 0 and self.metrics.matches
        )


def prime_powers(limit: int) -> list[int]:
    out = []
    for n in range(2, limit + 1):
        try:
            prime_power(n)
        except DesignCacheError:
            continue
        out.append(n)
    return out


def _row_size(scheme: str, params: dict[str, int]) -> int:
    """K * F predicted before building anything, to skip oversized rows."""
    if scheme == "td":
        return params["n"] ** 2 * params["k"] * params["n"]
    v, k = params["v"], params["k"]
    if scheme == "t1":
        t = params["t"]
        return comb(v, t - 1) * comb(v, t) * k // comb(k, t)
    if scheme == "t2":
        return v * comb(v, params["t"])
    return v * v * k


def _entries(max_n: int, max_inversive_q: int) -> Iterator[tuple[str, str, dict, Callable]]:
    for n in prime_powers(max_n):
        yield "bibd", f"projective n={n}", {"v": n * n + n + 1, "k": n + 1}, lambda n=n: construct_projective_plane_bibd(n)
    for n in prime_powers(max_n):
        yield "bibd", f"affine n={n}", {"v": n * n, "k": n}, lambda n=n: construct_affine_plane_bibd(n)
    yield "symm", "builtin biplane_11_5_2", {"v": 11, "k": 5}, lambda: builtin_design("biplane_11_5_2")
    yield "symm", "complement of fano_7_3_1", {"v": 7, "k": 4}, lambda: complement_design(builtin_design("fano_7_3_1"))
    for scheme in ("t1", "t2"):
        yield scheme, "builtin steiner_3_8_4", {"v": 8, "k": 4, "t": 3}, lambda: builtin_design("steiner_3_8_4")
        for q in prime_powers(max(max_n, max_inversive_q)):
            params = {"v": q * q + 1, "k": q + 1, "t": 3}
            if q > max_inversive_q:
                yield scheme, f"inversive q={q}", params, None
            else:
                yield scheme, f"inversive q={q}", params, lambda q=q: construct_inversive_plane(q)
    yield "t2", "complete 3-subsets of 6 points", {"v": 6, "k": 3, "t": 3}, lambda: trivial_t_design(6, 3)
    yield "td", "builtin td_4_3", {"k": 4, "n": 3}, lambda: builtin_design("td_4_3")
    for q in prime_powers(max_n):
        for k in (q, q + 1):
            yield "td", f"transversal k={k} q={q}", {"k": k, "n": q}, lambda k=k, q=q: construct_transversal_design(k, q)


def table1_rows(
    max_n: int = DEFAULT_MAX_N, max_inversive_q: int = DEFAULT_MAX_INVERSIVE_Q
) -> list[TableRow]:
    """Build, verify and measure every supported (scheme, design) row.

    Rows beyond the inversive-plane limit or the matrix-size budget are
    returned as skipped rather than computed.
    """
    rows = []
    for scheme, name, params, make in _entries(max_n, max_inversive_q):
        if make is None:
            rows.append(TableRow(scheme, name, skipped=f"q above --max-inversive-q={max_inversive_q}"))
            continue
        if _row_size(scheme, params) > CELL_BUDGET:
            rows.append(TableRow(scheme, name, skipped="matrix exceeds cell budget"))
            continue
        try:
            design = make()
        except DesignCacheError as exc:
            rows.append(TableRow(scheme, name, skipped=f"{exc.code}: {exc}"))
            continue
        matrix, cover = build_scheme(scheme, design)
        report = verify_cover(matrix, cover)
        metrics = scheme_metrics(matrix, cover, scheme, scheme_parameters(scheme, design))
        rows.append(TableRow(scheme, name, metrics, report.is_valid_cover, report.overlap_count))
    return rows
