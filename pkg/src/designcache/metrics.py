"""Closed-form scheme parameters and their comparison with measured values.

Everything is exact: ``Fraction`` throughout, equality rather than
tolerance.  Besides the general closed forms per scheme, some parameter
families have separately stated specialisations (projective and affine
planes, inversive planes, the two transversal-design families) and the
symmetric scheme has a second stated submatrix count.  Those are kept as
:class:`Claim` records so that disagreements are reported, not corrected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .caching import SCHEMES, CachingMatrix, Cover, scheme_t
from .designs import Design, TransversalDesign

FIELDS = ("K", "F", "uncached_fraction", "S", "rate")


def scheme_parameters(
    scheme: str, design: Design | TransversalDesign, t: int | None = None
) -> dict[str, int]:
    """Design parameters the closed forms are written in."""
    if scheme == "td":
        return {"k": design.k, "n": design.n}
    params = {"v": design.v, "k": design.k}
    if SCHEMES[scheme].needs_t:
        params["t"] = scheme_t(scheme, design, t)
    return params


def closed_form(scheme: str, params: dict[str, int]) -> dict[str, Fraction]:
    """General closed forms for K, F, 1 - M/N, S and R of a scheme."""
    F_ = Fraction
    if scheme == "td":
        k, n = params["k"], params["n"]
        return dict(K=F_(n * n), F=F_(k * n), uncached_fraction=F_(1, n), S=F_(k * n), rate=F_(1))
    v, k = params["v"], params["k"]
    if scheme == "bibd":
        return dict(
            K=F_(v),
            F=F_(v * (v - 1), k * (k - 1)),
            uncached_fraction=F_(k, v),
            S=F_(v),
            rate=F_(k * (k - 1), v - 1),
        )
    if scheme == "symm":
        return dict(K=F_(v), F=F_(k * v), uncached_fraction=F_(k - 1, v), S=F_(k * v), rate=F_(1))
    t = params["t"]
    if scheme == "t1":
        return dict(
            K=F_(comb(v, t - 1)),
            F=F_(comb(v, t) * k, comb(k, t)),
            uncached_fraction=F_(comb(k, t) * (v - t + 1), comb(v, t) * k),
            S=F_(comb(k - 1, t - 1) * v),
            rate=F_(comb(k - 1, t - 1) * comb(k, t) * v, comb(v, t) * k),
        )
    if scheme == "t2":
        return dict(
            K=F_(v),
            F=F_(comb(v, t)),
            uncached_fraction=F_(t, v),
            S=F_(comb(v, t - 1)),
            rate=F_(t, v - t + 1),
        )
    raise ValueError(f"unknown scheme {scheme!r}")


@dataclass(frozen=True)
class Claim:
    """A claimed value for one field, checked against the measurement."""

    name: str
    field: str
    formula: str
    claimed: Fraction
    measured: Fraction

    @property
    def consistent(self) -> bool:
        return self.claimed == self.measured


def _projective_order(v: int, k: int) -> int | None:
    n = k - 1
    return n if n >= 2 and v == n * n + n + 1 else None


def family_formulas(scheme: str, params: dict[str, int]) -> list[tuple[str, str, str, Fraction]]:
    """Specialised closed forms that apply to these parameters.

    Returns ``(family, field, formula, value)`` tuples.
    """
    F_ = Fraction
    out: list[tuple[str, str, str, Fraction]] = []
    if scheme == "bibd":
        v, k = params["v"], params["k"]
        n = _projective_order(v, k)
        if n is not None:
            fam = f"projective plane n={n}"
            out += [
                (fam, "F", "n^2+n+1", F_(n * n + n + 1)),
                (fam, "K", "n^2+n+1", F_(n * n + n + 1)),
                (fam, "rate", "1", F_(1)),
                (fam, "uncached_fraction", "(n+1)/(n^2+n+1)", F_(n + 1, n * n + n + 1)),
            ]
        if k >= 2 and v == k * k:
            n = k
            fam = f"affine plane n={n}"
            out += [
                (fam, "F", "n^2+n", F_(n * n + n)),
                (fam, "K", "n^2", F_(n * n)),
                (fam, "rate", "n/(n+1)", F_(n, n + 1)),
                (fam, "uncached_fraction", "1/n", F_(1, n)),
            ]
    elif scheme in ("t1", "t2"):
        v, k, t = params["v"], params["k"], params["t"]
        q = k - 1
        if t == 3 and q >= 2 and v == q * q + 1:
            fam = f"inversive plane q={q}"
            if scheme == "t1":
                out += [
                    (fam, "F", "(q^2+1)(q+1)", F_((q * q + 1) * (q + 1))),
                    (fam, "K", "(q^2+1)q^2/2", F_((q * q + 1) * q * q, 2)),
                    (fam, "rate", "(q-1)/(2(q+1))", F_(q - 1, 2 * (q + 1))),
                    (fam, "uncached_fraction", "(q-1)/(q(q^2+1))", F_(q - 1, q * (q * q + 1))),
                ]
            else:
                out += [
                    (fam, "F", "C(q^2+1,3)", F_(comb(q * q + 1, 3))),
                    (fam, "K", "q^2+1", F_(q * q + 1)),
                    (fam, "rate", "3/(q^2-1)", F_(3, q * q - 1)),
                    (fam, "uncached_fraction", "3/(q^2+1)", F_(3, q * q + 1)),
                ]
        if scheme == "t2" and k == t:
            # all t-subsets of K points: the classical centralized scheme
            K, m = v, F_(v - t, v)
            fam = f"complete {t}-subset design"
            out.append((fam, "rate", "K(1-M/N)/(1+K M/N)", K * (1 - m) / (1 + K * m)))
    elif scheme == "symm":
        v = params["v"]
        out.append(("symmetric-scheme proof count", "S", "v", F_(v)))
    elif scheme == "td":
        k, n = params["k"], params["n"]
        if k in (n, n + 1) and n >= 2:
            fam = f"transversal design k={'q' if k == n else 'q+1'}, q={n}"
            out += [
                (fam, "F", "q^2" if k == n else "q^2+q", F_(k * n)),
                (fam, "K", "q^2", F_(n * n)),
                (fam, "rate", "1", F_(1)),
                (fam, "uncached_fraction", "1/q", F_(1, n)),
            ]
    return out


@dataclass(frozen=True)
class SchemeMetrics:
    """Measured parameters next to the closed-form predictions."""

    scheme: str
    K: int
    F: int
    Q: int
    uncached_fraction: Fraction
    S: int
    rate: Fraction
    params: dict[str, int]
    predicted: dict[str, Fraction]
    claims: tuple[Claim, ...] = field(default=())

    def measured(self) -> dict[str, Fraction]:
        return {f: Fraction(getattr(self, f)) for f in FIELDS}

    @property
    def mismatches(self) -> tuple[str, ...]:
        m = self.measured()
        return tuple(f for f in FIELDS if m[f] != self.predicted[f])

    @property
    def matches(self) -> bool:
        return not self.mismatches

    @property
    def inconsistent_claims(self) -> tuple[Claim, ...]:
        return tuple(c for c in self.claims if not c.consistent)


def scheme_metrics(
    matrix: CachingMatrix, cover: Cover, scheme: str, params: dict[str, int]
) -> SchemeMetrics:
    """Exact K, F, Q, 1 - M/N, S and R = S/F against the scheme's closed forms."""
    measured = dict(
        K=Fraction(matrix.K),
        F=Fraction(matrix.F),
        uncached_fraction=matrix.uncached_fraction,
        S=Fraction(cover.S),
        rate=Fraction(cover.S, matrix.F),
    )
    claims = tuple(
        Claim(fam, fld, formula, value, measured[fld])
        for fam, fld, formula, value in family_formulas(scheme, params)
    )
    return SchemeMetrics(
        scheme=scheme,
        K=matrix.K,
        F=matrix.F,
        Q=matrix.Q,
        uncached_fraction=measured["uncached_fraction"],
        S=cover.S,
        rate=measured["rate"],
        params=dict(params),
        predicted=closed_form(scheme, params),
        claims=claims,
    )
