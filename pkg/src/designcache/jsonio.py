"""JSON wire formats for designs, matrices, covers and reports.

Output is deterministic: fixed key order, one list element per line for
block/row/submatrix lists, compact inner values, trailing newline.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .caching import (
    BlockLabel,
    BlockSubset,
    CachingMatrix,
    Cover,
    CoverReport,
    IdentitySubmatrix,
    Label,
    Point,
    PointBlock,
    Subset,
)
from .delivery import SimulationReport, Transmission
from .designs import Design, TransversalDesign, VerificationReport
from .metrics import SchemeMetrics


def _compact(obj: Any) -> str:
    return json.dumps(obj, separators=(", ", ": "), ensure_ascii=False)


def dumps(obj: dict) -> str:
    """Top-level keys and nested list elements on their own lines."""
    lines = []
    for key, value in obj.items():
        if isinstance(value, list) and value and isinstance(value[0], (list, dict, str)):
            inner = ",\n".join("    " + _compact(item) for item in value)
            text = "[\n" + inner + "\n  ]"
        else:
            text = _compact(value)
        lines.append(f"  {json.dumps(key)}: {text}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


def rational(x: Fraction) -> dict[str, int]:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def parse_rational(obj: dict[str, int]) -> Fraction:
    return Fraction(obj["num"], obj["den"])


# ---------------------------------------------------------------------------
# Designs


def design_to_dict(d: Design | TransversalDesign) -> dict:
    labels = None if d.labels is None else {str(i): d.labels[i] for i in sorted(d.labels)}
    if isinstance(d, TransversalDesign):
        return {
            "v": d.v,
            "k": d.k,
            "declared": None,
            "blocks": [list(b) for b in d.blocks],
            "labels": labels,
            "groups": [list(g) for g in d.groups],
        }
    declared = None if d.declared is None else {"t": d.declared[0], "lambda": d.declared[1]}
    return {
        "v": d.v,
        "k": d.k,
        "declared": declared,
        "blocks": [list(b) for b in d.blocks],
        "labels": labels,
    }


def design_from_dict(obj: dict) -> Design | TransversalDesign:
    labels = obj.get("labels")
    if labels is not None:
        labels = {int(i): s for i, s in labels.items()}
    blocks = tuple(tuple(b) for b in obj["blocks"])
    if "groups" in obj:
        groups = tuple(tuple(g) for g in obj["groups"])
        return TransversalDesign(len(groups), len(groups[0]), groups, blocks, labels)
    declared = obj.get("declared")
    if declared is not None:
        declared = (declared["t"], declared["lambda"])
    d = Design(obj["v"], blocks, declared, labels)
    if d.k != obj["k"]:
        raise ValueError(f"declared k={obj['k']} but blocks have size {d.k}")
    return d


def save_design(d: Design | TransversalDesign, path: str | Path) -> None:
    Path(path).write_text(dumps(design_to_dict(d)), encoding="utf-8")


def load_design(path: str | Path) -> Design | TransversalDesign:
    return design_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


# ---------------------------------------------------------------------------
# Labels, matrices, covers


def label_to_json(label: Label) -> dict:
    if isinstance(label, Point):
        return {"point": label.point}
    if isinstance(label, BlockLabel):
        return {"block": label.block}
    if isinstance(label, Subset):
        return {"subset": list(label.points)}
    if isinstance(label, PointBlock):
        return {"pair": {"block": label.block, "point": label.point}}
    if isinstance(label, BlockSubset):
        return {"block_subset": {"block": label.block, "subset": list(label.subset)}}
    raise TypeError(f"not a label: {label!r}")


def label_from_json(obj: dict) -> Label:
    (tag, value), = obj.items()
    if tag == "point":
        return Point(value)
    if tag == "block":
        return BlockLabel(value)
    if tag == "subset":
        return Subset(tuple(value))
    if tag == "pair":
        return PointBlock(value["block"], value["point"])
    if tag == "block_subset":
        return BlockSubset(value["block"], tuple(value["subset"]))
    raise ValueError(f"unknown label tag {tag!r}")


def matrix_to_dict(m: CachingMatrix) -> dict:
    return {
        "rows": [label_to_json(r) for r in m.rows],
        "cols": [label_to_json(c) for c in m.cols],
        "bits": ["".join("1" if b else "0" for b in row) for row in m.bits],
    }


def matrix_from_dict(obj: dict) -> CachingMatrix:
    bits = np.array([[c == "1" for c in row] for row in obj["bits"]], dtype=bool)
    if bits.size == 0:
        bits = bits.reshape(len(obj["rows"]), len(obj["cols"]))
    return CachingMatrix(
        tuple(label_from_json(r) for r in obj["rows"]),
        tuple(label_from_json(c) for c in obj["cols"]),
        bits,
    )


def cover_to_dict(c: Cover) -> dict:
    return {"submatrices": [{"pivots": [list(p) for p in s.pivots]} for s in c]}


def cover_from_dict(obj: dict) -> Cover:
    return Cover(
        tuple(IdentitySubmatrix(tuple(tuple(p) for p in s["pivots"])) for s in obj["submatrices"])
    )


# ---------------------------------------------------------------------------
# Reports


def verification_to_dict(r: VerificationReport) -> dict:
    return {
        "status": r.status,
        "t": r.t,
        "lambda": r.lam,
        "b": r.b,
        "r": r.r,
        "witness": None if r.witness is None else list(r.witness),
        "witness_count": r.witness_count,
        "lambda_table": {
            str(s): {"measured": list(seen), "predicted": rational(pred)}
            for s, (seen, pred) in r.lambda_table.items()
        },
        "message": r.message,
    }


def cover_report_to_dict(r: CoverReport) -> dict:
    bad = None
    if r.bad_submatrix is not None:
        bad = {
            "submatrix": r.bad_submatrix.submatrix,
            "pivot": r.bad_submatrix.pivot,
            "reason": r.bad_submatrix.reason,
        }
    return {
        "is_valid_cover": r.is_valid_cover,
        "S": r.S,
        "ones_total": r.ones_total,
        "ones_covered": r.ones_covered,
        "uncovered_ones": r.uncovered_ones,
        "first_uncovered": None if r.first_uncovered is None else list(r.first_uncovered),
        "overlap_count": r.overlap_count,
        "bad_submatrix": bad,
        "bad_submatrix_count": r.bad_submatrix_count,
    }


def metrics_to_dict(m: SchemeMetrics) -> dict:
    return {
        "scheme": m.scheme,
        "params": m.params,
        "K": m.K,
        "F": m.F,
        "Q": m.Q,
        "uncached_fraction": rational(m.uncached_fraction),
        "S": m.S,
        "rate": rational(m.rate),
        "predicted": {k: rational(v) for k, v in m.predicted.items()},
        "mismatches": list(m.mismatches),
        "match": m.matches,
        "claims": [
            {
                "name": c.name,
                "field": c.field,
                "formula": c.formula,
                "claimed": rational(c.claimed),
                "measured": rational(c.measured),
                "consistent": c.consistent,
            }
            for c in m.claims
        ],
    }


def simulation_to_dict(r: SimulationReport) -> dict:
    return {
        "scheme": r.scheme,
        "K": r.K,
        "F": r.F,
        "S": r.S,
        "rate": rational(r.rate),
        "expected_rate": None if r.expected_rate is None else rational(r.expected_rate),
        "match": r.match,
        "seed": r.seed,
        "demands": list(r.demands),
        "all_decoded": r.all_decoded,
        "failures": r.failures,
    }


def transmissions_to_dict(txs: list[Transmission]) -> dict:
    return {
        "transmissions": [
            {"payload": tx.payload.hex(), "pivots": [list(p) for p in tx.plan.pivots]}
            for tx in txs
        ]
    }
