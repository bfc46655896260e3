"""Line-oriented record formats for CPF tables, count tables and reports.

Default format is tab-delimited text; a JSON tree is available for
structured consumers.  Exact values serialize as "p/q" strings, floats as
repr decimals, so rational tables survive the round trip bit-exactly.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .composition import Composition, enumerate_compositions


def format_value(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, int):
        return f"{v}/1"
    return repr(float(v))


def parse_value(text: str):
    if "/" in text:
        return Fraction(text)
    return float(text)


def cpf_table_lines(cpf, n: int) -> list:
    """Rows: binary code, probability, family tag; normalization line last."""
    rows = cpf.table(n)
    lines = [f"{c.to_binary()}\t{format_value(p)}\t{cpf.name}" for c, p in rows]
    total = sum(p for _, p in rows)
    lines.append(f"# total\t{format_value(total)}")
    return lines


def cpf_table_tree(cpf, n: int) -> dict:
    rows = cpf.table(n)
    return {
        "family": cpf.name,
        "n": n,
        "rows": [{"composition": str(c), "binary": c.to_binary(),
                  "probability": format_value(p)} for c, p in rows],
        "total": format_value(sum(p for _, p in rows)),
    }


def count_table_lines(counts, expected_probs, n: int) -> list:
    """Rows: binary code, count, expected, standardized residual."""
    total = int(sum(counts))
    lines = []
    for c, cnt, p in zip(enumerate_compositions(n), counts, expected_probs):
        exp = total * float(p)
        resid = (cnt - exp) / exp ** 0.5 if exp > 0 else 0.0
        lines.append(f"{c.to_binary()}\t{int(cnt)}\t{exp:.6f}\t{resid:+.3f}")
    return lines


def count_table_tree(counts, expected_probs, n: int) -> dict:
    total = int(sum(counts))
    rows = []
    for c, cnt, p in zip(enumerate_compositions(n), counts, expected_probs):
        exp = total * float(p)
        rows.append({"binary": c.to_binary(), "count": int(cnt),
                     "expected": exp,
                     "residual": (cnt - exp) / exp ** 0.5 if exp > 0 else 0.0})
    return {"n": n, "draws": total, "rows": rows}


def moments_lines(values) -> list:
    return [f"{i}\t{format_value(v)}" for i, v in enumerate(values, start=1)]


def parse_moments(text: str) -> list:
    """Read 'index<TAB>value' lines (or bare values, one per line)."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) == 1:
            out[len(out) + 1] = parse_value(toks[0])
        else:
            out[int(toks[0])] = parse_value(toks[1])
    return [out[i] for i in sorted(out)]


def matrix_lines(dm, N: int) -> list:
    return [f"{n}\t{r}\t{format_value(dm(n, r))}"
            for n in range(1, N + 1) for r in range(1, n + 1)]


def report_lines(reports) -> list:
    return [str(rep) for rep in reports]


def report_tree(reports) -> dict:
    return {"checks": [{
        "name": r.name, "scope": r.scope, "verdict": "pass" if r.passed else "fail",
        "mode": r.mode,
        "witness": None if r.worst is None else [repr(x) for x in r.worst],
    } for r in reports]}


def to_json(tree) -> str:
    return json.dumps(tree, indent=2)
