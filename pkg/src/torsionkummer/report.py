"""JSON and text rendering shared by the CLI and the oracle suites."""

from __future__ import annotations

import json
import sys
from contextlib import contextmanager
from typing import Any

from .bounds import BoundReport, RatioRow
from .factored import DEFAULT_DIGIT_CAP, FactoredInteger

SCHEMA_VERSION = 1


@contextmanager
def _int_digits(limit: int):
    # CPython caps int -> str conversions at 4300 digits by default
    get = getattr(sys, "get_int_max_str_digits", None)
    if get is None:
        yield
        return
    old = get()
    if old and old < limit:
        sys.set_int_max_str_digits(limit)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def factored_json(x: FactoredInteger, expand: bool = False, max_digits: int = DEFAULT_DIGIT_CAP) -> dict[str, Any]:
    out: dict[str, Any] = {"factors": x.to_json(), "text": str(x)}
    if expand:
        if x.digit_estimate() > max_digits:
            out["decimal_omitted"] = f"expansion exceeds {max_digits} digits"
        else:
            with _int_digits(max_digits + 1):
                out["decimal"] = str(x.to_int(max_digits))
    return out


def ratio_row_json(row: RatioRow, expand: bool = False) -> dict[str, Any]:
    return {
        "n": row.n,
        "full_degree": factored_json(row.full_degree, expand),
        "ratio_divides": factored_json(row.ratio_divisor, expand),
        "degree_multiple_of": factored_json(row.degree_multiple_of, expand),
        "degree_divides": factored_json(row.full_degree, expand),
    }


def bound_report_json(rep: BoundReport, expand: bool = False) -> dict[str, Any]:
    per = {}
    for p, (n, e) in sorted(rep.per_prime_exponents.items()):
        entry = {"n": n, "contribution": (2 * n + e) if rep.kind == "noncm" else (n + e)}
        entry["m" if rep.kind == "noncm" else "v_4delta"] = e
        per[str(p)] = entry
    out = {
        "kind": rep.kind,
        "label": rep.label,
        "d_A": rep.d_A,
        "divisors": list(rep.divisors),
        "rank": rep.rank,
        "torsion_dim": rep.torsion_dim,
        "bad_primes": list(rep.bad_primes),
        "per_prime_exponents": per,
        "adelic_constant": factored_json(rep.adelic_constant, expand),
        "final_bound": factored_json(rep.final_bound, expand),
        "ratio_table": [ratio_row_json(r, expand) for r in rep.ratio_table],
    }
    if rep.m_K is not None:
        out["m_K"] = factored_json(rep.m_K, expand)
    return out


def bound_report_text(rep: BoundReport) -> str:
    third = "m_l" if rep.kind == "noncm" else "v_l(4d)"
    lines = [
        f"{rep.label}  ({'non-CM' if rep.kind == 'noncm' else 'CM'})",
        f"d_A = {rep.d_A}   invariant factors = {list(rep.divisors)}   r = {rep.rank}   s = {rep.torsion_dim}",
        f"{'l':>6} {'n_l':>6} {third:>8} {'contribution':>13}",
    ]
    for p, (n, e) in sorted(rep.per_prime_exponents.items()):
        c = 2 * n + e if rep.kind == "noncm" else n + e
        lines.append(f"{p:>6} {n:>6} {e:>8} {c:>13}")
    if rep.m_K is not None:
        lines.append(f"m_K = {rep.m_K}")
    lines.append(f"adelic constant = {rep.adelic_constant}")
    lines.append(f"final bound = {rep.final_bound}")
    for row in rep.ratio_table:
        lines.append(f"  n = {row.n}: ratio divides {row.ratio_divisor}; degree is a multiple of {row.degree_multiple_of} dividing {row.full_degree}")
    return "\n".join(lines)


def dumps(doc: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def diff_paths(a: Any, b: Any, path: str = "$") -> list[str]:
    """JSON paths at which two decoded documents differ."""
    if isinstance(a, dict) and isinstance(b, dict):
        out = []
        for k in sorted(set(a) | set(b)):
            if k not in a or k not in b:
                out.append(f"{path}.{k}")
            else:
                out += diff_paths(a[k], b[k], f"{path}.{k}")
        return out
    if isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            return [f"{path} (length {len(a)} vs {len(b)})"]
        out = []
        for i, (x, y) in enumerate(zip(a, b)):
            out += diff_paths(x, y, f"{path}[{i}]")
        return out
    return [] if (a == b and type(a) is type(b)) else [path]
