"""Execution reports: JSON-ready encoding, text tables and the structured form."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from ..errors import ParseError
from ..numerics import SubspaceBasis, canonical_basis, fix_phase

# vector components (re or im part) below this are written as exact zero
ZERO_COMPONENT = 1e-12


def clean_float(x: float) -> float:
    x = float(x)
    return 0.0 if x == 0 else x  # folds -0.0


def encode_complex(z: complex) -> list[float]:
    re, im = float(z.real), float(z.imag)
    re = 0.0 if abs(re) < ZERO_COMPONENT else re
    im = 0.0 if abs(im) < ZERO_COMPONENT else im
    return [clean_float(re), clean_float(im)]


def encode_scalar(z: complex) -> list[float]:
    """A complex scalar such as an expectation value, without zeroing."""
    return [clean_float(z.real), clean_float(z.imag)]


def encode_vector(v) -> list[list[float]]:
    return [encode_complex(c) for c in np.asarray(v)]


def encode_state(v) -> list[list[float]]:
    return encode_vector(fix_phase(np.asarray(v, dtype=complex)))


def encode_basis(U: SubspaceBasis) -> list[list[list[float]]]:
    C = canonical_basis(U)
    return [encode_vector(C.vectors[:, i]) for i in range(C.rank)]


@dataclass
class QueryResult:
    index: int
    kind: str
    status: str  # "ok" | "error"
    label: str | None = None
    claim: str | None = None
    result: dict[str, Any] | None = None
    error: dict[str, str] | None = None  # {"type", "message"}
    expectation: dict[str, Any] | None = None  # {"met": bool, "failures": [...]}

    @property
    def passed(self) -> bool:
        if self.expectation is not None:
            return bool(self.expectation["met"])
        return self.status == "ok"


@dataclass
class Report:
    scenario: str
    dimension: int
    tolerance: dict[str, float]
    seed: int
    description: str = ""
    labels: list[str] = field(default_factory=list)
    results: list[QueryResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[QueryResult]:
        return [r for r in self.results if not r.passed]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        d = dict(d)
        d.pop("passed", None)
        d["results"] = [QueryResult(**r) for r in d.get("results", [])]
        return cls(**d)


# ---------------------------------------------------------------- structured


def render_structured(report: Report) -> str:
    # json writes floats with repr, which round-trips exactly (17 significant digits)
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def parse_report(text: str) -> Report:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    try:
        return Report.from_dict(d)
    except TypeError as exc:
        raise ParseError(f"not a report document ({exc})") from None


# ---------------------------------------------------------------- text


def _fmt_real(x: float) -> str:
    return f"{x:.6g}"


def format_coefficient(c: list[float]) -> str:
    re, im = c
    if im == 0:
        return _fmt_real(re)
    if re == 0:
        return f"{_fmt_real(im)}i"
    sign = "+" if im > 0 else "-"
    return f"({_fmt_real(re)}{sign}{_fmt_real(abs(im))}i)"


def format_ket(vector: list[list[float]], labels: list[str]) -> str:
    terms = []
    for c, lab in zip(vector, labels):
        if c == [0.0, 0.0]:
            continue
        coeff = format_coefficient(c)
        if not terms:
            terms.append(f"{coeff}|{lab}⟩")
        elif coeff.startswith("-"):
            terms.append(f"- {coeff[1:]}|{lab}⟩")
        else:
            terms.append(f"+ {coeff}|{lab}⟩")
    return " ".join(terms) if terms else "0"


def _is_vector(x) -> bool:
    return isinstance(x, list) and bool(x) and all(
        isinstance(c, list) and len(c) == 2 and all(isinstance(t, float) for t in c) for c in x
    )


def _fmt_value(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if x is None:
        return "-"
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(t, float) for t in x):
        return format_coefficient(x) if x[1] != 0 else repr(x[0])
    if isinstance(x, list) and all(isinstance(t, str) for t in x):
        return ", ".join(x) if x else "-"
    return str(x)


def _detail_lines(key: str, value, labels: list[str], indent: str) -> list[str]:
    if isinstance(value, dict):
        lines = [f"{indent}{key}:"]
        for k, v in value.items():
            lines.extend(_detail_lines(k, v, labels, indent + "  "))
        return lines
    if _is_vector(value) and len(value) == len(labels):
        return [f"{indent}{key} = {format_ket(value, labels)}"]
    if isinstance(value, list) and (not value or _is_vector(value[0])) and (
        not value or len(value[0]) == len(labels)
    ):
        if not value:
            return [f"{indent}{key}: (empty)"]
        lines = [f"{indent}{key}:"]
        lines += [f"{indent}  v{i + 1} = {format_ket(v, labels)}" for i, v in enumerate(value)]
        return lines
    return [f"{indent}{key}: {_fmt_value(value)}"]


def _table(rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    out = []
    for r in rows:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return out


def render_text(report: Report) -> str:
    tol = report.tolerance
    lines = [
        f"scenario:  {report.scenario}",
    ]
    if report.description:
        lines.append(f"about:     {report.description}")
    lines += [
        f"dimension: {report.dimension}",
        f"tolerance: abs={tol['abs']!r} rel={tol['rel']!r}",
        f"seed:      {report.seed}",
    ]
    if not report.results:
        return "\n".join(lines) + "\n"
    rows = [["#", "kind", "status", "expect", "claim"]]
    for r in report.results:
        if r.expectation is None:
            exp = "-"
        else:
            exp = "met" if r.expectation["met"] else "UNMET"
        rows.append([str(r.index), r.kind, r.status, exp, r.claim or r.label or ""])
    lines.append("")
    lines += _table(rows)
    labels = report.labels
    for r in report.results:
        lines.append("")
        title = f"[{r.index}] {r.kind}"
        if r.label:
            title += f"  {r.label}"
        lines.append(title)
        if r.error is not None:
            lines.append(f"    error: {r.error['type']}: {r.error['message']}")
        if r.result is not None:
            for k, v in r.result.items():
                lines.extend(_detail_lines(k, v, labels, "    "))
        if r.expectation is not None:
            for f in r.expectation["failures"]:
                lines.append(f"    unmet: {f}")
    lines.append("")
    lines.append(f"result: {'PASS' if report.passed else 'FAIL'} "
                 f"({len(report.results) - len(report.failures)}/{len(report.results)} queries)")
    return "\n".join(lines) + "\n"


def render_report(report: Report, format: str = "text") -> str:
    if format == "text":
        return render_text(report)
    if format in ("structured", "json"):
        return render_structured(report)
    raise ValueError(f"unknown report format {format!r}")
