"""Scenario documents: JSON text <-> validated :class:`Scenario`.

A document looks like::

    {
      "name": "dim4_AmB",
      "dimension": 4,                      # or "factors": [2, 2]
      "labels": ["++", "+-", "-+", "--"],  # optional basis labels
      "tolerance": {"abs": 1e-9, "rel": 1e-12},
      "seed": 42,
      "observables": {
        "A": {"eigenvalues": [1, -1], "eigenspaces": [[[1,0,0,0], [0,1,0,0]], [[0,0,1,0], [0,0,0,1]]]},
        "M": {"matrix": [[1, [0, "0.5"]], [[0, "-0.5"], -1]]},
        "A1": {"local": "a", "slot": 0},
        "Au": {"conjugate": "A", "unitary": [[...]]}
      },
      "states": {"psi": [1, 0, 1, 0]},
      "queries": [{"kind": "solve_gamma", "A": "A", "B": "B", "gamma": [[1, -1], [-1, 1]],
                   "claim": "...", "expect": {"feasible": true}}]
    }

Complex literals are a number, a decimal string, or ``[re, im]`` of either.
States are normalized on load. The raw document is kept verbatim so that
decimal strings survive a round trip unchanged.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..errors import ParseError, PccError, ValidationError
from ..numerics import DEFAULT_TOL, Tolerance
from ..observables import (
    Observable,
    conjugate,
    from_eigenspaces,
    from_matrix,
    lift_local,
    value_label,
)

TOP_LEVEL_ORDER = (
    "name",
    "description",
    "dimension",
    "factors",
    "labels",
    "tolerance",
    "seed",
    "observables",
    "states",
    "queries",
)

SOLVER_KINDS = {"solve_pair", "solve_gamma", "characterize", "solve_triple"}

# required parameters per query kind
REQUIRED: dict[str, tuple[str, ...]] = {
    "born": ("A", "alpha", "state"),
    "conditional": ("A", "alpha", "B", "beta", "state"),
    "chain": ("chain", "target", "state"),
    "check_pcc": ("A", "alpha", "B", "beta", "state"),
    "solve_pair": ("A", "alpha", "B", "beta"),
    "solve_gamma": ("A", "B", "gamma"),
    "symmetric": ("A", "alpha", "B", "beta", "state"),
    "joint_eigenspaces": ("A", "B"),
    "characterize": ("A", "B", "sign"),
    "correlation": ("A", "B", "state"),
    "shared_outcome": ("A", "B", "beta", "state"),
    "commutators": ("A1", "A2", "B1", "B2", "state"),
    "covariance": ("A", "B", "gamma"),
    "family_invariance": ("a", "b"),
    "solve_triple": ("A", "B", "C", "triples"),
}
OBSERVABLE_PARAMS = ("A", "B", "C", "A1", "A2", "B1", "B2")
LOCAL_PARAMS = ("a", "b")
QUERY_META = ("kind", "label", "claim", "expect")

DEFAULT_SEED = 42


@dataclass
class Query:
    index: int
    kind: str
    params: dict[str, Any]
    claim: str | None = None
    label: str | None = None
    expect: dict[str, Any] | None = None


@dataclass
class Scenario:
    name: str
    dim: int
    observables: dict[str, Observable]
    states: dict[str, np.ndarray]
    queries: list[Query]
    tolerance: Tolerance = DEFAULT_TOL
    seed: int = DEFAULT_SEED
    description: str = ""
    factors: tuple[int, ...] | None = None
    labels: list[str] | None = None
    document: dict[str, Any] = field(default_factory=dict, repr=False)

    def basis_labels(self) -> list[str]:
        if self.labels:
            return list(self.labels)
        if self.factors:
            idx = np.indices(self.factors).reshape(len(self.factors), -1).T
            return ["".join(str(i) for i in row) for row in idx]
        return [f"e{i + 1}" for i in range(self.dim)]


# ---------------------------------------------------------------- literals


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _real(x, loc: str) -> float:
    if _is_number(x):
        return float(x)
    if isinstance(x, str):
        try:
            return float(x)
        except ValueError:
            raise ParseError(f"not a decimal number: {x!r}", loc) from None
    raise ParseError(f"expected a number or decimal string, got {type(x).__name__}", loc)


def parse_complex(x, loc: str) -> complex:
    if isinstance(x, list):
        if len(x) != 2:
            raise ParseError("complex literal must be [re, im]", loc)
        return complex(_real(x[0], loc + "[0]"), _real(x[1], loc + "[1]"))
    return complex(_real(x, loc), 0.0)


def parse_vector(x, loc: str) -> np.ndarray:
    if not isinstance(x, list) or not x:
        raise ParseError("expected a non-empty list of complex literals", loc)
    return np.array([parse_complex(c, f"{loc}[{i}]") for i, c in enumerate(x)], dtype=complex)


def parse_matrix(x, loc: str) -> np.ndarray:
    if not isinstance(x, list) or not x:
        raise ParseError("expected a non-empty list of rows", loc)
    rows = [parse_vector(r, f"{loc}[{i}]") for i, r in enumerate(x)]
    if len({r.shape[0] for r in rows}) != 1:
        raise ParseError("matrix rows have different lengths", loc)
    return np.vstack(rows)


def _obj(x, loc: str) -> dict:
    if not isinstance(x, dict):
        raise ParseError(f"expected an object, got {type(x).__name__}", loc)
    return x


def _int(x, loc: str, minimum: int | None = None) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise ParseError(f"expected an integer, got {x!r}", loc)
    if minimum is not None and x < minimum:
        raise ParseError(f"expected an integer >= {minimum}, got {x}", loc)
    return x


# ---------------------------------------------------------------- parsing


def load_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return _obj(doc, "document")


def _parse_tolerance(raw, override: Tolerance | None) -> Tolerance:
    if override is not None:
        return override
    if raw is None:
        return DEFAULT_TOL
    try:
        if _is_number(raw):
            return Tolerance(abs=float(raw))
        raw = _obj(raw, "tolerance")
        return Tolerance(
            abs=_real(raw.get("abs", DEFAULT_TOL.abs), "tolerance.abs"),
            rel=_real(raw.get("rel", DEFAULT_TOL.rel), "tolerance.rel"),
        )
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), "tolerance") from None


def _build_observable(name: str, spec: dict, built: dict, raw_all: dict, dims: dict, tol: Tolerance) -> Observable:
    loc = f"observables.{name}"
    try:
        if "eigenspaces" in spec:
            values = spec.get("eigenvalues")
            spaces = spec["eigenspaces"]
            if not isinstance(values, list) or not isinstance(spaces, list) or len(values) != len(spaces):
                raise ParseError("'eigenvalues' and 'eigenspaces' must be lists of equal length", loc)
            groups = []
            for i, (v, vecs) in enumerate(zip(values, spaces)):
                if not isinstance(vecs, list) or not vecs:
                    raise ParseError("eigenspace must be a non-empty list of vectors", f"{loc}.eigenspaces[{i}]")
                groups.append(
                    (_real(v, f"{loc}.eigenvalues[{i}]"),
                     [parse_vector(vec, f"{loc}.eigenspaces[{i}][{j}]") for j, vec in enumerate(vecs)])
                )
            return from_eigenspaces(groups, tol)
        if "matrix" in spec:
            return from_matrix(parse_matrix(spec["matrix"], f"{loc}.matrix"), tol)
        if "local" in spec:
            src = spec["local"]
            if src not in raw_all:
                raise ValidationError(f"observable '{name}': local source '{src}' is not declared")
            if dims.get("factors") is None:
                raise ValidationError(f"observable '{name}': 'local' needs top-level 'factors'")
            slot = _int(spec.get("slot"), f"{loc}.slot", 0)
            return lift_local(built[src], slot, dims["factors"], tol)
        if "conjugate" in spec:
            src = spec["conjugate"]
            if src not in raw_all:
                raise ValidationError(f"observable '{name}': conjugation source '{src}' is not declared")
            U = parse_matrix(spec.get("unitary"), f"{loc}.unitary")
            return conjugate(built[src], U, tol)
    except (ParseError, ValidationError):
        raise
    except PccError as exc:
        raise ValidationError(f"observable '{name}': {exc}") from None
    raise ParseError("needs one of 'eigenspaces', 'matrix', 'local', 'conjugate'", loc)


def _dependency(spec: dict) -> str | None:
    return spec.get("local") or spec.get("conjugate")


def _parse_observables(raw, dims: dict, tol: Tolerance) -> dict[str, Observable]:
    raw = _obj(raw, "observables")
    specs = {name: _obj(spec, f"observables.{name}") for name, spec in raw.items()}
    built: dict[str, Observable] = {}
    pending = list(specs)
    while pending:
        progressed = False
        for name in list(pending):
            dep = _dependency(specs[name])
            if dep is not None and dep in specs and dep not in built:
                continue
            built[name] = _build_observable(name, specs[name], built, specs, dims, tol)
            pending.remove(name)
            progressed = True
        if not progressed:
            raise ValidationError(f"cyclic observable references among {sorted(pending)}")
    return {name: built[name] for name in raw}


def _parse_states(raw, dim: int) -> dict[str, np.ndarray]:
    out = {}
    for name, vec in _obj(raw or {}, "states").items():
        v = parse_vector(vec, f"states.{name}")
        if v.shape[0] != dim:
            raise ValidationError(f"state '{name}' has dimension {v.shape[0]}, scenario has {dim}")
        norm = np.linalg.norm(v)
        if norm == 0:
            raise ValidationError(f"state '{name}' is the zero vector")
        out[name] = v / norm
    return out


def _check_value(obs: Observable, name: str, value, loc: str) -> None:
    v = _real(value, loc)
    try:
        obs.index(v)
    except PccError:
        known = ", ".join(value_label(x) for x in obs.values)
        raise ValidationError(f"{loc}: {v!r} is not an outcome of '{name}' ({known})") from None


def _parse_query(i: int, raw, sc: Scenario, kinds_so_far: list[str]) -> Query:
    loc = f"queries[{i}]"
    q = _obj(raw, loc)
    kind = q.get("kind")
    if kind not in REQUIRED:
        raise ParseError(f"unknown query kind {kind!r}", loc + ".kind")
    for p in REQUIRED[kind]:
        if p not in q:
            raise ParseError(f"'{kind}' query needs parameter '{p}'", loc)
    params = {k: v for k, v in q.items() if k not in QUERY_META}

    def obs(pname: str, local: bool = False) -> Observable:
        ref = params[pname]
        if not isinstance(ref, str) or ref not in sc.observables:
            raise ValidationError(f"{loc}.{pname}: unknown observable {ref!r}")
        o = sc.observables[ref]
        if not local and o.dim != sc.dim:
            raise ValidationError(f"{loc}.{pname}: observable '{ref}' has dimension {o.dim}, scenario {sc.dim}")
        return o

    for p in OBSERVABLE_PARAMS:
        if p in params:
            obs(p)
    for p in LOCAL_PARAMS:
        if p in params:
            obs(p, local=True)
    for obs_key, val_key in (("A", "alpha"), ("B", "beta")):
        if val_key in params and obs_key in params:
            _check_value(sc.observables[params[obs_key]], params[obs_key], params[val_key], f"{loc}.{val_key}")
    if "gamma" in params:
        pairs = params["gamma"]
        if not isinstance(pairs, list) or not pairs:
            raise ParseError("'gamma' must be a non-empty list of [alpha, beta] pairs", loc + ".gamma")
        for j, pair in enumerate(pairs):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError("expected [alpha, beta]", f"{loc}.gamma[{j}]")
            _check_value(sc.observables[params["A"]], params["A"], pair[0], f"{loc}.gamma[{j}][0]")
            _check_value(sc.observables[params["B"]], params["B"], pair[1], f"{loc}.gamma[{j}][1]")
    if "triples" in params:
        triples = params["triples"]
        if not isinstance(triples, list) or not triples:
            raise ParseError("'triples' must be a non-empty list", loc + ".triples")
        for j, t in enumerate(triples):
            if not isinstance(t, list) or len(t) != 3:
                raise ParseError("expected [alpha, beta, gamma]", f"{loc}.triples[{j}]")
            for pos, key in enumerate("ABC"):
                _check_value(sc.observables[params[key]], params[key], t[pos], f"{loc}.triples[{j}][{pos}]")
    if kind == "chain":
        events = params["chain"]
        if not isinstance(events, list) or not events:
            raise ParseError("'chain' must be a non-empty list of [observable, value]", loc + ".chain")
        for j, ev in enumerate(list(events) + [params["target"]]):
            eloc = f"{loc}.chain[{j}]" if j < len(events) else f"{loc}.target"
            if not isinstance(ev, list) or len(ev) != 2 or ev[0] not in sc.observables:
                raise ValidationError(f"{eloc}: expected [declared observable, value]")
            if sc.observables[ev[0]].dim != sc.dim:
                raise ValidationError(f"{eloc}: observable '{ev[0]}' does not act on the scenario space")
            _check_value(sc.observables[ev[0]], ev[0], ev[1], eloc)
    if kind == "characterize" and params["sign"] not in (1, -1):
        raise ParseError("'sign' must be 1 or -1", loc + ".sign")
    if "state" in params:
        st = params["state"]
        if isinstance(st, str):
            if st not in sc.states:
                raise ValidationError(f"{loc}.state: unknown state {st!r}")
        elif isinstance(st, dict):
            ref = st.get("witness_of")
            if not isinstance(ref, int) or not 0 <= ref < i or kinds_so_far[ref] not in SOLVER_KINDS:
                raise ValidationError(f"{loc}.state: 'witness_of' must name an earlier solver query")
        else:
            v = parse_vector(st, f"{loc}.state")
            if v.shape[0] != sc.dim:
                raise ValidationError(f"{loc}.state: dimension {v.shape[0]}, scenario {sc.dim}")
            if np.linalg.norm(v) == 0:
                raise ValidationError(f"{loc}.state: zero vector")
    for key in ("trials",):
        if key in params:
            _int(params[key], f"{loc}.{key}", 1)
    if "unitary" in params:
        parse_matrix(params["unitary"], f"{loc}.unitary")
    expect = q.get("expect")
    if expect is not None:
        _obj(expect, loc + ".expect")
    return Query(i, kind, params, claim=q.get("claim"), label=q.get("label"), expect=expect)


def scenario_from_document(doc: dict, tol: Tolerance | None = None) -> Scenario:
    doc = _obj(doc, "document")
    unknown = set(doc) - set(TOP_LEVEL_ORDER)
    if unknown:
        raise ParseError(f"unknown top-level keys {sorted(unknown)}", "document")
    if ("dimension" in doc) == ("factors" in doc):
        raise ParseError("exactly one of 'dimension' or 'factors' is required", "document")
    factors = None
    if "factors" in doc:
        fl = doc["factors"]
        if not isinstance(fl, list) or not fl:
            raise ParseError("'factors' must be a non-empty integer list", "factors")
        factors = tuple(_int(f, f"factors[{i}]", 1) for i, f in enumerate(fl))
        dim = int(np.prod(factors))
    else:
        dim = _int(doc["dimension"], "dimension", 1)
    labels = doc.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != dim
                               or not all(isinstance(x, str) for x in labels)):
        raise ParseError(f"'labels' must list {dim} strings", "labels")
    tolerance = _parse_tolerance(doc.get("tolerance"), tol)
    seed = _int(doc.get("seed", DEFAULT_SEED), "seed", 0)
    observables = _parse_observables(doc.get("observables", {}), {"factors": factors}, tolerance)
    states = _parse_states(doc.get("states"), dim)
    sc = Scenario(
        name=str(doc.get("name", "scenario")),
        description=str(doc.get("description", "")),
        dim=dim,
        factors=factors,
        labels=labels,
        tolerance=tolerance,
        seed=seed,
        observables=observables,
        states=states,
        queries=[],
        document=doc,
    )
    raw_queries = doc.get("queries", [])
    if not isinstance(raw_queries, list):
        raise ParseError("'queries' must be a list", "queries")
    kinds: list[str] = []
    for i, rq in enumerate(raw_queries):
        query = _parse_query(i, rq, sc, kinds)
        kinds.append(query.kind)
        sc.queries.append(query)
    return sc


def parse_scenario(text: str, tol: Tolerance | None = None) -> Scenario:
    """Parse and fully validate a scenario document.

    ``tol`` replaces the document's own tolerance for the whole run.
    """
    return scenario_from_document(load_document(text), tol)


def canonical_document(doc: dict) -> dict:
    ordered = {k: doc[k] for k in TOP_LEVEL_ORDER if k in doc}
    ordered.update({k: v for k, v in doc.items() if k not in ordered})
    return ordered


def _has_object(x) -> bool:
    if isinstance(x, dict):
        return True
    return isinstance(x, list) and any(_has_object(v) for v in x)


def _dump(x, indent: int) -> str:
    # objects get one key per line; arrays without objects stay on one line
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {_dump(v, indent + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list) and _has_object(x):
        items = [f"{inner}{_dump(v, indent + 1)}" for v in x]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(x, ensure_ascii=False, separators=(", ", ": "), allow_nan=False)


def dump_document(doc: dict) -> str:
    return _dump(canonical_document(doc), 0) + "\n"


def dump_scenario(scenario: Scenario) -> str:
    return dump_document(scenario.document)
