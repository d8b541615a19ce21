"""Execute scenario queries and check their embedded expectations."""
from __future__ import annotations

from typing import Any, Callable

import numpy as np

from ..conditioning import Chain, MeasurementEvent, born, chain_conditional, conditional
from ..errors import PccError
from ..numerics import SubspaceBasis, random_unitary
from ..observables import GammaSet, value_label
from ..pcc import (
    characterize_dichotomous,
    check_pcc,
    commutator_identities,
    correlation,
    family_invariance_check,
    joint_eigenspaces,
    shared_outcome_analysis,
    solve_gamma,
    solve_pair,
    solve_triple,
    unitary_covariance_check,
)
from ..pcc.core import PccVerdict, SolutionSpace, symmetric_difference
from .document import Query, Scenario, parse_matrix, parse_vector
from .report import (
    QueryResult,
    Report,
    clean_float,
    encode_basis,
    encode_scalar,
    encode_state,
)

DEFAULT_TRIALS = 20
EXPECT_TOL = 1e-9


def pair_key(*values: float) -> str:
    return ",".join(value_label(v) for v in values)


def query_seed(seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, index])


# ---------------------------------------------------------------- encoders


def _verdict(v: PccVerdict) -> dict:
    return {
        "holds": v.holds,
        "conditional_probability": None if v.conditional_probability is None else clean_float(v.conditional_probability),
        "residual": clean_float(v.residual),
        "degenerate": v.degenerate,
    }


def _solution(S: SolutionSpace) -> dict:
    return {
        "feasible": S.feasible,
        "dimension": S.dimension,
        "basis": encode_basis(S.linear_basis),
        "witness": None if S.witness is None else encode_state(S.witness),
        "blocking": list(S.blocking),
        "equations": [e.label for e in S.equations],
        "constraints": [c.label for c in S.constraints],
    }


# ---------------------------------------------------------------- handlers


class _Context:
    def __init__(self, scenario: Scenario, seed: int):
        self.sc = scenario
        self.tol = scenario.tolerance
        self.seed = seed
        self.witnesses: dict[int, np.ndarray | None] = {}

    def obs(self, q: Query, key: str):
        return self.sc.observables[q.params[key]]

    def state(self, q: Query) -> np.ndarray:
        st = q.params["state"]
        if isinstance(st, str):
            return self.sc.states[st]
        if isinstance(st, dict):
            w = self.witnesses.get(st["witness_of"])
            if w is None:
                raise PccError(f"query {st['witness_of']} produced no witness")
            return w
        v = parse_vector(st, f"queries[{q.index}].state")
        return v / np.linalg.norm(v)


def _born(c: _Context, q: Query, seed) -> dict:
    return {"probability": born(c.obs(q, "A"), q.params["alpha"], c.state(q), c.tol)}


def _conditional(c: _Context, q: Query, seed) -> dict:
    p = q.params
    return {"probability": conditional(c.obs(q, "B"), p["beta"], c.obs(q, "A"), p["alpha"], c.state(q), c.tol)}


def _chain(c: _Context, q: Query, seed) -> dict:
    obs = c.sc.observables
    chain = Chain([MeasurementEvent(obs[name], v) for name, v in q.params["chain"]])
    name, v = q.params["target"]
    return {"probability": chain_conditional(chain, MeasurementEvent(obs[name], v), c.state(q), c.tol)}


def _check_pcc(c: _Context, q: Query, seed) -> dict:
    p = q.params
    return _verdict(check_pcc(c.obs(q, "A"), p["alpha"], c.obs(q, "B"), p["beta"], c.state(q), c.tol))


def _solve_pair(c: _Context, q: Query, seed) -> dict:
    p = q.params
    S = solve_pair(c.obs(q, "A"), p["alpha"], c.obs(q, "B"), p["beta"], c.tol, seed)
    c.witnesses[q.index] = S.witness
    return _solution(S)


def _with_witness_checks(c: _Context, q: Query, S: SolutionSpace, A, B, gamma: GammaSet) -> dict:
    out = _solution(S)
    out["complete"] = gamma.is_complete(A, B)
    if S.witness is not None:
        out["witness_pcc"] = {pair_key(a, b): check_pcc(A, a, B, b, S.witness, c.tol).holds for a, b in gamma}
    c.witnesses[q.index] = S.witness
    return out


def _solve_gamma(c: _Context, q: Query, seed) -> dict:
    A, B = c.obs(q, "A"), c.obs(q, "B")
    gamma = GammaSet(q.params["gamma"])
    S = solve_gamma(A, B, gamma, symmetric=bool(q.params.get("symmetric", False)), tol=c.tol, seed=seed)
    return _with_witness_checks(c, q, S, A, B, gamma)


def _symmetric(c: _Context, q: Query, seed) -> dict:
    p = q.params
    ok, diff = symmetric_difference(c.obs(q, "A"), p["alpha"], c.obs(q, "B"), p["beta"], c.state(q), c.tol)
    return {"symmetric": ok, "difference": clean_float(diff)}


def _joint(c: _Context, q: Query, seed) -> dict:
    spaces = joint_eigenspaces(c.obs(q, "A"), c.obs(q, "B"), c.tol)
    return {
        "dimensions": {pair_key(*k): U.rank for k, U in spaces.items()},
        "total_dimension": sum(U.rank for U in spaces.values()),
        "bases": {pair_key(*k): encode_basis(U) for k, U in spaces.items()},
    }


def _characterize(c: _Context, q: Query, seed) -> dict:
    S = characterize_dichotomous(c.obs(q, "A"), c.obs(q, "B"), q.params["sign"], c.tol, seed)
    c.witnesses[q.index] = S.witness
    return _solution(S)


def _correlation(c: _Context, q: Query, seed) -> dict:
    r = correlation(c.obs(q, "A"), c.obs(q, "B"), c.state(q), c.tol)
    return {
        "value": encode_scalar(r.value),
        "anti_residual": clean_float(r.anti_residual),
        "co_residual": clean_float(r.co_residual),
    }


def _shared(c: _Context, q: Query, seed) -> dict:
    rep = shared_outcome_analysis(c.obs(q, "A"), c.obs(q, "B"), q.params["beta"], c.state(q), c.tol, seed=seed)
    out: dict[str, Any] = {
        "beta": rep.beta,
        "all_conflicts_infeasible": rep.all_conflicts_infeasible,
        "conflicts": {
            f"{pair_key(k.alpha, rep.beta)}|{pair_key(k.alpha, k.beta_prime)}": {
                "infeasible": k.infeasible,
                "blocking": list(k.blocking),
            }
            for k in rep.conflicts
        },
    }
    b = rep.branch
    if b is not None:
        out["branch"] = {
            "in_eigenspace": b.in_eigenspace,
            "eigenspace_residual": clean_float(b.eigenspace_residual),
            "both_pcc": b.both_pcc,
            "any_symmetric": b.any_symmetric,
            "pcc": {value_label(g): _verdict(v) for g, v in b.pcc.items()},
            "commutator_residuals": {value_label(g): clean_float(v) for g, v in b.commutator_residuals.items()},
            "reverse_probabilities": {
                value_label(g): None if v is None else clean_float(v) for g, v in b.reverse_probabilities.items()
            },
            "max_reverse_probability": max((v for v in b.reverse_probabilities.values() if v is not None), default=None),
            "symmetric": {value_label(g): v for g, v in b.symmetric.items()},
        }
    return out


def _commutators(c: _Context, q: Query, seed) -> dict:
    o = {k: c.obs(q, k) for k in ("A1", "A2", "B1", "B2")}
    r = commutator_identities(o["A1"], o["A2"], o["B1"], o["B2"], c.state(q), c.tol)
    return {
        "applicable": r.applicable,
        "premise_residual": clean_float(r.premise_residual),
        "operator_residual": clean_float(r.operator_residual),
        "scalar_residual": clean_float(r.scalar_residual),
        "square_residual": clean_float(r.square_residual),
        "norm_residual": clean_float(r.norm_residual),
        "max_residual": clean_float(r.max_residual),
        "commutator_norm": clean_float(r.commutator_norm),
    }


def _covariance(c: _Context, q: Query, seed) -> dict:
    A, B = c.obs(q, "A"), c.obs(q, "B")
    gamma = GammaSet(q.params["gamma"])
    symmetric = bool(q.params.get("symmetric", False))
    if "unitary" in q.params:
        unitaries = [parse_matrix(q.params["unitary"], f"queries[{q.index}].unitary")]
    else:
        rng = np.random.default_rng(seed)
        unitaries = [random_unitary(A.dim, rng) for _ in range(q.params.get("trials", DEFAULT_TRIALS))]
    passes = [unitary_covariance_check(A, B, gamma, U, c.tol, symmetric=symmetric, seed=seed) for U in unitaries]
    return {"trials": len(passes), "passes": int(sum(passes)), "all_pass": bool(all(passes))}


def _family(c: _Context, q: Query, seed) -> dict:
    a, b = c.obs(q, "a"), c.obs(q, "b")
    r = family_invariance_check(a, b, trials=q.params.get("trials", DEFAULT_TRIALS), seed=seed, tol=c.tol)
    return {
        "trials": r.trials,
        "singlet_passes": int(sum(r.singlet_passes)),
        "all_pass": bool(r.all_pass),
        "form_preserved": int(sum(r.form_preserved)),
        "control_passes": int(sum(r.control_passes)),
        "control_failures": int(r.control_failures),
    }


def _triple(c: _Context, q: Query, seed) -> dict:
    A, B, C = (c.obs(q, k) for k in "ABC")
    triples = GammaSet(q.params["triples"])
    S = solve_triple(A, B, C, triples, joint=bool(q.params.get("joint", False)), tol=c.tol, seed=seed)
    c.witnesses[q.index] = S.witness
    return _solution(S)


HANDLERS: dict[str, Callable[[_Context, Query, Any], dict]] = {
    "born": _born,
    "conditional": _conditional,
    "chain": _chain,
    "check_pcc": _check_pcc,
    "solve_pair": _solve_pair,
    "solve_gamma": _solve_gamma,
    "symmetric": _symmetric,
    "joint_eigenspaces": _joint,
    "characterize": _characterize,
    "correlation": _correlation,
    "shared_outcome": _shared,
    "commutators": _commutators,
    "covariance": _covariance,
    "family_invariance": _family,
    "solve_triple": _triple,
}


# ---------------------------------------------------------------- expectations


def _lookup(result: dict, path: str):
    node: Any = result
    for part in path.split("/"):
        if isinstance(node, dict) and part in node:
            node = node[part]
        elif isinstance(node, list) and part.isdigit() and int(part) < len(node):
            node = node[int(part)]
        else:
            raise KeyError(path)
    return node


def _is_num(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _as_space(raw) -> SubspaceBasis:
    return SubspaceBasis.span([parse_vector(v, "expect") for v in raw])


def _same_space(expected, actual, tol: float) -> bool:
    if not isinstance(expected, list) or not isinstance(actual, list):
        return False
    if not expected or not actual:
        return len(expected) == len(actual) == 0
    E, A = _as_space(expected), _as_space(actual)
    if E.dim != A.dim or E.rank != A.rank:
        return False
    resid = max(
        float(np.linalg.norm(A.vectors - E.projector() @ A.vectors)),
        float(np.linalg.norm(E.vectors - A.projector() @ E.vectors)),
    )
    return resid <= tol


def _subspace_key(key: str) -> bool:
    return key in ("basis", "span", "bases") or key.endswith("_basis")


def _matches(expected, actual, tol: float, key: str = "", in_bases: bool = False) -> bool:
    if in_bases or (_subspace_key(key) and key != "bases"):
        return _same_space(expected, actual, tol)
    if isinstance(expected, dict):
        return isinstance(actual, dict) and all(
            k in actual and _matches(v, actual[k], tol, k, key == "bases") for k, v in expected.items()
        )
    if isinstance(expected, bool) or expected is None or isinstance(expected, str):
        return actual is expected if not isinstance(expected, str) else actual == expected
    if _is_num(expected):
        if _is_num(actual):
            if isinstance(expected, int) and isinstance(actual, int):
                return expected == actual
            return abs(float(actual) - expected) <= tol
        if isinstance(actual, list) and len(actual) == 2 and all(_is_num(t) for t in actual):
            return abs(actual[0] - expected) <= tol and abs(actual[1]) <= tol
        return False
    if isinstance(expected, list):
        return (
            isinstance(actual, list)
            and len(expected) == len(actual)
            and all(_matches(e, a, tol) for e, a in zip(expected, actual))
        )
    return False


def check_expectations(expect: dict | None, result: dict | None, error: dict | None) -> dict | None:
    """Compare a query outcome against its ``expect`` block.

    Keys are ``/``-separated paths into the result. ``upper`` and ``lower``
    map paths to bounds, ``error`` names the exception the query must raise
    and ``tolerance`` overrides the numeric slack for this block.
    """
    if expect is None:
        return None
    failures: list[str] = []
    tol = float(expect.get("tolerance", EXPECT_TOL))
    want_error = expect.get("error")
    if error is not None:
        if want_error is None:
            failures.append(f"raised {error['type']}: {error['message']}")
        elif error["type"] != want_error:
            failures.append(f"expected {want_error}, raised {error['type']}")
        return {"met": not failures, "failures": failures}
    if want_error is not None:
        failures.append(f"expected {want_error}, query succeeded")
    for path, want in expect.items():
        if path in ("error", "tolerance"):
            continue
        if path in ("upper", "lower"):
            for p, bound in want.items():
                try:
                    got = _lookup(result, p)
                except KeyError:
                    failures.append(f"{p}: missing from result")
                    continue
                if not _is_num(got):
                    failures.append(f"{p}: {got!r} is not a number")
                elif path == "upper" and not got <= bound:
                    failures.append(f"{p}: {got!r} exceeds upper bound {bound!r}")
                elif path == "lower" and not got >= bound:
                    failures.append(f"{p}: {got!r} below lower bound {bound!r}")
            continue
        try:
            got = _lookup(result, path)
        except KeyError:
            failures.append(f"{path}: missing from result")
            continue
        parts = path.split("/")
        if not _matches(want, got, tol, parts[-1], in_bases=parts[-2:-1] == ["bases"]):
            failures.append(f"{path}: expected {want!r}, got {got!r}")
    return {"met": not failures, "failures": failures}


# ---------------------------------------------------------------- driver


def run_query(ctx: _Context, q: Query) -> QueryResult:
    seed = query_seed(ctx.seed, q.index)
    result = error = None
    try:
        result = HANDLERS[q.kind](ctx, q, seed)
        status = "ok"
    except (PccError, ValueError, ArithmeticError, LookupError) as exc:
        error = {"type": type(exc).__name__, "message": str(exc)}
        status = "error"
        ctx.witnesses.setdefault(q.index, None)
    return QueryResult(
        index=q.index,
        kind=q.kind,
        status=status,
        label=q.label,
        claim=q.claim,
        result=result,
        error=error,
        expectation=check_expectations(q.expect, result, error),
    )


def execute(scenario: Scenario, seed: int | None = None) -> Report:
    """Run every query in order. ``seed`` overrides the scenario's own."""
    seed = scenario.seed if seed is None else seed
    ctx = _Context(scenario, seed)
    return Report(
        scenario=scenario.name,
        description=scenario.description,
        dimension=scenario.dim,
        labels=scenario.basis_labels(),
        tolerance={"abs": scenario.tolerance.abs, "rel": scenario.tolerance.rel},
        seed=seed,
        results=[run_query(ctx, q) for q in scenario.queries],
    )
