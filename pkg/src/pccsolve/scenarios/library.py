"""Built-in scenarios with expected outcomes.

Each scenario is authored as a plain document so that the shipped JSON
fixtures under ``data/`` are exactly :func:`dump_document` of these
documents; ``write_fixtures`` regenerates them.
"""
from __future__ import annotations

import fnmatch
from importlib import resources
from pathlib import Path

from ..numerics import Tolerance
from .document import Scenario, dump_document, scenario_from_document

PM = [[1, -1], [-1, 1]]  # Gamma for A = -B
PP = [[1, 1], [-1, -1]]  # Gamma for A = B
TIGHT = 1e-9


def e(i: int, n: int) -> list[int]:
    """Unit vector e_i (1-based) in dimension n."""
    v = [0] * n
    v[i - 1] = 1
    return v


def dichotomous(plus: list[int], minus: list[int], n: int) -> dict:
    return {"eigenvalues": [1, -1], "eigenspaces": [[e(i, n) for i in plus], [e(i, n) for i in minus]]}


def _gamma(A: str, B: str, gamma, claim: str, expect: dict, **extra) -> dict:
    q = {"kind": "solve_gamma", "A": A, "B": B, "gamma": gamma}
    q.update(extra)
    q.update(claim=claim, expect=expect)
    return q


def _q(kind: str, claim: str, expect: dict, **params) -> dict:
    q = {"kind": kind}
    q.update(params)
    q.update(claim=claim, expect=expect)
    return q


# two-level observables used by the tensor scenarios
PAULI_XZ = [[0.8, 0.6], [0.6, -0.8]]  # 0.6 sx + 0.8 sz
PAULI_YZ = [[0.8, [0, -0.6]], [[0, 0.6], -0.8]]  # 0.6 sy + 0.8 sz
PAULI_XY = [[0, [0.6, -0.8]], [[0.6, 0.8], 0]]  # 0.6 sx + 0.8 sy
PAULI_Z = [[1, 0], [0, -1]]


def _dim5() -> dict:
    return {
        "A": dichotomous([1, 2, 3], [4, 5], 5),
        "B": dichotomous([1, 2], [3, 4, 5], 5),
    }


def _dim4_observables() -> dict:
    return {"A": dichotomous([1, 2], [3, 4], 4), "B": dichotomous([1, 3], [2, 4], 4)}


DIM4_LABELS = ["++", "+-", "-+", "--"]


def _documents() -> list[dict]:
    docs = []

    docs.append({
        "name": "dim5_AmB",
        "description": "five dimensions, H_A(+) = {e1,e2,e3}, H_B(+) = {e1,e2}: no A = -B entanglement",
        "dimension": 5,
        "observables": _dim5(),
        "queries": [
            _gamma("A", "B", PM, "A = -B is infeasible",
                   {"feasible": False, "basis": [e(3, 5)], "blocking": ["E_A(-)psi != 0"]}),
            _q("characterize", "the joint-eigenspace route agrees", {"feasible": False}, A="A", B="B", sign=-1),
        ],
    })

    docs.append({
        "name": "dim5_AeqB",
        "description": "five dimensions, same observables: A = B entangled states",
        "dimension": 5,
        "observables": _dim5(),
        "queries": [
            _gamma("A", "B", PP, "A = B states span e1, e2, e4, e5",
                   {"feasible": True, "dimension": 4, "basis": [e(1, 5), e(2, 5), e(4, 5), e(5, 5)]}),
            _q("correlation", "A = B witness has <AB> = +1",
               {"value": 1.0, "upper": {"co_residual": TIGHT}}, A="A", B="B", state={"witness_of": 0}),
            _q("characterize", "direct sum of H_AB(++) and H_AB(--)",
               {"feasible": True, "basis": [e(1, 5), e(2, 5), e(4, 5), e(5, 5)]}, A="A", B="B", sign=1),
        ],
    })

    docs.append({
        "name": "dim5_joint",
        "description": "five dimensions: joint eigenspaces resolve the whole space",
        "dimension": 5,
        "observables": _dim5(),
        "queries": [
            _q("joint_eigenspaces", "H_AB(+-) = {e3}, H_AB(-+) = 0",
               {"total_dimension": 5,
                "dimensions": {"-1,-1": 2, "-1,+1": 0, "+1,-1": 1, "+1,+1": 2},
                "bases": {"+1,+1": [e(1, 5), e(2, 5)], "+1,-1": [e(3, 5)], "-1,-1": [e(4, 5), e(5, 5)]}},
               A="A", B="B"),
        ],
    })

    docs.append({
        "name": "dim4_AmB",
        "description": "four dimensions, H_A(+) = {e1,e2}, H_B(+) = {e1,e3}: A = -B entanglement",
        "dimension": 4,
        "labels": DIM4_LABELS,
        "observables": _dim4_observables(),
        "states": {"psi": [0, "0.6", "0.8", 0]},
        "queries": [
            _gamma("A", "B", PM, "A = -B states span e2, e3",
                   {"feasible": True, "dimension": 2, "complete": True, "basis": [e(2, 4), e(3, 4)],
                    "witness_pcc": {"+1,-1": True, "-1,+1": True}}),
            _gamma("A", "B", PM, "the entanglement is symmetric",
                   {"feasible": True, "basis": [e(2, 4), e(3, 4)]}, symmetric=True),
            _q("characterize", "direct sum of H_AB(+-) and H_AB(-+)",
               {"feasible": True, "basis": [e(2, 4), e(3, 4)]}, A="A", B="B", sign=-1),
            _q("correlation", "A = -B witness has <AB> = -1",
               {"value": -1.0, "upper": {"anti_residual": TIGHT}}, A="A", B="B", state={"witness_of": 0}),
            _q("check_pcc", "0.6 e2 + 0.8 e3 is PCC for (+,-)", {"holds": True, "conditional_probability": 1.0},
               A="A", alpha=1, B="B", beta=-1, state="psi"),
            _q("symmetric", "order of measurement is irrelevant", {"symmetric": True},
               A="A", alpha=1, B="B", beta=-1, state="psi"),
            _q("born", "P(A=+) equals P(B=-)", {"probability": 0.36}, A="A", alpha=1, state="psi"),
            _q("born", "P(B=-) equals P(A=+)", {"probability": 0.36}, A="B", alpha=-1, state="psi"),
            _q("covariance", "solutions rotate covariantly", {"all_pass": True, "trials": 20},
               A="A", B="B", gamma=PM),
        ],
    })

    docs.append({
        "name": "dim4_AeqB",
        "description": "four dimensions, same layout: A = B entanglement",
        "dimension": 4,
        "labels": DIM4_LABELS,
        "observables": _dim4_observables(),
        "queries": [
            _gamma("A", "B", PP, "A = B states span e1, e4",
                   {"feasible": True, "dimension": 2, "basis": [e(1, 4), e(4, 4)]}),
            _q("correlation", "A = B witness has <AB> = +1",
               {"value": 1.0, "upper": {"co_residual": TIGHT}}, A="A", B="B", state={"witness_of": 0}),
            _q("covariance", "solutions rotate covariantly", {"all_pass": True}, A="A", B="B", gamma=PP),
        ],
    })

    docs.append({
        "name": "dim4_split_3_1",
        "description": "four dimensions with 3/1 and 1/3 eigenspace splits",
        "dimension": 4,
        "observables": {
            "A": dichotomous([1, 2, 3], [4], 4),
            "B": dichotomous([1], [2, 3, 4], 4),
            "B2": dichotomous([1, 2, 3], [4], 4),
        },
        "queries": [
            _gamma("A", "B", PM, "3/1 against 1/3: A = -B infeasible", {"feasible": False}),
            _gamma("A", "B", PP, "3/1 against 1/3: A = B gives c1 e1 + c4 e4",
                   {"feasible": True, "basis": [e(1, 4), e(4, 4)]}),
            _gamma("A", "B2", PM, "3/1 against 3/1: A = -B infeasible", {"feasible": False}),
        ],
    })

    docs.append({
        "name": "dim3",
        "description": "three dimensions, H_A(+) = {e1,e2}, H_B(+) = {e1}",
        "dimension": 3,
        "labels": ["++", "+-", "-+"],
        "observables": {"A": dichotomous([1, 2], [3], 3), "B": dichotomous([1], [2, 3], 3)},
        "queries": [
            _gamma("A", "B", PM, "no A = -B entangled states", {"feasible": False, "basis": [e(2, 3)]}),
            _q("check_pcc", "e2 is one-directionally PCC for (+,-)", {"holds": True},
               A="A", alpha=1, B="B", beta=-1, state=e(2, 3)),
            _q("check_pcc", "(-,+) is degenerate on e2", {"holds": False, "degenerate": True},
               A="A", alpha=-1, B="B", beta=1, state=e(2, 3)),
            _q("conditional", "conditioning on A = - is undefined for e2", {"error": "DegenerateCondition"},
               A="A", alpha=-1, B="B", beta=1, state=e(2, 3)),
            _gamma("A", "B", PP, "A = B states span e1, e3", {"feasible": True, "basis": [e(1, 3), e(3, 3)]}),
        ],
    })

    docs.append({
        "name": "dim2",
        "description": "two dimensions, H_A(+) = {e1}, H_B(+) = {e2}",
        "dimension": 2,
        "observables": {"A": dichotomous([1], [2], 2), "B": dichotomous([2], [1], 2)},
        "states": {"psi": ["0.6", "0.8"]},
        "queries": [
            _gamma("A", "B", PM, "every non-degenerate state is A = -B entangled",
                   {"feasible": True, "dimension": 2, "basis": [e(1, 2), e(2, 2)]}),
            _q("check_pcc", "0.6 e1 + 0.8 e2 is PCC for (+,-)", {"holds": True},
               A="A", alpha=1, B="B", beta=-1, state="psi"),
            _q("check_pcc", "0.6 e1 + 0.8 e2 is PCC for (-,+)", {"holds": True},
               A="A", alpha=-1, B="B", beta=1, state="psi"),
            _gamma("A", "B", PP, "no A = B entanglement", {"feasible": False}),
        ],
    })

    docs.append({
        "name": "AeqA_trivial",
        "description": "trivial entanglement: B is the same observable as A",
        "dimension": 4,
        "observables": {"A": dichotomous([1, 2], [3, 4], 4), "B": dichotomous([1, 2], [3, 4], 4)},
        "queries": [
            _gamma("A", "B", PP, "every state with both outcomes possible",
                   {"feasible": True, "dimension": 4}),
            _gamma("A", "B", PM, "A = -B is impossible", {"feasible": False}),
        ],
    })

    docs.append({
        "name": "dim4_rotated_noncommuting",
        "description": "B eigenspaces spanned by (e1 +- e3)/sqrt2, (e2 +- e4)/sqrt2: no common eigenvector",
        "dimension": 4,
        "observables": {
            "A": dichotomous([1, 2], [3, 4], 4),
            "B": {"eigenvalues": [1, -1],
                  "eigenspaces": [[[1, 0, 1, 0], [0, 1, 0, 1]], [[1, 0, -1, 0], [0, 1, 0, -1]]]},
        },
        "queries": [
            _q("solve_pair", "(A=+, B=+) PCC states do not exist",
               {"feasible": False, "blocking": ["E_A(+)psi != 0"]}, A="A", alpha=1, B="B", beta=1),
            _q("check_pcc", "e1 gives only probability 1/2", {"holds": False, "conditional_probability": 0.5},
               A="A", alpha=1, B="B", beta=1, state=e(1, 4)),
            _q("joint_eigenspaces", "joint eigenspaces need commuting observables", {"error": "NotCommuting"},
               A="A", B="B"),
            _gamma("A", "B", PM, "the symmetric variant refuses non-commuting pairs", {"error": "NotCommuting"},
                   symmetric=True),
        ],
    })

    ta = {"a": {"matrix": PAULI_XZ}, "b": {"matrix": PAULI_YZ},
          "A": {"local": "a", "slot": 0}, "B": {"local": "b", "slot": 1}}
    docs.append({
        "name": "tensor_AmB",
        "description": "two qubits, A = a (x) I and B = I (x) b with different local observables",
        "factors": [2, 2],
        "observables": ta,
        "queries": [
            _gamma("A", "B", PM, "A = -B states span |f+ g-> and |f- g+>",
                   {"feasible": True, "dimension": 2,
                    "basis": [[[0, 3], 9, [0, 1], 3], [3, [0, 1], -9, [0, -3]]]}),
            _q("characterize", "direct sum of H_AB(+-) and H_AB(-+)",
               {"feasible": True, "basis": [[[0, 3], 9, [0, 1], 3], [3, [0, 1], -9, [0, -3]]]},
               A="A", B="B", sign=-1),
            _q("correlation", "A = -B witness has <AB> = -1",
               {"value": -1.0, "upper": {"anti_residual": TIGHT}}, A="A", B="B", state={"witness_of": 0}),
            _gamma("A", "B", PP, "A = B states are the complementary plane", {"feasible": True, "dimension": 2}),
            _q("covariance", "solutions rotate covariantly", {"all_pass": True}, A="A", B="B", gamma=PM),
        ],
    })

    docs.append({
        "name": "tensor_degenerate",
        "description": "4 (x) 3 system with degenerate local observables",
        "factors": [4, 3],
        "observables": {
            "a": dichotomous([1, 2], [3, 4], 4),
            "b": dichotomous([1], [2, 3], 3),
            "A": {"local": "a", "slot": 0},
            "B": {"local": "b", "slot": 1},
        },
        "queries": [
            _gamma("A", "B", PM, "A = -B dimension is 2*2 + 2*1",
                   {"feasible": True, "dimension": 6,
                    "basis": [e(i, 12) for i in (2, 3, 5, 6, 7, 10)]}),
            _gamma("A", "B", PP, "A = B dimension is 2*1 + 2*2",
                   {"feasible": True, "dimension": 6,
                    "basis": [e(i, 12) for i in (1, 4, 8, 9, 11, 12)]}),
            _q("joint_eigenspaces", "joint eigenspaces resolve the 12-dimensional space",
               {"total_dimension": 12}, A="A", B="B"),
        ],
    })

    docs.append({
        "name": "shared_outcome_dim4",
        "description": "B = + follows from both outcomes of A but not the reverse",
        "dimension": 4,
        "labels": DIM4_LABELS,
        "observables": _dim4_observables(),
        "states": {"psi": [1, 0, 1, 0]},
        "queries": [
            _q("conditional", "P(B=+ | A=+) = 1", {"probability": 1.0}, A="A", alpha=1, B="B", beta=1, state="psi"),
            _q("conditional", "P(B=+ | A=-) = 1", {"probability": 1.0}, A="A", alpha=-1, B="B", beta=1, state="psi"),
            _q("conditional", "P(A=+ | B=+) = 1/2", {"probability": 0.5}, A="B", alpha=1, B="A", beta=1, state="psi"),
            _q("shared_outcome", "conflicting pairs are infeasible and the reverse is not certain",
               {"all_conflicts_infeasible": True, "branch/in_eigenspace": True, "branch/both_pcc": True,
                "branch/any_symmetric": False, "upper": {"branch/max_reverse_probability": 0.6}},
               A="A", B="B", beta=1, state="psi"),
            _gamma("A", "B", [[1, 1], [1, -1]], "(+,+) together with (+,-) is infeasible", {"feasible": False}),
            _q("symmetric", "the correlation is not symmetric", {"symmetric": False},
               A="A", alpha=1, B="B", beta=1, state="psi"),
        ],
    })

    docs.append({
        "name": "commutators_tensor",
        "description": "two qubits, two local observable pairs on the singlet",
        "factors": [2, 2],
        "observables": {
            "a1": {"matrix": PAULI_XZ},
            "a2": {"matrix": PAULI_XY},
            "A1": {"local": "a1", "slot": 0},
            "A2": {"local": "a2", "slot": 0},
            "B1": {"local": "a1", "slot": 1},
            "B2": {"local": "a2", "slot": 1},
        },
        "states": {"singlet": [0, 1, -1, 0], "triplet": [0, 1, 1, 0]},
        "queries": [
            _q("commutators", "commutator identities hold on the singlet",
               {"applicable": True,
                "upper": {"operator_residual": TIGHT, "scalar_residual": TIGHT,
                          "square_residual": TIGHT, "norm_residual": TIGHT},
                "lower": {"commutator_norm": 0.1}},
               A1="A1", A2="A2", B1="B1", B2="B2", state="singlet"),
            _q("commutators", "the triplet is not A = -B for both pairs", {"applicable": False},
               A1="A1", A2="A2", B1="B1", B2="B2", state="triplet"),
            _gamma("A1", "B1", PM, "the singlet lies in the A1 = -B1 space", {"feasible": True, "dimension": 2}),
        ],
    })

    docs.append({
        "name": "family_singlet",
        "description": "the singlet-form state under local unitary families",
        "factors": [2, 2],
        "observables": {"a": {"matrix": PAULI_XZ}, "b": {"matrix": PAULI_YZ}},
        "queries": [
            _q("family_invariance", "singlet form stays A = -B for every u; c+- = +c-+ does not",
               {"all_pass": True, "trials": 20, "form_preserved": 20, "lower": {"control_failures": 1}},
               a="a", b="a", trials=20),
            _q("family_invariance", "with distinct local observables invariance fails",
               {"all_pass": False}, a="a", b="b", trials=20),
        ],
    })

    docs.append({
        "name": "ghz_triple",
        "description": "three qubits measured with sz each: triple correlations",
        "factors": [2, 2, 2],
        "labels": ["+++", "++-", "+-+", "+--", "-++", "-+-", "--+", "---"],
        "observables": {
            "z": {"matrix": PAULI_Z},
            "A": {"local": "z", "slot": 0},
            "B": {"local": "z", "slot": 1},
            "C": {"local": "z", "slot": 2},
        },
        "states": {"ghz": [1, 0, 0, 0, 0, 0, 0, 1]},
        "queries": [
            _q("solve_triple", "jointly correlated states span |+++> and |--->",
               {"feasible": True, "dimension": 2, "basis": [e(1, 8), e(8, 8)]},
               A="A", B="B", C="C", triples=[[1, 1, 1], [-1, -1, -1]], joint=True),
            _q("chain", "C = + is certain after A = +, B = +", {"probability": 1.0},
               chain=[["A", 1], ["B", 1]], target=["C", 1], state={"witness_of": 0}),
            _q("chain", "A = +, B = - never happens on GHZ", {"error": "DegenerateCondition"},
               chain=[["A", 1], ["B", -1]], target=["C", 1], state="ghz"),
            _q("solve_triple", "(+,+,+) and (+,+,-) together are infeasible", {"feasible": False},
               A="A", B="B", C="C", triples=[[1, 1, 1], [1, 1, -1]]),
        ],
    })
    return docs


def library_documents() -> dict[str, dict]:
    return {d["name"]: d for d in _documents()}


def paper_library(tol: Tolerance | None = None) -> dict[str, Scenario]:
    """Every built-in scenario, parsed and validated, keyed by name."""
    return {name: scenario_from_document(doc, tol) for name, doc in library_documents().items()}


def select(names, pattern: str | None) -> list[str]:
    if pattern is None:
        return list(names)
    return [n for n in names if fnmatch.fnmatchcase(n, pattern)]


def fixture_name(name: str) -> str:
    return f"{name.lower()}.json"


def fixture_text(name: str) -> str:
    return resources.files(__package__).joinpath("data", fixture_name(name)).read_text(encoding="utf-8")


def write_fixtures(directory: str | Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, doc in library_documents().items():
        path = directory / fixture_name(name)
        path.write_text(dump_document(doc), encoding="utf-8")
        out.append(path)
    return out
