"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The lines are collected and echoed in the pytest terminal summary; running
this file directly (``python3 tests/test_acceptance.py``) prints them too.
"""
import itertools

import numpy as np
import pytest

from pccsolve.conditioning import born, chain_conditional, conditional, luders
from pccsolve.errors import DegenerateCondition
from pccsolve.numerics import (
    SubspaceBasis,
    kernel,
    mutual_containment_residual,
    random_hermitian,
    random_state,
    random_unitary,
    rank,
)
from pccsolve.observables import commutes, from_eigenspaces, from_matrix, lift_local
from pccsolve.pcc import (
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
from pccsolve.scenarios import execute, paper_library, render_report

from helpers import dichotomous, unit

TOL = 1e-9
PM = [(1, -1), (-1, 1)]
PP = [(1, 1), (-1, -1)]

RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}"
    if detail:
        line += f" ({detail})"
    RESULTS.append(line)
    print(line)
    assert ok, line


def span(*idx, n):
    return SubspaceBasis.span([unit(i, n) for i in idx])


def residual(U, W):
    return mutual_containment_residual(U, W) if U.rank == W.rank else float("inf")


def test_criterion_01_dim5():
    A, B = dichotomous([1, 2, 3], [4, 5], 5), dichotomous([1, 2], [3, 4, 5], 5)
    anti = solve_gamma(A, B, PM)
    co = solve_gamma(A, B, PP)
    r = residual(co.linear_basis, span(1, 2, 4, 5, n=5))
    record(1, "dim-5: A=-B infeasible, A=B spans e1,e2,e4,e5",
           not anti.feasible and co.feasible and r <= TOL, f"containment residual {r:.1e}")


def test_criterion_02_dim4():
    A, B = dichotomous([1, 2], [3, 4], 4), dichotomous([1, 3], [2, 4], 4)
    r1 = residual(solve_gamma(A, B, PM).linear_basis, span(2, 3, n=4))
    A2, B2 = dichotomous([1, 2, 3], [4], 4), dichotomous([1], [2, 3, 4], 4)
    B3 = dichotomous([1, 2, 3], [4], 4)
    split_infeasible = not solve_gamma(A2, B2, PM).feasible and not solve_gamma(A2, B3, PM).feasible
    co = solve_gamma(A2, B2, PP)
    r2 = residual(co.linear_basis, span(1, 4, n=4))
    r3 = residual(solve_gamma(A, B, PP).linear_basis, span(1, 4, n=4))
    record(2, "dim-4: A=-B spans e2,e3; 3/1 split infeasible; A=B is c1 e1 + c4 e4",
           r1 <= TOL and split_infeasible and co.feasible and r2 <= TOL and r3 <= TOL,
           f"residuals {max(r1, r2, r3):.1e}")


def test_criterion_03_dim3():
    A, B = dichotomous([1, 2], [3], 3), dichotomous([1], [2, 3], 3)
    no_anti = not solve_gamma(A, B, PM).feasible
    one_way = check_pcc(A, 1, B, -1, unit(2, 3)).holds
    try:
        conditional(B, 1, A, -1, unit(2, 3))
        degenerate = False
    except DegenerateCondition:
        degenerate = True
    r = residual(solve_gamma(A, B, PP).linear_basis, span(1, 3, n=3))
    record(3, "dim-3: no A=-B states; e2 one-way PCC; (-,+) degenerate; A=B spans e1,e3",
           no_anti and one_way and degenerate and r <= TOL)


def test_criterion_04_dim2():
    A, B = dichotomous([1], [2], 2), dichotomous([2], [1], 2)
    rng = np.random.default_rng(42)
    passed = drawn = 0
    while drawn < 100:
        c = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        c /= np.linalg.norm(c)
        if min(abs(c)) <= 1e-6:
            continue
        drawn += 1
        passed += check_pcc(A, 1, B, -1, c).holds and check_pcc(A, -1, B, 1, c).holds
    record(4, "dim-2: random states are A=-B PCC", passed == 100, f"{passed}/100")


def test_criterion_05_rotated_noncommuting():
    A = dichotomous([1, 2], [3, 4], 4)
    B = from_eigenspaces([(1, [[1, 0, 1, 0], [0, 1, 0, 1]]), (-1, [[1, 0, -1, 0], [0, 1, 0, -1]])])
    S = solve_pair(A, 1, B, 1)
    # certificate: the nondegeneracy operator vanishes on the whole linear solution space
    killed = float(np.linalg.norm(A.projector(1) @ S.linear_basis.vectors, 2))
    record(5, "rotated pair: (A=+,B=+) certified infeasible without sampling",
           not S.feasible and S.witness is None and S.blocking == ("E_A(+)psi != 0",) and killed <= TOL,
           f"sigma_max(E_A(+) L) = {killed:.1e}, dim L = {S.dimension}")


def _library_pairs():
    for name, sc in paper_library().items():
        for q in sc.queries:
            if q.kind in ("solve_gamma", "covariance") and "error" not in (q.expect or {}):
                yield name, sc.observables[q.params["A"]], sc.observables[q.params["B"]], q.params["gamma"], q


def test_criterion_06_correlations():
    checked, worst = 0, 0.0
    for _, A, B, gamma, _q in _library_pairs():
        g = {tuple(map(float, p)) for p in gamma}
        if g == set(PM):
            sign = -1
        elif g == set(PP):
            sign = 1
        else:
            continue
        S = solve_gamma(A, B, gamma)
        if not S.feasible:
            continue
        c = correlation(A, B, S.witness)
        w = S.witness
        dev = abs(c.value - sign)
        res = c.anti_residual if sign == -1 else c.co_residual
        born_dev = max(abs(born(A, 1, w) - born(B, sign, w)), abs(born(A, -1, w) - born(B, -sign, w)))
        worst = max(worst, dev, res, born_dev)
        checked += 1
    record(6, "witness correlations are -1 (A=-B) / +1 (A=B); Born probabilities match",
           checked >= 8 and worst <= TOL, f"{checked} witnesses, worst deviation {worst:.1e}")


def test_criterion_07_decomposition():
    checked, ok = 0, True
    for sc in paper_library().values():
        obs = [o for o in sc.observables.values() if o.dim == sc.dim and o.is_dichotomous]
        for A, B in itertools.combinations(obs, 2):
            if not commutes(A, B):
                continue
            checked += 1
            total = sum(U.rank for U in joint_eigenspaces(A, B).values())
            ok &= total == sc.dim
            for sign, gamma in ((-1, PM), (1, PP)):
                C, S = characterize_dichotomous(A, B, sign), solve_gamma(A, B, gamma)
                ok &= C.feasible == S.feasible and residual(C.linear_basis, S.linear_basis) <= TOL
    record(7, "joint eigenspaces resolve H; characterization equals solver", checked >= 10 and ok,
           f"{checked} commuting pairs")


def test_criterion_08_shared_outcome():
    A, B = dichotomous([1, 2], [3, 4], 4), dichotomous([1, 3], [2, 4], 4)
    psi = (unit(1, 4) + unit(3, 4)) / np.sqrt(2)
    p_plus, p_minus = conditional(B, 1, A, 1, psi), conditional(B, 1, A, -1, psi)
    reverse = max(conditional(A, g, B, 1, psi) for g in (1, -1))
    rep = shared_outcome_analysis(A, B, 1, psi)
    record(8, "B=+ certain after either A outcome; reverse only 1/2; joint system infeasible",
           abs(p_plus - 1) <= TOL and abs(p_minus - 1) <= TOL and reverse <= 0.6
           and abs(reverse - 0.5) <= TOL and rep.all_conflicts_infeasible,
           f"max reverse {reverse:.6f}")


def _pauli(x, y, z):
    return from_matrix(np.array([[z, x - 1j * y], [x + 1j * y, -z]]))


def test_criterion_09_commutators():
    a1, a2 = _pauli(0.6, 0, 0.8), _pauli(0.6, 0.8, 0)
    A1, A2 = lift_local(a1, 0, (2, 2)), lift_local(a2, 0, (2, 2))
    B1, B2 = lift_local(a1, 1, (2, 2)), lift_local(a2, 1, (2, 2))
    f = np.linalg.eigh(a1.matrix)[1]
    fm, fp = f[:, 0], f[:, 1]
    psi = (np.kron(fp, fm) - np.kron(fm, fp)) / np.sqrt(2)
    r = commutator_identities(A1, A2, B1, B2, psi)
    record(9, "commutator identities on the singlet-form state",
           r.applicable and r.max_residual <= TOL
           and r.commutator_norm > 0.1,
           f"max residual {r.max_residual:.1e}, ||[A1,A2]psi|| = {r.commutator_norm:.3f}")


def test_criterion_10_family():
    a = _pauli(0.6, 0, 0.8)
    rep = family_invariance_check(a, a, trials=20, seed=42)
    record(10, "singlet form A=-B for 20/20 local unitaries; c+- = +c-+ control fails",
           rep.trials == 20 and rep.all_pass and rep.control_failures >= 1,
           f"{sum(rep.singlet_passes)}/20 pass, control fails {rep.control_failures}/20")


def test_criterion_11_ghz():
    z = _pauli(0, 0, 1)
    A, B, C = (lift_local(z, k, (2, 2, 2)) for k in range(3))
    S = solve_triple(A, B, C, [(1, 1, 1), (-1, -1, -1)], joint=True)
    r = residual(S.linear_basis, span(1, 8, n=8))
    p = chain_conditional([(A, 1), (B, 1)], (C, 1), S.witness)
    record(11, "joint triple space is span{|+++>, |--->}; C=+ certain after A=+, B=+",
           S.feasible and r <= TOL and abs(p - 1) <= TOL, f"residual {r:.1e}")


def test_criterion_12_properties():
    rng = np.random.default_rng(2024)
    ok_norm = ok_luders = ok_dual = True
    for _ in range(50):
        n = int(rng.integers(2, 7))
        A, B = from_matrix(random_hermitian(n, rng)), from_matrix(random_hermitian(n, rng))
        psi = random_state(n, rng)
        for alpha in A.values:
            if born(A, alpha, psi) < 1e-9:
                continue
            ok_norm &= abs(sum(conditional(B, b, A, alpha, psi) for b in B.values) - 1) <= TOL
            once = luders(A, alpha, psi)
            ok_luders &= np.linalg.norm(luders(A, alpha, once) - once) <= TOL
        m, r = int(rng.integers(1, 7)), int(rng.integers(0, n + 1))
        M = rng.standard_normal((m, r)) @ rng.standard_normal((r, n)) if r else np.zeros((m, n))
        ok_dual &= rank(M) + kernel(M).rank == n

    covariance_runs, ok_cov = 0, True
    for seed in range(20):
        urng = np.random.default_rng(seed)
        for _, A, B, gamma, q in _library_pairs():
            U = random_unitary(A.dim, urng)
            ok_cov &= unitary_covariance_check(A, B, gamma, U, symmetric=bool(q.params.get("symmetric", False)))
            covariance_runs += 1

    ok_det = True
    for sc in paper_library().values():
        ok_det &= render_report(execute(sc), "json") == render_report(execute(sc), "json")

    record(12, "normalization, Lüders idempotence, covariance, rank duality, determinism",
           ok_norm and ok_luders and ok_cov and ok_dual and ok_det,
           f"{covariance_runs} covariance checks")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
