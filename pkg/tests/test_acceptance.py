"""The ten acceptance criteria, one test each, with their tolerances and time budgets.

Run ``pytest tests/test_acceptance.py -v`` (a PASS/FAIL line per criterion is
printed in the summary) or ``python tests/test_acceptance.py``.
"""
import contextlib
import json
import math
import time

import numpy as np
import pytest

from bvmax.classifier import ATTAINED, NOT_ATTAINED, classify, maximizer_set
from bvmax.cli import main as cli_main
from bvmax.constants import (ProblemParams, b0_switch_exponent, critical_b0, gn_best_constant,
                             mazya_constant, sobolev_conjugate, unit_sphere_area)
from bvmax.oracle import (RadialStepFunction, concentrating_element, functional_value,
                          normalize_to_constraint, norms, vanishing_element)
from bvmax.reduction import reduced
from bvmax.thresholds import alpha_c, alpha_v, asymptotic_report, d_alpha

SIGN_SEED = 20261015
FOUR_PI = 4 * math.pi
EQ175 = gn_best_constant(2, 1.75)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []


@contextlib.contextmanager
def criterion(number, title, budget):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        line = f"criterion {number:2d} {status}  {title}  ({elapsed:.2f}s / {budget}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)


def rel_err(x, y):
    return abs(x - y) / abs(y)


# 1 ---------------------------------------------------------------------------

def test_criterion_01_mazya_constant():
    with criterion(1, "Mazya/GN constant and ball GN ratio", 1.0):
        for N in range(2, 7):
            conj = sobolev_conjugate(N)
            E = (1.0 / (N ** (N - 1) * unit_sphere_area(N))) ** (1.0 / (N - 1))
            assert rel_err(gn_best_constant(N, conj), E) <= 1e-12
            for R in (0.1, 1.0, 10.0):
                ratio = norms(RadialStepFunction.ball(R, 1.0, N), conj).gn_ratio(N)
                assert rel_err(ratio, E) <= 1e-12, (N, R)


# 2 ---------------------------------------------------------------------------

def test_criterion_02_closed_form_thresholds():
    with criterion(2, "closed-form alpha_v = 1/(bE), alpha_c = a/(1*E)", 5.0):
        for N in (2, 3, 5):
            conj = sobolev_conjugate(N)
            for b in (1.5, 2.0, 5.0):
                P = ProblemParams(N, conj, b, conj)
                target = 1.0 / (b * mazya_constant(N))
                assert rel_err(alpha_v(P, numeric=True).value, target) <= 1e-8, (N, b)
        for N in (2, 3):
            conj = sobolev_conjugate(N)
            for a in (3.0, 4.0, 10.0):
                P = ProblemParams(N, a, 1.0, conj)
                target = a / (conj * mazya_constant(N))
                assert rel_err(alpha_c(P, numeric=True).value, target) <= 1e-8, (N, a)


# 3 ---------------------------------------------------------------------------

def _subcritical_points():
    closed, open_ = [], []
    for N in (2, 3, 4):
        qs = b0_switch_exponent(N)
        conj = sobolev_conjugate(N)
        q_low = 1 + 0.5 * (qs - 1)
        q_high = qs + 0.6 * (conj - qs)
        b0 = critical_b0(N, q_high)
        # q <= (2N-1)/(2(N-1)): any b (q = qs itself included)
        closed += [(N, q_low, 0.3), (N, qs, 2.0)]
        # q above the switch with b >= b0 (b = b0 included)
        closed += [(N, q_high, b0), (N, q_high, 3 * b0)]
        open_.append((N, q_high, 0.4 * b0))
    open_.append((2, 1.75, 0.25))
    return closed, open_


def test_criterion_03_subcritical_threshold():
    with criterion(3, "subcritical alpha_v at a = N(q-1)", 5.0):
        closed, open_ = _subcritical_points()
        assert len(closed) == 12 and len(open_) == 4
        for N, q, b in closed:
            P = ProblemParams(N, N * (q - 1), b, q)
            target = 1.0 / (b * gn_best_constant(N, q))
            assert rel_err(alpha_v(P, numeric=True).value, target) <= 1e-8, (N, q, b)
        for N, q, b in open_:
            P = ProblemParams(N, N * (q - 1), b, q)
            value = alpha_v(P, numeric=True).value
            assert 0 < value < 1.0 / (b * gn_best_constant(N, q)), (N, q, b, value)


# 4 / 5 -----------------------------------------------------------------------

def _theorem3_cases():
    P = ProblemParams
    ac_405 = alpha_c(P(2, 4, 0.5, 2)).value
    av_12 = alpha_v(P(2, 1, 2, 2)).value
    return [
        (P(2, 3, 2, 2, 1.0), ATTAINED, "Thm3(i)"),
        (P(2, 3, 2, 2, 500.0), ATTAINED, "Thm3(i)"),
        (P(2, 4, 0.5, 2, 1.0), ATTAINED, "Thm3(ii)"),
        (P(2, 4, 0.5, 2, 30.0), NOT_ATTAINED, "Thm3(ii)"),
        (P(2, 4, 1, 2, 20.0), ATTAINED, "Thm3(ii)"),
        (P(2, 1, 2, 2, 20.0), ATTAINED, "Thm3(iii)"),
        (P(2, 1, 2, 2, 3.0), NOT_ATTAINED, "Thm3(iii)"),
        (P(2, 2, 2, 2, 20.0), ATTAINED, "Thm3(iii)"),
        (P(2, 1, 0.5, 2, 3.0), NOT_ATTAINED, "Thm3(iv)"),
        (P(2, 1, 0.5, 2, 30.0), NOT_ATTAINED, "Thm3(iv)"),
        (P(2, 2, 1, 2, 5.0), NOT_ATTAINED, "Thm3(iv)"),
        (P(2, 4, 0.5, 2, ac_405), ATTAINED, "Thm3(v)"),
        (P(2, 4, 1, 2, 8 * math.pi), NOT_ATTAINED, "Thm3(v)"),
        (P(2, 2, 1, 2, FOUR_PI), ATTAINED, "Thm3(vi)"),
        (P(2, 2, 2, 2, 2 * math.pi), NOT_ATTAINED, "Thm3(vi)"),
        (P(2, 2, 0.5, 2, FOUR_PI), NOT_ATTAINED, "Thm3(vi)"),
        (P(2, 1, 2, 2, av_12), ATTAINED, "Thm3(vii)"),
        (P(2, 1, 1, 2, FOUR_PI), NOT_ATTAINED, "Thm3(vii)"),
        (P(2, 1, 0.5, 2, FOUR_PI), NOT_ATTAINED, "Thm3(vii)"),
        (P(3, 2, 1.3, 1.5, 1.0), ATTAINED, "Thm3(i)"),
        (P(3, 1.2, 3.0, 1.5, alpha_v(P(3, 1.2, 3.0, 1.5)).value), ATTAINED, "Thm3(vii)"),
    ]


def _theorem1_cases():
    P = ProblemParams
    av = lambda p: p.with_(alpha=alpha_v(p).value)
    return [
        (P(2, 2.0, 1.0, 1.75, 1.0), ATTAINED, "Thm1(i)"),
        (P(2, 2.0, 0.1, 1.75, 50.0), ATTAINED, "Thm1(i)"),
        (P(2, 1.0, 0.5, 1.75, 100.0), ATTAINED, "Thm1(ii)"),
        (P(2, 1.0, 0.5, 1.75, 1.0), NOT_ATTAINED, "Thm1(ii)"),
        (P(2, 1.5, 0.75, 1.75, 30.0), ATTAINED, "Thm1(ii)"),
        (P(2, 1.5, 0.75, 1.75, 1.0), NOT_ATTAINED, "Thm1(ii)"),
        (av(P(2, 1.0, 0.5, 1.75)), ATTAINED, "Thm1(iii)"),
        (av(P(2, 1.5, 0.25, 1.75)), ATTAINED, "Thm1(iii)"),
        (av(P(3, 1.0, 0.2, 1.4)), ATTAINED, "Thm1(iii)"),
        (P(2, 1.5, 0.75, 1.75, 1 / (0.75 * EQ175)), NOT_ATTAINED, "Thm1(iv)"),
        (P(2, 1.5, 0.5, 1.75, 1 / (0.5 * EQ175)), NOT_ATTAINED, "Thm1(iv)"),
        (av(P(2, 0.5, 0.3, 1.25)), NOT_ATTAINED, "Thm1(iv)"),
        (av(P(2, 1.0, 2.0, 1.5)), NOT_ATTAINED, "Thm1(iv)"),
    ]


def _check_table(cases):
    for P, verdict, label in cases:
        rep = classify(P)
        assert (rep.verdict, rep.case_label) == (verdict, label), (P, rep.verdict, rep.case_label)


def test_criterion_04_theorem3_table():
    with criterion(4, "critical truth table (Thm3 i-vii)", 5.0):
        cases = _theorem3_cases()
        labels = {c[2] for c in cases}
        assert labels == {f"Thm3({r})" for r in ("i", "ii", "iii", "iv", "v", "vi", "vii")}
        assert len(cases) >= 12
        _check_table(cases)


def test_criterion_05_theorem1_table():
    with criterion(5, "subcritical truth table (Thm1 i-iv)", 5.0):
        cases = _theorem1_cases()
        assert {c[2] for c in cases} == {"Thm1(i)", "Thm1(ii)", "Thm1(iii)", "Thm1(iv)"}
        # both sides of b0 at a = N(q-1), q above the switch exponent
        assert any(P.b < 0.5 and P.a == 1.5 for P, _, _ in cases)
        assert any(P.b >= 0.5 and P.a == 1.5 for P, _, _ in cases)
        _check_table(cases)


# 6 ---------------------------------------------------------------------------

def test_criterion_06_maximizer_optimality():
    cases = [c for c in _theorem3_cases() + _theorem1_cases() if c[1] == ATTAINED]
    with criterion(6, "ball maximizers reach D_alpha on the constraint", 2.0):
        count = 0
        for P, _, _ in cases:
            rep = classify(P)
            balls = maximizer_set(P, report=rep)
            assert balls, P
            for b in balls:
                u = RadialStepFunction.ball(b.radius, b.sign * b.height, P.N)
                nm = norms(u, P.q)
                assert abs(nm.tv ** P.a + nm.l1 ** P.b - 1.0) <= 1e-12, P
                assert rel_err(functional_value(u, P.alpha, P.q), rep.d_alpha) <= 1e-10, P
                count += 1
        assert count >= 2 * len(cases)


# 7 ---------------------------------------------------------------------------

FINITE_LIMITS = [
    # Thm2(iii)(b), the sequence a = N(q-1)(1 - 10^-k) named in the criterion
    (ProblemParams(2, 1.5, 0.75, 1.75), "a_up_Nq1"),
    (ProblemParams(3, 1.0, 1.0, 1.4), "a_up_Nq1"),
    (ProblemParams(2, 1.0, 0.25, 1.5), "a_up_Nq1"),
    # Thm4(iii)(a)-(d)
    (ProblemParams(2, 1.0, 2.0, 2), "a_down_0"),
    (ProblemParams(2, 1.0, 2.0, 2), "a_up_Nq1"),
    (ProblemParams(2, 4.0, 0.99999, 2), "a_down_1star"),
    (ProblemParams(2, 4.0, 0.5, 2), "b_down_0"),
    (ProblemParams(2, 4.0, 0.5, 2), "b_up_1"),
    (ProblemParams(2, 1.99999, 2.0, 2), "b_down_1"),
    (ProblemParams(2, 1.0, 2.0, 2), "b_to_inf"),
]

INFINITE_LIMITS = [
    (ProblemParams(2, 4.0, 0.5, 2), "a_to_inf", range(1, 7)),
    (ProblemParams(2, 1.0, 0.5, 1.75), "b_down_0", range(1, 7)),
    # alpha_v grows only like a^{-1/2} here
    (ProblemParams(2, 1.0, 0.5, 1.75), "a_down_0", range(2, 11)),
]


def test_criterion_07_asymptotics():
    with criterion(7, "threshold asymptotics converge monotonically", 30.0):
        for P, tag in FINITE_LIMITS:
            rep = asymptotic_report(P, tag, ks=range(2, 7))
            errs = rep.errors
            assert all(x > y for x, y in zip(errs, errs[1:])), (tag, P, errs)
        for P, tag, ks in INFINITE_LIMITS:
            rep = asymptotic_report(P, tag, ks=ks)
            assert math.isinf(rep.target)
            ths = rep.thresholds
            assert all(x < y for x, y in zip(ths, ths[1:])), (tag, ths)
            assert ths[-1] > 1e6, (tag, ths)


# 8 ---------------------------------------------------------------------------

def _random_params(rng, n):
    out = []
    for _ in range(n):
        N = int(rng.integers(2, 7))
        conj = N / (N - 1)
        q = conj if rng.random() < 0.5 else 1 + rng.uniform(0.02, 0.98) * (conj - 1)
        a, b, alpha = np.exp(rng.uniform(np.log([0.1, 0.1, 0.01]), np.log([10, 10, 100])))
        out.append(ProblemParams(N, a, b, q, alpha))
    return out


def test_criterion_08_sign_equivalence():
    slack = 1e-10
    with criterion(8, f"sign equivalences over 1e4 draws (seed {SIGN_SEED})", 5.0):
        rng = np.random.Generator(np.random.Philox(SIGN_SEED))
        params = _random_params(rng, 200)
        violations, checked = 0, 0
        for P in params:
            rf = reduced(P)
            t = np.exp(rng.uniform(-30, 30, size=50))
            f, g = rf.eval_f(t), rf.eval_g(t)
            lhs, rhs = f - 1.0, rf.alpha_E - g
            ok = (np.abs(lhs) > slack) & (np.abs(rhs) > slack)
            violations += int(np.sum(np.sign(lhs[ok]) != np.sign(rhs[ok])))
            checked += t.size
            if P.is_critical:
                lhs, rhs = f - rf.alpha_E, rf.eval_h(t) - rf.alpha_E
                ok = (np.abs(lhs) > slack) & (np.abs(rhs) > slack)
                violations += int(np.sum(np.sign(lhs[ok]) != np.sign(rhs[ok])))
        assert checked == 10_000
        assert violations == 0


# 9 ---------------------------------------------------------------------------

VERIFY_POINTS = [
    (ProblemParams(2, 3, 2, 2, 1.0), True),
    (ProblemParams(2, 4, 0.5, 2, 3.0), True),
    (ProblemParams(2, 2, 1, 2, 10.0), False),
    (ProblemParams(3, 2, 1.2, 1.3, 2.0), True),
    (ProblemParams(2, 1, 0.5, 1.75, 100.0), True),
    (ProblemParams(2, 1, 0.5, 1.75, 1.0), False),
]


def test_criterion_09_monte_carlo(capsys):
    with criterion(9, "verify: 1e5 samples x 6 points, no violations", 60.0):
        for P, attained in VERIFY_POINTS:
            assert classify(P).attained == attained
            argv = ["verify", "--n", str(P.N), "--a", repr(P.a), "--b", repr(P.b),
                    "--q", repr(P.q), "--alpha", repr(P.alpha), "--samples", "100000",
                    "--seed", "42"]
            code = cli_main(argv)
            report = json.loads(capsys.readouterr().out)
            assert code == 0 and report["violations"] == 0, report
            assert report["max_value"] <= report["d_alpha"] * (1 + 1e-9)
            if attained:
                gap = report["d_alpha"] - report["best_seeded_value"]
                assert 0 <= gap + 1e-12 and gap < 1e-4, report


# 10 --------------------------------------------------------------------------

def test_criterion_10_vanishing_concentration():
    n = 1e6
    with criterion(10, "vanishing -> 1 and concentrating -> alpha E at n = 1e6", 2.0):
        for P in (ProblemParams(2, 2, 1, 2, 10.0), ProblemParams(2, 3, 2, 2, 1.0),
                  ProblemParams(3, 2, 1, 1.5, 5.0), ProblemParams(2, 2, 1, 1.9, 3.0)):
            D = d_alpha(P).value
            u = RadialStepFunction.ball(1.0, 1.0, P.N)
            van = functional_value(normalize_to_constraint(vanishing_element(u, n), P.a, P.b),
                                   P.alpha, P.q)
            assert abs(van - 1.0) < 1e-6 and van <= D * (1 + 1e-12), (P, van)
            if P.is_critical:
                conc = functional_value(
                    normalize_to_constraint(concentrating_element(u, n), P.a, P.b), P.alpha, P.q)
                aE = P.alpha * gn_best_constant(P.N, P.q)
                assert abs(conc - aE) < 1e-6 and conc <= D * (1 + 1e-12), (P, conc)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
