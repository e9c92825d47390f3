"""Acceptance suite: one test per criterion, each at its stated tolerance.

Every test prints a `criterion NN (<name>): PASS` line (visible with -s or
in the harness run), and the same experiment functions back the CLI, so
`padiclt run <experiment>` reproduces any line.
"""

import time

from padiclt.experiments import ExperimentConfig, run

_CACHE: dict = {}


def _run(name: str, **kw):
    key = (name, tuple(sorted(kw.items())))
    if key not in _CACHE:
        _CACHE[key] = run(ExperimentConfig(name, **kw))
    return _CACHE[key]


def _assert_all(criterion: str, reports) -> None:
    failed = [
        (rep.experiment, c.check_id, c.measured)
        for rep in reports for c in rep.checks if not c.passed
    ]
    status = "PASS" if not failed else f"FAIL {failed}"
    print(f"criterion {criterion}: {status}")
    assert not failed, failed


SWEEP = [(h, p) for h in (2, 3) for p in (2, 3, 5)]


def test_c01_j_homomorphism():
    t0 = time.time()
    reports = [_run("j-homomorphism", h=h, p=p, N=8, seed=1) for h, p in SWEEP]
    elapsed = time.time() - t0
    for rep in reports:
        rec = {c.check_id: c for c in rep.checks}
        assert rec["j-multiplicative"].measured["pairs"] == 200
    assert elapsed < 10, f"took {elapsed:.1f}s"
    _assert_all("01 (j-homomorphism, 200 pairs x 6 cells, <10s)",
                [_restrict(r, {"j-multiplicative"}) for r in reports])


def _restrict(report, ids):
    import copy
    r = copy.copy(report)
    r.checks = [c for c in report.checks if c.check_id in ids]
    return r


def test_c02_reduced_norm():
    reports = [_run("j-homomorphism", h=h, p=p, N=8, seed=1) for h, p in SWEEP]
    _assert_all("02 (Nrd multiplicative + congruence)",
                [_restrict(r, {"nrd-multiplicative", "nrd-congruence"}) for r in reports])


def test_c03_dheq_vs_matrix():
    reports = [_run("dheq-vs-matrix", h=h, p=p, N=8, seed=2) for h, p in SWEEP]
    for rep in reports:
        rec = {c.check_id: c for c in rep.checks}
        assert rec["dheq-matches-matrix"].measured["trials"] == 50 * (rep.config["h"] - 1)
    _assert_all("03 (gamma(w_i) = matrix-oracle series, 50 gammas per cell)", reports)


def test_c04_action_law():
    reports = [_run("action-law", h=2, p=5, seed=3), _run("action-law", h=3, p=3, seed=3)]
    trials = sum(c.measured["trials"] for r in reports for c in r.checks
                 if c.check_id == "law-mod-truncation")
    assert trials >= 20
    _assert_all("04 (action law, s in {-2,0,3}, exact to truncation)",
                [_restrict(r, {"law-mod-truncation", "law-exact-low-degrees"})
                 for r in reports])


def test_c05_norm_preservation():
    reports = [_run("action-law", h=h, p=p, seed=3) for h, p in SWEEP]
    trials = sum(c.measured["trials"] for r in reports for c in r.checks
                 if c.check_id == "norm-preservation")
    assert trials >= 100
    _assert_all("05 (norm preservation on 100+ random (gamma, x))",
                [_restrict(r, {"norm-preservation"}) for r in reports])


def test_c06_lie_weights():
    reports = [_run("lie-weights", h=2, p=5), _run("lie-weights", h=3, p=3)]
    _assert_all("06 (x_00, x_ii eigenvalues on |a| <= 6, s in {0,1,3})", reports)


def test_c07_lie_bracket():
    reports = [_run("lie-bracket", h=2, p=5), _run("lie-bracket", h=3, p=3)]
    _assert_all("07 (gl_h commutation relations to degree 5)", reports)


def test_c08_finite_difference():
    rep = _run("finite-difference", h=2, p=5, N=12, seed=4)
    rec = {c.check_id: c for c in rep.checks}
    # frozen from the pre-build measurement: h units of v(p)/h per step
    assert rec["difference-quotient-converges"].measured["min_step"] >= 2
    _assert_all("08 (difference quotient converges, step >= h units)", [rep])


def test_c09_fn_sequence():
    reports = [_run("fn-sequence", h=2, p=3, Dmax=12, seed=5),
               _run("fn-sequence", h=2, p=5, Dmax=12, seed=5)]
    _assert_all("09 (f_n recursion = closed form, stabilization)", reports)


def test_c10_vs_stability():
    reports = [_run("vs-stability", h=2, p=5, seed=6), _run("vs-stability", h=3, p=3, seed=6)]
    _assert_all("10 (gamma(V_s) in V_s, dim V_s = C(s+h-1, h-1), s <= 5)", reports)


def test_c11_reachability():
    reports = [_run("reachability", h=2, p=5), _run("reachability", h=3, p=3)]
    _assert_all("11 (span of phi_0^s is V_s; degree d > s reaches all)", reports)


def test_c12_kernels():
    reports = [_run("kernels", h=2, p=5), _run("kernels", h=3, p=3)]
    _assert_all("12 (kernel of {x_0j} = constants; n-kernel in V_s = line)", reports)


def test_c13_lf_diagnostic():
    reports = [_run("lf-diagnostic", h=2, p=5, seed=7), _run("lf-diagnostic", h=3, p=3, seed=7)]
    _assert_all("13 (V_s finite, w_1^(s+1) phi^s growing on 6-8-10)", reports)


def test_c14_contraction():
    reports = [_run("contraction", h=h, p=p, seed=8) for h, p in SWEEP]
    trials = sum(c.measured["trials"] for r in reports for c in r.checks
                 if c.check_id == "gamma-n-contracts")
    assert trials >= 200
    _assert_all("14 (Gamma_n profile >= n h; b^a profile >= |a| n h)", reports)


def test_c15_formal_group_axioms():
    reports = [_run("formal-group-axioms", h=2, p=2, seed=9),
               _run("formal-group-axioms", h=2, p=3, seed=9),
               _run("gm-identities", h=2, p=2, Dmax=12),
               _run("gm-identities", h=2, p=3, Dmax=12),
               _run("logarithm", h=2, p=5)]
    _assert_all("15 (LT axioms to Dmax=20; [p]_Gm binomial; log additivity)", reports)


def test_c16_heights():
    reports = [_run("height", h=2, p=2), _run("height", h=2, p=3)]
    _assert_all("16 (G_m -> 1, G_a -> inf, p X + X^(p^h) -> h)", reports)


def test_c17_frobenius_endomorphism():
    reports = [_run("endomorphism-frobenius", h=2, p=2),
               _run("endomorphism-frobenius", h=3, p=2),
               _run("endomorphism-frobenius", h=2, p=3)]
    _assert_all("17 (tau = X^q endomorphism, tau^h = [p] mod p)", reports)


def test_c18_level_structure():
    reports = [_run("level-structure", h=1, e=1, p=p) for p in (2, 3, 5)]
    _assert_all("18 (X prod(X - [a](x)) = [p](X) in Z_p[x]/(Phi) at p^6)", reports)


def test_c19_period_convergence():
    reports = [_run("period-convergence", h=2, p=2, nmax=8),
               _run("period-convergence", h=2, p=3, nmax=6),
               _run("period-convergence", h=3, p=2, nmax=6)]
    _assert_all("19 (recursion exact; power-bounded; differences contract; origin)",
                reports)


def test_c20_dist_norms():
    reports = [_run("dist-norms", h=2, p=3, seed=10), _run("dist-norms", h=3, p=3, seed=10)]
    _assert_all("20 (||b^a||_r = r^|a|; evaluation orders agree)", reports)
