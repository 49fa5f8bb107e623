"""Acceptance criteria, one test per criterion.

Each test records a ``criterion N: PASS|FAIL ...`` line which is printed in
the terminal summary.  All runs use 100 sample points and seed 42.
"""

import json
import subprocess
import sys

import numpy as np

from conftest import ACCEPTANCE_LINES, SEED
from etanormal import acm, apcm, bileg, calculus as cal, parallelize as par, qsas
from etanormal.calculus import TensorField
from etanormal.exprlang import eval_jet2, parse
from etanormal.models import kappa_mu_candidate, para_sasakian, perturbed_acm, perturbed_apcm
from oracles import EXPRESSION_CORPUS, METRIC_CORPUS, NAMES, central_differences, koszul, metric_field

POINTS = 100


def record(number: int, ok: bool, detail: str):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def sample(S, count=POINTS):
    return S.chart.sample(count, SEED)


def random_symmetric(rng, n):
    m = rng.integers(-2, 3, size=(n, n))
    return np.triu(m) + np.triu(m, 1).T


def test_criterion_01_unconditional_identity():
    worst = 0.0
    for n in (1, 2):
        for seed in range(10):
            S = perturbed_acm(n, seed)
            rep = acm.covd_report(S, sample(S), seed=SEED)
            worst = max(worst, rep["general"].max_residual)
    record(1, worst < 1e-7, f"general covariant derivative identity, 20 perturbed ACM: max {worst:.2e} < 1e-7")


def test_criterion_02_heisenberg_family():
    rng = np.random.default_rng(SEED)
    failures, count = [], 0
    for n in (1, 2):
        for _ in range(10):
            a = random_symmetric(rng, n)
            rep = qsas.heisenberg_report(n, a, qsas.heisenberg(n, a).sample(POINTS, SEED))
            count += 1
            if not rep.passed:
                failures.append((a.tolist(), [c.id for c in rep.checks if c.verdict == "fail"]))
    record(2, not failures, f"{count} members (validator, N1, commutators, d eta, Levi signature, rank); "
                            f"failures: {failures or 'none'}")


def heisenberg_corpus():
    return [qsas.heisenberg(1, [[1.0]]), qsas.heisenberg(1, [[0.0]]), qsas.heisenberg(1, [[-3.0]]),
            qsas.heisenberg(2, np.eye(2)), qsas.heisenberg(2, np.diag([1.0, 0.0])),
            qsas.heisenberg(2, [[1.0, 2.0], [2.0, -1.0]]), qsas.alpha_sasakian(1, -2.0)]


def test_criterion_03_acm_normality_equivalence():
    structures = heisenberg_corpus() + [perturbed_acm(n, s) for n in (1, 2) for s in range(10)]
    disagree, verdicts = [], {True: 0, False: 0}
    for S in structures:
        rep = acm.normality_report(S, sample(S), seed=SEED)
        v = (rep.labels["eta_normal"], rep.labels["CR"], rep.labels["covd"])
        if len(set(v)) != 1:
            disagree.append((S.name, v))
        verdicts[v[0]] += 1
    record(3, not disagree, f"{len(structures)} structures, normal {verdicts[True]} / not normal "
                            f"{verdicts[False]}; disagreements: {disagree or 'none'}")


def test_criterion_04_parallelization():
    models = [qsas.alpha_sasakian(1, 1.0), qsas.alpha_sasakian(1, -2.0), qsas.alpha_sasakian(2, -2.0),
              qsas.heisenberg(1, [[0.0]]), qsas.heisenberg(2, np.zeros((2, 2)))]
    worst = 0.0
    for S in models:
        conn = par.build_tanaka_like(S, sample(S))
        worst = max(worst, max(par.parallel_residuals(conn.loc, conn.coefficients).values()))
    S = qsas.alpha_sasakian(1, 1.0)
    conn = par.build_tanaka_like(S, sample(S))
    tanaka = par.closed_forms(conn.loc)["tanaka"]
    t1_err = float(np.max(np.abs(conn.T1 - tanaka)))
    t2 = max(float(np.max(np.abs(par.build_tanaka_like(S0, sample(S0)).T2)))
             for S0 in (qsas.heisenberg(1, [[0.0]]), qsas.heisenberg(2, np.zeros((2, 2)))))
    ok = worst < 1e-8 and t1_err < 1e-9 and t2 < 1e-9
    record(4, ok, f"parallel residuals max {worst:.2e} < 1e-8; T1 - Tanaka {t1_err:.2e} < 1e-9; "
                  f"T2 on a = 0 {t2:.2e} < 1e-9")


def test_criterion_05_torsion_conditions():
    S = qsas.heisenberg(1, [[1.0]])
    rep = par.torsion_conditions(par.build_tanaka_like(S, sample(S)), tol=1e-8, seed=SEED)
    S2 = qsas.heisenberg(2, np.eye(2))
    rep2 = par.torsion_conditions(par.build_tanaka_like(S2, sample(S2)), tol=1e-8, seed=SEED)
    res = [c.max_residual for c in rep.checks + rep2.checks]
    record(5, rep.passed and rep2.passed and len(res) == 4,
           f"S(xi,phiY) + phi S(xi,Y) and S - 2 d eta xi on ker eta: max {max(res):.2e} < 1e-8")


def test_criterion_06_quasi_sasakian_foliation():
    S = qsas.heisenberg(2, np.diag([1.0, 0.0]))
    rep = qsas.foliation_checks(S, sample(S), tol=1e-7)
    dim_ok = rep.labels["dim C"] == [3] and rep.labels["rank"] == 3
    S1 = qsas.alpha_sasakian(1, 1.0)
    rep1 = qsas.foliation_checks(S1, sample(S1), tol=1e-7)
    xi_line = rep1.labels["dim C"] == [1] and rep1.passed
    inv = rep["involutive"].max_residual
    record(6, rep.passed and dim_ok and xi_line,
           f"diag(1,0): dim C = {rep.labels['dim C']} (dim M - r + 1 = 3), phi C residual "
           f"{rep['phi C in C'].max_residual:.2e}, involutivity {inv:.2e} < 1e-7; "
           f"alpha = 1: dim C = {rep1.labels['dim C']}")


def test_criterion_07_para_unconditional_identities():
    worst_pfi, worst_j = 0.0, 0.0
    for n in (1, 2):
        for seed in range(10):
            S = perturbed_apcm(n, seed)
            loc = S.at(sample(S))
            worst_pfi = max(worst_pfi, apcm.identity_suite(S, seed=SEED, loc=loc)["pfi"].max_residual)
            rep = apcm.product_nijenhuis_check(S, loc=loc, tol=1e-7)
            worst_j = max(worst_j, max(c.max_residual for c in rep.checks))
    record(7, worst_pfi < 1e-7 and worst_j < 1e-7,
           f"20 perturbed APCM: para identity (coefficient 2) {worst_pfi:.2e} < 1e-7; "
           f"[J,J] vs (K1,K2), -(K3,K4) {worst_j:.2e} < 1e-7")


def test_criterion_08_para_normality_equivalence():
    structures = ([apcm.flat_para_cosymplectic(1), para_sasakian(1)]
                  + [perturbed_apcm(n, s) for n in (1, 2) for s in range(10)])
    disagree, verdicts = [], {True: 0, False: 0}
    for S in structures:
        rep = apcm.normality_report(S, sample(S), seed=SEED)
        v = (rep.labels["tau_normal"], rep.labels["para_CR"], rep.labels["crpfi"])
        if len(set(v)) != 1:
            disagree.append((S.name, v))
        verdicts[v[0]] += 1
    record(8, not disagree, f"{len(structures)} structures, normal {verdicts[True]} / not normal "
                            f"{verdicts[False]}; disagreements: {disagree or 'none'}")


def test_criterion_09_bi_legendrian():
    P = para_sasakian(1)
    loc = P.at(sample(P))
    cert = apcm.validate_apcm(P, loc=loc).passed
    cert &= float(np.max(np.abs(loc.dtau.val - loc.Psi.val))) < 1e-9 and float(np.max(np.abs(loc.K1))) < 1e-9
    fl = bileg.flatness(P, loc=loc, tol=1e-8)
    pi = max(fl.labels["max |Pi+|"], fl.labels["max |Pi-|"])
    flat_ok = cert and fl.passed and fl.labels["flatness"] == "flat" and fl.labels["normal"] and fl.labels["h=0"]

    K = kappa_mu_candidate(0.5)
    kloc = K.at(sample(K))
    km = bileg.kappa_mu_report(K, kappa=-1.0, loc=kloc, tol=1e-6)
    fk = bileg.flatness(K, loc=kloc, tol=1e-8)
    ch = bileg.chi_properties(K, loc=kloc, tol=1e-7, seed=SEED)
    _, h2 = bileg.kappa_mu_residual(K, -1.0, km.labels["mu"], loc=kloc)
    semi = fk.labels["flatness"].startswith("semi_flat")
    chi_res = max(ch["chi sym"].max_residual, ch["chi orth"].max_residual)
    km_ok = (apcm.validate_apcm(K, loc=kloc).passed and km.passed and semi and h2 < 1e-8
             and ch["chi sym"].ok and ch["chi orth"].ok and chi_res < 1e-7)
    record(9, flat_ok and km_ok,
           f"para-Sasakian: max Pi {pi:.2e} < 1e-8, flat/normal/h=0 agree; (-1,mu) model: "
           f"curvature {km['kappa mu'].max_residual:.2e} < 1e-6, {fk.labels['flatness']}, "
           f"h^2 {h2:.2e} < 1e-8, chi {chi_res:.2e} < 1e-7")


def test_criterion_10_numerical_foundations():
    rng = np.random.default_rng(SEED)
    chart = cal.ChartManifold.box(NAMES)
    pts = chart.sample(POINTS, SEED)
    grad_err = 0.0
    for text in EXPRESSION_CORPUS:
        jet = eval_jet2(parse(text, NAMES), pts)
        grad, _ = central_differences(text, pts)
        grad_err = max(grad_err, float(np.max(np.abs(jet.d1 - grad))))
    kos = tors = metr = bian = 0.0
    for entries in METRIC_CORPUS:
        g = metric_field(chart, entries).jet(pts)
        C = cal.christoffels(g)
        X, Y, Z = cal.random_vector_fields(rng, pts, 3)
        kos = max(kos, float(np.max(np.abs(2 * cal.bilinear(g, cal.nabla(X, Y, C), Z).val
                                           - koszul(g, X, Y, Z)))))
        tors = max(tors, float(np.max(np.abs(cal.torsion(C, X, Y).val))))
        metr = max(metr, float(np.max(np.abs(cal.covariant_derivative(g, (0, 2), C).val))))
        R = lambda a, b, c: cal.curvature(C, a, b, c).val
        bian = max(bian, float(np.max(np.abs(R(X, Y, Z) + R(Y, Z, X) + R(Z, X, Y)))))
    eta = TensorField.from_strings(chart, (0, 1), ["exp(y)*z", "sin(x*z)", "x^2 + cos(y)"]).jet(pts)
    dd = float(np.max(np.abs(cal.d2form(cal.d1form(eta)).val)))
    ok = grad_err < 1e-6 and kos < 1e-8 and max(tors, metr) < 1e-9 and bian < 1e-7 and dd < 1e-8
    record(10, ok, f"gradients vs differences {grad_err:.2e}; Koszul {kos:.2e}; torsion {tors:.2e}; "
                   f"metricity {metr:.2e}; Bianchi {bian:.2e}; d^2 {dd:.2e}")


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "etanormal.cli", *args], capture_output=True, text=True)


def test_criterion_11_determinism(tmp_path):
    spec = tmp_path / "h.mfd"
    assert run_cli("example", "heisenberg", "--n", "2", "--a", "1,0;0,-1", "-o", str(spec)).returncode == 0
    pspec = tmp_path / "p.mfd"
    assert run_cli("example", "para_sasakian", "-o", str(pspec)).returncode == 0
    same = []
    for cmd, f in (("classify", spec), ("identities", spec), ("bileg", pspec)):
        outs = []
        for k in range(2):
            out = tmp_path / f"{cmd}{k}.json"
            run_cli(cmd, str(f), "--seed", str(SEED), "--json", str(out))
            outs.append(out.read_bytes())
        json.loads(outs[0])
        same.append(outs[0] == outs[1])
    record(11, all(same), f"classify, identities and bileg JSON byte-identical across runs: {same}")
