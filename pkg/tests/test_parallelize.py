import numpy as np
import pytest

from etanormal import parallelize as par, qsas
from etanormal.models import (kenmotsu_model, para_kenmotsu, para_sasakian, paracontact_sl2,
                              perturbed_acm)


@pytest.mark.parametrize("S", [qsas.alpha_sasakian(1, 1.0), qsas.alpha_sasakian(2, -2.0),
                               qsas.heisenberg(2, np.diag([1.0, 0.0])), kenmotsu_model(1)],
                         ids=["sasakian", "alpha-2", "diag10", "kenmotsu"])
def test_deformed_connection_parallelizes_acm(S):
    conn = par.build_tanaka_like(S, S.sample(30))
    rep = par.verify_parallel(conn)
    assert rep.passed, rep.summary()
    assert max(par.parallel_residuals(conn.loc, conn.coefficients).values()) < 1e-10


def test_levi_civita_does_not_parallelize_sasakian():
    S = qsas.alpha_sasakian(1, 1.0)
    assert par.levi_civita_parallel_defect(S, S.sample(10)) > 0.1


@pytest.mark.parametrize("S", [para_sasakian(1), para_sasakian(2), para_kenmotsu(1), paracontact_sl2()],
                         ids=["para-sasakian", "para-sasakian5", "para-kenmotsu", "sl2"])
def test_para_parallelization(S):
    conn, rep = par.para_parallelize(S, S.sample(30))
    assert rep.passed, rep.summary()


def test_gate_rejects_non_normal_structure():
    S = perturbed_acm(2, 0)
    with pytest.raises(par.PreconditionError):
        par.build_tanaka_like(S, S.sample(10))


def test_t2_is_determined_by_t1():
    S = qsas.alpha_sasakian(1, 1.0)
    conn = par.build_tanaka_like(S, S.sample(10))
    np.testing.assert_allclose(par.t2_from(conn.loc, conn.T1), conn.T2, atol=1e-14)
    # T1 + T2 is metric: the lowered combination is skew in its last two slots
    g = conn.loc.g.val
    low = np.einsum("...kl,...kij->...lij", g, conn.T1 + conn.T2)
    assert np.max(np.abs(low + np.swapaxes(low, -1, -3))) < 1e-12


@pytest.mark.parametrize("S", [qsas.alpha_sasakian(1, 1.0), qsas.heisenberg(1, [[0.0]]), kenmotsu_model(1)],
                         ids=["tanaka", "cosymplectic", "kenmotsu"])
def test_closed_form_specializations(S):
    rep = par.specialization_check(S, S.sample(20))
    assert rep.passed and any(c.verdict == "pass" for c in rep.checks)


def test_torsion_conditions_identify_tanaka_connection():
    S = qsas.alpha_sasakian(2, 1.0)
    conn = par.build_tanaka_like(S, S.sample(20))
    assert par.torsion_conditions(conn).passed
    shifted = conn.with_difference(par.admissible_generator(conn.loc))
    assert par.verify_parallel(shifted).passed
    assert not par.torsion_conditions(shifted).passed


def test_difference_tensor_properties():
    S = qsas.alpha_sasakian(1, 1.0)
    conn = par.build_tanaka_like(S, S.sample(20))
    ok = conn.with_difference(par.admissible_generator(conn.loc, seed=3))
    assert par.difference_tensor_check(conn, ok).passed
    bad = conn.with_difference(par.admissible_generator(conn.loc, break_reeb=True))
    assert bad.loc is conn.loc
    assert par.difference_tensor_check(conn, bad)["T_X xi = 0"].verdict == "fail"


def test_torsion_hypothesis_label_when_fundamental_form_not_closed():
    S = kenmotsu_model(1)
    rep = par.torsion_conditions(par.build_tanaka_like(S, S.sample(10)))
    assert "hypothesis not met" in rep.labels.get("hypothesis", "")
