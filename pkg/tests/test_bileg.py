import numpy as np
import pytest

from etanormal import apcm, bileg
from etanormal.models import kappa_mu_candidate, para_sasakian, paracontact_sl2, rescale_reeb


def test_reeb_field_of_contact_form():
    S = para_sasakian(1)
    loc = S.at(S.sample(20))
    assert bileg.is_contact(loc)
    np.testing.assert_allclose(bileg.reeb_field(S, loc=loc), loc.zeta.val, atol=1e-12)


def test_reeb_undefined_for_closed_form():
    S = apcm.flat_para_cosymplectic(1)
    loc = S.at(S.sample(5))
    assert not bileg.is_contact(loc)
    with pytest.raises(bileg.ReebUndefinedError):
        bileg.reeb_field(S, loc=loc)


def test_reeb_equivalences_fail_together_after_rescaling():
    S = para_sasakian(1)
    T = rescale_reeb(S, S.chart.parse("1 + 0.1*z"))
    rep = bileg.reeb_equivalences(T, T.sample(20))
    verdicts = {rep[c].verdict for c in ("R=zeta", "L_zeta tau", "nabla_zeta zeta", "h psi")}
    assert verdicts == {"fail"} and rep["agreement"].ok


@pytest.mark.parametrize("S, label", [(para_sasakian(1), "flat"), (para_sasakian(2), "flat"),
                                      (kappa_mu_candidate(0.5), "semi_flat_minus"),
                                      (paracontact_sl2(), "non_flat")],
                         ids=["ps3", "ps5", "kappa-mu", "sl2"])
def test_flatness_classes(S, label):
    rep = bileg.flatness(S, S.sample(20))
    assert rep.labels["flatness"] == label and rep.passed


def test_pang_matches_bracket_definition():
    S = kappa_mu_candidate(0.5)
    loc = S.at(S.sample(10))
    rep = bileg.pang_report(S, loc=loc)
    assert rep.passed
    # the negative invariant vanishes, the positive one does not
    assert np.max(np.abs(bileg.pang_matrix(loc, -1))) < 1e-10
    assert np.max(np.abs(bileg.pang_matrix(loc, +1))) > 1e-3


@pytest.mark.parametrize("mu", [0.0, 0.5, 2.0])
def test_kappa_mu_fit_recovers_parameter(mu):
    S = kappa_mu_candidate(mu)
    kappa, fitted = bileg.fit_kappa_mu(S, S.sample(20), kappa=-1.0)
    assert fitted == pytest.approx(mu, abs=1e-9)
    assert bileg.kappa_mu_report(S, kappa=-1.0, points=S.sample(20)).passed


def test_sl2_model_is_kappa_mu_space():
    S = paracontact_sl2()
    kappa, mu = bileg.fit_kappa_mu(S, S.sample(20))
    assert (kappa, mu) == pytest.approx((-2.0, 2.0), abs=1e-9)
    curv, _ = bileg.kappa_mu_residual(S, kappa, mu, S.sample(20))
    assert curv < 1e-9


def test_chi_properties():
    for S in (kappa_mu_candidate(0.5), paracontact_sl2()):
        assert bileg.chi_properties(S, S.sample(20)).passed
