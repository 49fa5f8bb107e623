import numpy as np
import pytest

from etanormal import apcm
from etanormal.models import (kappa_mu_candidate, para_kenmotsu, para_sasakian, paracontact_sl2,
                              perturbed_apcm)


def test_para_sasakian_model_is_certified():
    S = para_sasakian(1)
    loc = S.at(S.sample(50))
    assert apcm.validate_apcm(S, loc=loc).passed
    assert np.max(np.abs(loc.dtau.val - loc.Psi.val)) < 1e-12
    assert np.max(np.abs(loc.K1)) < 1e-12
    assert "para-Sasakian" in apcm.para_class_check(S, loc=loc).labels["classes"]


@pytest.mark.parametrize("factory, cls", [(para_kenmotsu, "para-Kenmotsu"),
                                          (apcm.flat_para_cosymplectic, "para-cosymplectic"),
                                          (para_sasakian, "para-Sasakian")])
@pytest.mark.parametrize("n", [1, 2])
def test_para_classes(factory, cls, n):
    S = factory(n)
    rep = apcm.para_class_check(S, S.sample(20))
    assert cls in rep.labels["classes"] and rep.passed


def test_eigendistributions_are_isotropic_and_projectors_sum_to_identity():
    S = perturbed_apcm(2, 4)
    loc = S.at(S.sample(20))
    rep = apcm.validate_apcm(S, loc=loc)
    assert rep["isotropic"].ok and rep["eigenvalues"].ok
    Pp, Pm = loc.projectors
    xi_tau = np.einsum("...i,...j->...ij", loc.zeta.val, loc.tau.val)
    assert np.max(np.abs(Pp.val + Pm.val + xi_tau - np.eye(5))) < 1e-12


@pytest.mark.parametrize("seed", range(3))
def test_unconditional_para_identities_on_perturbations(seed):
    S = perturbed_apcm(2, seed)
    loc = S.at(S.sample(30))
    rep = apcm.identity_suite(S, loc=loc)
    assert rep["pfi"].max_residual < 1e-9
    assert apcm.product_nijenhuis_check(S, loc=loc).passed


def test_pfi_coefficient_variant_is_rejected():
    S = perturbed_apcm(2, 0)
    loc = S.at(S.sample(20))
    X, Y, Z = apcm._vectors(loc, 42)
    good = np.max(np.abs(apcm.pfi_residual(loc, X, Y, Z, coefficient=2.0)))
    bad = np.max(np.abs(apcm.pfi_residual(loc, X, Y, Z, coefficient=1.0)))
    assert good < 1e-9 < 1e-3 < bad


def test_non_normal_perturbation_fails_all_three_criteria():
    S = perturbed_apcm(2, 6)
    rep = apcm.normality_report(S, S.sample(30))
    assert (rep.labels["tau_normal"], rep.labels["para_CR"], rep.labels["crpfi"]) == (False, False, False)
    assert rep["equivalence"].ok


@pytest.mark.parametrize("S", [kappa_mu_candidate(0.5), paracontact_sl2()], ids=["kappa-mu", "sl2"])
def test_constructed_paracontact_models_validate(S):
    loc = S.at(S.sample(30))
    assert apcm.validate_apcm(S, loc=loc).passed
    assert np.max(np.abs(loc.dtau.val - loc.Psi.val)) < 1e-12
