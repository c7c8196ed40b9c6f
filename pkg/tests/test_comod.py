"""Coactions on bimodule word spaces and squeeze-certified coinvariants."""

from fractions import Fraction

import pytest

from coinv.comod import (
    CoactionContext,
    CoinvariantOvercountError,
    certify_fft,
    coinvariance_residual,
    coinvariants,
    off_diagonal_vanish,
    subalgebra_check,
    theta_image_vectors,
)
from coinv.freealg import theta
from coinv.hopf import FMatrix

Q = Fraction


@pytest.fixture
def ctx221():
    return CoactionContext(2, 2, 1, FMatrix.identity(1))


@pytest.fixture
def ctx212j():
    return CoactionContext(2, 1, 2, FMatrix.jordan(2))


def test_context_validation():
    with pytest.raises(ValueError):
        CoactionContext(0, 1, 1, FMatrix.identity(1))


def test_rho_and_lambda_on_generators(ctx212j):
    h = ctx212j.hopf
    amt, atn = ctx212j.amt, ctx212j.atn
    img = ctx212j.rho_gen(0, 1)
    # rho(y_01) = sum_k y_0k (x) u_k1
    assert img.coeff((amt.letter("y", 0, 0),), (h.algebra.letter("u", 0, 1),)) == 1
    assert img.coeff((amt.letter("y", 0, 1),), (h.algebra.letter("u", 1, 1),)) == 1
    img = ctx212j.lam_gen(1, 0)
    # lambda(z_10) = sum_k u_1k (x) z_k0
    assert img.coeff((h.algebra.letter("u", 1, 0),), (atn.letter("z", 0, 0),)) == 1
    assert img.coeff((h.algebra.letter("u", 1, 1),), (atn.letter("z", 1, 0),)) == 1


def test_flipped_coaction_two_code_paths_agree(ctx212j):
    for i in range(2):
        for j in range(2):
            assert ctx212j.flip_gen(i, j) == ctx212j.flip_gen_via_antipode(i, j)


def test_flipped_coaction_uses_v_matrix(ctx212j):
    h = ctx212j.hopf
    amt = ctx212j.amt
    img = ctx212j.flip_gen(0, 1)
    # flipped rho(y_01) = sum_k v_1k (x) y_0k
    assert img.coeff((h.algebra.letter("v", 1, 0),), (amt.letter("y", 0, 0),)) == 1
    assert img.coeff((h.algebra.letter("v", 1, 1),), (amt.letter("y", 0, 1),)) == 1


def test_tensor_coaction_h_legs_are_v_then_u(ctx212j):
    alg = ctx212j.hopf.algebra
    wa = (ctx212j.amt.letter("y", 0, 0), ctx212j.amt.letter("y", 1, 1))
    wb = (ctx212j.atn.letter("z", 0, 0), ctx212j.atn.letter("z", 1, 0))
    for hw, _, _ in ctx212j.tensor_word_terms(wa, wb):
        assert len(hw) == 4
        names = [alg.letter_info(letter)[0] for letter in hw]
        assert names == ["v", "v", "u", "u"]


def test_pair_basis_round_trip(ctx221):
    basis = ctx221.pair_basis((1, 1))
    assert len(basis) == 4
    x = ctx221.element_from_coords((1, 1), {0: Q(1), 3: Q(-2)})
    assert ctx221.bidegree_of(x) == (1, 1)
    assert x.coeff(*basis[0]) == 1
    assert x.coeff(*basis[3]) == -2


def test_coinvariants_dimension_balanced(ctx221):
    assert coinvariants(ctx221, (1, 1), 4).dim == 4
    assert coinvariants(ctx221, (2, 2), 6).dim == 16


def test_coinvariants_rejects_low_truncation(ctx221):
    with pytest.raises(ValueError):
        coinvariants(ctx221, (2, 2), 3)


def test_theta_image_inside_computed_space(ctx212j):
    V = coinvariants(ctx212j, (1, 1), 4)
    vecs = theta_image_vectors(ctx212j, 1)
    for vec in vecs:
        assert V.contains(vec)


def test_theta_image_is_coinvariant_exactly(ctx212j):
    hom = theta(2, 1, 2, left=ctx212j.amt, right=ctx212j.atn)
    img = hom.apply_word((hom.source.letter("x", 1, 0),))
    assert coinvariance_residual(ctx212j, img, 4) == {}


def test_bare_pair_is_not_coinvariant(ctx212j):
    x = ctx212j.element_from_coords((1, 1), {0: Q(1)})
    residual = coinvariance_residual(ctx212j, x, 4)
    assert residual


def test_off_diagonal_vanishing_certificates():
    for bidegree in [(1, 0), (0, 1), (2, 1), (1, 3), (4, 2)]:
        cert = off_diagonal_vanish(2, 2, 2, bidegree, FMatrix.jordan(2))
        assert cert.holds
        assert cert.exponent == bidegree[1] - bidegree[0]


def test_off_diagonal_rejects_balanced_bidegree():
    with pytest.raises(ValueError):
        off_diagonal_vanish(2, 2, 1, (2, 2))


def test_off_diagonal_computed_space_is_zero(ctx221):
    assert coinvariants(ctx221, (2, 1), 5).dim == 0


def test_certify_fft_squeeze(ctx221):
    rep = certify_fft(ctx221, 2, 6)
    assert rep.certified
    assert rep.dim_coinv == rep.theta_rank == 16
    assert rep.image_contained
    assert rep.witness_degree == 6


def test_certify_fft_nontrivial_f():
    ctx = CoactionContext(1, 1, 2, FMatrix.diagonal([1, 2]))
    rep = certify_fft(ctx, 2, 6)
    assert rep.certified
    assert rep.dim_coinv == 1


def test_certify_fft_rejects_low_truncation(ctx221):
    with pytest.raises(ValueError):
        certify_fft(ctx221, 2, 3)


def test_subalgebra_products_stay_coinvariant(ctx221):
    rep = subalgebra_check(ctx221, samples=12, seed=3)
    assert rep.certified
    assert rep.failures == 0
    assert len(rep.samples) == 12


def test_subalgebra_report_records_bidegrees(ctx221):
    rep = subalgebra_check(ctx221, samples=4, seed=1)
    for s in rep.samples:
        (p, _), (q, _) = s.left_bidegree, s.right_bidegree
        assert s.product_bidegree == (p + q, p + q)
