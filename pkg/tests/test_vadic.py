import math
import random

import pytest

from ffzeta.fields import FieldSpec, ZpExp, lq_digit_sum
from ffzeta.polyring import APoly, MPoly, enumerate_monic
from ffzeta.padic import PadicCtx
from ffzeta.seriesinf import LaurentSeries, PrecisionError
from ffzeta.zeta import exact_L, pellarin_L_series, power_sum
from ffzeta.vadic import (VadicPoint, vadic_exact_L, vadic_zeta_eval, mk_sequence,
                          interpolation_gap, interpolation_gap_bound,
                          prime_to_p_power_sum, vadic_degree_bound,
                          _LocalRing, _power_sum_mod)

F2 = FieldSpec.default(2)
F3 = FieldSpec.default(3)
TH2 = APoly.theta(F2)
TH3 = APoly.theta(F3)


# -- exact v-adic polynomials -------------------------------------------------


def test_vadic_exact_L_fixtures():
    L0 = vadic_exact_L(F2, 0, 0, TH2)
    assert [(e, c.coeff_codes) for e, c in L0.sorted_terms()] == [((0,), (1,)), ((1,), (1,))]
    L1 = vadic_exact_L(F2, -1, 0, TH2)
    assert [(e, c.coeff_codes) for e, c in L1.sorted_terms()] == \
        [((0,), (1,)), ((1,), (1, 1)), ((2,), (0, 1))]
    with pytest.raises(ValueError):
        vadic_exact_L(F2, 1, 0, TH2)
    with pytest.raises(ValueError):
        vadic_exact_L(F2, 0, 0, APoly(F2, (0, 0, 1)))


def test_euler_factor_identity_exact():
    for spec, Pcs in ((F2, [(0, 1), (1, 1), (1, 1, 1), (1, 1, 0, 1)]),
                      (F3, [(0, 1), (2, 1), (1, 0, 1), (1, 2, 0, 1)])):
        for Pc in Pcs:
            P = APoly(spec, Pc)
            for n in range(-10, 1):
                lhs = vadic_exact_L(spec, n, 0, P)
                factor = MPoly(("z",), {(0,): APoly.one(spec),
                                        (P.degree,): -(P ** (-n))})
                assert lhs == factor * exact_L(spec, n, 0)


def test_euler_factor_identity_with_t_variables():
    # the P-divisible part evaluates as (Pb)(t) = P(t) b(t), so the
    # bijection factor picks up P(t_1): L_P = (1 - P(t_1) P^(-n) z^dP) L
    P = APoly(F2, (1, 1))
    for n in (0, -1, -2):
        lhs = vadic_exact_L(F2, n, 1, P)
        L = exact_L(F2, n, 1)
        terms = {(0, 0): APoly.one(F2)}
        for j, c in enumerate(P.coeff_codes):
            if c:
                terms[(j, P.degree)] = -(P ** (-n)).scale_code(c)
        factor = MPoly(("t1", "z"), terms)
        assert lhs == factor * L


def test_euler_identity_numeric_positive_exponents():
    # coefficientwise: [z^D] L_P = [z^D] L - P^(-n) [z^(D-dP)] L
    prec = 40
    for spec, Pcs in ((F2, [(0, 1), (1, 1, 1)]), (F3, [(0, 1), (1, 0, 1)])):
        for Pc in Pcs:
            P = APoly(spec, Pc)
            dP = P.degree
            for n in (1, 2, 3):
                full = pellarin_L_series(spec, n, 0, 6, prec)
                Pinv = LaurentSeries.from_apoly(P, prec + 10).inverse() ** n
                for D in range(7):
                    restricted = LaurentSeries.zero(spec, prec)
                    for a in enumerate_monic(spec, D):
                        if (a % P).is_zero():
                            continue
                        restricted = restricted + \
                            (LaurentSeries.from_apoly(a, prec + 10).inverse() ** n).truncate(prec)
                    rhs = full.terms.get((D,), LaurentSeries.zero(spec, prec))
                    if D >= dP:
                        shifted = full.terms.get((D - dP,), LaurentSeries.zero(spec, prec))
                        rhs = rhs - Pinv * shifted
                    assert restricted.agrees_with(rhs, prec=min(prec, restricted.prec, rhs.prec))


def test_vadic_degree_bound_observed():
    for spec, Pc in ((F2, (1, 1, 1)), (F3, (0, 1))):
        P = APoly(spec, Pc)
        for n in range(-6, 1):
            for s in (0, 1):
                L = vadic_exact_L(spec, n, s, P)
                bound = vadic_degree_bound(spec, n, s, P.degree)
                assert L.degree_in("z") <= bound
                # the first shell beyond the bound vanishes by enumeration
                if s == 0:
                    shell = APoly.zero(spec)
                    for a in enumerate_monic(spec, bound + 1):
                        if not (a % P).is_zero():
                            shell = shell + a ** (-n)
                    assert shell.is_zero()


# -- v-adic evaluation -----------------------------------------------------------


def test_vadic_zeta_eval_definitional_y0():
    ctx = PadicCtx(TH2, 2)
    ptv = VadicPoint(ctx, ZpExp.from_int(0, 2, 3), 0, 4)
    Z = vadic_zeta_eval(ptv)
    ref = vadic_exact_L(F2, 0, 0, TH2)
    for d in range(5):
        got = Z.terms.get((d,))
        want = ref.terms.get((d,))
        if want is None:
            assert got is None or got.is_zero()
        else:
            assert got == ctx.reduce(want)


def test_vadic_zeta_eval_cross_path():
    # integer exponent y = -n with delta = -n mod q^dP - 1 matches the
    # exact polynomial reduced mod P^k
    cases = [(F2, TH2, 2, 1), (F2, APoly(F2, (1, 1, 1)), 2, 1),
             (F3, TH3, 3, 2), (F3, APoly(F3, (1, 0, 1)), 2, 1)]
    for spec, P, k, n in cases:
        ctx = PadicCtx(P, k)
        order = ctx.residue_order()
        delta = (n % order) if order > 1 else 0
        M = 1
        while spec.p ** M < k:
            M += 1
        ptv = VadicPoint(ctx, ZpExp.from_int(n, spec.p, M + 2), delta,
                         vadic_degree_bound(spec, -n, 0, P.degree) + 1)
        Z = vadic_zeta_eval(ptv)
        ref = vadic_exact_L(spec, -n, 0, P)
        for d in range(ptv.zdeg + 1):
            want = ref.terms.get((d,))
            got = Z.terms.get((d,), ctx.zero())
            assert got == (ctx.reduce(want) if want is not None else ctx.zero())


def test_vadic_zeta_eval_fixture_mod_theta_sq():
    ctx = PadicCtx(TH2, 2)
    ptv = VadicPoint(ctx, ZpExp.from_int(1, 2, 3), 1, 2)
    Z = vadic_zeta_eval(ptv)
    assert [(e, c.rep.coeff_codes) for e, c in Z.sorted_terms()] == \
        [((0,), (1,)), ((1,), (1, 1)), ((2,), (0, 1))]


def test_vadic_zeta_eval_requires_digits():
    ctx = PadicCtx(TH2, 4)
    with pytest.raises(PrecisionError):
        VadicPoint(ctx, ZpExp(2, (1,)), 0, 2)


def test_vadic_coefficient_valuations_grow():
    # entirety: coefficient v_P grows without bound (monotone after dP + 3)
    for spec, P in ((F2, TH2), (F3, TH3)):
        k = 14
        ctx = PadicCtx(P, k)
        rng = random.Random(spec.q)
        digits = [rng.randrange(spec.p) for _ in range(10)]
        ptv = VadicPoint(ctx, ZpExp(spec.p, digits), 1, 7)
        Z = vadic_zeta_eval(ptv)
        vals = []
        for d in range(P.degree + 3, 8):
            coeff = Z.terms.get((d,))
            vals.append(coeff.vP() if coeff is not None else k)
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        assert vals[-1] > vals[0] or vals[0] >= k


# -- interpolation sequence -------------------------------------------------------


def test_mk_sequence_fixtures():
    assert mk_sequence(0, 0, 1, 2) == -2
    mk = mk_sequence(-5, 1, 1, 3)
    assert mk == -23
    # all four conditions, re-checked here for a sample of targets
    for q, dP in ((2, 1), (2, 2), (3, 1), (3, 2)):
        for k in range(4):
            for n1 in range(-6, 7):
                m = mk_sequence(n1, k, dP, q)
                neg = -m
                assert (neg + n1) % q ** (k + 1) == 0
                if q ** dP > 2:
                    assert (neg + n1) % (q ** dP - 1) == 0
                assert lq_digit_sum(neg, q) <= (k + 1 + dP) * (q - 1)
                assert neg >= q ** (k + 1)


def test_mk_sequence_zpexp_input():
    y = ZpExp.from_int(5, 2, 6)  # digits of -n_1 = 5, so n_1 = -5
    assert mk_sequence(y, 1, 1, 2) == mk_sequence(-5, 1, 1, 2)
    with pytest.raises(PrecisionError):
        mk_sequence(ZpExp(2, (1,)), 3, 1, 2)


def test_mk_digit_sums_can_exceed_the_naive_cap():
    # lq(-m_k) genuinely needs the k+1+dP allowance: with all prefix
    # digits nonzero no admissible m_k stays within (k+dP)(q-1)
    mk = mk_sequence(1, 1, 1, 2)   # -n_1 = -1, prefix digits all ones
    assert lq_digit_sum(-mk, 2) == 3 > (1 + 1) * 1


def test_power_sum_mod_matches_exact():
    for spec, P in ((F2, TH2), (F3, APoly(F3, (1, 0, 1)))):
        ring = _LocalRing(spec, P, 6)
        memo = {}
        mod = P ** 6
        for d in range(4):
            for n in (0, 1, 3, 7, 12):
                got = _power_sum_mod(spec, ring, d, n, memo)
                got_poly = APoly(spec, ring.kernel.to_codes(ring.kernel.normalize(got)))
                assert got_poly == power_sum(spec, d, n) % mod


def test_mk_limit_stabilizes_vadic_values():
    # the v-adic series coefficients agree with the m_k polynomial route
    # to q^(k+1) digits, so growing k realizes the interpolation limit
    for spec, P in ((F2, TH2), (F3, TH3)):
        p, q = spec.p, spec.q
        for n1 in (1, 2):
            order = q ** P.degree - 1
            for k in (0, 1, 2):
                mk = mk_sequence(n1, k, P.degree, q)
                agree = q ** (k + 1)
                K = agree + 3
                M = 1
                while p ** M < K:
                    M += 1
                ctx = PadicCtx(P, K)
                # the target is a^(-n1) = omega^(-n1) <a>^(-n1)
                ptv = VadicPoint(ctx, ZpExp.from_int(-n1, p, M + 4),
                                 ((-n1) % order) if order > 1 else 0,
                                 k + P.degree + 1)
                Z = vadic_zeta_eval(ptv)
                for d in range(k + P.degree + 2):
                    poly_coeff = ctx.reduce(power_sum(spec, d, -mk))
                    got = Z.terms.get((d,), ctx.zero())
                    assert (got - poly_coeff).vP() >= agree, (spec.q, n1, k, d)


def test_interpolation_gap_examples():
    g = interpolation_gap(F2, (1,), TH2, 1)
    assert g >= 4  # q^(k+1) with empty subtrahend term
    g2 = interpolation_gap(F2, (1, -1), TH2, 1)
    assert g2 >= interpolation_gap_bound(F2, (1, -1), 1, 1) == 4 - 1 * 2
    # exact case: m_k admissible for n_1 <= 0 can make the difference vanish
    g3 = interpolation_gap(F2, (-2,), TH2, 0)
    assert g3 >= 2


def test_interpolation_gap_infinite_when_difference_empty():
    # by construction -m_k != -n_1 as integers; measured gaps are finite
    # in general but always certified, and inf is the exact-difference flag
    g = interpolation_gap(F2, (0,), TH2, 1)
    assert g == math.inf or g >= 4


def test_local_ring_arithmetic():
    ring = _LocalRing(F2, TH2, 8)
    a = ring.from_apoly(APoly(F2, (1, 1)))
    b = ring.inv_power(APoly(F2, (0, 1, 1)), 2)  # (theta(theta+1))^-2
    prod = a * b
    assert prod.valuation() == -2
    s = a + (-a)
    assert s.valuation() is None
    # (theta + 1)^-2 * (theta+1)^2 = 1
    c = ring.inv_power(APoly(F2, (1, 1)), 2)
    d = ring.from_apoly(APoly(F2, (1, 1)) ** 2)
    unit = c * d
    one = ring.one()
    assert (unit + (-one)).valuation() is None


def test_prime_to_p_power_sum_bijection_identity():
    # splitting off the P-divisible part: S_d = Sv_d + P^n S_(d-dP)
    for spec, P in ((F2, TH2), (F2, APoly(F2, (1, 1, 1))), (F3, TH3)):
        dP = P.degree
        for d in range(0, 5):
            for n in range(0, 5):
                full = power_sum(spec, d, n)
                sv = prime_to_p_power_sum(spec, d, n, P)
                divisible = (P ** n) * power_sum(spec, d - dP, n) if d >= dP \
                    else APoly.zero(spec)
                assert full == sv + divisible
