"""Exact zeta objects over A = F_q[theta].

Power sums over monic polynomials, Goss zeta polynomials and their
Pellarin deformations, evaluation at p-adic exponents at the infinite
place, v-adic interpolation at finite places, and multiple zeta
polynomials, all in exact arithmetic with certified truncation.
"""

from .fields import FieldSpec, FqElem, ZpExp, ResidueChar, frobenius, lq_digit_sum, binom_mod_p, char_eval
from .polyring import APoly, MPoly, enumerate_monic, frobenius_twist, hyperderivative, is_irreducible
from .seriesinf import LaurentSeries, PrecisionError, decompose, one_unit_pow
from .padic import PadicCtx, PadicElem, teichmuller, padic_bracket, padic_one_unit_pow
from .zeta import (SInftyPoint, TwistFactor, PowerSumCache, power_sum,
                   twisted_power_sum, char_power_sum, exact_L, pellarin_L_series,
                   goss_zeta_eval, twisted_L_eval)
from .vadic import (VadicPoint, vadic_exact_L, vadic_zeta_eval, mk_sequence,
                    interpolation_gap, interpolation_gap_bound)
from .mzv import MzvIndex, mzv_exact, mzv_vadic_exact, mzv_eval_inf
from .oracle import CharsumConfig, charsum_trial, threshold_scan

__all__ = [
    "FieldSpec", "FqElem", "ZpExp", "ResidueChar", "frobenius",
    "lq_digit_sum", "binom_mod_p", "char_eval",
    "APoly", "MPoly", "enumerate_monic", "frobenius_twist",
    "hyperderivative", "is_irreducible",
    "LaurentSeries", "PrecisionError", "decompose", "one_unit_pow",
    "PadicCtx", "PadicElem", "teichmuller", "padic_bracket", "padic_one_unit_pow",
    "SInftyPoint", "TwistFactor", "PowerSumCache", "power_sum",
    "twisted_power_sum", "char_power_sum", "exact_L", "pellarin_L_series",
    "goss_zeta_eval", "twisted_L_eval",
    "VadicPoint", "vadic_exact_L", "vadic_zeta_eval", "mk_sequence",
    "interpolation_gap", "interpolation_gap_bound",
    "MzvIndex", "mzv_exact", "mzv_vadic_exact", "mzv_eval_inf",
    "CharsumConfig", "charsum_trial", "threshold_scan",
]

__version__ = "0.1.0"
