"""Brute-force verifiers for the vanishing results.

charsum_trial evaluates sum_w prod_i (x_i + f_i(w)) over an F_p vector
space W by full enumeration; the sum vanishes whenever
dim W > r / (p-1), and sharpness witnesses exist right at the
threshold.  threshold_scan sweeps the concrete vanishing claims
(plain, twisted and character power sums) against enumeration and
reports any row where a bound predicts zero but the value is not:
such a row is a failure of the build, not of the scan.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from .fields import FieldSpec, FqElem, ResidueChar, lq_digit_sum
from ._kernels import get_kernel
from .polyring import APoly, MPoly, enumerate_monic, monic_coeff_vectors
from .zeta import power_sum, twisted_power_sum, char_power_sum, TwistFactor

ENUMERATION_BUDGET = 10 ** 7


@dataclass(frozen=True)
class CharsumConfig:
    """Data for one character-sum trial.

    maps[i] is an F_p matrix with `dim` columns sending w to the target:
    rows are F_p coordinates of the target field (or coefficients of the
    symbolic basis when `basis` is given); offsets live in the target.
    """

    p: int
    dim: int
    target: FieldSpec
    maps: tuple
    offsets: tuple
    basis: tuple | None = None  # MPoly basis for symbolic targets

    @property
    def r(self) -> int:
        return len(self.maps)

    def __post_init__(self):
        if self.target.p != self.p:
            raise ValueError("target characteristic differs from p")
        rows = len(self.basis) if self.basis is not None else self.target.e
        for m in self.maps:
            if any(len(row) != self.dim for row in m):
                raise ValueError("map matrices need dim-W columns")
            if len(m) != rows:
                raise ValueError(f"map matrices need {rows} rows for this target")

    def predicted_zero(self) -> bool:
        return self.dim * (self.p - 1) > self.r


def charsum_trial(cfg: CharsumConfig):
    """sum_w prod_i (x_i + f_i(w)) by full enumeration of W = F_p^dim."""
    if cfg.p ** cfg.dim > ENUMERATION_BUDGET:
        raise ValueError(
            f"p^dim = {cfg.p ** cfg.dim} exceeds the enumeration budget {ENUMERATION_BUDGET}")
    if cfg.basis is not None:
        return _charsum_symbolic(cfg)
    return _charsum_field(cfg)


def _charsum_field(cfg: CharsumConfig) -> FqElem:
    spec = cfg.target
    p = cfg.p
    n = p ** cfg.dim
    W = np.array(list(itertools.product(range(p), repeat=cfg.dim)), dtype=np.int64)
    add_t = np.array(spec.add_table, dtype=np.int64)
    mul_t = np.array(spec.mul_table, dtype=np.int64)
    powers = np.array([p ** i for i in range(spec.e)], dtype=np.int64)
    prod = np.ones(n, dtype=np.int64)
    for m, x in zip(cfg.maps, cfg.offsets):
        coords = (W @ np.array(m, dtype=np.int64).T) % p
        codes = coords @ powers
        codes = add_t[x.code, codes]
        prod = mul_t[prod, codes]
    while len(prod) > 1:
        if len(prod) % 2:
            prod = np.concatenate([prod, [0]])
        prod = add_t[prod[0::2], prod[1::2]]
    return FqElem(spec, int(prod[0]))


def _charsum_symbolic(cfg: CharsumConfig) -> MPoly:
    spec = cfg.target
    p = cfg.p
    names = cfg.offsets[0].vars if cfg.offsets else cfg.basis[0].vars
    total = MPoly.zero(names)
    for w in itertools.product(range(p), repeat=cfg.dim):
        prod = MPoly.const(names, FqElem(spec, 1))
        for m, x in zip(cfg.maps, cfg.offsets):
            value = x
            for row, b in zip(m, cfg.basis):
                c = sum(rc * wc for rc, wc in zip(row, w)) % p
                if c:
                    value = value + b.scale(FqElem(spec, c % spec.p))
            prod = prod * value
            if prod.is_zero():
                break
        total = total + prod
    return total


def random_charsum_config(rng: random.Random, p: int, dim: int, r: int,
                          target: FieldSpec | None = None,
                          basis=None) -> CharsumConfig:
    """Uniform matrices over F_p; offsets uniform in the target."""
    target = target or FieldSpec.default(p)
    rows = len(basis) if basis is not None else target.e
    maps = tuple(tuple(tuple(rng.randrange(p) for _ in range(dim)) for _ in range(rows))
                 for _ in range(r))
    if basis is not None:
        names = basis[0].vars
        offsets = tuple(MPoly.const(names, FqElem(target, rng.randrange(target.q)))
                        for _ in range(r))
    else:
        offsets = tuple(FqElem(target, rng.randrange(target.q)) for _ in range(r))
    return CharsumConfig(p, dim, target, maps, offsets, basis)


# ---------------------------------------------------------------------------
# enumeration-based power sums (the oracle side of the dual route)


def enumerated_power_sum(spec: FieldSpec, d: int, n: int) -> APoly:
    """S_d(n) by plain enumeration of the q^d monic polynomials."""
    kernel = get_kernel(spec)
    total = kernel.zero()
    for vec in monic_coeff_vectors(spec, d):
        total = kernel.add(total, kernel.pow(kernel.from_codes(vec + (1,)), n))
    return APoly(spec, kernel.to_codes(kernel.normalize(total)))


# ---------------------------------------------------------------------------
# threshold scans


def threshold_scan(kind: str, *, spec: FieldSpec | None = None, d_max: int = 4,
                   n_max: int = 32, s_max: int = 4, P: APoly | None = None,
                   delta: int = 1, budget: int = ENUMERATION_BUDGET,
                   compare_fast_path: bool = True) -> dict:
    """Sweep one family of vanishing claims and report every cell.

    Rows record (parameters, observed zero, predicted by the bound);
    a predicted-but-nonzero row is a violation and lands in the
    report's `violations` list.  Cells beyond the enumeration budget
    are skipped and the report is flagged incomplete.
    """
    if kind == "powersum":
        return _scan_powersum(spec, d_max, n_max, budget, compare_fast_path)
    if kind == "twisted":
        return _scan_twisted(spec, d_max, s_max, budget)
    if kind == "char":
        if P is None:
            raise ValueError("char scan needs P")
        return _scan_char(spec, P, delta, d_max, budget)
    raise ValueError(f"unknown scan kind {kind!r}")


def _scan_powersum(spec, d_max, n_max, budget, compare_fast_path):
    rows = []
    violations = []
    mismatches = []
    complete = True
    q = spec.q
    for d in range(d_max + 1):
        if q ** d * max(n_max, 1) > budget:
            complete = False
            continue
        for n in range(n_max + 1):
            value = enumerated_power_sum(spec, d, n)
            zero = value.is_zero()
            predicted = d * (q - 1) > lq_digit_sum(n, q)
            rows.append({"q": q, "d": d, "n": n, "zero": zero, "predicted": predicted})
            if predicted and not zero:
                violations.append(rows[-1])
            if compare_fast_path and power_sum(spec, d, n) != value:
                mismatches.append({"q": q, "d": d, "n": n})
    report = {"kind": "powersum", "q": q, "rows": rows, "violations": violations,
              "fast_path_mismatches": mismatches, "complete": complete}
    report["observed_thresholds"] = _sharp_thresholds(rows, key="n")
    return report


def _scan_twisted(spec, d_max, s_max, budget):
    rows = []
    violations = []
    complete = True
    q = spec.q
    for s in range(s_max + 1):
        factors = [TwistFactor("finite") for _ in range(s)]
        for d in range(d_max + 1):
            if q ** d * (d + 1) ** s > budget:
                complete = False
                continue
            value = twisted_power_sum(spec, d, factors)
            zero = value.is_zero()
            predicted = d * (q - 1) > s
            rows.append({"q": q, "s": s, "d": d, "zero": zero, "predicted": predicted})
            if predicted and not zero:
                violations.append(rows[-1])
    return {"kind": "twisted", "q": q, "rows": rows, "violations": violations,
            "complete": complete}


def _scan_char(spec, P, delta, d_max, budget):
    chi = ResidueChar(spec, P.coeff_codes, delta)
    rows = []
    violations = []
    complete = True
    q = spec.q
    bound = P.degree + 1
    for d in range(d_max + 1):
        if q ** d > budget:
            complete = False
            continue
        value = char_power_sum(spec, d, chi, 0)
        zero = not value
        predicted = d >= bound
        rows.append({"q": q, "dP": P.degree, "delta": chi.delta, "d": d,
                     "zero": zero, "predicted": predicted})
        if predicted and not zero:
            violations.append(rows[-1])
    observed = max((r["d"] for r in rows if not r["zero"]), default=-1) + 1
    return {"kind": "char", "q": q, "rows": rows, "violations": violations,
            "complete": complete, "observed_threshold": observed, "bound": bound}


def _sharp_thresholds(rows, key):
    """Per remaining parameters, the first grid point where zeros set in."""
    out = {}
    groups = {}
    for r in rows:
        g = tuple((k, v) for k, v in r.items() if k not in (key, "zero", "predicted"))
        groups.setdefault(g, []).append(r)
    for g, rs in groups.items():
        nonzero = [r[key] for r in rs if not r["zero"]]
        out[str(dict(g))] = (max(nonzero) + 1) if nonzero else 0
    return out
