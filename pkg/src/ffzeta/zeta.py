"""Zeta objects at the infinite place.

Power sums S_d(n) = sum of a^n over the q^d monic polynomials of
degree d drive everything here: they vanish once d(q-1) exceeds the
base-q digit sum of n, which makes the zeta polynomials finite and
gives computable tail bounds for evaluation at p-adic exponents.

S_d(n) is computed by the degree recursion obtained from the bijection
a = theta*b + c (b monic of degree d-1, c in F_q):

    S_d(n) = - sum_{k} C(n, k) theta^k S_{d-1}(k)

over k < n with C(n, k) nonzero mod p and (q-1) | n - k, with
S_0(n) = 1.  The recursion is cross-checked against plain enumeration
by the scan oracle and the test suite, and results are cached on disk.

Evaluation at a p-adic exponent y truncates the shell sum using the
digit certificate: cutting the base-q digits of the exponent at level
l changes one-unit powers by at most pi^(q^(l+1)), and the truncated
exponent has digit sum at most (l+1)(q-1)+1, so the inner sum vanishes
once d(q-1) > (l+1)(q-1)+1.  Taking l+1 = d-2 certifies
v(c_d) >= q^(d-2) for d >= 2; the test suite re-validates this bound
against brute force before it is trusted.
"""

from __future__ import annotations

import fcntl
import hashlib
import itertools
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import fields
from ._kernels import get_kernel, raw_to_apoly
from .fields import FieldSpec, FqElem, ZpExp, ResidueChar, lq_digit_sum, binom_mod_p
from .polyring import APoly, MPoly, enumerate_monic, monic_coeff_vectors, frobenius_twist, hyperderivative
from .seriesinf import LaurentSeries, PrecisionError, one_unit_pow


# ---------------------------------------------------------------------------
# twist data


@dataclass(frozen=True)
class TwistFactor:
    """One factor of a twisted sum.

    finite:   phi^frob(a^(hyper)) evaluated at `point` (None = symbolic).
    infinite: <phi^frob(a) at point> ^ zexp, needing v(point) < 0.
    """

    kind: str
    frob: int = 0
    hyper: int = 0
    point: object = None
    zexp: ZpExp | None = None

    def __post_init__(self):
        if self.kind not in ("finite", "infinite"):
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.frob < 0 or self.hyper < 0:
            raise ValueError("Frobenius and hyperderivative orders must be >= 0")
        if self.kind == "infinite":
            if self.hyper:
                raise ValueError("infinite factors take no hyperderivative")
            if self.zexp is None:
                raise ValueError("infinite factors need an exponent")
            if not isinstance(self.point, LaurentSeries):
                raise ValueError("infinite factors need a Laurent evaluation point")
            if self.point.valuation() is None or self.point.valuation() >= 0:
                raise ValueError("infinite factor points must have negative valuation")
        else:
            if self.zexp is not None:
                raise ValueError("finite factors take no exponent")


@dataclass(frozen=True)
class SInftyPoint:
    """A point (x; y) of the evaluation domain; stores the digits of -y."""

    x: LaurentSeries
    neg_y: ZpExp

    def __post_init__(self):
        if self.x.is_zero():
            raise ValueError("x must be nonzero at its precision")


# ---------------------------------------------------------------------------
# power-sum cache


def _default_cache_dir() -> Path:
    env = os.environ.get("FFZETA_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "ffzeta"


class PowerSumCache:
    """Write-through JSON-lines store for power sums, keyed by content hash.

    Malformed lines are skipped and recomputed; concurrent appends are
    serialized with an advisory file lock.
    """

    def __init__(self, directory: Path | str | None = None):
        self.directory = Path(directory) if directory is not None else _default_cache_dir()
        self.path = self.directory / "powersums.jsonl"
        self._mem: dict[str, tuple] = {}
        self._loaded = False

    @staticmethod
    def key(spec: FieldSpec, d: int, n: int) -> str:
        payload = json.dumps([repr(spec._key()), d, n], sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()

    def _load(self):
        self._loaded = True
        if not self.path.exists():
            return
        try:
            lines = self.path.read_text().splitlines()
        except OSError:
            return
        for line in lines:
            try:
                doc = json.loads(line)
                key, coeffs = doc["key"], doc["coeffs"]
                if isinstance(key, str) and all(isinstance(c, int) for c in coeffs):
                    self._mem[key] = tuple(coeffs)
            except (json.JSONDecodeError, TypeError, KeyError):
                continue  # corrupt entry: recompute rather than trust

    def get(self, key: str):
        if not self._loaded:
            self._load()
        return self._mem.get(key)

    def put(self, key: str, coeffs):
        if not self._loaded:
            self._load()
        if key in self._mem:
            return
        self._mem[key] = tuple(coeffs)
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a") as fh:
                fcntl.flock(fh, fcntl.LOCK_EX)
                fh.write(json.dumps({"key": key, "coeffs": list(coeffs)}) + "\n")
                fcntl.flock(fh, fcntl.LOCK_UN)
        except OSError:
            pass  # cache is an accelerator, never a requirement


_caches: dict[str, PowerSumCache] = {}


def default_cache() -> PowerSumCache:
    path = str(_default_cache_dir())
    if path not in _caches:
        _caches[path] = PowerSumCache(path)
    return _caches[path]


# ---------------------------------------------------------------------------
# power sums


def _lucas_support(n: int, p: int):
    """All k with C(n, k) nonzero mod p, with the coefficient, via Lucas."""
    digs = fields.base_digits(n, p) or [0]
    ranges = [range(d + 1) for d in digs]
    out = []
    for choice in itertools.product(*ranges):
        k = 0
        b = 1
        for i, (kd, nd) in enumerate(zip(choice, digs)):
            k += kd * p ** i
            b = b * binom_mod_p(nd, kd, p) % p
        out.append((k, b))
    return out


def _power_sum_raw(spec, kernel, d, n, memo, cache):
    key = (d, n)
    if key in memo:
        return memo[key]
    if d == 0:
        raw = kernel.from_codes((1,))
        memo[key] = raw
        return raw
    ckey = PowerSumCache.key(spec, d, n) if cache is not None else None
    if cache is not None:
        hit = cache.get(ckey)
        if hit is not None and all(0 <= c < spec.q for c in hit):
            raw = kernel.from_codes(hit)
            memo[key] = raw
            return raw
    q = spec.q
    total = kernel.zero()
    if n > 0:
        for k, b in _lucas_support(n, spec.p):
            if k >= n or (n - k) % (q - 1) != 0:
                continue
            child = _power_sum_raw(spec, kernel, d - 1, k, memo, cache)
            if kernel.is_zero(child):
                continue
            coeff = spec.neg_code(b % spec.p)
            term = kernel.scale(kernel.shift(child, k), coeff)
            total = kernel.add(total, term)
    total = kernel.normalize(total)
    memo[key] = total
    if cache is not None:
        cache.put(ckey, kernel.to_codes(total))
    return total


_memo_by_spec: dict = {}


def power_sum(spec: FieldSpec, d: int, n: int, cache: PowerSumCache | None = None) -> APoly:
    """S_d(n) = sum of a^n over monic degree-d polynomials, exactly.

    Zero whenever d(q-1) > lq(n); cached on disk keyed by (field, d, n).
    """
    if d < 0 or n < 0:
        raise ValueError("power_sum needs d, n >= 0")
    if cache is None:
        cache = default_cache()
    kernel = get_kernel(spec)
    memo = _memo_by_spec.setdefault(spec._key(), {})
    raw = _power_sum_raw(spec, kernel, d, n, memo, cache)
    value = raw_to_apoly(kernel, raw)
    cache.put(PowerSumCache.key(spec, d, n), value.coeff_codes)
    return value


def power_sum_vanishes(spec: FieldSpec, d: int, n: int) -> bool:
    """The digit-sum vanishing predicate d(q-1) > lq(n)."""
    return d * (spec.q - 1) > lq_digit_sum(n, spec.q)


# ---------------------------------------------------------------------------
# twisted and character power sums


def _symbolic_factor(a: APoly, factor: TwistFactor, var_names, index, target_spec):
    b = frobenius_twist(hyperderivative(a, factor.hyper), factor.frob)
    terms = {}
    arity = len(var_names)
    for j, code in enumerate(b.coeff_codes):
        if code:
            exp = [0] * arity
            exp[index] = j
            terms[tuple(exp)] = FqElem(target_spec, code)
    return MPoly(var_names, terms)


def twisted_power_sum(spec: FieldSpec, d: int, factors, char: ResidueChar | None = None) -> MPoly:
    """Sum over monic degree-d a of chi(a) * prod phi^e_i(a^(m_i))(t_i).

    All factor points are symbolic; with every hyperderivative order 0
    and no character the result is exactly zero once d > s/(q-1).
    """
    factors = list(factors)
    for f in factors:
        if f.kind != "finite" or f.point is not None:
            raise ValueError("twisted_power_sum takes symbolic finite factors only")
    target = char.residue_field if char is not None else spec
    names = tuple(f"t{i + 1}" for i in range(len(factors)))
    total = MPoly.zero(names)
    for a in enumerate_monic(spec, d):
        if char is not None:
            chi_code = char.eval_codes(a.coeff_codes)
            if chi_code == 0:
                continue
            prod = MPoly.const(names, FqElem(target, chi_code))
        else:
            prod = MPoly.const(names, FqElem(target, 1))
        for i, f in enumerate(factors):
            prod = prod * _symbolic_factor(a, f, names, i, target)
            if prod.is_zero():
                break
        total = total + prod
    return total


def char_power_sum(spec: FieldSpec, d: int, chi: ResidueChar, n: int):
    """Sum of chi(a) a^n over monic degree-d a prime to P.

    Returns an FqElem of the residue field for n = 0, otherwise an APoly
    over the residue field.  For n = 0 the sum vanishes for all
    d >= deg(P) + 1.
    """
    if n < 0:
        raise ValueError("char_power_sum needs n >= 0")
    rspec = chi.residue_field
    kernel = get_kernel(spec)
    acc = []
    for vec in monic_coeff_vectors(spec, d):
        codes = vec + (1,)
        chi_code = chi.eval_codes(codes)
        if chi_code == 0:
            continue
        if n == 0:
            apow_codes = (1,)
        else:
            apow_codes = kernel.to_codes(kernel.pow(kernel.from_codes(codes), n))
        # F_q coefficients keep their code in the residue extension
        scaled = fields.poly_scale(rspec, list(apow_codes), chi_code)
        acc = fields.poly_add(rspec, acc, scaled)
    if n == 0:
        return FqElem(rspec, acc[0] if acc else 0)
    return APoly(rspec, acc)


# ---------------------------------------------------------------------------
# exact zeta / Pellarin polynomials (non-positive exponents)


def exact_L_degree_bound(spec: FieldSpec, n: int, s: int) -> int:
    return (s + lq_digit_sum(-n, spec.q)) // (spec.q - 1) if spec.q > 2 \
        else s + lq_digit_sum(-n, 2)


def thread_count() -> int:
    """Worker cap from FFZETA_THREADS (1 = serial, the default)."""
    try:
        return max(1, int(os.environ.get("FFZETA_THREADS", "1")))
    except ValueError:
        return 1


def _map_chunks(fn, chunks):
    """Evaluate fn over enumeration chunks, optionally on a thread pool.

    Results come back in chunk order, so any exact additive merge is
    bit-identical to the serial evaluation.
    """
    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, chunks))
    return [fn(j) for j in chunks]


def exact_L(spec: FieldSpec, n: int, s: int, cache: PowerSumCache | None = None) -> MPoly:
    """The zeta polynomial sum_d z^d sum_a a(t_1)...a(t_s) a^(-n), n <= 0.

    Exact output in variables (t_1..t_s, z) with coefficients in A; the
    z-degree is bounded by (s + lq(-n)) / (q-1), and the value at z = 1
    vanishes whenever s - n is a positive multiple of q - 1.
    """
    if n > 0:
        raise ValueError("positive exponents are series; use pellarin_L_series")
    if s < 0:
        raise ValueError("s must be >= 0")
    nn = -n
    names = tuple(f"t{i + 1}" for i in range(s)) + ("z",)
    bound = exact_L_degree_bound(spec, n, s)
    terms = {}
    kernel = get_kernel(spec)

    def chunk_shell(d, chunk):
        shell = {}
        vectors = (monic_coeff_vectors(spec, d) if chunk is None else
                   (low + (chunk,) for low in monic_coeff_vectors(spec, d - 1)))
        for vec in vectors:
            codes = vec + (1,)
            apow = kernel.pow(kernel.from_codes(codes), nn)
            support = [(j, c) for j, c in enumerate(codes) if c]
            for ms in itertools.combinations_with_replacement(support, s):
                prod_code = 1
                for _, c in ms:
                    prod_code = spec.mul_code(prod_code, c)
                key = tuple(j for j, _ in ms)
                contrib = kernel.scale(apow, prod_code)
                shell[key] = kernel.add(shell[key], contrib) if key in shell else contrib
        return shell

    for d in range(bound + 1):
        if s == 0:
            coeff = power_sum(spec, d, nn, cache)
            if coeff:
                terms[(d,)] = coeff
            continue
        if d > 0 and thread_count() > 1:
            parts = _map_chunks(lambda j: chunk_shell(d, j), range(spec.q))
            shell = {}
            for part in parts:  # fixed chunk order: merge is deterministic
                for key, raw in part.items():
                    shell[key] = kernel.add(shell[key], raw) if key in shell else raw
        else:
            shell = chunk_shell(d, None)
        for ms_key, raw in shell.items():
            coeff = raw_to_apoly(kernel, raw)
            if not coeff:
                continue
            for perm in set(itertools.permutations(ms_key)):
                terms[perm + (d,)] = coeff
    return MPoly(names, terms)


def pellarin_L_series(spec: FieldSpec, n: int, s: int, zdeg: int, prec: int) -> MPoly:
    """Truncation of the positive-exponent series sum_d z^d sum_a a(t)/a^n.

    Each (t, z)-monomial coefficient is computed exactly and then cut to
    the requested precision; the z^d coefficient has Gauss valuation at
    least n*d, so zdeg >= prec/n certifies the tail below pi^prec for
    evaluation points of Gauss norm <= 1.
    """
    if n < 1:
        raise ValueError("pellarin_L_series needs n >= 1; use exact_L for n <= 0")
    if zdeg < 0 or prec < 1:
        raise ValueError("need zdeg >= 0 and prec >= 1")
    names = tuple(f"t{i + 1}" for i in range(s)) + ("z",)
    terms = {}
    for d in range(zdeg + 1):
        shell = {}
        for a in enumerate_monic(spec, d):
            apow = (LaurentSeries.from_apoly(a, prec).inverse() ** n).truncate(prec)
            codes = a.coeff_codes
            support = [(j, c) for j, c in enumerate(codes) if c]
            for ms in itertools.combinations_with_replacement(support, s):
                prod_code = 1
                for _, c in ms:
                    prod_code = spec.mul_code(prod_code, c)
                key = tuple(j for j, _ in ms)
                contrib = apow.scale_code(prod_code)
                shell[key] = shell[key] + contrib if key in shell else contrib
        for ms_key, val in shell.items():
            if val.is_zero():
                continue
            for perm in set(itertools.permutations(ms_key)):
                terms[perm + (d,)] = val
    return MPoly(names, terms)


def zpoly_eval_laurent(poly: MPoly, subs: dict, prec: int) -> LaurentSeries:
    """Evaluate an MPoly with APoly coefficients at Laurent points."""
    spec = None
    for value in subs.values():
        spec = value.spec
    if spec is None:
        raise ValueError("need at least one substitution value")
    total = LaurentSeries.zero(spec, prec)
    for exp, coeff in poly.terms.items():
        term = (LaurentSeries.from_apoly(coeff, prec) if isinstance(coeff, APoly)
                else coeff)
        for name, k in zip(poly.vars, exp):
            if k:
                term = term * subs[name] ** k
        total = total + term
    return total


# ---------------------------------------------------------------------------
# tail certificates and evaluation at p-adic exponents


def infty_coeff_valuation_bound(q: int, d: int, s: int = 0, n_inf: int = 1) -> int:
    """Certified lower bound on the valuation of the degree-d inner sum.

    With s linear factors and n_inf one-unit exponent factors, digit
    truncation at level l leaves exponents of digit sum at most
    (l+1)(q-1)+1 each, and the truncated sum vanishes once
    d(q-1) > s + n_inf((l+1)(q-1)+1); the bound is q^(l+1) for the
    largest admissible l.  Plain case (s=0, n_inf=1): q^(d-2) for d >= 2.
    """
    if n_inf < 1:
        raise ValueError("certificate applies to sums with exponent factors")
    num = d * (q - 1) - s - n_inf - 1
    if num < 0:
        return 0
    l1 = num // (n_inf * (q - 1))
    return q ** l1 if l1 >= 0 else 0


def _stop_shell(q, prec, s, n_inf, loss_rate, max_shells=10_000):
    """First D with every shell d >= D certified below pi^prec.

    loss_rate L bounds the per-shell linear valuation loss (the x-power
    and any negative-valuation finite points), so shell d has valuation
    at least cert(d) - L*d.  cert never decreases and multiplies by at
    least q every n_inf shells, hence cert(D) >= prec + L*(D + n_inf)
    together with cert(D) >= L*n_inf certifies the whole tail: in block
    j the bound is q^j cert(D) - L(D + (j+1) n_inf), and induction on j
    keeps it >= prec.
    """
    L = max(loss_rate, 0)
    for d in range(2, max_shells):
        cert = infty_coeff_valuation_bound(q, d, s, n_inf)
        if cert >= prec + L * (d + n_inf) and cert >= L * n_inf:
            return d
    raise PrecisionError("no certified stopping shell found", precision=prec)


def goss_zeta_eval(pt: SInftyPoint, prec: int) -> LaurentSeries:
    """Evaluate sum_d x^(-d) sum_a <a>^(-y) to the requested precision.

    The point stores the digits of -y; the shell sum stops once the
    certified bound v(c_d) >= q^(d-2) pushes the tail below pi^prec.
    Needs p^M >= prec digits and x known to relative precision >= prec.
    """
    x = pt.x
    spec = x.spec
    q, p = spec.q, spec.p
    if p ** pt.neg_y.precision < prec:
        raise PrecisionError(
            f"need p^M >= prec = {prec}; supply more exponent digits",
            precision=p ** pt.neg_y.precision)
    if x.rel_prec() < prec:
        raise PrecisionError(
            f"x must be known to relative precision >= {prec}", precision=x.rel_prec())
    vx = x.valuation()
    stop = _stop_shell(q, prec, 0, 1, vx)
    x_inv = x.inverse()
    total = LaurentSeries.one(spec, prec)  # d = 0 shell: the single a = 1
    x_pow = LaurentSeries.one(spec, prec + stop * max(-vx, vx) + stop)
    for d in range(1, stop):
        x_pow = x_pow * x_inv
        c_d = LaurentSeries.zero(spec, prec)
        for vec in monic_coeff_vectors(spec, d):
            bracket = LaurentSeries(spec, 0, (1,) + tuple(reversed(vec)), prec)
            c_d = c_d + one_unit_pow(bracket, pt.neg_y)
        if c_d.is_zero():
            continue
        total = total + c_d * x_pow
    if total.prec < prec:
        raise PrecisionError(
            f"propagated precision {total.prec} fell below the requested {prec}",
            precision=total.prec)
    return total.truncate(prec)


def twisted_L_eval(finite, infinite, x: LaurentSeries, prec: int):
    """General twisted evaluation over monic polynomials.

    sum_d x^(-d) sum_a prod_i phi^(e_i)(a^(m_i))(x_i)
                       prod_j <phi^(l_j)(a)(y_j) / y_j^d> ^ (z_j)

    Finite factors with symbolic points produce an MPoly with Laurent
    coefficients; otherwise the value is a LaurentSeries.  With no
    infinite factors the sum is finite (shells d <= s/(q-1)).
    """
    finite = list(finite)
    infinite = list(infinite)
    spec = x.spec
    q, p = spec.q, spec.p
    for f in finite:
        if f.kind != "finite":
            raise ValueError("finite factor list contains an infinite factor")
    for f in infinite:
        if f.kind != "infinite":
            raise ValueError("infinite factor list contains a finite factor")
        if p ** f.zexp.precision < prec:
            raise PrecisionError(
                f"need p^M >= prec = {prec} for every exponent", precision=p ** f.zexp.precision)
    s, n_inf = len(finite), len(infinite)
    sym_names = tuple(f"t{i + 1}" for i, f in enumerate(finite) if f.point is None)
    symbolic = bool(sym_names)

    vx = x.valuation()
    if vx is None:
        raise ValueError("x must be nonzero")
    point_loss = sum(-f.point.valuation() for f in finite
                     if f.point is not None and f.point.valuation() is not None
                     and f.point.valuation() < 0)
    if n_inf == 0:
        stop = s // (q - 1) + 1
    else:
        stop = _stop_shell(q, prec, s, n_inf, vx + point_loss)
    x_inv = x.inverse()
    y_inv = [f.point.inverse() for f in infinite]

    def shell_value(d):
        acc = None
        y_inv_d = [yi ** d for yi in y_inv]
        for a in enumerate_monic(spec, d):
            value = LaurentSeries.one(spec, prec)
            sym_part = MPoly.const(sym_names, LaurentSeries.one(spec, prec)) if symbolic else None
            sym_index = 0
            sym_dead = False
            for f in finite:
                b = frobenius_twist(hyperderivative(a, f.hyper), f.frob)
                if f.point is None:
                    terms = {}
                    for j, code in enumerate(b.coeff_codes):
                        if code:
                            exp = [0] * len(sym_names)
                            exp[sym_index] = j
                            terms[tuple(exp)] = LaurentSeries.constant(spec, code, prec)
                    sym_part = sym_part * MPoly(sym_names, terms)
                    sym_index += 1
                    if sym_part.is_zero():
                        sym_dead = True  # an exactly-zero hyperderivative factor
                        break
                else:
                    value = value * b.eval(f.point)
            if sym_dead:
                continue
            for f, yid in zip(infinite, y_inv_d):
                u = frobenius_twist(a, f.frob).eval(f.point) * yid
                value = value * one_unit_pow(u, f.zexp)
            if symbolic:
                piece = sym_part.scale(value)
                acc = piece if acc is None else acc + piece
            else:
                acc = value if acc is None else acc + value
        if acc is None:
            acc = MPoly.zero(sym_names) if symbolic else LaurentSeries.zero(spec, prec)
        return acc

    x_pow = LaurentSeries.one(spec, prec + stop * (abs(vx) + 1))
    total = None
    for d in range(stop):
        if d:
            x_pow = x_pow * x_inv
        shell = shell_value(d)
        term = shell.scale(x_pow) if symbolic else shell * x_pow
        total = term if total is None else total + term
    if symbolic:
        return total.map_coefficients(
            lambda c: c.truncate(min(prec, c.prec)) if c.prec > prec else c)
    if total.prec < prec:
        raise PrecisionError(
            f"propagated precision {total.prec} fell below the requested {prec}",
            precision=total.prec)
    return total.truncate(prec)
