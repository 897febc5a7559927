"""The polynomial ring A = F_q[theta] and sparse multivariate polynomials.

APoly is an immutable univariate polynomial over a FieldSpec with
ascending coefficient codes.  Monic enumeration of A_{+,d} (all q^d
monic polynomials of degree d) is the index set of every sum in this
library; the stream order is lexicographic on the coefficient tuple
(c_0, ..., c_{d-1}) with integer element codes, and can be split into
q deterministic chunks by the degree-(d-1) coefficient.

MPoly is a sparse multivariate polynomial over a declared coefficient
ring, used for symbolic t-variables, z-variables and exact outputs.
"""

from __future__ import annotations

import itertools

from . import fields
from .fields import FieldSpec, FqElem, FieldError, binom_mod_p


class APoly:
    """Element of A = F_q[theta]; coeff_codes ascending, no trailing zeros."""

    __slots__ = ("spec", "coeff_codes")

    def __init__(self, spec: FieldSpec, coeff_codes):
        self.spec = spec
        self.coeff_codes = tuple(fields.poly_trim(list(coeff_codes)))

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, spec) -> "APoly":
        return cls(spec, ())

    @classmethod
    def one(cls, spec) -> "APoly":
        return cls(spec, (1,))

    @classmethod
    def theta(cls, spec) -> "APoly":
        return cls(spec, (0, 1))

    @classmethod
    def constant(cls, spec, code: int) -> "APoly":
        return cls(spec, (code,))

    @classmethod
    def from_coeff_list(cls, spec, coeffs) -> "APoly":
        """Build from FqElem coefficients or raw codes."""
        codes = [c.code if isinstance(c, FqElem) else int(c) for c in coeffs]
        return cls(spec, codes)

    # -- structure -------------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree in theta; -1 for the zero polynomial."""
        return len(self.coeff_codes) - 1

    def is_zero(self) -> bool:
        return not self.coeff_codes

    def __bool__(self):
        return bool(self.coeff_codes)

    def is_monic(self) -> bool:
        return bool(self.coeff_codes) and self.coeff_codes[-1] == 1

    def leading_code(self) -> int:
        if not self.coeff_codes:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeff_codes[-1]

    def coefficient(self, i: int) -> FqElem:
        code = self.coeff_codes[i] if 0 <= i < len(self.coeff_codes) else 0
        return FqElem(self.spec, code)

    def _check(self, other):
        if not isinstance(other, APoly):
            raise TypeError(f"cannot combine APoly with {type(other).__name__}")
        if other.spec != self.spec:
            raise FieldError("operands belong to different coefficient fields")
        return other

    # -- ring operations ---------------------------------------------------------

    def __add__(self, other):
        other = self._check(other)
        return APoly(self.spec, fields.poly_add(self.spec, list(self.coeff_codes), list(other.coeff_codes)))

    def __neg__(self):
        neg = self.spec.neg_code
        return APoly(self.spec, [neg(c) for c in self.coeff_codes])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FqElem):
            if other.spec != self.spec:
                raise FieldError("scalar belongs to a different field")
            return APoly(self.spec, fields.poly_scale(self.spec, list(self.coeff_codes), other.code))
        other = self._check(other)
        return APoly(self.spec, fields.poly_mul(self.spec, list(self.coeff_codes), list(other.coeff_codes)))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers leave A; use Laurent or p-adic evaluation")
        result = APoly.one(self.spec)
        base = self
        while n > 0:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._check(other)
        q, r = fields.poly_divmod(self.spec, list(self.coeff_codes), list(other.coeff_codes))
        return APoly(self.spec, q), APoly(self.spec, r)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def scale_code(self, code: int) -> "APoly":
        return APoly(self.spec, fields.poly_scale(self.spec, list(self.coeff_codes), code))

    def shift(self, k: int) -> "APoly":
        """Multiply by theta^k."""
        if not self.coeff_codes:
            return self
        return APoly(self.spec, (0,) * k + self.coeff_codes)

    # -- evaluation ---------------------------------------------------------------

    def eval(self, point, embedding=None):
        """Ring-homomorphic evaluation theta -> point.

        The target is inferred from the point: an FqElem (possibly of an
        extension field), an MPoly variable or value, a LaurentSeries, or
        a PadicElem.  Coefficients embed canonically when the point's
        field is the same spec or a tower extension of it; any other
        cross-field evaluation needs an explicit code-embedding table.
        """
        if isinstance(point, FqElem):
            target = point.spec
            embed = self._coeff_embedding(target, embedding)
            acc = 0
            for c in reversed(self.coeff_codes):
                acc = target.add_code(target.mul_code(acc, point.code), embed(c))
            return FqElem(target, acc)
        if isinstance(point, MPoly):
            embed_c = self._mpoly_coeff_embedding(point, embedding)
            result = MPoly(point.vars, {})
            power = MPoly.one_like(point)
            for i, c in enumerate(self.coeff_codes):
                if i:
                    power = power * point
                if c:
                    result = result + power.scale(embed_c(c))
            return result
        # Laurent and p-adic targets share the Horner pattern through duck
        # typing: they provide .spec-compatible scalar mixing via methods.
        from .seriesinf import LaurentSeries
        from .padic import PadicElem
        if isinstance(point, LaurentSeries):
            if embedding is None and point.spec != self.spec:
                raise FieldError("evaluation point over a different field needs an embedding")
            embed = embedding or (lambda c: c)
            acc = LaurentSeries.zero(point.spec, point.prec)
            for c in reversed(self.coeff_codes):
                acc = acc * point + LaurentSeries.constant(point.spec, embed(c), acc.prec)
            return acc
        if isinstance(point, PadicElem):
            if point.ctx.field != self.spec:
                raise FieldError("p-adic evaluation point over a different field")
            acc = point.ctx.zero()
            for c in reversed(self.coeff_codes):
                acc = acc * point + point.ctx.constant(c)
            return acc
        raise TypeError(f"unsupported evaluation target {type(point).__name__}")

    def _coeff_embedding(self, target, embedding):
        if embedding is not None:
            return lambda c: embedding[c]
        if target == self.spec:
            return lambda c: c
        if getattr(target, "base", None) == self.spec:
            return lambda c: c  # constants keep their code in a tower extension
        raise FieldError("evaluation point over an unrelated field needs an embedding")

    def _mpoly_coeff_embedding(self, point, embedding):
        sample = point.any_coefficient()
        if isinstance(sample, FqElem):
            embed = self._coeff_embedding(sample.spec, embedding)
            return lambda c: FqElem(sample.spec, embed(c))
        if isinstance(sample, APoly):
            embed = APoly.one(sample.spec)._coeff_embedding(sample.spec, embedding) \
                if sample.spec != self.spec else (lambda c: c)
            return lambda c: APoly.constant(sample.spec, embed(c))
        raise FieldError("symbolic evaluation needs FqElem or APoly coefficients")

    def __call__(self, point, embedding=None):
        return self.eval(point, embedding)

    # -- value semantics -------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, APoly) and other.spec == self.spec
                and other.coeff_codes == self.coeff_codes)

    def __hash__(self):
        return hash((self.spec, self.coeff_codes))

    def __repr__(self):
        if not self.coeff_codes:
            return "APoly(0)"
        parts = []
        for i in range(len(self.coeff_codes) - 1, -1, -1):
            c = self.coeff_codes[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(f"{c}")
            else:
                head = "" if c == 1 else f"{c}*"
                parts.append(f"{head}O^{i}" if i > 1 else f"{head}O")
        return "APoly(" + " + ".join(parts).replace("O", "theta") + ")"

    def to_json(self):
        return {"coeffs": [self.spec.coords(c) for c in self.coeff_codes]}

    @classmethod
    def from_json(cls, spec, doc) -> "APoly":
        return cls(spec, [spec.from_coords(v) for v in doc["coeffs"]])


# -------------------------------------------------------------------------------
# enumeration of A_{+,d}


def enumerate_monic(spec: FieldSpec, d: int, chunk: int | None = None):
    """Yield all monic degree-d polynomials, lexicographic in (c_0..c_{d-1}).

    With chunk = j (0 <= j < q), restrict to c_{d-1} = j; the q chunks
    partition A_{+,d} and each preserves the induced order, so chunk-wise
    accumulation of any additive statistic reproduces the serial result
    exactly.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    q = spec.q
    if chunk is not None and not (0 <= chunk < q):
        raise ValueError(f"chunk must lie in [0, {q})")
    if d == 0:
        if chunk is None or chunk == 0:
            yield APoly.one(spec)
        return
    if chunk is None:
        for vec in itertools.product(range(q), repeat=d):
            yield APoly(spec, vec + (1,))
    else:
        for low in itertools.product(range(q), repeat=d - 1):
            yield APoly(spec, low + (chunk, 1))


def monic_coeff_vectors(spec: FieldSpec, d: int):
    """Raw coefficient tuples (c_0..c_{d-1}) in enumeration order."""
    return itertools.product(range(spec.q), repeat=d) if d else iter(((),))


# -------------------------------------------------------------------------------
# operators on A


def frobenius_twist(a: APoly, j: int) -> APoly:
    """Coefficient-wise p^j power; preserves degree and monicity."""
    if j < 0:
        raise ValueError("Frobenius iterate must be nonnegative")
    spec = a.spec
    if j % spec.e == 0:
        return a
    return APoly(spec, [spec.frob_code(c, j) for c in a.coeff_codes])


def hyperderivative(a: APoly, m: int) -> APoly:
    """The coefficient of X^m in a(theta + X).

    Computed per monomial from (theta^k)^(m) = C(k, m) theta^(k-m); this
    keeps the cost quadratic in the degree.
    """
    if m < 0:
        raise ValueError("hyperderivative order must be nonnegative")
    if m == 0:
        return a
    spec = a.spec
    p = spec.p
    out = [0] * max(len(a.coeff_codes) - m, 0)
    for k in range(m, len(a.coeff_codes)):
        c = a.coeff_codes[k]
        if c == 0:
            continue
        b = binom_mod_p(k, m, p)
        if b == 0:
            continue
        scaled = c
        for _ in range(b - 1):
            scaled = spec.add_code(scaled, c)
        out[k - m] = spec.add_code(out[k - m], scaled)
    return APoly(spec, out)


def is_irreducible(a: APoly) -> bool:
    """Irreducibility over F_q via gcd with theta^(q^i) - theta, i <= deg/2."""
    if a.is_zero():
        raise ValueError("zero polynomial")
    if a.degree == 0:
        raise ValueError("constant polynomial")
    monic = a.scale_code(a.spec.inv_code(a.leading_code()))
    return fields.poly_is_irreducible(a.spec, list(monic.coeff_codes))


# -------------------------------------------------------------------------------
# sparse multivariate polynomials


class MPoly:
    """Sparse multivariate polynomial over a declared coefficient ring.

    Terms map exponent tuples (one slot per variable in `vars`) to
    nonzero coefficients; coefficients may be FqElem, APoly,
    LaurentSeries or PadicElem values and must all share one ring.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms):
        self.vars = tuple(variables)
        arity = len(self.vars)
        clean = {}
        for exp, coeff in terms.items():
            exp = tuple(int(x) for x in exp)
            if len(exp) != arity:
                raise ValueError(f"exponent {exp} has wrong arity for vars {self.vars}")
            if coeff:
                clean[exp] = coeff
        self.terms = clean

    @classmethod
    def zero(cls, variables) -> "MPoly":
        return cls(variables, {})

    @classmethod
    def variable(cls, variables, name, one_coeff) -> "MPoly":
        """The monomial `name` with the given unit coefficient."""
        variables = tuple(variables)
        exp = [0] * len(variables)
        exp[variables.index(name)] = 1
        return cls(variables, {tuple(exp): one_coeff})

    @classmethod
    def const(cls, variables, coeff) -> "MPoly":
        return cls(variables, {(0,) * len(tuple(variables)): coeff})

    @classmethod
    def one_like(cls, other: "MPoly") -> "MPoly":
        sample = other.any_coefficient()
        return cls.const(other.vars, _ring_one(sample))

    def any_coefficient(self):
        if not self.terms:
            raise ValueError("zero polynomial has no coefficients")
        return next(iter(self.terms.values()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if not isinstance(other, MPoly):
            raise TypeError(f"cannot combine MPoly with {type(other).__name__}")
        if other.vars != self.vars:
            raise ValueError(f"variable rosters differ: {self.vars} vs {other.vars}")
        return other

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for exp, coeff in other.terms.items():
            if exp in terms:
                s = terms[exp] + coeff
                if s:
                    terms[exp] = s
                else:
                    del terms[exp]
            else:
                terms[exp] = coeff
        return MPoly(self.vars, terms)

    def __neg__(self):
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        other = self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                if e in out:
                    s = out[e] + prod
                    if s:
                        out[e] = s
                    else:
                        del out[e]
                elif prod:
                    out[e] = prod
        return MPoly(self.vars, out)

    def scale(self, coeff) -> "MPoly":
        out = {}
        for e, c in self.terms.items():
            prod = c * coeff
            if prod:
                out[e] = prod
        return MPoly(self.vars, out)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative MPoly power")
        result = None
        base = self
        while n > 0:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        if result is None:
            raise ValueError("MPoly**0 needs a coefficient ring; use one_like")
        return result

    def degree_in(self, name: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def coefficient_of(self, name: str, power: int) -> "MPoly":
        """The coefficient of name^power, as an MPoly in the remaining vars."""
        i = self.vars.index(name)
        rest = self.vars[:i] + self.vars[i + 1:]
        out = {}
        for e, c in self.terms.items():
            if e[i] == power:
                out[e[:i] + e[i + 1:]] = c
        return MPoly(rest, out)

    def substitute(self, name: str, value) -> "MPoly":
        """Substitute a ring value for one variable (value 1 of the ring,
        a coefficient, or anything the coefficients can multiply)."""
        i = self.vars.index(name)
        rest = self.vars[:i] + self.vars[i + 1:]
        out = MPoly(rest, {})
        for e, c in sorted(self.terms.items()):
            coeff = c
            for _ in range(e[i]):
                coeff = coeff * value
            out = out + MPoly(rest, {e[:i] + e[i + 1:]: coeff})
        return out

    def map_coefficients(self, fn) -> "MPoly":
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if v:
                out[e] = v
        return MPoly(self.vars, out)

    def gauss_valuation(self):
        """Minimum coefficient valuation, or None for the zero polynomial."""
        vals = [c.valuation() for c in self.terms.values()]
        vals = [v for v in vals if v is not None]
        return min(vals) if vals else None

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        return (isinstance(other, MPoly) and other.vars == self.vars
                and other.terms == self.terms)

    def __repr__(self):
        if not self.terms:
            return "MPoly(0)"
        bits = []
        for e, c in self.sorted_terms()[:8]:
            mono = "*".join(f"{v}^{k}" for v, k in zip(self.vars, e) if k) or "1"
            bits.append(f"({c!r})*{mono}")
        suffix = ", ..." if len(self.terms) > 8 else ""
        return "MPoly(" + " + ".join(bits) + suffix + ")"

    def to_json(self, coeff_to_json=None):
        enc = coeff_to_json or (lambda c: c.to_json())
        return {"vars": list(self.vars),
                "terms": [{"exp": list(e), "coeff": enc(c)} for e, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, doc, coeff_from_json) -> "MPoly":
        return cls(doc["vars"],
                   {tuple(t["exp"]): coeff_from_json(t["coeff"]) for t in doc["terms"]})


def _ring_one(sample):
    if isinstance(sample, FqElem):
        return FqElem(sample.spec, 1)
    if isinstance(sample, APoly):
        return APoly.one(sample.spec)
    one = getattr(sample, "ring_one", None)
    if one is not None:
        return one()
    raise TypeError(f"no unit element known for {type(sample).__name__}")
