"""Finite-place arithmetic in the quotient rings A/(P^k).

P is a monic irreducible polynomial of A = F_q[theta] and also serves
as the uniformizer, so every computation stays inside A: elements are
canonical representatives of degree < k*deg(P).  The Teichmuller part
of a unit is the q^deg(P)-power fixed point congruent to it mod P; the
bracket part is the complementary one-unit.  One-units admit p-adic
exponents through the same digit product as at the infinite place.
"""

from __future__ import annotations

from . import fields
from .fields import FieldSpec, ZpExp
from .polyring import APoly, is_irreducible
from .seriesinf import PrecisionError


class PadicCtx:
    """The ring A/(P^k) for a monic irreducible P and precision k >= 1."""

    def __init__(self, P: APoly, k: int):
        if k < 1:
            raise ValueError("precision exponent k must be >= 1")
        if not P.is_monic():
            raise ValueError("P must be monic")
        if not is_irreducible(P):
            raise ValueError("P is reducible")
        self.P = P
        self.k = k
        self.field = P.spec
        self.dP = P.degree
        self.modulus = P ** k

    def reduce(self, a: APoly) -> "PadicElem":
        return PadicElem(self, a % self.modulus)

    def zero(self) -> "PadicElem":
        return PadicElem(self, APoly.zero(self.field))

    def one(self) -> "PadicElem":
        return PadicElem(self, APoly.one(self.field))

    def constant(self, code: int) -> "PadicElem":
        return PadicElem(self, APoly.constant(self.field, code))

    def with_precision(self, k: int) -> "PadicCtx":
        return PadicCtx(self.P, k)

    def residue_order(self) -> int:
        """Order of (A/P)^x, the Teichmuller exponent group."""
        return self.field.q ** self.dP - 1

    def __eq__(self, other):
        return (isinstance(other, PadicCtx) and other.P == self.P and other.k == self.k)

    def __hash__(self):
        return hash((self.P, self.k))

    def __repr__(self):
        return f"PadicCtx(P={self.P!r}, k={self.k})"

    def to_json(self):
        return {"P": self.P.to_json(), "k": self.k}

    @classmethod
    def from_json(cls, spec, doc) -> "PadicCtx":
        return cls(APoly.from_json(spec, doc["P"]), doc["k"])


class PadicElem:
    """An element of A/(P^k), stored by its canonical representative."""

    __slots__ = ("ctx", "rep")

    def __init__(self, ctx: PadicCtx, rep: APoly):
        if rep.degree >= ctx.modulus.degree:
            rep = rep % ctx.modulus
        self.ctx = ctx
        self.rep = rep

    def _check(self, other):
        if not isinstance(other, PadicElem):
            raise TypeError(f"cannot combine PadicElem with {type(other).__name__}")
        if other.ctx != self.ctx:
            raise ValueError("operands live in different quotient rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        return PadicElem(self.ctx, self.rep + other.rep)

    def __neg__(self):
        return PadicElem(self.ctx, -self.rep)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        other = self._check(other)
        return PadicElem(self.ctx, self.rep * other.rep)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        F = self.ctx.field
        mod = list(self.ctx.modulus.coeff_codes)
        out = fields.poly_powmod(F, list(self.rep.coeff_codes), n, mod)
        return PadicElem(self.ctx, APoly(F, out))

    def inverse(self) -> "PadicElem":
        if self.vP() > 0:
            raise ZeroDivisionError("inversion of a non-unit in A/(P^k)")
        return PadicElem(self.ctx, _invert_mod(self.ctx.field, self.rep, self.ctx.modulus))

    def vP(self) -> int:
        """P-adic valuation by trial division, capped at k."""
        if self.rep.is_zero():
            return self.ctx.k
        v = 0
        rem = self.rep
        while v < self.ctx.k:
            q, r = divmod(rem, self.ctx.P)
            if not r.is_zero():
                break
            rem = q
            v += 1
        return v

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def __bool__(self):
        return bool(self.rep)

    def is_one_unit(self) -> bool:
        return (self - self.ctx.one()).vP() >= 1

    def valuation(self):
        """vP, or None when indistinguishable from zero in A/(P^k)."""
        v = self.vP()
        return v if v < self.ctx.k else None

    def ring_one(self) -> "PadicElem":
        return self.ctx.one()

    def __eq__(self, other):
        return (isinstance(other, PadicElem) and other.ctx == self.ctx
                and other.rep == self.rep)

    def __hash__(self):
        return hash((self.ctx, self.rep))

    def __repr__(self):
        return f"PadicElem({self.rep!r} mod P^{self.ctx.k})"

    def to_json(self):
        return self.rep.to_json()

    @classmethod
    def from_json(cls, ctx, doc) -> "PadicElem":
        return cls(ctx, APoly.from_json(ctx.field, doc))


def _invert_mod(F, a: APoly, m: APoly) -> APoly:
    """Inverse of a modulo m in F_q[theta] by the extended Euclid algorithm."""
    r0, r1 = list(m.coeff_codes), list((a % m).coeff_codes)
    t0, t1 = [], [1]
    while r1:
        q, r = fields.poly_divmod(F, r0, r1)
        r0, r1 = r1, r
        t_next = fields.poly_add(F, t0, fields.poly_scale(F, fields.poly_mul(F, q, t1), F.neg_code(1)))
        t0, t1 = t1, t_next
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible modulo m")
    return APoly(F, fields.poly_scale(F, t0, F.inv_code(r0[0])))


def teichmuller(a, ctx: PadicCtx) -> PadicElem:
    """The q^dP-power fixed point congruent to a mod P (requires P not | a).

    Iterating x -> x^(q^dP) gains one P-adic digit per step, so at most k
    iterations reach the fixed point in A/(P^k); multiplicativity follows.
    """
    x = a if isinstance(a, PadicElem) else ctx.reduce(a)
    if x.vP() > 0:
        raise ZeroDivisionError("Teichmuller lift needs a unit (P does not divide a)")
    e = ctx.field.q ** ctx.dP
    for _ in range(ctx.k):
        nxt = x ** e
        if nxt == x:
            break
        x = nxt
    return x


def padic_bracket(a, ctx: PadicCtx) -> PadicElem:
    """The one-unit part a / teichmuller(a); congruent to 1 mod P."""
    x = a if isinstance(a, PadicElem) else ctx.reduce(a)
    return x * teichmuller(x, ctx).inverse()


def padic_one_unit_pow(u: PadicElem, y: ZpExp) -> PadicElem:
    """Digit product for a p-adic power of a one-unit in A/(P^k).

    Needs p^M >= k so the ignored digits sit above P^k; the output is
    again a one-unit.
    """
    ctx = u.ctx
    if not u.is_one_unit():
        raise ValueError("padic_one_unit_pow needs u = 1 mod P")
    if y.p != ctx.field.p:
        raise ValueError("exponent digit base differs from the field characteristic")
    p = ctx.field.p
    if p ** y.precision < ctx.k:
        raise PrecisionError(
            f"need p^M >= k = {ctx.k}; got p^{y.precision} = {p ** y.precision}",
            precision=p ** y.precision)
    w = u - ctx.one()
    result = ctx.one()
    w_power = w
    for i, d in enumerate(y.digits):
        if i > 0:
            w_power = w_power ** p
        if w_power.is_zero() and i < len(y.digits) - 1:
            break
        if d:
            factor = ctx.one() + w_power
            result = result * factor ** d
    return result
