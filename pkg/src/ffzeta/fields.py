"""Finite coefficient fields F_q = F_p[xi]/(modulus) and digit utilities.

Elements of F_q are stored as integer codes 0..q-1.  For a prime-based
field the code of (c_0, ..., c_{e-1}) in the polynomial basis is
sum c_i p^i.  Extension fields built on top of another FieldSpec (used
for residue fields F_q[theta]/(P)) code their elements in base q the
same way.  Arithmetic runs through small precomputed tables, which is
plenty for the field sizes this library targets (q <= 1024).
"""

from __future__ import annotations

import json
from functools import cached_property

MAX_FIELD_SIZE = 1024

BUILTIN_MODULI = {
    # q -> (p, ascending coefficients over F_p, monic)
    4: (2, (1, 1, 1)),        # xi^2 + xi + 1
    8: (2, (1, 1, 0, 1)),     # xi^3 + xi + 1
    9: (3, (1, 0, 1)),        # xi^2 + 1
    16: (2, (1, 1, 0, 0, 1)), # xi^4 + xi + 1
    25: (5, (2, 0, 1)),       # xi^2 + 2
    27: (3, (1, 2, 0, 1)),    # xi^3 + 2 xi + 1
}


class FieldError(ValueError):
    """Raised for invalid field data or mixed-field operations."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


# ---------------------------------------------------------------------------
# Low-level polynomial kernels on lists of field codes.
#
# These operate on ascending coefficient lists whose entries are codes of
# some FieldSpec `F`.  They back both extension-field construction and the
# APoly ring in polyring.py.

def poly_trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return list(c[:i])


def poly_add(F, a, b):
    add = F.add_code
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = add(out[i], x)
    return poly_trim(out)


def poly_scale(F, a, s):
    if s == 0:
        return []
    mul = F.mul_code
    return [mul(x, s) for x in a]


def poly_mul(F, a, b):
    if not a or not b:
        return []
    add = F.add_code
    mul = F.mul_code
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = add(out[i + j], mul(x, y))
    return poly_trim(out)


def poly_divmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    if da < db:
        return [], poly_trim(a)
    inv_lead = F.inv_code(b[-1])
    mul, add, neg = F.mul_code, F.add_code, F.neg_code
    q = [0] * (da - db + 1)
    for i in range(da, db - 1, -1):
        c = a[i]
        if c == 0:
            continue
        f = mul(c, inv_lead)
        q[i - db] = f
        for j, y in enumerate(b):
            if y:
                a[i - db + j] = add(a[i - db + j], neg(mul(f, y)))
    return poly_trim(q), poly_trim(a)


def poly_mod(F, a, b):
    return poly_divmod(F, a, b)[1]


def poly_gcd(F, a, b):
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_mod(F, a, b)
    if a:
        a = poly_scale(F, a, F.inv_code(a[-1]))
    return a


def poly_powmod(F, a, n, m):
    result = [1]
    base = poly_mod(F, a, m)
    while n > 0:
        if n & 1:
            result = poly_mod(F, poly_mul(F, result, base), m)
        n >>= 1
        if n:
            base = poly_mod(F, poly_mul(F, base, base), m)
    return result


def poly_is_irreducible(F, m) -> bool:
    """Exhaustive-style irreducibility test for a monic coefficient list.

    Checks gcd(m, x^(q^i) - x) = 1 for i <= deg(m)/2, which detects any
    factor of degree up to deg(m)/2.
    """
    deg = len(m) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    x_power = [0, 1]  # x mod m
    for i in range(1, deg // 2 + 1):
        x_power = poly_powmod(F, x_power, F.q, m)
        diff = poly_add(F, x_power, poly_scale(F, [0, 1], F.neg_code(1)))
        if len(poly_gcd(F, m, diff)) > 1:
            return False
    return True


# ---------------------------------------------------------------------------


class FieldSpec:
    """A finite field F_q given by a monic irreducible modulus.

    Prime-based fields take p and a modulus over F_p.  Extension fields
    (residue fields of F_q[theta]) are built on a base FieldSpec via
    :meth:`extension`; their element codes are base-q digit vectors.
    """

    def __init__(self, p: int, modulus, base: "FieldSpec | None" = None):
        if base is None:
            if not _is_prime(p):
                raise FieldError(f"p = {p} is not prime")
            modulus = tuple(int(c) % p for c in modulus)
            ground_q = p
        else:
            p = base.p
            modulus = tuple(int(c) for c in modulus)
            if any(not (0 <= c < base.q) for c in modulus):
                raise FieldError("extension modulus coefficients out of range")
            ground_q = base.q
        if len(modulus) < 2 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree >= 1")
        self.p = p
        self.base = base
        self.modulus = modulus
        self.rel_degree = len(modulus) - 1
        self.e = self.rel_degree if base is None else base.e * self.rel_degree
        self.q = p ** self.e
        if self.q > MAX_FIELD_SIZE:
            raise FieldError(f"field size {self.q} exceeds supported maximum")
        self._ground_q = ground_q
        if self.rel_degree > 1 and not poly_is_irreducible(
                base if base is not None else _PrimeField(p), list(modulus)):
            raise FieldError("modulus is reducible")

    # -- construction helpers ------------------------------------------------

    @classmethod
    def default(cls, q: int) -> "FieldSpec":
        """Field of size q using the built-in modulus table (prime q: F_p)."""
        if _is_prime(q):
            return cls(q, (0, 1))
        if q not in BUILTIN_MODULI:
            raise FieldError(f"no built-in modulus for q = {q}; supply one")
        p, mod = BUILTIN_MODULI[q]
        return cls(p, mod)

    @classmethod
    def extension(cls, base: "FieldSpec", modulus_codes) -> "FieldSpec":
        """The quotient base[x]/(modulus), e.g. a residue field A/(P)."""
        return cls(base.p, modulus_codes, base=base)

    # -- codes <-> coordinates ----------------------------------------------

    def digits(self, code: int):
        """Ground-field digit vector of a code (length = relative degree)."""
        g = self._ground_q
        return [(code // g ** i) % g for i in range(self.rel_degree)]

    def from_digits(self, digs) -> int:
        g = self._ground_q
        return sum(int(d) % g * g ** i for i, d in enumerate(digs))

    def coords(self, code: int):
        """F_p coordinate vector of an element, length e (tower flattened)."""
        if self.base is None:
            return self.digits(code)
        out = []
        for d in self.digits(code):
            out.extend(self.base.coords(d))
        return out

    def from_coords(self, coords) -> int:
        coords = list(coords)
        if len(coords) != self.e:
            raise FieldError(f"expected {self.e} coordinates, got {len(coords)}")
        if self.base is None:
            return self.from_digits(coords)
        eb = self.base.e
        digs = [self.base.from_coords(coords[i * eb:(i + 1) * eb])
                for i in range(self.rel_degree)]
        return self.from_digits(digs)

    # -- arithmetic tables ---------------------------------------------------

    @cached_property
    def _tables(self):
        q = self.q
        if self.base is None and self.e == 1:
            p = self.p
            add = [[(i + j) % p for j in range(p)] for i in range(p)]
            mul = [[(i * j) % p for j in range(p)] for i in range(p)]
        else:
            ground = self.base if self.base is not None else _PrimeField(self.p)
            mod = list(self.modulus)
            add = [[0] * q for _ in range(q)]
            mul = [[0] * q for _ in range(q)]
            polys = [self.digits(c) for c in range(q)]
            gadd = ground.add_code
            for i in range(q):
                pi = polys[i]
                for j in range(i, q):
                    s = self.from_digits([gadd(a, b) for a, b in zip(pi, polys[j])])
                    add[i][j] = s
                    add[j][i] = s
            for i in range(1, q):
                pi = poly_trim(polys[i])
                for j in range(i, q):
                    prod = poly_mod(ground, poly_mul(ground, pi, poly_trim(polys[j])), mod)
                    prod = prod + [0] * (self.rel_degree - len(prod))
                    s = self.from_digits(prod)
                    mul[i][j] = s
                    mul[j][i] = s
        inv = [0] * q
        for i in range(1, q):
            row = mul[i]
            inv[i] = row.index(1)
        neg = [0] * q
        for i in range(q):
            neg[i] = add[i].index(0)
        frob = [self.pow_code_raw(mul, i, self.p) for i in range(q)]
        return add, mul, inv, neg, frob

    @staticmethod
    def pow_code_raw(mul, a, n):
        r = 1
        while n > 0:
            if n & 1:
                r = mul[r][a]
            n >>= 1
            if n:
                a = mul[a][a]
        return r

    def add_code(self, a: int, b: int) -> int:
        return self._tables[0][a][b]

    def mul_code(self, a: int, b: int) -> int:
        return self._tables[1][a][b]

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of zero field element")
        return self._tables[2][a]

    def neg_code(self, a: int) -> int:
        return self._tables[3][a]

    def frob_code(self, a: int, j: int = 1) -> int:
        t = self._tables[4]
        for _ in range(j % self.e if self.e > 0 else 0):
            a = t[a]
        return a

    def pow_code(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv_code(a), -n
        return self.pow_code_raw(self._tables[1], a, n)

    @cached_property
    def add_table(self):
        return self._tables[0]

    @cached_property
    def mul_table(self):
        return self._tables[1]

    # -- element constructors -------------------------------------------------

    def zero(self) -> "FqElem":
        return FqElem(self, 0)

    def one(self) -> "FqElem":
        return FqElem(self, 1)

    def elem(self, value) -> "FqElem":
        if isinstance(value, FqElem):
            if value.spec != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, int):
            if self.e == 1 or 0 <= value < self.p:
                return FqElem(self, value % self.p)
            raise FieldError("integer values above p are ambiguous; use a code or coords")
        return FqElem(self, self.from_coords(value))

    def elem_from_code(self, code: int) -> "FqElem":
        if not 0 <= code < self.q:
            raise FieldError(f"code {code} out of range for q = {self.q}")
        return FqElem(self, code)

    def elements(self):
        return [FqElem(self, c) for c in range(self.q)]

    # -- value semantics -------------------------------------------------------

    def _key(self):
        base_key = self.base._key() if self.base is not None else None
        return (self.p, self.modulus, base_key)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.base is None:
            return f"FieldSpec(p={self.p}, e={self.e})"
        return f"FieldSpec(q={self.base.q}^{self.rel_degree})"

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        if self.base is not None:
            raise FieldError("tower extensions have no external JSON form")
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, doc) -> "FieldSpec":
        if isinstance(doc, str):
            doc = json.loads(doc)
        p, e, modulus = doc["p"], doc["e"], doc["modulus"]
        spec = cls(p, modulus)
        if spec.e != e:
            raise FieldError(f"declared e = {e} does not match modulus degree {spec.e}")
        return spec


class _PrimeField:
    """Minimal F_p arithmetic used before a FieldSpec's tables exist."""

    def __init__(self, p):
        self.p = p
        self.q = p

    def add_code(self, a, b):
        return (a + b) % self.p

    def mul_code(self, a, b):
        return (a * b) % self.p

    def neg_code(self, a):
        return (-a) % self.p

    def inv_code(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inversion of zero")
        return pow(a, self.p - 2, self.p)


class FqElem:
    """An element of a FieldSpec, stored as an integer code."""

    __slots__ = ("spec", "code")

    def __init__(self, spec: FieldSpec, code: int):
        self.spec = spec
        self.code = code

    @property
    def coords(self):
        return self.spec.coords(self.code)

    def _check(self, other):
        if not isinstance(other, FqElem):
            raise TypeError(f"cannot combine FqElem with {type(other).__name__}")
        if other.spec != self.spec:
            raise FieldError("operands belong to different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FqElem(self.spec, self.spec.add_code(self.code, other.code))

    def __neg__(self):
        return FqElem(self.spec, self.spec.neg_code(self.code))

    def __sub__(self, other):
        other = self._check(other)
        return self + (-other)

    def __mul__(self, other):
        other = self._check(other)
        return FqElem(self.spec, self.spec.mul_code(self.code, other.code))

    def __truediv__(self, other):
        other = self._check(other)
        return FqElem(self.spec, self.spec.mul_code(self.code, self.spec.inv_code(other.code)))

    def __pow__(self, n: int):
        return FqElem(self.spec, self.spec.pow_code(self.code, n))

    def inverse(self):
        return FqElem(self.spec, self.spec.inv_code(self.code))

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, int):
            return self.spec.e == 1 and self.code == other % self.p_char()
        return isinstance(other, FqElem) and other.spec == self.spec and other.code == self.code

    def p_char(self):
        return self.spec.p

    def __hash__(self):
        return hash((self.spec, self.code))

    def __repr__(self):
        return f"Fq({self.code})"

    def to_json(self):
        return self.coords


def frobenius(x: FqElem, j: int = 1) -> FqElem:
    """The j-fold p-power Frobenius x -> x^(p^j)."""
    if j < 0:
        raise ValueError("Frobenius iterate must be nonnegative")
    return FqElem(x.spec, x.spec.frob_code(x.code, j))


def find_embedding(src: FieldSpec, dst: FieldSpec):
    """Embedding of src into dst by locating a root of src's modulus.

    Returns a code-to-code list realizing an F_p-algebra homomorphism, or
    raises FieldError when dst contains no root (src does not embed).
    """
    if src.p != dst.p:
        raise FieldError("fields have different characteristic")
    if dst.e % src.e != 0:
        raise FieldError(f"F_{src.q} does not embed into F_{dst.q}")
    if src.base is not None:
        raise FieldError("embedding source must be a prime-based field")
    mod = [c % src.p for c in src.modulus]
    root = None
    for cand in range(dst.q):
        acc = 0
        for c in reversed(mod):
            acc = dst.add_code(dst.mul_code(acc, cand), c % dst.p)
        if acc == 0:
            root = cand
            break
    if root is None:
        raise FieldError("no root of source modulus in destination field")
    table = [0] * src.q
    for code in range(src.q):
        acc = 0
        power = 1
        for c in src.digits(code):
            if c:
                acc = dst.add_code(acc, dst.mul_code(c % dst.p, power))
            power = dst.mul_code(power, root)
        table[code] = acc
    return table


# ---------------------------------------------------------------------------
# p-adic exponents


class ZpExp:
    """A p-adic integer known modulo p^M, as digits d_0..d_{M-1}."""

    __slots__ = ("p", "digits")

    def __init__(self, p: int, digits):
        digits = tuple(int(d) for d in digits)
        if not _is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if len(digits) < 1:
            raise ValueError("need at least one digit")
        if any(not (0 <= d < p) for d in digits):
            raise ValueError("digits out of range")
        self.p = p
        self.digits = digits

    @property
    def precision(self) -> int:
        return len(self.digits)

    @classmethod
    def from_int(cls, n: int, p: int, precision: int) -> "ZpExp":
        """Digits of n mod p^precision (negative n wraps p-adically)."""
        n %= p ** precision
        return cls(p, [(n // p ** i) % p for i in range(precision)])

    def as_int(self) -> int:
        """The canonical representative in [0, p^M)."""
        return sum(d * self.p ** i for i, d in enumerate(self.digits))

    def base_q_digits(self, e: int):
        """Digits base q = p^e, as far as the p-adic precision allows."""
        m = self.precision // e
        n = self.as_int()
        q = self.p ** e
        return [(n // q ** i) % q for i in range(m)]

    def __eq__(self, other):
        return isinstance(other, ZpExp) and (self.p, self.digits) == (other.p, other.digits)

    def __hash__(self):
        return hash((self.p, self.digits))

    def __repr__(self):
        return f"ZpExp(p={self.p}, digits={list(self.digits)})"

    def to_json(self):
        return {"p": self.p, "digits": list(self.digits)}

    @classmethod
    def from_json(cls, doc) -> "ZpExp":
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(doc["p"], doc["digits"])


# ---------------------------------------------------------------------------
# digit utilities


def lq_digit_sum(n: int, q: int) -> int:
    """Sum of the base-q digits of n >= 0."""
    if n < 0:
        raise ValueError("digit sum of a negative integer")
    s = 0
    while n:
        s += n % q
        n //= q
    return s


def base_digits(n: int, q: int):
    """Ascending base-q digits of n >= 0 (empty for n = 0)."""
    out = []
    while n:
        out.append(n % q)
        n //= q
    return out


def binom_mod_p(k: int, m: int, p: int) -> int:
    """Binomial coefficient C(k, m) mod p by the digit-wise Lucas product."""
    if m < 0 or k < 0:
        return 0
    if k < m:
        return 0
    result = 1
    while m or k:
        km, mm = k % p, m % p
        if mm > km:
            return 0
        num = den = 1
        for i in range(mm):
            num = num * (km - i) % p
            den = den * (i + 1) % p
        result = result * num * pow(den, p - 2, p) % p if p > 2 else result * num % p
        k //= p
        m //= p
    return result


# ---------------------------------------------------------------------------
# residue characters


class ResidueChar:
    """The character a -> (a mod P)^delta on polynomials prime to P.

    Values live in the residue field F_q[theta]/(P), an extension
    FieldSpec of the coefficient field; P | a maps to zero.
    """

    def __init__(self, field: FieldSpec, P_codes, delta: int):
        P_codes = tuple(int(c) for c in P_codes)
        if len(P_codes) < 2 or P_codes[-1] != 1:
            raise ValueError("P must be monic of degree >= 1")
        if not poly_is_irreducible(field, list(P_codes)):
            raise ValueError("P is reducible")
        self.field = field
        self.P_codes = P_codes
        self.dP = len(P_codes) - 1
        self.residue_field = (FieldSpec.extension(field, P_codes)
                              if self.dP > 1 else field)
        self.order = field.q ** self.dP - 1
        self.delta = delta % self.order if self.order > 1 else 0

    def eval_codes(self, coeff_codes) -> int:
        """Character value of the polynomial with the given coefficients."""
        residue = poly_mod(self.field, list(coeff_codes), list(self.P_codes))
        if not residue:
            return 0
        if self.dP == 1:
            return self.field.pow_code(residue[0], self.delta)
        residue = residue + [0] * (self.dP - len(residue))
        code = self.residue_field.from_digits(residue)
        return self.residue_field.pow_code(code, self.delta)

    def __repr__(self):
        return f"ResidueChar(P={list(self.P_codes)}, delta={self.delta})"


def char_eval(chi: ResidueChar, a) -> FqElem:
    """Evaluate a residue character at a polynomial (APoly or code list)."""
    codes = getattr(a, "coeff_codes", a)
    return FqElem(chi.residue_field, chi.eval_codes(codes))
