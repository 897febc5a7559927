"""Fast internal representations for polynomials in theta over F_q.

The public ring type is APoly; these kernels back the hot enumeration
loops (power-sum shells, Pellarin coefficients, scan oracles) with a
compact integer encoding per characteristic:

* p = 2: a polynomial is a tuple of e bitmask ints, one plane per
  F_p-coordinate; addition is XOR, multiplication is carry-less.
* p odd: a tuple of e ints packing the coordinate planes in base 2^24,
  so addition and convolution ride on Python's big-int arithmetic and
  digits are reduced mod p only when a value is read back.

Results are bit-identical to APoly arithmetic; tests cross-check the
two routes.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .fields import FieldSpec

_PACK_BITS = 24
_PACK_MASK = (1 << _PACK_BITS) - 1
# packed digits stay below 2^24: products of normalized inputs add at
# most len * (p-1)^2 per digit and accumulation loops stay far shorter
# than 2^24 / (p-1) steps for the grid sizes this library targets.


def _clmul(a: int, b: int) -> int:
    r = 0
    while b:
        low = b & -b
        r ^= a << (low.bit_length() - 1)
        b ^= low
    return r


class _BitKernel:
    """Characteristic-2 kernel: planes of bitmask integers."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.e = spec.e
        self.q = spec.q
        # scale_rows[c][j] = bitmask of source planes XORed into plane j
        # when multiplying by the element with code c
        self.scale_rows = []
        for c in range(spec.q):
            rows = []
            for j in range(self.e):
                mask = 0
                for i in range(self.e):
                    prod = spec.mul_code(c, 1 << i)
                    if spec.coords(prod)[j]:
                        mask |= 1 << i
                rows.append(mask)
            self.scale_rows.append(rows)
        # plane-product reduction: xi^(i+j) written in coordinates
        self.red = []
        for k in range(2 * self.e - 1):
            code = spec.pow_code(2, k) if self.e > 1 else 1
            self.red.append(spec.coords(code) if self.e > 1 else [1])

    def zero(self):
        return (0,) * self.e

    def is_zero(self, x):
        return not any(x)

    def from_codes(self, codes):
        planes = [0] * self.e
        for i, c in enumerate(codes):
            for j, bit in enumerate(self.spec.coords(c)):
                if bit:
                    planes[j] |= 1 << i
        return tuple(planes)

    def to_codes(self, x):
        if not any(x):
            return ()
        if self.e == 1:
            bits = bin(x[0])[:1:-1]  # ascending bit characters
            return tuple(1 if ch == "1" else 0 for ch in bits)
        n = max(v.bit_length() for v in x)
        planes = [bin(v)[:1:-1].ljust(n, "0") for v in x]
        out = []
        for i in range(n):
            out.append(self.spec.from_coords([1 if pl[i] == "1" else 0 for pl in planes]))
        while out and out[-1] == 0:
            out.pop()
        return tuple(out)

    def add(self, x, y):
        return tuple(a ^ b for a, b in zip(x, y))

    def shift(self, x, k):
        """Multiply by theta^k."""
        return tuple(v << k for v in x)

    def scale(self, x, code):
        if code == 0:
            return self.zero()
        if code == 1:
            return x
        rows = self.scale_rows[code]
        out = []
        for j in range(self.e):
            acc = 0
            mask = rows[j]
            while mask:
                low = mask & -mask
                acc ^= x[low.bit_length() - 1]
                mask ^= low
            out.append(acc)
        return tuple(out)

    def mul(self, x, y):
        if self.e == 1:
            return (_clmul(x[0], y[0]),)
        partial = [0] * (2 * self.e - 1)
        for i in range(self.e):
            if not x[i]:
                continue
            for j in range(self.e):
                if y[j]:
                    partial[i + j] ^= _clmul(x[i], y[j])
        out = [0] * self.e
        for k, v in enumerate(partial):
            if v:
                coords = self.red[k]
                for j in range(self.e):
                    if coords[j]:
                        out[j] ^= v
        return tuple(out)

    def normalize(self, x):
        return x

    def frob_spread(self, x):
        """x(theta) -> x(theta)^q, i.e. exponent spread by q."""
        q = self.q
        out = []
        for plane in x:
            spread = 0
            while plane:
                low = plane & -plane
                spread |= 1 << ((low.bit_length() - 1) * q)
                plane ^= low
            out.append(spread)
        return tuple(out)

    def pow(self, x, n: int):
        return _generic_pow(self, x, n)


class _PackedKernel:
    """Odd-characteristic kernel: base-2^24 packed coordinate planes."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.p
        self.e = spec.e
        self.q = spec.q
        self.red = []
        if self.e > 1:
            for k in range(2 * self.e - 1):
                self.red.append(spec.coords(spec.pow_code(spec.p, k)))

    def zero(self):
        return (0,) * self.e

    def is_zero(self, x):
        return not any(self.to_codes(self.normalize(x)))

    def from_codes(self, codes):
        if self.e == 1:
            buf = bytearray(3 * len(codes))
            for i, c in enumerate(codes):
                buf[3 * i] = c
            return (int.from_bytes(bytes(buf), "little"),)
        planes = [bytearray(3 * len(codes)) for _ in range(self.e)]
        for i, c in enumerate(codes):
            for j, digit in enumerate(self.spec.coords(c)):
                planes[j][3 * i] = digit
        return tuple(int.from_bytes(bytes(b), "little") for b in planes)

    def _digits(self, v):
        # 24-bit packing = 3 bytes: one linear pass via the byte string
        nbytes = (v.bit_length() + 7) // 8
        nbytes += (-nbytes) % 3
        raw = v.to_bytes(nbytes, "little")
        p = self.p
        if nbytes > 96:
            arr = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 3).astype(np.int64)
            return ((arr @ self._BYTE_WEIGHTS) % p).tolist()
        return [int.from_bytes(raw[i:i + 3], "little") % p
                for i in range(0, nbytes, 3)]

    _BYTE_WEIGHTS = np.array([1, 256, 65536], dtype=np.int64)

    def normalize(self, x):
        out = []
        for v in x:
            digs = self._digits(v)
            buf = bytearray(3 * len(digs))
            for i, d in enumerate(digs):
                if d:
                    buf[3 * i] = d
            out.append(int.from_bytes(bytes(buf), "little"))
        return tuple(out)

    def to_codes(self, x):
        digit_lists = [self._digits(v) for v in x]
        n = max((len(d) for d in digit_lists), default=0)
        if self.e == 1:
            out = digit_lists[0] if digit_lists else []
        else:
            out = []
            for i in range(n):
                coords = [d[i] if i < len(d) else 0 for d in digit_lists]
                out.append(self.spec.from_coords(coords))
        while out and out[-1] == 0:
            out.pop()
        return tuple(out)

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def shift(self, x, k):
        """Multiply by theta^k."""
        return tuple(v << (_PACK_BITS * k) for v in x)

    def scale(self, x, code):
        if code == 0:
            return self.zero()
        coords = self.spec.coords(code)
        if self.e == 1:
            return (x[0] * coords[0],)
        # multiply plane vector by the e x e matrix of `code`
        out = [0] * self.e
        for i in range(self.e):
            if not x[i]:
                continue
            prod_coords = self.spec.coords(self.spec.mul_code(code, self.spec.from_coords(
                [1 if t == i else 0 for t in range(self.e)])))
            for j, m in enumerate(prod_coords):
                if m:
                    out[j] += m * x[i]
        return tuple(out)

    def mul(self, x, y):
        # inputs must carry small digits (outputs of mul/from_codes do);
        # keeping them below ~2^10 leaves the 2^24 packing carry-free
        if self.e == 1:
            return self.normalize((x[0] * y[0],))
        partial = [0] * (2 * self.e - 1)
        for i in range(self.e):
            if not x[i]:
                continue
            for j in range(self.e):
                if y[j]:
                    partial[i + j] += x[i] * y[j]
        out = [0] * self.e
        for k, v in enumerate(partial):
            if v:
                for j, m in enumerate(self.red[k]):
                    if m:
                        out[j] += m * v
        return self.normalize(tuple(out))

    def frob_spread(self, x):
        codes = self.to_codes(self.normalize(x))
        planes = [0] * self.e
        for i, c in enumerate(codes):
            for j, digit in enumerate(self.spec.coords(c)):
                if digit:
                    planes[j] += digit << (_PACK_BITS * i * self.q)
        return tuple(planes)

    def pow(self, x, n: int):
        return _generic_pow(self, x, n)


def _generic_pow(kernel, x, n: int):
    """x^n by base-q digits: Frobenius spreads are exact and cheap."""
    if n == 0:
        return kernel.from_codes((1,))
    q = kernel.q
    result = None
    factor = x
    while n:
        d = n % q
        if d:
            piece = factor
            for _ in range(d - 1):
                piece = kernel.mul(piece, factor)
            result = piece if result is None else kernel.mul(result, piece)
        n //= q
        if n:
            factor = kernel.frob_spread(factor)
    return result


class QuotientKernel:
    """Arithmetic in F_q[theta]/(m) with kernel products and Barrett reduction.

    The reciprocal of the reversed modulus is precomputed by Newton
    iteration, so a reduction costs two kernel multiplications instead
    of a quadratic-time division loop.  Raw values are kernel (plane)
    encodings of representatives of degree < deg(m).
    """

    def __init__(self, kernel, modulus_codes):
        self.k = kernel
        self.mod_codes = tuple(modulus_codes)
        self.D = len(self.mod_codes) - 1
        self.mod_raw = kernel.from_codes(self.mod_codes)
        rev = tuple(reversed(self.mod_codes))
        self.recip = self._series_inverse(kernel.from_codes(rev), self.D + 1)

    def _truncate(self, raw, length):
        codes = self.k.to_codes(self.k.normalize(raw))
        return self.k.from_codes(codes[:length])

    def _series_inverse(self, f, length):
        """1/f mod theta^length for f with unit constant term (Newton)."""
        codes = self.k.to_codes(self.k.normalize(f))
        inv0 = self.k.spec.inv_code(codes[0])
        g = self.k.from_codes((inv0,))
        reach = 1
        two = self.k.from_codes((self.k.spec.add_code(1, 1),))
        while reach < length:
            reach = min(2 * reach, length)
            fg = self._truncate(self.k.mul(f, g), reach)
            # g <- g(2 - f g) truncated
            corr = self.k.add(two, self.k.scale(fg, self.k.spec.neg_code(1)))
            g = self._truncate(self.k.mul(g, corr), reach)
        return g

    def reduce(self, raw):
        """raw mod m for deg(raw) <= 2(D-1)."""
        codes = self.k.to_codes(self.k.normalize(raw))
        if len(codes) <= self.D:
            return self.k.from_codes(codes)
        n = len(codes) - 1
        rev_f = self.k.from_codes(tuple(reversed(codes)))
        qlen = n - self.D + 1
        q_rev = self._truncate(self.k.mul(rev_f, self.recip), qlen)
        q_codes = list(self.k.to_codes(q_rev))
        q_codes += [0] * (qlen - len(q_codes))
        quot = self.k.from_codes(tuple(reversed(q_codes)))
        prod = self.k.mul(quot, self.mod_raw)
        rem = self.k.add(self.k.normalize(raw),
                         self.k.scale(prod, self.k.spec.neg_code(1)))
        rem_codes = self.k.to_codes(self.k.normalize(rem))
        return self.k.from_codes(rem_codes[:self.D])

    def mul(self, x, y):
        return self.reduce(self.k.mul(x, y))

    def pow(self, x, n: int):
        result = self.k.from_codes((1,))
        base = x
        while n > 0:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def inverse(self, x, unit_inverse_mod_prime, digits: int | None = None):
        """Invert a unit given its inverse modulo the prime divisor of m.

        Newton lifting x -> x(2 - a x) doubles the number of correct
        prime-power digits per step; `digits` is how many are needed
        (defaults to the full modulus degree).
        """
        g = unit_inverse_mod_prime
        two = self.k.from_codes((self.k.spec.add_code(1, 1),))
        steps = max((digits if digits is not None else self.D) - 1, 1).bit_length()
        for _ in range(steps):
            ag = self.mul(x, g)
            corr = self.k.add(two, self.k.scale(ag, self.k.spec.neg_code(1)))
            g = self.mul(g, self.reduce(corr))
        return g


@lru_cache(maxsize=None)
def _kernel_for_key(key):
    spec = _SPEC_REGISTRY[key]
    return _BitKernel(spec) if spec.p == 2 else _PackedKernel(spec)


_SPEC_REGISTRY: dict = {}


def get_kernel(spec: FieldSpec):
    key = spec._key()
    _SPEC_REGISTRY[key] = spec
    return _kernel_for_key(key)


def apoly_raw(kernel, a):
    """Raw value of an APoly."""
    return kernel.from_codes(a.coeff_codes)


def raw_to_apoly(kernel, raw):
    from .polyring import APoly
    return APoly(kernel.spec, kernel.to_codes(kernel.normalize(raw)))
