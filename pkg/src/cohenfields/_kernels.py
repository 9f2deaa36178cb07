"""Low-level dense polynomial kernels over F_p.

Coefficient vectors are sequences of ints in ``[0, p)``, index = exponent,
zero polynomial = empty list.  Multiplication packs both operands into
single big integers (one fixed-width little-endian slot per coefficient)
so the whole convolution runs through CPython's native bignum multiply;
the slot width is chosen so no column sum can overflow into its
neighbour.  Everything here is pure and allocation-only.
"""

from __future__ import annotations


def pack_slots(vec, width):
    """Pack a vector of small non-negative ints into one integer."""
    buf = bytearray(len(vec) * width)
    pos = 0
    for c in vec:
        buf[pos:pos + width] = c.to_bytes(width, "little")
        pos += width
    return int.from_bytes(buf, "little")


def unpack_slots(n, count, width):
    """Inverse of :func:`pack_slots` (no modular reduction)."""
    raw = n.to_bytes(count * width, "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little")
            for i in range(count)]


def slot_width(maxval):
    """Bytes per slot so entries up to ``maxval`` cannot collide."""
    return max(1, (maxval.bit_length() + 7) // 8)


def conv_mod_p(a, b, p):
    """Convolution of two coefficient vectors, entries reduced mod p."""
    na, nb = len(a), len(b)
    if na == 0 or nb == 0:
        return []
    width = slot_width(min(na, nb) * (p - 1) * (p - 1))
    prod = pack_slots(a, width) * pack_slots(b, width)
    out = unpack_slots(prod, na + nb - 1, width)
    return [c % p for c in out]


def pstrip(a):
    """Drop trailing zeros (list in place is avoided; returns a list)."""
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return list(a[:n])


def padd(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return pstrip(out)


def pneg(a, p):
    return [(-c) % p for c in a]


def psub(a, b, p):
    return padd(a, pneg(b, p), p)


def pmul(a, b, p):
    return pstrip(conv_mod_p(a, b, p))


def pscale(a, c, p):
    c %= p
    if c == 0:
        return []
    return [(x * c) % p for x in a]


def pdivmod(a, b, p):
    """Quotient and remainder of dense F_p polynomials; b must be nonzero."""
    b = pstrip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv_lc = pow(b[-1], p - 2, p)
    q = [0] * max(0, len(r) - db)
    while len(pstrip(r)) - 1 >= db:
        r = pstrip(r)
        k = len(r) - 1 - db
        c = (r[-1] * inv_lc) % p
        q[k] = c
        for i, bc in enumerate(b):
            r[k + i] = (r[k + i] - c * bc) % p
    return pstrip(q), pstrip(r)


def pgcd(a, b, p):
    """Monic gcd of dense F_p polynomials."""
    a, b = pstrip(a), pstrip(b)
    while b:
        a, b = b, pdivmod(a, b, p)[1]
    return pmonic(a, p)


def pmonic(a, p):
    a = pstrip(a)
    if not a or a[-1] == 1:
        return a
    return pscale(a, pow(a[-1], p - 2, p), p)


def pdilate(a, k):
    """Substitute v -> v**k (spread exponents by a factor of k)."""
    if k == 1 or not a:
        return list(a)
    out = [0] * ((len(a) - 1) * k + 1)
    for i, c in enumerate(a):
        out[i * k] = c
    return out


def pis_dilated(a, k):
    """True if every nonzero exponent is a multiple of k."""
    return all(c == 0 or i % k == 0 for i, c in enumerate(a))


def pcontract(a, k):
    """Inverse of :func:`pdilate`; requires :func:`pis_dilated`."""
    return [a[i] for i in range(0, len(a), k)]
