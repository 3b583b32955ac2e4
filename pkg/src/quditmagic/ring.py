"""Residue-ring and Galois-ring arithmetic.

Covers prime factorization of the qudit dimension q, CRT splitting, and the
Galois ring GR(p^r, n) with Frobenius, trace and trace-dual bases.  The ring
is represented as Z_{p^r}[x]/(h) where h is the Hensel lift of the
lexicographically smallest monic degree-n irreducible factor of
x^{p^n - 1} - 1 over F_p; the class of x is then a Teichmuller element.
For n = 1 the convention h = x - 1 makes GR(p^r, 1) = Z_{p^r} with the
trace equal to the identity.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import sympy
from sympy.polys.domains import ZZ
from sympy.polys.factortools import dup_zz_hensel_lift
from sympy.polys.galoistools import gf_irreducible_p


class InvalidModulus(ValueError):
    pass


class InvalidPrime(ValueError):
    pass


class RingMismatch(ValueError):
    pass


class NotAUnit(ValueError):
    pass


class NotABasis(ValueError):
    pass


@dataclass(frozen=True)
class Modulus:
    """A qudit dimension together with its canonical prime factorization."""

    q: int
    factors: Tuple[Tuple[int, int], ...]  # ascending (prime, exponent) pairs


def factorize(q: int) -> Modulus:
    """Canonical factorization of the qudit dimension."""
    if q < 2:
        raise InvalidModulus("modulus must be >= 2, got %r" % (q,))
    fac = sympy.factorint(q)
    factors = tuple(sorted((int(p), int(r)) for p, r in fac.items()))
    return Modulus(q=q, factors=factors)


def crt_split(a: int, m: Modulus) -> Tuple[int, ...]:
    """Residues of a modulo each prime-power factor of q."""
    return tuple(a % (p ** r) for p, r in m.factors)


def crt_combine(residues: Sequence[int], m: Modulus) -> int:
    """Inverse of crt_split."""
    moduli = [p ** r for p, r in m.factors]
    if len(residues) != len(moduli):
        raise InvalidModulus("residue count does not match factorization")
    a = 0
    for res, mod in zip(residues, moduli):
        other = m.q // mod
        # other is invertible mod this prime power
        a += res * other * pow(other, -1, mod)
    return a % m.q


# ---------------------------------------------------------------------------
# Polynomial helpers over Z_m (dense ascending coefficient tuples)
# ---------------------------------------------------------------------------

def _poly_trim(c: List[int]) -> List[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: Sequence[int], b: Sequence[int], m: int) -> List[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % m
    return _poly_trim(out)


def _poly_rem(a: Sequence[int], h: Sequence[int], m: int) -> List[int]:
    """Remainder of a modulo monic h, coefficients mod m."""
    a = _poly_trim([x % m for x in a])
    dh = len(h) - 1
    while len(a) > dh:
        lead = a[-1]
        shift = len(a) - 1 - dh
        for i, hi in enumerate(h):
            a[shift + i] = (a[shift + i] - lead * hi) % m
        a = _poly_trim(a)
    return a


def _poly_divmod_fp(a: Sequence[int], b: Sequence[int], p: int):
    """Quotient and remainder in F_p[x]; b need not be monic."""
    a = _poly_trim([x % p for x in a])
    b = _poly_trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b):
        coeff = (r[-1] * inv_lead) % p
        shift = len(r) - len(b)
        q[shift] = coeff
        for i, bi in enumerate(b):
            r[shift + i] = (r[shift + i] - coeff * bi) % p
        r = _poly_trim(r)
        if not r:
            break
    return _poly_trim(q), _poly_trim(r)


def _poly_invert_fp(a: Sequence[int], h: Sequence[int], p: int) -> List[int]:
    """Inverse of a modulo (h, p) by extended Euclid in F_p[x]."""
    r0, r1 = _poly_trim([x % p for x in h]), _poly_trim([x % p for x in a])
    s0: List[int] = []
    s1: List[int] = [1]
    while r1:
        q, r = _poly_divmod_fp(r0, r1, p)
        r0, r1 = r1, r
        qs1 = _poly_mul(q, s1, p)
        new_s = [0] * max(len(s0), len(qs1))
        for i, v in enumerate(s0):
            new_s[i] = v
        for i, v in enumerate(qs1):
            new_s[i] = (new_s[i] - v) % p
        s0, s1 = s1, _poly_trim(new_s)
    if len(r0) != 1:
        raise NotAUnit("element not invertible modulo p")
    c = pow(r0[0], -1, p)
    return _poly_trim([(c * x) % p for x in s0])


# ---------------------------------------------------------------------------
# Galois rings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaloisRing:
    p: int
    r: int
    n: int
    h: Tuple[int, ...]  # monic, ascending coefficients, reduced mod p^r

    @property
    def modulus(self) -> int:
        return self.p ** self.r

    @property
    def size(self) -> int:
        return self.p ** (self.r * self.n)

    def element(self, coeffs: Sequence[int]) -> "RingElement":
        m = self.modulus
        c = list(coeffs) + [0] * (self.n - len(coeffs))
        if len(c) > self.n:
            c = _poly_rem(c, self.h, m)
            c = list(c) + [0] * (self.n - len(c))
        return RingElement(self, tuple(x % m for x in c))

    def zero(self) -> "RingElement":
        return self.element([])

    def one(self) -> "RingElement":
        return self.element([1])

    def xi(self) -> "RingElement":
        """The distinguished Teichmuller generator (class of x)."""
        if self.n == 1:
            return self.one()
        return self.element([0, 1])

    def from_index(self, idx: int) -> "RingElement":
        """Element whose coefficient vector is idx written base p^r."""
        m = self.modulus
        coeffs = []
        for _ in range(self.n):
            coeffs.append(idx % m)
            idx //= m
        return self.element(coeffs)

    def elements(self):
        for idx in range(self.size):
            yield self.from_index(idx)


@dataclass(frozen=True)
class RingElement:
    ring: GaloisRing
    coeffs: Tuple[int, ...]

    def __add__(self, other: "RingElement") -> "RingElement":
        return ring_add(self, other)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return ring_add(self, ring_neg(other))

    def __mul__(self, other: "RingElement") -> "RingElement":
        return ring_mul(self, other)

    def __neg__(self) -> "RingElement":
        return ring_neg(self)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


def _check_same_ring(x: RingElement, y: RingElement) -> None:
    if x.ring != y.ring:
        raise RingMismatch("elements belong to different rings")


def ring_add(x: RingElement, y: RingElement) -> RingElement:
    _check_same_ring(x, y)
    m = x.ring.modulus
    return RingElement(
        x.ring, tuple((a + b) % m for a, b in zip(x.coeffs, y.coeffs))
    )


def ring_neg(x: RingElement) -> RingElement:
    m = x.ring.modulus
    return RingElement(x.ring, tuple((-a) % m for a in x.coeffs))


def ring_mul(x: RingElement, y: RingElement) -> RingElement:
    _check_same_ring(x, y)
    ring = x.ring
    prod = _poly_mul(x.coeffs, y.coeffs, ring.modulus)
    red = _poly_rem(prod, ring.h, ring.modulus)
    red = list(red) + [0] * (ring.n - len(red))
    return RingElement(ring, tuple(red))


def ring_pow(x: RingElement, e: int) -> RingElement:
    out = x.ring.one()
    base = x
    while e:
        if e & 1:
            out = ring_mul(out, base)
        base = ring_mul(base, base)
        e >>= 1
    return out


def scalar_mul(c: int, x: RingElement) -> RingElement:
    m = x.ring.modulus
    return RingElement(x.ring, tuple((c * a) % m for a in x.coeffs))


def is_unit(x: RingElement) -> bool:
    """Units are exactly the elements outside pR."""
    return any(c % x.ring.p != 0 for c in x.coeffs)


def inverse(x: RingElement) -> RingElement:
    """Two-sided inverse of a unit, by mod-p inversion plus Newton lifting."""
    ring = x.ring
    if not is_unit(x):
        raise NotAUnit("element lies in pR")
    y0 = _poly_invert_fp(x.coeffs, ring.h, ring.p)
    y = ring.element(y0)
    # y -> y(2 - xy) squares the precision in p each step.
    steps = max(1, (ring.r - 1).bit_length())
    two = ring.element([2])
    for _ in range(steps):
        y = ring_mul(y, two - ring_mul(x, y))
    return y


def frobenius(x: RingElement) -> RingElement:
    """The ring automorphism sending the Teichmuller generator xi to xi^p."""
    ring = x.ring
    if ring.n == 1:
        return x
    xi_p = ring_pow(ring.xi(), ring.p)
    acc = ring.zero()
    power = ring.one()
    for c in x.coeffs:
        acc = ring_add(acc, scalar_mul(c, power))
        power = ring_mul(power, xi_p)
    return acc


def trace(x: RingElement) -> int:
    """Ring trace down to Z_{p^r}: sum of the n Frobenius conjugates."""
    ring = x.ring
    acc = ring.zero()
    y = x
    for _ in range(ring.n):
        acc = ring_add(acc, y)
        y = frobenius(y)
    if any(c != 0 for c in acc.coeffs[1:]):
        raise ArithmeticError("trace did not land in the base ring")
    return acc.coeffs[0]


def dual_basis(basis: Sequence[RingElement]) -> List[RingElement]:
    """Basis e* with Tr(e_i e*_j) = delta_ij, via the Gram-matrix solve."""
    ring = basis[0].ring
    n = ring.n
    if len(basis) != n:
        raise NotABasis("expected %d basis elements" % n)
    gram = sympy.Matrix(
        [[trace(ring_mul(basis[i], basis[j])) for j in range(n)] for i in range(n)]
    )
    det = int(gram.det())
    m = ring.modulus
    if det % ring.p == 0:
        raise NotABasis("Gram matrix singular modulo p^r")
    det_inv = pow(det % m, -1, m)
    adj = gram.adjugate()
    inv = [[(det_inv * int(adj[i, j])) % m for j in range(n)] for i in range(n)]
    dual = []
    for j in range(n):
        acc = ring.zero()
        for i in range(n):
            acc = ring_add(acc, scalar_mul(inv[i][j], basis[i]))
        dual.append(acc)
    return dual


def power_basis(ring: GaloisRing) -> List[RingElement]:
    """The basis 1, xi, ..., xi^(n-1)."""
    out = [ring.one()]
    for _ in range(ring.n - 1):
        out.append(ring_mul(out[-1], ring.xi()))
    return out


def _smallest_irreducible(p: int, n: int) -> List[int]:
    """Lexicographically smallest (by ascending coefficient tuple) monic
    irreducible degree-n polynomial over F_p."""
    for idx in range(p ** n):
        coeffs = []
        t = idx
        for _ in range(n):
            coeffs.append(t % p)
            t //= p
        poly = coeffs + [1]
        dense_desc = list(reversed(poly))
        if gf_irreducible_p([ZZ(c) for c in dense_desc], p, ZZ):
            return poly
    raise ArithmeticError("no irreducible polynomial found")


def construct_galois_ring(p: int, r: int, n: int) -> GaloisRing:
    if not sympy.isprime(p):
        raise InvalidPrime("p must be prime, got %r" % (p,))
    if r < 1 or n < 1:
        raise InvalidPrime("exponent and degree must be >= 1")
    m = p ** r
    if n == 1:
        return GaloisRing(p=p, r=r, n=1, h=((m - 1) % m, 1))
    h0 = _smallest_irreducible(p, n)
    if r == 1:
        return GaloisRing(p=p, r=1, n=n, h=tuple(h0))
    # Hensel-lift h0 inside x^(p^n - 1) - 1 from mod p to mod p^r.
    order = p ** n - 1
    big = [0] * (order + 1)
    big[0] = -1
    big[order] = 1
    big_desc = [ZZ(c) for c in reversed(big)]
    h0_desc = [ZZ(c) for c in reversed(h0)]
    cof_asc, rem = _poly_divmod_fp(big, h0, p)
    if rem:
        raise ArithmeticError("irreducible factor does not divide x^(p^n-1)-1")
    cof_desc = [ZZ(c) for c in reversed(cof_asc)]
    lifted = dup_zz_hensel_lift(p, big_desc, [h0_desc, cof_desc], r, ZZ)
    h_desc = lifted[0]
    h = [int(c) % m for c in reversed(h_desc)]
    if [c % p for c in h] != [c % p for c in h0]:
        raise ArithmeticError("Hensel lift did not preserve the mod-p factor")
    return GaloisRing(p=p, r=r, n=n, h=tuple(h))
