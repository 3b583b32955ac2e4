"""Covers of the phase-free n-qudit Pauli group by maximal isotropic subgroups.

Members are phase-free: each is given by n symplectic generator rows over
Z_q^{2n}.  For a prime power q = p^r the family comes from the Galois ring
GR(p^r, n): identifying Z_q^n with R once through the power basis (first
slot) and once through its trace-dual basis (second slot), the members are

    E_t = {(x, t*x) : x in R}   for every t in R,
    F_s = {(s*y, y) : y in R}   for every s in p*R,

which gives p^{nr} + p^{n(r-1)} members whose union is all of R x R.  For
composite q the per-prime-power families are recombined coordinate-wise by
the Chinese remainder theorem.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from . import linalg, pauli, ring, stabilizer
from .config import BudgetExceeded, DEFAULT_CONFIG, RunConfig, log_value

Row = Tuple[int, ...]
Member = Tuple[Row, ...]


@dataclass(frozen=True)
class CoverFamily:
    q: int
    n: int
    members: Tuple[Member, ...]
    tags: Tuple[str, ...]  # "E:<t-index>" / "F:<s-index>", CRT tags joined by "*"


@dataclass(frozen=True)
class CoverReport:
    ok: bool
    member_count: int
    expected_count: int
    vector_count: int
    covered_count: int
    failures: Tuple[str, ...]
    uncovered: Optional[Tuple[int, ...]]


@lru_cache(maxsize=None)
def _cover_ring(p: int, r: int, n: int) -> ring.GaloisRing:
    return ring.construct_galois_ring(p, r, n)


def _element_index(x: ring.RingElement) -> int:
    m = x.ring.modulus
    idx = 0
    for c in reversed(x.coeffs):
        idx = idx * m + c
    return idx


def expected_member_count(q: int, n: int) -> int:
    total = 1
    for p, r in ring.factorize(q).factors:
        total *= p ** (n * r) + p ** (n * (r - 1))
    return total


def cover_prime_power(p: int, r: int, n: int) -> CoverFamily:
    """The E_t / F_s family over q = p^r; size p^{nr} + p^{n(r-1)}."""
    R = _cover_ring(p, r, n)
    q = R.modulus
    basis = ring.power_basis(R)
    dual = ring.dual_basis(basis)
    members: List[Member] = []
    tags: List[str] = []
    for t_idx in range(R.size):
        t = R.from_index(t_idx)
        rows = []
        for k in range(n):
            a = [1 if i == k else 0 for i in range(n)]
            b = [ring.trace(t * basis[k] * basis[i]) % q for i in range(n)]
            rows.append(tuple(a + b))
        members.append(tuple(rows))
        tags.append("E:%d" % t_idx)
    # p*R enumerated through coefficient vectors mod p^{r-1}
    sub = p ** (r - 1)
    for s_idx in range(sub ** n):
        rem = s_idx
        coeffs = []
        for _ in range(n):
            coeffs.append(p * (rem % sub))
            rem //= sub
        s = R.element(coeffs)
        rows = []
        for k in range(n):
            a = [ring.trace(s * dual[k] * dual[i]) % q for i in range(n)]
            b = [1 if i == k else 0 for i in range(n)]
            rows.append(tuple(a + b))
        members.append(tuple(rows))
        tags.append("F:%d" % s_idx)
    return CoverFamily(q=q, n=n, members=tuple(members), tags=tuple(tags))


def cover_composite(q: int, n: int) -> CoverFamily:
    """CRT recombination of the per-prime-power families."""
    if q < 2:
        raise ring.InvalidModulus("q must be >= 2")
    mod = ring.factorize(q)
    parts = [cover_prime_power(p, r, n) for p, r in mod.factors]
    if len(parts) == 1:
        return parts[0]
    members: List[Member] = []
    tags: List[str] = []
    for combo in itertools.product(*(range(len(f.members)) for f in parts)):
        rows = []
        for k in range(n):
            factor_rows = [parts[j].members[idx][k] for j, idx in enumerate(combo)]
            combined = [
                ring.crt_combine([fr[col] for fr in factor_rows], mod)
                for col in range(2 * n)
            ]
            rows.append(tuple(combined))
        members.append(tuple(rows))
        tags.append("*".join(parts[j].tags[idx] for j, idx in enumerate(combo)))
    return CoverFamily(q=q, n=n, members=tuple(members), tags=tuple(tags))


def _member_vectors(member: Member, q: int, n: int):
    for coeffs in itertools.product(range(q), repeat=n):
        vec = [0] * (2 * n)
        for c, row in zip(coeffs, member):
            if c:
                for i, x in enumerate(row):
                    vec[i] = (vec[i] + c * x) % q
        yield tuple(vec)


def verify_cover(c: CoverFamily, config: RunConfig = DEFAULT_CONFIG) -> CoverReport:
    """Exhaustive check: coverage of Z_q^{2n}, per-member isotropy and order,
    and the family-size formula.  Failures become report content."""
    q, n = c.q, c.n
    total = q ** (2 * n)
    if total > config.enum_limit:
        raise BudgetExceeded(
            "exhaustive verification over %d vectors exceeds limit %d"
            % (total, config.enum_limit)
        )
    failures: List[str] = []
    expected = expected_member_count(q, n)
    if len(c.members) != expected:
        failures.append(
            "family size %d != expected %d" % (len(c.members), expected)
        )
    covered = set()
    for tag, member in zip(c.tags, c.members):
        for i in range(n):
            for j in range(i + 1, n):
                sp = sum(
                    member[i][k] * member[j][n + k] - member[i][n + k] * member[j][k]
                    for k in range(n)
                ) % q
                if sp != 0:
                    failures.append("member %s generators %d,%d do not commute" % (tag, i, j))
        vecs = set(_member_vectors(member, q, n))
        if len(vecs) != q ** n:
            failures.append("member %s has order %d != q^n" % (tag, len(vecs)))
        covered |= vecs
    uncovered = None
    if len(covered) != total:
        for vec in itertools.product(range(q), repeat=2 * n):
            if vec not in covered:
                uncovered = vec
                failures.append("vector %r is uncovered" % (vec,))
                break
    return CoverReport(
        ok=not failures,
        member_count=len(c.members),
        expected_count=expected,
        vector_count=total,
        covered_count=len(covered),
        failures=tuple(failures),
        uncovered=uncovered,
    )


def _designated_prime_power(p: int, r: int, n: int, vec: Sequence[int]) -> int:
    """Index of the member the covering proof assigns to vec over q = p^r.

    Writing (x, y) = p^k (x0, y0) with x0 or y0 a unit: if x0 is a unit the
    member is E_t with t = y0 * x0^{-1}, otherwise F_s with s = x0 * y0^{-1}
    (which lies in p*R).  The zero vector goes to E_0.
    """
    R = _cover_ring(p, r, n)
    q = R.modulus
    basis = ring.power_basis(R)
    dual = ring.dual_basis(basis)
    x = R.zero()
    y = R.zero()
    for i in range(n):
        x = x + ring.scalar_mul(vec[i] % q, basis[i])
        y = y + ring.scalar_mul(vec[n + i] % q, dual[i])
    if x.is_zero() and y.is_zero():
        return 0
    k = 0
    while k < r and all(c % p ** (k + 1) == 0 for c in x.coeffs + y.coeffs):
        k += 1
    x0 = R.element([c // p ** k for c in x.coeffs])
    y0 = R.element([c // p ** k for c in y.coeffs])
    if ring.is_unit(x0):
        t = y0 * ring.inverse(x0)
        return _element_index(t)
    s = x0 * ring.inverse(y0)
    sub = p ** (r - 1)
    idx = 0
    for c in reversed(s.coeffs):
        idx = idx * sub + (c // p)
    return R.size + idx


def designated_member(c: CoverFamily, vec: Sequence[int]) -> int:
    """Index into c.members of the proof's designated member containing vec."""
    mod = ring.factorize(c.q)
    parts = [(p, r) for p, r in mod.factors]
    idx = 0
    for p, r in parts:
        qj = p ** r
        vj = [v % qj for v in vec]
        size_j = p ** (r * c.n) + p ** ((r - 1) * c.n)
        idx = idx * size_j + _designated_prime_power(p, r, c.n, vj)
    return idx


def member_group(c: CoverFamily, idx: int) -> stabilizer.StabilizerGroup:
    """Lift a phase-free member to a validated stabilizer group of order q^n
    (every generator assigned a phase making the joint +1 eigenspace
    nonempty)."""
    return lift_phase_free(c.q, c.n, c.members[idx])


def lift_phase_free(q: int, n: int, rows: Sequence[Sequence[int]]) -> stabilizer.StabilizerGroup:
    """Phase assignment for commuting phase-free rows (a|b) over Z_q^{2n}.

    Starts from the phase making each generator satisfy g^order = +1 exactly
    and repairs any relation inconsistencies by a linear congruence mod 2q.
    """
    labels = []
    for row in rows:
        a, b = list(row[:n]), list(row[n:])
        g0 = pauli.label(q, n, a, b, 0)
        delta = pauli.order(g0)
        ab = sum(x * y for x, y in zip(a, b))
        labels.append(pauli.label(q, n, a, b, ab * (delta - 1)))
    sym = [pauli.symplectic_vector(g) for g in labels]
    rels = linalg.left_kernel_mod(sym, q)
    if rels:
        rhs = [(-stabilizer.product_label(labels, m).c) % (2 * q) for m in rels]
        shift = linalg.solve_right_mod([list(m) for m in rels], rhs, 2 * q)
        if shift is None:
            raise stabilizer.InconsistentPhase("rows admit no consistent phases")
        labels = [pauli.phase_shifted(g, s) for g, s in zip(labels, shift)]
    return stabilizer.validate(labels)


def lr_upper_bound(n: int, q: int, config: RunConfig = DEFAULT_CONFIG) -> float:
    """Ceiling (n + 2^{-n-1}) * log q implied by the cover, in the configured
    base; every state's log-robustness with respect to stabilizer states
    stays below it."""
    return (n + 0.5 ** (n + 1)) * log_value(q, config)
