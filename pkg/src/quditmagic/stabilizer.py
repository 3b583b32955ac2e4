"""Stabilizer groups over Z_q and stabilizer projection states.

Canonical forms, orders, membership, supported and locally generated
subgroups, commutants, dense projection states, exhaustive enumeration of
stabilizer groups, information-convex extreme points and Pauli re-phasing.

All group-theoretic questions reduce to integer lattice problems on the
stacked exponent matrix augmented with q*I rows; Smith/Hermite normal forms
over Z handle composite q uniformly.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg, pauli
from .config import DEFAULT_CONFIG, BudgetExceeded, RunConfig, check_dense
from .pauli import PauliLabel
from .ring import factorize


class NonCommutingPair(ValueError):
    def __init__(self, i: int, j: int):
        super().__init__("generators %d and %d do not commute" % (i, j))
        self.pair = (i, j)


class InconsistentPhase(ValueError):
    pass


class NotIndependent(ValueError):
    pass


MEMBER_PHASE_MATCH = "yes-with-phase-match"
MEMBER_UP_TO_PHASE = "yes-up-to-phase"
MEMBER_NO = "no"


@dataclass(frozen=True)
class StabilizerGroup:
    q: int
    n: int
    gens: Tuple[PauliLabel, ...]
    order: int
    key: Tuple[Tuple[int, ...], ...]

    def exponent_rows(self) -> List[List[int]]:
        return [pauli.symplectic_vector(g) for g in self.gens]


def product_label(gens: Sequence[PauliLabel], coeffs: Sequence[int]) -> PauliLabel:
    """The element  prod_i g_i^{x_i}  as an exact label."""
    q = gens[0].q
    n = gens[0].n
    out = pauli.identity_label(q, n)
    for g, x in zip(gens, coeffs):
        if x % (2 * q):
            out = pauli.compose(out, pauli.power(g, x))
    return out


def validate(tableau: Sequence[PauliLabel]) -> StabilizerGroup:
    """Check commutation and phase consistency, compute order and key."""
    if not tableau:
        raise ValueError("empty tableau; use trivial_group instead")
    q, n = tableau[0].q, tableau[0].n
    for g in tableau:
        if g.q != q or g.n != n:
            raise pauli.ShapeMismatch("mixed (n, q) in tableau")
    for i in range(len(tableau)):
        for j in range(i + 1, len(tableau)):
            if pauli.commutation_exponent(tableau[i], tableau[j]) != 0:
                raise NonCommutingPair(i, j)
    rows = [pauli.symplectic_vector(g) for g in tableau]
    for rel in linalg.left_kernel_mod(rows, q):
        prod = product_label(tableau, rel)
        if prod.c != 0:
            raise InconsistentPhase(
                "relation %r yields a nontrivial phase omega_{2q}^%d" % (rel, prod.c)
            )
    return StabilizerGroup(
        q=q,
        n=n,
        gens=tuple(tableau),
        order=linalg.subgroup_order(rows, q, 2 * n),
        key=linalg.lattice_key(rows, q, 2 * n),
    )


def trivial_group(q: int, n: int) -> StabilizerGroup:
    return StabilizerGroup(
        q=q,
        n=n,
        gens=(),
        order=1,
        key=linalg.lattice_key([], q, 2 * n),
    )


def group_order(S: StabilizerGroup) -> int:
    return S.order


def independent_generators(S: StabilizerGroup) -> List[Tuple[PauliLabel, int]]:
    """Independent generators with their orders (divisor chain, trivial ones
    dropped); product of the orders equals |S|."""
    if not S.gens:
        return []
    rows = S.exponent_rows()
    rels = linalg.left_kernel_mod(rows, S.q)
    C, orders = linalg.independent_decomposition(rels, len(S.gens))
    out = []
    for row, d in zip(C, orders):
        if d == 1:
            continue
        out.append((product_label(S.gens, row), d))
    return out


def elements(S: StabilizerGroup) -> Iterator[PauliLabel]:
    """All |S| elements, each exactly once."""
    ind = independent_generators(S)
    if not ind:
        yield pauli.identity_label(S.q, S.n)
        return
    gens = [g for g, _ in ind]
    orders = [d for _, d in ind]
    for coeffs in itertools.product(*(range(d) for d in orders)):
        yield product_label(gens, coeffs)


def member(S: StabilizerGroup, P: PauliLabel) -> str:
    """Three-valued membership verdict for the phase-extended group."""
    exp = expectation_exponent(S, P)
    if exp is None:
        return MEMBER_NO
    return MEMBER_PHASE_MATCH if exp == 0 else MEMBER_UP_TO_PHASE


def expectation_exponent(S: StabilizerGroup, P: PauliLabel) -> Optional[int]:
    """If P = omega_{2q}^e * s for s in S, return e mod 2q, else None.

    On any state stabilized by S the expectation of P is omega_{2q}^e; for
    Paulis outside the phase-extended group the expectation vanishes.
    """
    if not S.gens:
        if any(P.a) or any(P.b):
            return None
        return P.c
    rows = S.exponent_rows()
    x = linalg.solve_left_mod(rows, pauli.symplectic_vector(P), S.q)
    if x is None:
        return None
    s = product_label(S.gens, x)
    return (P.c - s.c) % (2 * S.q)


def _outside_columns(n: int, region: Sequence[int]) -> List[int]:
    inside = set(region)
    cols = []
    for i in range(n):
        if i not in inside:
            cols.extend([i, n + i])
    return cols


def supported_subgroup(S: StabilizerGroup, region: Sequence[int]) -> StabilizerGroup:
    """Subgroup of elements whose symplectic vector vanishes outside region."""
    if not S.gens:
        return trivial_group(S.q, S.n)
    cols = _outside_columns(S.n, region)
    rows = S.exponent_rows()
    outside = [[row[c] for c in cols] for row in rows]
    gens = []
    seen_keys = set()
    if cols:
        kernel = linalg.left_kernel_mod(outside, S.q)
    else:
        kernel = [[1 if i == j else 0 for j in range(len(rows))] for i in range(len(rows))]
    for x in kernel:
        g = product_label(S.gens, x)
        if any(g.a) or any(g.b):
            gens.append(g)
    if not gens:
        return trivial_group(S.q, S.n)
    return validate(gens)


def locally_generated(S: StabilizerGroup, balls: Sequence[Sequence[int]]) -> StabilizerGroup:
    """Group generated by the subgroups supported on each ball."""
    gens: List[PauliLabel] = []
    for ball in balls:
        gens.extend(supported_subgroup(S, ball).gens)
    if not gens:
        return trivial_group(S.q, S.n)
    return validate(gens)


def commutant_on_region(S: StabilizerGroup, region: Sequence[int]) -> List[PauliLabel]:
    """Generators of the Paulis supported on region commuting with all of S."""
    region = sorted(region)
    m = len(region)
    q = S.q
    if not S.gens:
        rows_c: List[List[int]] = []
    else:
        rows_c = []
        for g in S.gens:
            rows_c.append(
                [-g.b[i] for i in region] + [g.a[i] for i in region]
            )
    if rows_c:
        kernel = linalg.right_kernel_mod(rows_c, q)
    else:
        kernel = [[1 if i == j else 0 for j in range(2 * m)] for i in range(2 * m)]
    out = []
    for v in kernel:
        v = [x % q for x in v]
        if not any(v):
            continue
        a = [0] * S.n
        b = [0] * S.n
        for idx, site in enumerate(region):
            a[site] = v[idx]
            b[site] = v[m + idx]
        out.append(pauli.label(q, S.n, a, b, 0))
    return out


def restrict(S: StabilizerGroup, region: Sequence[int]) -> StabilizerGroup:
    """Relabel a group supported on region onto sites 0..len(region)-1.

    Sites are taken in ascending order of their original indices.
    """
    region = sorted(region)
    pos = {site: k for k, site in enumerate(region)}
    m = len(region)
    gens = []
    for g in S.gens:
        for i in range(S.n):
            if i not in pos and (g.a[i] or g.b[i]):
                raise ValueError("generator supported outside the region")
        a = [0] * m
        b = [0] * m
        for site, k in pos.items():
            a[k] = g.a[site]
            b[k] = g.b[site]
        gens.append(pauli.label(S.q, m, a, b, g.c))
    if not gens:
        return trivial_group(S.q, m)
    return validate(gens)


@dataclass(frozen=True)
class StabilizerProjectionState:
    """The state proportional to prod_{g in G(S)} P(g)."""

    group: StabilizerGroup

    @property
    def rank(self) -> int:
        return self.group.q ** self.group.n // self.group.order


def sps_dense(state: StabilizerProjectionState, config: RunConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Dense density matrix: the product of the generator projectors P(g),
    normalized to trace 1.  Equals (1/q^n) sum_{s in S} s."""
    S = state.group
    dim = S.q ** S.n
    check_dense(dim, config)
    acc = np.zeros((dim, dim), dtype=complex)
    for s in elements(S):
        acc += pauli.to_dense(s, config)
    return acc / dim


def sps_vector(state: StabilizerProjectionState, config: RunConfig = DEFAULT_CONFIG) -> np.ndarray:
    """State vector of a pure stabilizer projection state (|S| = q^n)."""
    S = state.group
    if state.rank != 1:
        raise ValueError("projection state is not pure")
    rho = sps_dense(state, config)
    col = int(np.argmax(np.linalg.norm(rho, axis=0)))
    v = rho[:, col]
    v = v / np.linalg.norm(v)
    # deterministic global phase: first significant amplitude real positive
    idx = int(np.argmax(np.abs(v) > 1e-9))
    v = v * (np.conj(v[idx]) / np.abs(v[idx]))
    return v


# ---------------------------------------------------------------------------
# Exhaustive enumeration
# ---------------------------------------------------------------------------

def _divisors(q: int) -> List[int]:
    return [d for d in range(1, q + 1) if q % d == 0]


def _hnf_candidates(q: int, m: int) -> Iterator[List[List[int]]]:
    """All canonical upper-triangular bases of lattices between q*Z^m and Z^m."""
    divs = _divisors(q)
    for diag in itertools.product(divs, repeat=m):
        # entries above the pivot in column j range over [0, d_j)
        slots = [(i, j) for j in range(m) for i in range(j)]
        ranges = [range(diag[j]) for (_, j) in slots]
        for fill in itertools.product(*ranges):
            H = [[0] * m for _ in range(m)]
            for i in range(m):
                H[i][i] = diag[i]
            for (slot, val) in zip(slots, fill):
                H[slot[0]][slot[1]] = val
            if _contains_q_lattice(H, q):
                yield H


def _contains_q_lattice(H: List[List[int]], q: int) -> bool:
    """Does the row lattice of upper-triangular H contain q*Z^m?"""
    m = len(H)
    for j in range(m):
        target = [q if t == j else 0 for t in range(m)]
        x = [0] * m
        ok = True
        for i in range(m):
            s = target[i] - sum(x[k] * H[k][i] for k in range(i))
            if s % H[i][i] != 0:
                ok = False
                break
            x[i] = s // H[i][i]
        if not ok:
            return False
    return True


def _symplectic_product(u: Sequence[int], v: Sequence[int], n: int, q: int) -> int:
    return (
        sum(u[i] * v[n + i] - u[n + i] * v[i] for i in range(n)) % q
    )


def _isotropic_lattices_prime_power(q: int, n: int) -> List[List[List[int]]]:
    """Generator matrices of all isotropic subgroups of Z_q^{2n}, q = p^r."""
    out = []
    m = 2 * n
    for H in _hnf_candidates(q, m):
        rows = [[x % q for x in row] for row in H]
        rows = [r for r in rows if any(r)]
        ok = True
        for i in range(len(rows)):
            for j in range(i, len(rows)):
                if _symplectic_product(rows[i], rows[j], n, q) != 0:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(rows)
    return out


def isotropic_lattices(q: int, n: int) -> List[List[List[int]]]:
    """Generator matrices of all isotropic subgroups of Z_q^{2n}.

    Composite q is handled by combining per-prime-power enumerations through
    the CRT; the subgroup lattice of Z_q^{2n} is the product of its p-parts.
    """
    factors = factorize(q).factors
    if len(factors) == 1:
        return _isotropic_lattices_prime_power(q, n)
    per_factor = []
    for p, r in factors:
        per_factor.append((p ** r, _isotropic_lattices_prime_power(p ** r, n)))
    combined = []
    for choice in itertools.product(*(lats for _, lats in per_factor)):
        gens: List[List[int]] = []
        for (qj, _), rows in zip(per_factor, choice):
            other = q // qj
            lift = (other * pow(other, -1, qj)) % q
            for row in rows:
                gens.append([(x * lift) % q for x in row])
        combined.append(gens)
    return combined


def _consistent_base_phase(g: PauliLabel, delta: int) -> PauliLabel:
    """Adjust the phase of g so that g^delta is exactly the identity."""
    ab = sum(x * y for x, y in zip(g.a, g.b))
    c0 = (ab * (delta - 1)) % (2 * g.q)
    return pauli.label(g.q, g.n, g.a, g.b, c0)


def enumerate_stabilizer_groups(
    n: int,
    q: int,
    pure_only: bool = False,
    config: RunConfig = DEFAULT_CONFIG,
) -> Iterator[StabilizerGroup]:
    """All stabilizer groups on (n, q): every isotropic subgroup of Z_q^{2n}
    with every consistent phase assignment, each exactly once."""
    target = q ** n if pure_only else None
    count = 0
    for rows in isotropic_lattices(q, n):
        if target is not None and linalg.subgroup_order(rows, q, 2 * n) != target:
            continue
        if not rows:
            count += 1
            if count > config.enum_limit:
                raise BudgetExceeded("enumeration budget exceeded")
            yield trivial_group(q, n)
            continue
        base = [pauli.label(q, n, r[:n], r[n:], 0) for r in rows]
        rels = linalg.left_kernel_mod(rows, q)
        C, orders = linalg.independent_decomposition(rels, len(rows))
        ind = []
        for crow, d in zip(C, orders):
            if d == 1:
                continue
            g = product_label(base, crow)
            ind.append((_consistent_base_phase(g, d), d))
        gens0 = [g for g, _ in ind]
        deltas = [d for _, d in ind]
        for shifts in itertools.product(*(range(d) for d in deltas)):
            gens = [
                pauli.phase_shifted(g, (2 * q // d) * t)
                for (g, d), t in zip(ind, shifts)
            ]
            count += 1
            if count > config.enum_limit:
                raise BudgetExceeded("enumeration budget exceeded")
            yield StabilizerGroup(
                q=q,
                n=n,
                gens=tuple(gens),
                order=linalg.subgroup_order(rows, q, 2 * n),
                key=linalg.lattice_key(rows, q, 2 * n),
            )


def enumerate_pure_stabilizer_states(
    n: int, q: int, config: RunConfig = DEFAULT_CONFIG
) -> Iterator[StabilizerProjectionState]:
    """All pure stabilizer projection states (maximal groups, all phases)."""
    for S in enumerate_stabilizer_groups(n, q, pure_only=True, config=config):
        yield StabilizerProjectionState(S)


def enumerate_sps(n: int, q: int, config: RunConfig = DEFAULT_CONFIG) -> Iterator[StabilizerProjectionState]:
    for S in enumerate_stabilizer_groups(n, q, pure_only=False, config=config):
        yield StabilizerProjectionState(S)


# ---------------------------------------------------------------------------
# Information-convex extreme points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtremePoint:
    """One extreme point rho_Omega(u) of the information convex set."""

    state: StabilizerProjectionState  # on the sites of Omega (relabeled)
    l_gens: Tuple[PauliLabel, ...]    # free generators, relabeled to Omega
    assignment: Tuple[int, ...]       # u(g) in Z_{delta_g} per free generator


def extreme_points(
    reference: StabilizerProjectionState,
    omega: Sequence[int],
    balls: Sequence[Sequence[int]],
) -> List[ExtremePoint]:
    """Extreme points of the information convex set of the region omega.

    reference is a stabilizer projection state on a larger region (its group
    lives on sites 0..n-1 with omega a subset); balls describe the locally
    generated subgroup S_{Omega+}(Omega) and are supplied by the caller.
    """
    S_ref = reference.group
    omega = sorted(omega)
    if not set(omega) <= set(range(S_ref.n)):
        raise ValueError("omega is not contained in the reference region")
    S_r = supported_subgroup(S_ref, omega)
    S_loc = locally_generated(S_ref, [sorted(b) for b in balls])
    for g in S_loc.gens:
        if member(S_r, g) != MEMBER_PHASE_MATCH:
            raise ValueError("balls are not contained in omega")

    # Greedy completion of G(S_loc) to G(S_r) in lexicographic label order.
    current: List[PauliLabel] = list(S_loc.gens)
    cur_rows = [pauli.symplectic_vector(g) for g in current]
    cur_key = linalg.lattice_key(cur_rows, S_r.q, 2 * S_r.n)
    l_gens: List[PauliLabel] = []
    for elem in sorted(elements(S_r), key=pauli.label_sort_key):
        if not any(elem.a) and not any(elem.b):
            continue
        trial = cur_rows + [pauli.symplectic_vector(elem)]
        key = linalg.lattice_key(trial, S_r.q, 2 * S_r.n)
        if key != cur_key:
            l_gens.append(elem)
            current.append(elem)
            cur_rows = trial
            cur_key = key
        if linalg.subgroup_order(cur_rows, S_r.q, 2 * S_r.n) == S_r.order:
            break

    # Characters of S_r trivial on S_loc, evaluated through an independent
    # generating set; each one re-phases the free generators.
    ind = independent_generators(S_r)
    h_gens = [g for g, _ in ind]
    h_orders = [d for _, d in ind]
    q = S_r.q

    def coords(P: PauliLabel) -> List[int]:
        if not h_gens:
            return []
        x = linalg.solve_left_mod(
            [pauli.symplectic_vector(g) for g in h_gens],
            pauli.symplectic_vector(P),
            q,
        )
        if x is None:
            raise AssertionError("element outside its own group")
        return x

    loc_coords = [coords(g) for g in S_loc.gens]
    l_coords = [coords(g) for g in l_gens]
    l_orders = [pauli.order(g) for g in l_gens]

    points = []
    for t in itertools.product(*(range(d) for d in h_orders)):
        # character chi(h_j) = zeta_{d_j}^{t_j}; require chi = 1 on S_loc
        def chi_exp(x: List[int]) -> int:
            return sum(tj * (2 * q // dj) * xj for tj, dj, xj in zip(t, h_orders, x)) % (2 * q)

        if any(chi_exp(x) != 0 for x in loc_coords):
            continue
        u = []
        twisted_l = []
        for g, x, dg in zip(l_gens, l_coords, l_orders):
            e = chi_exp(x)
            # chi(g) = zeta_{dg}^{u(g)} is a dg-th root by construction
            step = 2 * q // dg
            if e % step != 0:
                raise AssertionError("character value not a root of the generator order")
            ug = (e // step) % dg
            u.append(ug)
            twisted_l.append(pauli.phase_shifted(g, (2 * q // dg) * ug))
        gens = list(S_loc.gens) + twisted_l
        group = validate(gens) if gens else trivial_group(q, S_r.n)
        restricted = restrict(group, omega)
        l_restricted = restrict(validate(twisted_l), omega).gens if twisted_l else ()
        points.append(
            ExtremePoint(
                state=StabilizerProjectionState(restricted),
                l_gens=tuple(l_restricted),
                assignment=tuple(u),
            )
        )
    # sort by assignment for a deterministic output ordering
    points.sort(key=lambda pt: pt.assignment)
    return points


# ---------------------------------------------------------------------------
# Pauli re-phasing (conjugation characters)
# ---------------------------------------------------------------------------

def find_rephasing_pauli(
    gens: Sequence[PauliLabel], targets: Sequence[int]
) -> PauliLabel:
    """A Pauli P with P g_i P^dagger = zeta_i^{u_i} g_i for all i.

    zeta_i = exp(2 pi i / delta_i) with delta_i the order of g_i.  Solvability
    for independent generators is the surjectivity half of the re-phasing
    lemma; failure on validated independent input is an internal error.
    """
    if not gens:
        return pauli.identity_label(2, 1)
    q = gens[0].q
    n = gens[0].n
    rows = [pauli.symplectic_vector(g) for g in gens]
    total = linalg.subgroup_order(rows, q, 2 * n)
    prod_orders = 1
    for g in gens:
        prod_orders *= pauli.order(g)
    if total != prod_orders:
        raise NotIndependent("generators are not independent")
    C = []
    rhs = []
    for g, u in zip(gens, targets):
        delta = pauli.order(g)
        C.append(list(g.b) + [-x for x in g.a])
        rhs.append((q // delta) * (u % delta))
    z = linalg.solve_right_mod(C, rhs, q)
    if z is None:
        raise AssertionError("re-phasing congruence unsolvable on independent input")
    return pauli.label(q, n, z[:n], z[n:], 0)


# ---------------------------------------------------------------------------
# Tableau file format
# ---------------------------------------------------------------------------

def tableau_to_text(gens: Sequence[PauliLabel]) -> str:
    """Header `q n k` then one `a.. b.. c` line per generator."""
    if not gens:
        raise ValueError("cannot serialize an empty tableau")
    q, n = gens[0].q, gens[0].n
    lines = ["%d %d %d" % (q, n, len(gens))]
    for g in gens:
        lines.append(
            " ".join(str(x) for x in list(g.a) + list(g.b) + [g.c])
        )
    return "\n".join(lines) + "\n"


def tableau_from_text(text: str) -> List[PauliLabel]:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    q, n, k = (int(x) for x in lines[0].split())
    if len(lines) != k + 1:
        raise ValueError("tableau line count mismatch")
    gens = []
    for ln in lines[1:]:
        nums = [int(x) for x in ln.split()]
        if len(nums) != 2 * n + 1:
            raise ValueError("tableau row length mismatch")
        gens.append(pauli.label(q, n, nums[:n], nums[n:2 * n], nums[2 * n]))
    return gens
