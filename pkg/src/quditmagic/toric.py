"""Z_q toric codes on small tori.

Construction of the oriented vertex/plaquette stabilizer group, ground
states by sector, Pauli anyon strings on primal and dual paths, the braiding
S-matrix experiment with a crossing-count oracle, and the information-convex
annulus demonstration.

Conventions.  Edges are oriented right (+x, horizontal) and up (+y,
vertical); h(x, y) points from vertex (x, y) to (x+1, y) and v(x, y) from
(x, y) to (x, y+1).  Vertex operators put X^{+1} on outgoing and X^{-1} on
incoming edges; plaquette operators put Z^{+1} on edges traversed along the
counterclockwise boundary orientation and Z^{-1} against it.  With this one
rule all generators commute for every q.
"""

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import linalg, pauli, stabilizer
from .config import DEFAULT_CONFIG, RunConfig, check_dense
from .pauli import PauliLabel
from .stabilizer import StabilizerGroup, StabilizerProjectionState


class GeometryTooSmall(ValueError):
    pass


class InvalidPath(ValueError):
    pass


class NotAnAnnulus(ValueError):
    pass


# ---------------------------------------------------------------------------
# Lattice and code construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ToricLattice:
    q: int
    Lx: int
    Ly: int

    @property
    def n_edges(self) -> int:
        return 2 * self.Lx * self.Ly

    def h_edge(self, x: int, y: int) -> int:
        return (y % self.Ly) * self.Lx + (x % self.Lx)

    def v_edge(self, x: int, y: int) -> int:
        return self.Lx * self.Ly + (y % self.Ly) * self.Lx + (x % self.Lx)


def vertex_operator(lat: ToricLattice, x: int, y: int) -> PauliLabel:
    b = [0] * lat.n_edges
    b[lat.h_edge(x, y)] += 1
    b[lat.v_edge(x, y)] += 1
    b[lat.h_edge(x - 1, y)] -= 1
    b[lat.v_edge(x, y - 1)] -= 1
    return pauli.label(lat.q, lat.n_edges, [0] * lat.n_edges, b, 0)


def plaquette_operator(lat: ToricLattice, x: int, y: int) -> PauliLabel:
    a = [0] * lat.n_edges
    a[lat.h_edge(x, y)] += 1
    a[lat.v_edge(x + 1, y)] += 1
    a[lat.h_edge(x, y + 1)] -= 1
    a[lat.v_edge(x, y)] -= 1
    return pauli.label(lat.q, lat.n_edges, a, [0] * lat.n_edges, 0)


@dataclass(frozen=True)
class ToricCode:
    lattice: ToricLattice
    group: StabilizerGroup

    def __iter__(self):
        yield self.lattice
        yield self.group


def build_toric(q: int, Lx: int, Ly: int) -> ToricCode:
    """The code stabilizer group of all vertex and plaquette operators.

    The group validates (everything commutes) and has order q^{2 Lx Ly - 2}:
    the product of all vertex operators and the product of all plaquette
    operators are both identities.
    """
    if q < 2 or Lx < 2 or Ly < 2:
        raise GeometryTooSmall("need q >= 2 and a torus of at least 2 x 2")
    lat = ToricLattice(q=q, Lx=Lx, Ly=Ly)
    gens = [vertex_operator(lat, x, y) for y in range(Ly) for x in range(Lx)]
    gens += [plaquette_operator(lat, x, y) for y in range(Ly) for x in range(Lx)]
    return ToricCode(lattice=lat, group=stabilizer.validate(gens))


def logical_z_pair(lat: ToricLattice) -> Tuple[PauliLabel, PauliLabel]:
    """The two noncontractible Z loops: along horizontal row 0 and vertical
    column 0.  Both commute with every vertex and plaquette operator."""
    n = lat.n_edges
    a1 = [0] * n
    for x in range(lat.Lx):
        a1[lat.h_edge(x, 0)] = 1
    a2 = [0] * n
    for y in range(lat.Ly):
        a2[lat.v_edge(0, y)] = 1
    z = [0] * n
    return (
        pauli.label(lat.q, n, a1, z, 0),
        pauli.label(lat.q, n, a2, z, 0),
    )


def ground_group(code: ToricCode, sector: Tuple[int, int] = (0, 0)) -> StabilizerGroup:
    """Maximal stabilizer group of the ground state in the sector where the
    two noncontractible Z loops have eigenvalues omega^{s1}, omega^{s2}."""
    lat = code.lattice
    z1, z2 = logical_z_pair(lat)
    s1, s2 = sector
    gens = list(code.group.gens) + [
        pauli.phase_shifted(z1, -2 * (s1 % lat.q)),
        pauli.phase_shifted(z2, -2 * (s2 % lat.q)),
    ]
    return stabilizer.validate(gens)


def ground_state(code: ToricCode, sector: Tuple[int, int] = (0, 0),
                 config: RunConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Dense ground-state vector of the sector, built by sequentially
    projecting a basis seed onto the +1 eigenspace of each independent
    generator (vector-level, no dense matrices)."""
    lat = code.lattice
    q = lat.q
    n = lat.n_edges
    dim = q ** n
    check_dense(dim, config)
    S = ground_group(code, sector)
    ind = stabilizer.independent_generators(S)
    for seed in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[seed] = 1.0
        dead = False
        for g, d in ind:
            acc = np.zeros(dim, dtype=complex)
            for m in range(d):
                acc += pauli.apply_to_state(pauli.power(g, m), v)
            v = acc / d
            if np.linalg.norm(v) < 1e-9:
                dead = True
                break
        if dead:
            continue
        v = v / np.linalg.norm(v)
        idx = int(np.argmax(np.abs(v) > 1e-9))
        return v * (np.conj(v[idx]) / np.abs(v[idx]))
    raise AssertionError("no basis seed survives the ground-space projection")


# ---------------------------------------------------------------------------
# Anyon strings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnyonType:
    a: int  # electric charge exponent
    b: int  # magnetic charge exponent


PRIMAL = "primal"
DUAL = "dual"


@dataclass(frozen=True)
class StringPath:
    kind: str                          # PRIMAL or DUAL
    steps: Tuple[Tuple[int, int], ...]  # (edge index, traversal sign)


def primal_path(lat: ToricLattice, vertices: Sequence[Tuple[int, int]]) -> StringPath:
    """Path along lattice edges through consecutive adjacent vertices.

    The sign of a step is +1 when it follows the edge orientation (+x or +y)
    and -1 against it.  On a length-2 torus the ambiguous wrap step is read
    in the positive direction.
    """
    steps = []
    for (x1, y1), (x2, y2) in zip(vertices, vertices[1:]):
        dx = (x2 - x1) % lat.Lx
        dy = (y2 - y1) % lat.Ly
        if dy == 0 and dx == 1:
            steps.append((lat.h_edge(x1, y1), 1))
        elif dy == 0 and dx == lat.Lx - 1:
            steps.append((lat.h_edge(x2, y2), -1))
        elif dx == 0 and dy == 1:
            steps.append((lat.v_edge(x1, y1), 1))
        elif dx == 0 and dy == lat.Ly - 1:
            steps.append((lat.v_edge(x2, y2), -1))
        else:
            raise InvalidPath("vertices %r -> %r are not adjacent" % ((x1, y1), (x2, y2)))
    return StringPath(kind=PRIMAL, steps=tuple(steps))


def dual_path(lat: ToricLattice, plaquettes: Sequence[Tuple[int, int]]) -> StringPath:
    """Path through consecutive adjacent plaquette centers.

    Each step crosses one primal edge; its sign is the z-component of the
    cross product (edge orientation) x (step direction), so a +y step
    crossing a horizontal edge gets +1, a +x step crossing a vertical edge
    gets -1, and the reversed steps flip the sign.
    """
    steps = []
    for (x1, y1), (x2, y2) in zip(plaquettes, plaquettes[1:]):
        dx = (x2 - x1) % lat.Lx
        dy = (y2 - y1) % lat.Ly
        if dy == 0 and dx == 1:
            steps.append((lat.v_edge(x1 + 1, y1), -1))
        elif dy == 0 and dx == lat.Lx - 1:
            steps.append((lat.v_edge(x1, y1), 1))
        elif dx == 0 and dy == 1:
            steps.append((lat.h_edge(x1, y1 + 1), 1))
        elif dx == 0 and dy == lat.Ly - 1:
            steps.append((lat.h_edge(x1, y1), -1))
        else:
            raise InvalidPath("plaquettes %r -> %r are not adjacent" % ((x1, y1), (x2, y2)))
    return StringPath(kind=DUAL, steps=tuple(steps))


def primal_walk(lat: ToricLattice, start: Tuple[int, int],
                moves: Sequence[str]) -> StringPath:
    """Primal path given by a start vertex and explicit moves, which stays
    unambiguous on length-2 tori where opposite steps coincide."""
    x, y = start
    steps = []
    for mv in moves:
        if mv == "+x":
            steps.append((lat.h_edge(x, y), 1))
            x += 1
        elif mv == "-x":
            steps.append((lat.h_edge(x - 1, y), -1))
            x -= 1
        elif mv == "+y":
            steps.append((lat.v_edge(x, y), 1))
            y += 1
        elif mv == "-y":
            steps.append((lat.v_edge(x, y - 1), -1))
            y -= 1
        else:
            raise InvalidPath("unknown move %r" % (mv,))
    return StringPath(kind=PRIMAL, steps=tuple(steps))


def dual_walk(lat: ToricLattice, start: Tuple[int, int],
              moves: Sequence[str]) -> StringPath:
    """Dual path given by a start plaquette and explicit moves; signs follow
    the same cross-product rule as dual_path."""
    x, y = start
    steps = []
    for mv in moves:
        if mv == "+x":
            steps.append((lat.v_edge(x + 1, y), -1))
            x += 1
        elif mv == "-x":
            steps.append((lat.v_edge(x, y), 1))
            x -= 1
        elif mv == "+y":
            steps.append((lat.h_edge(x, y + 1), 1))
            y += 1
        elif mv == "-y":
            steps.append((lat.h_edge(x, y), -1))
            y -= 1
        else:
            raise InvalidPath("unknown move %r" % (mv,))
    return StringPath(kind=DUAL, steps=tuple(steps))


def anyon_string(lat: ToricLattice, t: AnyonType,
                 paths: Union[StringPath, Sequence[StringPath]]) -> PauliLabel:
    """The Pauli string carrying charge t along the given paths.

    Primal paths contribute Z^{t.a * sign} per traversed edge, dual paths
    X^{t.b * sign} per crossed edge; a dyonic type needs one of each.  The
    string commutes with every stabilizer not incident on a path endpoint.
    """
    if isinstance(paths, StringPath):
        paths = [paths]
    q = lat.q
    n = lat.n_edges
    a = [0] * n
    b = [0] * n
    kinds = {p.kind for p in paths}
    if t.a % q and PRIMAL not in kinds:
        raise InvalidPath("electric charge needs a primal path")
    if t.b % q and DUAL not in kinds:
        raise InvalidPath("magnetic charge needs a dual path")
    for p in paths:
        if p.kind == PRIMAL:
            for edge, sign in p.steps:
                a[edge] += t.a * sign
        elif p.kind == DUAL:
            for edge, sign in p.steps:
                b[edge] += t.b * sign
        else:
            raise InvalidPath("unknown path kind %r" % (p.kind,))
    return pauli.label(q, n, a, b, 0)


# ---------------------------------------------------------------------------
# S-matrix experiment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmatrixPaths:
    """The four strings of the braiding experiment.

    V runs between a vertex/plaquette pair near the origin and one shifted by
    +x; W between pairs shifted by +y.  The lower strings V_d and W_d cross
    exactly once, the upper strings close each V/W pair into a contractible
    loop away from the crossing.
    """
    v_d: Tuple[StringPath, StringPath]
    v_u: Tuple[StringPath, StringPath]
    w_d: Tuple[StringPath, StringPath]
    w_u: Tuple[StringPath, StringPath]


def smatrix_paths(lat: ToricLattice, deform_lower: bool = False) -> SmatrixPaths:
    """Default geometry near the origin (any torus of at least 2 x 2).

    With deform_lower the lower V string makes a homotopic detour through row
    Ly - 1 (needs Ly >= 3); the braiding phase is deformation invariant.
    """
    if lat.Lx < 2 or lat.Ly < 2:
        raise GeometryTooSmall("the string layout needs at least a 2 x 2 torus")
    if deform_lower:
        if lat.Ly < 3:
            raise GeometryTooSmall("the deformed lower string needs Ly >= 3")
        v_d = (
            primal_walk(lat, (0, 0), ["-y", "+x", "+y"]),
            dual_walk(lat, (0, 0), ["-y", "+x", "+y"]),
        )
    else:
        v_d = (
            primal_walk(lat, (0, 0), ["+x"]),
            dual_walk(lat, (0, 0), ["+x"]),
        )
    v_u = (
        primal_walk(lat, (0, 0), ["+y", "+x", "-y"]),
        dual_walk(lat, (0, 0), ["+y", "+x", "-y"]),
    )
    w_d = (
        primal_walk(lat, (0, 1), ["+x"]),
        dual_walk(lat, (0, 1), ["-y"]),
    )
    w_u = (
        primal_walk(lat, (0, 1), ["-y", "+x", "+y"]),
        dual_walk(lat, (0, 1), ["+x", "-y", "-x"]),
    )
    return SmatrixPaths(v_d=v_d, v_u=v_u, w_d=w_d, w_u=w_u)


def _edge_coefficients(paths: Sequence[StringPath], kind: str,
                       negate: Sequence[StringPath] = ()) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for p in paths:
        if p.kind == kind:
            for edge, sign in p.steps:
                out[edge] = out.get(edge, 0) + sign
    for p in negate:
        if p.kind == kind:
            for edge, sign in p.steps:
                out[edge] = out.get(edge, 0) - sign
    return out


def crossing_numbers(paths: SmatrixPaths) -> Tuple[int, int]:
    """Signed crossing counts between the closed V loop and the lower W
    string: (primal-V against dual-W, dual-V against primal-W)."""
    lv_primal = _edge_coefficients(paths.v_d, PRIMAL, negate=paths.v_u)
    lv_dual = _edge_coefficients(paths.v_d, DUAL, negate=paths.v_u)
    wd_primal = _edge_coefficients(paths.w_d, PRIMAL)
    wd_dual = _edge_coefficients(paths.w_d, DUAL)
    x1 = sum(c * wd_dual.get(e, 0) for e, c in lv_primal.items())
    x2 = sum(c * wd_primal.get(e, 0) for e, c in lv_dual.items())
    return x1, x2


def crossing_phase_oracle(lat: ToricLattice, t1: AnyonType, t2: AnyonType,
                          paths: Optional[SmatrixPaths] = None) -> complex:
    """Braiding phase predicted combinatorially: omega to the symplectic
    crossing number of the V loop with the lower W string."""
    if paths is None:
        paths = smatrix_paths(lat)
    x1, x2 = crossing_numbers(paths)
    e = (t1.a * t2.b * x1 - t1.b * t2.a * x2) % lat.q
    return cmath.exp(2j * cmath.pi * e / lat.q)


def _string_quartet(lat: ToricLattice, t1: AnyonType, t2: AnyonType,
                    paths: SmatrixPaths):
    v_d = anyon_string(lat, t1, paths.v_d)
    v_u = anyon_string(lat, t1, paths.v_u)
    w_d = anyon_string(lat, t2, paths.w_d)
    w_u = anyon_string(lat, t2, paths.w_u)
    O = pauli.compose(
        pauli.inverse(w_u),
        pauli.compose(pauli.inverse(v_u), pauli.compose(v_d, w_d)),
    )
    l_v = pauli.compose(pauli.inverse(v_u), v_d)
    l_w = pauli.compose(pauli.inverse(w_u), w_d)
    return O, l_v, l_w


def s_matrix_element(code: ToricCode, t1: AnyonType, t2: AnyonType,
                     paths: Optional[SmatrixPaths] = None,
                     group: Optional[StabilizerGroup] = None) -> complex:
    """Braiding phase of anyon types t1 and t2.

    Evaluates the four-string product on the ground state exactly through the
    stabilizer group and normalizes by the two closed-loop expectations, so a
    trivial t2 gives exactly 1.  The result has unit modulus by construction.
    """
    lat = code.lattice
    if paths is None:
        paths = smatrix_paths(lat)
    if group is None:
        group = ground_group(code)
    O, l_v, l_w = _string_quartet(lat, t1, t2, paths)
    exps = []
    for op in (O, l_v, l_w):
        e = stabilizer.expectation_exponent(group, op)
        if e is None:
            raise InvalidPath("a string loop is not contractible on this geometry")
        exps.append(e)
    e = (exps[0] - exps[1] - exps[2]) % (2 * lat.q)
    return cmath.exp(1j * cmath.pi * e / lat.q)


def s_matrix_dense(code: ToricCode, t1: AnyonType, t2: AnyonType,
                   paths: Optional[SmatrixPaths] = None,
                   config: RunConfig = DEFAULT_CONFIG) -> complex:
    """Independent oracle: the same normalized expectation evaluated on the
    dense ground-state vector."""
    lat = code.lattice
    if paths is None:
        paths = smatrix_paths(lat)
    O, l_v, l_w = _string_quartet(lat, t1, t2, paths)
    psi = ground_state(code, config=config)

    def expect(op: PauliLabel) -> complex:
        return complex(np.vdot(psi, pauli.apply_to_state(op, psi)))

    return expect(O) / (expect(l_v) * expect(l_w))


@dataclass(frozen=True)
class QuantizationEntry:
    t1: AnyonType
    t2: AnyonType
    phase: complex
    power: int          # nearest k with phase ~ exp(2 pi i k / q)
    deviation: float    # |phase - exp(2 pi i k / q)|
    oracle_ok: bool
    formula_ok: bool    # matches omega^{sigma (a1 b2 + b1 a2)}


@dataclass(frozen=True)
class QuantizationReport:
    ok: bool
    q: int
    convention: int     # sigma read off the (e, m) entry
    max_deviation: float
    entries: Tuple[QuantizationEntry, ...]


def quantization_check(code: ToricCode,
                       pairs: Optional[Sequence[Tuple[AnyonType, AnyonType]]] = None,
                       tol: float = 1e-9) -> QuantizationReport:
    """Braiding phases for all type pairs are q-th roots of unity.

    Each phase is compared against the crossing-count oracle and against the
    bilinear form omega^{sigma (a1 b2 + b1 a2)} whose global sign convention
    sigma is read off the electric-vs-magnetic entry.
    """
    lat = code.lattice
    q = lat.q
    paths = smatrix_paths(lat)
    group = ground_group(code)
    if pairs is None:
        types = [AnyonType(a, b) for a in range(q) for b in range(q)]
        pairs = [(t1, t2) for t1 in types for t2 in types]
    em = s_matrix_element(code, AnyonType(1, 0), AnyonType(0, 1), paths, group)
    k_em = round(q * (cmath.phase(em) / (2 * math.pi))) % q
    sigma = -1 if k_em == q - 1 else 1
    entries = []
    max_dev = 0.0
    ok = True
    for t1, t2 in pairs:
        phase = s_matrix_element(code, t1, t2, paths, group)
        k = round(q * (cmath.phase(phase) / (2 * math.pi))) % q
        dev = abs(phase - cmath.exp(2j * cmath.pi * k / q))
        oracle = crossing_phase_oracle(lat, t1, t2, paths)
        oracle_ok = abs(phase - oracle) <= tol
        e_form = (sigma * (t1.a * t2.b + t1.b * t2.a)) % q
        formula_ok = abs(phase - cmath.exp(2j * cmath.pi * e_form / q)) <= tol
        max_dev = max(max_dev, dev)
        if dev > tol or not oracle_ok or not formula_ok:
            ok = False
        entries.append(QuantizationEntry(
            t1=t1, t2=t2, phase=phase, power=k, deviation=dev,
            oracle_ok=oracle_ok, formula_ok=formula_ok,
        ))
    return QuantizationReport(
        ok=ok, q=q, convention=sigma, max_deviation=max_dev,
        entries=tuple(entries),
    )


# ---------------------------------------------------------------------------
# Information-convex annulus demonstration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RingAnnulus:
    edges: Tuple[int, ...]
    thickened: Tuple[int, ...]
    balls: Tuple[Tuple[int, ...], ...]
    strings: Tuple[Tuple[AnyonType, PauliLabel], ...]


def ring_annulus(lat: ToricLattice) -> RingAnnulus:
    """A width-1 ring of 8 edges around the hole edge v(1, 0), with the
    anyon-pair strings threading the hole for every type (the Z string ends
    on a vertex inside the ring, the X string on an adjacent plaquette).

    Ly >= 4 keeps noncontractible cycles out of the ring's own edge set (on a
    3 x 3 torus a winding cycle fits inside the ring and inflates the
    supported subgroup past the two loop generators)."""
    if lat.Lx < 3 or lat.Ly < 4:
        raise GeometryTooSmall("the ring annulus needs at least a 3 x 4 torus")
    edges = sorted({
        lat.h_edge(0, 0), lat.h_edge(1, 0),
        lat.h_edge(0, 1), lat.h_edge(1, 1),
        lat.v_edge(0, 0), lat.v_edge(2, 0),
        lat.v_edge(1, 1), lat.v_edge(1, lat.Ly - 1),
    })
    thickened = sorted(set(edges) | {lat.v_edge(1, 0)})
    balls = tuple((e,) for e in edges)
    e_path = primal_path(lat, [(1, 0), (1, 1), (1, 2)])
    m_path = dual_path(lat, [(0, 0), (0, lat.Ly - 1)])
    strings = []
    for a in range(lat.q):
        for b in range(lat.q):
            t = AnyonType(a, b)
            strings.append((t, anyon_string(lat, t, [e_path, m_path])))
    return RingAnnulus(
        edges=tuple(edges),
        thickened=tuple(thickened),
        balls=balls,
        strings=tuple(strings),
    )


# Operators on the annulus are handled as sparse Pauli-coefficient maps
# {(a, b): coefficient}; products, traces and norms then cost O(terms^2)
# instead of O(q^{2m}), which keeps the q = 3 ring exact and cheap.

_Poly = Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], complex]


def _poly_of_group(S: StabilizerGroup) -> _Poly:
    D = S.q ** S.n
    out: _Poly = {}
    for s in stabilizer.elements(S):
        key = (s.a, s.b)
        out[key] = out.get(key, 0.0) + cmath.exp(1j * math.pi * s.c / S.q) / D
    return out


def _poly_mul(P: _Poly, Q: _Poly, q: int, m: int) -> _Poly:
    out: _Poly = {}
    for (a1, b1), v1 in P.items():
        for (a2, b2), v2 in Q.items():
            lab = pauli.compose(pauli.label(q, m, a1, b1, 0),
                                pauli.label(q, m, a2, b2, 0))
            key = (lab.a, lab.b)
            out[key] = out.get(key, 0.0) + v1 * v2 * cmath.exp(1j * math.pi * lab.c / q)
    return out


def _poly_trace(P: _Poly, q: int, m: int) -> complex:
    zero = (tuple([0] * m), tuple([0] * m))
    return (q ** m) * P.get(zero, 0.0)


def _poly_diff_norm(P: _Poly, Q: _Poly, q: int, m: int) -> float:
    keys = set(P) | set(Q)
    return math.sqrt(
        (q ** m) * sum(abs(P.get(k, 0.0) - Q.get(k, 0.0)) ** 2 for k in keys)
    )


def _poly_fidelity(P1: _Poly, rank1: int, P2: _Poly, q: int, m: int) -> float:
    """Root fidelity of two commuting projector states rho_i = Pi_i / rank_i,
    via N = sqrt(rho1) rho2 sqrt(rho1) = rank1 * rho1 rho2 rho1 and
    F = (Tr N)^{3/2} / sqrt(Tr N^2)."""
    A = _poly_mul(_poly_mul(P1, P2, q, m), P1, q, m)
    t1 = (rank1 * _poly_trace(A, q, m)).real
    if t1 <= 1e-15:
        return 0.0
    t2 = (rank1 ** 2 * _poly_trace(_poly_mul(A, A, q, m), q, m)).real
    return t1 ** 1.5 / math.sqrt(t2)


def _poly_conjugate(P: _Poly, U: PauliLabel, q: int, m: int) -> _Poly:
    out: _Poly = {}
    for (a, b), v in P.items():
        s = pauli.label(q, m, a, b, 0)
        r = pauli.commutation_exponent(U, s)
        out[(a, b)] = v * cmath.exp(2j * math.pi * r / q)
    return out


def _poly_dense(P: _Poly, q: int, m: int, config: RunConfig) -> np.ndarray:
    dim = q ** m
    out = np.zeros((dim, dim), dtype=complex)
    for (a, b), v in P.items():
        out += v * pauli.to_dense(pauli.label(q, m, a, b, 0), config)
    return out


@dataclass(frozen=True)
class AnnulusReport:
    ok: bool
    point_count: int
    expected: int
    l_rank: int
    vacuum_ok: bool
    max_commutator: float
    pauli_connected: bool
    max_conjugation_defect: float
    anyon_matched: bool
    min_match_fidelity: float
    dense_checked: bool
    assignments: Tuple[Tuple[int, ...], ...]
    points: Tuple[stabilizer.ExtremePoint, ...]


def annulus_extreme_points(code: ToricCode,
                           annulus: Optional[Sequence[int]] = None,
                           thickened: Optional[Sequence[int]] = None,
                           strings: Optional[Sequence[Tuple[AnyonType, PauliLabel]]] = None,
                           balls: Optional[Sequence[Sequence[int]]] = None,
                           config: RunConfig = DEFAULT_CONFIG) -> AnnulusReport:
    """Extreme points of the information convex set of an annulus.

    Defaults to the 8-edge ring of ring_annulus.  Asserts q^2 extreme points,
    pairwise commutation, Pauli connectivity of every pair, and that each
    point is the reduction of a ground state twisted by an anyon string
    through the hole; results are report content, an l-rank other than 2
    raises NotAnAnnulus.
    """
    lat = code.lattice
    q = lat.q
    if annulus is None:
        ring = ring_annulus(lat)
        annulus = ring.edges
        thickened = ring.thickened
        balls = ring.balls
        if strings is None:
            strings = ring.strings
    if thickened is None:
        thickened = annulus
    if balls is None:
        balls = [(e,) for e in annulus]
    omega = sorted(annulus)
    m = len(omega)
    G = ground_group(code)
    ref = stabilizer.supported_subgroup(G, sorted(thickened))
    s_r = stabilizer.supported_subgroup(ref, omega)
    points = stabilizer.extreme_points(
        StabilizerProjectionState(ref), omega, [sorted(b) for b in balls]
    )
    l_rank = len(points[0].l_gens) if points else 0
    if l_rank != 2:
        raise NotAnAnnulus("free logical rank is %d, expected 2" % l_rank)
    expected = q * q
    polys = [_poly_of_group(pt.state.group) for pt in points]
    ranks = [pt.state.rank for pt in points]

    # vacuum point: the plain reduction of the reference state
    vac_poly = _poly_of_group(stabilizer.restrict(s_r, omega))
    vac_idx = next(
        (i for i, pt in enumerate(points) if not any(pt.assignment)), None
    )
    vacuum_ok = vac_idx is not None and \
        _poly_diff_norm(polys[vac_idx], vac_poly, q, m) < 1e-12

    max_comm = 0.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            pq = _poly_mul(polys[i], polys[j], q, m)
            qp = _poly_mul(polys[j], polys[i], q, m)
            max_comm = max(max_comm, _poly_diff_norm(pq, qp, q, m))

    max_defect = 0.0
    connected = True
    for i in range(len(points)):
        for j in range(len(points)):
            if i == j:
                continue
            deltas = [
                (uj - ui) % pauli.order(g)
                for g, ui, uj in zip(points[i].l_gens, points[i].assignment,
                                     points[j].assignment)
            ]
            P = stabilizer.find_rephasing_pauli(points[i].l_gens, deltas)
            defect = _poly_diff_norm(
                _poly_conjugate(polys[i], P, q, m), polys[j], q, m
            )
            max_defect = max(max_defect, defect)
            if defect > 1e-9:
                connected = False

    anyon_matched = True
    min_fid = 1.0
    if strings:
        D = q ** m
        pos = {site: k for k, site in enumerate(omega)}
        used = set()
        for t, U in strings:
            twisted: _Poly = {}
            for s in stabilizer.elements(s_r):
                r = pauli.commutation_exponent(U, s)
                c = (s.c + 2 * r) % (2 * q)
                a = tuple(s.a[site] for site in omega)
                b = tuple(s.b[site] for site in omega)
                twisted[(a, b)] = twisted.get((a, b), 0.0) \
                    + cmath.exp(1j * math.pi * c / q) / D
            fids = [
                _poly_fidelity(polys[i], ranks[i], twisted, q, m)
                for i in range(len(points))
            ]
            best = int(np.argmax(fids))
            min_fid = min(min_fid, fids[best])
            if fids[best] <= 1.0 - 1e-9 or best in used:
                anyon_matched = False
            used.add(best)
        if len(used) != len(strings):
            anyon_matched = False
    else:
        anyon_matched = False

    dense_checked = False
    if q ** m <= min(config.dense_limit, 4096):
        dense_checked = True
        mats = [_poly_dense(p, q, m, config) for p in polys]
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                comm = mats[i] @ mats[j] - mats[j] @ mats[i]
                max_comm = max(max_comm, float(np.linalg.norm(comm)))

    ok = (
        len(points) == expected
        and vacuum_ok
        and max_comm < 1e-9
        and connected
        and anyon_matched
        and min_fid > 1.0 - 1e-9
    )
    return AnnulusReport(
        ok=ok,
        point_count=len(points),
        expected=expected,
        l_rank=l_rank,
        vacuum_ok=vacuum_ok,
        max_commutator=max_comm,
        pauli_connected=connected,
        max_conjugation_defect=max_defect,
        anyon_matched=anyon_matched,
        min_match_fidelity=min_fid,
        dense_checked=dense_checked,
        assignments=tuple(pt.assignment for pt in points),
        points=tuple(points),
    )
