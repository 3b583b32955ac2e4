"""Magic monotones relative to the pure-stabilizer polytope.

Five measures are exposed, forming the chain

    LF <= S_rel <= S_max-to-set <= LGR <= LR

(estimate directions permitting): stabilizer fidelity (pure states, exact
dictionary scan), relative entropy of magic (Frank-Wolfe upper estimate with
duality gap), min log lambda with rho <= lambda*sigma over the hull, the
generalized robustness log(2*lambda-1) from the same cone program, and the
robustness LP.  Also the patch-certificate machinery turning trace-distance
lower bounds on small patches into global fidelity/entropy lower bounds.
"""

import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.optimize

from . import dense, pauli, simplex, stabilizer
from .config import DEFAULT_CONFIG, RunConfig, check_dense, log_value

STATUS_EXACT = "exact"
STATUS_UPPER = "upper-estimate"
STATUS_LOWER = "lower-estimate"


@dataclass
class StabilizerDictionary:
    n: int
    q: int
    vectors: List[np.ndarray]
    groups: List[stabilizer.StabilizerGroup]

    @property
    def dim(self) -> int:
        return self.q ** self.n


def build_dictionary(n: int, q: int, config: RunConfig = DEFAULT_CONFIG) -> StabilizerDictionary:
    """Dense vectors of every pure stabilizer state on (n, q)."""
    check_dense(q ** n, config)
    vectors = []
    groups = []
    for sps in stabilizer.enumerate_pure_stabilizer_states(n, q, config):
        vectors.append(stabilizer.sps_vector(sps, config))
        groups.append(sps.group)
    return StabilizerDictionary(n=n, q=q, vectors=vectors, groups=groups)


# ---------------------------------------------------------------------------
# Hermitian coordinates (orthonormal real basis, Tr(A B) = coords.coords)
# ---------------------------------------------------------------------------

def _herm_coords(M: np.ndarray) -> np.ndarray:
    d = M.shape[0]
    out = [M[i, i].real for i in range(d)]
    s = math.sqrt(2.0)
    for i in range(d):
        for j in range(i + 1, d):
            out.append(s * M[i, j].real)
            out.append(s * M[i, j].imag)
    return np.array(out)


def _herm_from_coords(v: np.ndarray, d: int) -> np.ndarray:
    M = np.zeros((d, d), dtype=complex)
    for i in range(d):
        M[i, i] = v[i]
    k = d
    s = math.sqrt(2.0)
    for i in range(d):
        for j in range(i + 1, d):
            M[i, j] = (v[k] + 1j * v[k + 1]) / s
            M[j, i] = np.conj(M[i, j])
            k += 2
    return M


# ---------------------------------------------------------------------------
# Stabilizer fidelity (pure inputs)
# ---------------------------------------------------------------------------

def lf_pure(psi: np.ndarray, dic: StabilizerDictionary,
            config: RunConfig = DEFAULT_CONFIG) -> Tuple[float, np.ndarray]:
    """LF = -log max_phi |<phi|psi>|^2, exact; the maximum over the convex
    hull of pure stabilizer states is attained at a vertex."""
    best = -1.0
    witness = dic.vectors[0]
    for phi in dic.vectors:
        f = abs(np.vdot(phi, psi)) ** 2
        if f > best:
            best = f
            witness = phi
    return -log_value(best, config), witness


# ---------------------------------------------------------------------------
# Robustness LP
# ---------------------------------------------------------------------------

@dataclass
class LrResult:
    value: float          # LR = log(1 + 2R)
    optimum: float        # 1 + 2R
    coeffs: np.ndarray    # signed decomposition weights per dictionary state
    witness: np.ndarray   # dual Hermitian A with |Tr(A sigma)| <= 1
    gap: float


def lr_lp(rho: np.ndarray, dic: StabilizerDictionary,
          config: RunConfig = DEFAULT_CONFIG) -> LrResult:
    """min sum |c_k| s.t. sum c_k phi_k = rho, by the split c = u - w."""
    d = dic.dim
    K = len(dic.vectors)
    H = np.column_stack([
        _herm_coords(np.outer(v, v.conj())) for v in dic.vectors
    ])
    A = np.hstack([H, -H])
    b = _herm_coords(rho)
    c = np.ones(2 * K)
    sol = simplex.solve_lp(A, b, c)
    coeffs = sol.x[:K] - sol.x[K:]
    witness = _herm_from_coords(sol.dual, d)
    feas = max(abs(float(np.real(np.vdot(v, witness @ v)))) for v in dic.vectors)
    if feas > 1.0 + 1e-8:
        raise ArithmeticError("dual witness violates |Tr(A sigma)| <= 1")
    dual_val = float(np.real(np.trace(witness @ rho)))
    opt = max(sol.value, 1.0)
    return LrResult(
        value=log_value(opt, config),
        optimum=opt,
        coeffs=coeffs,
        witness=witness,
        gap=abs(sol.value - dual_val),
    )


# ---------------------------------------------------------------------------
# Cone program: S_max-to-set and LGR by cutting planes
# ---------------------------------------------------------------------------

@dataclass
class ConeResult:
    s_max_set: float
    lgr: float
    lam: float
    weights: np.ndarray
    min_eig: float
    status: str
    iterations: int


def lgr_smax_cone(rho: np.ndarray, dic: StabilizerDictionary,
                  config: RunConfig = DEFAULT_CONFIG,
                  max_iter: int = 500) -> ConeResult:
    """min sum d_k s.t. sum d_k phi_k >= rho, d >= 0, by cutting planes.

    Separation oracle: the minimum eigenvector v of sum d_k phi_k - rho adds
    the plane sum_k d_k |<v|phi_k>|^2 >= <v|rho|v>.  Converged when the
    minimum eigenvalue is >= -1e-8 (then the LP optimum is the cone optimum);
    hitting the iteration cap downgrades the result to a lower estimate.
    """
    d = dic.dim
    K = len(dic.vectors)
    mats = [np.outer(v, v.conj()) for v in dic.vectors]
    # seed planes: eigenbasis of rho
    _, vecs = np.linalg.eigh(rho)
    planes = [vecs[:, i] for i in range(d)]
    status = STATUS_LOWER
    weights = np.zeros(K)
    min_eig = -1.0
    it = 0
    for it in range(1, max_iter + 1):
        m = len(planes)
        W = np.zeros((m, K))
        r = np.zeros(m)
        for i, v in enumerate(planes):
            W[i] = [abs(np.vdot(v, u)) ** 2 for u in dic.vectors]
            r[i] = float(np.real(np.vdot(v, rho @ v)))
        # equality form with surplus variables
        A = np.hstack([W, -np.eye(m)])
        c = np.concatenate([np.ones(K), np.zeros(m)])
        sol = simplex.solve_lp(A, r, c)
        weights = sol.x[:K]
        M = sum(w * mat for w, mat in zip(weights, mats)) - rho
        w_eigs, w_vecs = np.linalg.eigh(M)
        min_eig = float(w_eigs[0])
        if min_eig >= -1e-8:
            status = STATUS_EXACT
            break
        # every violated eigenvector becomes a plane, not just the worst one
        for i in range(d):
            if w_eigs[i] < -1e-8:
                planes.append(w_vecs[:, i])
    lam = max(float(np.sum(weights)), 1.0)
    return ConeResult(
        s_max_set=log_value(lam, config),
        lgr=log_value(max(2.0 * lam - 1.0, 1.0), config),
        lam=lam,
        weights=weights,
        min_eig=min_eig,
        status=status,
        iterations=it,
    )


# ---------------------------------------------------------------------------
# Relative entropy of magic by Frank-Wolfe
# ---------------------------------------------------------------------------

@dataclass
class FwResult:
    value: float
    gap: float
    status: str
    iterations: int
    sigma: np.ndarray


EIG_FLOOR = 1e-12


def _entropy_term_nat(rho: np.ndarray) -> float:
    wr = np.linalg.eigvalsh(rho)
    wr = wr[wr > 1e-14]
    return float(np.sum(wr * np.log(wr)))


def _cross_term_nat(rho: np.ndarray, sigma: np.ndarray) -> float:
    ws, vs = np.linalg.eigh(sigma)
    ws = np.clip(ws, EIG_FLOOR, None)
    diag = np.real(np.einsum("ij,jk,ki->i", vs.conj().T, rho, vs))
    return -float(np.sum(diag * np.log(ws)))


def _rel_entropy_nat(rho: np.ndarray, sigma: np.ndarray) -> float:
    return _entropy_term_nat(rho) + _cross_term_nat(rho, sigma)


def _gradient(rho: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """G with d/dt S(rho || sigma + tH) = Tr(G H): divided differences of log
    in sigma's eigenbasis."""
    ws, vs = np.linalg.eigh(sigma)
    ws = np.clip(ws, EIG_FLOOR, None)
    rho_t = vs.conj().T @ rho @ vs
    lw = np.log(ws)
    denom = ws[:, None] - ws[None, :]
    num = lw[:, None] - lw[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        kmat = np.where(np.abs(denom) > 1e-14, num / denom, 1.0 / ws[:, None])
    G_t = -kmat * rho_t
    return vs @ G_t @ vs.conj().T


def rel_entropy_magic(rho: np.ndarray, dic: StabilizerDictionary,
                      config: RunConfig = DEFAULT_CONFIG,
                      max_iter: int = 10000,
                      gap_tol: float = 1e-6) -> FwResult:
    """Frank-Wolfe minimization of S(rho || sigma) over the hull, started at
    the maximally mixed state; returns a feasible (upper-estimate) value and
    the convexity duality gap.

    Away steps are used alongside the plain vertex steps (the hull is small
    enough to carry explicit vertex weights), which restores fast convergence
    when the optimum sits on a face; the reported gap is still the standard
    Frank-Wolfe linearization gap, a certified optimality bound.
    """
    K = len(dic.vectors)
    mats = [np.outer(v, v.conj()) for v in dic.vectors]
    # uniform weights: the dictionary averages to the maximally mixed state
    weights = np.full(K, 1.0 / K)
    sigma = sum(w * m for w, m in zip(weights, mats))
    gap = float("inf")
    it = 0
    for it in range(1, max_iter + 1):
        G = _gradient(rho, sigma)
        scores = np.array([float(np.real(np.trace(G @ m))) for m in mats])
        fw = int(np.argmin(scores))
        g_sigma = float(np.real(np.trace(G @ sigma)))
        gap = g_sigma - scores[fw]
        if gap < gap_tol:
            break
        active = np.nonzero(weights > 1e-15)[0]
        away = int(active[np.argmax(scores[active])])
        def try_step(direction: np.ndarray, t_max: float):
            # the rho-entropy term is constant along the line
            def line(t: float) -> float:
                return _cross_term_nat(rho, sigma + t * direction)
            res = scipy.optimize.minimize_scalar(
                line, bounds=(0.0, t_max), method="bounded",
                options={"xatol": 1e-12},
            )
            t = float(res.x)
            if line(t) >= line(0.0):
                return None
            return t

        fw_step = (g_sigma - scores[fw] >= scores[away] - g_sigma
                   or weights[away] >= 1.0 - 1e-15)
        t = None
        if not fw_step:
            t_max = weights[away] / (1.0 - weights[away])
            t = try_step(sigma - mats[away], t_max)
            if t is None:
                fw_step = True  # away direction stalled, fall back
        if fw_step:
            t = try_step(mats[fw] - sigma, 1.0)
            if t is None:
                break
            sigma = sigma + t * (mats[fw] - sigma)
            weights = (1.0 - t) * weights
            weights[fw] += t
        else:
            sigma = sigma + t * (sigma - mats[away])
            weights = (1.0 + t) * weights
            weights[away] -= t
        weights = np.clip(weights, 0.0, None)
        weights /= weights.sum()
    ln_b = math.log(config.base_value())
    return FwResult(
        value=_rel_entropy_nat(rho, sigma) / ln_b,
        gap=max(gap, 0.0) / ln_b,
        status=STATUS_UPPER,
        iterations=it,
        sigma=sigma,
    )


# ---------------------------------------------------------------------------
# Distances to the stabilizer sets
# ---------------------------------------------------------------------------

def distance_to_sps(rho: np.ndarray, n: int, q: int,
                    config: RunConfig = DEFAULT_CONFIG
                    ) -> Tuple[float, stabilizer.StabilizerProjectionState]:
    """Exact min over every stabilizer projection state (all subgroups, all
    phases) of the full 1-norm distance."""
    best = None
    witness = None
    for sps in stabilizer.enumerate_sps(n, q, config):
        dist = dense.trace_distance(rho, stabilizer.sps_dense(sps, config))
        if best is None or dist < best:
            best = dist
            witness = sps
    return best, witness


def distance_to_hull_lower(rho: np.ndarray, dic: StabilizerDictionary,
                           iterations: int = 200) -> Tuple[float, np.ndarray]:
    """Certified lower bound on min_{sigma in hull} ||rho - sigma||_1.

    Subgradient ascent on W -> Tr(W rho) - max_phi Tr(W phi) over the
    operator-norm ball ||W||_inf <= 1; any iterate's objective is a valid
    bound, the best one is returned with its witness."""
    mats = [np.outer(v, v.conj()) for v in dic.vectors]

    def objective(W: np.ndarray) -> float:
        top = max(float(np.real(np.trace(W @ m))) for m in mats)
        return float(np.real(np.trace(W @ rho))) - top

    def clip(W: np.ndarray) -> np.ndarray:
        w, v = np.linalg.eigh(W)
        return (v * np.clip(w, -1.0, 1.0)) @ v.conj().T

    W = clip(rho - np.eye(rho.shape[0]) / rho.shape[0])
    best = max(0.0, objective(W))
    best_W = W
    for k in range(1, iterations + 1):
        scores = [float(np.real(np.trace(W @ m))) for m in mats]
        top = int(np.argmax(scores))
        W = clip(W + (1.0 / math.sqrt(k)) * (rho - mats[top]))
        val = objective(W)
        if val > best:
            best = val
            best_W = W
    return best, best_W


# ---------------------------------------------------------------------------
# Stabilizer-measurement distinguishability
# ---------------------------------------------------------------------------

def sm_distinguishing_pauli(rho: np.ndarray, sigma: np.ndarray, q: int, n: int,
                            config: RunConfig = DEFAULT_CONFIG
                            ) -> Tuple[pauli.PauliLabel, float]:
    """The Pauli P maximizing |Tr(P^dag (rho-sigma))| and the 1-norm distance
    of the outcome distributions of its spectral measurement; always at least
    ||rho - sigma||_1 / q^n."""
    delta_mat = rho - sigma
    best = None
    best_val = -1.0
    for ab in itertools.product(range(q), repeat=2 * n):
        P = pauli.label(q, n, ab[:n], ab[n:], 0)
        val = abs(np.trace(pauli.to_dense(P, config).conj().T @ delta_mat))
        if val > best_val + 1e-12:
            best_val = val
            best = P
    order = pauli.order(best)
    top = pauli.power(best, order)   # proportional to identity
    # eigenvalues of P: exp(i pi e / (q order)) * order-th roots of unity
    dim = q ** n
    powers = [pauli.to_dense(pauli.power(best, m), config) for m in range(order)]
    base_phase = np.exp(1j * np.pi * top.c / (q * order))
    dist = 0.0
    for k in range(order):
        lam = base_phase * np.exp(2j * np.pi * k / order)
        proj = np.zeros((dim, dim), dtype=complex)
        for m in range(order):
            proj += lam ** (-m) * powers[m]
        proj /= order
        dist += abs(np.real(np.trace(proj @ delta_mat)))
    return best, float(dist)


# ---------------------------------------------------------------------------
# Patch certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PatchCertificate:
    patches: Tuple[Tuple[float, int], ...]  # (epsilon, D) per patch
    target: str                             # "SP" or "S"
    bound: float                            # lower bound on LF


def fsm_upper_from_distance(eps: float, D: int) -> float:
    """sqrt(1 - eps^2 / 4D^2): stabilizer-measurement fidelity ceiling for a
    patch whose state is 1-norm distance >= eps from the target set."""
    if not 0.0 <= eps <= 2.0:
        raise ValueError("trace-distance bound must lie in [0, 2]")
    if D < 2:
        raise ValueError("patch dimension must be >= 2")
    return math.sqrt(1.0 - eps * eps / (4.0 * D * D))


def certify_product_lf(patches: Sequence[Tuple[float, int]], target: str = "SP",
                       config: RunConfig = DEFAULT_CONFIG) -> PatchCertificate:
    """LF >= sum_i log 1/(1 - eps_i^2/4D_i^2) for any global pure state whose
    reduction to the patch union is the product of the patch states."""
    if target not in ("SP", "S"):
        raise ValueError("target must be 'SP' or 'S'")
    total = 0.0
    for eps, D in patches:
        f = fsm_upper_from_distance(eps, D)
        total += log_value(1.0 / (f * f), config)
    return PatchCertificate(
        patches=tuple((float(e), int(D)) for e, D in patches),
        target=target,
        bound=total,
    )


def extensive_rel_entropy_bound(patches: Sequence[Tuple[float, int]],
                                config: RunConfig = DEFAULT_CONFIG) -> float:
    """Pinsker-route bound S(rho||S) >= sum_i eps_i^2 / (2 D_i^2), valid for
    disjoint patches of a possibly entangled state (natural-log units,
    converted to the configured base)."""
    total_nat = 0.0
    for eps, D in patches:
        if not 0.0 <= eps <= 2.0:
            raise ValueError("trace-distance bound must lie in [0, 2]")
        total_nat += eps * eps / (2.0 * D * D)
    return total_nat / math.log(config.base_value())


def low_energy_lr_witness(psi: np.ndarray, psi_l: np.ndarray, f_l: float,
                          config: RunConfig = DEFAULT_CONFIG) -> float:
    """LR lower bound from the feasible dual operator |psi_l><psi_l| / f_l,
    where f_l is the stabilizer fidelity of psi_l."""
    if f_l <= 0.0:
        raise ValueError("stabilizer fidelity must be positive")
    arg = abs(np.vdot(psi_l, psi)) ** 2 / f_l
    if arg <= 1.0:
        return 0.0
    return log_value(arg, config)


# ---------------------------------------------------------------------------
# Combined report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureValue:
    value: float
    status: str
    gap: float


@dataclass(frozen=True)
class MagicReport:
    lf: Optional[MeasureValue]
    s_rel: Optional[MeasureValue]
    s_max_set: Optional[MeasureValue]
    lgr: Optional[MeasureValue]
    lr: Optional[MeasureValue]
    log_base: object


ALL_MEASURES = ("lf", "srel", "smax", "lgr", "lr")


def magic_report(rho: np.ndarray, dic: StabilizerDictionary,
                 measures: Sequence[str] = ALL_MEASURES,
                 config: RunConfig = DEFAULT_CONFIG) -> MagicReport:
    """Run the requested solvers on a density matrix.

    LF is only computed for (numerically) pure inputs; mixed-state stabilizer
    fidelity is deliberately not solved here, the certificate machinery covers
    those uses.
    """
    lf = s_rel = s_max_set = lgr = lr = None
    if "lf" in measures:
        w, v = np.linalg.eigh(rho)
        if w[-1] > 1.0 - 1e-10:
            val, _ = lf_pure(v[:, -1], dic, config)
            lf = MeasureValue(value=val, status=STATUS_EXACT, gap=0.0)
    if "srel" in measures:
        fw = rel_entropy_magic(rho, dic, config)
        s_rel = MeasureValue(value=fw.value, status=fw.status, gap=fw.gap)
    if "smax" in measures or "lgr" in measures:
        cone = lgr_smax_cone(rho, dic, config)
        if "smax" in measures:
            s_max_set = MeasureValue(
                value=cone.s_max_set, status=cone.status,
                gap=max(0.0, -cone.min_eig),
            )
        if "lgr" in measures:
            lgr = MeasureValue(
                value=cone.lgr, status=cone.status,
                gap=max(0.0, -cone.min_eig),
            )
    if "lr" in measures:
        res = lr_lp(rho, dic, config)
        lr = MeasureValue(value=res.value, status=STATUS_EXACT, gap=res.gap)
    return MagicReport(lf=lf, s_rel=s_rel, s_max_set=s_max_set, lgr=lgr, lr=lr,
                      log_base=config.log_base)
