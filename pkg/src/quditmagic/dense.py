"""Dense state algebra used as the verification oracle.

Conventions, fixed package-wide:
  * little-endian site ordering: site 0 is the fastest-varying basis index;
  * trace_distance is the FULL Schatten 1-norm ||rho - sigma||_1 (orthogonal
    pure states are at distance 2) -- the halved metric is never exposed;
  * all entropic quantities use the configured log base (default 2).
"""

import json
from typing import Callable, List, Sequence

import numpy as np

from .config import DEFAULT_CONFIG, RunConfig, check_dense, log_value


class OverlappingRegions(ValueError):
    pass


def state_from_amplitudes(q: int, n: int, amps: Sequence[complex]) -> np.ndarray:
    v = np.asarray(amps, dtype=complex)
    if v.shape != (q ** n,):
        raise ValueError("amplitude vector has wrong length")
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > 1e-12:
        raise ValueError("state vector is not normalized")
    return v


def density_of(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def partial_trace(rho: np.ndarray, q: int, n: int, keep: Sequence[int]) -> np.ndarray:
    """Partial trace keeping the listed sites (ascending order in the output)."""
    keep = sorted(keep)
    traced = [s for s in range(n) if s not in keep]
    tens = rho.reshape([q] * (2 * n))
    remaining = list(range(n))
    for s in traced:
        m = len(remaining)
        ax = m - 1 - remaining.index(s)
        tens = np.trace(tens, axis1=ax, axis2=ax + m)
        remaining.remove(s)
    m = len(keep)
    return tens.reshape(q ** m, q ** m)


def fidelity_root(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Root fidelity F = || sqrt(rho) sqrt(sigma) ||_1."""
    s = _psd_sqrt(rho) @ _psd_sqrt(sigma)
    return float(np.sum(np.linalg.svd(s, compute_uv=False)))


def fidelity_sq(rho: np.ndarray, sigma: np.ndarray) -> float:
    """The squared quantity F(rho,sigma) = ||sqrt(rho) sqrt(sigma)||_1^2."""
    return fidelity_root(rho, sigma) ** 2


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    if w.min() < -1e-8:
        raise ValueError("matrix is not PSD within tolerance")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T

def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Full 1-norm ||rho - sigma||_1 (NOT halved)."""
    w = np.linalg.eigvalsh(rho - sigma)
    return float(np.sum(np.abs(w)))


def vn_entropy(rho: np.ndarray, config: RunConfig = DEFAULT_CONFIG) -> float:
    w = np.linalg.eigvalsh(rho)
    w = w[w > 1e-14]
    return float(-np.sum(w * np.log(w)) / np.log(config.base_value()))


def mutual_information(
    rho: np.ndarray,
    q: int,
    n: int,
    A: Sequence[int],
    B: Sequence[int],
    config: RunConfig = DEFAULT_CONFIG,
) -> float:
    if set(A) & set(B):
        raise OverlappingRegions("regions overlap")
    rho_a = partial_trace(rho, q, n, A)
    rho_b = partial_trace(rho, q, n, B)
    rho_ab = partial_trace(rho, q, n, sorted(set(A) | set(B)))
    return (
        vn_entropy(rho_a, config)
        + vn_entropy(rho_b, config)
        - vn_entropy(rho_ab, config)
    )


SUPPORT_CUTOFF = 1e-10


def relative_entropy(
    rho: np.ndarray, sigma: np.ndarray, config: RunConfig = DEFAULT_CONFIG
) -> float:
    """S(rho||sigma) in the configured base, +inf outside sigma's support."""
    ws, vs = np.linalg.eigh(sigma)
    support = ws > SUPPORT_CUTOFF
    proj_out = vs[:, ~support]
    if proj_out.shape[1] and np.linalg.norm(proj_out.conj().T @ rho @ proj_out) > SUPPORT_CUTOFF:
        return float("inf")
    wr = np.linalg.eigvalsh(rho)
    wr = wr[wr > 1e-14]
    tr_rho_log_rho = float(np.sum(wr * np.log(wr)))
    vsup = vs[:, support]
    wsup = ws[support]
    rho_in = vsup.conj().T @ rho @ vsup
    tr_rho_log_sigma = float(np.real(np.sum(np.diag(rho_in) * np.log(wsup))))
    return (tr_rho_log_rho - tr_rho_log_sigma) / np.log(config.base_value())


def max_relative_entropy(
    rho: np.ndarray, sigma: np.ndarray, config: RunConfig = DEFAULT_CONFIG
) -> float:
    """S_max(rho||sigma) = log min{lambda : rho <= lambda sigma}."""
    ws, vs = np.linalg.eigh(sigma)
    support = ws > SUPPORT_CUTOFF
    proj_out = vs[:, ~support]
    if proj_out.shape[1] and np.linalg.norm(proj_out.conj().T @ rho @ proj_out) > SUPPORT_CUTOFF:
        return float("inf")
    vsup = vs[:, support]
    inv_sqrt = vsup * (1.0 / np.sqrt(ws[support]))
    M = inv_sqrt.conj().T @ rho @ inv_sqrt
    lam = float(np.linalg.eigvalsh(M).max())
    lam = max(lam, 1e-300)
    return log_value(lam, config)


def apply_brickwork(
    psi: np.ndarray,
    q: int,
    n: int,
    depth: int,
    gate_supplier: Callable[[int, int], np.ndarray],
) -> np.ndarray:
    """Alternating even/odd brickwork on an open 1D chain.

    gate_supplier(layer, left_site) must return a q^2 x q^2 unitary acting on
    sites (left_site, left_site+1); layer 0 couples the even pairs.
    """
    out = np.array(psi, dtype=complex)
    for layer in range(depth):
        start = 0 if layer % 2 == 0 else 1
        for left in range(start, n - 1, 2):
            gate = np.asarray(gate_supplier(layer, left), dtype=complex)
            err = np.linalg.norm(gate @ gate.conj().T - np.eye(q * q))
            if err > 1e-10:
                raise ValueError("gate is not unitary within tolerance")
            out = _apply_two_site(out, q, n, left, gate)
    return out


def _apply_two_site(psi: np.ndarray, q: int, n: int, left: int, gate: np.ndarray) -> np.ndarray:
    """Apply a two-site gate on (left, left+1); gate indices are little-endian
    in the pair, i.e. column index = j_left + q * j_{left+1}."""
    tens = psi.reshape([q] * n)
    ax_l = n - 1 - left
    ax_r = n - 1 - (left + 1)
    # bring the pair to the last two axes as (left+1, left)
    tens = np.moveaxis(tens, [ax_r, ax_l], [n - 2, n - 1])
    shape = tens.shape
    tens = tens.reshape(-1, q * q)
    # row of the flattened pair is j_{left+1} * q + j_left; the gate uses
    # little-endian pair indexing j_left + q * j_{left+1}, which coincides.
    tens = tens @ gate.T
    tens = tens.reshape(shape)
    tens = np.moveaxis(tens, [n - 2, n - 1], [ax_r, ax_l])
    return tens.reshape(-1)


def state_to_json(q: int, n: int, psi: np.ndarray) -> str:
    return json.dumps(
        {
            "q": q,
            "n": n,
            "amplitudes": [[float(z.real), float(z.imag)] for z in psi],
        }
    )


def state_from_json(text: str):
    obj = json.loads(text)
    q = int(obj["q"])
    n = int(obj["n"])
    amps = [complex(re, im) for re, im in obj["amplitudes"]]
    return q, n, state_from_amplitudes(q, n, amps)
