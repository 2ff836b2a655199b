"""Projection onto invariant operators: group averages and Haar twirls.

Finite groups are twirled by exact averaging over all elements.  Compact
(Lie) symmetries never touch quadrature over the group manifold: their Haar
twirl equals the orthogonal projection onto the commutant, which is computed
exactly.  The unitary-group k-fold twirl additionally has the closed
permutation form from Schur-Weyl duality, solved through the permutation
Gram system.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .decompose import CommutantBasis, commutant_basis
from .errors import (
    DimensionMismatchError,
    DimensionTooLargeError,
    InvalidParameterError,
    NotCPTPError,
    SourceMismatchError,
)
from .linalg import DEFAULT_TOL, Tolerance
from .representations import Representation, perm_matrix_on_tensor, sources_match

__all__ = [
    "TwirlContext", "twirl_context", "twirl_operator", "twirl_channel",
    "k_design_twirl", "haar_sample_unitary", "monte_carlo_k_design_twirl",
    "choi_matrix", "is_cptp",
]


@dataclass
class TwirlContext:
    """How to twirl against a representation.

    mode "average" sums R(g) o R(g)^dag over the whole finite group; mode
    "projection" projects onto an orthonormal commutant basis (exact for
    compact groups, also valid for finite ones).
    """

    rep: Representation
    mode: str
    commutant: CommutantBasis | None = None


def twirl_context(rep: Representation, mode: str | None = None,
                  tol: Tolerance = DEFAULT_TOL) -> TwirlContext:
    if mode is None:
        mode = "average" if rep.flavor == "finite" else "projection"
    if mode == "average":
        if rep.flavor != "finite":
            raise InvalidParameterError("exact averaging needs a finite group")
        return TwirlContext(rep, "average")
    if mode == "projection":
        return TwirlContext(rep, "projection", commutant_basis(rep, tol))
    raise InvalidParameterError(f"unknown twirl mode {mode!r}")


def twirl_operator(ctx: TwirlContext, o: np.ndarray) -> np.ndarray:
    """Twirl an operator; the output commutes with every representative."""
    o = np.asarray(o, dtype=complex)
    if o.shape != (ctx.rep.dim, ctx.rep.dim):
        raise DimensionMismatchError(
            f"operator shape {o.shape} does not match carrier dim {ctx.rep.dim}")
    if ctx.mode == "average":
        g = ctx.rep.group
        acc = np.zeros_like(o)
        for i in range(g.order):
            r = ctx.rep.representative(i)
            acc += r @ o @ linalg.dagger(r)
        return acc / g.order
    basis = ctx.commutant.basis
    out = np.zeros_like(o)
    for b in basis:
        out += b * linalg.hs_inner(b, o)
    return out


def choi_matrix(superop: np.ndarray, dim_in: int, dim_out: int) -> np.ndarray:
    """Choi matrix of a superoperator on row-major vectorized operators."""
    c = superop.reshape(dim_out, dim_out, dim_in, dim_in)
    return c.transpose(2, 0, 3, 1).reshape(dim_in * dim_out, dim_in * dim_out)


def is_cptp(superop: np.ndarray, dim_in: int, dim_out: int,
            tol: Tolerance = DEFAULT_TOL) -> bool:
    choi = choi_matrix(superop, dim_in, dim_out)
    if not linalg.is_psd(choi, Tolerance(max(tol.absolute, 1e-9), tol.relative)):
        return False
    reduced = linalg.partial_trace(choi, [dim_in, dim_out], keep=[0])
    return linalg.frob(reduced - np.eye(dim_in)) <= 1e-8 * dim_in


def twirl_channel(rep_in: Representation, rep_out: Representation,
                  phi: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Average a channel into an equivariant one over a finite group.

    ``phi`` is a superoperator matrix on row-major vectorized operators,
    CPTP within tolerance.  The twirl conjugates the input side by rep_in and
    the output side by rep_out over every group element; twirling a physical
    map yields a physical map.
    """
    if rep_in.flavor != "finite" or rep_out.flavor != "finite":
        raise InvalidParameterError(
            "channel twirl is defined over finite groups; compact-group "
            "channel twirls reduce to twirl_operator on the operator carrier")
    if not sources_match(rep_in, rep_out):
        raise SourceMismatchError("input and output reps must share the group")
    phi = np.asarray(phi, dtype=complex)
    din, dout = rep_in.dim, rep_out.dim
    if phi.shape != (dout * dout, din * din):
        raise DimensionMismatchError(
            f"superoperator shape {phi.shape}, expected {(dout * dout, din * din)}")
    if not is_cptp(phi, din, dout, tol):
        raise NotCPTPError("input channel is not CPTP within tolerance")
    g = rep_in.group
    acc = np.zeros_like(phi)
    for i in range(g.order):
        cu = linalg.conjugation_superoperator(rep_in.representative(i))
        cv = linalg.conjugation_superoperator(rep_out.representative(i))
        acc += linalg.dagger(cv) @ phi @ cu
    return acc / g.order


def _sk_permutation_ops(d: int, k: int) -> list[np.ndarray]:
    return [perm_matrix_on_tensor(p, d) for p in itertools.permutations(range(k))]


def k_design_twirl(d: int, k: int, o: np.ndarray,
                   tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Exact Haar twirl of an operator on (C^d)^(x k) over U(d).

    By Schur-Weyl the image is the span of the k! index permutations, so the
    twirl is the orthogonal projection solved from the permutation Gram
    system G c = b with G[pi, sigma] = Tr[P_pi^dag P_sigma].  A pseudo-inverse
    with cutoff 1e-10 sigma_max handles the linear dependence at d < k.
    """
    if k > 4 or d ** k > 64:
        raise DimensionTooLargeError("k_design_twirl capped at k <= 4, d^k <= 64")
    o = np.asarray(o, dtype=complex)
    dim = d ** k
    if o.shape != (dim, dim):
        raise DimensionMismatchError(f"operator shape {o.shape}, expected {(dim, dim)}")
    perms = _sk_permutation_ops(d, k)
    m = len(perms)
    gram = np.empty((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            gram[i, j] = np.trace(linalg.dagger(perms[i]) @ perms[j])
    b = np.array([np.trace(linalg.dagger(p) @ o) for p in perms])
    coeff = np.linalg.pinv(gram, rcond=1e-10) @ b
    out = np.zeros_like(o)
    for c, p in zip(coeff, perms):
        out += c * p
    return out


def haar_sample_unitary(d: int, rng_seed: int) -> np.ndarray:
    """Haar-distributed d x d unitary, deterministic per seed."""
    if d < 1:
        raise InvalidParameterError("need d >= 1")
    return linalg.haar_unitary(d, np.random.default_rng(rng_seed))


def monte_carlo_k_design_twirl(d: int, k: int, o: np.ndarray, n_samples: int,
                               rng_seed: int = 0, batch: int = 512) -> np.ndarray:
    """Monte Carlo oracle for the Haar twirl: empirical mean of U^k o U^k dag.

    Used to cross-check the exact permutation-projection route; the error
    scale is O(1/sqrt(n_samples)).  Deterministic per seed; samples are
    consumed in a fixed batch order.
    """
    o = np.asarray(o, dtype=complex)
    rng = np.random.default_rng(rng_seed)
    dim = d ** k
    acc = np.zeros((dim, dim), dtype=complex)
    done = 0
    while done < n_samples:
        nb = min(batch, n_samples - done)
        us = np.stack([linalg.haar_unitary(d, rng) for _ in range(nb)])
        uk = us
        for _ in range(k - 1):
            uk = np.einsum("nij,nkl->nikjl", uk, us).reshape(nb, uk.shape[1] * d, -1)
        acc += np.einsum("nij,jk,nlk->il", uk, o, uk.conj())
        done += nb
    return acc / n_samples
