"""Equivariant QNN generators, layer products, and measurement operators.

A layer product W(theta) = prod_l exp(-i theta_l H_l) commutes with every
representative as soon as each generator H_l does, so the full space of
admissible generators is exactly the Hermitian part of the commutant.  That
complete basis is what gets exposed; hand-picked sets (like the six-element
swap-symmetric family) are provided as named presets and verified to lie in
its span.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .decompose import commutant_basis
from .errors import DimensionMismatchError, NumericalError
from .linalg import DEFAULT_TOL, Tolerance
from .representations import Representation

__all__ = [
    "EquivariantGeneratorSet", "QnnCircuit", "EquivariantMeasurement",
    "equivariant_generators", "build_qnn", "equivariant_measurement",
    "check_equivariance", "swap_symmetric_six", "GENERATOR_PRESETS",
]


@dataclass
class EquivariantGeneratorSet:
    """Hermitian orthonormal basis of the commutant, identity direction first."""

    rep: Representation
    generators: list[np.ndarray]
    includes_identity: bool

    @property
    def dim(self) -> int:
        return len(self.generators)

    @property
    def traceless(self) -> list[np.ndarray]:
        """Sub-basis orthogonal to the identity (hence traceless)."""
        return self.generators[1:] if self.includes_identity else list(self.generators)

    def project(self, h: np.ndarray) -> np.ndarray:
        """Orthogonal projection of an operator onto the generator span."""
        out = np.zeros_like(np.asarray(h, dtype=complex))
        for b in self.generators:
            out += b * linalg.hs_inner(b, h)
        return out


def equivariant_generators(rep: Representation,
                           tol: Tolerance = DEFAULT_TOL) -> EquivariantGeneratorSet:
    """All Hermitian generators commuting with the representation.

    The identity direction (always present) is isolated as element 0 so the
    traceless sub-basis is directly available.
    """
    comm = commutant_basis(rep, tol)
    d = rep.dim
    ident = np.eye(d, dtype=complex) / np.sqrt(d)
    rest = []
    for b in comm.basis:
        c = linalg.hs_inner(ident, b)
        rest.append(b - c.real * ident)
    basis = [ident] + linalg.orthonormalize_hermitian(rest, tol)
    if len(basis) != comm.dim:
        raise NumericalError(
            "isolating the identity direction changed the commutant rank; "
            "the tolerance sits on a rank threshold")
    return EquivariantGeneratorSet(rep, basis, includes_identity=True)


@dataclass
class QnnCircuit:
    """Ordered parameterized layers over a fixed equivariant generator set."""

    gens: EquivariantGeneratorSet
    layers: list[tuple[int, float]]

    @property
    def dim(self) -> int:
        return self.gens.rep.dim

    @property
    def parameters(self) -> np.ndarray:
        return np.array([theta for _, theta in self.layers])

    def with_parameters(self, thetas) -> "QnnCircuit":
        thetas = list(thetas)
        if len(thetas) != len(self.layers):
            raise DimensionMismatchError("one parameter per layer required")
        return QnnCircuit(self.gens, [(idx, float(t))
                                      for (idx, _), t in zip(self.layers, thetas)])

    def unitary(self) -> np.ndarray:
        return build_qnn(self.gens, self.layers)


def build_qnn(gens: EquivariantGeneratorSet, layout) -> np.ndarray:
    """Ordered product of exp(-i theta_l H_l); empty layout gives the identity.

    Layer order matters: commutant generators need not commute with each
    other, only with the representation.
    """
    w = np.eye(gens.rep.dim, dtype=complex)
    for idx, theta in layout:
        if not 0 <= idx < len(gens.generators):
            raise IndexError(f"generator index {idx} out of range 0..{len(gens.generators)-1}")
        w = w @ linalg.exp_unitary(gens.generators[idx], float(theta))
    return w


@dataclass
class EquivariantMeasurement:
    """Hermitian measurement commuting with every representative."""

    m: np.ndarray
    coefficients: np.ndarray
    basis: list[np.ndarray]


def equivariant_measurement(rep: Representation, coefficients, basis=None,
                            tol: Tolerance = DEFAULT_TOL) -> EquivariantMeasurement:
    """Hermitian combination sum_i c_i B_i over an equivariant Hermitian basis.

    ``basis`` defaults to the full Hermitian commutant basis; pass e.g. block
    projectors to use the direct-sum parameterization c_0 1_{d_0} (+) c_1
    1_{d_1} (+) ...
    """
    if basis is None:
        basis = equivariant_generators(rep, tol).generators
    coefficients = np.asarray(coefficients, dtype=float)
    if coefficients.shape != (len(basis),):
        raise DimensionMismatchError(
            f"{len(basis)} coefficients required, got {coefficients.shape}")
    m = np.zeros((rep.dim, rep.dim), dtype=complex)
    for c, b in zip(coefficients, basis):
        m += c * b
    return EquivariantMeasurement(m, coefficients, list(basis))


def check_equivariance(w: np.ndarray, rep: Representation, n_samples: int = 20,
                       tol: Tolerance = DEFAULT_TOL, rng_seed: int = 0) -> float:
    """Max commutator residual of an operator against the representation.

    Finite flavor: exact over the group generators.  Lie flavor: over the
    algebra images (sufficient for the connected component) plus sampled
    group elements as a smoke test.
    """
    w = np.asarray(w, dtype=complex)
    if w.shape != (rep.dim, rep.dim):
        raise DimensionMismatchError(
            f"operator shape {w.shape} does not match carrier dim {rep.dim}")
    res = 0.0
    for k in rep.generator_representatives():
        res = max(res, linalg.frob(linalg.comm(w, k)))
    if rep.flavor == "lie" and n_samples > 0:
        for u in rep.sample_elements(rng_seed, n_samples):
            res = max(res, linalg.frob(linalg.comm(w, u)))
    return res


def swap_symmetric_six() -> list[np.ndarray]:
    """The six named two-qubit generators commuting with SWAP.

    span{X(x)1 + 1(x)X, Y(x)1 + 1(x)Y, Z(x)1 + 1(x)Z, XX, YY, ZZ}; a strict
    subspace of the full ten-dimensional swap commutant.
    """
    out = []
    for p in (linalg.X, linalg.Y, linalg.Z):
        out.append(np.kron(p, linalg.I2) + np.kron(linalg.I2, p))
    for p in (linalg.X, linalg.Y, linalg.Z):
        out.append(np.kron(p, p))
    return out


GENERATOR_PRESETS = {
    "paper-swap-six": swap_symmetric_six,
    "swap-six": swap_symmetric_six,
}
