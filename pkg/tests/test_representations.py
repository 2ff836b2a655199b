import itertools
import json

import numpy as np
import pytest

from equirep import serialize
from equirep.errors import SourceMismatchError, ValidationError
from equirep.groups import make_cyclic, make_symmetric
from equirep.linalg import I2, X, Y, Z, comm, dagger, frob, hs_inner, kron, vectorize
from equirep.representations import (
    RepOnOperators,
    adjoint_action,
    bitflip_rep,
    dihedral_rep_s3,
    direct_sum,
    dual,
    left_regular_rep,
    perm_rep_qubits,
    su2_fundamental,
    swap_matrix,
    swap_rep,
    tensor_power,
    translation_rep,
    trivial_rep,
    unitary_algebra_rep,
    verify_homomorphism,
)

SIGMA_MINUS = (X + 1j * Y) / 2   # |0><1|
SIGMA_PLUS = (X - 1j * Y) / 2    # |1><0|


def all_unitary(rep, tol=1e-10):
    return all(frob(dagger(m) @ m - np.eye(rep.dim)) < tol
               for m in rep.representatives())


# -- constructors and their stated examples ---------------------------------

def test_trivial_rep_finite():
    rep = trivial_rep(make_cyclic(2), 3)
    for m in rep.representatives():
        assert np.allclose(m, np.eye(3))


def test_trivial_rep_lie_images_zero():
    rep = trivial_rep(su2_fundamental().algebra, 2)
    for h in rep.generator_images:
        assert frob(h) == 0


def test_perm_rep_transposition_is_swap():
    rep = perm_rep_qubits(3)
    elems = list(itertools.permutations(range(3)))
    t12 = elems.index((1, 0, 2))
    assert frob(rep.representative(t12) - swap_matrix(3, 0, 1)) < 1e-14


def test_perm_rep_action_on_basis():
    # P_(12) |i1 i2 i3> = |i2 i1 i3>
    rep = perm_rep_qubits(3)
    elems = list(itertools.permutations(range(3)))
    p = rep.representative(elems.index((1, 0, 2)))
    for i1, i2, i3 in itertools.product(range(2), repeat=3):
        src = np.zeros(8)
        src[(i1 << 2) | (i2 << 1) | i3] = 1
        dst = np.zeros(8)
        dst[(i2 << 2) | (i1 << 1) | i3] = 1
        assert np.allclose(p @ src, dst)


def test_perm_rep_identity_and_homomorphism():
    rep = perm_rep_qubits(3)
    assert np.allclose(rep.representative(rep.group.identity), np.eye(8))
    elems = list(itertools.permutations(range(3)))
    t12, t23 = elems.index((1, 0, 2)), elems.index((0, 2, 1))
    prod = rep.group.multiply(t12, t23)
    assert frob(rep.representative(t12) @ rep.representative(t23)
                - rep.representative(prod)) < 1e-12
    assert verify_homomorphism(rep) < 1e-10


def test_bitflip_rep_examples():
    r1 = bitflip_rep(1)
    assert frob(r1.representative(1) - X) < 1e-14
    r2 = bitflip_rep(2)
    assert frob(r2.representative(1) - kron(X, X)) < 1e-14
    assert frob(r2.representative(1) @ r2.representative(1) - np.eye(4)) < 1e-12


def test_swap_rep_involution():
    rep = swap_rep()
    s = rep.representative(1)
    assert frob(s - swap_matrix()) < 1e-14
    assert frob(s @ s - np.eye(4)) < 1e-12


def test_dihedral_rep_s3_generator_images():
    rep = dihedral_rep_s3()
    elems = list(itertools.permutations(range(3)))
    w = np.exp(2j * np.pi / 3)
    r123 = rep.representative(elems.index((1, 2, 0)))
    r12 = rep.representative(elems.index((1, 0, 2)))
    assert frob(r123 - np.diag([w, w.conjugate()])) < 1e-12
    assert frob(r12 - X) < 1e-12
    # cube of the rotation, square of the reflection
    assert frob(np.linalg.matrix_power(r123, 3) - I2) < 1e-12
    assert frob(r12 @ r12 - I2) < 1e-12
    # conjugating the rotation by the reflection inverts it
    assert frob(r12 @ r123 @ r12 - np.diag([w.conjugate(), w])) < 1e-12
    assert verify_homomorphism(rep) < 1e-10


def test_su2_fundamental_images():
    rep = su2_fundamental()
    assert frob(rep.generator_images[2] - Z / 2) < 1e-14
    assert verify_homomorphism(rep) < 1e-10


def test_su2_sampled_elements_are_cayley_klein():
    # sampled element = c0 1 + i(c1 X + c2 Y + c3 Z) with unit real 4-vector
    rep = su2_fundamental()
    for u in rep.sample_elements(3, 5):
        c0 = np.trace(u).real / 2
        cs = [np.trace(dagger(p) @ u).imag / 2 for p in (X, Y, Z)]
        vec = np.array([c0] + cs)
        assert abs(vec @ vec - 1) < 1e-9
        recon = c0 * I2 + 1j * (cs[0] * X + cs[1] * Y + cs[2] * Z)
        assert frob(u - recon) < 1e-9


def test_exp_of_zero_combination():
    rep = su2_fundamental()
    h = sum(0.0 * g for g in rep.generator_images)
    from equirep.linalg import exp_unitary
    assert frob(exp_unitary(h, 1.0) - I2) < 1e-14


def test_tensor_power_lie_images():
    t2 = tensor_power(su2_fundamental(), 2)
    expected = kron(Z / 2, I2) + kron(I2, Z / 2)
    assert frob(t2.generator_images[2] - expected) < 1e-13
    assert verify_homomorphism(t2) < 1e-10


def test_tensor_power_k1_is_same_rep():
    rep = su2_fundamental()
    assert tensor_power(rep, 1) is rep


def test_tensor_power_finite_kronecker_square():
    r2 = tensor_power(bitflip_rep(1), 2)
    assert frob(r2.representative(1) - kron(X, X)) < 1e-13


def test_tensor_power_leibniz_on_vectors():
    rng = np.random.default_rng(0)
    base = su2_fundamental()
    t2 = tensor_power(base, 2)
    for idx in range(3):
        h1 = base.generator_images[idx]
        h2 = t2.generator_images[idx]
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        w = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        lhs = h2 @ np.kron(v, w)
        rhs = np.kron(h1 @ v, w) + np.kron(v, h1 @ w)
        assert np.linalg.norm(lhs - rhs) < 1e-12


def test_tensor_power_su2_commutes_with_swap():
    t2 = tensor_power(su2_fundamental(), 2)
    s = swap_matrix()
    for u in t2.sample_elements(11, 20):
        assert frob(comm(u, s)) < 1e-9


def test_direct_sum_block_structure():
    r1 = bitflip_rep(1)
    r2 = trivial_rep(r1.group, 1)
    s = direct_sum(r1, r2)
    m = s.representative(1)
    assert m.shape == (3, 3)
    assert frob(m[:2, :2] - X) < 1e-14
    assert abs(m[2, 2] - 1) < 1e-14
    assert frob(m[:2, 2:]) == 0 and frob(m[2:, :2]) == 0


def test_direct_sum_source_mismatch():
    with pytest.raises(SourceMismatchError):
        direct_sum(bitflip_rep(1), perm_rep_qubits(3))
    # same abstract table through different constructors is accepted
    assert direct_sum(bitflip_rep(1), perm_rep_qubits(2)).dim == 6


def test_dual_of_trivial_is_trivial():
    rep = trivial_rep(make_cyclic(3), 2)
    d = dual(rep)
    for m in d.representatives():
        assert np.allclose(m, np.eye(2))


def test_dual_satisfies_homomorphism():
    for rep in (dihedral_rep_s3(), perm_rep_qubits(2)):
        assert verify_homomorphism(dual(rep)) < 1e-10
    lie = su2_fundamental()
    assert verify_homomorphism(dual(lie)) < 1e-10


def test_adjoint_action_z_generator_ladder_eigenvalue():
    # image of the Z generator acting on vec(sigma-): [Z/2, sigma-] = +sigma-
    ad = adjoint_action(su2_fundamental())
    img_z = ad.generator_images[2]
    v = vectorize(SIGMA_MINUS)
    assert np.linalg.norm(img_z @ v - v) < 1e-12
    # and [Z/2, sigma+] = -sigma+
    w = vectorize(SIGMA_PLUS)
    assert np.linalg.norm(img_z @ w + w) < 1e-12


def test_adjoint_action_matches_conjugation():
    rep = swap_rep()
    ad = adjoint_action(rep)
    s = rep.representative(1)
    rng = np.random.default_rng(1)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert np.linalg.norm(
        ad.representative(1) @ vectorize(a) - vectorize(s @ a @ dagger(s))) < 1e-12


def test_adjoint_action_preserves_hs_inner():
    rep = tensor_power(su2_fundamental(), 2)
    rng = np.random.default_rng(2)
    for u in rep.sample_elements(5, 5):
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        lhs = hs_inner(u @ a @ dagger(u), u @ b @ dagger(u))
        assert abs(lhs - hs_inner(a, b)) < 1e-9


def test_left_regular_z2_is_x():
    rep = left_regular_rep(make_cyclic(2))
    assert frob(rep.representative(1) - X) < 1e-14
    assert frob(rep.representative(0) - I2) < 1e-14


def test_left_regular_z3_shift():
    rep = left_regular_rep(make_cyclic(3))
    l1 = rep.representative(1)
    shift = np.zeros((3, 3), dtype=complex)
    for g in range(3):
        shift[(1 + g) % 3, g] = 1
    assert frob(l1 - shift) < 1e-14
    assert frob(np.linalg.matrix_power(l1, 3) - np.eye(3)) < 1e-12


def test_left_regular_permutation_matrices():
    rep = left_regular_rep(make_symmetric(3))
    for m in rep.representatives():
        assert np.allclose(m @ m.conj().T, np.eye(6))
        assert np.allclose(np.abs(m.sum(axis=0)), 1)
    assert verify_homomorphism(rep) < 1e-12


def test_translation_rep_commutes_with_ring_hamiltonian():
    from equirep.tasks import heisenberg_xxx
    rep = translation_rep(4)
    h = heisenberg_xxx(4, periodic=True)
    for m in rep.representatives():
        assert frob(comm(h, m)) < 1e-10
    assert verify_homomorphism(rep) < 1e-12


def test_unitary_algebra_rep_closure():
    rep = unitary_algebra_rep(3)
    assert rep.algebra.dim == 9
    assert verify_homomorphism(rep) < 1e-9


def test_perm_rep_tensor_qutrits():
    from equirep.representations import perm_rep_tensor
    rep = perm_rep_tensor(2, 3)
    assert rep.dim == 9
    assert verify_homomorphism(rep) < 1e-12
    s = rep.representative(1)  # the transposition
    v = np.zeros(9)
    v[1] = 1.0          # |0 1>
    w = np.zeros(9)
    w[3] = 1.0          # |1 0>
    assert np.allclose(s @ v, w)


def test_direct_sum_lie_flavor():
    r = su2_fundamental()
    s = direct_sum(r, trivial_rep(r.source, 1))
    assert s.dim == 3
    assert verify_homomorphism(s) < 1e-10
    assert frob(s.generator_images[2] - np.diag([0.5, -0.5, 0.0])) < 1e-13


def test_left_regular_order_cap():
    import pytest as _pytest
    from equirep.errors import InvalidParameterError
    big = make_cyclic(513)
    with _pytest.raises(InvalidParameterError):
        left_regular_rep(big)


# -- invariants --------------------------------------------------------------

@pytest.mark.parametrize("rep", [
    perm_rep_qubits(2), perm_rep_qubits(3), bitflip_rep(2), swap_rep(),
    dihedral_rep_s3(), left_regular_rep(make_cyclic(5)),
])
def test_finite_representatives_unitary(rep):
    assert all_unitary(rep)


def test_perturbed_representative_detected():
    rep = dihedral_rep_s3()
    images = [m.copy() for m in rep._gen_images]
    images[0] = images[0] + 1e-3
    from equirep.representations import Representation
    bad = Representation(rep.source, "finite", 2, "perturbed", gen_images=images)
    assert verify_homomorphism(bad) >= 1e-4


def test_trivial_rep_residual_exactly_zero():
    assert verify_homomorphism(trivial_rep(make_cyclic(4), 3)) == 0.0


def test_dual_dual_equivalent_to_original():
    from equirep.decompose import find_intertwiner
    for rep in (dihedral_rep_s3(), perm_rep_qubits(2), su2_fundamental(),
                tensor_power(su2_fundamental(), 2)):
        dd = dual(dual(rep))
        assert find_intertwiner(rep, dd).verdict == "equivalent"


# -- serialization ------------------------------------------------------------

@pytest.mark.parametrize("rep", [swap_rep(), dihedral_rep_s3(), su2_fundamental()])
def test_rep_spec_round_trip(rep):
    spec = serialize.rep_to_spec(rep)
    text = serialize.dumps_report(spec)
    back = serialize.rep_from_spec(json.loads(text))
    assert back.dim == rep.dim
    assert back.flavor == rep.flavor
    if rep.flavor == "finite":
        for g in rep.group.generators:
            assert np.array_equal(back.representative(g), rep.representative(g))
    else:
        for a, b in zip(back.generator_images, rep.generator_images):
            assert np.array_equal(a, b)


def test_rep_spec_rejects_corrupted_matrices():
    spec = serialize.rep_to_spec(swap_rep())
    spec["matrices"][0][0][1][0] = 0.35  # break unitarity/homomorphism
    with pytest.raises(ValidationError):
        serialize.rep_from_spec(spec)
