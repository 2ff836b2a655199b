import numpy as np
import pytest

from equirep import linalg, serialize
from equirep.errors import InvalidParameterError, NotHermitianError
from equirep.groups import (
    group_from_table,
    group_from_unitaries,
    identify_small_group,
    lie_closure,
    make_cyclic,
    make_dihedral,
    make_symmetric,
    sample_lie_group_element,
    verify_group_axioms,
)
from equirep.linalg import I2, X, Y, Z, frob, hs_inner
from equirep.representations import swap_matrix


# -- constructors -----------------------------------------------------------

def test_cyclic_basic():
    g = make_cyclic(4)
    assert g.order == 4
    assert g.is_abelian()
    assert g.power(1, 4) == g.identity
    assert g.power(1, 2) != g.identity


def test_cyclic_two_matches_bitflip_table():
    g = make_cyclic(2)
    assert np.array_equal(g.mul, np.array([[0, 1], [1, 0]]))


def test_cyclic_trivial():
    g = make_cyclic(1)
    assert g.order == 1
    assert verify_group_axioms(g).ok


def test_cyclic_rejects_zero():
    with pytest.raises(InvalidParameterError):
        make_cyclic(0)


def test_symmetric_s3():
    g = make_symmetric(3)
    assert g.order == 6
    assert not g.is_abelian()


def test_symmetric_trivial():
    assert make_symmetric(1).order == 1


def test_symmetric_composition_convention():
    # (12)*(23) = (123) under (sigma*tau)(i) = sigma(tau(i))
    import itertools
    g = make_symmetric(3)
    elems = list(itertools.permutations(range(3)))
    t12 = elems.index((1, 0, 2))
    t23 = elems.index((0, 2, 1))
    c123 = elems.index((1, 2, 0))  # one-line for the cycle 1->2->3->1
    assert g.multiply(t12, t23) == c123


def test_symmetric_rejects_large():
    with pytest.raises(InvalidParameterError):
        make_symmetric(7)


def test_dihedral_relations():
    g = make_dihedral(5)
    assert g.order == 10
    r, s = g.generators
    assert g.power(r, 5) == g.identity
    assert g.multiply(g.multiply(s, r), s) == g.inverse(r)


def test_dihedral_center_of_d4():
    g = make_dihedral(4)
    center = [a for a in range(g.order)
              if all(g.multiply(a, b) == g.multiply(b, a) for b in range(g.order))]
    assert len(center) == 2


def test_dihedral_rejects_small():
    with pytest.raises(InvalidParameterError):
        make_dihedral(2)


# -- axiom verification -----------------------------------------------------

@pytest.mark.parametrize("group", [make_cyclic(6), make_symmetric(3), make_dihedral(4)])
def test_constructors_pass_axioms(group):
    assert verify_group_axioms(group).ok


def test_corrupted_table_fails_associativity():
    g = make_cyclic(3)
    mul = g.mul.copy()
    mul[1, 1] = 1  # should be 2
    bad = g.__class__(3, mul, g.identity, g.inverses, g.generators,
                      g.element_labels, "corrupt")
    report = verify_group_axioms(bad)
    assert len(report.associativity_violations) >= 1


# -- identification ---------------------------------------------------------

def test_identify_bitflip_unitaries():
    g = group_from_unitaries([I2, X])
    assert identify_small_group(g) == "Z_2"


def test_identify_swap_unitaries():
    g = group_from_unitaries([np.eye(4, dtype=complex), swap_matrix()])
    assert identify_small_group(g) == "Z_2"


def test_identify_s3_not_z6():
    assert identify_small_group(make_symmetric(3)) == "S_3"
    assert identify_small_group(make_cyclic(6)) == "Z_6"


def test_identify_dihedral_names():
    assert identify_small_group(make_dihedral(3)) == "S_3"  # D_3 is S_3
    assert identify_small_group(make_dihedral(4)) == "D_4"
    assert identify_small_group(make_dihedral(6)) == "D_6"


def test_identify_klein_four():
    mats = [np.eye(4, dtype=complex), np.kron(X, I2), np.kron(I2, X), np.kron(X, X)]
    g = group_from_unitaries(mats)
    assert identify_small_group(g) == "Z_2xZ_2"


def test_identify_s4():
    assert identify_small_group(make_symmetric(4)) == "S_4"


def test_identify_relabeling_invariance():
    rng = np.random.default_rng(0)
    for base in (make_cyclic(6), make_dihedral(4), make_symmetric(3),
                 make_dihedral(6), make_cyclic(12)):
        want = identify_small_group(base)
        for _ in range(4):
            perm = rng.permutation(base.order)
            inv = np.argsort(perm)
            mul = perm[base.mul[np.ix_(inv, inv)]]
            relabeled = group_from_table(mul, name="relabeled")
            assert identify_small_group(relabeled) == want


def test_identify_unknown_for_quaternion():
    # Q_8 given by unitaries {+-1, +-iX, +-iY, +-iZ}
    mats = []
    for sign in (1, -1):
        mats.append(sign * np.eye(2, dtype=complex))
        for p in (X, Y, Z):
            mats.append(sign * 1j * p)
    g = group_from_unitaries(mats)
    assert identify_small_group(g) == "unknown"


# -- lie algebras -----------------------------------------------------------

def test_lie_closure_pauli_pair():
    alg = lie_closure([X, Y])
    assert alg.dim == 3


def test_lie_closure_single_generator():
    assert lie_closure([X]).dim == 1


def test_lie_closure_collective_pair_adds_z_direction():
    s1 = np.kron(X, I2) + np.kron(I2, X)
    s2 = np.kron(Y, I2) + np.kron(I2, Y)
    alg = lie_closure([s1, s2])
    assert alg.dim == 3
    s3 = np.kron(Z, I2) + np.kron(I2, Z)
    coeffs = [hs_inner(b, s3) for b in alg.generators]
    recon = sum(c * b for c, b in zip(coeffs, alg.generators))
    assert frob(recon - s3) < 1e-9


def test_lie_closure_orthonormal_and_idempotent():
    alg = lie_closure([X + 0.3 * Z, Y])
    gram = np.array([[hs_inner(a, b) for b in alg.generators] for a in alg.generators])
    assert frob(gram - np.eye(alg.dim)) < 1e-10
    again = lie_closure(alg.generators)
    assert again.dim == alg.dim
    # same span: projector distance on real vectorizations
    va = np.array([linalg.hvec(h) for h in alg.generators])
    vb = np.array([linalg.hvec(h) for h in again.generators])
    pa = va.T @ va
    pb = vb.T @ vb
    assert np.linalg.norm(pa - pb) < 1e-9


def test_lie_closure_residual_zero_after_closure():
    alg = lie_closure([X, Y])
    assert alg.closure_residual() < 1e-9


def test_lie_closure_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        lie_closure([1j * X])


def test_sample_lie_group_element_diagonal_for_z():
    from equirep.groups import LieAlgebraBasis
    alg = LieAlgebraBasis([Z.copy()])
    u = sample_lie_group_element(alg, rng_seed=5, depth=4)
    assert frob(u - np.diag(np.diag(u))) < 1e-12


def test_sample_lie_group_element_deterministic():
    alg = lie_closure([X, Y])
    u1 = sample_lie_group_element(alg, rng_seed=7, depth=3)
    u2 = sample_lie_group_element(alg, rng_seed=7, depth=3)
    assert np.array_equal(u1, u2)


def test_sample_lie_group_element_su2_determinant():
    alg = lie_closure([X, Y])
    for seed in range(5):
        u = sample_lie_group_element(alg, rng_seed=seed, depth=4)
        assert abs(np.linalg.det(u) - 1) < 1e-9
        assert frob(u.conj().T @ u - np.eye(2)) < 1e-10


# -- serialization ----------------------------------------------------------

@pytest.mark.parametrize("group", [make_cyclic(5), make_symmetric(3), make_dihedral(4)])
def test_group_spec_round_trip(group):
    spec = serialize.group_to_spec(group)
    back = serialize.group_from_spec(spec)
    assert np.array_equal(back.mul, group.mul)


def test_table_spec_round_trip_bit_exact():
    g = group_from_unitaries([I2, X])
    spec = serialize.group_to_spec(g)
    text = serialize.dumps_report(spec)
    import json
    back = serialize.group_from_spec(json.loads(text))
    assert np.array_equal(back.mul, g.mul)
    assert serialize.dumps_report(serialize.group_to_spec(back)) == text


def test_table_spec_verifies_axioms_on_load():
    from equirep.errors import ValidationError
    g = make_cyclic(3)
    spec = serialize.group_to_spec(make_dihedral(3))
    spec = {"kind": "table", "mul": [[int(x) for x in row] for row in g.mul]}
    spec["mul"][1][1] = 1  # corrupt one cell
    with pytest.raises(ValidationError):
        serialize.group_from_spec(spec)


def test_source_from_spec_dispatches_both_kinds():
    alg = lie_closure([X, Y])
    back = serialize.source_from_spec(serialize.lie_to_spec(alg))
    assert back.dim == 3
    g = serialize.source_from_spec({"kind": "cyclic", "n": 5})
    assert g.order == 5


def test_lie_spec_round_trip_bit_exact():
    alg = lie_closure([X + 0.12345678901234567 * Z, Y])
    spec = serialize.lie_to_spec(alg)
    text = serialize.dumps_report(spec)
    import json
    back = serialize.lie_from_spec(json.loads(text))
    for a, b in zip(alg.generators, back.generators):
        assert np.array_equal(a, b)
