"""Desk-scale symmetric classification tasks, training, and symmetry detection.

Each generated dataset carries the representation that leaves its labels
invariant and a label functional computed from symmetry-invariant quantities
of the state itself, so relabeling after any symmetry action reproduces the
labels exactly.  Models evaluate h(rho) = Tr[W rho^(x k) W^dag M] with an
equivariant circuit W and equivariant measurement M, followed by a trainable
affine readout thresholded at 0.5.

Training is deliberately minimal: full-batch gradient descent with central
finite-difference gradients (commutant generators have arbitrary spectra, so
the two-eigenvalue parameter-shift rule does not apply).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .equivariant import (
    EquivariantMeasurement,
    QnnCircuit,
    equivariant_generators,
)
from .errors import (
    DimensionMismatchError,
    InvalidParameterError,
    InvalidShellError,
    PrerequisiteFailedError,
)
from .linalg import DEFAULT_TOL, Tolerance
from .representations import (
    Representation,
    bitflip_rep,
    su2_fundamental,
    swap_matrix,
    swap_rep,
    tensor_power,
)

__all__ = [
    "LabeledState", "Dataset", "TaskSpec", "QmlModel", "TrainConfig",
    "gen_bitflip1d", "gen_purity", "gen_swap2d", "gen_ferro", "make_dataset",
    "model_eval", "default_task_model", "initialize_parameters", "train",
    "accuracy", "label_invariance_check",
    "SymmetryReport", "symmetry_test",
    "EigenspaceReport", "eigenspace_invariance_check",
    "pauli_on", "sum_pauli", "heisenberg_xxx",
    "ry", "plus_state", "bloch_state", "bloch_vector",
]

TASK_NAMES = ("bitflip1d", "purity", "swap2d", "ferro")


# ---------------------------------------------------------------------------
# states and small operators

def ry(theta: float) -> np.ndarray:
    """Rotation about the y axis, exp(-i theta Y / 2)."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def plus_state() -> np.ndarray:
    v = np.array([1, 1], dtype=complex) / np.sqrt(2)
    return np.outer(v, v.conj())


def bloch_state(r) -> np.ndarray:
    """Single-qubit density matrix (1 + r . sigma) / 2."""
    r = np.asarray(r, dtype=float)
    return (linalg.I2 + r[0] * linalg.X + r[1] * linalg.Y + r[2] * linalg.Z) / 2


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    return np.array([np.trace(rho @ p).real for p in (linalg.X, linalg.Y, linalg.Z)])


def pauli_on(p: np.ndarray, site: int, n: int) -> np.ndarray:
    """Single-site operator embedded in an n-qubit register."""
    ops = [linalg.I2] * n
    ops[site] = p
    return linalg.kron_all(*ops)


def sum_pauli(p: np.ndarray, n: int) -> np.ndarray:
    """Total-magnetization style operator sum_j p_j."""
    return sum(pauli_on(p, j, n) for j in range(n))


def heisenberg_xxx(n: int, periodic: bool = True, coupling: float = 1.0) -> np.ndarray:
    """Heisenberg chain sum_j (X_j X_j+1 + Y_j Y_j+1 + Z_j Z_j+1)."""
    if n < 2:
        raise InvalidParameterError("need at least two sites")
    bonds = [(j, j + 1) for j in range(n - 1)]
    if periodic and n > 2:
        bonds.append((n - 1, 0))
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for a, b in bonds:
        for p in (linalg.X, linalg.Y, linalg.Z):
            h += pauli_on(p, a, n) @ pauli_on(p, b, n)
    return coupling * h


# ---------------------------------------------------------------------------
# datasets

@dataclass
class LabeledState:
    rho: np.ndarray
    label: float
    meta: dict = field(default_factory=dict)


@dataclass
class Dataset:
    name: str
    states: list[LabeledState]
    rep: Representation                 # symmetry on the single-copy carrier
    params: dict = field(default_factory=dict)

    def rhos(self) -> list[np.ndarray]:
        return [s.rho for s in self.states]

    def labels(self) -> np.ndarray:
        return np.array([s.label for s in self.states])

    def relabel(self, rho: np.ndarray) -> float:
        """Recompute the label from the declared invariant functional."""
        return _LABEL_FUNCTIONALS[self.name](rho, self.params)


def _label_bitflip1d(rho, params):
    # |sin x| = |<Z>| is preserved by conjugation with X
    return 0.0 if abs(np.trace(rho @ linalg.Z).real) <= np.sin(np.pi / 4) else 1.0


def _label_purity(rho, params):
    return 0.0 if np.trace(rho @ rho).real >= 1 - 1e-9 else 1.0


def _label_swap2d(rho, params):
    zsum = np.kron(linalg.Z, linalg.I2) + np.kron(linalg.I2, linalg.Z)
    s = -np.trace(rho @ zsum).real  # sin x1 + sin x2
    return 0.0 if abs(s) <= params["s0"] else 1.0


def _label_ferro(rho, params):
    ra = bloch_vector(linalg.partial_trace(rho, [2, 2], keep=[0]))
    rb = bloch_vector(linalg.partial_trace(rho, [2, 2], keep=[1]))
    return 0.0 if float(ra @ rb) > 0 else 1.0


_LABEL_FUNCTIONALS = {
    "bitflip1d": _label_bitflip1d,
    "purity": _label_purity,
    "swap2d": _label_swap2d,
    "ferro": _label_ferro,
}


def gen_bitflip1d(n_samples: int, seed: int = 0) -> Dataset:
    """Single-qubit states R_Y(x)|+><+|R_Y(x)^dag with mirror-symmetric labels.

    Label 0 draws x from [-pi/4, pi/4], label 1 from the flanking intervals
    up to +-pi/2; x and -x always get equal labels, so conjugation by X
    (which maps the state of x to that of -x) leaves labels invariant.
    Classes are balanced.
    """
    if n_samples < 1:
        raise InvalidParameterError("need at least one sample")
    rng = np.random.default_rng(seed)
    states = []
    plus = plus_state()
    for i in range(n_samples):
        if i % 2 == 0:
            x = float(rng.uniform(-np.pi / 4, np.pi / 4))
            label = 0.0
        else:
            x = float(rng.uniform(np.pi / 4, np.pi / 2)) * (1 if rng.random() < 0.5 else -1)
            label = 1.0
        u = ry(x)
        states.append(LabeledState(u @ plus @ linalg.dagger(u), label, {"x": x}))
    return Dataset("bitflip1d", states, bitflip_rep(1))


def gen_purity(n_samples: int, seed: int = 0, mixed_shell=(0.2, 0.8)) -> Dataset:
    """Pure states on the Bloch sphere (label 0) vs mixed states in a shell.

    Purity is a spectral property, so any sampled unitary conjugation
    preserves both the label and Tr[rho^2].
    """
    lo, hi = float(mixed_shell[0]), float(mixed_shell[1])
    if not (0 <= lo < hi < 1):
        raise InvalidShellError(f"need 0 <= r_lo < r_hi < 1, got {mixed_shell}")
    if n_samples < 1:
        raise InvalidParameterError("need at least one sample")
    rng = np.random.default_rng(seed)
    states = []
    for i in range(n_samples):
        direction = rng.standard_normal(3)
        direction /= np.linalg.norm(direction)
        if i % 2 == 0:
            rho = bloch_state(direction)
            states.append(LabeledState(rho, 0.0, {"r": 1.0}))
        else:
            r = float(rng.uniform(lo, hi))
            states.append(LabeledState(bloch_state(r * direction), 1.0, {"r": r}))
    return Dataset("purity", states, su2_fundamental(),
                   params={"shell": (lo, hi)})


def gen_swap2d(n_samples: int, seed: int = 0, s0: float = 0.7) -> Dataset:
    """Two-qubit product encodings of (x1, x2) with swap-symmetric labels.

    Labels follow the symmetric functional s = sin(x1) + sin(x2): label 0
    iff |s| <= s0.  Points are drawn uniformly from [-pi/2, pi/2]^2 by
    per-class rejection, so classes are balanced and (x1, x2) <-> (x2, x1)
    always agree.
    """
    if n_samples < 1:
        raise InvalidParameterError("need at least one sample")
    rng = np.random.default_rng(seed)
    plus2 = np.kron(plus_state(), plus_state())
    states = []
    for i in range(n_samples):
        want = 0.0 if i % 2 == 0 else 1.0
        while True:
            x1, x2 = rng.uniform(-np.pi / 2, np.pi / 2, size=2)
            s = np.sin(x1) + np.sin(x2)
            label = 0.0 if abs(s) <= s0 else 1.0
            if label == want:
                break
        u = np.kron(ry(x1), ry(x2))
        states.append(LabeledState(u @ plus2 @ linalg.dagger(u), label,
                                   {"x": (float(x1), float(x2))}))
    return Dataset("swap2d", states, swap_rep(), params={"s0": s0})


def gen_ferro(n_samples: int, seed: int = 0, r_range=(0.2, 1.0)) -> Dataset:
    """Aligned vs anti-aligned two-qubit product states under U (x) U.

    Label 0: both reduced Bloch vectors equal; label 1: negated.  A common
    unitary rotation acts on both Bloch vectors by the same rotation and
    preserves their dot product, hence the labels.
    """
    lo, hi = float(r_range[0]), float(r_range[1])
    if not (0 < lo <= hi <= 1):
        raise InvalidParameterError("need 0 < r_lo <= r_hi <= 1")
    if n_samples < 1:
        raise InvalidParameterError("need at least one sample")
    rng = np.random.default_rng(seed)
    states = []
    for i in range(n_samples):
        direction = rng.standard_normal(3)
        direction /= np.linalg.norm(direction)
        r = float(rng.uniform(lo, hi)) * direction
        if i % 2 == 0:
            rho = np.kron(bloch_state(r), bloch_state(r))
            states.append(LabeledState(rho, 0.0, {"r": r.tolist()}))
        else:
            rho = np.kron(bloch_state(r), bloch_state(-r))
            states.append(LabeledState(rho, 1.0, {"r": r.tolist()}))
    return Dataset("ferro", states, tensor_power(su2_fundamental(), 2),
                   params={"r_range": (lo, hi)})


@dataclass
class TaskSpec:
    """Serializable description of one generated task."""

    name: str
    n_samples: int = 200
    params: dict = field(default_factory=dict)

    def build(self, seed: int = 0) -> Dataset:
        return make_dataset(self.name, self.n_samples, seed, **self.params)


def make_dataset(name: str, n_samples: int, seed: int = 0, **params) -> Dataset:
    if name == "bitflip1d":
        return gen_bitflip1d(n_samples, seed)
    if name == "purity":
        return gen_purity(n_samples, seed, **params)
    if name == "swap2d":
        return gen_swap2d(n_samples, seed, **params)
    if name == "ferro":
        return gen_ferro(n_samples, seed, **params)
    raise InvalidParameterError(f"unknown task {name!r}; choose from {TASK_NAMES}")


# ---------------------------------------------------------------------------
# models

@dataclass
class QmlModel:
    """k-copy equivariant model with affine readout thresholded at 0.5."""

    copies: int
    circuit: QnnCircuit
    measurement: EquivariantMeasurement
    readout: tuple[float, float] = (1.0, 0.0)   # (scale, offset)
    threshold: float = 0.5

    def lifted_input(self, rho: np.ndarray) -> np.ndarray:
        out = rho
        for _ in range(self.copies - 1):
            out = np.kron(out, rho)
        return out

    def score(self, rho: np.ndarray) -> float:
        a, b = self.readout
        return a * model_eval(self, rho) + b

    def predict(self, rho: np.ndarray) -> float:
        return 1.0 if self.score(rho) > self.threshold else 0.0


def model_eval(model: QmlModel, rho: np.ndarray) -> float:
    """Raw model output Tr[W rho^(x k) W^dag M]; real for Hermitian M."""
    rho = np.asarray(rho, dtype=complex)
    lifted = model.lifted_input(rho)
    w = model.circuit.unitary()
    if lifted.shape != w.shape:
        raise DimensionMismatchError(
            f"lifted state {lifted.shape} vs circuit dim {w.shape}")
    val = np.trace(w @ lifted @ linalg.dagger(w) @ model.measurement.m)
    return float(val.real)


def default_task_model(dataset: Dataset, copies: int = 1, n_layer_passes: int = 1,
                       tol: Tolerance = DEFAULT_TOL) -> QmlModel:
    """Equivariant model for a task: commutant circuit + a task-adapted M.

    The measurement picks the informative invariant for each task (e.g. the
    antisymmetric projector for purity at k = 2); the circuit uses every
    traceless commutant generator, repeated ``n_layer_passes`` times.
    """
    rep_k = tensor_power(dataset.rep, copies)
    gens = equivariant_generators(rep_k, tol)
    layout = []
    for _ in range(n_layer_passes):
        layout += [(i, 0.0) for i in range(1, gens.dim)]
    circuit = QnnCircuit(gens, layout)

    name = dataset.name
    dim = rep_k.dim
    if name == "purity" and copies >= 2:
        m = (np.eye(4, dtype=complex) - swap_matrix()) / 2  # antisymmetric projector
        if copies > 2:
            m = gens.project(np.kron(m, np.eye(dim // 4)))
    elif name == "bitflip1d" and copies == 1:
        m = linalg.X.copy()
    elif name == "swap2d" and copies == 1:
        m = np.kron(linalg.Z, linalg.I2) + np.kron(linalg.I2, linalg.Z)
    elif name == "ferro" and copies == 1:
        m = swap_matrix()
    else:
        # fall back to a projected random Hermitian probe
        rng = np.random.default_rng(11)
        m = gens.project(linalg.random_hermitian(dim, rng))
    measurement = EquivariantMeasurement(m, np.array([]), gens.generators)
    return QmlModel(copies, circuit, measurement)


# ---------------------------------------------------------------------------
# training

@dataclass
class TrainConfig:
    learning_rate: float = 0.2
    epochs: int = 200
    batch: int = 0            # retained for interface; training is full-batch
    seed: int = 0
    gradient_step: float = 1e-4
    loss: str = "mse"

    def __post_init__(self):
        if not (self.learning_rate > 0 and np.isfinite(self.learning_rate)):
            raise InvalidParameterError("learning_rate must be positive and finite")
        if self.epochs < 0:
            raise InvalidParameterError("epochs must be >= 0")
        if not (self.gradient_step > 0 and np.isfinite(self.gradient_step)):
            raise InvalidParameterError("gradient_step must be positive and finite")
        if self.loss not in ("mse", "bce"):
            raise InvalidParameterError("loss must be 'mse' or 'bce'")


def initialize_parameters(model: QmlModel, seed: int) -> QmlModel:
    """Fresh circuit angles uniform in [-pi, pi] and identity readout."""
    rng = np.random.default_rng(seed)
    thetas = rng.uniform(-np.pi, np.pi, size=len(model.circuit.layers))
    return QmlModel(model.copies, model.circuit.with_parameters(thetas),
                    model.measurement, (1.0, 0.0), model.threshold)


def _scores(circuit: QnnCircuit, thetas, lifted, m, a, b):
    w = circuit.with_parameters(thetas).unitary()
    meff = linalg.dagger(w) @ m @ w
    raws = np.einsum("ij,nji->n", meff, lifted).real
    return a * raws + b


def _loss_value(scores, labels, kind):
    if kind == "mse":
        return float(np.mean((scores - labels) ** 2))
    p = np.clip(scores, 1e-9, 1 - 1e-9)
    return float(-np.mean(labels * np.log(p) + (1 - labels) * np.log(1 - p)))


def train(model: QmlModel, dataset: Dataset, cfg: TrainConfig):
    """Full-batch gradient descent with central finite-difference gradients.

    Returns (trained model, trace) where trace rows are
    (epoch, loss, train_accuracy); epoch 0 is the pre-update state.  The loss
    trace is not guaranteed monotone.  Zero epochs return the model unchanged.
    """
    lifted = np.stack([model.lifted_input(s.rho) for s in dataset.states])
    labels = dataset.labels()
    m = model.measurement.m
    n_theta = len(model.circuit.layers)
    params = np.concatenate([model.circuit.parameters, np.array(model.readout)])

    def loss_at(p):
        scores = _scores(model.circuit, p[:n_theta], lifted, m, p[-2], p[-1])
        return _loss_value(scores, labels, cfg.loss)

    def acc_at(p):
        scores = _scores(model.circuit, p[:n_theta], lifted, m, p[-2], p[-1])
        preds = (scores > model.threshold).astype(float)
        return float(np.mean(preds == labels))

    trace = [(0, loss_at(params), acc_at(params))]
    h = cfg.gradient_step
    for epoch in range(1, cfg.epochs + 1):
        grad = np.zeros_like(params)
        for i in range(params.size):
            bump = np.zeros_like(params)
            bump[i] = h
            grad[i] = (loss_at(params + bump) - loss_at(params - bump)) / (2 * h)
        params = params - cfg.learning_rate * grad
        trace.append((epoch, loss_at(params), acc_at(params)))

    trained = QmlModel(model.copies,
                       model.circuit.with_parameters(params[:n_theta]),
                       model.measurement,
                       (float(params[-2]), float(params[-1])),
                       model.threshold)
    return trained, trace


def output_gradient_fd(model: QmlModel, rho: np.ndarray, h: float = 1e-4) -> np.ndarray:
    """Central finite differences of the raw output in the circuit angles.

    This is the same differentiation route the trainer uses, exposed so it
    can be validated against closed-form directional derivatives.
    """
    thetas = model.circuit.parameters
    grad = np.zeros_like(thetas)
    for i in range(thetas.size):
        bump = np.zeros_like(thetas)
        bump[i] = h
        up = QmlModel(model.copies, model.circuit.with_parameters(thetas + bump),
                      model.measurement, model.readout)
        dn = QmlModel(model.copies, model.circuit.with_parameters(thetas - bump),
                      model.measurement, model.readout)
        grad[i] = (model_eval(up, rho) - model_eval(dn, rho)) / (2 * h)
    return grad


def accuracy(model: QmlModel, dataset: Dataset) -> float:
    preds = np.array([model.predict(s.rho) for s in dataset.states])
    return float(np.mean(preds == dataset.labels()))


def label_invariance_check(model_or_fn, rep: Representation, dataset: Dataset,
                           n_samples: int = 10, tol: Tolerance = DEFAULT_TOL,
                           rng_seed: int = 0) -> float:
    """Max |h(rho) - h(g rho g^dag)| over the dataset and sampled symmetries.

    ``rep`` acts on the single-copy carrier; models lift it to their copy
    count internally through the tensor structure of the input.
    """
    if isinstance(model_or_fn, QmlModel):
        fn = lambda rho: model_eval(model_or_fn, rho)  # noqa: E731
    else:
        fn = model_or_fn
    samples = rep.sample_elements(rng_seed, n_samples)
    if rep.flavor == "finite" and rep.group.order <= 16:
        samples = rep.representatives()
    dev = 0.0
    for s in dataset.states:
        if s.rho.shape != (rep.dim, rep.dim):
            raise DimensionMismatchError("representation does not act on the states")
        base = fn(s.rho)
        for u in samples:
            dev = max(dev, abs(fn(u @ s.rho @ linalg.dagger(u)) - base))
    return dev


# ---------------------------------------------------------------------------
# symmetry detection

@dataclass
class SymmetryReport:
    max_residual: float
    commutes: bool


def symmetry_test(h: np.ndarray, rep: Representation,
                  tol: Tolerance = DEFAULT_TOL) -> SymmetryReport:
    """Does the Hermitian operator commute with the whole representation?

    Checked on generators (finite) or algebra images (lie), which suffices by
    the homomorphism property / connectedness.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (rep.dim, rep.dim):
        raise DimensionMismatchError(
            f"operator shape {h.shape} does not match carrier dim {rep.dim}")
    res = 0.0
    for k in rep.generator_representatives():
        res = max(res, linalg.frob(linalg.comm(h, k)))
    scale = max(linalg.frob(h), 1.0)
    return SymmetryReport(res, res <= max(tol.threshold(scale), 1e-10 * scale))


@dataclass
class EigenspaceReport:
    eigenvalues: list[float]
    projector_residual: float
    invariant: bool
    eigenvectors_all_fixed: bool
    fixed_fraction: float


def eigenspace_invariance_check(h: np.ndarray, rep: Representation,
                                tol: Tolerance = DEFAULT_TOL,
                                rng_seed: int = 0,
                                n_samples: int = 10) -> EigenspaceReport:
    """Verify that symmetry actions preserve eigenspaces of a symmetric H.

    Each eigenprojector must satisfy R(g) P R(g)^dag = P; individual
    eigenvectors need not be fixed (degenerate eigenspaces may be permuted
    internally), and the report says whether they all are.
    """
    report = symmetry_test(h, rep, tol)
    if not report.commutes:
        raise PrerequisiteFailedError(
            f"operator does not commute with the representation "
            f"(residual {report.max_residual:.3e})")
    w, v = linalg.herm_eig(h, Tolerance(1e-8, 1e-8))
    spread = max(w[-1] - w[0], 1.0)
    groups = []
    current = [0]
    for i in range(1, len(w)):
        if w[i] - w[current[-1]] > 1e-8 * spread:
            groups.append(current)
            current = [i]
        else:
            current.append(i)
    groups.append(current)

    actions = rep.generator_representatives()
    if rep.flavor == "lie":
        actions = rep.sample_elements(rng_seed, n_samples)
    elif rep.group.order <= 64:
        actions = rep.representatives()

    res = 0.0
    fixed = 0
    total = 0
    for grp in groups:
        cols = v[:, grp]
        p = cols @ linalg.dagger(cols)
        for u in actions:
            if linalg.is_unitary(u, Tolerance(1e-8, 1e-8)):
                res = max(res, linalg.frob(u @ p @ linalg.dagger(u) - p))
            else:
                res = max(res, linalg.frob(linalg.comm(u, p)))
    for i in range(v.shape[1]):
        vec = v[:, i]
        ok = all(abs(abs(np.vdot(vec, u @ vec)) - np.linalg.norm(u @ vec)) < 1e-8
                 for u in actions if linalg.is_unitary(u, Tolerance(1e-8, 1e-8)))
        fixed += int(ok)
        total += 1
    return EigenspaceReport(
        eigenvalues=[float(np.mean(w[g])) for g in groups],
        projector_residual=res,
        invariant=res <= 1e-8 * max(1.0, spread),
        eigenvectors_all_fixed=(fixed == total),
        fixed_fraction=fixed / max(total, 1),
    )
