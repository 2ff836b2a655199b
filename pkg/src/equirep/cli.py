"""Command-line entry point: construct, verify, decompose, twirl, train, test.

Every report is deterministic JSON (17-significant-digit floats) carrying the
toolkit version, the seed, and the tolerances in effect.  Exit codes: 0 on
success, 1 on validation or usage errors, 2 on numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, decompose, serialize, tasks
from .equivariant import GENERATOR_PRESETS, equivariant_generators
from .errors import InvalidParameterError, NumericalError, ToolkitError, ValidationError
from .groups import identify_small_group, make_cyclic, make_dihedral, make_symmetric, \
    verify_group_axioms
from .linalg import Tolerance
from .representations import (
    bitflip_rep,
    dihedral_rep_s3,
    left_regular_rep,
    perm_rep_qubits,
    su2_fundamental,
    swap_rep,
    tensor_power,
    translation_rep,
    trivial_rep,
    verify_homomorphism,
)
from .serialize import dumps_report
from .tasks import TrainConfig, symmetry_test
from .twirl import twirl_context, twirl_operator

REP_KINDS = ("trivial", "perm-qubits", "bitflip", "swap", "dihedral-s3",
             "su2-fundamental", "su2-tensor", "left-regular", "translation")


class _CliParser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _header(args, command: str) -> dict:
    return {
        "toolkit": "equirep",
        "version": __version__,
        "command": command,
        "seed": args.seed,
        "tolerances": {"absolute": args.tol_abs, "relative": args.tol_rel},
    }


def _emit(report: dict, out_path: str | None):
    text = dumps_report(report)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _vlog(args, message: str):
    # progress notes go to stderr so stdout stays byte-deterministic
    if getattr(args, "verbose", False):
        print(f"equirep: {message}", file=sys.stderr)


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ValidationError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {path}: {exc}") from exc


def _make_group(args):
    if args.kind == "cyclic":
        return make_cyclic(args.n)
    if args.kind == "symmetric":
        return make_symmetric(args.n)
    if args.kind == "dihedral":
        return make_dihedral(args.n)
    raise ValidationError(f"unknown group kind {args.kind!r}")


def _make_rep(args, tol):
    kind = args.kind
    if kind == "trivial":
        return trivial_rep(make_cyclic(max(args.n, 1)), args.dim)
    if kind == "perm-qubits":
        return perm_rep_qubits(args.n)
    if kind == "bitflip":
        return bitflip_rep(args.n)
    if kind == "swap":
        return swap_rep()
    if kind == "dihedral-s3":
        return dihedral_rep_s3()
    if kind == "su2-fundamental":
        return su2_fundamental()
    if kind == "su2-tensor":
        return tensor_power(su2_fundamental(), max(args.k, 1))
    if kind == "left-regular":
        if args.group:
            return left_regular_rep(serialize.group_from_spec(_load_json(args.group)))
        return left_regular_rep(make_cyclic(args.n))
    if kind == "translation":
        return translation_rep(args.n)
    raise ValidationError(f"unknown representation kind {kind!r}")


def _cmd_group(args, tol):
    if args.action == "make":
        g = _make_group(args)
        spec = serialize.group_to_spec(g)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(dumps_report(spec))
        report = _header(args, "group make")
        report.update({"name": g.name, "order": g.order,
                       "written": args.out or ""})
        _emit(report, None)
        return 0
    g = serialize.group_from_spec(_load_json(args.infile))
    if args.action == "verify":
        axioms = verify_group_axioms(g)
        report = _header(args, "group verify")
        report.update({
            "order": g.order,
            "associativity_violations": [list(v) for v in axioms.associativity_violations],
            "identity_ok": axioms.identity_ok,
            "inverses_ok": axioms.inverses_ok,
            "ok": axioms.ok,
        })
        _emit(report, args.out)
        return 0
    if args.action == "identify":
        report = _header(args, "group identify")
        report.update({"order": g.order, "name": identify_small_group(g)})
        _emit(report, args.out)
        return 0
    raise ValidationError(f"unknown group action {args.action!r}")


def _cmd_rep(args, tol):
    if args.action == "make":
        rep = _make_rep(args, tol)
        spec = serialize.rep_to_spec(rep)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(dumps_report(spec))
        report = _header(args, "rep make")
        report.update({"name": rep.name, "dim": rep.dim, "flavor": rep.flavor,
                       "written": args.out or ""})
        _emit(report, None)
        return 0
    if args.action == "verify":
        rep = serialize.rep_from_spec(_load_json(args.infile), tol)
        report = _header(args, "rep verify")
        report.update({"name": rep.name, "dim": rep.dim, "flavor": rep.flavor,
                       "residual": verify_homomorphism(rep, tol), "ok": True})
        _emit(report, args.out)
        return 0
    raise ValidationError(f"unknown rep action {args.action!r}")


def _cmd_commutant(args, tol):
    rep = serialize.rep_from_spec(_load_json(args.rep), tol)
    comm = decompose.commutant_basis(rep, tol)
    report = _header(args, "commutant")
    report.update({
        "rep": rep.name,
        "dim": comm.dim,
        "basis": [serialize.mat_to_json(b) for b in comm.basis],
    })
    _emit(report, args.out)
    return 0


def _cmd_decompose(args, tol):
    rep = serialize.rep_from_spec(_load_json(args.rep), tol)
    _vlog(args, f"loaded {rep.name} (dim {rep.dim}, {rep.flavor})")
    dec = decompose.isotypic_decompose(rep, args.seed, tol)
    _vlog(args, f"blocks {dec.blocks}")
    residuals = decompose.decomposition_residuals(rep, dec, args.seed)
    report = _header(args, "decompose")
    report.update({
        "rep": rep.name,
        "blocks": [[d, m] for d, m in dec.blocks],
        "q": serialize.mat_to_json(dec.q),
        "residuals": residuals,
    })
    _emit(report, args.out)
    return 0


def _cmd_twirl(args, tol):
    rep = serialize.rep_from_spec(_load_json(args.rep), tol)
    op = serialize.operator_from_spec(_load_json(args.op))
    ctx = twirl_context(rep, args.mode, tol)
    twirled = twirl_operator(ctx, op)
    from . import linalg
    residual = max(
        (linalg.frob(linalg.comm(twirled, k)) for k in rep.generator_representatives()),
        default=0.0)
    report = _header(args, "twirl")
    report.update({
        "rep": rep.name,
        "mode": ctx.mode,
        "twirled": serialize.mat_to_json(twirled),
        "residuals": {"commutation": residual},
    })
    _emit(report, args.out)
    return 0


def _cmd_equivariant(args, tol):
    from . import linalg
    rep = serialize.rep_from_spec(_load_json(args.rep), tol)
    gens = equivariant_generators(rep, tol)
    residual = max(
        linalg.frob(linalg.comm(h, k))
        for h in gens.generators for k in rep.generator_representatives())
    report = _header(args, "equivariant")
    report.update({
        "rep": rep.name,
        "dim": gens.dim,
        "includes_identity": gens.includes_identity,
        "residuals": {"commutation": residual},
        "generators": [serialize.mat_to_json(g) for g in gens.generators],
    })
    if args.preset:
        maker = GENERATOR_PRESETS.get(args.preset)
        if maker is None:
            raise ValidationError(
                f"unknown preset {args.preset!r}; available: {sorted(GENERATOR_PRESETS)}")
        from . import linalg
        named = maker()
        resid = max(linalg.frob(gens.project(h) - h) for h in named)
        report["preset"] = {
            "name": args.preset,
            "count": len(named),
            "in_span": bool(resid < 1e-8),
            "projection_residual": resid,
        }
    _emit(report, args.out)
    return 0


def _cmd_task(args, tol):
    if args.action != "run":
        raise ValidationError(f"unknown task action {args.action!r}")
    ds = tasks.make_dataset(args.name, args.samples, args.seed)
    _vlog(args, f"generated {len(ds.states)} samples for {args.name}")
    if args.dump_data:
        with open(args.dump_data, "w") as fh:
            fh.write(dumps_report(serialize.dataset_to_spec(ds)))
    model = tasks.default_task_model(ds, copies=args.k, tol=tol)
    model = tasks.initialize_parameters(model, args.seed)
    cfg = TrainConfig(learning_rate=args.lr, epochs=args.epochs, seed=args.seed)
    trained, trace = tasks.train(model, ds, cfg)
    _vlog(args, f"trained {args.epochs} epochs, final loss {trace[-1][1]:.6f}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("epoch,loss,train_accuracy\n")
            for epoch, loss, acc in trace:
                fh.write(f"{epoch},{format(loss, '.17g')},{format(acc, '.17g')}\n")
    deviation = tasks.label_invariance_check(trained, ds.rep, ds, n_samples=20,
                                             rng_seed=args.seed)
    from . import linalg
    w = trained.circuit.unitary()
    rep_k = trained.circuit.gens.rep
    residual = max(
        (linalg.frob(linalg.comm(w, k)) for k in rep_k.generator_representatives()),
        default=0.0)
    report = _header(args, "task run")
    report.update({
        "task": args.name,
        "k": args.k,
        "samples": args.samples,
        "epochs": args.epochs,
        "final_loss": trace[-1][1],
        "accuracy": tasks.accuracy(trained, ds),
        "invariance_deviation": deviation,
        "residuals": {"circuit_equivariance": residual},
        "csv": args.out or "",
    })
    _emit(report, None)
    return 0


def _cmd_symtest(args, tol):
    h = serialize.operator_from_spec(_load_json(args.h))
    rep = serialize.rep_from_spec(_load_json(args.rep), tol)
    result = symmetry_test(h, rep, tol)
    report = _header(args, "symtest")
    report.update({
        "rep": rep.name,
        "max_residual": result.max_residual,
        "commutes": result.commutes,
    })
    _emit(report, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _CliParser(prog="equirep",
                   description="representation-theory toolkit for equivariant "
                               "quantum models")
    # global flags are accepted both before and after the subcommand; the
    # after-subcommand copies use SUPPRESS so they never clobber earlier values
    p.add_argument("--tol-abs", type=float, default=1e-10)
    p.add_argument("--tol-rel", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verbose", action="store_true", default=False)
    common = _CliParser(add_help=False)
    common.add_argument("--tol-abs", type=float, default=argparse.SUPPRESS)
    common.add_argument("--tol-rel", type=float, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_CliParser)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    g = add_parser("group", help="make/verify/identify finite groups")
    g.add_argument("action", choices=["make", "verify", "identify"])
    g.add_argument("--kind", choices=["cyclic", "symmetric", "dihedral"])
    g.add_argument("--n", type=int, default=2)
    g.add_argument("--in", dest="infile")
    g.add_argument("--out")

    r = add_parser("rep", help="make/verify representations")
    r.add_argument("action", choices=["make", "verify"])
    r.add_argument("--kind", choices=list(REP_KINDS))
    r.add_argument("--n", type=int, default=2)
    r.add_argument("--k", type=int, default=2)
    r.add_argument("--dim", type=int, default=2)
    r.add_argument("--group")
    r.add_argument("--in", dest="infile")
    r.add_argument("--out")

    c = add_parser("commutant", help="Hermitian basis of the commutant")
    c.add_argument("--rep", required=True)
    c.add_argument("--out")

    d = add_parser("decompose", help="isotypic block decomposition")
    d.add_argument("--rep", required=True)
    d.add_argument("--out")

    t = add_parser("twirl", help="project an operator onto the invariants")
    t.add_argument("--rep", required=True)
    t.add_argument("--op", required=True)
    t.add_argument("--mode", choices=["average", "projection"])
    t.add_argument("--out")

    e = add_parser("equivariant", help="equivariant generator basis")
    e.add_argument("--rep", required=True)
    e.add_argument("--preset")
    e.add_argument("--out")

    k = add_parser("task", help="run a classification task end to end")
    k.add_argument("action", choices=["run"])
    k.add_argument("--name", required=True, choices=list(tasks.TASK_NAMES))
    k.add_argument("--k", type=int, default=1)
    k.add_argument("--epochs", type=int, default=200)
    k.add_argument("--samples", type=int, default=200)
    k.add_argument("--lr", type=float, default=0.5)
    k.add_argument("--out")
    k.add_argument("--dump-data")

    s = add_parser("symtest", help="commutation test of a Hamiltonian")
    s.add_argument("--h", required=True)
    s.add_argument("--rep", required=True)
    s.add_argument("--out")
    return p


_DISPATCH = {
    "group": _cmd_group,
    "rep": _cmd_rep,
    "commutant": _cmd_commutant,
    "decompose": _cmd_decompose,
    "twirl": _cmd_twirl,
    "equivariant": _cmd_equivariant,
    "task": _cmd_task,
    "symtest": _cmd_symtest,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        tol = Tolerance(args.tol_abs, args.tol_rel)
        return _DISPATCH[args.cmd](args, tol)
    except (ValidationError, InvalidParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
