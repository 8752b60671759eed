"""Command-line interface: `lagtor <command> [flags]`, JSON on stdout.

Exit codes: 0 verdict computed (negative verdicts included), 1 input
error, 2 an enclosure is too wide (RefineNeeded), 3 internal failure or a
rejected path/certificate.
"""
from __future__ import annotations

import argparse
import sys

from . import __version__
from . import jsonio
from .ambient import descriptor_from_json, load_preset, shift_equiv
from .errors import (
    CapacityTooSmall,
    CheckFailure,
    GroupMismatch,
    HypothesisViolation,
    InputError,
    LagtorError,
    NonPositiveResult,
    NotEquivalent,
    RefineNeeded,
    StateSpaceCap,
)
from .exactnum import TRIVIAL_BASIS, SymBasis, vector
from .invariants import (
    InvariantSet,
    TorusSpec,
    clifford_lift,
    displacement_energy,
    equiv,
    obstruct_ball,
    torus_invariants,
)
from .pathengine import low_path
from .pathengine.certificate import certificate, check_certificate, check_path

EXIT_OK, EXIT_INPUT, EXIT_REFINE, EXIT_INTERNAL = 0, 1, 2, 3


class Inputs:
    """Vectors and scalars gathered from --json and inline flags."""

    def __init__(self, args):
        self.basis: SymBasis = TRIVIAL_BASIS
        self.values = {}
        self.manifold = None
        if getattr(args, "json", None):
            doc = jsonio.input_from_json(jsonio.load(args.json))
            self.basis = doc.pop("basis")
            self.manifold = doc.pop("manifold", None)
            self.values.update(doc)
        for key in ("a", "e", "d", "s"):
            text = getattr(args, key, None)
            if text is not None:
                self.values[key] = self._vec(key, text)
        for key in ("b", "c"):
            text = getattr(args, key, None)
            if text is not None:
                self.values[key] = self._vec(key, text)[0]

    def _vec(self, key, text):
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if not parts:
            raise InputError(f"--{key} needs at least one value")
        return vector(self.basis, parts)

    def need(self, key, what=None):
        if key not in self.values:
            raise InputError(f"missing --{key}" + (f" ({what})" if what else ""))
        return self.values[key]

    def get(self, key):
        return self.values.get(key)


def _scalar(x):
    return jsonio.symreal_to_json(x)


def _invariants_json(inv: InvariantSet) -> dict:
    return {
        "ua": _scalar(inv.ua),
        "m": inv.m,
        "total": _scalar(inv.total),
        "norm": _scalar(inv.norm),
        "gamma": jsonio.zmodule_to_json(inv.gamma),
        "stripped": jsonio.vector_to_json(inv.stripped),
        "text": {
            "ua": str(inv.ua),
            "total": str(inv.total),
            "norm": str(inv.norm),
            "gamma": repr(inv.gamma),
        },
    }


def _out(command, basis, body) -> dict:
    doc = {"format": jsonio.FORMAT, "command": command, "basis": jsonio.basis_to_json(basis)}
    doc.update(body)
    return doc


# ------------------------------------------------------------ commands


def cmd_invariants(args, inp: Inputs):
    t = TorusSpec(inp.need("a"), inp.get("b"))
    return _out("invariants", inp.basis, {"invariants": _invariants_json(torus_invariants(t))})


def cmd_equiv(args, inp: Inputs):
    t, t2 = TorusSpec(inp.need("a")), TorusSpec(inp.need("e", "second torus"))
    i, j = torus_invariants(t), torus_invariants(t2)
    return _out("equiv", inp.basis, {
        "equivalent": equiv(t, t2),
        "agree": {"ua": i.ua == j.ua, "m": i.m == j.m, "gamma": i.gamma == j.gamma},
        "invariants": [_invariants_json(i), _invariants_json(j)],
    })


def cmd_energy(args, inp: Inputs):
    t = TorusSpec(inp.need("a"), inp.need("b", "chart capacity"))
    s = inp.get("s")
    e = displacement_energy(t, s)
    return _out("energy", inp.basis, {"energy": _scalar(e), "text": str(e), "perturbed": s is not None})


def cmd_clifford(args, inp: Inputs):
    b = inp.need("b", "capacity of the projective space")
    lifted = clifford_lift(TorusSpec(inp.need("a")), b)
    body = {"lifted": jsonio.vector_to_json(lifted.a), "text": [str(x) for x in lifted.a]}
    if inp.get("e") is not None:
        other = clifford_lift(TorusSpec(inp.get("e")), b)
        body["lifted_e"] = jsonio.vector_to_json(other.a)
        body["equivalent"] = equiv(lifted, other)
    return _out("clifford", inp.basis, body)


def cmd_obstruct(args, inp: Inputs):
    t, t2 = TorusSpec(inp.need("a")), TorusSpec(inp.need("e", "second torus"))
    b = inp.need("b", "ball capacity")
    v = obstruct_ball(t, t2, b)
    i, j = torus_invariants(t), torus_invariants(t2)
    return _out("obstruct", inp.basis, {
        "verdict": v.value,
        "ball": _scalar(b),
        "max_norm": _scalar(max(i.norm, j.norm)),
        "totals": [_scalar(i.total), _scalar(j.total)],
    })


def _start(inp: Inputs):
    if "d" in inp.values:
        return inp.values["d"]
    return inp.need("a", "start vector (--d or --a)")


def cmd_path(args, inp: Inputs):
    p = low_path(_start(inp), inp.need("e", "end vector"))
    doc = jsonio.path_to_json(p)
    doc["command"] = "path"
    doc["length"] = len(p)
    return doc


def cmd_certificate(args, inp: Inputs):
    cert = certificate(TorusSpec(inp.need("a")), TorusSpec(inp.need("e", "second torus")))
    doc = jsonio.certificate_to_json(cert)
    doc["command"] = "certificate"
    return doc


def cmd_check(args, inp: Inputs):
    doc = jsonio.load(args.file)
    kind = doc.get("type") if isinstance(doc, dict) else None
    if kind == "path":
        start, moves, end = jsonio.path_from_json(doc)
        states = check_path(start, moves, end)
        body = {"valid": True, "type": "path", "states": len(states)}
        basis = start[0].basis
    elif kind == "certificate":
        cert = jsonio.certificate_from_json(doc)
        overall = check_certificate(cert)
        body = {"valid": True, "type": "certificate", "steps": len(cert.steps), "overall_ball": _scalar(overall)}
        basis = cert.start[0].basis
    else:
        raise InputError('document "type" must be "path" or "certificate"')
    return _out("check", basis, body)


def cmd_shift(args, inp: Inputs):
    if args.preset:
        m = load_preset(args.preset, inp.basis)
    elif inp.manifold is not None:
        m = descriptor_from_json(inp.manifold, inp.basis)
    else:
        raise InputError("shift needs --preset or a manifold in --json")
    r = shift_equiv(m, inp.need("c"), inp.need("d"), inp.need("e"))
    return _out("shift", m.basis, {
        "verdict": r.verdict.value,
        "special": r.special,
        "group": jsonio.zmodule_to_json(r.group),
        "indeterminate": r.indeterminate,
        "threshold": "exists, not computed",
        "diagnostics": list(r.diagnostics),
    })


def cmd_oracle(args, inp: Inputs):
    from .oracle import NOT_FOUND, as_ints, bfs_low_path

    d, e = as_ints(_start(inp)), as_ints(inp.need("e", "end vector"))
    p = bfs_low_path(d, e, node_cap=args.node_cap)
    found = p is not NOT_FOUND
    body = {"found": found}
    if found:
        body["path"] = jsonio.path_to_json(p)
        body["length"] = len(p)
    return _out("oracle", TRIVIAL_BASIS, body)


def cmd_verify(args, inp: Inputs):
    from .numlab import run_checks

    records = run_checks(seed=args.seed)
    return {"format": jsonio.FORMAT, "command": "verify", "seed": args.seed,
            "all_pass": all(r["pass"] for r in records), "checks": records}


COMMANDS = {
    "invariants": (cmd_invariants, "invariants ua, m, |a|, ‖a‖, Γ of a product torus"),
    "equiv": (cmd_equiv, "decide a ≃ e"),
    "energy": (cmd_energy, "displacement energy (needs --b; optional perturbation --s)"),
    "clifford": (cmd_clifford, "lift to the Clifford torus in CP^n(b)"),
    "obstruct": (cmd_obstruct, "ball-size obstruction verdict for tori a, e in B(b)"),
    "path": (cmd_path, "verified low admissible path from --d to --e"),
    "certificate": (cmd_certificate, "isotopy certificate from T(a) to T(e)"),
    "check": (cmd_check, "re-validate a path or certificate JSON file"),
    "shift": (cmd_shift, "shift-equivalence test for small a on a manifold"),
    "oracle": (cmd_oracle, "brute-force low path search on integer vectors"),
    "verify": (cmd_verify, "numeric checks of the explicit maps and area bounds"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="FILE", help="input document (format lagtor/1)")
    common.add_argument("--out", metavar="FILE", help="write the JSON result here instead of stdout")
    for key, what in (("a", "torus areas / start vector"), ("e", "second torus / end vector"),
                      ("d", "vector d"), ("s", "perturbation vector"),
                      ("b", "capacity or ball size"), ("c", "lower bound c")):
        common.add_argument(f"--{key}", metavar="V", help=f"{what}, comma separated rationals")
    parser = argparse.ArgumentParser(prog="lagtor", description="Product tori: invariants, paths, certificates.")
    parser.add_argument("--version", action="version", version=f"lagtor {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, helptext) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=helptext)
        if name == "check":
            p.add_argument("file", help="path or certificate JSON")
        if name == "shift":
            p.add_argument("--preset", help="preset manifold, e.g. s2xs2:3,4 or aspherical")
        if name == "oracle":
            p.add_argument("--node-cap", type=int, default=10_000_000, help="maximum number of explored states")
        if name == "verify":
            p.add_argument("--seed", type=int, default=0, help="random seed")
    return parser


def _emit(doc, out):
    text = jsonio.dumps(doc)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(kind, message, code, **extra):
    doc = {"format": jsonio.FORMAT, "error": kind, "message": message}
    doc.update(extra)
    _emit(doc, None)
    print(f"lagtor: {kind}: {message}", file=sys.stderr)
    return code


INPUT_ERRORS = (InputError, CapacityTooSmall, GroupMismatch, NotEquivalent, HypothesisViolation,
                NonPositiveResult)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    func = COMMANDS[args.command][0]
    try:
        inp = Inputs(args)
        doc = func(args, inp)
    except CheckFailure as exc:
        return _error("CheckFailure", str(exc), EXIT_INTERNAL, failure=exc.kind, step=exc.step)
    except RefineNeeded as exc:
        return _error("RefineNeeded", str(exc), EXIT_REFINE,
                      difference=str(exc.difference))
    except jsonio.SchemaError as exc:
        return _error("SchemaError", str(exc), EXIT_INPUT, pointer=exc.pointer)
    except INPUT_ERRORS as exc:
        return _error(type(exc).__name__, str(exc), EXIT_INPUT)
    except OSError as exc:
        return _error("IOError", str(exc), EXIT_INPUT)
    except StateSpaceCap as exc:
        return _error("StateSpaceCap", str(exc), EXIT_INTERNAL)
    except (LagtorError, AssertionError) as exc:
        return _error(type(exc).__name__, str(exc), EXIT_INTERNAL)
    _emit(doc, args.out)
    if args.command == "verify" and not doc["all_pass"]:
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
