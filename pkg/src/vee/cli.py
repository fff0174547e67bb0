"""The ``vee`` command line.

Every command prints one JSON report on stdout::

    {"command": ..., "input_digest": ..., "verdict": "pass"|"fail"|"error",
     "claim": ..., "payload": {...}}

Exit status: 0 when the verdict is ``pass``, 1 for ``fail`` (a computed
negative answer, always with a ``counterexample`` in the payload), 2 for
malformed input or parameters.  Output is byte-stable: keys are sorted and
all rationals are written as strings.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from .algebra import DimensionError, PolyVectorField, RatMatrix, format_rational
from .arrangements import (
    delete_hyperplane,
    factorization_check,
    integer_factors,
    intersection_lattice,
    poincare_polynomial,
    restrict_arrangement,
    saito_criterion,
)
from .corpus import EXPECTATIONS, CorpusError, format_table, run_corpus
from .families import FAMILIES, FamilyError, instantiate, parse_params
from .flatsections import (
    epd_check,
    flat_solve,
    harmonic_test,
    quasi_invariant_dim,
    section_properties,
)
from .potentials import (
    PotentialError,
    PotentialSet,
    dihedral_b2_potentials,
    f4_potentials,
    potential_an,
    potential_bn,
    reduce_to_subspace_an,
    zaslavsky_potential,
)
from .veesys import (
    CovectorSystem,
    DegenerateForm,
    InvalidSystem,
    canonical_form,
    holonomy_check,
    irreducible_components,
    load_system,
    vee_check,
    vee_dual,
    vee_duals,
    well_distributed_check,
)

# What each command certifies.  The README carries the same strings.
CLAIMS = {
    "check": "the covectors satisfy the plane-wise vee-conditions",
    "canonical": "canonical form G = sum of w v v^T",
    "dual": "vee-duals are G^{-1} v",
    "holonomy": "the vee-connection is flat iff the holonomy relations hold",
    "components": "splitting into components with complementary spans",
    "flat": "flat sections of degree kappa exist and are gradients of quasi-invariant potentials",
    "harmonic": "the flat sections contain a basis with Jacobian equal to the defining polynomial",
    "quasi": "dimension of homogeneous quasi-invariants of a given degree",
    "potentials": "the closed-form potentials satisfy the flatness equations",
    "arr lattice": "intersection lattice with its Moebius function",
    "arr poincare": "Poincare polynomial from the Moebius function",
    "arr factor": "the Poincare polynomial splits into linear factors over the integers",
    "arr restrict": "restriction of the arrangement to a hyperplane",
    "arr delete": "deletion of a hyperplane",
    "arr saito": "Saito's criterion certifies freeness with the given fields",
    "family": "family instantiation with rational parameters",
    "corpus": "every recorded invariant of the bundled corpus is reproduced",
}


class InputError(Exception):
    """Bad file, bad parameters, or a request outside a valid range."""


# ---------------------------------------------------------------------------
# plumbing


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _digest(command: str, args: dict, inputs) -> str:
    blob = json.dumps({"command": command, "args": args, "inputs": inputs},
                      sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(blob.encode()).hexdigest()


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from None


def _read_system(path: str) -> CovectorSystem:
    data = _read_json(path)
    # accept the output of `vee arr restrict` and friends directly
    if isinstance(data, dict) and "payload" in data and "command" in data:
        data = data["payload"].get("system", data["payload"])
    return load_system(data)


class _Result:
    def __init__(self, payload: dict, passed: bool = True, counterexample=None):
        self.payload = payload
        self.passed = passed
        if not passed:
            self.payload = dict(payload, counterexample=counterexample)


# ---------------------------------------------------------------------------
# system commands


def _cmd_check(sys_, args):
    try:
        report = vee_check(sys_)
    except DegenerateForm:
        wd = well_distributed_check(sys_, RatMatrix.identity(sys_.dimension))
        return _Result({"degenerate": True, "well_distributed": wd.to_json()}, False,
                       {"reason": "canonical form is degenerate",
                        "mu": None if wd.mu is None else format_rational(wd.mu)})
    payload = report.to_json()
    if report.is_vee_system:
        return _Result(payload)
    bad = next(p for p in report.planes if not p.passed)
    return _Result(payload, False, {"failing_plane": bad.to_json()})


def _cmd_canonical(sys_, args):
    g = canonical_form(sys_)
    wd = well_distributed_check(sys_, RatMatrix.identity(sys_.dimension))
    return _Result({"canonical_form": g.to_json(), "euclidean": wd.to_json()})


def _cmd_dual(sys_, args):
    try:
        if args.index is not None:
            if not 0 <= args.index < len(sys_):
                raise InputError(f"index {args.index} out of range 0..{len(sys_) - 1}")
            duals = {str(args.index): vee_dual(sys_, args.index)}
        else:
            duals = {str(i): d for i, d in enumerate(vee_duals(sys_))}
    except DegenerateForm:
        return _Result({}, False, {"reason": "canonical form is degenerate"})
    return _Result({"duals": {k: [format_rational(x) for x in v] for k, v in duals.items()}})


def _cmd_holonomy(sys_, args):
    try:
        rep = holonomy_check(sys_)
    except DegenerateForm:
        return _Result({}, False, {"reason": "canonical form is degenerate"})
    if rep.passes:
        return _Result(rep.to_json())
    return _Result(rep.to_json(), False, {"failing_plane": list(rep.failing_planes[0])})


def _cmd_components(sys_, args):
    comps = irreducible_components(sys_)
    return _Result({"count": len(comps), "components": [c.to_json() for c in comps]})


def _cmd_flat(sys_, args):
    if args.kappa < 1:
        raise InputError("kappa must be a positive integer")
    basis = flat_solve(sys_, args.kappa)
    payload = basis.to_json()
    if args.check_sections:
        props = [section_properties(sys_, s) for s in basis.sections]
        payload["properties"] = [p.to_json() for p in props]
        for k, p in enumerate(props):
            if not (p.is_gradient and p.is_logarithmic and p.degree == args.kappa):
                return _Result(payload, False, {"section": k, "properties": p.to_json()})
    if not len(basis):
        return _Result(payload, False, {"kappa": args.kappa, "dimension": 0})
    return _Result(payload)


def _cmd_harmonic(sys_, args):
    res = harmonic_test(sys_)
    payload = res.to_json()
    if res.is_harmonic:
        return _Result(payload)
    cert = res.certificate
    return _Result(payload, False, {
        "quasi_invariant_dims": cert["quasi_invariant_dims"],
        "solution_dims": cert["solution_dims"],
        "candidates_tried": len(cert["candidates_tried"]),
    })


def _cmd_quasi(sys_, args):
    if args.degree < 0:
        raise InputError("degree must be nonnegative")
    return _Result(quasi_invariant_dim(sys_, args.degree).to_json())


# ---------------------------------------------------------------------------
# arrangement commands


def _cmd_arr(sys_, args):
    sub = args.arr_command
    if sub == "lattice":
        lat = intersection_lattice(sys_)
        return _Result({"size": len(lat), "lattice": lat.to_json()})
    if sub == "poincare":
        p = poincare_polynomial(sys_)
        return _Result({"poincare": [int(p.coefficient((k,))) for k in range(p.degree() + 1)]})
    if sub == "factor":
        p = poincare_polynomial(sys_)
        coeffs = [int(p.coefficient((k,))) for k in range(p.degree() + 1)]
        exps = factorization_check(p, sys_.dimension)
        payload = {"poincare": coeffs, "exponents": exps}
        if exps is None:
            peeled, rest = integer_factors(p)
            return _Result(payload, False, {"integer_roots_found": peeled,
                                            "unsplit_factor": rest})
        return _Result(payload)
    if sub in ("restrict", "delete"):
        if not 0 <= args.hyperplane < len(sys_):
            raise InputError(f"hyperplane {args.hyperplane} out of range 0..{len(sys_) - 1}")
        op = restrict_arrangement if sub == "restrict" else delete_hyperplane
        return _Result({"system": op(sys_, args.hyperplane).to_json()})
    if sub == "saito":
        raw = _read_json(args.fields)
        if not isinstance(raw, list):
            raise InputError("fields file must hold a list of vector fields")
        try:
            fields = [PolyVectorField.from_json(f) for f in raw]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed fields file: {exc}") from None
        cert = saito_criterion(sys_, fields)
        if cert.valid:
            return _Result(cert.to_json())
        return _Result(cert.to_json(), False, {"reasons": cert.reasons})
    raise InputError(f"unknown arr subcommand {sub!r}")


# ---------------------------------------------------------------------------
# families and potentials


def _params(args) -> dict:
    try:
        return parse_params(args.params)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _require(params: dict, *names):
    missing = [n for n in names if n not in params]
    if missing:
        raise InputError(f"missing parameter(s): {', '.join(missing)}")
    return [params[n] for n in names]


def _as_list(value) -> list:
    return value if isinstance(value, list) else [value]


def _build_potentials(family: str, params: dict) -> tuple[PotentialSet, CovectorSystem]:
    if family == "an":
        (c,) = _require(params, "c")
        c = _as_list(c)
        sys_ = instantiate("an", c=c)
        n = len(c) - 1
        pots = [reduce_to_subspace_an(potential_an(c, k), c, k) for k in range(1, n + 1)]
        return PotentialSet("an", pots, list(range(1, n + 1))), sys_
    if family == "bn":
        (c,) = _require(params, "c")
        c = _as_list(c)
        sys_ = instantiate("bn", c=c)
        n = len(c) - 1
        pots = [potential_bn(c, k) for k in range(1, n + 1)]
        return PotentialSet("bn", pots, [2 * k - 1 for k in range(1, n + 1)]), sys_
    if family == "f4":
        (s,) = _require(params, "s")
        return f4_potentials(s), instantiate("f4", s=s)
    if family == "zaslavsky":
        n, m = _require(params, "n", "m")
        n, m = int(n), int(m)
        F = zaslavsky_potential(n, m)
        sys_ = instantiate("bn", c=[-1] + [1] * (n - m) + [2] * m)
        return PotentialSet("zaslavsky", [F], [n + m - 1]), sys_
    if family in ("dihedral_b2", "dihedral-b2"):
        a2, b2 = _require(params, "a2", "b2")
        return dihedral_b2_potentials(a2, b2), instantiate("dihedral_b2", a2=a2, b2=b2)
    raise InputError(f"no closed-form potentials for family {family!r}")


def _cmd_potentials(args):
    params = _params(args)
    pset, sys_ = _build_potentials(args.family, params)
    checks = [epd_check(sys_, F, k) for k, F in pset]
    payload = dict(pset.to_json(), system=sys_.to_json(),
                   verified=[{"kappa": k, "passes": ok} for (k, _), ok in zip(pset, checks)])
    if all(checks):
        return _Result(payload)
    bad = next(k for (k, _), ok in zip(pset, checks) if not ok)
    return _Result(payload, False, {"kappa": bad})


def _cmd_family(args):
    return instantiate(args.name, **_params(args))


def _cmd_corpus(args):
    rows = run_corpus(only=args.only, expectations=args.expectations)
    failed = [r for r in rows if not r["matches"]]
    payload = {"rows": rows, "entries": len(rows), "mismatched": [r["name"] for r in failed]}
    if failed:
        return _Result(payload, False, {r["name"]: r["mismatches"] for r in failed})
    return _Result(payload)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vee", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    for name, helptext in [("check", "verify the vee-conditions"),
                           ("canonical", "print the canonical form"),
                           ("holonomy", "check the holonomy relations"),
                           ("components", "split into irreducible components"),
                           ("harmonic", "search for a harmonic basis of flat sections")]:
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("file")

    sp = sub.add_parser("dual", help="vee-duals of the covectors")
    sp.add_argument("--index", type=int)
    sp.add_argument("file")

    sp = sub.add_parser("flat", help="flat polynomial sections of degree kappa")
    sp.add_argument("--kappa", type=int, required=True)
    sp.add_argument("--check-sections", action="store_true",
                    help="also verify each section is a logarithmic gradient field")
    sp.add_argument("file")

    sp = sub.add_parser("quasi", help="quasi-invariants of a given degree")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("file")

    sp = sub.add_parser("potentials", help="closed-form potentials of a family")
    sp.add_argument("family", choices=["an", "bn", "f4", "zaslavsky", "dihedral-b2"])
    sp.add_argument("--params", default="")

    sp = sub.add_parser("family", help="instantiate a named family as system JSON")
    sp.add_argument("name", choices=sorted(FAMILIES))
    sp.add_argument("--params", default="")

    sp = sub.add_parser("corpus", help="recompute the bundled corpus")
    sp.add_argument("--only")
    sp.add_argument("--expectations", help="alternative expectations file")
    sp.add_argument("--format", choices=["json", "table"], default="json")

    arr = sub.add_parser("arr", help="hyperplane arrangement operations")
    asub = arr.add_subparsers(dest="arr_command", metavar="SUBCOMMAND")
    asub.required = True
    for name in ("lattice", "poincare", "factor"):
        asub.add_parser(name).add_argument("file")
    for name in ("restrict", "delete"):
        sp = asub.add_parser(name)
        sp.add_argument("--hyperplane", type=int, required=True)
        sp.add_argument("file")
    sp = asub.add_parser("saito")
    sp.add_argument("--fields", required=True)
    sp.add_argument("file")
    return p


_SYSTEM_COMMANDS = {
    "check": _cmd_check, "canonical": _cmd_canonical, "dual": _cmd_dual,
    "holonomy": _cmd_holonomy, "components": _cmd_components, "flat": _cmd_flat,
    "harmonic": _cmd_harmonic, "quasi": _cmd_quasi, "arr": _cmd_arr,
}

_INPUT_ERRORS = (InputError, InvalidSystem, FamilyError, PotentialError, CorpusError,
                 DimensionError, ValueError, OSError)


def _arg_record(args) -> dict:
    skip = {"command", "file"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command
    if command == "arr":
        command = f"arr {args.arr_command}"
    report = {"command": command, "claim": CLAIMS[command]}
    try:
        if command == "family":
            sys_ = _cmd_family(args)
            # the bare system JSON, so it can be redirected straight to a file
            print(_dumps(sys_.to_json()))
            return 0
        if args.command in _SYSTEM_COMMANDS:
            sys_ = _read_system(args.file)
            inputs = sys_.to_json()
            if command == "arr saito":
                inputs = [inputs, _read_json(args.fields)]
            result = _SYSTEM_COMMANDS[args.command](sys_, args)
        elif command == "potentials":
            inputs = None
            result = _cmd_potentials(args)
        else:
            result = _cmd_corpus(args)
            inputs = _read_json(args.expectations or EXPECTATIONS)
            if args.format == "table":
                print(format_table(result.payload["rows"]))
                return 0 if result.passed else 1
    except _INPUT_ERRORS as exc:
        report.update(input_digest=_digest(command, _arg_record(args), None),
                      verdict="error", payload={"error": str(exc)})
        print(_dumps(report))
        print(f"vee {command}: {exc}", file=sys.stderr)
        return 2
    report.update(input_digest=_digest(command, _arg_record(args), inputs),
                  verdict="pass" if result.passed else "fail", payload=result.payload)
    print(_dumps(report))
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())
