"""Command line interface.

Exit status: 0 when everything checked passes, 1 when discrepancies are
found (they are listed), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import batyrev
from .cases import CASES, LATTICE_VARIABLES, get_case
from .invertible import (ExponentMatrix, NotInvertibleError, decomposition_label,
                         enumerate_deformations, is_invertible, parse_polynomial, transpose,
                         weight_system)
from .picard import picard_model
from .polytope import LatticePolytope, lattice_from_case, parse_palp, polar_dual
from .runner import (DATABASE_ENV, _jsonable, build_lattice, emit_report, find_extensions,
                     lattice_filter, newton, run_case, scan_database)


class UsageError(Exception):
    pass


def _print_json(data) -> None:
    sys.stdout.write(json.dumps(_jsonable(data), sort_keys=True, indent=2) + "\n")


def _frac(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _read_polytopes(path: str) -> list[LatticePolytope]:
    with open(path) as fh:
        return parse_palp(fh.read())


def _uppercase(f: ExponentMatrix) -> ExponentMatrix:
    names = tuple(v.upper() for v in f.variables)
    if len(set(names)) != len(names):
        return f
    return ExponentMatrix(f.rows, names)


def _as_deformation(text: str) -> ExponentMatrix:
    """A four-variable polynomial with variables W, X, Y, Z (any case)."""
    F = _uppercase(parse_polynomial(text))
    if sorted(F.variables) != sorted(LATTICE_VARIABLES):
        raise UsageError("expected a polynomial in W, X, Y, Z")
    return F


def _case_for_f(f: ExponentMatrix):
    """The registered pair with this ``f`` (in X, Y, Z), if any."""
    key = sorted(f.reordered(("X", "Y", "Z")))
    for case in CASES.values():
        if sorted(parse_polynomial(case.f, ("x", "y", "z")).rows) == key:
            return case
    return None


def _registered_lattices(F: ExponentMatrix):
    """Lattices of the registered pair whose ``f`` is ``F`` without its W-monomial."""
    rest = [r for r in F.reordered(("X", "Y", "Z", "W")) if r[3] == 0]
    if len(rest) != 3:
        return None
    case = _case_for_f(ExponentMatrix(tuple(r[:3] for r in rest), ("X", "Y", "Z")))
    if case is None:
        return None
    return case, build_lattice(case.m), build_lattice(case.m_dual)


def _lattices_for(F: ExponentMatrix, case_name: str | None):
    if case_name:
        case = get_case(case_name)
        return case, build_lattice(case.m), build_lattice(case.m_dual)
    found = _registered_lattices(F)
    if found:
        return found
    w = weight_system(F)
    wt = weight_system(transpose(F))
    order = list(F.variables)
    idx = [order.index(v) for v in LATTICE_VARIABLES]
    return (None, lattice_from_case(tuple(w.weights[i] for i in idx)),
            lattice_from_case(tuple(wt.weights[i] for i in idx)))


def _describe_deformation(F: ExponentMatrix, lat, lat_t) -> dict:
    N = newton(F, lat)
    res = polar_dual(N)
    out = {"polynomial": str(F), "weights": list(weight_system(F).weights),
           "newton_vertices": [list(v) for v in N.vertices], "reflexive": res.reflexive}
    if res.reflexive:
        out["correction"] = batyrev.toric_correction(N).total
        out["ranks"] = batyrev.rank_report(N).to_dict()
    else:
        out["witness"] = [str(x) for x in res.witness]
    try:
        NT = newton(transpose(F), lat_t)
    except ValueError:
        out["transpose"] = {"polynomial": str(transpose(F)), "in_lattice": False}
        return out
    rt = polar_dual(NT)
    t = {"polynomial": str(transpose(F)), "in_lattice": True, "reflexive": rt.reflexive}
    if not rt.reflexive:
        t["witness"] = [str(x) for x in rt.witness]
    if res.reflexive:
        t["inside_dual"] = N.dual.contains(NT)
    out["transpose"] = t
    return out


def cmd_analyze(args) -> int:
    p = _uppercase(parse_polynomial(args.poly))
    if p.n == 3:
        atoms = is_invertible(p)
        found = get_case(args.case) if args.case else _case_for_f(p)
        if found:
            lat, lat_t = build_lattice(found.m), build_lattice(found.m_dual)
            defs = enumerate_deformations(p, accept=lattice_filter(lat))
        else:
            defs = enumerate_deformations(p)
        ws = weight_system(p)
        data = {"polynomial": str(p), "decomposition": decomposition_label(atoms),
                "weights": list(ws.weights), "degree": ws.degree,
                "transpose": str(transpose(p)),
                "case": found.name if found else None, "deformations": []}
        for F in defs:
            if found is None:
                _, lat, lat_t = _lattices_for(F, None)
            data["deformations"].append(_describe_deformation(F, lat, lat_t))
    elif p.n == 4:
        F = _as_deformation(args.poly)
        is_invertible(F)
        case, lat, lat_t = _lattices_for(F, args.case)
        data = {"case": case.name if case else None, **_describe_deformation(F, lat, lat_t)}
    else:
        raise UsageError("analyze takes a polynomial in three or four variables")
    if args.json:
        _print_json(data)
        return 0
    if "deformations" in data:
        print(f"{data['polynomial']}: {data['decomposition']}, weights {tuple(data['weights'])}"
              f" of degree {data['degree']}, transpose {data['transpose']}")
        if data["case"]:
            print(f"lattices of registered pair {data['case']}")
        items = data["deformations"]
    else:
        items = [data]
    for d in items:
        if d["reflexive"]:
            r = d["ranks"]
            print(f"  {d['polynomial']}: reflexive, correction {d['correction']}, "
                  f"rho {r['rho']}/{r['rho_dual']}")
        else:
            print(f"  {d['polynomial']}: not reflexive, witness {_frac(d['witness'])}")
        t = d["transpose"]
        if not t["in_lattice"]:
            print(f"    transpose {t['polynomial']}: exponents outside the dual lattice")
        else:
            line = "reflexive" if t["reflexive"] else f"not reflexive, witness {_frac(t['witness'])}"
            if "inside_dual" in t:
                line += f", inside dual: {t['inside_dual']}"
            print(f"    transpose {t['polynomial']}: {line}")
    return 0


def cmd_dual(args) -> int:
    out = []
    for p in _read_polytopes(args.file):
        res = polar_dual(p)
        item = {"vertices": [list(v) for v in p.vertices], "reflexive": res.reflexive}
        if res.reflexive:
            item["dual_vertices"] = [list(v) for v in res.polytope.vertices]
        else:
            item["witness"] = res.witness
            item["nonintegral_dual_vertices"] = res.nonintegral
        out.append(item)
    if args.json:
        _print_json(out)
        return 0
    for item in out:
        if item["reflexive"]:
            print("reflexive; dual vertices " + " ".join(_frac(v) for v in item["dual_vertices"]))
        else:
            print("not reflexive; witness " + _frac(item["witness"]))
    return 0


def cmd_picard(args) -> int:
    out = []
    for p in _read_polytopes(args.file):
        if not p.is_reflexive:
            raise UsageError(f"polytope {p.vertices} is not reflexive")
        if args.split:
            m = picard_model(p, split=True)
        else:
            m = picard_model(p.dual, split=False, convention=args.convention)
        out.append(m.to_dict())
    if args.json:
        _print_json(out)
        return 0
    for d in out:
        lat = d["lattice"]
        print(f"{d['convention']} model, {lat['rank']} generators: " + " ".join(d["generators"]))
        for row in d["gram"]:
            print("  " + " ".join(f"{x:3d}" for x in row))
        group = [x for x in lat["smith_invariants"] if x > 1]
        print(f"  det {lat['det']}, signature {tuple(lat['signature'])}, group {group}")
    return 0


def cmd_case(args) -> int:
    if args.action == "list":
        for name, case in CASES.items():
            print(f"{name}: f = {case.f}")
        return 0
    if not args.name:
        raise UsageError("case run needs a case name")
    report = run_case(args.name, search=not args.no_search,
                      subpolytope_search=args.subpolytope_search)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(emit_report(report, "json"))
    sys.stdout.write(emit_report(report, "text"))
    return 0 if report.ok else 1


def cmd_scan(args) -> int:
    summary = scan_database(args.file, jobs=args.jobs)
    if summary.skipped:
        print(f"scan skipped: {summary.skipped}")
        return 0
    sys.stdout.write(emit_report(summary, "json" if args.json else "text"))
    return 0


def cmd_extend(args) -> int:
    F = _as_deformation(args.poly)
    is_invertible(F)
    case, lat, lat_t = _lattices_for(F, args.case)
    q = newton(F, lat)
    q_t = newton(transpose(F), lat_t)
    res = find_extensions(q, q_t, bound=args.bound)
    if args.json:
        _print_json(res)
        return 0
    where = f"lattices of {case.name}" if case else "weight lattices with Hermite bases"
    print(f"{F}: {len(res.results)} reflexive extensions ({where}, "
          f"{res.region_size} candidate points, bound {res.bound})")
    for p in res.results:
        corr = batyrev.toric_correction(p).total
        print("  " + " ".join(_frac(v) for v in p.vertices) + f"  correction {corr}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="k3mirror", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="decompose a polynomial and test its deformations")
    a.add_argument("poly")
    a.add_argument("--case", help="use the lattices of a registered pair")
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("dual", help="polar duals of the polytopes in a PALP file")
    d.add_argument("file")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_dual)

    p = sub.add_parser("picard", help="intersection matrices for reflexive polytopes")
    p.add_argument("file")
    p.add_argument("--split", action="store_true",
                   help="divisors at the points of the dual, with split components")
    p.add_argument("--convention", choices=("sum", "component"), default="sum")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_picard)

    c = sub.add_parser("case", help="run a registered mirror pair")
    c.add_argument("action", choices=("run", "list"))
    c.add_argument("name", nargs="?")
    c.add_argument("--json", metavar="OUT", help="also write the JSON report here")
    c.add_argument("--no-search", action="store_true", help="skip the extension search")
    c.add_argument("--subpolytope-search", action="store_true",
                   help="add the slow up-to-isomorphism containment test")
    c.set_defaults(func=cmd_case)

    s = sub.add_parser("scan", help="correction statistics over a PALP database")
    s.add_argument("file", nargs="?", help=f"defaults to ${DATABASE_ENV}")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_scan)

    e = sub.add_parser("extend", help="reflexive polytopes between a Newton polytope "
                                      "and the polar of its transpose")
    e.add_argument("poly", help="deformation in W, X, Y, Z")
    e.add_argument("--bound", type=int, default=None)
    e.add_argument("--case")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_extend)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, NotInvertibleError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
