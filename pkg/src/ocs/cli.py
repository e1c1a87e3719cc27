"""Command-line front end.

Exit codes: 0 success, 1 domain error (a well-posed request whose answer
does not exist or exceeds caps), 2 usage/input error.  Errors are emitted
as one JSON object on stderr.  All numeric output is exact: integers, or
"p/q" strings for non-integer rationals.  Output is buffered and written
only on success, so error paths never leave partial files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from functools import reduce
from importlib import resources
from pathlib import Path

from .cache import cached
from .dowling import (
    DEFAULT_CAP,
    build_poset,
    count_elements_species,
    element_to_string,
    enumerate_levels,
    factor_interval,
    parse_element,
    spec_from_json,
    spec_to_json,
)
from .errors import CapExceeded, DomainError, InputError
from .groups import GSetSpec, GroupTable
from .homology import reduced_homology, whitney_homology
from .posets import (
    chain_poset,
    direct_product,
    is_isomorphic,
    lower_interval,
    mobius,
    poset_from_json,
    poset_to_json,
    proper_part,
)
from .series import (
    SpaceInput,
    bm_betti,
    closed_form_euler,
    e1_table,
    euler_series,
    space_from_json,
)
from .stability import iterate_report, verify_generator_bound
from .symrep import (
    decompose,
    stable_multiplicity_check,
    sym_class_poset_perms,
    whitney_character,
)

__all__ = ["run", "main"]


# serialization helpers -------------------------------------------------------

def _rat(x):
    """Exact JSON encoding: int stays int, non-integer Fraction -> 'p/q'."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, str):
        return x
    if isinstance(x, (list, tuple)):
        return [_rat(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _rat(v) for k, v in x.items()}
    raise AssertionError(f"unserializable value {x!r}")


def _json_text(obj) -> str:
    return json.dumps(_rat(obj), sort_keys=True, indent=2) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_rat(v) for v in row])
    return buf.getvalue()


def _write_output(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# spec resolution --------------------------------------------------------------

def _load_descriptor(arg: str, kind: str) -> dict:
    """Read a JSON descriptor from a path, falling back to the bundled
    specs/<kind>/ directory for bare names."""
    path = Path(arg)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
    else:
        name = arg if arg.endswith(".json") else arg + ".json"
        res = resources.files("ocs").joinpath("specs", kind, name)
        if not res.is_file():
            raise InputError(f"spec not found: {arg} (no file, no bundled {kind} spec)")
        text = res.read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {arg}: {exc}") from exc
    return obj


def _load_space(arg: str) -> SpaceInput:
    return space_from_json(_load_descriptor(arg, "spaces"))


def _load_poset_file(arg: str):
    obj = _load_descriptor(arg, "posets")
    if "covers" not in obj and ("group" in obj or "gset" in obj):
        raise InputError(
            "this descriptor is a dowling family spec; build it first with "
            "'ocs dowling build'"
        )
    return poset_from_json(obj), obj


# dowling ----------------------------------------------------------------------

def _cmd_dowling_build(args) -> str:
    spec = spec_from_json(_load_descriptor(args.spec, "posets"), n=args.n)
    p, elems = build_poset(spec, cap=args.cap)
    obj = poset_to_json(p)
    obj["dowling"] = {
        "spec": spec_to_json(spec),
        "elements": [element_to_string(e) for e in elems],
    }
    return _json_text(obj)


def _cmd_dowling_count(args) -> str:
    spec = spec_from_json(_load_descriptor(args.spec, "posets"), n=args.n)
    levels = enumerate_levels(spec, cap=args.cap)
    enumerated = sum(len(lv) for lv in levels)
    species = count_elements_species(spec)
    return _json_text(
        {
            "n": spec.n,
            "enumerated": enumerated,
            "species": species,
            "agree": enumerated == species,
            "levels": [len(lv) for lv in levels],
        }
    )


def _cmd_dowling_interval(args) -> str:
    spec = spec_from_json(_load_descriptor(args.spec, "posets"), n=args.n)
    elem = parse_element(spec, args.element)
    p, elems = build_poset(spec, cap=args.cap)
    idx = elems.index(elem)
    interval, _ = lower_interval(p, idx)
    factors = factor_interval(spec, elem)
    product = chain_poset(1)
    described = []
    for f in factors:
        fp, _ = build_poset(f.spec, cap=args.cap)
        product = direct_product(product, fp)
        entry = {
            "kind": f.kind,
            "points": len(f.ground),
            "ground": list(f.ground),
            "posetSize": fp.n_elems,
        }
        if f.kind == "orbit":
            entry["stabilizerOrder"] = f.spec.group.order
            entry["inT"] = bool(f.spec.gset.t_subset)
        described.append(entry)
    iso = is_isomorphic(interval, product) is not None
    return _json_text(
        {
            "element": element_to_string(elem),
            "intervalSize": interval.n_elems,
            "productSize": product.n_elems,
            "factors": described,
            "isomorphic": iso,
        }
    )


# poset ------------------------------------------------------------------------

def _cmd_poset_mobius(args) -> str:
    p, _ = _load_poset_file(args.poset)
    a = p.bottom() if args.a is None else args.a
    b = p.top() if args.b is None else args.b
    value = cached(p, f"mobius:{a}:{b}", lambda: mobius(p, a, b))
    return _json_text({"a": a, "b": b, "mobius": value})


def _cmd_poset_homology(args) -> str:
    p, _ = _load_poset_file(args.poset)
    q = proper_part(p) if args.proper else p
    tag = "homology:proper" if args.proper else "homology"
    pairs = cached(
        p, tag, lambda: [[k, r] for k, r in sorted(reduced_homology(q).items())]
    )
    if args.format == "csv":
        return _csv_text(["degree", "rank"], pairs)
    return _json_text({"proper": bool(args.proper), "betti": pairs})


def _cmd_poset_whitney(args) -> str:
    p, _ = _load_poset_file(args.poset)
    triples = cached(
        p,
        "whitney",
        lambda: [[r, k, d] for (r, k), d in sorted(whitney_homology(p).items())],
    )
    if args.format == "csv":
        return _csv_text(["rank", "degree", "dim"], triples)
    return _json_text({"whitney": triples})


# config -----------------------------------------------------------------------

def _cmd_config_e1(args) -> str:
    space = _load_space(args.spec)
    table = e1_table(space, args.nmax)
    if args.format == "csv":
        rows = [
            [n, p, q, d]
            for n in sorted(table)
            for (p, q), d in sorted(table[n].items())
        ]
        return _csv_text(["n", "p", "q", "dim"], rows)
    return _json_text(
        {
            "space": space.name,
            "weight": space.group.order,
            "table": [
                {"n": n, "entries": [[p, q, d] for (p, q), d in sorted(table[n].items())]}
                for n in sorted(table)
            ],
        }
    )


def _cmd_config_betti(args) -> str:
    space = _load_space(args.spec)
    bet = bm_betti(space, args.n)
    pairs = [[m, r] for m, r in sorted(bet.items())]
    if args.format == "csv":
        return _csv_text(["degree", "rank"], pairs)
    return _json_text({"space": space.name, "n": args.n, "betti": pairs})


def _cmd_config_euler(args) -> str:
    space = _load_space(args.spec)
    seq = euler_series(space, args.nmax)
    obj = {"space": space.name, "euler": seq}
    if args.check_closed_form:
        closed = closed_form_euler(space, args.nmax)
        if closed is None:
            raise DomainError(
                "closed-form Euler product requires a free action (no orbit data)"
            )
        obj["closedForm"] = closed
        obj["match"] = closed == seq
        if closed != seq:
            raise DomainError(
                f"euler series {seq} disagrees with closed form {closed}"
            )
    return _json_text(obj)


# stability --------------------------------------------------------------------

def _cmd_stability_report(args) -> str:
    space = _load_space(args.spec)
    report = iterate_report(space, variant=args.variant, steps=args.steps)
    steps_json = []
    for i, step in enumerate(report.steps):
        entry = {
            "point": {"x": step.x, "y": step.y},
            "factor": step.factor,
            "classification": step.classification,
            "norm": step.norm,
            "epsilon": step.epsilon,
            "epsilonAttained": step.epsilon_attained,
            "slope": step.slope,
            "terminal": step.terminal,
        }
        if step.classification == "absolute" and step.epsilon:
            entry["j"] = args.j
            entry["generatorBound"] = step.bound(args.j, 0)
        if args.verify and step.classification == "absolute" and step.epsilon:
            ok, info = verify_generator_bound(space, report, i, args.j, args.nmax)
            entry["verified"] = ok
            entry["sizesChecked"] = info["sizes_checked"]
            if not ok:
                raise DomainError(
                    f"generator bound violated at step {i}: {info['violations']}"
                )
        steps_json.append(entry)
    return _json_text(
        {
            "space": report.label,
            "variant": report.variant,
            "validity": report.validity,
            "steps": steps_json,
        }
    )


# rep --------------------------------------------------------------------------

def _built_dowling_poset(arg: str):
    obj = _load_descriptor(arg, "posets")
    if "dowling" not in obj:
        raise DomainError(
            "rep commands need group provenance: build the poset with "
            "'ocs dowling build' and pass its output file"
        )
    p = poset_from_json(obj)
    d = obj["dowling"]
    spec = spec_from_json(d["spec"])
    elements = [parse_element(spec, s) for s in d["elements"]]
    return p, spec, elements


def _cmd_rep_decompose(args) -> str:
    p, spec, elements = _built_dowling_poset(args.poset)
    perms = sym_class_poset_perms(spec, elements)
    ranks = [args.rank] if args.rank is not None else sorted(set(p.rank))
    out = []
    for r in ranks:
        cf = whitney_character(p, perms, r, spec.n)
        mult = decompose(cf)
        out.append(
            {
                "rank": r,
                "character": [[list(mu), v] for mu, v in cf.values],
                "multiplicities": [[list(lam), m] for lam, m in sorted(mult.items())],
            }
        )
    return _json_text({"action": args.action, "n": spec.n, "ranks": out})


def _gset_from_orbit_data(group: GroupTable, orbit_data) -> GSetSpec:
    """Reassemble a G-set from per-orbit (stabilizer, inT) data.  Only the
    extreme stabilizers determine the action without an embedding: trivial
    (a free orbit) and full (a fixed point)."""
    size = 0
    blocks = []  # (start, orbit_size, in_t)
    for stab, in_t in orbit_data:
        if stab.order == 1:
            blocks.append((size, group.order, in_t))
            size += group.order
        elif stab.order == group.order:
            blocks.append((size, 1, in_t))
            size += 1
        else:
            raise DomainError(
                "cannot reconstruct the singular G-set: orbit stabilizer is "
                "neither trivial nor the full group"
            )
    action = []
    for g in range(group.order):
        row = [0] * size
        for start, osize, _ in blocks:
            if osize == 1:
                row[start] = start
            else:
                for h in range(group.order):
                    row[start + h] = start + group.mul[g][h]
        action.append(tuple(row))
    t_points = frozenset(
        start + k
        for start, osize, in_t in blocks
        if in_t
        for k in range(osize)
    )
    return GSetSpec(group=group, size=size, action=tuple(action), t_subset=t_points)


def _parse_window(text: str) -> list[int]:
    parts = text.split("..")
    if len(parts) != 2:
        raise InputError("window must look like 4..6")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise InputError("window bounds must be integers") from exc
    if not 1 <= lo <= hi:
        raise InputError("window bounds must satisfy 1 <= lo <= hi")
    return list(range(lo, hi + 1))


def _cmd_rep_stability(args) -> str:
    from .dowling import DowlingSpec

    space = _load_space(args.spec)
    window = _parse_window(args.window)
    gset = _gset_from_orbit_data(space.group, space.orbit_data)
    chars = {}
    for n in window:
        spec = DowlingSpec(group=space.group, gset=gset, n=n, name=space.name)
        p, elements = build_poset(spec, cap=args.cap)
        perms = sym_class_poset_perms(spec, elements)
        chars[n] = whitney_character(p, perms, args.rank, n)
    epsilon = None
    primary = iterate_report(space, "left", 1).steps[0]
    if primary.classification == "absolute" and primary.epsilon:
        epsilon = primary.epsilon
    report = stable_multiplicity_check(chars, degree=args.rank, epsilon=epsilon)
    obj = {
        "space": space.name,
        "rank": args.rank,
        "window": report["window"],
        "stable": report["stable"],
        "firstViolation": report["first_violation"],
        "names": {
            str(n): [[list(name), m] for name, m in sorted(names.items())]
            for n, names in report["names"].items()
        },
    }
    if "size_bound" in report:
        obj["sizeBound"] = report["size_bound"]
        obj["sizeBoundOk"] = report["size_bound_ok"]
    return _json_text(obj)


# parser -----------------------------------------------------------------------

def _add_out(sp):
    sp.add_argument("--out", default="-", help="output path, or - for stdout")


def _add_format(sp):
    sp.add_argument("--format", choices=["json", "csv"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocs",
        description="Exact combinatorics of orbit configuration spaces: "
        "Dowling posets, Whitney homology, first-page series, stability.",
    )
    top = parser.add_subparsers(dest="command", required=True)

    dow = top.add_parser("dowling", help="Dowling poset enumeration").add_subparsers(
        dest="sub", required=True
    )
    b = dow.add_parser("build", help="enumerate and emit the poset as JSON")
    b.add_argument("--spec", required=True)
    b.add_argument("--n", type=int, default=None)
    b.add_argument("--cap", type=int, default=DEFAULT_CAP)
    _add_out(b)
    b.set_defaults(handler=_cmd_dowling_build)
    c = dow.add_parser("count", help="BFS count vs species count")
    c.add_argument("--spec", required=True)
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--cap", type=int, default=DEFAULT_CAP)
    _add_out(c)
    c.set_defaults(handler=_cmd_dowling_count)
    i = dow.add_parser("interval", help="factor a lower interval")
    i.add_argument("--spec", required=True)
    i.add_argument("--n", type=int, default=None)
    i.add_argument("--element", required=True)
    i.add_argument("--cap", type=int, default=DEFAULT_CAP)
    _add_out(i)
    i.set_defaults(handler=_cmd_dowling_interval)

    pos = top.add_parser("poset", help="poset invariants").add_subparsers(
        dest="sub", required=True
    )
    m = pos.add_parser("mobius", help="Mobius function value")
    m.add_argument("--poset", required=True)
    m.add_argument("--a", type=int, default=None)
    m.add_argument("--b", type=int, default=None)
    _add_out(m)
    m.set_defaults(handler=_cmd_poset_mobius)
    h = pos.add_parser("homology", help="reduced homology of the order complex")
    h.add_argument("--poset", required=True)
    h.add_argument("--proper", action="store_true")
    _add_format(h)
    _add_out(h)
    h.set_defaults(handler=_cmd_poset_homology)
    w = pos.add_parser("whitney", help="bigraded Whitney homology table")
    w.add_argument("--poset", required=True)
    _add_format(w)
    _add_out(w)
    w.set_defaults(handler=_cmd_poset_whitney)

    cfg = top.add_parser("config", help="configuration-space series").add_subparsers(
        dest="sub", required=True
    )
    e1 = cfg.add_parser("e1", help="first-page dimension table")
    e1.add_argument("--spec", required=True)
    e1.add_argument("--nmax", type=int, required=True)
    _add_format(e1)
    _add_out(e1)
    e1.set_defaults(handler=_cmd_config_e1)
    bt = cfg.add_parser("betti", help="Borel-Moore Betti numbers (i-acyclic)")
    bt.add_argument("--spec", required=True)
    bt.add_argument("--n", type=int, required=True)
    _add_format(bt)
    _add_out(bt)
    bt.set_defaults(handler=_cmd_config_betti)
    eu = cfg.add_parser("euler", help="compactly supported Euler characteristics")
    eu.add_argument("--spec", required=True)
    eu.add_argument("--nmax", type=int, required=True)
    eu.add_argument("--check-closed-form", action="store_true")
    _add_out(eu)
    eu.set_defaults(handler=_cmd_config_euler)

    stab = top.add_parser("stability", help="generation-locus analysis").add_subparsers(
        dest="sub", required=True
    )
    r = stab.add_parser("report", help="iterative stabilization report")
    r.add_argument("--spec", required=True)
    r.add_argument("--variant", choices=["left", "right", "bottom"], default="left")
    r.add_argument("--steps", type=int, default=1)
    r.add_argument("--verify", action="store_true")
    r.add_argument("--nmax", type=int, default=8)
    r.add_argument("--j", type=int, default=1)
    _add_out(r)
    r.set_defaults(handler=_cmd_stability_report)

    rep = top.add_parser("rep", help="symmetric-group representations").add_subparsers(
        dest="sub", required=True
    )
    d = rep.add_parser("decompose", help="decompose Whitney characters")
    d.add_argument("--poset", required=True)
    d.add_argument("--action", choices=["sym"], default="sym")
    d.add_argument("--rank", type=int, default=None)
    _add_out(d)
    d.set_defaults(handler=_cmd_rep_decompose)
    s = rep.add_parser("stability", help="multiplicity stability over a window")
    s.add_argument("--spec", required=True)
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--window", required=True)
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    _add_out(s)
    s.set_defaults(handler=_cmd_rep_stability)

    return parser


def _emit_error(kind: str, exc: BaseException) -> None:
    payload = {"error": {"type": kind, "message": str(exc)}}
    if isinstance(exc, CapExceeded) and exc.partial_count is not None:
        payload["error"]["partialCount"] = exc.partial_count
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        text = args.handler(args)
    except InputError as exc:
        _emit_error("input", exc)
        return 2
    except FileNotFoundError as exc:
        _emit_error("input", exc)
        return 2
    except CapExceeded as exc:
        _emit_error("cap", exc)
        return 1
    except DomainError as exc:
        _emit_error("domain", exc)
        return 1
    _write_output(text, args.out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
