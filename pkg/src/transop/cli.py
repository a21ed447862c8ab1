"""Command-line interface.

One verb per construction: group inspection, transfer-system enumeration and
queries, realizability ledgers, operad/pairing verification, and export.
Every command prints either a human-readable table (default) or structured
JSON (--format json); verification failures exit 1 with the witness in the
payload, usage errors exit 2.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import equivariant, io as tio, models, operads, realize, transfer
from .errors import TransopError
from .groups import GSet, coinduce

SCHEMA = "transop/1"


def _emit(args, command, payload, ok=True, table=None):
    if getattr(args, "format", "table") == "json":
        print(json.dumps({"schema": SCHEMA, "command": command, "ok": ok, "payload": payload},
                         indent=1, sort_keys=True))
    else:
        if table:
            print(table)
        else:
            print(json.dumps(payload, indent=1, sort_keys=True))
    return 0 if ok else 1


def _lattice(args):
    G = tio.load_group(spec=getattr(args, "spec", None), path=getattr(args, "group_file", None))
    return G, G.lattice()


def _load_transfer(lattice, path):
    with open(path) as fh:
        return tio.transfer_from_json(lattice, json.load(fh))


def _edge_text(lat, t):
    return "; ".join(f"{lat.describe(i)}->{lat.describe(j)}" for i, j in t.edges()) or "(trivial)"


# -- group ------------------------------------------------------------------

def cmd_group_info(args):
    G, lat = _lattice(args)
    payload = {
        "label": G.label,
        "order": G.order,
        "subgroups": lat.n,
        "subgroup_conjugacy_classes": len(lat.classes),
    }
    table = (f"{G.label}: order {G.order}, {lat.n} subgroups, "
             f"{len(lat.classes)} conjugacy classes of subgroups")
    return _emit(args, "group info", payload, table=table)


def cmd_group_subgroups(args):
    G, lat = _lattice(args)
    rows = [{"index": i, "order": lat.subgroup(i).order,
             "elements": list(lat.subgroup(i).elems),
             "members": lat.describe(i), "class": lat.class_of[i]}
            for i in range(lat.n)]
    table = "\n".join(f"[{r['index']:2d}] order {r['order']:3d} class {r['class']:2d}  {r['members']}"
                      for r in rows)
    return _emit(args, "group subgroups", {"subgroups": rows}, table=table)


# -- transfer ----------------------------------------------------------------

def cmd_transfer_enumerate(args):
    G, lat = _lattice(args)
    systems = transfer.enumerate_all(lat, bound=args.bound)
    payload = {"count": len(systems),
               "systems": [tio.transfer_to_json(t) for t in systems]}
    table = f"{len(systems)} transfer systems on {G.label}\n" + "\n".join(
        f"[{i}] {_edge_text(lat, t)}" for i, t in enumerate(systems))
    return _emit(args, "transfer enumerate", payload, table=table)


def cmd_transfer_validate(args):
    G, lat = _lattice(args)
    try:
        t = _load_transfer(lat, args.transfer)
    except TransopError as e:
        return _emit(args, "transfer validate", {"valid": False, "reason": str(e)},
                     ok=False, table=f"INVALID: {e}")
    return _emit(args, "transfer validate", {"valid": True, "edges": len(t.edges())},
                 table=f"valid transfer system with {len(t.edges())} strict edges")


def cmd_transfer_compatible(args):
    G, lat = _lattice(args)
    t1 = _load_transfer(lat, args.t1)
    t2 = _load_transfer(lat, args.t2)
    ok, wit = transfer.is_compatible(t1, t2)
    payload = {"compatible": ok}
    table = "compatible"
    if not ok:
        payload["witness"] = {"K": lat.describe(wit[0]), "H": lat.describe(wit[1]),
                              "L": lat.describe(wit[2])}
        table = (f"NOT compatible; witness K={lat.describe(wit[0])} "
                 f"H={lat.describe(wit[1])} L={lat.describe(wit[2])}")
    return _emit(args, "transfer compatible", payload, ok=ok, table=table)


def cmd_transfer_oracle(args):
    G, lat = _lattice(args)
    t1 = _load_transfer(lat, args.t1)
    t2 = _load_transfer(lat, args.t2)
    ok = transfer.compatibility_oracle(t1, t2, bound=args.bound)
    return _emit(args, "transfer oracle", {"compatible": ok}, ok=ok,
                 table="compatible (coinduction oracle)" if ok else "NOT compatible (coinduction oracle)")


def cmd_transfer_hull(args):
    G, lat = _lattice(args)
    t = _load_transfer(lat, args.transfer)
    h = transfer.hull(t)
    return _emit(args, "transfer hull", tio.transfer_to_json(h),
                 table=f"hull: {_edge_text(lat, h)}")


def cmd_transfer_jlocal(args):
    G, lat = _lattice(args)
    J = lat.subgroup(args.j_index)
    t = transfer.j_local(lat, J)
    return _emit(args, "transfer jlocal", tio.transfer_to_json(t),
                 table=f"{lat.describe(args.j_index)}-local: {_edge_text(lat, t)}")


def cmd_transfer_saturated(args):
    G, lat = _lattice(args)
    t = _load_transfer(lat, args.transfer)
    sat = transfer.is_saturated(t)
    return _emit(args, "transfer saturated", {"saturated": sat},
                 table="saturated" if sat else "not saturated")


def cmd_transfer_meet(args):
    return _meet_join(args, "meet")


def cmd_transfer_join(args):
    return _meet_join(args, "join")


def _meet_join(args, which):
    G, lat = _lattice(args)
    t1 = _load_transfer(lat, args.t1)
    t2 = _load_transfer(lat, args.t2)
    out = transfer.meet(t1, t2) if which == "meet" else transfer.join(t1, t2)
    return _emit(args, f"transfer {which}", tio.transfer_to_json(out),
                 table=f"{which}: {_edge_text(lat, out)}")


def cmd_pairs_count(args):
    G, lat = _lattice(args)
    systems = transfer.enumerate_all(lat, bound=args.bound)
    pairs = [(i, j) for i, a in enumerate(systems) for j, b in enumerate(systems)
             if transfer.is_compatible(a, b)[0]]
    payload = {"systems": len(systems), "compatible_pairs": len(pairs)}
    return _emit(args, "pairs count", payload,
                 table=f"{len(systems)} systems, {len(pairs)} compatible ordered pairs")


def _s3_table_rows():
    """Rows of the S3 table in the structural order fixed by the sources:
    trivial; the one-class systems; the C3-local; the shared hull; the
    C2-local; the three non-saturated (hull = shared) with the Steiner one
    eighth; complete."""
    from .groups import symmetric
    lat = symmetric(3).lattice()
    systems = transfer.enumerate_all(lat)
    sat = [t for t in systems if transfer.is_saturated(t)]
    nonsat = [t for t in systems if not transfer.is_saturated(t)]
    shared_hull = transfer.hull(nonsat[0])
    c3 = next(i for i in range(lat.n) if lat.subgroup(i).order == 3)
    c2 = next(i for i in range(lat.n) if lat.subgroup(i).order == 2)
    c3_local = transfer.j_local(lat, lat.subgroup(c3))
    c2_local = transfer.j_local(lat, lat.subgroup(c2))
    trivial = transfer.TransferSystem.trivial(lat)
    complete = transfer.TransferSystem.complete(lat)
    row2 = next(t for t in sat if t not in (trivial, complete, c3_local, c2_local, shared_hull))
    with_d = next(t for t in nonsat if any(lat.subgroup(i).order == 2 for i, j in t.edges()))
    with_e = next(t for t in nonsat
                  if t is not with_d and any(lat.subgroup(i).order == 3 for i, j in t.edges()))
    plain = next(t for t in nonsat if t not in (with_d, with_e))
    rows = [trivial, row2, c3_local, shared_hull, c2_local, with_e, plain, with_d, complete]
    assert len(set(rows)) == 9
    return lat, systems, rows


def cmd_transfer_table_s3(args):
    lat, systems, rows = _s3_table_rows()
    axioms = tio.load_axioms(lat, args.axioms) if args.axioms else []
    ledger = realize.realizability_engine(systems, external_axioms=axioms)
    index = {t: i for i, t in enumerate(systems)}
    out_rows = []
    for n, t in enumerate(rows, start=1):
        h = transfer.hull(t)
        key = (index[h], index[t])
        status = ledger.status[key]
        der = ledger.derivations.get(key)
        out_rows.append({
            "row": n,
            "transfer": _edge_text(lat, t),
            "hull_row": next(k + 1 for k, r in enumerate(rows) if r == h),
            "realizable": "yes" if status == "realizable" else "?",
            "derivation": der.describe() if der else "",
        })
    table_lines = [f"{'row':>3} {'realizable':>10} {'hull':>4}  transfer system"]
    for r in out_rows:
        table_lines.append(f"{r['row']:>3} {r['realizable']:>10} {r['hull_row']:>4}  {r['transfer']}")
    counts = ledger.counts()
    table_lines.append(f"compatible pairs: {counts['compatible']}; "
                       f"realizable: {counts['realizable']}; unknown: {counts['unknown']}")
    payload = {"rows": out_rows, "counts": counts}
    return _emit(args, "transfer table-s3", payload, table="\n".join(table_lines))


# -- realize ------------------------------------------------------------------

def cmd_realize_ledger(args):
    G, lat = _lattice(args)
    systems = transfer.enumerate_all(lat, bound=args.bound)
    axioms = tio.load_axioms(lat, args.axioms) if args.axioms else []
    ledger = realize.realizability_engine(systems, external_axioms=axioms)
    if args.format == "csv":
        print(tio.ledger_to_csv(ledger), end="")
        return 0
    counts = ledger.counts()
    payload = {"counts": counts,
               "realizable": [list(k) for k in ledger.realizable_pairs()],
               "unknown": [list(k) for k in ledger.unknown_pairs()]}
    return _emit(args, "realize ledger", payload,
                 table=(f"{counts['systems']} systems; {counts['compatible']} compatible pairs; "
                        f"{counts['realizable']} realizable; {counts['unknown']} unknown"))


# -- operad -------------------------------------------------------------------

def _load_monoid(args):
    if args.builtin:
        return {"bool-and": operads.BOOLEAN_AND, "bool-or": operads.BOOLEAN_OR}[args.builtin]
    with open(args.monoid) as fh:
        data = json.load(fh)
    return operads.FiniteMonoid(data["table"], identity=data.get("identity"),
                                label=data.get("label", "monoid"))


def cmd_operad_check(args):
    m = _load_monoid(args)
    O = operads.operad_from_monoid(m)
    rep = operads.check_operad_axioms(O, max_arity=args.max_arity, max_inner=args.max_arity,
                                      seed=args.seed)
    return _emit(args, "operad check", rep.to_payload(), ok=rep.ok,
                 table=f"operad axioms for O({m.label}): {rep.summary()}")


def cmd_operad_from_monoid(args):
    m = _load_monoid(args)
    O = operads.operad_from_monoid(m)
    payload = {"label": O.label,
               "levels": {n: O.level_size(n) for n in range(args.max_arity + 1)}}
    return _emit(args, "operad from-monoid", payload,
                 table=f"{O.label}: level sizes " + ", ".join(
                     f"{n}:{O.level_size(n)}" for n in range(args.max_arity + 1)))


def cmd_operad_vee(args):
    with open(args.monoid) as fh:
        data = json.load(fh)
    m = operads.FiniteMonoid(data["table"], identity=data.get("identity"),
                             label=data.get("label", "monoid"))
    vee_pairs = {tuple(p) for p in data.get("vee", [])}
    vee_pairs |= {(b, a) for a, b in vee_pairs}
    spec = operads.IntersectionMonoidSpec(
        carrier=operads.MonoidHandle.from_finite(m),
        vee=lambda a, b: (a, b) in vee_pairs)
    bad = spec.check_axioms()
    if bad:
        return _emit(args, "operad vee", {"ok": False, "violations": [repr(b) for b in bad[:5]]},
                     ok=False, table=f"vee axioms FAIL: {bad[0]}")
    O = operads.suboperad_vee(spec, validate=False)
    payload = {"levels": {n: len(O.level(n)) for n in range(args.max_arity + 1)}}
    return _emit(args, "operad vee", payload,
                 table="disjoint suboperad level sizes: " + ", ".join(
                     f"{n}:{len(O.level(n))}" for n in range(args.max_arity + 1)))


# -- pairing ------------------------------------------------------------------

def _builtin_pairing(name):
    if name == "boolean":
        return operads.boolean_pairing()
    if name == "iso-steiner":
        return models.iso_steiner_pairing()
    if name == "iso-steiner-small":
        return models.iso_steiner_pairing(small=True)
    raise TransopError(f"unknown builtin pairing {name}")


def cmd_pairing_check(args):
    pairing = _builtin_pairing(args.builtin)
    rep = operads.check_monoid_pairing(pairing, samples=args.samples, seed=args.seed)
    return _emit(args, "pairing check", rep.to_payload(), ok=rep.ok,
                 table=f"monoid pairing axioms: {rep.summary()}")


def cmd_pairing_from_monoid_pairing(args):
    pairing = _builtin_pairing(args.builtin)
    op = operads.lambda_from_pairing(pairing, check=False)
    exhaustive = pairing.mode == "plain"
    rep = operads.check_operad_pairing(
        op, max_k=args.max_arity, max_j=args.max_arity, max_i=2,
        cap=4000 if exhaustive else 0, samples=30 if exhaustive else 2,
        shape_cap=256 if exhaustive else 0, shape_samples=3, seed=args.seed)
    return _emit(args, "pairing from-monoid-pairing", rep.to_payload(), ok=rep.ok,
                 table=f"operad pairing axioms (a)-(h): {rep.summary()}")


def cmd_pairing_coinduce(args):
    G, lat = _lattice(args)
    pairing = _builtin_pairing(args.builtin)
    op = operads.lambda_from_pairing(pairing, check=False)
    J = lat.subgroup(args.j_index) if args.j_index is not None else None
    cop = equivariant.coinduced_pairing(op, G, J)
    rep = operads.check_operad_pairing(cop, max_k=2, max_j=2, max_i=2,
                                       cap=200, samples=4, shape_cap=16,
                                       shape_samples=3, seed=args.seed)
    return _emit(args, "pairing coinduce", rep.to_payload(), ok=rep.ok,
                 table=f"coinduced pairing over {G.label}: {rep.summary()}")


def cmd_pairing_fixed_point(args):
    G, lat = _lattice(args)
    pairing = _builtin_pairing(args.builtin)
    op = operads.lambda_from_pairing(pairing, check=False)
    cop = equivariant.coinduced_pairing(op, G)
    K = lat.subgroup(args.k_index)
    H = lat.subgroup(args.h_index)
    X = GSet.trivial(K, args.x_size)
    z = equivariant.fixed_pair_z(cop, K, H, X)
    payload = {"K": lat.describe(args.k_index), "H": lat.describe(args.h_index),
               "carrier": X.size ** coinduce(K, H, X).n, "fixed": True}
    return _emit(args, "pairing fixed-point", payload,
                 table=(f"z = lambda(a; b_1..b_n) is Gamma_theta-fixed for "
                        f"K={payload['K']} <= H={payload['H']}, |X|={args.x_size}"))


# -- export -------------------------------------------------------------------

def cmd_export_dot(args):
    G, lat = _lattice(args)
    t = _load_transfer(lat, args.transfer)
    sys.stdout.write(tio.transfer_to_dot(t, name=G.label))
    return 0


def cmd_export_json(args):
    G, lat = _lattice(args)
    systems = transfer.enumerate_all(lat, bound=args.bound)
    print(json.dumps({"schema": SCHEMA, "group": G.label,
                      "systems": [tio.transfer_to_json(t) for t in systems]},
                     indent=1, sort_keys=True))
    return 0


def cmd_export_csv(args):
    args.format = "csv"
    return cmd_realize_ledger(args)


# -- parser -------------------------------------------------------------------

def _add_group_args(p):
    p.add_argument("--spec", help="group spec, e.g. symmetric:3 or product(cyclic(2),cyclic(2))")
    p.add_argument("--group-file", help="Cayley table JSON file")
    p.add_argument("--format", choices=["table", "json", "csv", "dot"], default="table")
    p.add_argument("--bound", type=int, default=24)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-arity", type=int, default=3, dest="max_arity")


def build_parser():
    ap = argparse.ArgumentParser(prog="transop",
                                 description="transfer systems, set operads, and pairings")
    sub = ap.add_subparsers(dest="topic", required=True)

    g = sub.add_parser("group").add_subparsers(dest="verb", required=True)
    p = g.add_parser("info"); _add_group_args(p); p.set_defaults(fn=cmd_group_info)
    p = g.add_parser("subgroups"); _add_group_args(p); p.set_defaults(fn=cmd_group_subgroups)

    t = sub.add_parser("transfer").add_subparsers(dest="verb", required=True)
    p = t.add_parser("enumerate"); _add_group_args(p); p.set_defaults(fn=cmd_transfer_enumerate)
    p = t.add_parser("validate"); _add_group_args(p)
    p.add_argument("transfer"); p.set_defaults(fn=cmd_transfer_validate)
    p = t.add_parser("compatible"); _add_group_args(p)
    p.add_argument("t1"); p.add_argument("t2"); p.set_defaults(fn=cmd_transfer_compatible)
    p = t.add_parser("oracle"); _add_group_args(p)
    p.add_argument("t1"); p.add_argument("t2"); p.set_defaults(fn=cmd_transfer_oracle)
    p = t.add_parser("hull"); _add_group_args(p)
    p.add_argument("transfer"); p.set_defaults(fn=cmd_transfer_hull)
    p = t.add_parser("jlocal"); _add_group_args(p)
    p.add_argument("j_index", type=int); p.set_defaults(fn=cmd_transfer_jlocal)
    p = t.add_parser("saturated"); _add_group_args(p)
    p.add_argument("transfer"); p.set_defaults(fn=cmd_transfer_saturated)
    p = t.add_parser("meet"); _add_group_args(p)
    p.add_argument("t1"); p.add_argument("t2"); p.set_defaults(fn=cmd_transfer_meet)
    p = t.add_parser("join"); _add_group_args(p)
    p.add_argument("t1"); p.add_argument("t2"); p.set_defaults(fn=cmd_transfer_join)
    p = t.add_parser("table-s3"); _add_group_args(p)
    p.add_argument("--axioms", default="steiner-s3"); p.set_defaults(fn=cmd_transfer_table_s3)

    pr = sub.add_parser("pairs").add_subparsers(dest="verb", required=True)
    p = pr.add_parser("count"); _add_group_args(p); p.set_defaults(fn=cmd_pairs_count)

    r = sub.add_parser("realize").add_subparsers(dest="verb", required=True)
    p = r.add_parser("ledger"); _add_group_args(p)
    p.add_argument("--axioms"); p.set_defaults(fn=cmd_realize_ledger)

    o = sub.add_parser("operad").add_subparsers(dest="verb", required=True)
    p = o.add_parser("check"); _add_group_args(p)
    p.add_argument("--monoid"); p.add_argument("--builtin", choices=["bool-and", "bool-or"])
    p.set_defaults(fn=cmd_operad_check)
    p = o.add_parser("from-monoid"); _add_group_args(p)
    p.add_argument("--monoid"); p.add_argument("--builtin", choices=["bool-and", "bool-or"])
    p.set_defaults(fn=cmd_operad_from_monoid)
    p = o.add_parser("vee"); _add_group_args(p)
    p.add_argument("--monoid", required=True); p.set_defaults(fn=cmd_operad_vee)

    pg = sub.add_parser("pairing").add_subparsers(dest="verb", required=True)
    p = pg.add_parser("check"); _add_group_args(p)
    p.add_argument("--builtin", default="boolean",
                   choices=["boolean", "iso-steiner", "iso-steiner-small"])
    p.add_argument("--samples", type=int, default=400)
    p.set_defaults(fn=cmd_pairing_check)
    p = pg.add_parser("from-monoid-pairing"); _add_group_args(p)
    p.add_argument("--builtin", default="boolean",
                   choices=["boolean", "iso-steiner-small"])
    p.set_defaults(fn=cmd_pairing_from_monoid_pairing)
    p = pg.add_parser("coinduce"); _add_group_args(p)
    p.add_argument("--builtin", default="boolean", choices=["boolean"])
    p.add_argument("--j-index", type=int, default=None)
    p.set_defaults(fn=cmd_pairing_coinduce)
    p = pg.add_parser("fixed-point"); _add_group_args(p)
    p.add_argument("--builtin", default="boolean", choices=["boolean"])
    p.add_argument("--k-index", type=int, required=True)
    p.add_argument("--h-index", type=int, required=True)
    p.add_argument("--x-size", type=int, default=2)
    p.set_defaults(fn=cmd_pairing_fixed_point)

    e = sub.add_parser("export").add_subparsers(dest="verb", required=True)
    p = e.add_parser("dot"); _add_group_args(p)
    p.add_argument("transfer"); p.set_defaults(fn=cmd_export_dot)
    p = e.add_parser("json"); _add_group_args(p); p.set_defaults(fn=cmd_export_json)
    p = e.add_parser("csv"); _add_group_args(p)
    p.add_argument("--axioms"); p.set_defaults(fn=cmd_export_csv)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except TransopError as e:
        print(json.dumps({"schema": SCHEMA, "ok": False, "error": str(e)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
