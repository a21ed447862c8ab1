"""File formats: Cayley-table JSON, transfer-system JSON, realizability
axiom files, DOT export of transfer systems, and ledger CSV."""

from __future__ import annotations

import csv
import io as _io
import json
from importlib import resources

from .errors import TransopError
from .groups import build_group, named_group
from .transfer import TransferSystem


def group_to_json(G):
    return {"order": G.order, "table": [list(r) for r in G.table], "names": list(G.names)}


def group_from_json(data):
    return build_group(data["table"], names=data.get("names"), label=data.get("label", "group"))


def load_group(spec=None, path=None):
    if (spec is None) == (path is None):
        raise TransopError("give exactly one of a group spec or a group file")
    if spec is not None:
        return named_group(spec)
    with open(path) as fh:
        return group_from_json(json.load(fh))


def transfer_to_json(t, group_spec=None):
    lat = t.lattice
    out = {
        "edges": [[list(lat.subgroup(i).elems), list(lat.subgroup(j).elems)]
                  for i, j in t.edges()],
    }
    if group_spec is not None:
        out["group"] = group_spec
    return out


def transfer_from_json(lattice, data):
    edges = []
    for k_elems, h_elems in data["edges"]:
        ki = lattice.index.get(tuple(sorted(k_elems)))
        hi = lattice.index.get(tuple(sorted(h_elems)))
        if ki is None or hi is None:
            raise TransopError(f"edge {k_elems} -> {h_elems} does not name subgroups")
        edges.append((ki, hi))
    return TransferSystem.from_edges(lattice, edges)


def axioms_from_json(lattice, data):
    return [(transfer_from_json(lattice, {"edges": p[0]}),
             transfer_from_json(lattice, {"edges": p[1]}))
            for p in data["pairs"]]


def load_axioms(lattice, path):
    """Read an axiom file; the name ``steiner-s3`` resolves to packaged data."""
    if path == "steiner-s3":
        text = resources.files("transop").joinpath("data/steiner_s3.json").read_text()
        data = json.loads(text)
    else:
        with open(path) as fh:
            data = json.load(fh)
    return axioms_from_json(lattice, data)


def transfer_to_dot(t, name="transfer"):
    """One node per conjugacy class of subgroups, one arrow per edge class."""
    lat = t.lattice
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    reps = [cls[0] for cls in lat.classes]
    label = {}
    for r in reps:
        label[r] = f"c{lat.class_of[r]}"
        order = lat.subgroup(r).order
        mult = len(lat.class_members(r))
        txt = lat.describe(r) + (f" (x{mult})" if mult > 1 else "")
        lines.append(f'  {label[r]} [label="{txt}", shape=none];')
    seen = set()
    for (i, j) in t.edges():
        key = (lat.class_of[i], lat.class_of[j])
        if key in seen:
            continue
        seen.add(key)
        lines.append(f"  c{key[0]} -> c{key[1]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def ledger_to_csv(ledger):
    buf = _io.StringIO()
    w = csv.writer(buf)
    w.writerow(["t1_id", "t2_id", "status", "derivation"])
    for (i, j) in sorted(ledger.status):
        der = ledger.derivations.get((i, j))
        w.writerow([i, j, ledger.status[(i, j)], der.describe() if der else ""])
    return buf.getvalue()
