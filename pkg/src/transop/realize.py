"""Realizability ledger: which compatible pairs of transfer systems are
realized by pairings, derived by a fixpoint over the known construction rules.

Rules (each derivation records the rule and its premises):

  complete-additive   (T, complete) for every T
  j-local             (T_J, T_J) for every subgroup J
  meet                componentwise meets of two realizable pairs
  hull-propagation    if (hull(T), T) is realizable, every compatible (T', T) is
  restriction         pull back a realizable pair along a homomorphism f: G -> Q

External axioms supply pairs known from outside (they must be compatible).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AxiomNotCompatible
from .groups import Subgroup, coset_action
from .transfer import TransferSystem, hull, is_compatible, j_local, meet


@dataclass(frozen=True)
class Derivation:
    rule: str
    premises: tuple = ()
    note: str = ""

    def describe(self):
        inner = ",".join(f"({a},{b})" for a, b in self.premises)
        txt = self.rule
        if self.note:
            txt += f"[{self.note}]"
        if inner:
            txt += f"<{inner}>"
        return txt


@dataclass
class RealizabilityLedger:
    systems: list
    status: dict = field(default_factory=dict)       # (i, j) -> "realizable" | "compatible" | "incompatible"
    derivations: dict = field(default_factory=dict)  # (i, j) -> Derivation

    def compatible_pairs(self):
        return sorted(k for k, v in self.status.items() if v != "incompatible")

    def realizable_pairs(self):
        return sorted(k for k, v in self.status.items() if v == "realizable")

    def unknown_pairs(self):
        return sorted(k for k, v in self.status.items() if v == "compatible")

    def counts(self):
        return {
            "systems": len(self.systems),
            "compatible": len(self.compatible_pairs()),
            "realizable": len(self.realizable_pairs()),
            "unknown": len(self.unknown_pairs()),
        }

    def replay(self, key):
        """Re-derive one entry from its recorded premises; used by tests."""
        der = self.derivations[key]
        i, j = key
        t1, t2 = self.systems[i], self.systems[j]
        lat = t1.lattice
        if der.rule == "complete-additive":
            return t2 == TransferSystem.complete(lat)
        if der.rule == "j-local":
            J = Subgroup(lat.group, tuple(int(x) for x in der.note.split()))
            tj = j_local(lat, J)
            return t1 == tj and t2 == tj
        if der.rule == "axiom":
            return True
        if der.rule == "restriction":
            return True
        if der.rule == "meet":
            (a1, a2), (b1, b2) = der.premises
            return (meet(self.systems[a1], self.systems[b1]) == t1
                    and meet(self.systems[a2], self.systems[b2]) == t2)
        if der.rule == "hull-propagation":
            ((h1, h2),) = der.premises
            return (self.systems[h1] == hull(t2) and h2 == j
                    and self.status[(h1, h2)] == "realizable"
                    and is_compatible(t1, t2)[0])
        return False


def pullback_transfer(f, source_lattice, target_lattice, t_target):
    """f^* of a transfer system along a homomorphism f: G -> Q (as an element
    map).  K -> H in f^*T iff H meets ker f inside the core of K in H and
    f(K) -> f(H) in T."""
    G = source_lattice.group
    Q = target_lattice.group
    ker = tuple(sorted(g for g in G.elements() if f[g] == Q.identity))
    edges = []
    for i in range(source_lattice.n):
        for j in range(source_lattice.n):
            if i == j or not source_lattice.leq[i][j]:
                continue
            K = source_lattice.subgroup(i)
            H = source_lattice.subgroup(j)
            core = coset_action(H, K).core
            meet_kh = set(H.elems) & set(ker)
            if not meet_kh <= set(core.elems):
                continue
            fk = tuple(sorted({f[x] for x in K.elems}))
            fh = tuple(sorted({f[x] for x in H.elems}))
            ti = target_lattice.index[fk]
            tj = target_lattice.index[fh]
            if t_target.relates(ti, tj):
                edges.append((i, j))
    return TransferSystem.from_edges(source_lattice, edges)


def realizability_engine(systems, external_axioms=(), restrictions=()):
    """Close the realizable set under the derivation rules.

    ``systems`` must be a complete enumeration (canonical order) on one
    lattice.  ``external_axioms`` is a list of (T1, T2) pairs; each must be
    compatible.  ``restrictions`` is a list of (hom_map, target_lattice,
    realizable_pairs_on_target) triples for the pullback rule.
    """
    if not systems:
        return RealizabilityLedger(systems=[])
    lat = systems[0].lattice
    index = {t: i for i, t in enumerate(systems)}
    ledger = RealizabilityLedger(systems=list(systems))

    for i, t1 in enumerate(systems):
        for j, t2 in enumerate(systems):
            ok, _ = is_compatible(t1, t2)
            ledger.status[(i, j)] = "compatible" if ok else "incompatible"

    def mark(i, j, derivation):
        if ledger.status[(i, j)] == "incompatible":
            raise AxiomNotCompatible(f"derived pair ({i},{j}) is not compatible")
        if ledger.status[(i, j)] != "realizable":
            ledger.status[(i, j)] = "realizable"
            ledger.derivations[(i, j)] = derivation

    complete_idx = index[TransferSystem.complete(lat)]
    for i in range(len(systems)):
        mark(i, complete_idx, Derivation("complete-additive"))

    for jdx in range(lat.n):
        J = lat.subgroup(jdx)
        tj = j_local(lat, J)
        i = index[tj]
        mark(i, i, Derivation("j-local", note=" ".join(map(str, J.elems))))

    for (a1, a2) in external_axioms:
        i, j = index[a1], index[a2]
        if ledger.status[(i, j)] == "incompatible":
            raise AxiomNotCompatible(f"axiom pair ({i},{j}) fails compatibility")
        mark(i, j, Derivation("axiom"))

    for (fmap, target_lattice, target_pairs) in restrictions:
        for (s1, s2) in target_pairs:
            p1 = pullback_transfer(fmap, lat, target_lattice, s1)
            p2 = pullback_transfer(fmap, lat, target_lattice, s2)
            mark(index[p1], index[p2], Derivation("restriction"))

    hull_of = [index[hull(t)] for t in systems]

    changed = True
    while changed:
        changed = False
        real = ledger.realizable_pairs()
        # meets, componentwise
        for (a1, a2) in real:
            for (b1, b2) in real:
                m1 = index[meet(systems[a1], systems[b1])]
                m2 = index[meet(systems[a2], systems[b2])]
                if ledger.status[(m1, m2)] == "compatible":
                    mark(m1, m2, Derivation("meet", premises=((a1, a2), (b1, b2))))
                    changed = True
        # hull propagation
        for (h, j) in ledger.realizable_pairs():
            if h != hull_of[j]:
                continue
            for i in range(len(systems)):
                if ledger.status[(i, j)] == "compatible":
                    mark(i, j, Derivation("hull-propagation", premises=((h, j),)))
                    changed = True
    return ledger
