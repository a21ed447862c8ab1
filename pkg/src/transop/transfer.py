"""Transfer systems on a subgroup lattice: validation, closure, enumeration,
lattice structure, compatibility (two independent criteria), saturation,
multiplicative hulls, and J-local systems.

A transfer system is a partial order on Sub(G) refining inclusion that is
closed under conjugation and under restriction (intersecting both ends with
any subgroup).  Internally a system is the set of its strict edges (i, j)
over lattice indices; reflexive pairs are implied.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import BadEdge, BoundExceeded, LatticeMismatch
from .groups import GSet, coinduce, coset_action, orbit_type


class _LatticeContext:
    """Precomputed closure machinery for one subgroup lattice.

    Systems are ints: bit p set means strict pair ``pairs[p]`` is present.
    """

    def __init__(self, lattice):
        self.lattice = lattice
        n = lattice.n
        self.pairs = [(i, j) for i in range(n) for j in range(n) if i != j and lattice.leq[i][j]]
        self.pair_index = {p: b for b, p in enumerate(self.pairs)}
        P = len(self.pairs)
        self.full = (1 << P) - 1
        G = lattice.group

        # conjugation closure of a single pair
        self.conj_mask = []
        for (i, j) in self.pairs:
            m = 0
            for g in G.elements():
                m |= 1 << self.pair_index[(lattice.conj_index(i, g), lattice.conj_index(j, g))]
            self.conj_mask.append(m)

        # strict restrictions of a single pair: (i^L, j^L) over all L
        self.restr_mask = []
        for (i, j) in self.pairs:
            m = 0
            for L in range(n):
                a, b = lattice.meet(i, L), lattice.meet(j, L)
                if a != b:
                    m |= 1 << self.pair_index[(a, b)]
            self.restr_mask.append(m)

        # masks of pairs leaving / entering each subgroup (for transitivity)
        self.out_of = [0] * n
        self.into = [0] * n
        for b, (i, j) in enumerate(self.pairs):
            self.out_of[i] |= 1 << b
            self.into[j] |= 1 << b
        self.src = [p[0] for p in self.pairs]
        self.dst = [p[1] for p in self.pairs]

        # conjugation classes of pairs, in first-bit order (for enumeration)
        self.pair_classes = []
        seen = 0
        for b in range(P):
            if not (seen >> b) & 1:
                m = self.conj_mask[b]
                seen |= m
                self.pair_classes.append(m)

    def closure_bits(self, bits, base=0):
        """Close ``base | bits`` where ``base`` is already closed.

        Incremental worklist: each newly added pair contributes its conjugates
        and restrictions plus its transitivity composites with the current set.
        """
        cur = base | bits
        queue = []
        rest = cur & ~base
        while rest:
            low = rest & -rest
            queue.append(low.bit_length() - 1)
            rest ^= low
        pair_index = self.pair_index
        while queue:
            b = queue.pop()
            i, j = self.src[b], self.dst[b]
            implied = self.conj_mask[b] | self.restr_mask[b]
            m = cur & self.out_of[j]
            while m:
                low = m & -m
                k = self.dst[low.bit_length() - 1]
                m ^= low
                if i != k:
                    implied |= 1 << pair_index[(i, k)]
            m = cur & self.into[i]
            while m:
                low = m & -m
                h = self.src[low.bit_length() - 1]
                m ^= low
                if h != j:
                    implied |= 1 << pair_index[(h, j)]
            new = implied & ~cur
            cur |= new
            while new:
                low = new & -new
                queue.append(low.bit_length() - 1)
                new ^= low
        return cur

    def is_closed(self, bits):
        """Direct validation: conjugation-, restriction-, transitivity-closed."""
        for b in range(len(self.pairs)):
            if (bits >> b) & 1:
                if self.conj_mask[b] & ~bits:
                    return False
                if self.restr_mask[b] & ~bits:
                    return False
                i, j = self.pairs[b]
                m = bits & self.out_of[j]
                while m:
                    low = m & -m
                    k = self.dst[low.bit_length() - 1]
                    m ^= low
                    if i != k and not (bits >> self.pair_index[(i, k)]) & 1:
                        return False
        return True


_CONTEXTS = {}


def _context(lattice):
    ctx = _CONTEXTS.get(id(lattice))
    if ctx is None:
        ctx = _LatticeContext(lattice)
        _CONTEXTS[id(lattice)] = ctx
    return ctx


class TransferSystem:
    """An immutable transfer system over a SubgroupLattice."""

    def __init__(self, lattice, bits):
        self.lattice = lattice
        self.bits = bits
        ctx = _context(lattice)
        self._ctx = ctx
        self._edge_set = frozenset(ctx.pairs[b] for b in range(len(ctx.pairs)) if (bits >> b) & 1)

    # -- construction -------------------------------------------------------

    @staticmethod
    def trivial(lattice):
        return TransferSystem(lattice, 0)

    @staticmethod
    def complete(lattice):
        ctx = _context(lattice)
        return TransferSystem(lattice, ctx.full)

    @staticmethod
    def from_edges(lattice, edges):
        """Validate a fully specified edge set (no closure is applied)."""
        ctx = _context(lattice)
        bits = 0
        for (i, j) in edges:
            if i == j:
                continue
            if (i, j) not in ctx.pair_index:
                raise BadEdge(f"{lattice.describe(i)} -> {lattice.describe(j)} does not refine inclusion")
            bits |= 1 << ctx.pair_index[(i, j)]
        ts = TransferSystem(lattice, bits)
        ts.validate()
        return ts

    # -- queries -------------------------------------------------------------

    def relates(self, i, j):
        return i == j or (i, j) in self._edge_set

    def edges(self):
        return sorted(self._edge_set)

    def edge_count(self):
        return len(self._edge_set)

    def key(self):
        """Deterministic sort key: edge count, then the flattened edge matrix."""
        n = self.lattice.n
        flat = tuple((i, j) in self._edge_set for i in range(n) for j in range(n))
        return (len(self._edge_set), flat)

    def leq(self, other):
        self._same_lattice(other)
        return self.bits | other.bits == other.bits

    def validate(self):
        ctx = self._ctx
        if not ctx.is_closed(self.bits):
            raise BadEdge("edge set is not closed under the transfer-system axioms")

    def _same_lattice(self, other):
        if self.lattice is not other.lattice:
            raise LatticeMismatch("transfer systems on different lattices")

    def __eq__(self, other):
        return isinstance(other, TransferSystem) and self.lattice is other.lattice and self.bits == other.bits

    def __hash__(self):
        return hash((id(self.lattice), self.bits))

    def __repr__(self):
        lat = self.lattice
        es = ", ".join(f"{lat.describe(i)}->{lat.describe(j)}" for i, j in self.edges())
        return f"TransferSystem[{es or 'trivial'}]"


def closure(lattice, seed_edges):
    """Least transfer system containing the seed edges (given as index pairs)."""
    ctx = _context(lattice)
    bits = 0
    for (i, j) in seed_edges:
        if i == j:
            continue
        if (i, j) not in ctx.pair_index:
            raise BadEdge(f"seed {lattice.describe(i)} -> {lattice.describe(j)} does not refine inclusion")
        bits |= 1 << ctx.pair_index[(i, j)]
    return TransferSystem(lattice, ctx.closure_bits(bits))


def enumerate_all(lattice, bound=24, max_systems=None):
    """All transfer systems on the lattice, sorted by (edge count, edge matrix).

    Breadth-first closure search: every system is the closure of its own edge
    set, so repeatedly closing one added edge-class reaches everything.  Some
    order-8 lattices are already out of reach (the rank-3 elementary abelian
    2-group has over 10^6 systems); ``max_systems`` guards against that.
    """
    if lattice.group.order > bound:
        raise BoundExceeded(f"group order {lattice.group.order} above bound {bound}")
    ctx = _context(lattice)
    seen = {0}
    frontier = [0]
    while frontier:
        new = []
        for bits in frontier:
            for cls in ctx.pair_classes:
                if cls & ~bits:
                    ext = ctx.closure_bits(cls, base=bits)
                    if ext not in seen:
                        seen.add(ext)
                        new.append(ext)
                        if max_systems is not None and len(seen) > max_systems:
                            raise BoundExceeded(f"more than {max_systems} transfer systems")
        frontier = new
    systems = [TransferSystem(lattice, b) for b in seen]
    systems.sort(key=TransferSystem.key)
    return systems


def closed_seed_family(lattice, max_seed_classes=2):
    """Deterministic family: closures of all seed sets of at most
    ``max_seed_classes`` edge classes (a structured sample for huge lattices)."""
    ctx = _context(lattice)
    seen = {0}
    for r in range(1, max_seed_classes + 1):
        for combo in itertools.combinations(ctx.pair_classes, r):
            bits = 0
            for cls in combo:
                bits |= cls
            seen.add(ctx.closure_bits(bits))
    systems = [TransferSystem(lattice, b) for b in seen]
    systems.sort(key=TransferSystem.key)
    return systems


def meet(t1, t2):
    t1._same_lattice(t2)
    return TransferSystem(t1.lattice, t1.bits & t2.bits)


def join(t1, t2):
    t1._same_lattice(t2)
    return TransferSystem(t1.lattice, t1._ctx.closure_bits(t1.bits | t2.bits))


def lattice_ops(t1, t2):
    return meet(t1, t2), join(t1, t2)


# ---------------------------------------------------------------------------
# compatibility
# ---------------------------------------------------------------------------

def is_compatible(t1, t2):
    """Transfer-level compatibility of the ordered pair (t1, t2).

    True iff t1 <= t2 and for every edge K->H of t1 and every L <= H with
    K^L -> K in t2, also L -> H in t2.  Returns (ok, witness) where witness
    is the first failing (K, H, L) index triple in canonical order, or None.
    """
    t1._same_lattice(t2)
    lat = t1.lattice
    if not t1.leq(t2):
        for (i, j) in t1.edges():
            if not t2.relates(i, j):
                return False, (i, j, i)
    for (k, h) in t1.edges():
        for l in range(lat.n):
            if not lat.leq[l][h]:
                continue
            if t2.relates(lat.meet(k, l), k) and not t2.relates(l, h):
                return False, (k, h, l)
    return True, None


def is_saturated(t):
    """Self-compatibility; equivalent to the two-out-of-three property."""
    ok, _ = is_compatible(t, t)
    return ok


def two_out_of_three(t):
    """If K -> L and K -> H with L <= H, then L -> H (independent check)."""
    lat = t.lattice
    for (k, h) in t.edges():
        for l in range(lat.n):
            if lat.leq[k][l] and lat.leq[l][h] and t.relates(k, l) and not t.relates(l, h):
                return False
    return True


def admits(t, h_idx, X):
    """Indexing-system membership: every orbit stabilizer S of X has S -> H."""
    lat = t.lattice
    assert lat.leq[lat.index_of(X.acting)][h_idx] or lat.index_of(X.acting) == h_idx
    for stab_elems, _mult in orbit_type(X):
        s_idx = lat.index[stab_elems]
        if not t.relates(s_idx, h_idx):
            return False
    return True


class IndexingSystemView:
    """The indexing system of a transfer system: per subgroup H, the finite
    H-sets all of whose orbits H/S have S -> H."""

    def __init__(self, base):
        self.base = base

    def contains(self, H, X):
        """Whether the H-set X is admissible (H a subgroup or lattice index)."""
        lat = self.base.lattice
        h_idx = H if isinstance(H, int) else lat.index_of(H)
        return admits(self.base, h_idx, X)

    def admissible_orbit_types(self, h_idx):
        """Indices of subgroups S <= H with S -> H (the generating orbits H/S)."""
        lat = self.base.lattice
        return [i for i in lat.below(h_idx) if self.base.relates(i, h_idx)]


def compatibility_oracle(t1, t2, bound=3, carrier_cap=10**6):
    """Bounded decision procedure for the coinduction-level definition.

    For every edge K->H of t1 and every K-set X assembled from t2-admissible
    K-orbit types with each type used at most ``bound`` times, checks that
    every orbit of the coinduced H-set Set^K(H, X) is t2-admissible.
    """
    t1._same_lattice(t2)
    if bound < 1:
        raise BoundExceeded("bound must be >= 1")
    lat = t1.lattice
    if not t1.leq(t2):
        return False
    for (k_idx, h_idx) in t1.edges():
        K = lat.subgroup(k_idx)
        H = lat.subgroup(h_idx)
        n = len(H.elems) // len(K.elems)
        # admissible K-orbit types, one per conjugacy class of subgroups of K
        seen_classes = set()
        orbit_gsets = []
        for s_idx in lat.below(k_idx):
            if not t2.relates(s_idx, k_idx):
                continue
            # conjugacy class within K
            S = lat.subgroup(s_idx)
            G = lat.group
            rep = min(tuple(sorted(G.conj(h, s) for s in S.elems)) for h in K.elems)
            if rep in seen_classes:
                continue
            seen_classes.add(rep)
            orbit_gsets.append(GSet.from_coset_action(coset_action(K, lat.subgroup(lat.index[rep]))))
        for counts in itertools.product(range(bound + 1), repeat=len(orbit_gsets)):
            m = sum(c * g.size for c, g in zip(counts, orbit_gsets))
            if m == 0:
                continue
            if m ** n > carrier_cap:
                continue
            parts = []
            for c, g in zip(counts, orbit_gsets):
                parts.extend([g] * c)
            X = GSet.disjoint_union(parts)
            co = coinduce(K, H, X, carrier_cap=carrier_cap)
            if not admits(t2, h_idx, co.as_gset()):
                return False
    return True


# ---------------------------------------------------------------------------
# hulls
# ---------------------------------------------------------------------------

def hull(t):
    """The largest transfer system t' with (t', t) compatible.

    Computed as the join of the single-edge closures E <= t with (E, t)
    compatible; compatibility is downward closed and join closed in the first
    argument, so this join is the maximum.
    """
    lat = t.lattice
    ctx = t._ctx
    acc = 0
    for (i, j) in t.edges():
        e = closure(lat, [(i, j)])
        if e.leq(t) and is_compatible(e, t)[0]:
            acc = ctx.closure_bits(acc | e.bits)
    result = TransferSystem(lat, acc)
    ok, _ = is_compatible(result, t)
    assert ok, "hull join failed compatibility"
    return result


def brute_force_hull(t, all_systems):
    """Scan a full enumeration for the maximal first argument (test oracle)."""
    best = None
    for cand in all_systems:
        if cand.leq(t) and is_compatible(cand, t)[0]:
            if best is None or best.leq(cand):
                best = cand
    return best


# ---------------------------------------------------------------------------
# J-local systems
# ---------------------------------------------------------------------------

def j_local(lattice, J):
    """The saturated system with K -> H iff H meets every conjugate of J inside K."""
    G = lattice.group
    j_idx = lattice.index_of(J)
    conjugates = {lattice.conj_index(j_idx, g) for g in G.elements()}
    edges = []
    for i in range(lattice.n):
        for j in range(lattice.n):
            if i == j or not lattice.leq[i][j]:
                continue
            if all(lattice.leq[lattice.meet(j, c)][i] for c in conjugates):
                edges.append((i, j))
    t = TransferSystem.from_edges(lattice, edges)
    assert is_saturated(t), "J-local system must be saturated"
    return t
