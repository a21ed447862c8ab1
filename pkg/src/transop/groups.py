"""Finite groups as multiplication tables, with subgroup lattices, coset
actions, graph subgroups, G-sets, and explicit coinduction.

Elements are integers 0..order-1 indexing rows of the Cayley table.  All
values here are immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import blocks
from .errors import BoundExceeded, NotAGroup, NotASubchain, UnsupportedSpec


class FiniteGroup:
    """A group given by its Cayley table; table[a][b] is the product a*b."""

    def __init__(self, table, names=None, label="group"):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.label = label
        if names is None:
            names = tuple(str(i) for i in range(self.order))
        self.names = tuple(names)
        self.identity = _find_identity(self.table)
        self.inv = tuple(_row_inverse(self.table, a, self.identity) for a in range(self.order))
        self._lattice = None

    def mul(self, a, b):
        return self.table[a][b]

    def inverse(self, a):
        return self.inv[a]

    def conj(self, g, h):
        """g * h * g^-1."""
        return self.table[self.table[g][h]][self.inv[g]]

    def elements(self):
        return range(self.order)

    def lattice(self):
        if self._lattice is None:
            self._lattice = SubgroupLattice(self)
        return self._lattice

    def __repr__(self):
        return f"FiniteGroup({self.label}, order={self.order})"


def _find_identity(table):
    n = len(table)
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            return e
    raise NotAGroup("no identity element")


def _row_inverse(table, a, e):
    for b in range(len(table)):
        if table[a][b] == e and table[b][a] == e:
            return b
    raise NotAGroup("no inverse", witness=a)


def build_group(table, names=None, label="group"):
    """Validate a Cayley table and wrap it as a FiniteGroup.

    Associativity is checked first so a bad table reports a witness triple;
    identity and inverses are checked afterwards.
    """
    n = len(table)
    rows = []
    for row in table:
        row = list(row)
        if len(row) != n:
            raise NotAGroup("table is not square")
        for x in row:
            if not (0 <= int(x) < n):
                raise NotAGroup("entry out of range", witness=x)
        rows.append([int(x) for x in row])
    t = np.array(rows, dtype=np.int64)
    left = t[t, :]        # left[a,b,c]  = t[t[a,b], c]
    right = t[:, t]       # right[a,b,c] = t[a, t[b,c]]
    bad = np.argwhere(left != right)
    if len(bad):
        a, b, c = (int(v) for v in bad[0])
        raise NotAGroup("associativity fails", witness=(a, b, c))
    # identity and inverses are found (or rejected) inside FiniteGroup
    return FiniteGroup(rows, names=names, label=label)


# ---------------------------------------------------------------------------
# named group constructors (deterministic element orderings, documented)
# ---------------------------------------------------------------------------

def cyclic(n):
    """C_n, elements = residues 0..n-1 under addition; identity 0."""
    if n < 1:
        raise UnsupportedSpec(f"cyclic({n})")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, names=[str(i) for i in range(n)], label=f"C{n}")


def dihedral(n):
    """D_n of order 2n; element i + n*e is r^i s^e, identity 0 (= r^0)."""
    if n < 1:
        raise UnsupportedSpec(f"dihedral({n})")

    def mul(x, y):
        i, e = x % n, x // n
        j, f = y % n, y // n
        if e == 0:
            return (i + j) % n + n * f
        return (i - j) % n + n * (1 - f)

    table = [[mul(x, y) for y in range(2 * n)] for x in range(2 * n)]
    names = [f"r{i}" for i in range(n)] + [f"r{i}s" for i in range(n)]
    return FiniteGroup(table, names=names, label=f"D{n}")


def symmetric(n):
    """S_n (n <= 5), elements = permutations of 0..n-1 in lex order of their
    one-line images; the identity is index 0.  Product = composition f(g(x))."""
    if not (1 <= n <= 5):
        raise UnsupportedSpec(f"symmetric({n}) supports 1 <= n <= 5")
    perms = blocks.all_perms(n)
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[blocks.compose(p, q)] for q in perms] for p in perms]
    names = ["".join(map(str, p)) for p in perms]
    return FiniteGroup(table, names=names, label=f"S{n}")


_Q8_NAMES = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")


def quaternion8():
    """Q_8 with elements ordered 1, -1, i, -i, j, -j, k, -k."""
    # encode x as (sign, axis) with axis in {1,i,j,k}
    def dec(x):
        return (x % 2, x // 2)  # (neg?, axis 0..3)

    def enc(neg, axis):
        return axis * 2 + neg

    # axis multiplication table for {1,i,j,k}: (axis, axis) -> (neg, axis)
    ax = {
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
        (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
        (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
    }

    def mul(x, y):
        nx, axx = dec(x)
        ny, axy = dec(y)
        neg, axis = ax[(axx, axy)]
        return enc((nx + ny + neg) % 2, axis)

    table = [[mul(x, y) for y in range(8)] for x in range(8)]
    return build_group(table, names=_Q8_NAMES, label="Q8")


def product(g1, g2):
    """Direct product; element a*|G2| + b is the pair (a, b), identity (e, e)."""
    n1, n2 = g1.order, g2.order

    def mul(x, y):
        a1, b1 = divmod(x, n2)
        a2, b2 = divmod(y, n2)
        return g1.mul(a1, a2) * n2 + g2.mul(b1, b2)

    table = [[mul(x, y) for y in range(n1 * n2)] for x in range(n1 * n2)]
    names = [f"{g1.names[a]}|{g2.names[b]}" for a in range(n1) for b in range(n2)]
    return FiniteGroup(table, names=names, label=f"{g1.label}x{g2.label}")


def named_group(spec):
    """Build a group from a spec string.

    Grammar: ``cyclic(n)``, ``dihedral(n)``, ``symmetric(n)``, ``quaternion8``,
    ``product(spec, spec)``.  The shorthand ``name:n`` is accepted for the
    unary families, e.g. ``symmetric:3``.
    """
    s = spec.strip()
    if ":" in s and "(" not in s:
        head, _, arg = s.partition(":")
        s = f"{head}({arg})"
    name, args = _parse_spec(s)
    if name == "cyclic":
        return cyclic(_one_int(args, s))
    if name == "dihedral":
        return dihedral(_one_int(args, s))
    if name == "symmetric":
        return symmetric(_one_int(args, s))
    if name == "quaternion8":
        if args:
            raise UnsupportedSpec(s)
        return quaternion8()
    if name == "product":
        if len(args) != 2:
            raise UnsupportedSpec(s)
        return product(named_group(args[0]), named_group(args[1]))
    raise UnsupportedSpec(s)


def _one_int(args, s):
    if len(args) != 1:
        raise UnsupportedSpec(s)
    try:
        return int(args[0])
    except ValueError:
        raise UnsupportedSpec(s) from None


def _parse_spec(s):
    s = s.strip()
    if "(" not in s:
        return s, []
    if not s.endswith(")"):
        raise UnsupportedSpec(s)
    name, _, rest = s.partition("(")
    body = rest[:-1]
    args, depth, cur = [], 0, []
    for ch in body:
        if ch == "," and depth == 0:
            args.append("".join(cur))
            cur = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        cur.append(ch)
    if cur or body:
        args.append("".join(cur))
    return name.strip(), [a.strip() for a in args if a.strip()]


def groups_of_order_up_to(n):
    """All isomorphism types of groups of order <= n (n <= 8 supported)."""
    if n > 8:
        raise UnsupportedSpec("only orders <= 8 are enumerated")
    specs = {
        1: ["cyclic(1)"],
        2: ["cyclic(2)"],
        3: ["cyclic(3)"],
        4: ["cyclic(4)", "product(cyclic(2),cyclic(2))"],
        5: ["cyclic(5)"],
        6: ["cyclic(6)", "symmetric(3)"],
        7: ["cyclic(7)"],
        8: ["cyclic(8)", "product(cyclic(4),cyclic(2))",
            "product(cyclic(2),product(cyclic(2),cyclic(2)))",
            "dihedral(4)", "quaternion8"],
    }
    out = []
    for k in range(1, n + 1):
        out.extend(named_group(s) for s in specs[k])
    return out


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    group: FiniteGroup
    elems: tuple

    def __post_init__(self):
        assert self.elems == tuple(sorted(self.elems))

    @property
    def order(self):
        return len(self.elems)

    def contains(self, g):
        return g in self._elemset()

    def _elemset(self):
        return frozenset(self.elems)

    def leq(self, other):
        return self._elemset() <= other._elemset()

    def intersect(self, other):
        return Subgroup(self.group, tuple(sorted(self._elemset() & other._elemset())))

    def conjugate(self, g):
        G = self.group
        return Subgroup(G, tuple(sorted(G.conj(g, h) for h in self.elems)))

    def __repr__(self):
        names = ",".join(self.group.names[x] for x in self.elems)
        return f"<{names}>"


def subgroup_closure(G, gens):
    """Smallest subgroup containing gens, as a sorted element tuple."""
    seen = {G.identity}
    frontier = [G.identity]
    gens = list(gens)
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                for b in (G.mul(a, g), G.mul(g, a)):
                    if b not in seen:
                        seen.add(b)
                        new.append(b)
        frontier = new
    # gens themselves (handles the empty product case uniformly)
    for g in gens:
        if g not in seen:
            # unreachable: g = e*g is always produced
            seen.add(g)
    return tuple(sorted(seen))


class SubgroupLattice:
    """All subgroups of G in a canonical order, with inclusion, intersection,
    and conjugation data.

    Canonical order: by (order, element tuple).  Index 0 is the trivial
    subgroup and the last index is G itself.
    """

    def __init__(self, G):
        self.group = G
        elems_list = self._enumerate(G)
        elems_list.sort(key=lambda t: (len(t), t))
        self.subgroups = [Subgroup(G, t) for t in elems_list]
        self.index = {t: i for i, t in enumerate(elems_list)}
        n = len(self.subgroups)
        self.n = n
        self.leq = [[set(elems_list[i]) <= set(elems_list[j]) for j in range(n)] for i in range(n)]
        self.bottom = self.index[(G.identity,)]
        self.top = self.index[tuple(range(G.order))]
        self._meet = {}
        self._conj = {}
        for i, t in enumerate(elems_list):
            s = set(t)
            for j in range(i, n):
                inter = tuple(sorted(s & set(elems_list[j])))
                self._meet[(i, j)] = self._meet[(j, i)] = self.index[inter]
            for g in G.elements():
                conj = tuple(sorted(G.conj(g, h) for h in t))
                self._conj[(i, g)] = self.index[conj]
        self.class_of = self._conjugacy_classes()
        self.classes = []
        for i in range(n):
            if self.class_of[i] == len(self.classes):
                self.classes.append(tuple(sorted(j for j in range(n) if self.class_of[j] == self.class_of[i])))

    @staticmethod
    def _enumerate(G):
        found = {subgroup_closure(G, [])}
        frontier = list(found)
        while frontier:
            new = []
            for t in frontier:
                inside = set(t)
                for g in G.elements():
                    if g in inside:
                        continue
                    ext = subgroup_closure(G, list(t) + [g])
                    if ext not in found:
                        found.add(ext)
                        new.append(ext)
            frontier = new
        return list(found)

    def subgroup(self, i):
        return self.subgroups[i]

    def index_of(self, sub):
        return self.index[sub.elems]

    def meet(self, i, j):
        return self._meet[(i, j)]

    def conj_index(self, i, g):
        return self._conj[(i, g)]

    def _conjugacy_classes(self):
        cls = [-1] * self.n
        next_id = 0
        for i in range(self.n):
            if cls[i] != -1:
                continue
            orbit = {self._conj[(i, g)] for g in self.group.elements()}
            for j in sorted(orbit):
                cls[j] = next_id
            next_id += 1
        return cls

    def class_members(self, i):
        return self.classes[self.class_of[i]]

    def below(self, j):
        """Indices of subgroups contained in subgroup j."""
        return [i for i in range(self.n) if self.leq[i][j]]

    def describe(self, i):
        s = self.subgroups[i]
        return "{" + ",".join(self.group.names[x] for x in s.elems) + "}"


# ---------------------------------------------------------------------------
# coset actions and cores
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CosetStructure:
    """Left cosets of K in H with the action homomorphism alpha: H -> Sigma_n.

    Representatives: reps[0] is the identity; the rest are taken in increasing
    element order, so each later rep is the least element of its coset.
    """

    H: Subgroup
    K: Subgroup
    reps: tuple
    alpha: dict  # h -> permutation of range(n), image convention
    core: Subgroup

    @property
    def n(self):
        return len(self.reps)

    def coset_index(self, h):
        """Index i with h*K = reps[i]*K."""
        G = self.H.group
        kset = self.K._elemset()
        for i, r in enumerate(self.reps):
            if G.mul(G.inverse(r), h) in kset:
                return i
        raise AssertionError("element not in any coset")


def coset_action(H, K):
    """The permutation action of H on H/K, its kernel (the core), and reps."""
    if not K.leq(H):
        raise NotASubchain(f"{K} is not contained in {H}")
    G = H.group
    kset = K._elemset()
    reps = [G.identity]
    covered = set(K.elems)
    for h in H.elems:
        if h not in covered:
            reps.append(h)
            covered.update(G.mul(h, k) for k in K.elems)
    n = len(reps)
    rep_of = {}
    for i, r in enumerate(reps):
        for k in K.elems:
            rep_of[G.mul(r, k)] = i
    alpha = {}
    for h in H.elems:
        alpha[h] = tuple(rep_of[G.mul(h, r)] for r in reps)
    ident = blocks.identity(n)
    kernel = tuple(sorted(h for h in H.elems if alpha[h] == ident))
    core = Subgroup(G, kernel)
    # independent characterization: the intersection of all H-conjugates of K
    inter = set(G.elements())
    for h in H.elems:
        inter &= {G.conj(h, k) for k in K.elems}
    assert tuple(sorted(inter)) == kernel, "core mismatch"
    return CosetStructure(H=H, K=K, reps=tuple(reps), alpha=alpha, core=core)


# ---------------------------------------------------------------------------
# G-sets
# ---------------------------------------------------------------------------

class GSet:
    """A finite set with an action of a subgroup H, stored as permutations."""

    def __init__(self, acting, size, perms):
        self.acting = acting
        self.size = size
        self.perms = dict(perms)  # element -> image tuple over range(size)
        G = acting.group
        ident = blocks.identity(size)
        assert self.perms[G.identity] == ident, "identity must act trivially"
        for a in acting.elems:
            for b in acting.elems:
                assert self.perms[G.mul(a, b)] == blocks.compose(self.perms[a], self.perms[b]), \
                    "action is not a homomorphism"

    def act(self, g, x):
        return self.perms[g][x]

    @staticmethod
    def trivial(H, m):
        ident = blocks.identity(m)
        return GSet(H, m, {h: ident for h in H.elems})

    @staticmethod
    def from_coset_action(cs):
        return GSet(cs.H, cs.n, {h: cs.alpha[h] for h in cs.H.elems})

    @staticmethod
    def regular(H):
        """H acting on itself by left translation (points = positions in H.elems)."""
        G = H.group
        pos = {h: i for i, h in enumerate(H.elems)}
        perms = {h: tuple(pos[G.mul(h, x)] for x in H.elems) for h in H.elems}
        return GSet(H, len(H.elems), perms)

    @staticmethod
    def disjoint_union(parts):
        assert parts
        H = parts[0].acting
        sizes = [p.size for p in parts]
        starts = blocks.block_starts(sizes)
        perms = {}
        for h in H.elems:
            img = []
            for p, st in zip(parts, starts):
                img.extend(st + p.perms[h][x] for x in range(p.size))
            perms[h] = tuple(img)
        return GSet(H, sum(sizes), perms)

    def orbits(self):
        seen = [False] * self.size
        out = []
        for x in range(self.size):
            if seen[x]:
                continue
            orbit = {x}
            frontier = [x]
            while frontier:
                y = frontier.pop()
                for h in self.acting.elems:
                    z = self.perms[h][y]
                    if z not in orbit:
                        orbit.add(z)
                        frontier.append(z)
            for y in orbit:
                seen[y] = True
            out.append(tuple(sorted(orbit)))
        return out

    def stabilizer(self, x):
        G = self.acting.group
        return Subgroup(G, tuple(sorted(h for h in self.acting.elems if self.perms[h][x] == x)))


def orbit_type(X):
    """Multiset of orbit stabilizers up to conjugacy in the acting subgroup.

    Returns a sorted list of (representative element tuple, multiplicity);
    the representative is the least conjugate of the stabilizer.
    """
    H = X.acting
    G = H.group
    counts = {}
    for orbit in X.orbits():
        stab = X.stabilizer(orbit[0])
        rep = min(tuple(sorted(G.conj(h, s) for s in stab.elems)) for h in H.elems)
        counts[rep] = counts.get(rep, 0) + 1
    return sorted(counts.items())


def burnside_orbit_count(X):
    """(1/|H|) * sum over h of |Fix(h)|."""
    H = X.acting
    total = sum(sum(1 for x in range(X.size) if X.perms[h][x] == x) for h in H.elems)
    assert total % len(H.elems) == 0
    return total // len(H.elems)


# ---------------------------------------------------------------------------
# graph subgroups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GraphSubgroup:
    """{(h, phi(h))} <= G x Sigma_n for an H-action phi on n ordered points.

    The graph depends on the chosen ordering of the H-set; different orderings
    give conjugate subgroups and callers compare via a conjugacy test.
    """

    base: Subgroup
    degree: int
    phi: tuple  # pairs (h, perm), sorted by h

    def pairs(self):
        return self.phi

    def perm_of(self, h):
        for g, p in self.phi:
            if g == h:
                return p
        raise KeyError(h)

    @property
    def order(self):
        return len(self.phi)


def graph_subgroup(H, X):
    assert X.acting.elems == H.elems
    pairs = tuple(sorted((h, X.perms[h]) for h in H.elems))
    gamma = GraphSubgroup(base=H, degree=X.size, phi=pairs)
    assert gamma.order == len(H.elems)
    return gamma


# ---------------------------------------------------------------------------
# coinduction  Set^K(H, X) ~= X^{[H:K]}
# ---------------------------------------------------------------------------

class CoinducedGSet:
    """The coinduced H-set on tuples X^n, n = [H:K], with the explicit action

        theta(h) = (tau(k_{1,h}) (x) ... (x) tau(k_{n,h})) o sigma(h)_x(m..m)

    where sigma is the coset action of H on H/K and k_{i,h} in K is the unique
    element with  h_i^{-1} h = k_{i,h} * h_{sigma(h)^{-1}(i)}^{-1}.
    """

    def __init__(self, K, H, X, carrier_cap=10**6):
        if not K.leq(H):
            raise NotASubchain(f"{K} not <= {H}")
        assert X.acting.elems == K.elems, "X must be a K-set"
        self.K, self.H, self.X = K, H, X
        self.cosets = coset_action(H, K)
        self.n = self.cosets.n
        self.m = X.size
        if self.m ** self.n > carrier_cap:
            raise BoundExceeded(f"carrier {self.m}^{self.n} exceeds cap {carrier_cap}")
        self.size = self.m ** self.n
        G = H.group
        self.k_factors = {}
        kset = K._elemset()
        for h in H.elems:
            sigma_inv = blocks.inverse(self.cosets.alpha[h])
            for i in range(self.n):
                hi = self.cosets.reps[i]
                target = self.cosets.reps[sigma_inv[i]]
                k = G.mul(G.mul(G.inverse(hi), h), target)
                assert k in kset, "k_{i,h} identity fails"
                # defining identity: h_i^{-1} h = k * h_{sigma^{-1}(i)}^{-1}
                assert G.mul(G.inverse(hi), h) == G.mul(k, G.inverse(target))
                self.k_factors[(i, h)] = k
        self._theta = {}

    def theta(self, h):
        """The permutation of range(m^n) given by the displayed formula."""
        if h not in self._theta:
            taus = [self.X.perms[self.k_factors[(i, h)]] for i in range(self.n)]
            shape = (self.m,) * self.n
            perm = blocks.compose(blocks.otimes(taus, shape),
                                  blocks.sigma_times(self.cosets.alpha[h], shape))
            self._theta[h] = perm
        return self._theta[h]

    def act_tuple(self, h, a):
        """Action on an explicit tuple (a_1..a_n) without going through lex codes."""
        sigma_inv = blocks.inverse(self.cosets.alpha[h])
        return tuple(self.X.perms[self.k_factors[(i, h)]][a[sigma_inv[i]]]
                     for i in range(self.n))

    def as_gset(self):
        return GSet(self.H, self.size, {h: self.theta(h) for h in self.H.elems})


def coinduce(K, H, X, carrier_cap=10**6):
    return CoinducedGSet(K, H, X, carrier_cap=carrier_cap)
