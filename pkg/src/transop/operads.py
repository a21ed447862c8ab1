"""Symmetric operads in sets with machine-checkable axioms.

Covers: operads built from monoids (levels M^n with lexicographic
composition), intersection monoids and their Sigma-free suboperads of
pairwise-disjoint tuples, pairings of monoids, the induced operad pairing
lambda, and the full pairing-axiom checker (a)-(h).

Level elements of a monoid operad are tuples of carrier elements; the single
point of level 0 is the empty tuple.  Right symmetric actions follow the
package-wide convention (x . sigma)(i) = x(sigma(i)).
"""

from __future__ import annotations

import collections
import itertools
import random
from dataclasses import dataclass, field

from . import blocks
from .errors import EnumerationTooLarge, NotClosed, PairingInvalid


class FiniteMonoid:
    """A monoid given by its multiplication table."""

    def __init__(self, table, identity=None, label="monoid"):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.label = label
        for row in self.table:
            if len(row) != self.order:
                raise ValueError("table is not square")
        for a in range(self.order):
            for b in range(self.order):
                for c in range(self.order):
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                        raise ValueError(f"not associative at {(a, b, c)}")
        if identity is None:
            identity = next(e for e in range(self.order)
                            if all(self.table[e][x] == x == self.table[x][e] for x in range(self.order)))
        self.identity = identity
        assert all(self.table[identity][x] == x == self.table[x][identity] for x in range(self.order))

    def mul(self, a, b):
        return self.table[a][b]

    def elements(self):
        return range(self.order)

    def is_commutative(self):
        return all(self.table[a][b] == self.table[b][a]
                   for a in range(self.order) for b in range(self.order))

    def __repr__(self):
        return f"FiniteMonoid({self.label}, order={self.order})"


BOOLEAN_AND = FiniteMonoid([[0, 0], [0, 1]], label="bool-and")   # identity 1
BOOLEAN_OR = FiniteMonoid([[0, 1], [1, 1]], label="bool-or")     # identity 0


class MonoidHandle:
    """Uniform view of a monoid carrier: finite table or computable elements.

    Computable carriers supply ``mul``, ``one``, and ``sample(rng)``; elements
    must be hashable with value equality.
    """

    def __init__(self, mul, one, elements=None, sample=None, label="carrier"):
        self.mul = mul
        self.one = one
        self._elements = elements
        self._sample = sample
        self.label = label

    @staticmethod
    def from_finite(m):
        return MonoidHandle(mul=m.mul, one=m.identity,
                            elements=tuple(m.elements()), label=m.label)

    @property
    def finite(self):
        return self._elements is not None

    def elements(self):
        if self._elements is None:
            raise EnumerationTooLarge(f"{self.label} has no finite enumeration")
        return self._elements

    def sample(self, rng):
        if self._elements is not None:
            return rng.choice(self._elements)
        return self._sample(rng)


@dataclass
class IntersectionMonoidSpec:
    """A monoid with a symmetric disjointness relation ``vee``."""

    carrier: MonoidHandle
    vee: object  # callable (x, y) -> bool
    disjoint_seed: tuple = None  # one disjoint pair, for constructive sampling

    def disjoint_family(self, n, rng=None):
        """n pairwise-disjoint elements: x, yx, y^2 x, ... from a seed x vee y."""
        if n <= 0:
            return []
        if n == 1:
            x = self.carrier.sample(rng) if rng else (
                self.carrier.elements()[0] if self.carrier.finite else self.disjoint_seed[0])
            return [x]
        if self.disjoint_seed is None:
            if not self.carrier.finite:
                raise EnumerationTooLarge("no disjoint seed available")
            for x, y in itertools.product(self.carrier.elements(), repeat=2):
                if self.vee(x, y):
                    self.disjoint_seed = (x, y)
                    break
            else:
                return None  # degenerate relation: no disjoint pair exists
        x, y = self.disjoint_seed
        out, cur = [], x
        for _ in range(n):
            out.append(cur)
            cur = self.carrier.mul(y, cur)
        for a, b in itertools.combinations(out, 2):
            assert self.vee(a, b), "disjoint family construction failed"
        return out

    def check_axioms(self, samples=2000, seed=0):
        """Reflexive complement and two-sided multiplication stability.

        Exhaustive for finite carriers, seeded sampling otherwise.  Returns a
        list of violation records (empty = pass).
        """
        bad = []
        mul, vee = self.carrier.mul, self.vee
        if self.carrier.finite:
            elems = self.carrier.elements()
            for x in elems:
                if vee(x, x):
                    bad.append(("reflexive-complement", x))
            for x1, x2, y1, y2 in itertools.product(elems, repeat=4):
                if vee(x1, x2) and not vee(mul(x1, y1), mul(x2, y2)):
                    bad.append(("right-stability", (x1, x2, y1, y2)))
            for x1, x2, y in itertools.product(elems, repeat=3):
                if vee(x1, x2) and not vee(mul(y, x1), mul(y, x2)):
                    bad.append(("left-stability", (x1, x2, y)))
            return bad
        rng = random.Random(seed)
        for _ in range(samples):
            x = self.carrier.sample(rng)
            if vee(x, x):
                bad.append(("reflexive-complement", x))
                continue
            x1, x2 = self._sample_disjoint(rng)
            y1, y2 = self.carrier.sample(rng), self.carrier.sample(rng)
            if not vee(mul(x1, y1), mul(x2, y2)):
                bad.append(("right-stability", (x1, x2, y1, y2)))
            if not vee(mul(y1, x1), mul(y1, x2)):
                bad.append(("left-stability", (x1, x2, y1)))
        return bad

    def _sample_disjoint(self, rng):
        fam = self.disjoint_family(2, rng)
        a = self.carrier.sample(rng)
        b = self.carrier.sample(rng)
        # mix random elements into the seed family to vary the disjoint pair
        return self.carrier.mul(fam[0], a), self.carrier.mul(fam[1], b)


# ---------------------------------------------------------------------------
# set operads
# ---------------------------------------------------------------------------

class SetOperad:
    """A reduced symmetric operad in sets with enumerable or samplable levels.

    ``gamma(x, ys)`` composes, ``sigma_act(x, sigma)`` is the right symmetric
    action, ``identity`` is the unit of level 1.  ``g_action(g, x)`` and
    ``group`` are present on equivariant operads.
    """

    def __init__(self, label, identity, gamma, sigma_act, arity_of,
                 enumerate_level=None, sample_level=None, level_contains=None,
                 group=None, g_action=None, transporter=None, level_size=None):
        self.label = label
        self.identity = identity
        self.gamma = gamma
        self.sigma_act = sigma_act
        self.arity_of = arity_of
        self._enumerate_level = enumerate_level
        self._sample_level = sample_level
        self.level_contains = level_contains
        self.group = group
        self.g_action = g_action
        self.transporter = transporter
        self._level_size = level_size

    def level_size(self, n):
        if self._level_size is not None:
            return self._level_size(n)
        return len(self.level(n))

    def level(self, n, cap=None):
        if self._enumerate_level is None:
            raise EnumerationTooLarge(f"{self.label} levels are not enumerable")
        out = self._enumerate_level(n)
        if cap is not None and len(out) > cap:
            raise EnumerationTooLarge(f"level {n} of {self.label} has {len(out)} elements")
        return out

    @property
    def enumerable(self):
        return self._enumerate_level is not None

    def sample_level(self, n, rng):
        if self._sample_level is not None:
            return self._sample_level(n, rng)
        lv = self.level(n)
        return rng.choice(lv)

    def point(self):
        """The unique element of level 0."""
        if self.enumerable:
            return self.level(0)[0]
        return self._sample_level(0, random.Random(0))

    def __repr__(self):
        return f"SetOperad({self.label})"


def _tuple_gamma(mul):
    def gamma(x, ys):
        out = []
        for xi, yi in zip(x, ys):
            out.extend(mul(xi, y) for y in yi)
        return tuple(out)
    return gamma


def tuple_sigma_act(x, sigma):
    """(x . sigma)(i) = x(sigma(i))."""
    return tuple(x[sigma[i]] for i in range(len(x)))


def tuple_transporter(x, y):
    """The unique sigma with x . sigma = y for tuples with distinct entries."""
    if len(x) != len(y) or collections.Counter(x) != collections.Counter(y):
        return None
    if len(set(x)) == len(x):
        pos = {v: i for i, v in enumerate(x)}
        return tuple(pos[v] for v in y)
    for sigma in blocks.all_perms(len(x)):
        if tuple_sigma_act(x, sigma) == y:
            return sigma
    return None


def operad_from_monoid(m, g_action=None, group=None):
    """The symmetric operad with level n = M^n and lexicographic composition.

    If ``g_action(g, element)`` (an action by monoid automorphisms fixing the
    identity) is supplied, the operad acts coordinatewise and is a G-operad.
    """
    handle = m if isinstance(m, MonoidHandle) else MonoidHandle.from_finite(m)

    def enumerate_level(n):
        return [tuple(t) for t in itertools.product(handle.elements(), repeat=n)]

    def sample_level(n, rng):
        return tuple(handle.sample(rng) for _ in range(n))

    coord_g_action = None
    if g_action is not None:
        def coord_g_action(g, x):
            return tuple(g_action(g, v) for v in x)

    return SetOperad(
        label=f"O({handle.label})",
        identity=(handle.one,),
        gamma=_tuple_gamma(handle.mul),
        sigma_act=tuple_sigma_act,
        arity_of=len,
        enumerate_level=enumerate_level if handle.finite else None,
        sample_level=sample_level,
        level_contains=lambda n, x: len(x) == n,
        group=group,
        g_action=coord_g_action,
        transporter=tuple_transporter,
        level_size=(lambda n: len(handle.elements()) ** n) if handle.finite else None,
    )


def suboperad_vee(spec, validate=True, samples=2000, seed=0):
    """The Sigma-free suboperad of pairwise-disjoint tuples of an intersection
    monoid.  Compositions are asserted to stay disjoint (NotClosed otherwise).
    """
    if validate:
        bad = spec.check_axioms(samples=samples, seed=seed)
        if bad:
            raise PairingInvalid(f"intersection monoid axioms fail: {bad[0]}")
    handle = spec.carrier
    base_gamma = _tuple_gamma(handle.mul)

    def pairwise_disjoint(t):
        return all(spec.vee(a, b) for a, b in itertools.combinations(t, 2))

    def gamma(x, ys):
        out = base_gamma(x, ys)
        if not pairwise_disjoint(out):
            raise NotClosed((x, ys, out))
        return out

    def enumerate_level(n):
        return [t for t in itertools.product(handle.elements(), repeat=n) if pairwise_disjoint(t)]

    def sample_level(n, rng):
        fam = spec.disjoint_family(n, rng)
        if fam is None:
            raise EnumerationTooLarge("vee relation admits no disjoint tuples")
        # randomize within disjointness: right-multiply by independent samples
        out = tuple(handle.mul(f, handle.sample(rng)) for f in fam)
        if n <= 1 or pairwise_disjoint(out):
            return out
        return tuple(fam)

    return SetOperad(
        label=f"Ovee({handle.label})",
        identity=(handle.one,),
        gamma=gamma,
        sigma_act=tuple_sigma_act,
        arity_of=len,
        enumerate_level=enumerate_level if handle.finite else None,
        sample_level=sample_level,
        level_contains=lambda n, x: len(x) == n and pairwise_disjoint(x),
        transporter=tuple_transporter,
    )


# ---------------------------------------------------------------------------
# axiom checking: operads
# ---------------------------------------------------------------------------

@dataclass
class CheckReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    def record(self, axiom, witness):
        self.failures.append((axiom, witness))

    @property
    def ok(self):
        return not self.failures

    def summary(self):
        status = "pass" if self.ok else f"FAIL ({len(self.failures)})"
        return f"{status}; {self.checked} instances"

    def to_payload(self):
        return {"ok": self.ok, "checked": self.checked,
                "failures": [{"axiom": a, "witness": repr(w)} for a, w in self.failures[:10]]}


def _instances(operad_levels, cap, samples, rng):
    """Iterate element tuples over a list of (operad, arity) slots.

    Exhaustive if every slot is enumerable and the product of level sizes is
    at most cap; otherwise ``samples`` seeded draws.
    """
    enumerable = all(op.enumerable for op, _ in operad_levels)
    if enumerable:
        total = 1
        for op, n in operad_levels:
            total *= op.level_size(n)
            if total > cap:
                break
        if total <= cap:
            yield from itertools.product(*(op.level(n) for op, n in operad_levels))
            return
    for _ in range(samples):
        yield tuple(op.sample_level(n, rng) for op, n in operad_levels)


def _matrix_shapes(widths, maxv, cap, nsamples, rng):
    """Shape matrices: one row of values 0..maxv per width in ``widths``.

    Exhaustive when (maxv+1)^sum(widths) <= cap, otherwise ``nsamples`` seeded
    draws.  Rows are returned as a tuple of tuples.
    """
    total_cells = sum(widths)
    count = (maxv + 1) ** total_cells
    if count <= cap:
        for flat in itertools.product(range(maxv + 1), repeat=total_cells):
            out, pos = [], 0
            for w in widths:
                out.append(flat[pos:pos + w])
                pos += w
            yield tuple(out)
        return
    for _ in range(nsamples):
        yield tuple(tuple(rng.randint(0, maxv) for _ in range(w)) for w in widths)


def check_operad_axioms(operad, max_arity=3, max_inner=3, cap=4000, samples=40, seed=0):
    """Verify reduced/identity/associativity/symmetry on bounded shapes.

    Shapes are exhausted up to the arity bounds; elements are exhausted when
    the level product is small and sampled (seeded) otherwise.
    """
    rng = random.Random(seed)
    report = CheckReport()

    if operad.enumerable and len(operad.level(0)) != 1:
        report.record("reduced", operad.level(0))

    for k in range(0, max_arity + 1):
        for (x,) in _instances([(operad, k)], cap, samples, rng):
            report.checked += 1
            if operad.gamma(operad.identity, [x]) != x:
                report.record("identity", x)

    # associativity: z in O(j), x_l in O(n_l), y_{l,i} in O(k_{l,i})
    for j in range(0, max_arity + 1):
        for ns in itertools.product(range(0, max_inner + 1), repeat=j):
            for ks_rows in _matrix_shapes(ns, max_inner, cap=256, nsamples=12, rng=rng):
                ks_flat = [k for row in ks_rows for k in row]
                slots = [(operad, j)] + [(operad, n) for n in ns] + [(operad, k) for k in ks_flat]
                for combo in _instances(slots, cap, max(4, samples // 8), rng):
                    report.checked += 1
                    z = combo[0]
                    xs = list(combo[1:1 + j])
                    ys_flat = list(combo[1 + j:])
                    ys = []
                    pos = 0
                    for n in ns:
                        ys.append(ys_flat[pos:pos + n])
                        pos += n
                    lhs = operad.gamma(operad.gamma(z, xs), [y for grp in ys for y in grp])
                    rhs = operad.gamma(z, [operad.gamma(x, grp) for x, grp in zip(xs, ys)])
                    if lhs != rhs:
                        report.record("associativity", (z, xs, ys))

    # symmetry (i): gamma(x.sigma; ys) = gamma(x; ys o sigma^{-1}) . sigma_+
    # symmetry (ii): gamma(x; y_i . tau_i) = gamma(x; ys) . (+ tau_i)
    for n in range(1, max_arity + 1):
        for ks in itertools.product(range(0, max_inner + 1), repeat=n):
            slots = [(operad, n)] + [(operad, k) for k in ks]
            for combo in _instances(slots, cap, max(4, samples // 4), rng):
                x, ys = combo[0], list(combo[1:])
                for sigma in blocks.all_perms(n):
                    report.checked += 1
                    inv = blocks.inverse(sigma)
                    lhs = operad.gamma(operad.sigma_act(x, sigma), ys)
                    permuted = [ys[inv[i]] for i in range(n)]
                    rhs = operad.sigma_act(operad.gamma(x, permuted),
                                           blocks.sigma_plus(sigma, ks))
                    if lhs != rhs:
                        report.record("symmetry-block", (x, ys, sigma))
                        break
                taus = [rng.choice(blocks.all_perms(k)) if k else () for k in ks]
                report.checked += 1
                lhs = operad.gamma(x, [operad.sigma_act(y, t) for y, t in zip(ys, taus)])
                rhs = operad.sigma_act(operad.gamma(x, ys), blocks.oplus(taus))
                if lhs != rhs:
                    report.record("symmetry-within", (x, ys, taus))

    # equivariance, when the operad carries a group action
    if operad.group is not None and operad.g_action is not None:
        G = operad.group
        for g in G.elements():
            report.checked += 1
            if operad.g_action(g, operad.identity) != operad.identity:
                report.record("identity-not-G-fixed", g)
        for _ in range(samples):
            n = rng.randint(1, max_arity)
            ks = [rng.randint(0, max_inner) for _ in range(n)]
            x = operad.sample_level(n, rng)
            ys = [operad.sample_level(k, rng) for k in ks]
            for g in G.elements():
                report.checked += 1
                lhs = operad.gamma(operad.g_action(g, x), [operad.g_action(g, y) for y in ys])
                if lhs != operad.g_action(g, operad.gamma(x, ys)):
                    report.record("gamma-not-equivariant", (g, x, ys))
    return report


# ---------------------------------------------------------------------------
# monoid pairings and the induced operad pairing
# ---------------------------------------------------------------------------

@dataclass
class MonoidPairing:
    """xi : M x N -> N, either a plain pairing or an intersection pairing.

    In intersection mode M and N are IntersectionMonoidSpec values, centrality
    is only required for disjoint first arguments, and disjunction is added.
    """

    M: object
    N: object
    xi: object
    mode: str = "plain"  # or "intersection"

    def m_handle(self):
        return self.M.carrier if self.mode == "intersection" else _as_handle(self.M)

    def n_handle(self):
        return self.N.carrier if self.mode == "intersection" else _as_handle(self.N)


def _as_handle(m):
    return m if isinstance(m, MonoidHandle) else MonoidHandle.from_finite(m)


def check_monoid_pairing(pairing, samples=2000, seed=0):
    """Exhaustive (finite) or seeded-sample verification of the pairing axioms.

    Plain mode: identity, associativity, distributivity, centrality, plus the
    observation that N must be commutative.  Intersection mode: centrality is
    required only for disjoint m's, and the disjunction axiom is added.
    """
    M, N = pairing.m_handle(), pairing.n_handle()
    xi = pairing.xi
    rng = random.Random(seed)
    report = CheckReport()
    inter = pairing.mode == "intersection"

    def draw_pairs():
        if M.finite and N.finite:
            yield from itertools.product(M.elements(), N.elements())
        else:
            for _ in range(samples):
                yield M.sample(rng), N.sample(rng)

    for m, n in draw_pairs():
        report.checked += 1
        if xi(M.one, n) != n:
            report.record("identity-left", n)
        if xi(m, N.one) != N.one:
            report.record("identity-right", m)

    def draw(*kinds):
        # kinds: 'm' or 'n'; exhaustive over the product when finite
        pools = [M if k == "m" else N for k in kinds]
        if all(p.finite for p in pools):
            yield from itertools.product(*(p.elements() for p in pools))
        else:
            for _ in range(samples):
                yield tuple(p.sample(rng) for p in pools)

    for m1, m2, n in draw("m", "m", "n"):
        report.checked += 1
        if xi(m1, xi(m2, n)) != xi(M.mul(m1, m2), n):
            report.record("associativity", (m1, m2, n))

    for m, n1, n2 in draw("m", "n", "n"):
        report.checked += 1
        if xi(m, N.mul(n1, n2)) != N.mul(xi(m, n1), xi(m, n2)):
            report.record("distributivity", (m, n1, n2))

    if not inter:
        for m1, m2, n1, n2 in draw("m", "m", "n", "n"):
            report.checked += 1
            a = N.mul(xi(m1, n1), xi(m2, n2))
            b = N.mul(xi(m2, n2), xi(m1, n1))
            if a != b:
                report.record("centrality", (m1, m2, n1, n2))
        for n1, n2 in draw("n", "n"):
            report.checked += 1
            if N.mul(n1, n2) != N.mul(n2, n1):
                report.record("commutative-N", (n1, n2))
    else:
        if M.finite and N.finite:
            quads = [(m1, m2, n1, n2)
                     for m1, m2 in itertools.product(M.elements(), repeat=2)
                     if pairing.M.vee(m1, m2)
                     for n1, n2 in itertools.product(N.elements(), repeat=2)]
            triples = [(m, n1, n2)
                       for m in M.elements()
                       for n1, n2 in itertools.product(N.elements(), repeat=2)
                       if pairing.N.vee(n1, n2)]
        else:
            quads, triples = [], []
            for _ in range(samples):
                m1, m2 = pairing.M._sample_disjoint(rng)
                quads.append((m1, m2, N.sample(rng), N.sample(rng)))
                n1, n2 = pairing.N._sample_disjoint(rng)
                triples.append((M.sample(rng), n1, n2))
        for m1, m2, n1, n2 in quads:
            report.checked += 1
            if N.mul(xi(m1, n1), xi(m2, n2)) != N.mul(xi(m2, n2), xi(m1, n1)):
                report.record("centrality-disjoint", (m1, m2, n1, n2))
        for m, n1, n2 in triples:
            report.checked += 1
            if not pairing.N.vee(xi(m, n1), xi(m, n2)):
                report.record("disjunction", (m, n1, n2))
    return report


@dataclass
class OperadPairing:
    """An action lambda of P on Q; lam maps (p, [x_1..x_k]) to Q(prod j_r)."""

    P: SetOperad
    Q: SetOperad
    lam: object


def lambda_from_pairing(pairing, check=True, samples=400, seed=0):
    """The operad pairing induced by a monoid pairing.

    lambda(p, x_1..x_k) is the j_x-tuple whose lex-(l_1..l_k) entry is
    prod_r xi(p(r), x_r(l_r)); in intersection mode it restricts to the
    disjoint suboperads and outputs are asserted pairwise disjoint.
    """
    if check:
        rep = check_monoid_pairing(pairing, samples=samples, seed=seed)
        if not rep.ok:
            raise PairingInvalid(f"monoid pairing axioms fail: {rep.failures[0]}")
    inter = pairing.mode == "intersection"
    N = pairing.n_handle()
    xi = pairing.xi
    if inter:
        P = suboperad_vee(pairing.M, validate=False)
        Q = suboperad_vee(pairing.N, validate=False)
        nvee = pairing.N.vee
    else:
        P = operad_from_monoid(pairing.m_handle())
        Q = operad_from_monoid(pairing.n_handle())
        nvee = None

    def lam(p, xs):
        js = [len(x) for x in xs]
        out = []
        for ls in itertools.product(*(range(j) for j in js)):
            val = N.one
            for r, l in enumerate(ls):
                val = N.mul(val, xi(p[r], xs[r][l]))
            out.append(val)
        out = tuple(out)
        if inter and len(out) > 1:
            for a, b in itertools.combinations(out, 2):
                if not nvee(a, b):
                    raise PairingInvalid(f"lambda output not pairwise disjoint: {(p, xs)}")
        return out

    return OperadPairing(P=P, Q=Q, lam=lam)


def check_operad_pairing(pairing, max_k=2, max_j=2, max_i=2, cap=4000, samples=30, seed=0,
                         group_samples=10, shape_cap=256, shape_samples=10):
    """Check pairing axioms (a)-(h) on bounded shapes.

    (a) interchange with mu, (b) the nu square, (c)/(d) identities, (e)/(f)
    equivariance via sigma_times / otimes, (g)/(h) arity-zero conventions.
    Inner-arity matrices are exhausted up to ``shape_cap`` and sampled beyond
    it; elements are exhausted when the level product is at most ``cap`` and
    sampled (seeded) otherwise.  When both operads carry a G-action, lambda's
    equivariance is sampled too.
    """
    P, Q, lam = pairing.P, pairing.Q, pairing.lam
    rng = random.Random(seed)
    report = CheckReport()

    def qgamma(x, ys):
        return Q.gamma(x, ys)

    # (c) lambda(id_P; x) = x ; (d) lambda(p; id_Q..id_Q) = id_Q
    for j in range(0, max_j + 1):
        for (x,) in _instances([(Q, j)], cap, samples, rng):
            report.checked += 1
            if lam(P.identity, [x]) != x:
                report.record("c-identity", x)
    for k in range(1, max_k + 1):
        for (p,) in _instances([(P, k)], cap, samples, rng):
            report.checked += 1
            if lam(p, [Q.identity] * k) != Q.identity:
                report.record("d-identity", p)

    # (g) k = 0: lambda(*) = id_Q
    if lam(P.point(), []) != Q.identity:
        report.record("g-nullary", None)
    report.checked += 1

    # (a) lambda(mu(p; p_1..p_k); xJ_1..xJ_k) = lambda(p; lambda(p_r; xJ_r))
    for k in range(1, max_k + 1):
        for js in itertools.product(range(1, max_j + 1), repeat=k):
            for iss in _matrix_shapes(js, max_i, cap=shape_cap, nsamples=shape_samples, rng=rng):
                slots = [(P, k)] + [(P, j) for j in js]
                for row in iss:
                    slots.extend((Q, i) for i in row)
                for combo in _instances(slots, cap, max(3, samples // 6), rng):
                    report.checked += 1
                    p = combo[0]
                    prs = list(combo[1:1 + k])
                    flat = list(combo[1 + k:])
                    xjs, pos = [], 0
                    for j in js:
                        xjs.append(flat[pos:pos + j])
                        pos += j
                    lhs = lam(P.gamma(p, prs), [x for grp in xjs for x in grp])
                    rhs = lam(p, [lam(pr, grp) for pr, grp in zip(prs, xjs)])
                    if lhs != rhs:
                        report.record("a-interchange", (p, prs, xjs))

    # (b) alpha(lambda(p; x_r); prod_q lambda(p; x_q)) o nu = lambda(p; alpha(x_r; xJ_r))
    for k in range(1, max_k + 1):
        for js in itertools.product(range(1, max_j + 1), repeat=k):
            for iss in _matrix_shapes(js, max_i, cap=shape_cap, nsamples=shape_samples, rng=rng):
                shape = blocks.BlockShape(tuple(tuple(row) for row in iss))
                bij = blocks.nu(shape)
                slots = [(P, k)] + [(Q, j) for j in js]
                for row in iss:
                    slots.extend((Q, i) for i in row)
                for combo in _instances(slots, cap, max(3, samples // 6), rng):
                    report.checked += 1
                    p = combo[0]
                    xr = list(combo[1:1 + k])
                    flat = list(combo[1 + k:])
                    xjs, pos = [], 0
                    for j in js:
                        xjs.append(flat[pos:pos + j])
                        pos += j
                    rhs = lam(p, [qgamma(x, grp) for x, grp in zip(xr, xjs)])
                    outer = lam(p, xr)
                    blocks_by_q = []
                    for q in itertools.product(*(range(j) for j in js)):
                        blocks_by_q.append(lam(p, [xjs[r][q[r]] for r in range(k)]))
                    assembled = qgamma(outer, blocks_by_q)
                    nu_perm = tuple(bij.apply(l) for l in range(shape.domain_size))
                    lhs = Q.sigma_act(assembled, nu_perm)
                    if lhs != rhs:
                        report.record("b-nu-square", (p, xr, xjs))

    # (e) lambda(p . sigma; xs) = lambda(p; xs o sigma^{-1}) . sigma_x
    # (f) lambda(p; x_r . tau_r) = lambda(p; xs) . (tau_1 (x) ... (x) tau_k)
    for k in range(1, max_k + 1):
        for js in itertools.product(range(0, max_j + 1), repeat=k):
            slots = [(P, k)] + [(Q, j) for j in js]
            for combo in _instances(slots, cap, max(3, samples // 4), rng):
                p, xs = combo[0], list(combo[1:])
                for sigma in blocks.all_perms(k):
                    report.checked += 1
                    inv = blocks.inverse(sigma)
                    lhs = lam(P.sigma_act(p, sigma), xs)
                    permuted = [xs[inv[i]] for i in range(k)]
                    rhs = Q.sigma_act(lam(p, permuted), blocks.sigma_times(sigma, js))
                    if lhs != rhs:
                        report.record("e-outer-equivariance", (p, xs, sigma))
                        break
                taus = [rng.choice(blocks.all_perms(j)) if j else () for j in js]
                report.checked += 1
                lhs = lam(p, [Q.sigma_act(x, t) for x, t in zip(xs, taus)])
                rhs = Q.sigma_act(lam(p, xs), blocks.otimes(taus, js))
                if lhs != rhs:
                    report.record("f-inner-equivariance", (p, xs, taus))
                # (h) zero arity anywhere: output is the point of Q(0)
                if any(j == 0 for j in js):
                    report.checked += 1
                    if lam(p, xs) != Q.point():
                        report.record("h-zero-arity", (p, xs))

    # G-equivariance, when present on both sides
    if P.group is not None and P.g_action and Q.g_action:
        G = P.group
        for _ in range(group_samples):
            k = rng.randint(1, max_k)
            js = [rng.randint(0, max_j) for _ in range(k)]
            p = P.sample_level(k, rng)
            xs = [Q.sample_level(j, rng) for j in js]
            for g in G.elements():
                report.checked += 1
                lhs = lam(P.g_action(g, p), [Q.g_action(g, x) for x in xs])
                rhs = Q.g_action(g, lam(p, xs))
                if lhs != rhs:
                    report.record("g-equivariance", (g, p, xs))
    return report


def boolean_pairing():
    """The pairing of (Bool, and, 1) on (Bool, or, 0) by xi = and."""
    return MonoidPairing(M=BOOLEAN_AND, N=BOOLEAN_OR, xi=lambda m, n: m & n, mode="plain")
