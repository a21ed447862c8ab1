"""Coinduced operads over right-coset spaces, graph-subgroup stabilizers and
fixed points, J-local witness functions, the transfer system associated to a
Sigma-free equivariant set operad, coinduced and product pairings, and the
fixed-point construction behind the compatibility theorem.

The carrier of level n of a coinduced operad is the set of functions
J\\G -> O(n), stored as tuples indexed by right cosets, with

    ((g, sigma) . f)(Ja) = sigma . f(Jag)

where sigma acts on the left through the inverse of the right action.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from . import blocks
from .errors import CarrierTooSmall, NotFixed, NotSigmaFree, PairingInvalid
from .groups import GraphSubgroup, Subgroup, coinduce, coset_action
from .operads import OperadPairing, SetOperad
from .transfer import TransferSystem


# ---------------------------------------------------------------------------
# right cosets J\G and double cosets J\G/H
# ---------------------------------------------------------------------------

class RightCosets:
    """Right cosets J\\G with translation (Ja, g) -> Jag."""

    def __init__(self, G, J):
        self.group = G
        self.J = J
        jset = J._elemset()
        coset_of = {}
        cosets = []
        for a in G.elements():
            if a in coset_of:
                continue
            members = tuple(sorted(G.mul(j, a) for j in J.elems))
            idx = len(cosets)
            cosets.append(members)
            for x in members:
                coset_of[x] = idx
        # renumber so cosets are sorted by least member (deterministic)
        order = sorted(range(len(cosets)), key=lambda i: cosets[i])
        rank = {old: new for new, old in enumerate(order)}
        self.cosets = [cosets[i] for i in order]
        self.coset_of = {x: rank[i] for x, i in coset_of.items()}
        self.size = len(self.cosets)
        self.translate = [[self.coset_of[G.mul(self.cosets[c][0], g)] for g in G.elements()]
                          for c in range(self.size)]

    def double_coset_orbits(self, H):
        """Orbits of cosets under right H-translation, in least-coset order."""
        seen = [False] * self.size
        orbits = []
        for c in range(self.size):
            if seen[c]:
                continue
            orbit = {c}
            frontier = [c]
            while frontier:
                d = frontier.pop()
                for h in H.elems:
                    e = self.translate[d][h]
                    if e not in orbit:
                        orbit.add(e)
                        frontier.append(e)
            for d in orbit:
                seen[d] = True
            orbits.append(tuple(sorted(orbit)))
        return orbits


# ---------------------------------------------------------------------------
# left Sigma-actions with unique transporters
# ---------------------------------------------------------------------------

class FreeSigmaSet:
    """Disjoint regular left Sigma_n-orbits: points (orbit, pi)."""

    def __init__(self, n, orbits):
        self.n = n
        self.orbits = orbits
        self.size = orbits * _factorial(n)

    def left_act(self, sigma, x):
        o, pi = x
        return (o, blocks.compose(sigma, pi))

    def transporter_left(self, x, y):
        """The unique sigma with sigma . x = y, or None."""
        (ox, px), (oy, py) = x, y
        if ox != oy:
            return None
        return blocks.compose(py, blocks.inverse(px))

    def point(self, orbit):
        return (orbit, blocks.identity(self.n))


def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


class OperadLevelSigmaSet:
    """Left Sigma-set view of one level of a Sigma-free set operad."""

    def __init__(self, operad, n):
        self.operad = operad
        self.n = n

    def left_act(self, sigma, x):
        return self.operad.sigma_act(x, blocks.inverse(sigma))

    def transporter_left(self, x, y):
        rho = self.operad.transporter(x, y)  # x . rho = y
        if rho is None:
            return None
        sigma = blocks.inverse(rho)
        if self.left_act(sigma, x) != y:
            return None
        if x == y and sigma != blocks.identity(self.n):
            raise NotSigmaFree(f"level {self.n} has a fixed point under {sigma}")
        return sigma


# ---------------------------------------------------------------------------
# coinduced operads
# ---------------------------------------------------------------------------

class CoinducedOperad(SetOperad):
    """O_{J\\G}: level n is the set of functions J\\G -> O(n).

    J = the trivial subgroup gives full coinduction.  The base operad should
    be Sigma-free (checked on samples) for the stabilizer and associated
    transfer-system machinery to apply.
    """

    def __init__(self, base, G, J=None):
        self.base = base
        if J is None:
            J = Subgroup(G, (G.identity,))
        self.J = J
        self.rc = RightCosets(G, J)
        m = self.rc.size

        def gamma(f, fs):
            return tuple(base.gamma(f[c], [g[c] for g in fs]) for c in range(m))

        def sigma_act(f, sigma):
            return tuple(base.sigma_act(f[c], sigma) for c in range(m))

        def g_action(g, f):
            return tuple(f[self.rc.translate[c][g]] for c in range(m))

        def sample_level(n, rng):
            return tuple(base.sample_level(n, rng) for _ in range(m))

        enumerate_level = None
        level_size = None
        if base.enumerable:
            def enumerate_level(n):
                return [tuple(t) for t in itertools.product(base.level(n), repeat=m)]

            def level_size(n):
                return base.level_size(n) ** m

        super().__init__(
            label=f"Coind[{J}\\{G.label}]({base.label})",
            identity=tuple(base.identity for _ in range(m)),
            gamma=gamma,
            sigma_act=sigma_act,
            arity_of=lambda f: base.arity_of(f[0]),
            enumerate_level=enumerate_level,
            sample_level=sample_level,
            group=G,
            g_action=g_action,
            transporter=None,
            level_size=level_size,
        )

    def gsigma_act(self, g, sigma, f):
        """((g, sigma) . f)(Ja) = sigma . f(Jag)."""
        base = self.base
        inv = blocks.inverse(sigma)
        return tuple(base.sigma_act(f[self.rc.translate[c][g]], inv) for c in range(self.rc.size))


def stabilizer(op, f, n=None):
    """The stabilizer S_f <= G x Sigma_n of a coinduced level point, returned
    as a GraphSubgroup (raises NotSigmaFree if the base action is not free)."""
    G = op.group
    if n is None:
        n = op.arity_of(f)
    level = OperadLevelSigmaSet(op.base, n)
    return _function_stabilizer(G, op.rc, level, f, n)


def _function_stabilizer(G, rc, sigma_set, f, n):
    pairs = []
    members = []
    for g in G.elements():
        sigma = sigma_set.transporter_left(f[rc.translate[0][g]], f[0])
        if sigma is None:
            continue
        ok = all(sigma_set.left_act(sigma, f[rc.translate[c][g]]) == f[c] for c in range(rc.size))
        if ok:
            members.append(g)
            pairs.append((g, sigma))
    K = Subgroup(G, tuple(sorted(members)))
    phi = dict(pairs)
    for a in members:
        for b in members:
            assert phi[G.mul(a, b)] == blocks.compose(phi[a], phi[b]), "stabilizer not a graph"
    return GraphSubgroup(base=K, degree=n, phi=tuple(sorted(phi.items())))


def graph_fixed_point(rc, H, phi, sigma_set, value_of_orbit):
    """Solve ((h, phi(h)) . f) = f by propagation over right H-translation.

    ``value_of_orbit(i)`` supplies the value at the least coset of the i-th
    double coset orbit.  Returns the function (a tuple over cosets) or None
    when the constraints are inconsistent, i.e. no fixed point exists.
    """
    orbits = rc.double_coset_orbits(H)
    f = [None] * rc.size
    for i, orbit in enumerate(orbits):
        start = orbit[0]
        f[start] = value_of_orbit(i)
        frontier = [start]
        while frontier:
            c = frontier.pop()
            for h in H.elems:
                d = rc.translate[c][h]
                # fixed point law: f(Jah) = phi(h)^{-1} . f(Ja)
                val = sigma_set.left_act(blocks.inverse(phi[h]), f[c])
                if f[d] is None:
                    f[d] = val
                    frontier.append(d)
                elif f[d] != val:
                    return None
    return tuple(f)


def construct_j_witness(G, J, K, H, X=None):
    """A Gamma(H/K)-fixed function f: J\\G -> X, or None when none exists.

    Built by the double-coset recipe: values alpha(h)^{-1} x_i on the orbit of
    J gamma_i H, with the x_i in pairwise distinct free orbits.  A witness
    exists if and only if K is J-locally related to H (callers cross-check
    against the direct criterion).

    The stabilizer of the result always contains Gamma(H/K); it can be
    strictly larger, e.g. whenever some g outside H fixes every right coset
    of J (take G = S3, J = C3, K = e, H = C2: the 3-cycles fix both cosets of
    the normal C3, so S_f is the graph of the sign action of all of S3).  Use
    ``stabilizer`` to recover S_f exactly.
    """
    cs = coset_action(H, K)
    n = cs.n
    rc = RightCosets(G, J)
    orbits = rc.double_coset_orbits(H)
    if X is None:
        X = FreeSigmaSet(n, orbits=max(len(orbits), G.order))
    if X.n != n:
        raise CarrierTooSmall("free Sigma-set has the wrong degree")
    if X.orbits < len(orbits):
        raise CarrierTooSmall(f"need {len(orbits)} free orbits, have {X.orbits}")
    phi = {h: cs.alpha[h] for h in H.elems}
    f = graph_fixed_point(rc, H, phi, X, lambda i: X.point(i))
    if f is None:
        return None
    gamma = _function_stabilizer(G, rc, X, f, n)
    got = dict(gamma.pairs())
    for h in H.elems:
        assert got.get(h) == cs.alpha[h], "witness is not Gamma(H/K)-fixed"
    return f


def witness_stabilizer(G, J, K, H, f, X=None):
    """S_f for a witness produced by construct_j_witness."""
    cs = coset_action(H, K)
    rc = RightCosets(G, J)
    if X is None:
        X = FreeSigmaSet(cs.n, orbits=max(len(rc.double_coset_orbits(H)), G.order))
    return _function_stabilizer(G, rc, X, f, cs.n)


def associated_transfer(op, lattice):
    """The transfer system of a coinduced operad: K -> H iff level([H:K]) has
    a Gamma(H/K)-fixed point, decided by double-coset propagation."""
    G = op.group
    rc = op.rc
    edges = []
    rng = random.Random(7)
    for i in range(lattice.n):
        for j in range(lattice.n):
            if i == j or not lattice.leq[i][j]:
                continue
            K, H = lattice.subgroup(i), lattice.subgroup(j)
            cs = coset_action(H, K)
            n = cs.n
            level = OperadLevelSigmaSet(op.base, n)
            sample = op.base.sample_level(n, rng)
            _assert_sigma_free(op.base, sample, n)
            phi = {h: cs.alpha[h] for h in H.elems}
            f = graph_fixed_point(rc, H, phi, level, lambda _i: sample)
            if f is not None:
                edges.append((i, j))
    return TransferSystem.from_edges(lattice, edges)


def _assert_sigma_free(base, sample, n):
    for sigma in blocks.all_perms(n):
        if sigma != blocks.identity(n) and base.sigma_act(sample, sigma) == sample:
            raise NotSigmaFree(f"base level {n} fixes {sample} under {sigma}")


# ---------------------------------------------------------------------------
# coinduced and product pairings
# ---------------------------------------------------------------------------

def coinduced_pairing(pairing, G, J=None, check_samples=20, seed=0):
    """Apply a pairing of plain set operads pointwise over J\\G.

    The resulting lambda is (G x Sigma)-equivariant; this is asserted on
    seeded samples at construction.
    """
    P = CoinducedOperad(pairing.P, G, J)
    Q = CoinducedOperad(pairing.Q, G, J)
    m = P.rc.size
    base_lam = pairing.lam

    def lam(f, fs):
        return tuple(base_lam(f[c], [x[c] for x in fs]) for c in range(m))

    out = OperadPairing(P=P, Q=Q, lam=lam)
    # G-equivariance on samples; the Sigma-side is axioms (e)/(f), which
    # check_operad_pairing exercises with the same block-permutation calculus.
    rng = random.Random(seed)
    for _ in range(check_samples):
        k = rng.randint(1, 2)
        js = [rng.randint(1, 2) for _ in range(k)]
        p = P.sample_level(k, rng)
        xs = [Q.sample_level(j, rng) for j in js]
        g = rng.randrange(G.order)
        lhs = lam(P.g_action(g, p), [Q.g_action(g, x) for x in xs])
        rhs = Q.g_action(g, lam(p, xs))
        if lhs != rhs:
            raise PairingInvalid("coinduced lambda is not G-equivariant")
    return out


def product_pairing(pair1, pair2):
    """Componentwise pairing on the product operads (levels are pairs)."""
    P = _product_operad(pair1.P, pair2.P)
    Q = _product_operad(pair1.Q, pair2.Q)

    def lam(p, xs):
        a = pair1.lam(p[0], [x[0] for x in xs])
        b = pair2.lam(p[1], [x[1] for x in xs])
        return (a, b)

    return OperadPairing(P=P, Q=Q, lam=lam)


def _product_operad(A, B):
    def gamma(x, ys):
        return (A.gamma(x[0], [y[0] for y in ys]), B.gamma(x[1], [y[1] for y in ys]))

    def sigma_act(x, sigma):
        return (A.sigma_act(x[0], sigma), B.sigma_act(x[1], sigma))

    enumerate_level = None
    level_size = None
    if A.enumerable and B.enumerable:
        def enumerate_level(n):
            return [(a, b) for a in A.level(n) for b in B.level(n)]

        def level_size(n):
            return A.level_size(n) * B.level_size(n)

    def sample_level(n, rng):
        return (A.sample_level(n, rng), B.sample_level(n, rng))

    g_action = None
    if A.g_action and B.g_action:
        def g_action(g, x):
            return (A.g_action(g, x[0]), B.g_action(g, x[1]))

    return SetOperad(
        label=f"({A.label})x({B.label})",
        identity=(A.identity, B.identity),
        gamma=gamma,
        sigma_act=sigma_act,
        arity_of=lambda x: A.arity_of(x[0]),
        enumerate_level=enumerate_level,
        sample_level=sample_level,
        group=A.group,
        g_action=g_action,
        level_size=level_size,
    )


# ---------------------------------------------------------------------------
# the fixed-point construction z = lambda(a; b_1..b_n)
# ---------------------------------------------------------------------------

def graph_fixed_level_point(op, H, phi, n, rng=None):
    """A Gamma-fixed point of a coinduced level, built by propagation."""
    rng = rng or random.Random(0)
    level = OperadLevelSigmaSet(op.base, n)
    sample = op.base.sample_level(n, rng)
    f = graph_fixed_point(op.rc, H, phi, level, lambda _i: sample)
    return f


def fixed_pair_z(pairing, K, H, X, a=None, b=None, rng=None):
    """The Gamma_theta-fixed point z = lambda(a; b_1, ..., b_n).

    ``pairing`` is a pairing of coinduced operads over the same group, ``a``
    a Gamma(H/K)-fixed point of P(n) and ``b`` a Gamma(X)-fixed point of
    Q(m); both are built by propagation when omitted.  The return value is
    checked to be fixed under {(h, theta(h))} for the coinduced H-set X^n,
    which is the computational content of the compatibility theorem.
    """
    P, Q, lam = pairing.P, pairing.Q, pairing.lam
    G = P.group
    rng = rng or random.Random(0)
    cs = coset_action(H, K)
    n = cs.n
    m = X.size
    alpha = {h: cs.alpha[h] for h in H.elems}
    tau = {k: X.perms[k] for k in K.elems}

    if a is None:
        a = graph_fixed_level_point(P, H, alpha, n, rng=rng)
        assert a is not None, "full coinduction always has graph fixed points"
    if b is None:
        b = graph_fixed_level_point(Q, K, tau, m, rng=rng)
        assert b is not None

    for h in H.elems:
        if P.gsigma_act(h, alpha[h], a) != a:
            raise NotFixed(f"a is not Gamma(H/K)-fixed at h={h}")
    for k in K.elems:
        if Q.gsigma_act(k, tau[k], b) != b:
            raise NotFixed(f"b is not Gamma(X)-fixed at k={k}")

    bs = [Q.g_action(cs.reps[i], b) for i in range(n)]
    z = lam(a, bs)

    co = coinduce(K, H, X)
    for h in H.elems:
        if Q.gsigma_act(h, co.theta(h), z) != z:
            raise NotFixed(f"z is not Gamma_theta-fixed at h={h}")
    return z
