"""Block permutation calculus and the distributivity bijection.

Permutations are tuples in one-line image notation on 0-based positions:
``p[i]`` is the image of ``i``, and ``compose(f, g)[x] == f[g[x]]``.  Right
actions elsewhere in the package are expressed through inverses of these
left-convention permutations.

Finite products ``k_1 x ... x k_n`` are identified with ``range(k_1*...*k_n)``
lexicographically (first factor most significant); disjoint sums are laid out
block after block in order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


def identity(n):
    return tuple(range(n))


def compose(f, g):
    """(f o g)(x) = f(g(x))."""
    return tuple(f[x] for x in g)


def inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def all_perms(n):
    """All permutations of range(n) in lexicographic order."""
    return [tuple(p) for p in itertools.permutations(range(n))]


def lex_encode(tup, sizes):
    idx = 0
    for a, k in zip(tup, sizes):
        idx = idx * k + a
    return idx


def lex_decode(idx, sizes):
    out = [0] * len(sizes)
    for i in range(len(sizes) - 1, -1, -1):
        out[i] = idx % sizes[i]
        idx //= sizes[i]
    return tuple(out)


def block_starts(ks):
    starts = [0]
    for k in ks:
        starts.append(starts[-1] + k)
    return starts


def sigma_plus(sigma, ks):
    """Permutation of sum(ks) moving block i (intact) to block slot sigma(i).

    The image layout lists block sigma^{-1}(0) first, then sigma^{-1}(1), etc.
    """
    n = len(sigma)
    assert len(ks) == n
    inv = inverse(sigma)
    # start of the slot that block i lands in
    slot_start = block_starts([ks[inv[j]] for j in range(n)])
    starts = block_starts(ks)
    out = [0] * sum(ks)
    for i in range(n):
        for t in range(ks[i]):
            out[starts[i] + t] = slot_start[sigma[i]] + t
    return tuple(out)


def oplus(taus):
    """tau_1 (+) ... (+) tau_n acting inside consecutive blocks."""
    ks = [len(t) for t in taus]
    starts = block_starts(ks)
    out = [0] * sum(ks)
    for i, tau in enumerate(taus):
        for t in range(ks[i]):
            out[starts[i] + t] = starts[i] + tau[t]
    return tuple(out)


def sigma_times(sigma, ks):
    """Permutation of prod(ks) moving tensor factor i to slot sigma(i).

    Sends the lex code of ``a`` (shape ks) to the lex code of
    ``j -> a[sigma^{-1}(j)]`` (shape ``j -> ks[sigma^{-1}(j)]``).
    """
    n = len(sigma)
    assert len(ks) == n
    inv = inverse(sigma)
    new_sizes = [ks[inv[j]] for j in range(n)]
    total = 1
    for k in ks:
        total *= k
    out = [0] * total
    for idx in range(total):
        a = lex_decode(idx, ks)
        out[idx] = lex_encode(tuple(a[inv[j]] for j in range(n)), new_sizes)
    return tuple(out)


def otimes(taus, ks):
    """tau_1 (x) ... (x) tau_n acting factorwise on the lex product."""
    assert all(len(t) == k for t, k in zip(taus, ks))
    total = 1
    for k in ks:
        total *= k
    out = [0] * total
    for idx in range(total):
        a = lex_decode(idx, ks)
        out[idx] = lex_encode(tuple(t[x] for t, x in zip(taus, a)), ks)
    return tuple(out)


@dataclass(frozen=True)
class BlockShape:
    """Shape data (k; j_1..j_k; i_{r,q}) for the distributivity bijection."""

    inner: tuple  # inner[r][q] = i_{r,q}, so j_r = len(inner[r]) and k = len(inner)

    def __post_init__(self):
        for row in self.inner:
            for v in row:
                if v < 0:
                    raise ValueError("block sizes must be >= 0")

    @property
    def k(self):
        return len(self.inner)

    @property
    def js(self):
        return tuple(len(row) for row in self.inner)

    @property
    def row_sums(self):
        """i_{r,+} per factor."""
        return tuple(sum(row) for row in self.inner)

    @property
    def row_products(self):
        return tuple(_prod(row) for row in self.inner)

    @property
    def domain_size(self):
        return _prod(self.row_sums)

    def codomain_blocks(self):
        """Lex-ordered list of (q-tuple, block size prod_r i_{r,q_r})."""
        out = []
        for q in itertools.product(*(range(j) for j in self.js)):
            out.append((q, _prod(self.inner[r][q[r]] for r in range(self.k))))
        return out


def _prod(xs):
    p = 1
    for x in xs:
        p *= x
    return p


@dataclass(frozen=True)
class DistributivityBijection:
    shape: BlockShape
    forward: tuple  # forward[l] = (block rank, offset inside block)
    inverse: tuple  # flat codomain index -> domain lex index
    block_start: tuple  # start of each lex-ordered codomain block

    def apply(self, domain_index):
        q, off = self.forward[domain_index]
        return self.block_start[q] + off

    def unapply(self, codomain_index):
        return self.inverse[codomain_index]


def nu(shape):
    """The explicit distributivity bijection prod_r [i_{r,+}] -> sum_q prod_r [i_{r,q_r}].

    Factor r's value l_r is decomposed into the block index g_r (which summand
    of i_{r,+} it falls in) and the offset b_r inside that block; the image
    lands in the lex-rank-(g_1..g_k) block at the lex offset of (b_1..b_k).
    """
    k = shape.k
    js = shape.js
    row_sums = shape.row_sums
    blocks = shape.codomain_blocks()
    total = shape.domain_size
    assert total == sum(sz for _, sz in blocks), "distributive law size mismatch"
    starts = block_starts([sz for _, sz in blocks])

    # per factor: cumulative boundaries for the gamma_r / beta_r decomposition
    cums = []
    for row in shape.inner:
        c = [0]
        for v in row:
            c.append(c[-1] + v)
        cums.append(c)

    q_strides = [1] * k
    for r in range(k - 2, -1, -1):
        q_strides[r] = q_strides[r + 1] * js[r + 1]

    forward = [None] * total
    inv = [0] * total
    for idx in range(total):
        l = lex_decode(idx, row_sums)
        q = [0] * k
        b = [0] * k
        for r in range(k):
            c = cums[r]
            # gamma_r: unique block with c[q] < l_r + 1 <= c[q+1] (0-based offsets)
            g = 0
            while not (c[g] <= l[r] < c[g + 1]):
                g += 1
            q[r] = g
            b[r] = l[r] - c[g]
        qrank = sum(q[r] * q_strides[r] for r in range(k))
        inner_sizes = [shape.inner[r][q[r]] for r in range(k)]
        off = lex_encode(tuple(b), inner_sizes)
        forward[idx] = (qrank, off)
        inv[starts[qrank] + off] = idx

    assert sorted(starts[qr] + off for qr, off in forward) == list(range(total)), "nu not bijective"
    return DistributivityBijection(shape=shape, forward=tuple(forward), inverse=tuple(inv), block_start=tuple(starts))
