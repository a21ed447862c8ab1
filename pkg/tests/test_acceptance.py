"""Acceptance criteria, one test per criterion.

Each test prints a single ``[criterion NN] PASS/FAIL`` line (visible under
``pytest -s``) and then asserts.  Tolerances and time bounds are pinned here.

Criterion 02 asserts the previously reported totals for S3 (36 compatible
ordered pairs, at least 24 realizable).  Both independent implementations of
compatibility in this package (the edge-level condition and the coinduction
oracle) agree on 33 compatible pairs, of which the rule engine realizes 21,
leaving the same 12 unknown pairs as 36 - 24; the reported totals overcount
by exactly the three self-pairs of the non-saturated systems, which the hull
column itself rules out (a system has Hull(T) = T iff (T, T) is compatible).
The assertion is kept as stated rather than weakened.
"""

import itertools
import random
import time

import numpy as np
import pytest

from transop import blocks, equivariant, models, operads, realize, transfer
from transop.groups import (GSet, coinduce, coset_action, groups_of_order_up_to,
                            named_group, orbit_type)


def criterion(num, ok, detail, elapsed):
    status = "PASS" if ok else "FAIL"
    print(f"\n[criterion {num:02d}] {status} ({elapsed:.1f}s): {detail}")
    assert ok, f"criterion {num}: {detail}"


def sub_idx(lat, order, which=0):
    return [i for i in range(lat.n) if lat.subgroup(i).order == order][which]


def s3_systems():
    lat = named_group("symmetric(3)").lattice()
    return lat, transfer.enumerate_all(lat)


def steiner_axioms(lat):
    c2, c3 = sub_idx(lat, 2), sub_idx(lat, 3)
    t_ae = transfer.j_local(lat, lat.subgroup(c3))
    t_ab = transfer.closure(lat, [(0, c2), (0, c3)])
    t_abcd = transfer.closure(lat, [(c2, lat.top)])
    comp = transfer.TransferSystem.complete(lat)
    triv = transfer.TransferSystem.trivial(lat)
    return [(triv, triv), (t_ae, t_ae), (t_ab, t_abcd), (comp, comp)]


def test_criterion_01_s3_enumeration():
    t0 = time.time()
    lat, systems = s3_systems()
    elapsed = time.time() - t0
    ok = len(systems) == 9 and len(set(systems)) == 9 and elapsed < 1.0
    criterion(1, ok, f"S3 has {len(systems)} transfer systems (want exactly 9)", elapsed)


def test_criterion_02_s3_compatible_pair_counts():
    t0 = time.time()
    lat, systems = s3_systems()
    compatible = sum(1 for a in systems for b in systems
                     if transfer.is_compatible(a, b)[0])
    ledger = realize.realizability_engine(systems, external_axioms=steiner_axioms(lat))
    realizable = len(ledger.realizable_pairs())
    elapsed = time.time() - t0
    ok = compatible == 36 and realizable >= 24 and elapsed < 5.0
    criterion(2, ok,
              f"S3: {compatible} compatible ordered pairs (stated 36), "
              f"{realizable} realizable (stated >= 24); "
              f"unknown {len(ledger.unknown_pairs())} matches the stated 36-24=12",
              elapsed)


def test_criterion_03_s3_hull_column():
    t0 = time.time()
    lat, systems = s3_systems()
    saturated = [t for t in systems if transfer.is_saturated(t)]
    unsat = [t for t in systems if not transfer.is_saturated(t)]
    hulls_self = all(transfer.hull(t) == t for t in saturated)
    shared = {transfer.hull(t) for t in unsat}
    shared_is_row4 = (len(shared) == 1 and shared == {
        transfer.closure(lat, [(0, sub_idx(lat, 2)), (0, sub_idx(lat, 3))])})
    brute = all(transfer.hull(t) == transfer.brute_force_hull(t, systems)
                for t in systems)
    elapsed = time.time() - t0
    ok = (len(saturated) == 6 and hulls_self and len(unsat) == 3
          and shared_is_row4 and brute)
    criterion(3, ok,
              "hull column: Hull(T)=T for the 6 self-hull rows; the three "
              "non-saturated rows share the row-4 hull; brute force agrees",
              elapsed)


def test_criterion_04_c4_non_example():
    t0 = time.time()
    lat = named_group("cyclic(4)").lattice()
    c2 = sub_idx(lat, 2)
    t = transfer.closure(lat, [(0, c2), (0, lat.top)])
    ok1, wit = transfer.is_compatible(t, t)
    witness_ok = (not ok1) and wit == (0, lat.top, c2)
    co = coinduce(lat.subgroup(0), lat.subgroup(lat.top),
                  GSet.trivial(lat.subgroup(0), 2))
    types = {lat.subgroup(lat.index[elems]).order: mult
             for elems, mult in orbit_type(co.as_gset())}
    orbit_ok = types == {4: 2, 2: 1, 1: 3}
    elapsed = time.time() - t0
    criterion(4, witness_ok and orbit_ok,
              f"C4 self-pair incompatible with witness (e, C4, C2): {witness_ok}; "
              f"coinduced orbit type C4/C4 x2 + C4/C2 + C4/e x3: {orbit_ok}",
              elapsed)


def test_criterion_05_definition_equivalence():
    t0 = time.time()
    disagreements = 0
    pairs = 0
    for spec in ["cyclic(4)", "cyclic(6)", "product(cyclic(2),cyclic(2))",
                 "symmetric(3)"]:
        lat = named_group(spec).lattice()
        systems = transfer.enumerate_all(lat)
        for a in systems:
            for b in systems:
                pairs += 1
                if transfer.is_compatible(a, b)[0] != transfer.compatibility_oracle(a, b, bound=3):
                    disagreements += 1
    elapsed = time.time() - t0
    ok = disagreements == 0 and elapsed < 120
    criterion(5, ok,
              f"transfer-level vs coinduction oracle: {disagreements} disagreements "
              f"on {pairs} ordered pairs over C4, C6, C2xC2, S3", elapsed)


def _nu_sweep_shape(rows, cache):
    """Vectorized bijectivity check of the distributivity map for one shape."""
    k = len(rows)
    tabs = []
    for r in rows:
        t = cache.get(r)
        if t is None:
            g, b = [], []
            for q, size in enumerate(r):
                g.extend([q] * size)
                b.extend(range(size))
            t = cache[r] = (np.array(g, dtype=np.int64), np.array(b, dtype=np.int64))
        tabs.append(t)
    sums = [len(t[0]) for t in tabs]
    total = 1
    for s in sums:
        total *= s
    if total == 0:
        return 0
    rowarrs = [np.array(r, dtype=np.int64) for r in rows]
    suffix = np.ones(1, dtype=np.int64)
    strides = [None] * k
    for r in range(k - 1, -1, -1):
        strides[r] = suffix
        suffix = np.multiply.outer(rowarrs[r], suffix).ravel()
    sizes = suffix
    starts = np.zeros(len(sizes) + 1, dtype=np.int64)
    np.cumsum(sizes, out=starts[1:])
    assert starts[-1] == total, "distributive law count mismatch"
    idx = np.arange(total)
    rem = idx
    digs = []
    for r in range(k - 1, -1, -1):
        digs.append(rem % sums[r])
        rem = rem // sums[r]
    digs.reverse()
    js = [len(r) for r in rows]
    q_strides = [1] * k
    acc = 1
    for r in range(k - 1, -1, -1):
        q_strides[r] = acc
        acc *= js[r]
    qrank = np.zeros(total, dtype=np.int64)
    for r in range(k):
        qrank += tabs[r][0][digs[r]] * q_strides[r]
    off = np.zeros(total, dtype=np.int64)
    for r in range(k):
        st = strides[r]
        off += tabs[r][1][digs[r]] * st[qrank % len(st)]
    fwd = starts[qrank] + off
    counts = np.bincount(fwd, minlength=total)
    assert counts.max() == 1 and counts.min() == 1, f"nu not bijective at {rows}"
    return fwd


def test_criterion_06_distributivity_bijection():
    t0 = time.time()
    # the worked example: nu(5, 2) = (3, 1) in the fifth block (2, 2)
    shape = blocks.BlockShape(((2, 3), (1, 2, 3)))
    bij = blocks.nu(shape)
    l = blocks.lex_encode((4, 1), shape.row_sums)
    example_ok = bij.forward[l] == (4, blocks.lex_encode((2, 0), (3, 2)))

    # gamma sandwich on every factor row with j <= 3, entries 0..3
    sandwich_ok = True
    rows_all = [row for j in (0, 1, 2, 3)
                for row in itertools.product((0, 1, 2, 3), repeat=j)]
    for row in rows_all:
        cums = [0]
        for v in row:
            cums.append(cums[-1] + v)
        pos = 0
        for q, size in enumerate(row):
            for _ in range(size):
                if not (cums[q] <= pos < cums[q + 1]):
                    sandwich_ok = False
                pos += 1

    # full bijectivity for every shape with k <= 3, j_r <= 3, entries <= 3,
    # with the vectorized map cross-checked against blocks.nu on a subsample
    cache = {}
    shapes = 0
    checked_against_nu = 0
    for k in (1, 2, 3):
        for js in itertools.product((0, 1, 2, 3), repeat=k):
            rowspaces = [list(itertools.product((0, 1, 2, 3), repeat=j)) for j in js]
            for rows in itertools.product(*rowspaces):
                fwd = _nu_sweep_shape(rows, cache)
                shapes += 1
                if shapes % 977 == 0 and not isinstance(fwd, int):
                    b = blocks.nu(blocks.BlockShape(tuple(rows)))
                    assert all(int(fwd[x]) == b.apply(x) for x in range(len(fwd)))
                    checked_against_nu += 1
    elapsed = time.time() - t0
    ok = example_ok and sandwich_ok and elapsed < 60
    criterion(6, ok,
              f"nu example + sandwich + bijectivity on {shapes} shapes "
              f"({checked_against_nu} cross-checked against the library map)",
              elapsed)


def monoids_up_to_iso(nmax):
    out = []
    for n in range(1, nmax + 1):
        seen = set()
        free = [(i, j) for i in range(1, n) for j in range(1, n)]
        perms = list(itertools.permutations(range(1, n)))
        for vals in itertools.product(range(n), repeat=len(free)):
            tab = [[0] * n for _ in range(n)]
            for j in range(n):
                tab[0][j] = j
                tab[j][0] = j
            for (i, j), v in zip(free, vals):
                tab[i][j] = v
            ok = True
            for a in range(n):
                row_a = tab[a]
                for b in range(n):
                    ab = row_a[b]
                    row_b = tab[b]
                    for c in range(n):
                        if tab[ab][c] != row_a[row_b[c]]:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                continue
            best = None
            for p in perms:
                pi = (0,) + p
                inv = {pi[i]: i for i in range(n)}
                t2 = tuple(tuple(inv[tab[pi[a]][pi[b]]] for b in range(n)) for a in range(n))
                if best is None or t2 < best:
                    best = t2
            if best in seen:
                continue
            seen.add(best)
            out.append(operads.FiniteMonoid([list(r) for r in best], identity=0,
                                            label=f"M{n}.{len(seen)}"))
    return out


def test_criterion_07_operad_and_pairing_axioms():
    t0 = time.time()
    ms = monoids_up_to_iso(4)
    counts = {n: sum(1 for m in ms if m.order == n) for n in (1, 2, 3, 4)}
    count_ok = counts == {1: 1, 2: 2, 3: 7, 4: 35}
    fails = []
    for m in ms:
        rep = operads.check_operad_axioms(operads.operad_from_monoid(m),
                                          max_arity=3, max_inner=3,
                                          cap=120, samples=5, seed=11)
        if not rep.ok:
            fails.append(m.label)
    pairing = operads.lambda_from_pairing(operads.boolean_pairing())
    prep = operads.check_operad_pairing(pairing, max_k=3, max_j=3, max_i=2,
                                        cap=400, samples=8, shape_cap=81,
                                        shape_samples=8, seed=11)

    base = operads.operad_from_monoid(operads.BOOLEAN_AND)

    def bad_gamma(x, ys):
        out = list(base.gamma(x, ys))
        if len(out) >= 2:
            out[0], out[1] = out[1], out[0]
        return tuple(out)

    corrupted = operads.SetOperad(label="bad", identity=base.identity,
                                  gamma=bad_gamma, sigma_act=base.sigma_act,
                                  arity_of=len,
                                  enumerate_level=base._enumerate_level,
                                  sample_level=base._sample_level,
                                  level_size=base._level_size)
    mrep = operads.check_operad_axioms(corrupted, max_arity=2, max_inner=2,
                                       cap=200, samples=8)

    def bad_lam(p, xs):
        return pairing.lam((1,) + tuple(p[1:]), xs)

    mutated = operads.OperadPairing(P=pairing.P, Q=pairing.Q, lam=bad_lam)
    lrep = operads.check_operad_pairing(mutated, max_k=2, max_j=2, max_i=2,
                                        cap=400, samples=8)
    mutations_ok = (not mrep.ok and mrep.failures[0][1] is not None
                    and not lrep.ok and lrep.failures[0][1] is not None)
    elapsed = time.time() - t0
    ok = count_ok and not fails and prep.ok and mutations_ok
    criterion(7, ok,
              f"operad axioms pass for all {len(ms)} monoids of order <= 4 "
              f"(fails: {fails}); boolean pairing (a)-(h) {prep.summary()}; "
              f"mutations detected with witnesses: {mutations_ok}", elapsed)


def _all_ksets_up_to(K, lat, maxsize):
    G = K.group
    types, seen = [], set()
    for s_idx in lat.below(lat.index_of(K)):
        S = lat.subgroup(s_idx)
        rep = min(tuple(sorted(G.conj(h, s) for s in S.elems)) for h in K.elems)
        if rep in seen:
            continue
        seen.add(rep)
        types.append(GSet.from_coset_action(coset_action(K, lat.subgroup(lat.index[rep]))))
    out = []
    for r in range(1, maxsize + 1):
        for combo in itertools.combinations_with_replacement(types, r):
            if sum(x.size for x in combo) <= maxsize:
                out.append(GSet.disjoint_union(list(combo)))
    return out


def test_criterion_08_fixed_pair_z_machine_check():
    t0 = time.time()
    pr = operads.lambda_from_pairing(operads.boolean_pairing(), check=False)
    cases = 0
    for spec in ["cyclic(4)", "symmetric(3)"]:
        G = named_group(spec)
        lat = G.lattice()
        cpr = equivariant.coinduced_pairing(pr, G)
        for hx in range(lat.n):
            H = lat.subgroup(hx)
            for kx in lat.below(hx):
                K = lat.subgroup(kx)
                for X in _all_ksets_up_to(K, lat, 3):
                    equivariant.fixed_pair_z(cpr, K, H, X)  # raises NotFixed on failure
                    cases += 1
    elapsed = time.time() - t0
    # 24 (H, K, X) triples over C4 and 62 over S3
    criterion(8, cases == 86,
              f"z = lambda(a; b_i) is Gamma_theta-fixed in all {cases} cases "
              "over C4 and S3 with |X| <= 3 (want 86)", elapsed)


def test_criterion_09_witness_iff_j_local():
    t0 = time.time()
    triples = 0
    for G in groups_of_order_up_to(8):
        lat = G.lattice()
        for jx in range(lat.n):
            J = lat.subgroup(jx)
            tj = transfer.j_local(lat, J)
            for j in range(lat.n):
                for i in range(lat.n):
                    if not lat.leq[i][j]:
                        continue
                    w = equivariant.construct_j_witness(G, J, lat.subgroup(i), lat.subgroup(j))
                    assert (w is not None) == tj.relates(i, j), (G.label, jx, i, j)
                    triples += 1
    elapsed = time.time() - t0
    ok = elapsed < 300
    criterion(9, ok,
              f"witness construction succeeds iff K ->_J H on all {triples} "
              "(J, K <= H) triples over every group of order <= 8", elapsed)


def test_criterion_10_associated_transfer_is_j_local():
    t0 = time.time()
    base = operads.suboperad_vee(models.iso_monoid(), validate=False)
    checked = 0
    for G in groups_of_order_up_to(8):
        lat = G.lattice()
        for jx in range(lat.n):
            J = lat.subgroup(jx)
            co = equivariant.CoinducedOperad(base, G, J)
            assert equivariant.associated_transfer(co, lat) == transfer.j_local(lat, J)
            checked += 1
    elapsed = time.time() - t0
    criterion(10, True,
              f"associated transfer system of the J\\G-coinduced operad equals "
              f"the J-local system for all {checked} (G, J) with |G| <= 8", elapsed)


def test_criterion_11_saturation_equivalence():
    t0 = time.time()
    total = 0
    sampled_note = ""
    for G in groups_of_order_up_to(8):
        lat = G.lattice()
        elementary_abelian_8 = (G.order == 8 and
                                all(G.mul(x, x) == G.identity for x in G.elements()))
        if elementary_abelian_8:
            # (C2)^3 has over 10^6 transfer systems; exhaustive enumeration is
            # beyond desk scale, so the equivalence is checked on the closures
            # of all seed sets of at most two edge classes
            systems = transfer.closed_seed_family(lat, max_seed_classes=2)
            sampled_note = f"; (C2)^3 via a {len(systems)}-system seed family"
        else:
            systems = transfer.enumerate_all(lat)
        for t in systems:
            assert (transfer.is_saturated(t)
                    == transfer.two_out_of_three(t)
                    == transfer.is_compatible(t, t)[0]), (G.label, t)
            total += 1
    lat, s3 = s3_systems()
    n_sat = sum(transfer.is_saturated(t) for t in s3)
    for t in transfer.enumerate_all(named_group("quaternion8").lattice()):
        assert transfer.is_saturated(t) == transfer.two_out_of_three(t)
    elapsed = time.time() - t0
    ok = n_sat == 6
    criterion(11, ok,
              f"saturated <=> self-compatible <=> two-out-of-three on {total} "
              f"systems over all groups of order <= 8{sampled_note}; "
              f"S3 has exactly {n_sat} saturated systems (want 6)", elapsed)


def test_criterion_12_discrete_model_sampled_axioms():
    t0 = time.time()
    iso = models.iso_monoid()
    st = models.steiner_monoid()
    bad = iso.check_axioms(samples=1200, seed=21) + st.check_axioms(samples=1200, seed=22)
    monoid_checks = 2 * 3 * 1200  # three axiom instances per sample per monoid
    rep = operads.check_monoid_pairing(models.iso_steiner_pairing(), samples=700, seed=23)
    total = monoid_checks + rep.checked
    op = operads.lambda_from_pairing(models.iso_steiner_pairing(small=True), check=False)
    orep = operads.check_operad_pairing(op, max_k=2, max_j=2, max_i=2,
                                        cap=0, samples=2, shape_cap=0,
                                        shape_samples=2, seed=24)
    elapsed = time.time() - t0
    ok = not bad and rep.ok and orep.ok and total >= 10 ** 4
    criterion(12, ok,
              f"intersection monoid + pairing axioms: {total} seeded samples, "
              f"{len(bad) + len(rep.failures)} violations; derived operad "
              f"pairing at k,j <= 2: {orep.summary()}", elapsed)
