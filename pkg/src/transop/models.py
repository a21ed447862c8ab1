"""Computable infinite-carrier intersection monoids: coordinate injections of
the natural numbers and translated coordinate embeddings, with the conjugation
pairing between them.

A ResidueAffineInjection is an injective self-map of N that is affine on each
residue class beyond a threshold: branch r covers {x >= threshold, x = r mod
m}, sending its t-th member to a_r * t + b_r, with a finite exception table
below the threshold.  Branch images are arithmetic progressions, so image
membership, image disjointness, and composition are all decidable; the class
is closed under composition and under conjugation by another such map.

A DiscreteSteinerElement (sigma, c) denotes the injective self-map
x |-> sigma_* x + c of finitely supported N-valued sequences, where
(sigma_* x)(i) = x(sigma^{-1}(i)) on the image of sigma and 0 elsewhere.
Its image is the coordinatewise constraint set {y : y(i) = c(i) off im sigma,
y(i) >= c(i) on im sigma}, so disjointness of images reduces to a finite
feasibility check over the offset supports.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import cached_property

from .errors import TransopError
from .operads import IntersectionMonoidSpec, MonoidHandle, MonoidPairing


@dataclass(frozen=True, eq=False)
class ResidueAffineInjection:
    modulus: int
    threshold: int
    coefs: tuple       # ((a_r, b_r) for r in range(modulus)), a_r >= 1, b_r >= 0
    exceptions: tuple  # (value at 0, value at 1, ..., value at threshold-1)

    def __eq__(self, other):
        """Extensional equality: same function on N.

        Two maps of this shape agreeing below max(thresholds) and on two full
        periods of lcm(moduli) beyond it agree everywhere (two points pin an
        affine branch).
        """
        if not isinstance(other, ResidueAffineInjection):
            return NotImplemented
        if self is other:
            return True
        hi = max(self.threshold, other.threshold) + 2 * _lcm(self.modulus, other.modulus)
        return all(self.apply(x) == other.apply(x) for x in range(hi))

    def __hash__(self):
        return hash(tuple(self.apply(x) for x in range(24)))

    def start(self, r):
        """First branch-domain point in class r."""
        n0, m = self.threshold, self.modulus
        return n0 + ((r - n0) % m)

    def apply(self, x):
        if x < self.threshold:
            return self.exceptions[x]
        r = x % self.modulus
        a, b = self.coefs[r]
        t = (x - self.start(r)) // self.modulus
        return a * t + b

    def image_aps(self):
        """Branch images as (base, step) pairs: {base + step*t, t >= 0}."""
        return [(b, a) for a, b in self.coefs]

    @cached_property
    def _image_index(self):
        """step -> (base mod step) -> [(base, branch)] for fast membership."""
        idx = {}
        for r, (a, b) in enumerate(self.coefs):
            idx.setdefault(a, {}).setdefault(b % a, []).append((b, r))
        return idx

    @cached_property
    def _exception_index(self):
        return {v: x for x, v in enumerate(self.exceptions)}

    def in_image(self, y):
        return self.preimage(y) is not None

    def preimage(self, y):
        x = self._exception_index.get(y)
        if x is not None:
            return x
        for a, buckets in self._image_index.items():
            for b, r in buckets.get(y % a, ()):
                if y >= b:
                    return self.start(r) + self.modulus * ((y - b) // a)
        return None

    def validate(self):
        for a, b in self.coefs:
            if a < 1 or b < 0:
                raise TransopError(f"bad branch {(a, b)}")
        if _ap_family_self_intersects(self.image_aps()):
            raise TransopError("branch images intersect: not injective")
        vals = list(self.exceptions)
        if len(set(vals)) != len(vals):
            raise TransopError("exception values collide")
        idx = self._image_index
        for v in vals:
            for a, buckets in idx.items():
                if any(v >= b for b, _r in buckets.get(v % a, ())):
                    raise TransopError("exception value hits a branch image")
        return self

    def normalize(self):
        """Canonical form: minimal modulus, then minimal threshold."""
        rai = self
        for d in sorted(_divisors(rai.modulus)):
            if d == rai.modulus:
                break
            merged = _try_modulus(rai, d)
            if merged is not None:
                rai = merged
                break  # minimal divisor that works is final (periods nest)
        # absorb exceptions that continue their branch
        m, n0 = rai.modulus, rai.threshold
        coefs = list(rai.coefs)
        exc = list(rai.exceptions)
        while n0 > 0:
            x = n0 - 1
            r = x % m
            a, b = coefs[r]
            if b - a >= 0 and exc[x] == b - a:
                coefs[r] = (a, b - a)
                exc.pop()
                n0 -= 1
            else:
                break
        return ResidueAffineInjection(m, n0, tuple(coefs), tuple(exc))

    def __repr__(self):
        if self.modulus == 1 and not self.exceptions:
            a, b = self.coefs[0]
            return f"RAI(x->{a}x+{b})"
        return f"RAI(m={self.modulus},n0={self.threshold},coefs={self.coefs},exc={self.exceptions})"


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _group_by_step(aps):
    by_a = {}
    for b, a in aps:
        by_a.setdefault(a, []).append(b)
    return by_a


def _ap_family_self_intersects(aps):
    """Any two distinct APs {b + a t} in the family meet.

    Two progressions meet iff their bases agree modulo the gcd of their steps
    (common members then recur and are unbounded, so they exist above both
    bases).  Bucketing by residue keeps this near-linear in the family size.
    """
    by_a = _group_by_step(aps)
    steps = sorted(by_a)
    for a in steps:
        seen = set()
        for b in by_a[a]:
            if b % a in seen:
                return True
            seen.add(b % a)
    for i, a1 in enumerate(steps):
        for a2 in steps[i + 1:]:
            g = math.gcd(a1, a2)
            res = {b % g for b in by_a[a1]}
            if any(b % g in res for b in by_a[a2]):
                return True
    return False


def _ap_families_intersect(aps1, aps2):
    by1 = _group_by_step(aps1)
    by2 = _group_by_step(aps2)
    for a1, bs1 in by1.items():
        for a2, bs2 in by2.items():
            g = math.gcd(a1, a2)
            res = {b % g for b in bs1}
            if any(b % g in res for b in bs2):
                return True
    return False


def _try_modulus(rai, d):
    """Rebuild with modulus d if the map is affine on every class mod d."""
    reps = 2 * (rai.modulus // d) + 2
    cand = fit_rai(rai.apply, d, rai.threshold, verify_reps=reps, validate=False)
    return cand


def fit_rai(func, modulus, threshold, verify_reps=4, validate=True):
    """Build an RAI from a point function known to be eventually affine per
    class mod ``modulus`` beyond ``threshold``; returns None if the fit fails
    verification on ``verify_reps`` further periods or fails the injectivity
    validation (both signal that the threshold or modulus was too small)."""
    exceptions = tuple(func(x) for x in range(threshold))
    coefs = []
    for r in range(modulus):
        x0 = threshold + ((r - threshold) % modulus)
        v0 = func(x0)
        v1 = func(x0 + modulus)
        a = v1 - v0
        if a < 1:
            return None
        coefs.append((a, v0))
    rai = ResidueAffineInjection(modulus, threshold, tuple(coefs), exceptions)
    hi = threshold + (verify_reps + 1) * modulus
    for x in range(hi):
        if rai.apply(x) != func(x):
            return None
    if validate:
        try:
            rai.validate()
        except TransopError:
            return None
    return rai


def make_rai(modulus, threshold, coefs, exceptions=()):
    rai = ResidueAffineInjection(modulus, threshold, tuple(tuple(c) for c in coefs),
                                 tuple(exceptions))
    rai.validate()
    return rai.normalize()


RAI_IDENTITY = make_rai(1, 0, [(1, 0)])


def rai_affine(a, b):
    """x |-> a*x + b (modulus 1, so the class parameter is x itself)."""
    return make_rai(1, 0, [(a, b)])


def rai_compose(f, g):
    """f o g, rebuilt in canonical form.

    On a class mod (g.modulus * f.modulus) beyond a computed threshold, g's
    branch and the f-branch of g's value are both constant, so the composite
    is affine in the class parameter.
    """
    m = g.modulus * f.modulus
    t_start = g.threshold
    for r in range(g.modulus):
        a, b = g.coefs[r]
        # first t with a*t + b >= f.threshold
        t = max(0, -(-(f.threshold - b) // a))
        t_start = max(t_start, g.start(r) + g.modulus * t)
    out = fit_rai(lambda x: f.apply(g.apply(x)), m, t_start)
    assert out is not None, "composite failed to fit (internal error)"
    return out.normalize()


def rai_images_disjoint(f, g):
    """Whether im(f) and im(g) are disjoint subsets of N."""
    if _ap_families_intersect(f.image_aps(), g.image_aps()):
        return False
    for v in f.exceptions:
        if g.in_image(v):
            return False
    for v in g.exceptions:
        if f.in_image(v):
            return False
    return True


def random_rai(rng, max_modulus=3, max_threshold=3, max_a=4, max_b=12, attempts=400):
    """A seeded random injection within the documented sampler caps."""
    for _ in range(attempts):
        m = rng.randint(1, max_modulus)
        n0 = rng.randint(0, max_threshold)
        coefs = tuple((rng.randint(1, max_a), rng.randint(0, max_b)) for _ in range(m))
        exceptions = tuple(rng.randint(0, 4 * max_b) for _ in range(n0))
        try:
            cand = ResidueAffineInjection(m, n0, coefs, exceptions).validate()
        except TransopError:
            continue
        return cand.normalize()
    raise TransopError("could not sample an injective map")


EVEN_SHIFT = rai_affine(2, 0)
ODD_SHIFT = rai_affine(2, 1)


def iso_monoid(sampler=None):
    """Injective self-maps of N under composition, disjoint when their images
    are; the discrete stand-in for the unary linear-isometries monoid.

    ``sampler`` overrides the random generator; the default draws within the
    documented caps.  Operad-level checks use ``small=True`` samplers (pure
    affine maps) because nested conjugations multiply residue moduli.
    """
    carrier = MonoidHandle(mul=rai_compose, one=RAI_IDENTITY,
                           sample=sampler or random_rai, label="iso")
    return IntersectionMonoidSpec(carrier=carrier, vee=rai_images_disjoint,
                                  disjoint_seed=(EVEN_SHIFT, ODD_SHIFT))


def small_rai(rng):
    """Affine maps x -> a*x + b with a tiny exception twist; modulus 1 keeps
    nested conjugations and products representable at desk scale."""
    a = rng.randint(1, 3)
    b = rng.randint(0, 6)
    return rai_affine(a, b)


def small_steiner(rng):
    sigma = small_rai(rng)
    offset = {}
    for _ in range(rng.randint(0, 2)):
        offset[rng.randint(0, 6)] = rng.randint(1, 3)
    return make_steiner(sigma, offset)


# ---------------------------------------------------------------------------
# discrete Steiner elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscreteSteinerElement:
    """(sigma, c): the map x |-> sigma_* x + c on finitely supported sequences."""

    sigma: ResidueAffineInjection
    offset: tuple  # sorted ((index, value)) pairs with value >= 1

    def offset_at(self, i):
        for j, v in self.offset:
            if j == i:
                return v
        return 0

    def support(self):
        return [j for j, _ in self.offset]

    def coordinate_constraint(self, i):
        """('ge' | 'eq', bound) for y(i) over the image of this element."""
        if self.sigma.in_image(i):
            return ("ge", self.offset_at(i))
        return ("eq", self.offset_at(i))

    def __repr__(self):
        return f"Steiner({self.sigma!r}, c={dict(self.offset)})"


def make_steiner(sigma, offset):
    off = tuple(sorted((int(i), int(v)) for i, v in dict(offset).items() if v))
    for i, v in off:
        if i < 0 or v < 0:
            raise TransopError("offset entries must be non-negative")
    return DiscreteSteinerElement(sigma=sigma, offset=off)


STEINER_IDENTITY = make_steiner(RAI_IDENTITY, {})


def steiner_compose(h1, h2):
    """(sigma1, c1) o (sigma2, c2) = (sigma1 sigma2, sigma1_* c2 + c1)."""
    sigma = rai_compose(h1.sigma, h2.sigma)
    pushed = {h1.sigma.apply(i): v for i, v in h2.offset}
    for i, v in h1.offset:
        pushed[i] = pushed.get(i, 0) + v
    return make_steiner(sigma, pushed)


def steiner_images_disjoint(h1, h2):
    """No sequence lies in both images.

    Feasibility is coordinatewise; coordinates outside both offset supports
    are always feasible, so only the supports need checking.
    """
    for i in set(h1.support()) | set(h2.support()):
        k1, b1 = h1.coordinate_constraint(i)
        k2, b2 = h2.coordinate_constraint(i)
        if k1 == "eq" and k2 == "eq":
            feasible = b1 == b2
        elif k1 == "eq":
            feasible = b1 >= b2
        elif k2 == "eq":
            feasible = b2 >= b1
        else:
            feasible = True
        if not feasible:
            return True
    return False


def random_steiner(rng, max_support=4, max_value=6, **rai_caps):
    sigma = random_rai(rng, **rai_caps)
    k = rng.randint(0, max_support)
    offset = {}
    for _ in range(k):
        offset[rng.randint(0, 12)] = rng.randint(1, max_value)
    return make_steiner(sigma, offset)


def steiner_monoid(sampler=None):
    """Translated coordinate embeddings; the discrete stand-in for the unary
    Steiner monoid, with disjointness of the denoted maps' images."""
    carrier = MonoidHandle(mul=steiner_compose, one=STEINER_IDENTITY,
                           sample=sampler or random_steiner, label="steiner")
    seed = (make_steiner(EVEN_SHIFT, {}), make_steiner(EVEN_SHIFT, {1: 1}))
    return IntersectionMonoidSpec(carrier=carrier, vee=steiner_images_disjoint,
                                  disjoint_seed=seed)


# ---------------------------------------------------------------------------
# the conjugation pairing xi(f, h) = "f h f^{-1} inside im f, identity off it"
# ---------------------------------------------------------------------------

def rai_conjugate(f, sigma):
    """The injection i |-> f(sigma(f^{-1}(i))) on im f, i off im f.

    Eventually affine per class modulo lcm over f-branches of a_r * p_r,
    where p_r is the period with which (f o sigma)'s branch selection cycles
    along f's branch r.
    """
    g1 = rai_compose(f, sigma)
    # along f's branch r, (f o sigma)'s branch selection cycles with period p
    # in the branch parameter, so the image class i = b_r + a_r*t is affine on
    # classes modulo a_r * p
    p = g1.modulus // math.gcd(f.modulus, g1.modulus)
    modulus = 1
    for a, _b in f.coefs:
        modulus = _lcm(modulus, a * max(p, 1))

    def conj(i):
        x = f.preimage(i)
        if x is None:
            return i
        return g1.apply(x)

    # the sporadic region of conj extends to the f-image of g1's own sporadic
    # region (x below g1.threshold), not just to the thresholds themselves
    threshold = max([f.threshold, g1.threshold, 1]
                    + [b + a for a, b in f.coefs]
                    + [v + 1 for v in f.exceptions]
                    + [f.apply(x) + 1 for x in range(g1.threshold + f.threshold + 1)])
    for _ in range(8):
        out = fit_rai(conj, modulus, threshold)
        if out is not None:
            final = out.normalize()
            assert all(final.apply(x) == conj(x)
                       for x in range(threshold + 2 * modulus)), "conjugation fit drifted"
            return final
        threshold *= 2
    raise TransopError("conjugation did not stabilize (internal error)")


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def xi_conjugation(f, h):
    """xi(f, (sigma, c)) = (f |> sigma, f_* c)."""
    sigma = rai_conjugate(f, h.sigma)
    pushed = {f.apply(i): v for i, v in h.offset}
    return make_steiner(sigma, pushed)


def iso_steiner_pairing(small=False):
    """The intersection-mode pairing of iso_monoid on steiner_monoid.

    ``small=True`` restricts the samplers to the affine sub-family for the
    operad-level axiom checks, where lambda nests xi three deep.
    """
    if small:
        return MonoidPairing(M=iso_monoid(small_rai), N=steiner_monoid(small_steiner),
                             xi=xi_conjugation, mode="intersection")
    return MonoidPairing(M=iso_monoid(), N=steiner_monoid(),
                         xi=xi_conjugation, mode="intersection")
