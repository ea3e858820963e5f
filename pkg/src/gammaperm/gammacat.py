"""Truncated diagrams of based categories over finite based sets.

A truncated diagram assigns a finite based category to every level 0..bound,
the point at level 0, and a based functor to every based map between levels,
covariantly.  Levels stand for the based sets {0..n} with basepoint 0.

Three constructions live here.  The level multifunctor of a diagram sends the
level n to its category and a levels multimorphism to the tuple of coordinate
collapses.  The convolution smash of two diagrams is computed levelwise as a
colimit over all pairs of input levels with a based map from their product
into the output level, restricted to the truncations.  Twisted
transformations package families of based functors out of iterated smash
products of levels, one for each level tuple, landing in a target diagram at
the product level; their coherence (multinaturality in each slot, order
independence across slots) is checked instance by instance.

Everything is eager and exhaustive within the bounds, and fails loudly when a
level outside a truncation is needed; nothing is ever clamped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

from . import fincat, multicat, perms
from .errors import (ArityMismatch, CoherenceFailure, LevelOutOfRange,
                     NaturalityFailure, TruncationTooSmall)


# based maps between the sets {0..n}


@dataclass(frozen=True)
class GammaMap:
    """A based map {0..src} -> {0..dst}; fn[j-1] is the image of j >= 1."""

    src: int
    dst: int
    fn: tuple

    def __post_init__(self):
        assert len(self.fn) == self.src
        assert all(0 <= v <= self.dst for v in self.fn)

    def __call__(self, j):
        return self.fn[j - 1] if j else 0


def gm_identity(n):
    return GammaMap(n, n, tuple(range(1, n + 1)))


def gm_compose(g, f):
    """f first, then g, matching the composition order of functors."""
    assert f.dst == g.src
    return GammaMap(f.src, g.dst, tuple(g(v) for v in f.fn))


def based_maps(n, m):
    """All based maps {0..n} -> {0..m}, in lexicographic order."""
    return tuple(GammaMap(n, m, fn)
                 for fn in itertools.product(range(m + 1), repeat=n))


def gm_smash(f, g):
    """The smash of two based maps along the lexicographic identification.

    The pair (a, b) with a in {1..m}, b in {1..n} sits at index (a-1)n + b,
    second coordinate innermost, and identified pairs with a 0 coordinate all
    sit at the basepoint.
    """
    n, n2 = g.src, g.dst
    out = []
    for t in range(1, f.src * g.src + 1):
        a, b = perms.lex_index_to_pair(t, n)
        va, vb = f(a), g(b)
        out.append(perms.lex_pair_to_index(va, vb, n2) if va and vb else 0)
    return GammaMap(f.src * g.src, f.dst * g.dst, tuple(out))


def gm_transpose(n, m):
    """{0..nm} -> {0..mn} swapping the two lexicographic coordinates."""
    out = []
    for t in range(1, n * m + 1):
        b, a = perms.lex_index_to_pair(t, m)
        out.append(perms.lex_pair_to_index(a, b, n))
    return GammaMap(n * m, m * n, tuple(out))


def coordinate_collapses(f):
    """The collapse {0..tgt} -> {0..n_i} reading off the i-th source of a
    levels multimorphism; entries drawn from other sources go to 0."""
    out = []
    for i, n in enumerate(f.srcs, start=1):
        fn = tuple(k if j == i else 0 for (j, k) in f.fn)
        out.append(GammaMap(f.tgt, n, fn))
    return tuple(out)


# truncated diagrams


class TruncGammaCat:
    """A diagram over based sets, truncated to levels 0..bound.

    levels maps each level to a FinBasedCat, with the point at level 0.
    action maps every GammaMap within the truncation to a based functor
    between the corresponding level categories.  Construction checks shape
    only; validate() checks the functor laws exhaustively.
    """

    __slots__ = ("bound", "levels", "action")

    def __init__(self, bound, levels, action, check=True):
        self.bound = int(bound)
        self.levels = dict(levels)
        self.action = dict(action)
        if check:
            if sorted(self.levels) != list(range(self.bound + 1)):
                raise ValueError("levels must cover exactly 0..bound")
            if not self.levels[0].is_point():
                raise ValueError("level 0 is not the point")
            need = {f for n in range(self.bound + 1)
                    for m in range(self.bound + 1) for f in based_maps(n, m)}
            if set(self.action) != need:
                raise ValueError("action table does not cover the truncation")
            for f, F in self.action.items():
                if not isinstance(F, fincat.BasedFunctor):
                    raise ValueError("action at %r is not a based functor" % (f,))
                if F.src != self.levels[f.src] or F.dst != self.levels[f.dst]:
                    raise ValueError("action at %r has wrong endpoints" % (f,))

    def level(self, n):
        if not 0 <= n <= self.bound:
            raise LevelOutOfRange("level %d outside truncation 0..%d"
                                  % (n, self.bound))
        return self.levels[n]

    def act(self, f):
        if not (0 <= f.src <= self.bound and 0 <= f.dst <= self.bound):
            raise LevelOutOfRange("map %d -> %d outside truncation 0..%d"
                                  % (f.src, f.dst, self.bound))
        return self.action[f]

    def validate(self):
        """Exhaustive functoriality over the truncation.  Quadratic in the
        number of based maps, so meant for small bounds."""
        if not self.levels[0].is_point():
            raise ValueError("level 0 is not the point")
        for c in self.levels.values():
            c.validate()
        for F in self.action.values():
            F.validate()
        for n in range(self.bound + 1):
            if self.act(gm_identity(n)) != fincat.identity_functor(self.levels[n]):
                raise ValueError("identity map at level %d not sent to the "
                                 "identity functor" % n)
        for n in range(self.bound + 1):
            for m in range(self.bound + 1):
                for f in based_maps(n, m):
                    Ff = self.act(f)
                    for k in range(self.bound + 1):
                        for g in based_maps(m, k):
                            if self.act(gm_compose(g, f)) != Ff.then(self.act(g)):
                                raise ValueError("action not functorial on "
                                                 "(%r, %r)" % (g, f))
        return True

    def __eq__(self, other):
        if not isinstance(other, TruncGammaCat):
            return NotImplemented
        return (self.bound == other.bound and self.levels == other.levels
                and self.action == other.action)

    __hash__ = None

    def __repr__(self):
        return "TruncGammaCat(bound=%d)" % self.bound


def _thin_functor(c, d, ob):
    # image of a morphism in a thin target is forced by its endpoints
    om = {a: ob(a) for a in c.objects}
    mm = {}
    for m in c.morphisms():
        hom = d.hom(om[c.src(m)], om[c.dst(m)])
        assert len(hom) == 1
        mm[m] = hom[0]
    return fincat.BasedFunctor(c, d, om, mm, check=False)


def _materialize(bound, levels, rule):
    action = {}
    for n in range(bound + 1):
        for m in range(bound + 1):
            for f in based_maps(n, m):
                action[f] = rule(f)
    return TruncGammaCat(bound, levels, action)


def point_gamma(bound):
    """The constant diagram on the point."""
    pt = fincat.terminal()
    levels = {n: pt for n in range(bound + 1)}
    return _materialize(bound, levels, lambda f: fincat.identity_functor(pt))


def unit_gamma(bound):
    """Level n is the discrete based category on {0..n}; maps act directly.

    Level 1 is the two object discrete category, the unit for the smash, and
    this diagram is the unit for the convolution up to levelwise iso.
    """
    levels = {n: fincat.discrete(tuple(range(n + 1)), 0)
              for n in range(bound + 1)}
    return _materialize(
        bound, levels,
        lambda f: _thin_functor(levels[f.src], levels[f.dst], f))


def codiscrete_gamma(bound):
    """Level n is the codiscrete based category on {0..n}."""
    levels = {n: fincat.codiscrete(tuple(range(n + 1)), 0)
              for n in range(bound + 1)}
    return _materialize(
        bound, levels,
        lambda f: _thin_functor(levels[f.src], levels[f.dst], f))


def power_gamma(elements, add, zero, bound):
    """Levelwise powers of a finite commutative monoid, discrete levels.

    Level n holds the n-tuples of elements; a based map pushes a tuple
    forward by summing each fiber, so functoriality is the regrouping of
    finite sums.
    """
    elements = tuple(elements)
    levels = {n: fincat.discrete(tuple(itertools.product(elements, repeat=n)),
                                 (zero,) * n)
              for n in range(bound + 1)}

    def push(f, v):
        out = []
        for i in range(1, f.dst + 1):
            acc = zero
            for j in range(1, f.src + 1):
                if f.fn[j - 1] == i:
                    acc = add(acc, v[j - 1])
            out.append(acc)
        return tuple(out)

    return _materialize(
        bound, levels,
        lambda f: _thin_functor(levels[f.src], levels[f.dst],
                                lambda v: push(f, v)))


# the level multifunctor


class AImage(multicat.Multifunctor):
    """The level multifunctor of a truncated diagram.

    Objects (levels) go to their categories.  A levels multimorphism
    (n_1..n_r) -> m goes to the backwards multimorphism carried by the tuple
    of coordinate collapse actions, one per source.  Multifunctoriality is a
    theorem about the diagram's action and is checked by the test suite, not
    assumed.
    """

    def __init__(self, x):
        self.x = x
        super().__init__(multicat.nn(), multicat.catstar_op(),
                         x.level, self._mor_of)

    def _mor_of(self, f):
        srcs = tuple(self.x.level(n) for n in f.srcs)
        tgt = self.x.level(f.tgt)
        if not srcs:
            functor = fincat.constant_functor(tgt, fincat.nary_product(()))
        else:
            coords = tuple(self.x.act(g) for g in coordinate_collapses(f))
            functor = fincat.tuple_functor(coords, fincat.nary_product(srcs))
        return multicat.CatStarMor(srcs, tgt, functor)

    def __eq__(self, other):
        if not isinstance(other, AImage):
            return NotImplemented
        return self.x == other.x

    __hash__ = None


def a_of(x):
    return AImage(x)


# iterated smash products, left nested


def smash_n(cats):
    """Left nested smash; the empty smash is the two object unit."""
    cats = tuple(cats)
    if not cats:
        return fincat.s0()
    cur = cats[0]
    for c in cats[1:]:
        cur = fincat.smash(cur, c).cat
    return cur


def smash_n_functor(fs):
    """The functor between left nested smashes induced slotwise."""
    fs = tuple(fs)
    if not fs:
        return fincat.identity_functor(fincat.s0())
    cur = fs[0]
    for f in fs[1:]:
        cur = fincat.smash_functor(fincat.smash(cur.src, f.src),
                                   fincat.smash(cur.dst, f.dst), cur, f)
    return cur


def smash_ob(cats, xs):
    """The object of the left nested smash carrying one object per slot."""
    cats = tuple(cats)
    if not cats:
        return "x"
    cur, ob = cats[0], xs[0]
    for c, x in zip(cats[1:], xs[1:]):
        sr = fincat.smash(cur, c)
        ob = sr.obj_class((ob, x))
        cur = sr.cat
    return ob


def smash_mor(cats, ms):
    """The morphism of the left nested smash carrying one morphism per slot."""
    cats = tuple(cats)
    if not cats:
        return fincat.s0().identity("x")
    cur, mor = cats[0], ms[0]
    for c, m in zip(cats[1:], ms[1:]):
        sr = fincat.smash(cur, c)
        mor = sr.mor_class((mor, m))
        cur = sr.cat
    return mor


def smash_whisker(cats, i, f):
    """Apply f in slot i of the left nested smash, identities elsewhere."""
    cats = tuple(cats)
    assert f.src == cats[i]
    fs = [fincat.identity_functor(c) for c in cats]
    fs[i] = f
    return smash_n_functor(fs)


def smash_split(xs, ys):
    """Iso from the flat smash of xs + ys to smash(smash_n(xs), smash_n(ys)).

    Built from associators; an empty half contributes the unit through the
    inclusion at its nonbase object.
    """
    xs, ys = tuple(xs), tuple(ys)
    if not xs:
        return fincat.smash_include(fincat.smash(fincat.s0(), smash_n(ys)),
                                    "right")
    if not ys:
        return fincat.smash_include(fincat.smash(smash_n(xs), fincat.s0()),
                                    "left")
    if len(ys) == 1:
        return fincat.identity_functor(smash_n(xs + ys))
    head, last = ys[:-1], ys[-1]
    inner = smash_split(xs, head)
    A, H = smash_n(xs), smash_n(head)
    W = fincat.smash_functor(fincat.smash(smash_n(xs + head), last),
                             fincat.smash(fincat.smash(A, H).cat, last),
                             inner, fincat.identity_functor(last))
    return W.then(fincat.smash_assoc_iso(A, H, last))


def smash_regroup(blocks):
    """Iso from the flat smash of all entries to the left nested smash of the
    per block smashes.  Empty blocks contribute the unit."""
    blocks = [tuple(b) for b in blocks]
    if not blocks:
        return fincat.identity_functor(fincat.s0())
    if len(blocks) == 1:
        return fincat.identity_functor(smash_n(blocks[0]))
    rest, last = blocks[:-1], blocks[-1]
    prev = smash_regroup(rest)
    flat_rest = tuple(itertools.chain.from_iterable(rest))
    split = smash_split(flat_rest, last)
    W = fincat.smash_functor(fincat.smash(smash_n(flat_rest), smash_n(last)),
                             fincat.smash(prev.dst, smash_n(last)),
                             prev, fincat.identity_functor(smash_n(last)))
    return split.then(W)


def _smash_adjacent_swap(cats, i):
    cats = tuple(cats)
    A, B = cats[i], cats[i + 1]
    if i == 0:
        iso = fincat.smash_swap_iso(A, B)
    else:
        L = smash_n(cats[:i])
        a1 = fincat.smash_assoc_iso(L, A, B)
        W = fincat.smash_functor(fincat.smash(L, fincat.smash(A, B).cat),
                                 fincat.smash(L, fincat.smash(B, A).cat),
                                 fincat.identity_functor(L),
                                 fincat.smash_swap_iso(A, B))
        a2 = fincat.smash_assoc_iso(L, B, A)
        iso = a1.then(W).then(a2.inverse())
    for j in range(i + 2, len(cats)):
        iso = fincat.smash_functor(fincat.smash(iso.src, cats[j]),
                                   fincat.smash(iso.dst, cats[j]),
                                   iso, fincat.identity_functor(cats[j]))
    return iso


def smash_perm_iso(cats, perm):
    """Iso smash_n(cats) -> smash_n(apply_perm(perm, cats)), composed from
    adjacent swaps conjugated by associators."""
    cats = list(cats)
    perm = tuple(perm)
    assert perms.is_perm(perm) and len(perm) == len(cats)
    cur = fincat.identity_functor(smash_n(tuple(cats)))
    slots = list(range(len(cats)))
    changed = True
    while changed:
        changed = False
        for j in range(len(cats) - 1):
            if perm[slots[j]] > perm[slots[j + 1]]:
                cur = cur.then(_smash_adjacent_swap(tuple(cats), j))
                slots[j], slots[j + 1] = slots[j + 1], slots[j]
                cats[j], cats[j + 1] = cats[j + 1], cats[j]
                changed = True
    return cur


# twisted transformations


class TwistedTransformation:
    """A family of based functors out of smashed levels of several diagrams.

    srcs is a tuple of level multifunctors (AImage values) F_1..F_r and dst a
    level multifunctor G.  components maps every level tuple (m_1..m_r) with
    m_i within the i-th truncation and product within the target truncation
    to a based functor

        F_1(m_1) smash ... smash F_r(m_r)  ->  G(m_1 * ... * m_r)

    with the smash left nested.  Arity zero is allowed: the single component
    at () goes from the two object unit to G(1).
    """

    def __init__(self, srcs, dst, components, check=True):
        self.srcs = tuple(srcs)
        self.dst = dst
        self.components = dict(components)
        if check:
            keys = self.keys()
            if set(self.components) != set(keys):
                raise ValueError("components must cover exactly the level "
                                 "tuples inside the truncations")
            for key in keys:
                F = self.components[key]
                if not isinstance(F, fincat.BasedFunctor):
                    raise ValueError("component at %r is not based" % (key,))
                if F.src != self.source_cat(key):
                    raise ValueError("component at %r has wrong source" % (key,))
                if F.dst != self.dst.x.level(prod(key)):
                    raise ValueError("component at %r has wrong target" % (key,))
                F.validate()

    def arity(self):
        return len(self.srcs)

    def keys(self):
        rngs = [range(F.x.bound + 1) for F in self.srcs]
        return [t for t in itertools.product(*rngs)
                if prod(t) <= self.dst.x.bound]

    def source_cat(self, levels):
        return smash_n(tuple(F.x.level(l) for F, l in zip(self.srcs, levels)))

    def component(self, levels):
        levels = tuple(levels)
        try:
            return self.components[levels]
        except KeyError:
            raise LevelOutOfRange("no component at %r" % (levels,)) from None

    def __eq__(self, other):
        if not isinstance(other, TwistedTransformation):
            return NotImplemented
        return (self.srcs == other.srcs and self.dst == other.dst
                and self.components == other.components)

    __hash__ = None

    # coherence, instance by instance

    def _level_cats(self, levels):
        return tuple(F.x.level(l) for F, l in zip(self.srcs, levels))

    def _one_ary_step(self, levels, i, g):
        """The target side action of a one source multimorphism in slot i:
        a functor G(prod levels) -> G(prod of levels with slot i at g's
        source), together with the updated level tuple."""
        assert len(g.srcs) == 1 and g.tgt == levels[i]
        ring = multicat.nn_ring()
        big = ring.right(ring.left(prod(levels[:i]), g), prod(levels[i + 1:]))
        Gm = self.dst.mor(big)
        prod_cat = fincat.nary_product(tuple(Gm.srcs))
        step = Gm.functor.then(fincat.proj_functor(prod_cat, Gm.srcs, 0))
        new_levels = levels[:i] + (g.srcs[0],) + levels[i + 1:]
        return new_levels, step

    def check_slot(self, i, g, rest):
        """Multinaturality in slot i at the multimorphism g, the other slots
        frozen at the levels in rest (a tuple of length arity-1).

        Raises CoherenceFailure when the square does not commute.
        """
        rest = tuple(rest)
        levels = rest[:i] + (g.tgt,) + rest[i:]
        cats = self._level_cats(levels)
        ring = multicat.nn_ring()
        big = ring.right(ring.left(prod(levels[:i]), g), prod(levels[i + 1:]))
        route1 = self.component(levels).then(self.dst.mor(big).functor)

        Fg = self.srcs[i].mor(g)
        src_cats = tuple(self.srcs[i].x.level(k) for k in g.srcs)
        prod_i = fincat.nary_product(src_cats)
        parts = []
        for j, k in enumerate(g.srcs):
            w = Fg.functor.then(fincat.proj_functor(prod_i, src_cats, j))
            W = smash_whisker(cats, i, w)
            lv2 = levels[:i] + (k,) + levels[i + 1:]
            parts.append(W.then(self.component(lv2)))
        if parts:
            route2 = fincat.tuple_functor(
                parts, fincat.nary_product(tuple(p.dst for p in parts)))
        else:
            route2 = fincat.constant_functor(smash_n(cats),
                                             fincat.nary_product(()))
        if route1 != route2:
            raise CoherenceFailure("slot multinaturality", (i, g, rest))
        return True

    def check_bilinear(self, i, i2, g, h, rest):
        """Order independence of one source multimorphisms acting in two
        different slots i < i2; rest freezes the remaining arity-2 slots."""
        assert i < i2 and len(g.srcs) == 1 and len(h.srcs) == 1
        rest = tuple(rest)
        levels = list(rest[:i]) + [g.tgt] + list(rest[i:i2 - 1]) + [h.tgt] \
            + list(rest[i2 - 1:])
        levels = tuple(levels)
        cats = self._level_cats(levels)
        phi = self.component(levels)

        lv_g, step_g = self._one_ary_step(levels, i, g)
        _, step_gh = self._one_ary_step(lv_g, i2, h)
        route_a = phi.then(step_g).then(step_gh)

        lv_h, step_h = self._one_ary_step(levels, i2, h)
        _, step_hg = self._one_ary_step(lv_h, i, g)
        route_b = phi.then(step_h).then(step_hg)

        wg = self.srcs[i].mor(g)
        wh = self.srcs[i2].mor(h)
        pg = fincat.proj_functor(fincat.nary_product(tuple(wg.srcs)),
                                 wg.srcs, 0)
        ph = fincat.proj_functor(fincat.nary_product(tuple(wh.srcs)),
                                 wh.srcs, 0)
        W1 = smash_whisker(cats, i, wg.functor.then(pg))
        cats2 = tuple(self._level_cats(lv_g))
        W2 = smash_whisker(cats2, i2, wh.functor.then(ph))
        lv_both = lv_g[:i2] + (h.srcs[0],) + lv_g[i2 + 1:]
        route_c = W1.then(W2).then(self.component(lv_both))

        if not (route_a == route_b == route_c):
            raise CoherenceFailure("cross slot interchange", (i, i2, g, h, rest))
        return True

    def validate(self, max_inner_arity=2, bilinear=True):
        """Check every slot multinaturality square whose data fits in the
        truncations, with inner arity up to max_inner_arity, and (optionally)
        every one source interchange instance across slot pairs."""
        r = self.arity()
        levels = multicat.nn()
        for i in range(r):
            bi = self.srcs[i].x.bound
            rest_rngs = [range(self.srcs[j].x.bound + 1)
                         for j in range(r) if j != i]
            for rest in itertools.product(*rest_rngs):
                ctx = prod(rest)
                for mi in range(bi + 1):
                    if ctx * mi > self.dst.x.bound:
                        continue
                    for s in range(max_inner_arity + 1):
                        for ks in itertools.product(range(bi + 1), repeat=s):
                            if any(ctx * k > self.dst.x.bound for k in ks):
                                continue
                            for g in levels.multihom(ks, mi):
                                self.check_slot(i, g, rest)
        if bilinear and r >= 2:
            for i in range(r):
                for i2 in range(i + 1, r):
                    self._validate_pair(i, i2)
        return True

    def _validate_pair(self, i, i2):
        r = self.arity()
        levels = multicat.nn()
        bi, bi2 = self.srcs[i].x.bound, self.srcs[i2].x.bound
        rest_rngs = [range(self.srcs[j].x.bound + 1)
                     for j in range(r) if j not in (i, i2)]
        for rest in itertools.product(*rest_rngs):
            ctx = prod(rest)
            for mg in range(bi + 1):
                for kg in range(bi + 1):
                    for mh in range(bi2 + 1):
                        for kh in range(bi2 + 1):
                            caps = (mg * mh, mg * kh, kg * mh, kg * kh)
                            if any(ctx * c > self.dst.x.bound for c in caps):
                                continue
                            for g in levels.multihom((kg,), mg):
                                for h in levels.multihom((kh,), mh):
                                    self.check_bilinear(i, i2, g, h, rest)


def twisted_identity(F):
    """The arity one identity transformation on a level multifunctor."""
    comps = {(m,): fincat.identity_functor(F.x.level(m))
             for m in range(F.x.bound + 1)}
    return TwistedTransformation((F,), F, comps)


def twisted_compose(outer, inners):
    """Composite transformation: inner families feed the outer slots.

    The component at a flat level tuple regroups the flat smash into per
    inner blocks, applies each inner component, and finishes with the outer
    component at the block products.  Raises TruncationTooSmall when a block
    product escapes the truncation of the outer source it feeds.
    """
    inners = tuple(inners)
    if len(inners) != len(outer.srcs):
        raise ArityMismatch("outer arity %d, %d inner transformations"
                            % (len(outer.srcs), len(inners)))
    for t, F in zip(inners, outer.srcs):
        if not t.dst == F:
            raise ArityMismatch("inner target does not match outer source")
    srcs = tuple(itertools.chain.from_iterable(t.srcs for t in inners))
    arities = [t.arity() for t in inners]
    comps = {}
    rngs = [range(F.x.bound + 1) for F in srcs]
    for flat in itertools.product(*rngs):
        if prod(flat) > outer.dst.x.bound:
            continue
        blocks = []
        pos = 0
        for a in arities:
            blocks.append(flat[pos:pos + a])
            pos += a
        Ms = tuple(prod(b) for b in blocks)
        for M, F in zip(Ms, outer.srcs):
            if M > F.x.bound:
                raise TruncationTooSmall(
                    "block product %d escapes the bound %d of an outer "
                    "source" % (M, F.x.bound))
        block_cats = []
        for t, b in zip(inners, blocks):
            block_cats.append(tuple(F.x.level(l) for F, l in zip(t.srcs, b)))
        regroup = smash_regroup(block_cats)
        mid = smash_n_functor(tuple(t.component(b)
                                    for t, b in zip(inners, blocks)))
        comps[flat] = regroup.then(mid).then(outer.component(Ms))
    return TwistedTransformation(srcs, outer.dst, comps)


def sigma_twisted(t, perm):
    """Right permutation action on a transformation: source slot i moves to
    position perm[i], components reindex through the smash permutation iso."""
    perm = tuple(perm)
    assert perms.is_perm(perm) and len(perm) == t.arity()
    inv = perms.invert_perm(perm)
    srcs = perms.apply_perm(perm, t.srcs)
    comps = {}
    rngs = [range(F.x.bound + 1) for F in srcs]
    for key in itertools.product(*rngs):
        if prod(key) > t.dst.x.bound:
            continue
        old = perms.apply_perm(inv, key)
        cats_new = tuple(F.x.level(l) for F, l in zip(srcs, key))
        iso = smash_perm_iso(cats_new, inv)
        comps[key] = iso.then(t.component(old))
    return TwistedTransformation(srcs, t.dst, comps)


def a_on_map(components, x, y):
    """Levelwise maps x -> y commuting with both actions, packaged as the
    arity one transformation between the level multifunctors.

    components maps each level to a based functor x.level(n) -> y.level(n).
    Every naturality square within the truncation is checked; a failing
    square raises NaturalityFailure carrying the offending map as witness.
    """
    if x.bound != y.bound:
        raise TruncationTooSmall("level maps need equal truncations, got "
                                 "%d and %d" % (x.bound, y.bound))
    comps = dict(components)
    if sorted(comps) != list(range(x.bound + 1)):
        raise ValueError("one component per level 0..%d required" % x.bound)
    for n, F in comps.items():
        if F.src != x.level(n) or F.dst != y.level(n):
            raise ValueError("component at level %d has wrong endpoints" % n)
    for n in range(x.bound + 1):
        for m in range(x.bound + 1):
            for f in based_maps(n, m):
                if x.act(f).then(comps[m]) != comps[n].then(y.act(f)):
                    raise NaturalityFailure(
                        "level map does not commute with the action at %r"
                        % (f,), witness=f)
    return TwistedTransformation((a_of(x),), a_of(y),
                                 {(n,): comps[n] for n in comps})


def unit_eta(b):
    """The arity zero transformation into the unit diagram's multifunctor,
    carried by the iso from the two object unit onto level 1."""
    c1 = b.level(1)
    others = [a for a in c1.objects if a != c1.base]
    if len(others) != 1 or len(tuple(c1.morphisms())) != 2:
        raise ValueError("level 1 is not a two object discrete category")
    s = fincat.s0()
    F = fincat.BasedFunctor(
        s, c1,
        {"*": c1.base, "x": others[0]},
        {s.identity("*"): c1.identity(c1.base),
         s.identity("x"): c1.identity(others[0])})
    return TwistedTransformation((), a_of(b), {(): F})


# convolution smash


class DaySmash:
    """Levelwise convolution of two truncated diagrams.

    gamma is the resulting diagram; component(m, n) is the canonical pairing
    functor smash(X(m), Y(n)) -> gamma.level(m*n), the colimit injection at
    the identity structure map.
    """

    __slots__ = ("gamma", "left", "right", "colimits")

    def __init__(self, gamma, left, right, colimits):
        self.gamma = gamma
        self.left = left
        self.right = right
        self.colimits = colimits

    def component(self, m, n):
        k = m * n
        if m > self.left.bound or n > self.right.bound or k > self.gamma.bound:
            raise LevelOutOfRange("pairing (%d, %d) outside the truncations"
                                  % (m, n))
        return self.colimits[k].injections[(m, n, gm_identity(k).fn)]


def day_smash(x, y, out_bound, closure_bound=fincat.DEFAULT_CLOSURE_BOUND):
    """Convolution of two diagrams, truncated to levels 0..out_bound.

    Level k is the colimit of smash(X(m), Y(n)) over all m, n within the
    input truncations and all based maps {0..m*n} -> {0..k}, with one edge
    per pair of based maps between input levels making the structure maps
    agree.  The action on a based map k -> k2 reindexes the structure maps
    and is induced between the colimits.

    out_bound may not exceed the product of the input bounds: nodes beyond
    either input truncation cannot be enumerated, and pretending they do not
    exist would silently change every level.
    """
    if out_bound < 0:
        raise ValueError("negative output bound")
    if out_bound > x.bound * y.bound:
        raise TruncationTooSmall(
            "output bound %d exceeds the product %d of the input bounds"
            % (out_bound, x.bound * y.bound))
    pairs = [(m, n) for m in range(x.bound + 1) for n in range(y.bound + 1)]
    srs = {(m, n): fincat.smash(x.level(m), y.level(n)) for (m, n) in pairs}

    fcache = {}

    def edge_functor(m, n, m2, n2, a, b):
        key = (m, n, m2, n2, a.fn, b.fn)
        if key not in fcache:
            fcache[key] = fincat.smash_functor(
                srs[(m, n)], srs[(m2, n2)], x.act(a), y.act(b))
        return fcache[key]

    colimits = {}
    levels = {}
    for k in range(out_bound + 1):
        nodes = {}
        for (m, n) in pairs:
            for fn in itertools.product(range(k + 1), repeat=m * n):
                nodes[(m, n, fn)] = srs[(m, n)].cat
        edges = []
        for (m2, n2) in pairs:
            t2s = list(itertools.product(range(k + 1), repeat=m2 * n2))
            for (m, n) in pairs:
                for a in based_maps(m, m2):
                    for b in based_maps(n, n2):
                        if a == gm_identity(m) and b == gm_identity(n):
                            continue
                        ab = gm_smash(a, b)
                        F = edge_functor(m, n, m2, n2, a, b)
                        for t2 in t2s:
                            theta = gm_compose(GammaMap(m2 * n2, k, t2), ab)
                            edges.append(((m, n, theta.fn), (m2, n2, t2), F))
        col = fincat.colimit(nodes, edges, base=(0, 0, ()),
                             closure_bound=closure_bound)
        colimits[k] = col
        levels[k] = col.cat

    action = {}
    for k in range(out_bound + 1):
        for k2 in range(out_bound + 1):
            for g in based_maps(k, k2):
                cocone = {}
                for (m, n, fn) in colimits[k].nodes:
                    nf = gm_compose(g, GammaMap(m * n, k, fn)).fn
                    cocone[(m, n, fn)] = colimits[k2].injections[(m, n, nf)]
                action[g] = colimits[k].mediate(cocone, check=False)
    gamma = TruncGammaCat(out_bound, levels, action)
    return DaySmash(gamma, x, y, colimits)


def lambda_a(ds):
    """The pairing components of a convolution, packaged as the arity two
    transformation (AX, AY) -> A(X smash Y)."""
    comps = {}
    for m in range(ds.left.bound + 1):
        for n in range(ds.right.bound + 1):
            if m * n <= ds.gamma.bound:
                comps[(m, n)] = ds.component(m, n)
    return TwistedTransformation((a_of(ds.left), a_of(ds.right)),
                                 a_of(ds.gamma), comps)


def day_functor(ds, ds2, fx, fy, check=True):
    """Levelwise maps of both inputs induce levelwise maps of convolutions.

    fx and fy map levels to based functors ds.left -> ds2.left and
    ds.right -> ds2.right.  Returns the dict of induced level functors; feed
    it to a_on_map for the packaged transformation.
    """
    if ds.gamma.bound != ds2.gamma.bound:
        raise TruncationTooSmall("convolutions have different bounds")
    out = {}
    for k in range(ds.gamma.bound + 1):
        cocone = {}
        for (m, n, fn) in ds.colimits[k].nodes:
            W = fincat.smash_functor(
                fincat.smash(ds.left.level(m), ds.right.level(n)),
                fincat.smash(ds2.left.level(m), ds2.right.level(n)),
                fx[m], fy[n])
            cocone[(m, n, fn)] = W.then(ds2.colimits[k].injections[(m, n, fn)])
        out[k] = ds.colimits[k].mediate(cocone, check=check)
    return out


def _unit_slice(theta, a, n):
    # the structure map restricted to row a of the lexicographic grid
    iota = GammaMap(n, theta.src,
                    tuple(perms.lex_pair_to_index(a, b, n)
                          for b in range(1, n + 1)))
    return gm_compose(theta, iota)


def day_unit_left(ds):
    """For a left input with discrete levels on {0..m}, the convolution
    collapses onto the right input.  Returns the levelwise isos, built by
    evaluating each node at its left coordinate; raises CoherenceFailure
    if some level fails to be an iso."""
    x, y = ds.left, ds.right
    out = {}
    for k in range(ds.gamma.bound + 1):
        cocone = {}
        for (m, n, fn) in ds.colimits[k].nodes:
            theta = GammaMap(m * n, k, fn)
            sr = fincat.smash(x.level(m), y.level(n))
            P = sr.prod
            tgt = y.level(k)
            om = {}
            mm = {}
            for (a, b) in P.objects:
                om[(a, b)] = y.act(_unit_slice(theta, a, n)).ob(b) if a else tgt.base
            for (e, g) in P.morphisms():
                a = x.level(m).src(e)
                if a:
                    mm[(e, g)] = y.act(_unit_slice(theta, a, n)).mor(g)
                else:
                    mm[(e, g)] = tgt.identity(tgt.base)
            G = fincat.BasedFunctor(P, tgt, om, mm, check=False)
            cocone[(m, n, fn)] = fincat.descend(sr, G, check=True)
        F = ds.colimits[k].mediate(cocone, check=True)
        if not F.is_isomorphism():
            raise CoherenceFailure("unit collapse", k, "level map is not iso")
        out[k] = F
    return out


def day_unit_right(ds):
    """Mirror of day_unit_left for a right input with discrete levels."""
    x, y = ds.left, ds.right
    out = {}
    for k in range(ds.gamma.bound + 1):
        cocone = {}
        for (m, n, fn) in ds.colimits[k].nodes:
            theta = GammaMap(m * n, k, fn)
            sr = fincat.smash(x.level(m), y.level(n))
            P = sr.prod
            tgt = x.level(k)
            om = {}
            mm = {}
            for (a, b) in P.objects:
                if b:
                    rho = GammaMap(m, m * n,
                                   tuple(perms.lex_pair_to_index(a2, b, n)
                                         for a2 in range(1, m + 1)))
                    om[(a, b)] = x.act(gm_compose(theta, rho)).ob(a)
                else:
                    om[(a, b)] = tgt.base
            for (g, e) in P.morphisms():
                b = y.level(n).src(e)
                if b:
                    rho = GammaMap(m, m * n,
                                   tuple(perms.lex_pair_to_index(a2, b, n)
                                         for a2 in range(1, m + 1)))
                    mm[(g, e)] = x.act(gm_compose(theta, rho)).mor(g)
                else:
                    mm[(g, e)] = tgt.identity(tgt.base)
            G = fincat.BasedFunctor(P, tgt, om, mm, check=False)
            cocone[(m, n, fn)] = fincat.descend(sr, G, check=True)
        F = ds.colimits[k].mediate(cocone, check=True)
        if not F.is_isomorphism():
            raise CoherenceFailure("unit collapse", k, "level map is not iso")
        out[k] = F
    return out


def day_swap(ds, ds2):
    """Levelwise isos from a convolution to the reversed convolution,
    transposing each node through the smash symmetry."""
    if (ds.left, ds.right) != (ds2.right, ds2.left) \
            or ds.gamma.bound != ds2.gamma.bound:
        raise ValueError("second convolution must reverse the first")
    out = {}
    for k in range(ds.gamma.bound + 1):
        cocone = {}
        for (m, n, fn) in ds.colimits[k].nodes:
            theta = GammaMap(m * n, k, fn)
            tfn = gm_compose(theta, gm_transpose(n, m)).fn
            sw = fincat.smash_swap_iso(ds.left.level(m), ds.right.level(n))
            cocone[(m, n, fn)] = sw.then(ds2.colimits[k].injections[(n, m, tfn)])
        F = ds.colimits[k].mediate(cocone, check=True)
        if not F.is_isomorphism():
            raise CoherenceFailure("convolution symmetry", k,
                                   "level map is not iso")
        out[k] = F
    return out


# threefold convolution and the comparison isos


class DaySmash3:
    """Single colimit form of the threefold convolution, used to compare the
    two iterated convolutions through explicit isos."""

    __slots__ = ("gamma", "parts", "colimits")

    def __init__(self, gamma, parts, colimits):
        self.gamma = gamma
        self.parts = parts
        self.colimits = colimits

    def component(self, m, n, p):
        k = m * n * p
        x, y, z = self.parts
        if m > x.bound or n > y.bound or p > z.bound or k > self.gamma.bound:
            raise LevelOutOfRange("pairing (%d, %d, %d) outside the "
                                  "truncations" % (m, n, p))
        return self.colimits[k].injections[(m, n, p, gm_identity(k).fn)]


def day_smash3(x, y, z, out_bound, closure_bound=fincat.DEFAULT_CLOSURE_BOUND):
    """Threefold convolution over triples of levels in one colimit.

    The lexicographic identification is strictly associative, so the same
    structure map tuple indexes nodes here and in both iterated forms.
    """
    if out_bound > x.bound * y.bound * z.bound:
        raise TruncationTooSmall(
            "output bound %d exceeds the product %d of the input bounds"
            % (out_bound, x.bound * y.bound * z.bound))
    triples = [(m, n, p) for m in range(x.bound + 1)
               for n in range(y.bound + 1) for p in range(z.bound + 1)]
    srs = {}
    for (m, n, p) in triples:
        sab = fincat.smash(x.level(m), y.level(n))
        srs[(m, n, p)] = (sab, fincat.smash(sab.cat, z.level(p)))

    fcache = {}

    def edge_functor(src, dst, a, b, c):
        key = (src, dst, a.fn, b.fn, c.fn)
        if key not in fcache:
            inner = fincat.smash_functor(srs[src][0], srs[dst][0],
                                         x.act(a), y.act(b))
            fcache[key] = fincat.smash_functor(srs[src][1], srs[dst][1],
                                               inner, z.act(c))
        return fcache[key]

    colimits = {}
    levels = {}
    for k in range(out_bound + 1):
        nodes = {}
        for (m, n, p) in triples:
            for fn in itertools.product(range(k + 1), repeat=m * n * p):
                nodes[(m, n, p, fn)] = srs[(m, n, p)][1].cat
        edges = []
        for dst in triples:
            m2, n2, p2 = dst
            t2s = list(itertools.product(range(k + 1), repeat=m2 * n2 * p2))
            for src in triples:
                m, n, p = src
                for a in based_maps(m, m2):
                    for b in based_maps(n, n2):
                        for c in based_maps(p, p2):
                            if (a, b, c) == (gm_identity(m), gm_identity(n),
                                             gm_identity(p)):
                                continue
                            abc = gm_smash(gm_smash(a, b), c)
                            F = edge_functor(src, dst, a, b, c)
                            for t2 in t2s:
                                theta = gm_compose(
                                    GammaMap(m2 * n2 * p2, k, t2), abc)
                                edges.append(((m, n, p, theta.fn),
                                              (m2, n2, p2, t2), F))
        col = fincat.colimit(nodes, edges, base=(0, 0, 0, ()),
                             closure_bound=closure_bound)
        colimits[k] = col
        levels[k] = col.cat

    action = {}
    for k in range(out_bound + 1):
        for k2 in range(out_bound + 1):
            for g in based_maps(k, k2):
                cocone = {}
                for (m, n, p, fn) in colimits[k].nodes:
                    nf = gm_compose(g, GammaMap(m * n * p, k, fn)).fn
                    cocone[(m, n, p, fn)] = \
                        colimits[k2].injections[(m, n, p, nf)]
                action[g] = colimits[k].mediate(cocone, check=False)
    gamma = TruncGammaCat(out_bound, levels, action)
    return DaySmash3(gamma, (x, y, z), colimits)


class AssocComparison:
    """The threefold convolution next to both iterated forms.

    to_left and to_right map each level to isos from the threefold form onto
    ((x y) z) and (x (y z)); the iterated DaySmash values are kept so the
    pairing routes can be compared through these isos.
    """

    __slots__ = ("triple", "left_inner", "left", "right_inner", "right",
                 "to_left", "to_right")

    def __init__(self, triple, left_inner, left, right_inner, right,
                 to_left, to_right):
        self.triple = triple
        self.left_inner = left_inner
        self.left = left
        self.right_inner = right_inner
        self.right = right
        self.to_left = to_left
        self.to_right = to_right


def day_assoc_comparison(x, y, z, out_bound,
                         closure_bound=fincat.DEFAULT_CLOSURE_BOUND):
    """Build both iterated convolutions and the isos from the threefold form.

    The inner convolutions are taken at their full bounds so that every node
    of the outer ones exists.  Each level map is produced by a cocone and
    verified to be an iso; the cocone compatibility check is the real
    content, so it stays on.
    """
    ds_xy = day_smash(x, y, x.bound * y.bound, closure_bound)
    left = day_smash(ds_xy.gamma, z, out_bound, closure_bound)
    ds_yz = day_smash(y, z, y.bound * z.bound, closure_bound)
    right = day_smash(x, ds_yz.gamma, out_bound, closure_bound)
    triple = day_smash3(x, y, z, out_bound, closure_bound)

    to_left = {}
    to_right = {}
    for k in range(out_bound + 1):
        lc = {}
        rc = {}
        for (m, n, p, fn) in triple.colimits[k].nodes:
            sab = fincat.smash(x.level(m), y.level(n))
            W = fincat.smash_functor(
                fincat.smash(sab.cat, z.level(p)),
                fincat.smash(ds_xy.gamma.level(m * n), z.level(p)),
                ds_xy.component(m, n), fincat.identity_functor(z.level(p)))
            lc[(m, n, p, fn)] = W.then(
                left.colimits[k].injections[(m * n, p, fn)])

            A = fincat.smash_assoc_iso(x.level(m), y.level(n), z.level(p))
            W2 = fincat.smash_functor(
                fincat.smash(x.level(m), fincat.smash(y.level(n),
                                                      z.level(p)).cat),
                fincat.smash(x.level(m), ds_yz.gamma.level(n * p)),
                fincat.identity_functor(x.level(m)), ds_yz.component(n, p))
            rc[(m, n, p, fn)] = A.then(W2).then(
                right.colimits[k].injections[(m, n * p, fn)])
        u = triple.colimits[k].mediate(lc, check=True)
        v = triple.colimits[k].mediate(rc, check=True)
        if not (u.is_isomorphism() and v.is_isomorphism()):
            raise CoherenceFailure("convolution associativity", k,
                                   "comparison map is not iso")
        to_left[k] = u
        to_right[k] = v
    return AssocComparison(triple, ds_xy, left, ds_yz, right,
                           to_left, to_right)


# JSON encoding


def functor_to_json(F):
    return {
        "objects": {fincat.token(a): fincat.token(v)
                    for a, v in sorted(F.obj_map.items(), key=fincat.skey)},
        "morphisms": {fincat.token(m): fincat.token(v)
                      for m, v in sorted(F.mor_map.items(), key=fincat.skey)},
    }


def functor_from_json(doc, src, dst):
    u = fincat.untoken
    return fincat.BasedFunctor(
        src, dst,
        {u(a): u(v) for a, v in doc["objects"].items()},
        {u(m): u(v) for m, v in doc["morphisms"].items()})


def gamma_to_json(x):
    maps = sorted(x.action, key=lambda f: (f.src, f.dst, f.fn))
    return {
        "bound": x.bound,
        "levels": [fincat.cat_to_json(x.level(n))
                   for n in range(x.bound + 1)],
        "actions": [{"map": {"src": f.src, "dst": f.dst, "fn": list(f.fn)},
                     "functor": functor_to_json(x.act(f))} for f in maps],
    }


def gamma_from_json(doc):
    levels = {n: fincat.cat_from_json(d)
              for n, d in enumerate(doc["levels"])}
    action = {}
    for entry in doc["actions"]:
        f = GammaMap(entry["map"]["src"], entry["map"]["dst"],
                     tuple(entry["map"]["fn"]))
        action[f] = functor_from_json(entry["functor"],
                                      levels[f.src], levels[f.dst])
    return TruncGammaCat(doc["bound"], levels, action)
