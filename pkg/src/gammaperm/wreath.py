"""Wreath products of a based multicategory by a diagram of categories.

Given a based multicategory and a based multifunctor from it into the dual
category multicategory, the wreath product has one object per pair of a base
object and an object of its fiber category.  A multimorphism pairs a base
multimorphism with one fiber morphism per source, landing in the coordinates
of the backwards functor applied to the target fiber object.  Composition
pushes the outer fiber morphisms through the inner backwards functors, and
the symmetry action permutes sources and fiber morphisms together.

A twisted transformation between level multifunctors induces a multilinear
map of wreath products over the levels multicategory: on objects it
multiplies levels and applies the component functor to the smashed fiber
objects, and in each slot a multimorphism acts through the lexicographic
ring action on levels with the component functors carrying the fiber
morphisms.  The rectangle comparing the two orders of acting in two
different slots is evaluated explicitly; its commutation is the bilinearity
the pipeline certifies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import fincat, gammacat, multicat, perms
from .errors import ArityMismatch, CoherenceFailure


def _prod(ns):
    out = 1
    for n in ns:
        out *= n
    return out


@dataclass(frozen=True)
class WreathMor:
    """A multimorphism of a wreath product.

    srcs and tgt hold (base object, fiber object) pairs.  f is the base
    multimorphism between the first components, and psis[i] is a morphism in
    the i-th source fiber from srcs[i][1] to the i-th coordinate of the
    backwards functor of f at tgt[1].
    """
    srcs: tuple
    tgt: tuple
    f: object
    psis: tuple


class WreathMulticat(multicat.Multicat):
    """The wreath product of a based multicategory by a fiber diagram.

    Multihoms are enumerated lazily and memoized; objects outside the fiber
    diagram's domain surface the diagram's own errors (for truncated level
    diagrams, LevelOutOfRange).
    """

    def __init__(self, m, f):
        base_fiber = f.ob(m.base)
        if not base_fiber.is_point():
            raise ValueError("fiber over the base must be the point")
        self.m = m
        self.f = f
        self.base = (m.base, base_fiber.base)
        self._homs = {}
        self._ident = {}

    def fiber(self, a):
        return self.f.ob(a)

    def objects_over(self, a):
        return tuple((a, x) for x in self.fiber(a).objects)

    def _coords(self, fm, y):
        # one fiber object per source of fm, as a tuple
        return self.f.mor(fm).functor.ob(y)

    def check_mor(self, w):
        levels = tuple(a for a, _ in w.srcs)
        if self.m.sources(w.f) != levels or self.m.target(w.f) != w.tgt[0]:
            raise ValueError("base multimorphism does not match the endpoints")
        if len(w.psis) != len(w.srcs):
            raise ValueError("one fiber morphism per source required")
        coords = self._coords(w.f, w.tgt[1])
        for (a, x), psi, c in zip(w.srcs, w.psis, coords):
            fib = self.fiber(a)
            if fib.src(psi) != x or fib.dst(psi) != c:
                raise ValueError("fiber morphism %r has wrong endpoints"
                                 % (psi,))
        return True

    def multihom(self, sources, target):
        sources = tuple(sources)
        key = (sources, target)
        if key not in self._homs:
            b, y = target
            levels = tuple(a for a, _ in sources)
            out = []
            for fm in self.m.multihom(levels, b):
                coords = self._coords(fm, y)
                pools = [self.fiber(a).hom(x, c)
                         for (a, x), c in zip(sources, coords)]
                for psis in itertools.product(*pools):
                    out.append(WreathMor(sources, target, fm, psis))
            self._homs[key] = tuple(out)
        return self._homs[key]

    def compose(self, outer, inners):
        inners = tuple(inners)
        if len(inners) != len(outer.srcs):
            raise ArityMismatch("outer arity %d, %d inner morphisms"
                                % (len(outer.srcs), len(inners)))
        for w, s in zip(inners, outer.srcs):
            if w.tgt != s:
                raise ArityMismatch("inner target %r does not match outer "
                                    "source %r" % (w.tgt, s))
        # unit-law shortcuts; both sides are property-tested equalities, and
        # they keep large axiom sweeps out of the functor machinery
        if len(inners) == 1 and outer == self.identity(outer.tgt):
            return inners[0]
        if all(w == self.identity(s) for w, s in zip(inners, outer.srcs)):
            return outer
        base = self.m.compose(outer.f, [w.f for w in inners])
        zetas = []
        for w, xi in zip(inners, outer.psis):
            # coordinates of the outer fiber morphism under the inner
            # backwards functor, composed after the inner fiber morphisms
            img = self.f.mor(w.f).functor.mor(xi)
            for j, (a, _) in enumerate(w.srcs):
                fib = self.fiber(a)
                if fib.dst(w.psis[j]) != fib.src(img[j]):
                    raise ValueError(
                        "fiber parts not composable at slot %d: %r then %r"
                        % (j, w.psis[j], img[j]))
                zetas.append(fib.compose(img[j], w.psis[j]))
        srcs = tuple(itertools.chain.from_iterable(w.srcs for w in inners))
        return WreathMor(srcs, outer.tgt, base, tuple(zetas))

    def identity(self, obj):
        out = self._ident.get(obj)
        if out is None:
            a, x = obj
            out = WreathMor((obj,), obj, self.m.identity(a),
                            (self.fiber(a).identity(x),))
            self._ident[obj] = out
        return out

    def sigma(self, mor, perm):
        perm = tuple(perm)
        if perm == perms.identity_perm(len(perm)):
            return mor
        return WreathMor(perms.apply_perm(perm, mor.srcs), mor.tgt,
                         self.m.sigma(mor.f, perm),
                         perms.apply_perm(perm, mor.psis))

    def sources(self, mor):
        return mor.srcs

    def target(self, mor):
        return mor.tgt


def wreath(m, f):
    return WreathMulticat(m, f)


def wreath_compose(wm, outer, inners):
    """Composition in the wreath product wm; the fiber pushforwards live in
    the multicat, so it is an explicit argument here."""
    return wm.compose(outer, inners)


def _grid_transpose(r, s):
    # row t of an r x s grid flattened t-major reindexes to j-major
    return tuple(j * r + t for t in range(r) for j in range(s))


class WreathLinear:
    """The multilinear map of wreath products induced by a twisted
    transformation over the levels multicategory.

    Objects multiply levels and push the smashed fiber objects through the
    component functor.  slot_action realizes a multimorphism of one source
    wreath product, the remaining slots frozen at objects, as a multimorphism
    of the target wreath product.  rectangle composes the actions of two
    slots in both orders and the direct diagonal family, raising
    CoherenceFailure unless all three agree after the grid reindexing.
    """

    def __init__(self, phi):
        self.phi = phi
        nn = multicat.nn()
        self.srcs = tuple(WreathMulticat(nn, F) for F in phi.srcs)
        self.dst = WreathMulticat(nn, phi.dst)

    def arity(self):
        return len(self.srcs)

    def _level_cats(self, levels):
        return tuple(F.x.level(l) for F, l in zip(self.phi.srcs, levels))

    def ob(self, objs):
        objs = tuple(objs)
        if len(objs) != self.arity():
            raise ArityMismatch("expected %d objects, got %d"
                                % (self.arity(), len(objs)))
        levels = tuple(a for a, _ in objs)
        comp = self.phi.component(levels)
        target = comp.ob(gammacat.smash_ob(
            self._level_cats(levels), tuple(x for _, x in objs)))
        return (_prod(levels), target)

    def slot_action(self, i, w, rest):
        """The image of the multimorphism w of source slot i, the other
        slots frozen at the objects in rest (length arity - 1)."""
        rest = tuple(rest)
        if len(rest) != self.arity() - 1:
            raise ArityMismatch("expected %d frozen objects, got %d"
                                % (self.arity() - 1, len(rest)))

        def at(slot_ob):
            return rest[:i] + (slot_ob,) + rest[i:]

        ring = multicat.nn_ring()
        levels = tuple(a for a, _ in at(w.tgt))
        big = ring.right(ring.left(_prod(levels[:i]), w.f),
                         _prod(levels[i + 1:]))
        zetas = []
        out_srcs = []
        for t, src in enumerate(w.srcs):
            objs = at(src)
            lv = tuple(a for a, _ in objs)
            cats = self._level_cats(lv)
            ms = [self.phi.srcs[k].x.level(a).identity(x)
                  for k, (a, x) in enumerate(objs)]
            ms[i] = w.psis[t]
            zetas.append(self.phi.component(lv).mor(
                gammacat.smash_mor(cats, tuple(ms))))
            out_srcs.append(self.ob(objs))
        return WreathMor(tuple(out_srcs), self.ob(at(w.tgt)), big,
                         tuple(zetas))

    def _diagonal(self, i, i2, w, v, rest):
        # fiber part of the direct grid family: both morphisms inserted at
        # once, row u (sources of v) outer, column t (sources of w) inner
        out = []
        for u in range(len(v.srcs)):
            for t in range(len(w.srcs)):
                objs = list(rest[:i]) + [w.srcs[t]] \
                    + list(rest[i:i2 - 1]) + [v.srcs[u]] + list(rest[i2 - 1:])
                lv = tuple(a for a, _ in objs)
                cats = self._level_cats(lv)
                ms = [self.phi.srcs[k].x.level(a).identity(x)
                      for k, (a, x) in enumerate(objs)]
                ms[i] = w.psis[t]
                ms[i2] = v.psis[u]
                out.append(self.phi.component(lv).mor(
                    gammacat.smash_mor(cats, tuple(ms))))
        return tuple(out)

    def rectangle(self, i, i2, w, v, rest):
        """Both orders of acting by w in slot i and by v in slot i2, with
        i < i2 and the remaining slots frozen at rest; returns the common
        composite.

        Raises CoherenceFailure if the two traversals disagree after the
        grid reindexing, or if their fiber part differs from the direct
        family with both morphisms inserted at once.
        """
        assert i < i2
        rest = tuple(rest)
        r, s = len(w.srcs), len(v.srcs)

        # acting in one slot freezes every other slot, so the frozen tuple
        # omits exactly the acting slot and carries ob at the other one
        def frozen_for(act_slot, other_slot, ob):
            pos = other_slot if other_slot < act_slot else other_slot - 1
            return rest[:pos] + (ob,) + rest[pos:]

        w_then = self.dst.compose(
            self.slot_action(i2, v, frozen_for(i2, i, w.tgt)),
            [self.slot_action(i, w, frozen_for(i, i2, v.srcs[u]))
             for u in range(s)])
        v_then = self.dst.compose(
            self.slot_action(i, w, frozen_for(i, i2, v.tgt)),
            [self.slot_action(i2, v, frozen_for(i2, i, w.srcs[t]))
             for t in range(r)])
        reindexed = self.dst.sigma(v_then, _grid_transpose(r, s))
        if reindexed != w_then:
            raise CoherenceFailure("wreath bilinearity", (i, i2, w, v, rest),
                                   "the two traversals disagree")
        if w_then.psis != self._diagonal(i, i2, w, v, rest):
            raise CoherenceFailure("wreath bilinearity", (i, i2, w, v, rest),
                                   "fiber part differs from the direct "
                                   "family")
        return w_then


def wreath_of_transformation(phi, arity=None):
    """Package a twisted transformation as a multilinear map of wreath
    products over the levels multicategory."""
    lin = WreathLinear(phi)
    if arity is not None and arity != lin.arity():
        raise ArityMismatch("transformation has arity %d, not %d"
                            % (lin.arity(), arity))
    return lin
