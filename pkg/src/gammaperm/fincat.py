"""Finite based categories and the constructions the rest of the engine runs on.

Conventions.  A category value is immutable once built.  Objects and morphisms
are arbitrary hashable ids, morphism ids unique within their category, and the
identity morphisms appear in the composition data like any other morphism.
compose(g, f) means f first, then g.  Words over a generator graph are written
in diagrammatic order: (g1, g2) means g1 first.
"""

from __future__ import annotations

import ast
import itertools
from functools import lru_cache

from .errors import ClosureBoundExceeded

WORD_CAP = 500_000
DEFAULT_CLOSURE_BOUND = 64


def skey(x):
    """Total sort key over the mixed id values used for objects and morphisms."""
    if isinstance(x, tuple):
        return (1, len(x), tuple(skey(v) for v in x))
    return (0, 0, (type(x).__name__, repr(x)))


def token(x) -> str:
    """Stable string form of an id, for JSON emission."""
    if isinstance(x, str):
        return x
    return repr(x)


def untoken(s):
    """Inverse of token on the ids built here: tuples, ints, plain strings.

    A string id that itself parses as a Python literal cannot round trip;
    the constructors in this package never produce one.
    """
    if not isinstance(s, str):
        return s
    try:
        return ast.literal_eval(s)
    except (ValueError, SyntaxError):
        return s


class FinBasedCat:
    """A finite category with a chosen base object."""

    __slots__ = ("_objects", "_base", "_src", "_dst", "_comp", "_ident",
                 "_homs", "_mors", "_ident_set", "_outs", "_hash", "_keyc")

    def __init__(self, objects, base, morphisms, compose, identities, check=True):
        self._objects = tuple(sorted(set(objects), key=skey))
        self._base = base
        self._src = {}
        self._dst = {}
        for mid, s, d in morphisms:
            if mid in self._src:
                raise ValueError("duplicate morphism id %r" % (mid,))
            self._src[mid] = s
            self._dst[mid] = d
        self._mors = tuple(sorted(self._src, key=skey))
        self._comp = dict(compose)
        self._ident = dict(identities)
        self._ident_set = frozenset(self._ident.values())
        homs = {}
        outs = {}
        for mid in self._mors:
            homs.setdefault((self._src[mid], self._dst[mid]), []).append(mid)
            outs.setdefault(self._src[mid], []).append(mid)
        self._homs = {k: tuple(v) for k, v in homs.items()}
        self._outs = {k: tuple(v) for k, v in outs.items()}
        self._hash = None
        self._keyc = None
        if check:
            self.validate()

    # data access

    @property
    def objects(self):
        return self._objects

    @property
    def base(self):
        return self._base

    def morphisms(self):
        return self._mors

    def hom(self, a, b):
        return self._homs.get((a, b), ())

    def out_of(self, a):
        return self._outs.get(a, ())

    def src(self, m):
        return self._src[m]

    def dst(self, m):
        return self._dst[m]

    def identity(self, a):
        return self._ident[a]

    def is_identity(self, m):
        return m in self._ident_set

    def compose(self, g, f):
        """f first, then g."""
        return self._comp[(g, f)]

    def compose_word(self, anchor, word):
        """Compose a diagrammatic word of morphism ids starting at anchor."""
        cur = self._ident[anchor]
        for m in word:
            cur = self._comp[(m, cur)]
        return cur

    def is_point(self):
        return len(self._objects) == 1 and len(self._mors) == 1

    # value semantics

    def _key(self):
        # instances are never mutated after construction, so cache the key
        if self._keyc is None:
            self._keyc = (
                self._objects, self._base,
                tuple((m, self._src[m], self._dst[m]) for m in self._mors),
                tuple(sorted(self._comp.items(), key=skey)),
                tuple(sorted(self._ident.items(), key=skey)))
        return self._keyc

    def __eq__(self, other):
        if not isinstance(other, FinBasedCat):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return "FinBasedCat(%d objects, %d morphisms)" % (
            len(self._objects), len(self._mors))

    # validation

    def validate(self):
        objset = set(self._objects)
        if self._base not in objset:
            raise ValueError("base object missing")
        for m in self._mors:
            if self._src[m] not in objset or self._dst[m] not in objset:
                raise ValueError("morphism %r has endpoints outside the category" % (m,))
        for a in self._objects:
            i = self._ident.get(a)
            if i is None or self._src.get(i) != a or self._dst.get(i) != a:
                raise ValueError("bad identity at %r" % (a,))
        for (g, f), gf in self._comp.items():
            if self._dst[f] != self._src[g]:
                raise ValueError("compose entry (%r, %r) is not composable" % (g, f))
            if self._src[gf] != self._src[f] or self._dst[gf] != self._dst[g]:
                raise ValueError("composite of (%r, %r) has wrong endpoints" % (g, f))
        for f in self._mors:
            for g in self._outs.get(self._dst[f], ()):
                if (g, f) not in self._comp:
                    raise ValueError("missing composite (%r, %r)" % (g, f))
            if self._comp[(f, self._ident[self._src[f]])] != f:
                raise ValueError("right unit law fails at %r" % (f,))
            if self._comp[(self._ident[self._dst[f]], f)] != f:
                raise ValueError("left unit law fails at %r" % (f,))
        for f in self._mors:
            for g in self._outs.get(self._dst[f], ()):
                gf = self._comp[(g, f)]
                for h in self._outs.get(self._dst[g], ()):
                    if self._comp[(h, gf)] != self._comp[(self._comp[(h, g)], f)]:
                        raise ValueError(
                            "associativity fails on (%r, %r, %r)" % (h, g, f))
        return True


class Functor:
    """A functor between FinBasedCat values, stored as maps.

    No condition on base objects; BasedFunctor adds that.
    """

    __slots__ = ("src", "dst", "obj_map", "mor_map")

    def __init__(self, src, dst, obj_map, mor_map, check=True):
        self.src = src
        self.dst = dst
        self.obj_map = dict(obj_map)
        self.mor_map = dict(mor_map)
        if check:
            self.validate()

    def ob(self, a):
        return self.obj_map[a]

    def mor(self, f):
        return self.mor_map[f]

    def validate(self):
        dst_objs = set(self.dst.objects)
        for a in self.src.objects:
            if self.obj_map.get(a) not in dst_objs:
                raise ValueError("object %r has no valid image" % (a,))
        for f in self.src.morphisms():
            g = self.mor_map.get(f)
            if g is None:
                raise ValueError("morphism %r has no image" % (f,))
            if self.dst.src(g) != self.obj_map[self.src.src(f)] \
                    or self.dst.dst(g) != self.obj_map[self.src.dst(f)]:
                raise ValueError("image of %r has wrong endpoints" % (f,))
        for a in self.src.objects:
            if self.mor_map[self.src.identity(a)] != self.dst.identity(self.obj_map[a]):
                raise ValueError("identity at %r not preserved" % (a,))
        for f in self.src.morphisms():
            for g in self.src.out_of(self.src.dst(f)):
                if self.mor_map[self.src.compose(g, f)] != \
                        self.dst.compose(self.mor_map[g], self.mor_map[f]):
                    raise ValueError("composition not preserved on (%r, %r)" % (g, f))
        return True

    def then(self, other):
        """self followed by other."""
        cls = BasedFunctor if isinstance(self, BasedFunctor) \
            and isinstance(other, BasedFunctor) else Functor
        return cls(
            self.src, other.dst,
            {a: other.obj_map[v] for a, v in self.obj_map.items()},
            {f: other.mor_map[v] for f, v in self.mor_map.items()},
            check=False)

    def is_isomorphism(self):
        return (sorted(self.obj_map.values(), key=skey) == list(self.dst.objects)
                and len(self.obj_map) == len(self.src.objects)
                and sorted(self.mor_map.values(), key=skey) == list(self.dst.morphisms())
                and len(self.mor_map) == len(self.src.morphisms()))

    def inverse(self):
        assert self.is_isomorphism()
        return type(self)(
            self.dst, self.src,
            {v: a for a, v in self.obj_map.items()},
            {v: f for f, v in self.mor_map.items()},
            check=False)

    def __eq__(self, other):
        if not isinstance(other, Functor):
            return NotImplemented
        return (self.src == other.src and self.dst == other.dst
                and self.obj_map == other.obj_map and self.mor_map == other.mor_map)

    def __repr__(self):
        return "%s(%r -> %r)" % (type(self).__name__, self.src, self.dst)


class BasedFunctor(Functor):
    """A functor that also sends the base object to the base object."""

    __slots__ = ()

    def validate(self):
        if self.obj_map.get(self.src.base) != self.dst.base:
            raise ValueError("functor does not preserve the base object")
        return super().validate()


def identity_functor(c):
    return BasedFunctor(c, c,
                        {a: a for a in c.objects},
                        {f: f for f in c.morphisms()}, check=False)


def constant_functor(c, d):
    """The collapse of c onto the base of d."""
    return BasedFunctor(c, d,
                        {a: d.base for a in c.objects},
                        {f: d.identity(d.base) for f in c.morphisms()}, check=False)


def point_inclusion(t, c):
    """The functor from the point t that picks out the base of c."""
    assert t.is_point()
    return BasedFunctor(t, c,
                        {t.base: c.base},
                        {t.identity(t.base): c.identity(c.base)}, check=False)


# small constructors


def discrete(labels, base):
    labels = tuple(labels)
    return FinBasedCat(
        labels, base,
        [(("id", a), a, a) for a in labels],
        {(("id", a), ("id", a)): ("id", a) for a in labels},
        {a: ("id", a) for a in labels},
        check=False)


def codiscrete(labels, base):
    """Exactly one morphism between every ordered pair of objects."""
    labels = tuple(labels)

    def mid(a, b):
        return ("id", a) if a == b else ("arr", a, b)

    mors = [(mid(a, b), a, b) for a in labels for b in labels]
    comp = {}
    for a in labels:
        for b in labels:
            for c in labels:
                comp[(mid(b, c), mid(a, b))] = mid(a, c)
    return FinBasedCat(labels, base, mors, comp,
                       {a: ("id", a) for a in labels}, check=False)


def terminal():
    return discrete(("*",), "*")


def s0():
    """The two object discrete based category, unit for the smash product."""
    return discrete(("*", "x"), "*")


# products


@lru_cache(maxsize=None)
def nary_product(cats):
    """Product of a tuple of categories; objects and morphisms are tuples.

    The empty product is the point whose single object is the empty tuple.
    """
    cats = tuple(cats)
    objs = list(itertools.product(*(c.objects for c in cats)))
    mors = []
    for combo in itertools.product(*(c.morphisms() for c in cats)):
        mors.append((combo,
                     tuple(c.src(m) for c, m in zip(cats, combo)),
                     tuple(c.dst(m) for c, m in zip(cats, combo))))
    comp = {}
    by_src = {}
    for combo, s, d in mors:
        by_src.setdefault(s, []).append((combo, d))
    for combo, s, d in mors:
        for other, d2 in by_src.get(d, ()):
            comp[(other, combo)] = tuple(
                c.compose(g, f) for c, g, f in zip(cats, other, combo))
    ident = {o: tuple(c.identity(a) for c, a in zip(cats, o)) for o in objs}
    base = tuple(c.base for c in cats)
    return FinBasedCat(objs, base, mors, comp, ident, check=False)


def product(c, d):
    return nary_product((c, d))


def product_functor(fs, src_prod=None, dst_prod=None):
    """Componentwise functor between nary products."""
    fs = tuple(fs)
    if src_prod is None:
        src_prod = nary_product(tuple(f.src for f in fs))
    if dst_prod is None:
        dst_prod = nary_product(tuple(f.dst for f in fs))
    return BasedFunctor(
        src_prod, dst_prod,
        {o: tuple(f.obj_map[a] for f, a in zip(fs, o)) for o in src_prod.objects},
        {m: tuple(f.mor_map[x] for f, x in zip(fs, m)) for m in src_prod.morphisms()},
        check=False)


def tuple_functor(fs, dst_prod=None):
    """Pair functors with a common source into the product of their targets."""
    fs = tuple(fs)
    if not fs:
        raise ValueError("tuple_functor needs at least one component")
    src = fs[0].src
    if dst_prod is None:
        dst_prod = nary_product(tuple(f.dst for f in fs))
    return BasedFunctor(
        src, dst_prod,
        {a: tuple(f.obj_map[a] for f in fs) for a in src.objects},
        {m: tuple(f.mor_map[m] for f in fs) for m in src.morphisms()},
        check=False)


def proj_functor(prod, cats, i):
    """Projection of an nary product onto coordinate i."""
    return BasedFunctor(
        prod, cats[i],
        {o: o[i] for o in prod.objects},
        {m: m[i] for m in prod.morphisms()},
        check=False)


# presentations and their quotients


class PresentedCat:
    """Generators and relations over a fixed finite object set.

    Generators are (gid, src, dst) triples and never include identities.
    Relations are (anchor, word1, word2) with both words parallel paths out of
    anchor; the empty word stands for the identity at the anchor.
    """

    def __init__(self, objects, base, generators, relations,
                 closure_bound=DEFAULT_CLOSURE_BOUND):
        self.objects = tuple(sorted(set(objects), key=skey))
        self.base = base
        self.generators = tuple(generators)
        self.relations = tuple(relations)
        self.closure_bound = closure_bound
        self.gsrc = {}
        self.gdst = {}
        objset = set(self.objects)
        if base not in objset:
            raise ValueError("base object missing from presentation")
        for gid, s, d in self.generators:
            if gid in self.gsrc:
                raise ValueError("duplicate generator %r" % (gid,))
            if s not in objset or d not in objset:
                raise ValueError("generator %r has unknown endpoints" % (gid,))
            self.gsrc[gid] = s
            self.gdst[gid] = d
        for anchor, w1, w2 in self.relations:
            e1 = self.word_endpoints(anchor, w1)
            e2 = self.word_endpoints(anchor, w2)
            if e1 != e2:
                raise ValueError("relation sides are not parallel: %r vs %r" % (w1, w2))

    def word_endpoints(self, anchor, word):
        cur = anchor
        for g in word:
            if self.gsrc.get(g) != cur:
                raise ValueError("word %r is not composable at %r" % (word, g))
            cur = self.gdst[g]
        return (anchor, cur)


class _Closure:
    """One bounded congruence-closure run: words of length <= level."""

    __slots__ = ("level", "words", "index", "parent", "minlen", "stable")

    def __init__(self, level, objects, symbols, ssrc, out_syms, rels):
        self.level = level
        words = [(a, ()) for a in objects]
        frontier = list(words)
        for _ in range(level):
            nxt = []
            for anchor, gens in frontier:
                cur = gens[-1] if gens else None
                at = ssrc["__dst__", cur] if cur is not None else anchor
                for g in out_syms.get(at, ()):
                    nxt.append((anchor, gens + (g,)))
            words.extend(nxt)
            frontier = nxt
            if len(words) > WORD_CAP:
                raise ClosureBoundExceeded(
                    "word population exceeded %d" % WORD_CAP)
        self.words = words
        self.index = {w: i for i, w in enumerate(words)}
        self.parent = list(range(len(words)))
        for anchor, w1, w2 in rels:
            self._union(self.index[(anchor, w1)], self.index[(anchor, w2)])
        self._congruence(out_syms, ssrc)
        self.minlen = {}
        for i, (anchor, gens) in enumerate(words):
            r = self._find(i)
            n = len(gens)
            if r not in self.minlen or n < self.minlen[r]:
                self.minlen[r] = n
        self.stable = all(
            self.minlen[self._find(i)] < level
            for i, (a, g) in enumerate(words) if len(g) == level)

    def _find(self, i):
        p = self.parent
        root = i
        while p[root] != root:
            root = p[root]
        while p[i] != root:
            p[i], i = root, p[i]
        return root

    def _union(self, i, j):
        ri, rj = self._find(i), self._find(j)
        if ri == rj:
            return False
        self.parent[max(ri, rj)] = min(ri, rj)
        return True

    def _congruence(self, out_syms, ssrc):
        # close under composition on both sides until a fixed point
        changed = True
        while changed:
            changed = False
            right = {}
            left = {}
            for w in self.words:
                anchor, gens = w
                if len(gens) >= self.level:
                    continue
                r = self._find(self.index[w])
                at = ssrc["__dst__", gens[-1]] if gens else anchor
                for g in out_syms.get(at, ()):
                    ext = self._find(self.index[(anchor, gens + (g,))])
                    key = (r, g)
                    if key in right:
                        if self._union(right[key], ext):
                            changed = True
                    else:
                        right[key] = ext
            for w in self.words:
                anchor, gens = w
                if len(gens) >= self.level:
                    continue
                r = self._find(self.index[w])
                for g, gs, gd in out_syms.get(("__into__", anchor), ()):
                    ext = self._find(self.index[(gs, (g,) + gens)])
                    key = (g, r)
                    if key in left:
                        if self._union(left[key], ext):
                            changed = True
                    else:
                        left[key] = ext


def quotient(pres: PresentedCat):
    """Collapse a presentation to a finite based category.

    Raises ClosureBoundExceeded when the congruence closure does not stabilize
    within pres.closure_bound, instead of truncating silently.
    """
    gids = list(pres.gsrc)

    # stage 1: absorb relations whose sides shrink to length <= 1
    parent = {g: g for g in gids}
    repmem = {g: g for g in gids}
    eps = set()

    def find(g):
        root = g
        while parent[root] != root:
            root = parent[root]
        while parent[g] != root:
            parent[g], g = root, parent[g]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return
        ma, mb = repmem[ra], repmem[rb]
        if (pres.gsrc[ma], pres.gdst[ma]) != (pres.gsrc[mb], pres.gdst[mb]):
            raise ValueError("relation identifies non-parallel generators")
        keep, drop = (ra, rb) if skey(ra) <= skey(rb) else (rb, ra)
        parent[drop] = keep
        repmem[keep] = min(ma, mb, key=skey)
        if drop in eps:
            eps.discard(drop)
            eps.add(keep)

    def norm(gens):
        out = []
        for g in gens:
            r = find(g)
            if r in eps:
                continue
            out.append(repmem[r])
        return tuple(out)

    rels = list(pres.relations)
    while True:
        keep = []
        shorts = []
        for anchor, w1, w2 in rels:
            n1, n2 = norm(w1), norm(w2)
            if n1 == n2:
                continue
            if len(n1) <= 1 and len(n2) <= 1:
                shorts.append((anchor, n1, n2))
            else:
                keep.append((anchor, w1, w2))
        if not shorts:
            final_rels = []
            seen = set()
            for anchor, w1, w2 in keep:
                n1, n2 = norm(w1), norm(w2)
                if n1 == n2:
                    continue
                key = (anchor, n1, n2)
                if key not in seen:
                    seen.add(key)
                    final_rels.append(key)
            break
        for anchor, n1, n2 in shorts:
            if len(n1) == 1 and len(n2) == 1:
                union(n1[0], n2[0])
            else:
                g = (n1 or n2)[0]
                r = find(g)
                m = repmem[r]
                if pres.gsrc[m] != pres.gdst[m]:
                    raise ValueError(
                        "presentation collapses %r between distinct objects" % (m,))
                eps.add(r)
        rels = keep

    symbols = sorted({repmem[r] for r in {find(g) for g in gids} if r not in eps},
                     key=skey)
    ssrc = {}
    out_syms = {}
    for s in symbols:
        ssrc[("__dst__", s)] = pres.gdst[s]
        ssrc[("__src__", s)] = pres.gsrc[s]
        out_syms.setdefault(pres.gsrc[s], []).append(s)
        out_syms.setdefault(("__into__", pres.gdst[s]), []).append(
            (s, pres.gsrc[s], pres.gdst[s]))

    side_max = max([0] + [max(len(w1), len(w2)) for _, w1, w2 in final_rels])
    level = max(2, side_max)
    if level > pres.closure_bound:
        raise ClosureBoundExceeded("relation words exceed the closure bound")

    def run(lv):
        return _Closure(lv, pres.objects, symbols, ssrc, out_syms, final_rels)

    accepted = None
    while level <= pres.closure_bound:
        data = run(level)
        if data.stable:
            if level + 1 > pres.closure_bound:
                accepted = data
                break
            data2 = run(level + 1)
            # the deeper run refines nothing new iff its partition, restricted
            # to the shallower word set, matches the shallower partition
            seen = {}
            agree = True
            for w in data.words:
                r2 = data2._find(data2.index[w])
                r1 = data._find(data.index[w])
                if seen.setdefault(r2, r1) != r1:
                    agree = False
                    break
            if data2.stable and agree:
                accepted = data2
                break
        level += 1
    if accepted is None:
        raise ClosureBoundExceeded(
            "congruence closure did not stabilize within %d" % pres.closure_bound)

    return _QuotientResult(pres, accepted, find, repmem, eps)


class _QuotientResult:
    """The quotient category plus the projection data of its presentation."""

    def __init__(self, pres, data, find, repmem, eps):
        self.pres = pres
        self._find_gen = find
        self._repmem = repmem
        self._eps = eps

        groups = {}
        for i, w in enumerate(data.words):
            groups.setdefault(data._find(i), []).append(w)
        reps = {}
        for root, members in groups.items():
            reps[root] = min(members, key=lambda w: (len(w[1]), skey(w[1]), skey(w[0])))

        def endpoints(word):
            return self.pres.word_endpoints(*word)

        ident_root = {}
        mids = {}
        for root, rep in sorted(reps.items(), key=lambda kv: (len(kv[1][1]), skey(kv[1][1]), skey(kv[1][0]))):
            members = groups[root]
            ends = {endpoints(w) for w in members}
            assert len(ends) == 1, "congruence merged non-parallel words"
            if any(len(w[1]) == 0 for w in members):
                anchor = rep[0]
                mids[root] = ("id", anchor)
                ident_root[anchor] = root
            else:
                mids[root] = ("q", len(mids))
        # renumber non-identity classes densely and stably
        qroots = [r for r in mids if mids[r][0] == "q"]
        qroots.sort(key=lambda r: (len(reps[r][1]), skey(reps[r][1]), skey(reps[r][0])))
        for i, r in enumerate(qroots):
            mids[r] = ("q", i)

        self._root_of_word = {w: data._find(i) for w, i in data.index.items()}
        self._mids = mids
        self._reps = reps
        self._ident_root = ident_root

        mors = []
        comp = {}
        ident = {}
        for root, rep in reps.items():
            s, d = endpoints(rep)
            mors.append((mids[root], s, d))
        for a in self.pres.objects:
            ident[a] = ("id", a)
        for f_root, f_rep in reps.items():
            for g_root, g_rep in reps.items():
                fs, fd = endpoints(f_rep)
                gs, gd = endpoints(g_rep)
                if fd != gs:
                    continue
                word = (f_rep[0], f_rep[1] + g_rep[1])
                comp[(mids[g_root], mids[f_root])] = mids[self._class_root(word)]
        self.cat = FinBasedCat(self.pres.objects, self.pres.base,
                               mors, comp, ident, check=True)

    def _class_root(self, word):
        """Root of an arbitrary-length word, by stepping through known classes."""
        anchor, gens = word
        root = self._root_of_word[(anchor, ())]
        for g in gens:
            rep = self._reps[root]
            root = self._root_of_word[(rep[0], rep[1] + (g,))]
        return root

    def word_class(self, anchor, gens):
        """Morphism of the quotient named by a word of original generators."""
        syms = []
        for g in gens:
            r = self._find_gen(g)
            if r in self._eps:
                continue
            syms.append(self._repmem[r])
        return self._mids[self._class_root((anchor, tuple(syms)))]

    def gen_class(self, g):
        return self.word_class(self.pres.gsrc[g], (g,))

    def rep(self, mid):
        """Canonical representative word (anchor, symbols) of a quotient morphism."""
        for root, m in self._mids.items():
            if m == mid:
                return self._reps[root]
        raise KeyError(mid)


# colimits


class ColimitResult:
    __slots__ = ("cat", "nodes", "edges", "_obj_class", "qr", "injections")

    def __init__(self, cat, nodes, edges, obj_class, qr, injections):
        self.cat = cat
        self.nodes = nodes
        self.edges = edges
        self._obj_class = obj_class
        self.qr = qr
        self.injections = injections

    def obj_class(self, nid, a):
        return self._obj_class[(nid, a)]

    def mor_class(self, nid, m):
        node = self.nodes[nid]
        if node.is_identity(m):
            return self.cat.identity(self._obj_class[(nid, node.src(m))])
        return self.qr.gen_class((nid, m))

    def mediate(self, cocone, check=True):
        """The functor out of the colimit induced by a cocone, verified pointwise.

        cocone maps node ids to based functors into a common target.
        """
        target = next(iter(cocone.values())).dst
        if check:
            for s, d, F in self.edges:
                if F.then(cocone[d]) != cocone[s]:
                    raise ValueError("cocone does not commute over edge %r -> %r" % (s, d))
        obj_map = {}
        for (nid, a), cls in self._obj_class.items():
            img = cocone[nid].ob(a)
            if cls in obj_map and obj_map[cls] != img:
                raise ValueError("cocone is not constant on the object class %r" % (cls,))
            obj_map[cls] = img
        mor_map = {}
        for mid in self.cat.morphisms():
            if self.cat.is_identity(mid):
                mor_map[mid] = target.identity(obj_map[self.cat.src(mid)])
                continue
            anchor, syms = self.qr.rep(mid)
            cur = target.identity(obj_map[anchor])
            for nid, m in syms:
                cur = target.compose(cocone[nid].mor(m), cur)
            mor_map[mid] = cur
        return BasedFunctor(self.cat, target, obj_map, mor_map, check=check)


def colimit(nodes, edges, base=None, closure_bound=DEFAULT_CLOSURE_BOUND):
    """Colimit in plain Cat of a finite diagram of based categories.

    nodes: dict node id -> FinBasedCat.  edges: iterable of (src id, dst id,
    BasedFunctor).  The result is based at the class of the base of `base`
    (a node id), defaulting to the first node id in sorted order.
    """
    nodes = dict(nodes)
    edges = list(edges)
    # object classes
    oparent = {}

    def ofind(x):
        root = x
        while oparent[root] != root:
            root = oparent[root]
        while oparent[x] != root:
            oparent[x], x = root, oparent[x]
        return root

    for nid, cat in nodes.items():
        for a in cat.objects:
            oparent[(nid, a)] = (nid, a)
    for s, d, F in edges:
        for a in nodes[s].objects:
            ra, rb = ofind((s, a)), ofind((d, F.ob(a)))
            if ra != rb:
                oparent[max(ra, rb, key=skey)] = min(ra, rb, key=skey)

    groups = {}
    for x in oparent:
        groups.setdefault(ofind(x), []).append(x)
    cls_name = {}
    for i, root in enumerate(sorted(groups, key=skey)):
        for member in groups[root]:
            cls_name[member] = ("o", i)
    if base is None:
        base = sorted(nodes, key=skey)[0]
    base_cls = cls_name[(base, nodes[base].base)]

    gens = []
    rels = []
    for nid, cat in sorted(nodes.items(), key=lambda kv: skey(kv[0])):
        for m in cat.morphisms():
            if cat.is_identity(m):
                continue
            gens.append(((nid, m), cls_name[(nid, cat.src(m))],
                         cls_name[(nid, cat.dst(m))]))
        for f in cat.morphisms():
            if cat.is_identity(f):
                continue
            for g in cat.out_of(cat.dst(f)):
                if cat.is_identity(g):
                    continue
                fg = cat.compose(g, f)
                rhs = () if cat.is_identity(fg) else ((nid, fg),)
                rels.append((cls_name[(nid, cat.src(f))],
                             ((nid, f), (nid, g)), rhs))
    for s, d, F in edges:
        for f in nodes[s].morphisms():
            if nodes[s].is_identity(f):
                continue
            img = F.mor(f)
            rhs = () if nodes[d].is_identity(img) else ((d, img),)
            rels.append((cls_name[(s, nodes[s].src(f))], ((s, f),), rhs))

    objs = sorted(set(cls_name.values()), key=skey)
    pres = PresentedCat(objs, base_cls, gens, rels, closure_bound)
    qr = quotient(pres)

    result = ColimitResult(qr.cat, nodes, edges, cls_name, qr, None)
    injections = {}
    for nid, cat in nodes.items():
        om = {a: cls_name[(nid, a)] for a in cat.objects}
        mm = {}
        for m in cat.morphisms():
            mm[m] = result.mor_class(nid, m)
        injections[nid] = BasedFunctor(cat, qr.cat, om, mm, check=False)
    result.injections = injections
    return result


def pushout(apex, left, right, closure_bound=DEFAULT_CLOSURE_BOUND):
    """Pushout of left: apex -> C and right: apex -> D."""
    return colimit({"L": left.dst, "R": right.dst, "apex": apex},
                   [("apex", "L", left), ("apex", "R", right)],
                   base="L", closure_bound=closure_bound)


class WedgeResult:
    __slots__ = ("cat", "left", "right")

    def __init__(self, cat, left, right):
        self.cat = cat
        self.left = left
        self.right = right


def wedge(c, d, closure_bound=DEFAULT_CLOSURE_BOUND):
    """Coproduct of based categories: glue the two bases to a point.

    Formal composites through the glued point are generated by the quotient
    engine, so a wedge with rich base homs can exceed the closure bound.
    """
    t = terminal()
    col = colimit({"L": c, "R": d, "pt": t},
                  [("pt", "L", point_inclusion(t, c)),
                   ("pt", "R", point_inclusion(t, d))],
                  base="pt", closure_bound=closure_bound)
    return WedgeResult(col.cat, col.injections["L"], col.injections["R"])


# smash products


class SmashResult:
    __slots__ = ("cat", "left", "right", "prod", "qr", "proj", "_wedge_obj", "_wedge_mor")

    def __init__(self, cat, left, right, prod, qr, proj, wedge_obj, wedge_mor):
        self.cat = cat
        self.left = left
        self.right = right
        self.prod = prod
        self.qr = qr
        self.proj = proj
        self._wedge_obj = wedge_obj
        self._wedge_mor = wedge_mor

    def obj_class(self, o):
        return "*" if o in self._wedge_obj else o

    def mor_class(self, m):
        return self.proj.mor(m)


@lru_cache(maxsize=None)
def smash(c, d, closure_bound=DEFAULT_CLOSURE_BOUND):
    """Quotient of the product that collapses the wedge to the base point."""
    P = product(c, d)
    wobj = {(a, d.base) for a in c.objects} | {(c.base, b) for b in d.objects}
    wmor = {(f, d.identity(d.base)) for f in c.morphisms()} \
        | {(c.identity(c.base), g) for g in d.morphisms()}

    def mobj(o):
        return "*" if o in wobj else o

    objs = {mobj(o) for o in P.objects}
    gens = []
    for m in P.morphisms():
        if P.is_identity(m):
            continue
        gens.append((m, mobj(P.src(m)), mobj(P.dst(m))))
    rels = []
    for m in sorted(wmor, key=skey):
        if not P.is_identity(m):
            rels.append(("*", (m,), ()))
    for f in P.morphisms():
        if P.is_identity(f):
            continue
        for g in P.out_of(P.dst(f)):
            if P.is_identity(g):
                continue
            fg = P.compose(g, f)
            rhs = () if P.is_identity(fg) else (fg,)
            rels.append((mobj(P.src(f)), (f, g), rhs))
    pres = PresentedCat(objs, "*", gens, rels, closure_bound)
    qr = quotient(pres)

    om = {o: mobj(o) for o in P.objects}
    mm = {}
    for m in P.morphisms():
        if P.is_identity(m):
            mm[m] = qr.cat.identity(mobj(P.src(m)))
        elif m in wmor:
            mm[m] = qr.cat.identity("*")
        else:
            mm[m] = qr.gen_class(m)
    proj = BasedFunctor(P, qr.cat, om, mm, check=False)
    return SmashResult(qr.cat, c, d, P, qr, proj, wobj, wmor)


def descend(sr: SmashResult, G: BasedFunctor, check=True):
    """Factor a functor on the product through the smash quotient.

    G must send every wedge morphism to an identity; then the induced functor
    on classes is well defined because the smash congruence is generated by
    exactly those collapses together with the composition table of the product.
    """
    if check:
        imgs = {G.ob(o) for o in sr._wedge_obj}
        if imgs != {G.dst.base}:
            raise ValueError("functor does not collapse the wedge objects to the base")
        for m in sr._wedge_mor:
            if not G.dst.is_identity(G.mor(m)):
                raise ValueError("functor does not collapse the wedge morphism %r" % (m,))
    obj_map = {}
    for o in sr.prod.objects:
        obj_map.setdefault(sr.obj_class(o), G.ob(o))
    mor_map = {}
    for mid in sr.cat.morphisms():
        if sr.cat.is_identity(mid):
            mor_map[mid] = G.dst.identity(obj_map[sr.cat.src(mid)])
            continue
        anchor, syms = sr.qr.rep(mid)
        start = (sr.left.base, sr.right.base) if anchor == "*" else anchor
        cur = G.dst.identity(G.ob(start))
        for s in syms:
            cur = G.dst.compose(G.mor(s), cur)
        mor_map[mid] = cur
    return BasedFunctor(sr.cat, G.dst, obj_map, mor_map, check=check)


def smash_functor(sr_src: SmashResult, sr_dst: SmashResult, fc, fd, check=False):
    """The functor between smash products induced by a pair of based functors."""
    G = product_functor((fc, fd), src_prod=sr_src.prod,
                        dst_prod=sr_dst.prod).then(sr_dst.proj)
    return descend(sr_src, G, check=check)


def smash_swap_iso(c, d):
    """The symmetry smash(c, d) -> smash(d, c)."""
    sr = smash(c, d)
    sr2 = smash(d, c)
    P, P2 = sr.prod, sr2.prod
    swap = BasedFunctor(P, P2,
                        {o: (o[1], o[0]) for o in P.objects},
                        {m: (m[1], m[0]) for m in P.morphisms()}, check=False)
    return descend(sr, swap.then(sr2.proj), check=True)


def smash_right_unit_iso(c):
    """smash(c, s0) -> c, an isomorphism."""
    sr = smash(c, s0())
    P = sr.prod
    om = {}
    mm = {}
    for (a, s) in P.objects:
        om[(a, s)] = a if s == "x" else c.base
    for (f, g) in P.morphisms():
        # g is an identity of s0; morphisms over the base line collapse
        mm[(f, g)] = f if sr.right.src(g) == "x" else c.identity(c.base)
    G = BasedFunctor(P, c, om, mm, check=True)
    out = descend(sr, G, check=True)
    assert out.is_isomorphism()
    return out


def smash_left_unit_iso(c):
    """smash(s0, c) -> c, an isomorphism."""
    sr = smash(s0(), c)
    P = sr.prod
    om = {}
    mm = {}
    for (s, a) in P.objects:
        om[(s, a)] = a if s == "x" else c.base
    for (g, f) in P.morphisms():
        mm[(g, f)] = f if sr.left.src(g) == "x" else c.identity(c.base)
    G = BasedFunctor(P, c, om, mm, check=True)
    out = descend(sr, G, check=True)
    assert out.is_isomorphism()
    return out


def smash_include(sr: SmashResult, side, check=True):
    """Inverse direction helper for the unit isos: c -> smash(c, s0) or smash(s0, c)."""
    c = sr.left if side == "left" else sr.right
    nonbase = "x"
    if side == "left":
        om = {a: sr.obj_class((a, nonbase)) for a in c.objects}
        mm = {f: sr.mor_class((f, sr.right.identity(nonbase))) for f in c.morphisms()}
    else:
        om = {a: sr.obj_class((nonbase, a)) for a in c.objects}
        mm = {f: sr.mor_class((sr.left.identity(nonbase), f)) for f in c.morphisms()}
    out = BasedFunctor(c, sr.cat, om, mm, check=check)
    return out


def smash_assoc_iso(a, b, c):
    """smash(smash(a, b), c) -> smash(a, smash(b, c)), an isomorphism."""
    sab = smash(a, b)
    sbc = smash(b, c)
    s_ab_c = smash(sab.cat, c)
    s_a_bc = smash(a, sbc.cat)
    P = s_ab_c.prod

    def ob_img(q, z):
        if q == "*":
            return s_a_bc.cat.base
        x, y = q
        return s_a_bc.obj_class((x, sbc.obj_class((y, z))))

    om = {(q, z): ob_img(q, z) for (q, z) in P.objects}
    mm = {}
    for (mu, h) in P.morphisms():
        q = P.src((mu, h))[0]
        z2 = P.dst((mu, h))[1]
        # (mu, h) = (mu, id) after (id, h)
        if q == "*":
            part1 = s_a_bc.cat.identity(s_a_bc.cat.base)
        else:
            x, y = q
            part1 = s_a_bc.mor_class(
                (a.identity(x), sbc.mor_class((b.identity(y), h))))
        if sab.cat.is_identity(mu):
            part2 = s_a_bc.cat.identity(om[(P.dst((mu, h))[0], z2)])
        else:
            anchor, syms = sab.qr.rep(mu)
            cur = s_a_bc.cat.identity(ob_img(anchor, z2))
            for (f, g) in syms:
                step = s_a_bc.mor_class((f, sbc.mor_class((g, c.identity(z2)))))
                cur = s_a_bc.cat.compose(step, cur)
            part2 = cur
        mm[(mu, h)] = s_a_bc.cat.compose(part2, part1)
    G = BasedFunctor(P, s_a_bc.cat, om, mm, check=True)
    out = descend(s_ab_c, G, check=True)
    assert out.is_isomorphism()
    return out


# JSON encoding


def cat_to_json(c: FinBasedCat):
    return {
        "objects": [token(a) for a in c.objects],
        "base": token(c.base),
        "morphisms": sorted(
            [{"id": token(m), "src": token(c.src(m)), "dst": token(c.dst(m))}
             for m in c.morphisms()], key=lambda e: e["id"]),
        "compose": sorted([[token(g), token(f), token(gf)]
                           for (g, f), gf in c._comp.items()]),
        "identities": {token(a): token(c.identity(a)) for a in c.objects},
    }


def cat_from_json(doc, check=True):
    u = untoken
    return FinBasedCat(
        [u(a) for a in doc["objects"]], u(doc["base"]),
        [(u(m["id"]), u(m["src"]), u(m["dst"])) for m in doc["morphisms"]],
        {(u(g), u(f)): u(gf) for g, f, gf in doc["compose"]},
        {u(a): u(m) for a, m in doc["identities"].items()},
        check=check)
