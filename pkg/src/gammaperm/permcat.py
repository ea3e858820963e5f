"""Strict permutative categories, the free one on a multicategory, and the
bilinear pairing into the tensor fragment.

A PermCat is a finite based category with a strictly associative, strictly
unital sum given by tables, plus a symmetry tau.  The free permutative
category on a multicategory has lists as objects and (index function, fiber
multimorphisms) pairs as morphisms; sums concatenate.  The tensor fragment
holds exactly the bi-morphisms (pairs acting on a source grid) that the
pairing lambda produces, in the normal form "both parts plus the grid order".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import fincat, multicat, perms
from .errors import ArityMismatch


class PermCat:
    """Strict permutative structure on a FinBasedCat, all data explicit."""

    def __init__(self, cat, unit, sum_obj, sum_mor, tau, check=True):
        self.cat = cat
        self.unit = unit
        self._sum_obj = dict(sum_obj)
        self._sum_mor = dict(sum_mor)
        self._tau = dict(tau)
        if check:
            self.validate()

    def sum_obj(self, a, b):
        return self._sum_obj[(a, b)]

    def sum_mor(self, f, g):
        return self._sum_mor[(f, g)]

    def tau(self, a, b):
        return self._tau[(a, b)]

    def sum_obj_n(self, items):
        out = self.unit
        for a in items:
            out = self.sum_obj(out, a)
        return out

    def validate(self):
        c = self.cat
        objs = c.objects
        if c.base != self.unit:
            raise ValueError("base of the category must be the unit")
        for a, b in itertools.product(objs, repeat=2):
            if (a, b) not in self._sum_obj:
                raise ValueError("sum_obj missing (%r, %r)" % (a, b))
        for a in objs:
            if self.sum_obj(self.unit, a) != a or self.sum_obj(a, self.unit) != a:
                raise ValueError("unit is not strict at %r" % (a,))
        for a, b, x in itertools.product(objs, repeat=3):
            if self.sum_obj(self.sum_obj(a, b), x) != self.sum_obj(a, self.sum_obj(b, x)):
                raise ValueError("sum not associative on objects")
        mors = c.morphisms()
        for f, g in itertools.product(mors, repeat=2):
            fg = self._sum_mor.get((f, g))
            if fg is None:
                raise ValueError("sum_mor missing (%r, %r)" % (f, g))
            if c.src(fg) != self.sum_obj(c.src(f), c.src(g)) \
                    or c.dst(fg) != self.sum_obj(c.dst(f), c.dst(g)):
                raise ValueError("sum_mor endpoints wrong on (%r, %r)" % (f, g))
        for a, b in itertools.product(objs, repeat=2):
            if self.sum_mor(c.identity(a), c.identity(b)) != \
                    c.identity(self.sum_obj(a, b)):
                raise ValueError("sum of identities is not the identity")
        for f in mors:
            e = c.identity(self.unit)
            if self.sum_mor(e, f) != f or self.sum_mor(f, e) != f:
                raise ValueError("unit not strict on morphisms at %r" % (f,))
        for f, g, h in itertools.product(mors, repeat=3):
            if self.sum_mor(self.sum_mor(f, g), h) != \
                    self.sum_mor(f, self.sum_mor(g, h)):
                raise ValueError("sum not associative on morphisms")
        # interchange with composition
        for f in mors:
            for f2 in c.out_of(c.dst(f)):
                for g in mors:
                    for g2 in c.out_of(c.dst(g)):
                        lhs = self.sum_mor(c.compose(f2, f), c.compose(g2, g))
                        rhs = c.compose(self.sum_mor(f2, g2), self.sum_mor(f, g))
                        if lhs != rhs:
                            raise ValueError("sum does not interchange with composition")
        # symmetry
        for a, b in itertools.product(objs, repeat=2):
            t = self._tau.get((a, b))
            if t is None:
                raise ValueError("tau missing (%r, %r)" % (a, b))
            if c.src(t) != self.sum_obj(a, b) or c.dst(t) != self.sum_obj(b, a):
                raise ValueError("tau endpoints wrong at (%r, %r)" % (a, b))
            if c.compose(self.tau(b, a), t) != c.identity(self.sum_obj(a, b)):
                raise ValueError("tau is not an involution at (%r, %r)" % (a, b))
            if self.tau(self.unit, a) != c.identity(a) \
                    or self.tau(a, self.unit) != c.identity(a):
                raise ValueError("tau at the unit must be the identity")
        for f, g in itertools.product(mors, repeat=2):
            lhs = c.compose(self.tau(c.dst(f), c.dst(g)), self.sum_mor(f, g))
            rhs = c.compose(self.sum_mor(g, f), self.tau(c.src(f), c.src(g)))
            if lhs != rhs:
                raise ValueError("tau is not natural on (%r, %r)" % (f, g))
        for a, b, x in itertools.product(objs, repeat=3):
            lhs = self.tau(self.sum_obj(a, b), x)
            rhs = c.compose(
                self.sum_mor(self.tau(a, x), c.identity(b)),
                self.sum_mor(c.identity(a), self.tau(b, x)))
            if lhs != rhs:
                raise ValueError("tau hexagon fails on (%r, %r, %r)" % (a, b, x))
        return True


def underlying(pc: PermCat) -> multicat.UnderlyingMulticat:
    return multicat.UnderlyingMulticat(pc)


# corpus constructors


def perm_from_abelian_monoid(elements, add, unit):
    """Discrete permutative category on a commutative monoid of objects."""
    elements = tuple(elements)
    cat = fincat.discrete(elements, unit)
    ident = {a: cat.identity(a) for a in elements}
    sum_obj = {(a, b): add(a, b) for a in elements for b in elements}
    sum_mor = {(ident[a], ident[b]): ident[add(a, b)]
               for a in elements for b in elements}
    tau = {(a, b): ident[add(a, b)] for a in elements for b in elements}
    return PermCat(cat, unit, sum_obj, sum_mor, tau)


def perm_codiscrete_monoid(elements, add, unit):
    """Codiscrete permutative category on a commutative monoid."""
    elements = tuple(elements)
    cat = fincat.codiscrete(elements, unit)

    def mid(a, b):
        return ("id", a) if a == b else ("arr", a, b)

    sum_obj = {(a, b): add(a, b) for a in elements for b in elements}
    sum_mor = {}
    for f in cat.morphisms():
        for g in cat.morphisms():
            sum_mor[(f, g)] = mid(add(cat.src(f), cat.src(g)),
                                  add(cat.dst(f), cat.dst(g)))
    tau = {(a, b): ("id", add(a, b)) for a in elements for b in elements}
    return PermCat(cat, unit, sum_obj, sum_mor, tau)


def perm_labeled_homs():
    """Objects 0,1 mod 2; every hom has two morphisms, labels add mod 2."""
    objs = (0, 1)

    def mid(a, b, l):
        return ("h", a, b, l)

    mors = [(mid(a, b, l), a, b) for a in objs for b in objs for l in (0, 1)]
    comp = {}
    for a in objs:
        for b in objs:
            for x in objs:
                for l1 in (0, 1):
                    for l2 in (0, 1):
                        comp[(mid(b, x, l2), mid(a, b, l1))] = mid(a, x, (l1 + l2) % 2)
    ident = {a: mid(a, a, 0) for a in objs}
    cat = fincat.FinBasedCat(objs, 0, mors, comp, ident)
    sum_obj = {(a, b): (a + b) % 2 for a in objs for b in objs}
    sum_mor = {}
    for m1, a1, b1 in mors:
        for m2, a2, b2 in mors:
            sum_mor[(m1, m2)] = mid((a1 + a2) % 2, (b1 + b2) % 2,
                                    (m1[3] + m2[3]) % 2)
    tau = {(a, b): mid((a + b) % 2, (a + b) % 2, 0) for a in objs for b in objs}
    return PermCat(cat, 0, sum_obj, sum_mor, tau)


def perm_sign_groupoid():
    """Objects 0,1 mod 2, homs only on endomorphisms, signs multiply.

    tau(1,1) is the sign flip, which makes this the smallest strict
    permutative category whose symmetry is not the identity.
    """
    objs = (0, 1)

    def mid(a, s):
        return ("s", a, s)

    mors = [(mid(a, s), a, a) for a in objs for s in (1, -1)]
    comp = {}
    for a in objs:
        for s1 in (1, -1):
            for s2 in (1, -1):
                comp[(mid(a, s2), mid(a, s1))] = mid(a, s1 * s2)
    ident = {a: mid(a, 1) for a in objs}
    cat = fincat.FinBasedCat(objs, 0, mors, comp, ident)
    sum_obj = {(a, b): (a + b) % 2 for a in objs for b in objs}
    sum_mor = {}
    for a in objs:
        for s1 in (1, -1):
            for b in objs:
                for s2 in (1, -1):
                    sum_mor[(mid(a, s1), mid(b, s2))] = mid((a + b) % 2, s1 * s2)
    tau = {(a, b): mid((a + b) % 2, -1 if a == 1 and b == 1 else 1)
           for a in objs for b in objs}
    return PermCat(cat, 0, sum_obj, sum_mor, tau)


def perm_corpus():
    """The five strict permutative categories the coherence suites run over."""
    mod2 = lambda a, b: (a + b) % 2
    mod3 = lambda a, b: (a + b) % 3
    return (
        perm_from_abelian_monoid((0, 1), mod2, 0),
        perm_from_abelian_monoid((0, 1, 2), mod3, 0),
        perm_codiscrete_monoid((0, 1), mod2, 0),
        perm_labeled_homs(),
        perm_sign_groupoid(),
    )


# the free permutative category


@dataclass(frozen=True)
class FPMor:
    """List morphism: index function plus one multimorphism per target slot.

    phi is 0-based, phi[i] = target slot of source position i.  psis[k] is a
    multimorphism from the k-fiber of the source list, in position order, to
    dst[k]; an empty fiber takes a 0-morphism.
    """
    src: tuple
    dst: tuple
    phi: tuple
    psis: tuple


class FreePermCat:
    """Lists of objects of a generating multicategory, sum by concatenation."""

    def __init__(self, m: multicat.Multicat):
        self.m = m
        self.unit = ()
        self._tau = {}

    def check_mor(self, fp: FPMor):
        if len(fp.phi) != len(fp.src) or len(fp.psis) != len(fp.dst):
            raise ValueError("index data does not match the lists")
        for k, psi in enumerate(fp.psis):
            fiber = tuple(fp.src[i] for i in range(len(fp.src)) if fp.phi[i] == k)
            if tuple(self.m.sources(psi)) != fiber:
                raise ValueError("fiber %d sources mismatch" % k)
            if self.m.target(psi) != fp.dst[k]:
                raise ValueError("fiber %d target mismatch" % k)
        return True

    def identity(self, objs):
        objs = tuple(objs)
        return FPMor(objs, objs, tuple(range(len(objs))),
                     tuple(self.m.identity(a) for a in objs))

    def compose(self, g: FPMor, f: FPMor):
        """f then g; fiber multimorphisms compose operadically with a sort."""
        if f.dst != g.src:
            raise ArityMismatch("lists do not match for composition")
        phi = tuple(g.phi[f.phi[i]] for i in range(len(f.src)))
        psis = []
        for k in range(len(g.dst)):
            mids = [j for j in range(len(g.src)) if g.phi[j] == k]
            comp = self.m.compose(g.psis[k], [f.psis[j] for j in mids])
            # the operadic composite lists sources grouped by middle slot;
            # sort them back into source position order
            positions = [i for j in mids
                         for i in range(len(f.src)) if f.phi[i] == j]
            rank = {p: r for r, p in enumerate(sorted(positions))}
            sigma = tuple(rank[p] for p in positions)
            if sigma == tuple(range(len(sigma))):
                psis.append(comp)
            else:
                psis.append(self.m.sigma(comp, sigma))
        return FPMor(f.src, g.dst, phi, tuple(psis))

    def sum_obj(self, a, b):
        return tuple(a) + tuple(b)

    def sum_mor(self, f: FPMor, g: FPMor):
        r, s = len(f.dst), len(g.dst)
        phi = tuple(f.phi) + tuple(k + r for k in g.phi)
        return FPMor(f.src + g.src, f.dst + g.dst, phi, f.psis + g.psis)

    def perm_mor(self, objs, p):
        """The invertible list morphism realizing a permutation of slots."""
        objs = tuple(objs)
        return FPMor(objs, perms.apply_perm(p, objs), tuple(p),
                     tuple(self.m.identity(a) for a in perms.apply_perm(p, objs)))

    def tau(self, a, b):
        a, b = tuple(a), tuple(b)
        out = self._tau.get((a, b))
        if out is None:
            r, s = len(a), len(b)
            p = tuple(s + i for i in range(r)) + tuple(range(s))
            out = self.perm_mor(a + b, p)
            self._tau[(a, b)] = out
        return out


def free(m: multicat.Multicat) -> FreePermCat:
    return FreePermCat(m)


def fm_compose(fp_cat: FreePermCat, g: FPMor, f: FPMor) -> FPMor:
    return fp_cat.compose(g, f)


def enumerate_fpmors(fp_cat: FreePermCat, src, dst):
    """All morphisms src -> dst in the free category over a finite table."""
    src = tuple(src)
    dst = tuple(dst)
    m = fp_cat.m
    out = []
    for phi in itertools.product(range(len(dst)), repeat=len(src)):
        fibers = [tuple(src[i] for i in range(len(src)) if phi[i] == k)
                  for k in range(len(dst))]
        pools = [m.multihom(fibers[k], dst[k]) for k in range(len(dst))]
        for psis in itertools.product(*pools):
            out.append(FPMor(src, dst, phi, tuple(psis)))
    return tuple(out)


class StrictMap:
    """A sum-preserving map between free permutative categories."""

    def __init__(self, src: FreePermCat, dst: FreePermCat, ob, mor):
        self.src = src
        self.dst = dst
        self._ob = ob
        self._mor = mor

    def ob(self, objs):
        return self._ob(objs)

    def mor(self, fp):
        return self._mor(fp)


def free_on_multifunctor(g: multicat.Multifunctor) -> StrictMap:
    """Listwise application; strictly preserves concatenation and tau."""
    src = FreePermCat(g.src)
    dst = FreePermCat(g.dst)

    def ob(objs):
        return tuple(g.ob(a) for a in objs)

    def mor(fp: FPMor):
        return FPMor(ob(fp.src), ob(fp.dst), fp.phi,
                     tuple(g.mor(psi) for psi in fp.psis))

    return StrictMap(src, dst, ob, mor)


# adjunction between multifunctors into an underlying and strict maps out of a free


class StrictMapToPerm:
    """A strict map from a free permutative category into a PermCat."""

    def __init__(self, src: FreePermCat, dst: PermCat, ob, mor):
        self.src = src
        self.dst = dst
        self._ob = ob
        self._mor = mor

    def ob(self, objs):
        return self._ob(objs)

    def mor(self, fp):
        return self._mor(fp)


def to_strict(mf: multicat.Multifunctor) -> StrictMapToPerm:
    """Transpose a multifunctor M -> U(C) to a strict map F(M) -> C."""
    m = mf.src
    u = mf.dst
    pc = u.pc
    fp_cat = FreePermCat(m)

    def ob(objs):
        return pc.sum_obj_n([mf.ob(a) for a in objs])

    def mor(fp: FPMor):
        imgs = [mf.ob(a) for a in fp.src]
        # group source summands by target slot, stably
        order = sorted(range(len(fp.src)), key=lambda i: (fp.phi[i], i))
        q = tuple(order.index(i) for i in range(len(fp.src)))
        iso = u.permute_iso(imgs, q)
        body = pc.cat.identity(pc.unit)
        for k in range(len(fp.dst)):
            body = pc.sum_mor(body, mf.mor(fp.psis[k]).mor)
        return pc.cat.compose(body, iso)

    return StrictMapToPerm(fp_cat, pc, ob, mor)


def from_strict(h: StrictMapToPerm) -> multicat.Multifunctor:
    """Transpose a strict map F(M) -> C to a multifunctor M -> U(C)."""
    m = h.src.m
    pc = h.dst
    u = underlying(pc)

    def ob(a):
        return h.ob((a,))

    def mor(f):
        srcs = tuple(m.sources(f))
        fp = FPMor(srcs, (m.target(f),), tuple(0 for _ in srcs), (f,))
        return multicat.UMor(tuple(ob(a) for a in srcs), ob(m.target(f)),
                             h.mor(fp))

    return multicat.Multifunctor(m, u, ob, mor)


def enumerate_multifunctors(m: multicat.TableMulticat, pc: PermCat):
    """All multifunctors from a finite table multicategory to underlying(pc)."""
    u = underlying(pc)
    out = []
    mobjs = list(m.objects)
    all_mors = m.all_morphisms()
    for ob_vals in itertools.product(pc.cat.objects, repeat=len(mobjs)):
        ob = dict(zip(mobjs, ob_vals))
        choices = []
        ok = True
        for mor in all_mors:
            srcs, tgt = m.mors[mor]
            if mor in m.identities.values():
                choices.append((pc.cat.identity(ob[tgt]),))
                continue
            cands = pc.cat.hom(pc.sum_obj_n([ob[a] for a in srcs]), ob[tgt])
            if not cands:
                ok = False
                break
            choices.append(cands)
        if not ok:
            continue
        for vals in itertools.product(*choices):
            asg = dict(zip(all_mors, vals))

            def mk(ob=ob, asg=asg):
                def fob(a):
                    return ob[a]

                def fmor(f):
                    srcs, tgt = m.mors[f]
                    return multicat.UMor(tuple(ob[a] for a in srcs),
                                         ob[tgt], asg[f])
                return multicat.Multifunctor(m, u, fob, fmor)

            mf = mk()
            if _multifunctor_ok(m, u, mf):
                out.append(mf)
    return out


def _multifunctor_ok(m, u, mf):
    for a in m.objects:
        if not mf.check_identity(a):
            return False
    for (outer, inners) in m.compose_table:
        if not mf.check_composition(outer, tuple(inners)):
            return False
    for (mor, p) in m.sigma_table:
        if not mf.check_sigma(mor, p):
            return False
    return True


# the tensor fragment and the bilinear pairing


@dataclass(frozen=True)
class FragMor:
    """A bi-morphism of the tensor fragment in normal form.

    mpart and npart act on the two coordinates; order lists the source grid
    as 1-based (m-index, n-index) pairs and records how the grid is arranged.
    """
    mpart: object
    npart: object
    order: tuple


class TensorFragment(multicat.Multicat):
    """Pairs of objects; multimorphisms are grid-acting bi-morphism pairs.

    A pair whose source grid is empty carries more data than the morphism
    it denotes: the interchange relation collapses the non-degenerate side.
    Such pairs are kept in a canonical form that every construction here
    funnels through, so plain field equality is morphism equality.
    """

    def __init__(self, m: multicat.Multicat, n: multicat.Multicat):
        self.m = m
        self.n = n

    def canon(self, f: FragMor) -> FragMor:
        if f.order:
            # pairings are equivariant in each slot, so relabeling one
            # part's sources while reindexing the grid gives the same
            # morphism; the representative numbers each part's sources in
            # order of first appearance in the grid
            rows = []
            cols = []
            for a, b in f.order:
                if a not in rows:
                    rows.append(a)
                if b not in cols:
                    cols.append(b)
            r = len(self.m.sources(f.mpart))
            s = len(self.n.sources(f.npart))
            if len(rows) != r or len(cols) != s:
                raise ArityMismatch("the grid does not reference every "
                                    "source of both parts")
            if rows == list(range(1, r + 1)) and cols == list(range(1, s + 1)):
                return f
            rp = tuple(rows.index(a) for a in range(1, r + 1))
            cp = tuple(cols.index(b) for b in range(1, s + 1))
            order = tuple((rp[a - 1] + 1, cp[b - 1] + 1) for a, b in f.order)
            return FragMor(self.m.sigma(f.mpart, rp),
                           self.n.sigma(f.npart, cp), order)
        x = self.m.target(f.mpart)
        y = self.n.target(f.npart)
        r0 = len(self.m.sources(f.mpart)) == 0
        s0 = len(self.n.sources(f.npart)) == 0
        mnull = self.m.multihom((), x)
        if r0:
            # a nullary on the n side links the classes of all m nullaries
            if self.n.multihom((), y):
                return FragMor(min(mnull, key=fincat.skey),
                               self.n.identity(y), ())
            return FragMor(f.mpart, self.n.identity(y), ())
        if s0:
            if mnull:
                return FragMor(min(mnull, key=fincat.skey),
                               self.n.identity(y), ())
            return FragMor(self.m.identity(x), f.npart, ())
        raise ArityMismatch("empty grid with two positive arities")

    def sources(self, f: FragMor):
        ms = self.m.sources(f.mpart)
        ns = self.n.sources(f.npart)
        return tuple((ms[a - 1], ns[b - 1]) for a, b in f.order)

    def target(self, f: FragMor):
        return (self.m.target(f.mpart), self.n.target(f.npart))

    def identity(self, pair):
        x, y = pair
        return FragMor(self.m.identity(x), self.n.identity(y), ((1, 1),))

    def sigma(self, f: FragMor, perm):
        return self.canon(FragMor(f.mpart, f.npart,
                                  perms.apply_perm(perm, f.order)))

    def compose(self, outer: FragMor, inners):
        """Defined on grid-aligned families: the inner morphism at a source
        position may depend on that position's m-index only through its
        m-part and on its n-index only through its n-part.  An inner with
        an empty grid stands for a whole congruence class of pairs, and the
        class decides what it pins down: with nullaries on both sides any
        pair with one nullary side is a member, so the cell only demands
        that one side of it end up nullary; with nullaries on the m side
        alone the stored m part is pinned and the n side is free; dually
        on the other side.  Rows and columns left open default to the
        least nullary, and the result is re-canonicalized."""
        inners = tuple(inners)
        if len(inners) != len(outer.order):
            raise ArityMismatch("inner count does not match the grid")
        outer = self.canon(outer)
        if not outer.order:
            return outer
        r = len(self.m.sources(outer.mpart))
        s = len(self.n.sources(outer.npart))
        mparts = {}
        nparts = {}

        def set_row(a, val):
            if a in mparts and mparts[a] != val:
                raise ArityMismatch("family is not grid aligned in the m part")
            mparts[a] = val

        def set_col(b, val):
            if b in nparts and nparts[b] != val:
                raise ArityMismatch("family is not grid aligned in the n part")
            nparts[b] = val

        flexible = []
        for (a, b), g in zip(outer.order, inners):
            if g.order:
                set_row(a, g.mpart)
                set_col(b, g.npart)
                continue
            mnull = self.m.multihom((), self.m.target(g.mpart))
            nnull = self.n.multihom((), self.n.target(g.npart))
            if mnull and nnull:
                flexible.append(((a, b), min(mnull, key=fincat.skey),
                                 min(nnull, key=fincat.skey)))
            elif mnull:
                set_row(a, g.mpart)
            elif nnull:
                set_col(b, g.npart)
            else:
                raise ArityMismatch("degenerate inner with no nullary data")
        for (a, b), m0, n0 in flexible:
            arow = mparts.get(a)
            bcol = nparts.get(b)
            anull = arow is not None and not self.m.sources(arow)
            bnull = bcol is not None and not self.n.sources(bcol)
            if arow is not None and bcol is not None:
                if not anull and not bnull:
                    raise ArityMismatch("degenerate cell between two "
                                        "non-nullary parts")
            elif arow is not None and not anull:
                set_col(b, n0)
            elif bcol is not None and not bnull:
                set_row(a, m0)
        for (a, b), m0, n0 in flexible:
            if a not in mparts:
                mparts[a] = m0
            if b not in nparts:
                nparts[b] = n0
        # a slot seen only through cells that pin the other side never
        # contributes sources, and canon erases it from the composite, so
        # the identity stands in
        xs = self.m.sources(outer.mpart)
        ys = self.n.sources(outer.npart)
        for a in range(1, r + 1):
            if a not in mparts:
                mparts[a] = self.m.identity(xs[a - 1])
        for b in range(1, s + 1):
            if b not in nparts:
                nparts[b] = self.n.identity(ys[b - 1])
        mcomp = self.m.compose(outer.mpart, [mparts[a] for a in range(1, r + 1)])
        ncomp = self.n.compose(outer.npart, [nparts[b] for b in range(1, s + 1)])
        moffs = [0]
        for a in range(1, r + 1):
            moffs.append(moffs[-1] + len(self.m.sources(mparts[a])))
        noffs = [0]
        for b in range(1, s + 1):
            noffs.append(noffs[-1] + len(self.n.sources(nparts[b])))
        order = []
        for (a, b), g in zip(outer.order, inners):
            for (a2, b2) in g.order:
                order.append((moffs[a - 1] + a2, noffs[b - 1] + b2))
        return self.canon(FragMor(mcomp, ncomp, tuple(order)))


def lambda_free_obj(xs, ys):
    """Pair the lists into the grid, second index prioritized."""
    return tuple((x, y) for y in ys for x in xs)


def lambda_free_mor(m, n, u: FPMor, v: FPMor) -> FPMor:
    """The pairing of two list morphisms, one slot bi-morphism per target cell."""
    frag = TensorFragment(m, n)
    src = lambda_free_obj(u.src, v.src)
    dst = lambda_free_obj(u.dst, v.dst)
    r1, s1 = len(u.src), len(v.src)
    r2 = len(u.dst)
    phi = []
    for j in range(s1):
        for i in range(r1):
            phi.append(v.phi[j] * r2 + u.phi[i])
    psis = []
    for q in range(len(v.dst)):
        vfiber = [j for j in range(s1) if v.phi[j] == q]
        for k in range(r2):
            ufiber = [i for i in range(r1) if u.phi[i] == k]
            order = tuple((ai + 1, bj + 1)
                          for bj in range(len(vfiber))
                          for ai in range(len(ufiber)))
            psis.append(frag.canon(FragMor(u.psis[k], v.psis[q], order)))
    return FPMor(src, dst, tuple(phi), tuple(psis))


# the two distributors


def delta1(r: int, s: int, t: int):
    """Shuffle comparing the two groupings of a split first argument."""
    return perms.delta1_shuffle(r, s, t)


def delta1_oracle(r: int, s: int, t: int):
    """Recompute delta1 from the labeled lists themselves."""
    xs = [("x", i) for i in range(r)]
    zs = [("z", k) for k in range(t)]
    ys = [("y", j) for j in range(s)]
    lhs = list(lambda_free_obj(xs, ys)) + list(lambda_free_obj(zs, ys))
    rhs = list(lambda_free_obj(xs + zs, ys))
    assert sorted(map(repr, lhs)) == sorted(map(repr, rhs))
    return tuple(rhs.index(item) for item in lhs)


def delta2(r: int, s: int, p: int):
    """Identity: splitting the second argument already matches literally."""
    xs = [("x", i) for i in range(r)]
    ys = [("y", j) for j in range(s)]
    ws = [("w", k) for k in range(p)]
    lhs = list(lambda_free_obj(xs, ys)) + list(lambda_free_obj(xs, ws))
    rhs = list(lambda_free_obj(xs, ys + ws))
    if lhs != rhs:
        raise AssertionError("second-argument split is not literal")
    return perms.identity_perm(r * (s + p))
