"""Multicategories, multifunctors, ring structures, and the extension lemma.

Two multicategories carry the whole pipeline and are generated lazily: the
levels multicategory (objects are natural numbers n standing for the pointed
set {0..n}, an r-morphism (n_1..n_r) -> m is a function picking, for each of
the m elements, a summand index and an element of that summand) and the dual
category multicategory (objects are FinBasedCat values, an r-morphism
(D_1..D_r) -> C is a based functor C -> D_1 x ... x D_r).

Permutations act on the right: (f sigma) has its i-th source moved to
position sigma(i), and acting by sigma then tau equals acting by
compose_perms(sigma, tau).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import fincat, perms
from .errors import ArityMismatch, CoherenceFailure, IllFormedDiagram


class Multicat:
    """Interface shared by every multicategory in the package."""

    def multihom(self, sources, target):
        raise NotImplementedError

    def compose(self, outer, inners):
        raise NotImplementedError

    def identity(self, obj):
        raise NotImplementedError

    def sigma(self, mor, perm):
        raise NotImplementedError

    def sources(self, mor):
        raise NotImplementedError

    def target(self, mor):
        raise NotImplementedError

    def arity(self, mor):
        return len(self.sources(mor))


# the levels multicategory


@dataclass(frozen=True)
class NNMor:
    """(n_1..n_r) -> m given by a function out of {1..m} into the sum.

    fn has length m; fn[x-1] = (i, k) picks element k of source i, both
    1-based.  A source of size 0 contributes no values.
    """
    srcs: tuple
    tgt: int
    fn: tuple

    def __post_init__(self):
        assert len(self.fn) == self.tgt
        for i, k in self.fn:
            assert 1 <= i <= len(self.srcs) and 1 <= k <= self.srcs[i - 1]


class NN(Multicat):
    """The levels multicategory, base object 0."""

    base = 0

    def multihom(self, sources, target):
        sources = tuple(sources)
        choices = [(i + 1, k + 1)
                   for i, n in enumerate(sources) for k in range(n)]
        out = []
        for fn in itertools.product(choices, repeat=target):
            out.append(NNMor(sources, target, fn))
        return tuple(out)

    def compose(self, outer, inners):
        inners = tuple(inners)
        if len(inners) != len(outer.srcs):
            raise ArityMismatch("outer arity %d, %d inner morphisms"
                                % (len(outer.srcs), len(inners)))
        for g, n in zip(inners, outer.srcs):
            if g.tgt != n:
                raise ArityMismatch("inner target %d does not match source %d"
                                    % (g.tgt, n))
        offs = [0]
        for g in inners:
            offs.append(offs[-1] + len(g.srcs))
        fn = []
        for i, k in outer.fn:
            j, z = inners[i - 1].fn[k - 1]
            fn.append((offs[i - 1] + j, z))
        srcs = tuple(itertools.chain.from_iterable(g.srcs for g in inners))
        return NNMor(srcs, outer.tgt, tuple(fn))

    _ident_cache = {}

    def identity(self, n):
        out = self._ident_cache.get(n)
        if out is None:
            out = NNMor((n,), n, tuple((1, k + 1) for k in range(n)))
            self._ident_cache[n] = out
        return out

    def sigma(self, mor, perm):
        assert len(perm) == len(mor.srcs)
        if perm == perms.identity_perm(len(perm)):
            return mor
        return NNMor(perms.apply_perm(perm, mor.srcs), mor.tgt,
                     tuple((perm[i - 1] + 1, k) for i, k in mor.fn))

    def sources(self, mor):
        return mor.srcs

    def target(self, mor):
        return mor.tgt


def nn():
    return NN()


# the dual category multicategory


@dataclass(frozen=True)
class CatStarMor:
    """(D_1..D_r) -> C carried by a based functor C -> D_1 x ... x D_r."""
    srcs: tuple
    tgt: object
    functor: fincat.BasedFunctor


@lru_cache(maxsize=None)
def _coord_perm_iso(cats, perm):
    """Product reindexing D_1 x..x D_r -> D_{s(1)} x..: coordinate i moves to perm(i)."""
    src = fincat.nary_product(cats)
    dst = fincat.nary_product(perms.apply_perm(perm, cats))
    return fincat.BasedFunctor(
        src, dst,
        {o: perms.apply_perm(perm, o) for o in src.objects},
        {m: perms.apply_perm(perm, m) for m in src.morphisms()},
        check=False)


@lru_cache(maxsize=None)
def _flatten_iso(rows):
    """(prod of row products) -> (flat product), coordinates in row-major order."""
    nested = fincat.nary_product(tuple(fincat.nary_product(r) for r in rows))
    flat = fincat.nary_product(tuple(itertools.chain.from_iterable(rows)))

    def squash(t):
        return tuple(itertools.chain.from_iterable(t))

    return fincat.BasedFunctor(
        nested, flat,
        {o: squash(o) for o in nested.objects},
        {m: squash(m) for m in nested.morphisms()},
        check=False)


def enumerate_based_functors(c, d):
    """Brute-force listing of all based functors c -> d."""
    out = []
    objs = list(c.objects)
    obj_choices = []
    for a in objs:
        obj_choices.append((d.base,) if a == c.base else d.objects)
    nonid = [m for m in c.morphisms() if not c.is_identity(m)]
    for om_vals in itertools.product(*obj_choices):
        om = dict(zip(objs, om_vals))
        mor_choices = []
        ok = True
        for m in nonid:
            cands = d.hom(om[c.src(m)], om[c.dst(m)])
            if not cands:
                ok = False
                break
            mor_choices.append(cands)
        if not ok:
            continue
        for mm_vals in itertools.product(*mor_choices):
            mm = dict(zip(nonid, mm_vals))
            for a in objs:
                mm[c.identity(a)] = d.identity(om[a])
            try:
                out.append(fincat.BasedFunctor(c, d, om, mm, check=True))
            except ValueError:
                continue
    return tuple(out)


class CatStarOp(Multicat):
    """Objects are finite based categories; multimorphisms point backwards."""

    base = fincat.terminal()

    def multihom(self, sources, target):
        sources = tuple(sources)
        prod = fincat.nary_product(sources)
        return tuple(CatStarMor(sources, target, f)
                     for f in enumerate_based_functors(target, prod))

    def compose(self, outer, inners):
        inners = tuple(inners)
        if len(inners) != len(outer.srcs):
            raise ArityMismatch("outer arity %d, %d inner morphisms"
                                % (len(outer.srcs), len(inners)))
        for g, dcat in zip(inners, outer.srcs):
            if g.tgt != dcat:
                raise ArityMismatch("inner target does not match outer source")
        rows = tuple(g.srcs for g in inners)
        spread = fincat.product_functor(
            tuple(g.functor for g in inners),
            src_prod=fincat.nary_product(tuple(g.tgt for g in inners)))
        flat = _flatten_iso(rows)
        functor = outer.functor.then(spread).then(flat)
        return CatStarMor(tuple(itertools.chain.from_iterable(rows)),
                          outer.tgt, functor)

    def identity(self, c):
        prod = fincat.nary_product((c,))
        return CatStarMor(
            (c,), c,
            fincat.BasedFunctor(c, prod,
                                {a: (a,) for a in c.objects},
                                {m: (m,) for m in c.morphisms()}, check=False))

    def sigma(self, mor, perm):
        assert len(perm) == len(mor.srcs)
        iso = _coord_perm_iso(tuple(mor.srcs), tuple(perm))
        return CatStarMor(perms.apply_perm(perm, mor.srcs), mor.tgt,
                          mor.functor.then(iso))

    def sources(self, mor):
        return mor.srcs

    def target(self, mor):
        return mor.tgt


def catstar_op():
    return CatStarOp()


# finite explicit multicategories


class TableMulticat(Multicat):
    """A finite multicategory given by explicit tables.

    mors: mapping id -> (sources tuple, target).  compose_table: mapping
    (outer id, inner id tuple) -> id.  sigma_table: mapping (id, perm) -> id,
    with identity permutations implied.  identities: mapping object -> id.
    """

    def __init__(self, objects, mors, compose_table, sigma_table, identities,
                 base=None):
        self.objects = tuple(objects)
        self.mors = dict(mors)
        self.compose_table = dict(compose_table)
        self.sigma_table = dict(sigma_table)
        self.identities = dict(identities)
        self.base = base

    def multihom(self, sources, target):
        sources = tuple(sources)
        return tuple(sorted((m for m, (s, t) in self.mors.items()
                             if s == sources and t == target), key=fincat.skey))

    def all_morphisms(self):
        return tuple(sorted(self.mors, key=fincat.skey))

    def compose(self, outer, inners):
        inners = tuple(inners)
        srcs, _ = self.mors[outer]
        if len(inners) != len(srcs):
            raise ArityMismatch("outer arity %d, %d inner morphisms"
                                % (len(srcs), len(inners)))
        key = (outer, inners)
        if key not in self.compose_table:
            raise ArityMismatch("no composite recorded for %r" % (key,))
        return self.compose_table[key]

    def identity(self, obj):
        return self.identities[obj]

    def sigma(self, mor, perm):
        perm = tuple(perm)
        if perm == perms.identity_perm(len(perm)):
            return mor
        return self.sigma_table[(mor, perm)]

    def sources(self, mor):
        return self.mors[mor][0]

    def target(self, mor):
        return self.mors[mor][1]

    def to_json(self):
        t = fincat.token
        return {
            "objects": [t(a) for a in self.objects],
            "multimorphisms": sorted(
                [{"id": t(m), "sources": [t(s) for s in ss], "target": t(tt)}
                 for m, (ss, tt) in self.mors.items()],
                key=lambda e: e["id"]),
            "compose": sorted([[t(o), [t(i) for i in ins], t(out)]
                               for (o, ins), out in self.compose_table.items()]),
            "sigma": sorted([[t(m), list(p), t(out)]
                             for (m, p), out in self.sigma_table.items()]),
            "identities": {t(a): t(m) for a, m in self.identities.items()},
            "base": None if self.base is None else t(self.base),
        }

    @classmethod
    def from_json(cls, doc):
        u = fincat.untoken
        return cls(
            [u(a) for a in doc["objects"]],
            {u(e["id"]): (tuple(u(s) for s in e["sources"]), u(e["target"]))
             for e in doc["multimorphisms"]},
            {(u(o), tuple(u(i) for i in ins)): u(out)
             for o, ins, out in doc["compose"]},
            {(u(m), tuple(p)): u(out) for m, p, out in doc["sigma"]},
            {u(a): u(m) for a, m in doc["identities"].items()},
            base=u(doc["base"]) if doc.get("base") is not None else None)


def validate_multicat(mc, objects, max_arity=3, max_fanout=2):
    """Operadic laws over the listed objects, small arities.

    Checks unit laws on every enumerated morphism, then associativity of
    nested composition and equivariance of the sigma action.  max_fanout
    caps how many candidate morphisms feed each slot of the associativity
    nest; any cap wide enough to cover the hom sets makes the sweep
    exhaustive, which it is for the small table corpora.
    """
    def homs(r):
        for srcs in itertools.product(objects, repeat=r):
            for t in objects:
                for m in mc.multihom(srcs, t):
                    yield m

    # unit laws
    for r in range(0, max_arity + 1):
        for f in homs(r):
            ids = [mc.identity(a) for a in mc.sources(f)]
            if mc.compose(f, ids) != f:
                raise AssertionError("right unit law fails on %r" % (f,))
            if mc.compose(mc.identity(mc.target(f)), [f]) != f:
                raise AssertionError("left unit law fails on %r" % (f,))

    # associativity gamma(gamma(f; gs); hs) = gamma(f; gamma(g_i; hs_i))
    unary = {}
    into = {}
    for a in objects:
        unary[a] = [m for b in objects for m in mc.multihom((b,), a)][:max_fanout]
        two = [m for bs in itertools.product(objects, repeat=2)
               for m in mc.multihom(bs, a)][:max_fanout]
        into[a] = unary[a] + two
    undefined = object()

    def try_compose(outer, inners):
        # a table truncated by arity is a partial multicategory; composites
        # past its bound are out of domain, not failures
        try:
            return mc.compose(outer, inners)
        except ArityMismatch:
            return undefined

    for f in homs(2):
        pools = [into[a] for a in mc.sources(f)]
        for gs in itertools.product(*pools):
            mid = try_compose(f, gs)
            if mid is undefined:
                continue
            per_g = [list(itertools.product(*(unary[a] for a in mc.sources(g))))
                     for g in gs]
            for hss in itertools.product(*per_g):
                flat = tuple(itertools.chain.from_iterable(hss))
                lhs = try_compose(mid, flat)
                rhs = try_compose(f, [mc.compose(g, hs)
                                      for g, hs in zip(gs, hss)])
                if lhs != rhs:
                    raise AssertionError(
                        "associativity fails on %r" % ((f, gs, hss),))

    # sigma equivariance
    for f in homs(2):
        for p in perms.all_perms(2):
            for q in perms.all_perms(2):
                one = mc.sigma(mc.sigma(f, p), q)
                two = mc.sigma(f, perms.compose_perms(p, q))
                if one != two:
                    raise AssertionError("sigma action not functorial on %r" % (f,))
    return True


def terminal_table(max_arity=3):
    """One object with a unique multimorphism in every arity up to the bound."""
    obj = "*"
    mors = {("m", r): (tuple(obj for _ in range(r)), obj)
            for r in range(max_arity + 1)}
    compose_table = {}
    for r in range(max_arity + 1):
        for ts in itertools.product(range(max_arity + 1), repeat=r):
            if sum(ts) <= max_arity:
                key = (("m", r), tuple(("m", t) for t in ts))
                compose_table[key] = ("m", sum(ts))
    sigma_table = {}
    for r in range(2, max_arity + 1):
        for p in perms.all_perms(r):
            sigma_table[(("m", r), p)] = ("m", r)
    return TableMulticat((obj,), mors, compose_table, sigma_table,
                         {obj: ("m", 1)}, base=obj)


def discrete_table(labels):
    """Only identity multimorphisms."""
    labels = tuple(labels)
    mors = {("id", a): ((a,), a) for a in labels}
    compose_table = {(("id", a), (("id", a),)): ("id", a) for a in labels}
    return TableMulticat(labels, mors, compose_table, {},
                         {a: ("id", a) for a in labels})


def graded_table():
    """Two objects and one binary operation (a, a) -> b, symmetric."""
    mors = {
        ("id", "a"): (("a",), "a"),
        ("id", "b"): (("b",), "b"),
        "p": (("a", "a"), "b"),
    }
    compose_table = {
        (("id", "a"), (("id", "a"),)): ("id", "a"),
        (("id", "b"), (("id", "b"),)): ("id", "b"),
        (("id", "b"), ("p",)): "p",
        ("p", (("id", "a"), ("id", "a"))): "p",
    }
    sigma_table = {("p", (1, 0)): "p"}
    return TableMulticat(("a", "b"), mors, compose_table, sigma_table,
                         {"a": ("id", "a"), "b": ("id", "b")})


# multifunctors


class Multifunctor:
    """Object and multimorphism assignment between multicategories."""

    def __init__(self, src, dst, ob, mor):
        self.src = src
        self.dst = dst
        self._ob = ob
        self._mor = mor

    def ob(self, a):
        return self._ob(a)

    def mor(self, f):
        return self._mor(f)

    def check_identity(self, obj):
        return self.mor(self.src.identity(obj)) == self.dst.identity(self.ob(obj))

    def check_composition(self, outer, inners):
        lhs = self.mor(self.src.compose(outer, inners))
        rhs = self.dst.compose(self.mor(outer), [self.mor(g) for g in inners])
        return lhs == rhs

    def check_sigma(self, f, perm):
        return self.mor(self.src.sigma(f, perm)) == \
            self.dst.sigma(self.mor(f), perm)


# ring structures


class RingStructure:
    """A bilinear multiplication with unit on a multicategory.

    obj is the object-level product, right(f, b) multiplies a multimorphism
    by a fixed object on the right, left(a, g) on the left.
    """

    def obj(self, a, b):
        raise NotImplementedError

    def right(self, f, b):
        raise NotImplementedError

    def left(self, a, g):
        raise NotImplementedError

    def obj_n(self, items):
        """Left-nested product of a list of objects; empty gives the unit."""
        out = self.unit
        for i, a in enumerate(items):
            out = a if i == 0 else self.obj(out, a)
        return out


class NNRing(RingStructure):
    """Multiplication of levels through the lexicographic pairing."""

    unit = 1

    def obj(self, m, n):
        return m * n

    def right(self, f: NNMor, n: int):
        srcs = tuple(a * n for a in f.srcs)
        fn = []
        for big in range(1, f.tgt * n + 1):
            x, y = perms.lex_index_to_pair(big, n)
            i, k = f.fn[x - 1]
            fn.append((i, perms.lex_pair_to_index(k, y, n)))
        return NNMor(srcs, f.tgt * n, tuple(fn))

    def left(self, m: int, g: NNMor):
        srcs = tuple(m * a for a in g.srcs)
        n = g.tgt
        fn = []
        for big in range(1, m * n + 1):
            x, y = perms.lex_index_to_pair(big, n)
            j, z = g.fn[y - 1]
            fn.append((j, perms.lex_pair_to_index(x, z, g.srcs[j - 1])))
        return NNMor(srcs, m * n, tuple(fn))


def nn_ring():
    return NNRing()


class CatStarRing(RingStructure):
    """Smash product multiplication on the dual category multicategory."""

    def __init__(self):
        self.unit = fincat.s0()

    def smash_of(self, c, d):
        return fincat.smash(c, d)

    def obj(self, c, d):
        return fincat.smash(c, d).cat

    def right(self, f: CatStarMor, d):
        sr = fincat.smash(f.tgt, d)
        prod = fincat.nary_product(tuple(f.srcs))
        comps = []
        for i, s in enumerate(f.srcs):
            fi = f.functor.then(fincat.proj_functor(prod, f.srcs, i))
            comps.append(fincat.smash_functor(
                sr, fincat.smash(s, d), fi, fincat.identity_functor(d)))
        srcs = tuple(fincat.smash(s, d).cat for s in f.srcs)
        functor = fincat.tuple_functor(comps, fincat.nary_product(srcs))
        return CatStarMor(srcs, sr.cat, functor)

    def left(self, c, g: CatStarMor):
        sr = fincat.smash(c, g.tgt)
        prod = fincat.nary_product(tuple(g.srcs))
        comps = []
        for j, s in enumerate(g.srcs):
            gj = g.functor.then(fincat.proj_functor(prod, g.srcs, j))
            comps.append(fincat.smash_functor(
                sr, fincat.smash(c, s), fincat.identity_functor(c), gj))
        srcs = tuple(fincat.smash(c, s).cat for s in g.srcs)
        functor = fincat.tuple_functor(comps, fincat.nary_product(srcs))
        return CatStarMor(srcs, sr.cat, functor)


def catstar_ring():
    return CatStarRing()


# diagram checking


@dataclass(frozen=True)
class Diagram:
    """Parallel paths in one category, each a diagrammatic word from anchor."""
    name: str
    cat: object
    anchor: object
    paths: tuple


@dataclass
class DiagramReport:
    name: str
    commutes: bool
    value: object = None
    divergence: object = None

    def __bool__(self):
        return self.commutes


def check_diagram(d: Diagram) -> DiagramReport:
    if len(d.paths) < 2:
        raise IllFormedDiagram("a diagram needs at least two paths")
    vals = []
    for w in d.paths:
        try:
            vals.append(d.cat.compose_word(d.anchor, w))
        except KeyError as e:
            raise IllFormedDiagram("path %r is not composable: %r" % (w, e))
    ends = {d.cat.dst(v) for v in vals}
    if len(ends) > 1:
        raise IllFormedDiagram("paths are not parallel: targets %r" % (ends,))
    first = vals[0]
    for i, v in enumerate(vals[1:], start=1):
        if v != first:
            return DiagramReport(d.name, False, divergence=((0, first), (i, v)))
    return DiagramReport(d.name, True, value=first)


# the underlying multicategory of a permutative category


@dataclass(frozen=True)
class UMor:
    """(a_1..a_r) -> b given by a morphism out of the iterated sum."""
    srcs: tuple
    tgt: object
    mor: object


class UnderlyingMulticat(Multicat):
    """Multimorphisms (a_1..a_r) -> b are maps a_1 + ... + a_r -> b.

    pc is a permutative category value: strict sum on a FinBasedCat with
    unit object and symmetry isomorphisms tau.
    """

    def __init__(self, pc):
        self.pc = pc
        self.base = pc.unit

    def _sum_obj(self, items):
        out = self.pc.unit
        for a in items:
            out = self.pc.sum_obj(out, a)
        return out

    def _sum_mor(self, mors):
        out = self.pc.cat.identity(self.pc.unit)
        for m in mors:
            out = self.pc.sum_mor(out, m)
        return out

    def multihom(self, sources, target):
        sources = tuple(sources)
        return tuple(UMor(sources, target, m)
                     for m in self.pc.cat.hom(self._sum_obj(sources), target))

    def compose(self, outer, inners):
        inners = tuple(inners)
        if len(inners) != len(outer.srcs):
            raise ArityMismatch("outer arity %d, %d inner morphisms"
                                % (len(outer.srcs), len(inners)))
        for g, a in zip(inners, outer.srcs):
            if g.tgt != a:
                raise ArityMismatch("inner target does not match outer source")
        srcs = tuple(itertools.chain.from_iterable(g.srcs for g in inners))
        m = self.pc.cat.compose(outer.mor, self._sum_mor([g.mor for g in inners]))
        return UMor(srcs, outer.tgt, m)

    def identity(self, a):
        return UMor((a,), a, self.pc.cat.identity(a))

    def permute_iso(self, items, perm):
        """The canonical map a_1 + .. + a_r -> sum in permuted slot order.

        Built from adjacent transpositions of tau; naturality and the
        hexagon make any decomposition give the same morphism.
        """
        items = list(items)
        perm = list(perm)
        cat = self.pc.cat
        out = cat.identity(self._sum_obj(items))
        # selection sort by adjacent swaps; each swap is a whiskered tau
        want = [None] * len(items)
        for i, p in enumerate(perm):
            want[p] = i
        seq = list(range(len(items)))
        for slot in range(len(items)):
            j = seq.index(want[slot])
            while j > slot:
                # swap positions j-1, j
                before = [items[seq[k]] for k in range(j - 1)]
                x, y = items[seq[j - 1]], items[seq[j]]
                after = [items[seq[k]] for k in range(j + 1, len(items))]
                step = self._sum_mor_parts(before, self.pc.tau(x, y), after)
                out = cat.compose(step, out)
                seq[j - 1], seq[j] = seq[j], seq[j - 1]
                j -= 1
        return out

    def _sum_mor_parts(self, before, middle, after):
        cat = self.pc.cat
        m = cat.identity(self._sum_obj(before))
        m = self.pc.sum_mor(m, middle)
        for a in after:
            m = self.pc.sum_mor(m, cat.identity(a))
        return m

    def sigma(self, mor, perm):
        perm = tuple(perm)
        new_srcs = perms.apply_perm(perm, mor.srcs)
        iso = self.permute_iso(new_srcs, perms.invert_perm(perm))
        return UMor(new_srcs, mor.tgt, self.pc.cat.compose(mor.mor, iso))

    def sources(self, mor):
        return mor.srcs

    def target(self, mor):
        return mor.tgt


# the extension lemma


class SMCFunctorData:
    """A functor between permutative categories with sum comparison data.

    functor: fincat.Functor on the underlying categories.  lam: mapping
    (x, y) -> morphism F(x) + F(y) -> F(x + y).  eta: morphism e -> F(e).
    """

    def __init__(self, src_pc, dst_pc, functor, lam, eta):
        self.src_pc = src_pc
        self.dst_pc = dst_pc
        self.functor = functor
        self.lam = dict(lam)
        self.eta = eta


def _check_extension_coherence(data: SMCFunctorData):
    """The four diagrams gating the extension, checked exhaustively."""
    P, Q = data.src_pc, data.dst_pc
    C, D = P.cat, Q.cat
    F, lam, eta = data.functor, data.lam, data.eta

    def fs(x):
        return F.ob(x)

    for x in C.objects:
        for y in C.objects:
            if (x, y) not in lam:
                raise CoherenceFailure("comparison-family", (x, y),
                                       "missing component")
            m = lam[(x, y)]
            if D.src(m) != Q.sum_obj(fs(x), fs(y)) or D.dst(m) != fs(P.sum_obj(x, y)):
                raise CoherenceFailure("comparison-family", (x, y),
                                       "component has wrong endpoints")

    # associativity: the two regroupings of a triple agree
    for x, y, z in itertools.product(C.objects, repeat=3):
        left = D.compose(lam[(P.sum_obj(x, y), z)],
                         Q.sum_mor(lam[(x, y)], D.identity(fs(z))))
        right = D.compose(lam[(x, P.sum_obj(y, z))],
                          Q.sum_mor(D.identity(fs(x)), lam[(y, z)]))
        if left != right:
            raise CoherenceFailure("sum-associativity", (x, y, z))

    # interchange with the symmetry
    for x, y in itertools.product(C.objects, repeat=2):
        left = D.compose(lam[(y, x)], Q.tau(fs(x), fs(y)))
        right = D.compose(F.mor(P.tau(x, y)), lam[(x, y)])
        if left != right:
            raise CoherenceFailure("symmetry-interchange", (x, y))

    # naturality in both slots
    for f in C.morphisms():
        for g in C.morphisms():
            left = D.compose(lam[(C.dst(f), C.dst(g))],
                             Q.sum_mor(F.mor(f), F.mor(g)))
            right = D.compose(F.mor(P.sum_mor(f, g)),
                              lam[(C.src(f), C.src(g))])
            if left != right:
                raise CoherenceFailure("naturality", (f, g))

    # unit triangles
    for x in C.objects:
        left_unit = D.compose(lam[(P.unit, x)],
                              Q.sum_mor(eta, D.identity(fs(x))))
        if left_unit != D.identity(fs(x)):
            raise CoherenceFailure("unit", ("left", x))
        right_unit = D.compose(lam[(x, P.unit)],
                               Q.sum_mor(D.identity(fs(x)), eta))
        if right_unit != D.identity(fs(x)):
            raise CoherenceFailure("unit", ("right", x))


def extend_to_multifunctor(src_pc, dst_pc, functor, lam, eta) -> Multifunctor:
    """Extend functor-with-comparisons data to the underlying multicategories.

    The nullary comparison is eta, the unary one is the identity, and each
    higher one is built left-nested from the binary family.  Raises
    CoherenceFailure naming the first diagram instance that fails.
    """
    data = SMCFunctorData(src_pc, dst_pc, functor, lam, eta)
    _check_extension_coherence(data)
    P, Q = src_pc, dst_pc
    D = Q.cat
    F = functor
    usrc = UnderlyingMulticat(P)
    udst = UnderlyingMulticat(Q)

    def lam_r(items):
        items = tuple(items)
        if not items:
            return eta
        out = D.identity(F.ob(items[0]))
        acc = items[0]
        for a in items[1:]:
            out = D.compose(lam[(acc, a)], Q.sum_mor(out, D.identity(F.ob(a))))
            acc = P.sum_obj(acc, a)
        return out

    def mor(um: UMor):
        return UMor(tuple(F.ob(a) for a in um.srcs), F.ob(um.tgt),
                    D.compose(F.mor(um.mor), lam_r(um.srcs)))

    return Multifunctor(usrc, udst, F.ob, mor)


def restrict_multifunctor(mf: Multifunctor):
    """Recover (functor, lam, eta) from a multifunctor between underlyings.

    Inverse to extend_to_multifunctor: the functor is the unary part, lam
    is the image of the tautological binary morphism, eta of the nullary one.
    """
    P = mf.src.pc
    Q = mf.dst.pc
    C = P.cat
    obj_map = {a: mf.ob(a) for a in C.objects}
    mor_map = {}
    for m in C.morphisms():
        um = UMor((C.src(m),), C.dst(m), m)
        mor_map[m] = mf.mor(um).mor
    functor = fincat.Functor(C, Q.cat, obj_map, mor_map, check=False)
    lam = {}
    for x in C.objects:
        for y in C.objects:
            s = P.sum_obj(x, y)
            lam[(x, y)] = mf.mor(UMor((x, y), s, C.identity(s))).mor
    eta = mf.mor(UMor((), P.unit, C.identity(P.unit))).mor
    return functor, lam, eta
