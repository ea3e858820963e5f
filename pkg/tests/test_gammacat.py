"""Truncated diagram layer: constructors, the level multifunctor, the
convolution smash with its pairing, and twisted transformations."""

import itertools

import pytest

from gammaperm import fincat, gammacat as G, multicat as M, perms
from gammaperm.errors import (CoherenceFailure, LevelOutOfRange,
                              NaturalityFailure, TruncationTooSmall)


def _z2():
    return G.power_gamma((0, 1), lambda a, b: (a + b) % 2, 0, 1)


def _z3():
    return G.power_gamma((0, 1, 2), lambda a, b: (a + b) % 3, 0, 1)


def _z2_two_levels():
    return G.power_gamma((0, 1), lambda a, b: (a + b) % 2, 0, 2)


def gamma_corpus():
    return [G.point_gamma(3), G.unit_gamma(2), G.codiscrete_gamma(2),
            _z2(), _z3(), _z2_two_levels()]


# ---------------------------------------------------------------- oracle

def _convolution_object_count(x, y, k):
    """Independent count of the object classes of level k of the convolution.

    Valid for inputs whose levels are all discrete: the level category is
    then determined by its objects, which this computes by a direct union
    find over every (input levels, structure map, object pair) triple,
    without going through colimit presentations.
    """
    parent = {}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    star = "*"
    parent[star] = star
    nodes = []
    for m in range(x.bound + 1):
        for n in range(y.bound + 1):
            for th in G.based_maps(m * n, k):
                nodes.append((m, n, th))
                for a in x.level(m).objects:
                    for b in y.level(n).objects:
                        key = (m, n, th.fn, a, b)
                        parent[key] = key
                        if a == x.level(m).base or b == y.level(n).base:
                            union(key, star)
    for (m, n, th) in nodes:
        for m2 in range(x.bound + 1):
            for n2 in range(y.bound + 1):
                for al in G.based_maps(m, m2):
                    for be in G.based_maps(n, n2):
                        ab = G.gm_smash(al, be)
                        for th2 in G.based_maps(m2 * n2, k):
                            if G.gm_compose(th2, ab) != th:
                                continue
                            fa, fb = x.act(al), y.act(be)
                            for a in x.level(m).objects:
                                for b in y.level(n).objects:
                                    union((m, n, th.fn, a, b),
                                          (m2, n2, th2.fn, fa.ob(a), fb.ob(b)))
    return len({find(i) for i in parent})


# ---------------------------------------------------------------- diagrams

def test_corpus_validates():
    for x in gamma_corpus():
        assert x.validate()


def test_level_and_act_range_guards():
    x = G.unit_gamma(1)
    with pytest.raises(LevelOutOfRange):
        x.level(2)
    with pytest.raises(LevelOutOfRange):
        x.act(G.GammaMap(2, 1, (1, 0)))


def test_tampered_action_is_rejected():
    x = G.unit_gamma(2)
    swap = G.GammaMap(2, 2, (2, 1))
    bad = dict(x.action)
    bad[swap] = fincat.identity_functor(x.level(2))
    y = G.TruncGammaCat(2, x.levels, bad)
    with pytest.raises(ValueError):
        y.validate()


def test_gamma_map_composition_is_associative():
    maps1 = G.based_maps(2, 1)
    maps2 = G.based_maps(1, 2)
    for f in maps1:
        for g in maps2:
            for h in G.based_maps(2, 2):
                lhs = G.gm_compose(h, G.gm_compose(g, f))
                rhs = G.gm_compose(G.gm_compose(h, g), f)
                assert lhs == rhs


def test_json_round_trip():
    for x in (G.unit_gamma(2), _z2()):
        doc = G.gamma_to_json(x)
        back = G.gamma_from_json(doc)
        assert back == x
        assert back.validate()


# ---------------------------------------------------------------- level multifunctor

def test_unit_level_one_is_the_two_object_unit():
    A = G.a_of(G.unit_gamma(1))
    c = A.ob(1)
    assert c == fincat.discrete((0, 1), 0)
    assert len(c.objects) == 2


def test_coordinate_collapses_frozen():
    f = M.NNMor((1, 1), 2, ((1, 1), (2, 1)))
    c1, c2 = G.coordinate_collapses(f)
    assert c1 == G.GammaMap(2, 1, (1, 0))
    assert c2 == G.GammaMap(2, 1, (0, 1))


def test_nullary_multimorphism_lands_at_the_point():
    A = G.a_of(G.point_gamma(1))
    f = M.NNMor((), 0, ())
    img = A.mor(f)
    assert img.srcs == ()
    assert img.functor.src.is_point()
    assert img.functor.dst.is_point()


def test_a_rejects_levels_outside_truncation():
    A = G.a_of(_z2())
    with pytest.raises(LevelOutOfRange):
        A.mor(M.NNMor((2,), 1, ((1, 1),)))


def test_a_is_a_multifunctor_on_the_corpus():
    # identities at every level, permutations over every multimorphism with
    # small arity, compositions with levels capped at two so the sweep stays
    # a few thousand instances; the count is frozen so it cannot silently
    # shrink
    nn = M.nn()
    checked = 0
    for x in gamma_corpus():
        A = G.a_of(x)
        rng = range(x.bound + 1)
        r_cap = 3 if x.bound <= 1 else 2
        for n in rng:
            assert A.check_identity(n)
            checked += 1
        for r in range(r_cap + 1):
            for srcs in itertools.product(rng, repeat=r):
                for m in rng:
                    for f in nn.multihom(srcs, m):
                        for perm in perms.all_perms(r):
                            assert A.check_sigma(f, perm)
                            checked += 1
        crng = range(min(x.bound, 2) + 1)
        pools = {}
        for n in crng:
            pool = list(nn.multihom((), n))
            for k in crng:
                pool.extend(nn.multihom((k,), n))
            pools[n] = pool
        for r in (1, 2):
            for srcs in itertools.product(crng, repeat=r):
                for m in crng:
                    for f in nn.multihom(srcs, m):
                        for inners in itertools.product(
                                *(pools[n] for n in srcs)):
                            assert A.check_composition(f, list(inners))
                            checked += 1
    assert checked == 8558


# ---------------------------------------------------------------- level maps

def _inclusion_chain():
    # discrete sets -> codiscrete sets -> the point, all natural levelwise
    x = G.unit_gamma(2)
    y = G.codiscrete_gamma(2)
    z = G.point_gamma(2)
    p = {n: G._thin_functor(x.level(n), y.level(n), lambda a: a)
         for n in range(3)}
    q = {n: fincat.constant_functor(y.level(n), z.level(n)) for n in range(3)}
    return x, y, z, p, q


def test_a_on_map_identity_and_composition():
    x, y, z, p, q = _inclusion_chain()
    tp = G.a_on_map(p, x, y)
    tq = G.a_on_map(q, y, z)
    tid = G.a_on_map({n: fincat.identity_functor(x.level(n))
                      for n in range(3)}, x, x)
    assert tid == G.twisted_identity(G.a_of(x))
    qp = {n: p[n].then(q[n]) for n in range(3)}
    assert G.twisted_compose(tq, [tp]) == G.a_on_map(qp, x, z)


def test_a_on_map_rejects_non_natural_families():
    x = _z2_two_levels()
    q = {n: fincat.identity_functor(x.level(n)) for n in range(3)}
    q[2] = fincat.constant_functor(x.level(2), x.level(2))
    with pytest.raises(NaturalityFailure) as exc:
        G.a_on_map(q, x, x)
    assert isinstance(exc.value.witness, G.GammaMap)


def test_twisted_three_chain_associativity():
    x, y, z, p, q = _inclusion_chain()
    tp = G.a_on_map(p, x, y)
    tq = G.a_on_map(q, y, z)
    tr = G.twisted_identity(G.a_of(z))
    lhs = G.twisted_compose(tr, [G.twisted_compose(tq, [tp])])
    rhs = G.twisted_compose(G.twisted_compose(tr, [tq]), [tp])
    assert lhs == rhs


# ---------------------------------------------------------------- convolution

def test_day_smash_level_zero_is_the_point():
    ds = G.day_smash(G.unit_gamma(1), _z2(), 1)
    assert ds.gamma.level(0).is_point()


def test_day_smash_guards_the_output_bound():
    with pytest.raises(TruncationTooSmall):
        G.day_smash(G.unit_gamma(1), _z2_two_levels(), 3)


def test_day_smash_result_is_a_valid_diagram():
    ds = G.day_smash(G.unit_gamma(1), _z2_two_levels(), 2)
    assert ds.gamma.validate()


def test_day_smash_matches_the_object_count_oracle():
    cases = [(_z2(), _z2()), (_z2(), _z3()), (G.unit_gamma(1), _z3())]
    for x, y in cases:
        ds = G.day_smash(x, y, 1)
        for k in range(2):
            want = _convolution_object_count(x, y, k)
            assert len(ds.gamma.level(k).objects) == want, (k, want)
    # one frozen instance: two copies of the two element group at level 1
    ds = G.day_smash(_z2(), _z2(), 1)
    assert len(ds.gamma.level(1).objects) == _convolution_object_count(
        _z2(), _z2(), 1) == 2


def test_day_unit_left_collapses_onto_the_right_input():
    b = G.unit_gamma(1)
    for x in (_z2_two_levels(), G.codiscrete_gamma(2)):
        ds = G.day_smash(b, x, 2)
        u = G.day_unit_left(ds)
        for k in range(3):
            assert u[k].is_isomorphism()
        # the collapse commutes with both actions
        G.a_on_map(u, ds.gamma, x)


def test_day_unit_right_collapses_onto_the_left_input():
    b = G.unit_gamma(1)
    x = _z2_two_levels()
    ds = G.day_smash(x, b, 2)
    u = G.day_unit_right(ds)
    for k in range(3):
        assert u[k].is_isomorphism()
    G.a_on_map(u, ds.gamma, x)


def test_pairing_on_units_is_the_two_object_iso():
    ds = G.day_smash(G.unit_gamma(1), G.unit_gamma(1), 1)
    comp = ds.component(1, 1)
    assert len(comp.src.objects) == 2
    assert len(comp.dst.objects) == 2
    assert comp.is_isomorphism()


def test_pairing_guards_levels():
    ds = G.day_smash(G.unit_gamma(1), _z2_two_levels(), 2)
    with pytest.raises(LevelOutOfRange):
        ds.component(1, 3)
    with pytest.raises(LevelOutOfRange):
        ds.component(2, 1)


# ---------------------------------------------------------------- pairing coherence

def _unit_by_z2():
    b = G.unit_gamma(1)
    x = _z2_two_levels()
    ds = G.day_smash(b, x, 2)
    return b, x, ds


def test_lambda_multinaturality_and_interchange():
    _, _, ds = _unit_by_z2()
    lam = G.lambda_a(ds)
    assert lam.validate(max_inner_arity=2, bilinear=True)


def test_lambda_detects_broken_components():
    _, x, ds = _unit_by_z2()
    lam = G.lambda_a(ds)
    bad = dict(lam.components)
    tgt = ds.gamma.level(2)
    bad[(1, 2)] = fincat.constant_functor(bad[(1, 2)].src, tgt)
    broken = G.TwistedTransformation(lam.srcs, lam.dst, bad)
    with pytest.raises(CoherenceFailure):
        broken.validate(max_inner_arity=1, bilinear=False)


def test_unit_eta_is_the_frozen_iso():
    eta = G.unit_eta(G.unit_gamma(1))
    F = eta.component(())
    assert F.obj_map == {"*": 0, "x": 1}
    assert F.is_isomorphism()


def test_unit_diagram_closes():
    # pairing against the unit through eta, then the collapse, is the
    # identity on every level of the other input
    b, x, ds = _unit_by_z2()
    lam = G.lambda_a(ds)
    eta = G.unit_eta(b)
    tid = G.twisted_identity(G.a_of(x))
    comp = G.twisted_compose(lam, [eta, tid])
    u = G.day_unit_left(ds)
    for n in range(3):
        assert comp.component((n,)).then(u[n]) == \
            fincat.identity_functor(x.level(n))


def test_lambda_is_natural_in_each_input():
    b, x, ds = _unit_by_z2()
    z = G.point_gamma(2)
    q = {n: fincat.constant_functor(x.level(n), z.level(n)) for n in range(3)}
    ds2 = G.day_smash(b, z, 2)
    induced = G.day_functor(ds, ds2, {m: fincat.identity_functor(b.level(m))
                                      for m in range(2)}, q)
    G.a_on_map(induced, ds.gamma, ds2.gamma)
    for m in range(2):
        for n in range(3):
            if m * n > 2:
                continue
            lhs = ds.component(m, n).then(induced[m * n])
            W = fincat.smash_functor(
                fincat.smash(b.level(m), x.level(n)),
                fincat.smash(b.level(m), z.level(n)),
                fincat.identity_functor(b.level(m)), q[n])
            rhs = W.then(ds2.component(m, n))
            assert lhs == rhs, (m, n)


def test_day_swap_and_the_symmetry_square():
    b = G.unit_gamma(1)
    x = _z2_two_levels()
    ds = G.day_smash(b, x, 2)
    ds2 = G.day_smash(x, b, 2)
    sw = G.day_swap(ds, ds2)
    G.a_on_map(sw, ds.gamma, ds2.gamma)
    for m in range(2):
        for n in range(3):
            if m * n > 2:
                continue
            lhs = ds.component(m, n).then(sw[m * n])
            rhs = fincat.smash_swap_iso(b.level(m), x.level(n)).then(
                ds2.component(n, m))
            assert lhs == rhs, (m, n)


def test_threefold_comparison_and_associativity_routes():
    b = G.unit_gamma(1)
    x = _z2_two_levels()
    cmpn = G.day_assoc_comparison(b, b, x, 2)
    assert cmpn.triple.gamma.validate()
    G.a_on_map(cmpn.to_left, cmpn.triple.gamma, cmpn.left.gamma)
    G.a_on_map(cmpn.to_right, cmpn.triple.gamma, cmpn.right.gamma)
    for m in range(2):
        for n in range(2):
            for p in range(3):
                if m * n * p > 2:
                    continue
                sab = fincat.smash(b.level(m), b.level(n))
                W = fincat.smash_functor(
                    fincat.smash(sab.cat, x.level(p)),
                    fincat.smash(cmpn.left_inner.gamma.level(m * n),
                                 x.level(p)),
                    cmpn.left_inner.component(m, n),
                    fincat.identity_functor(x.level(p)))
                route1 = W.then(cmpn.left.component(m * n, p)).then(
                    cmpn.to_left[m * n * p].inverse())
                A = fincat.smash_assoc_iso(b.level(m), b.level(n), x.level(p))
                W2 = fincat.smash_functor(
                    fincat.smash(b.level(m),
                                 fincat.smash(b.level(n), x.level(p)).cat),
                    fincat.smash(b.level(m),
                                 cmpn.right_inner.gamma.level(n * p)),
                    fincat.identity_functor(b.level(m)),
                    cmpn.right_inner.component(n, p))
                route2 = A.then(W2).then(
                    cmpn.right.component(m, n * p)).then(
                    cmpn.to_right[m * n * p].inverse())
                want = cmpn.triple.component(m, n, p)
                assert route1 == route2 == want, (m, n, p)


# ---------------------------------------------------------------- smash plumbing

def test_smash_regroup_prefix_blocks_are_strict():
    b = G.unit_gamma(1)
    x = _z2()
    cats = (b.level(1), x.level(1), x.level(1))
    flat = G.smash_n(cats)
    iso = G.smash_regroup([cats[:2], cats[2:]])
    assert iso == fincat.identity_functor(flat)
    iso2 = G.smash_regroup([cats[:1], cats[1:]])
    assert iso2.src == flat
    assert iso2.is_isomorphism()


def test_smash_perm_iso_is_functorial():
    b = G.unit_gamma(1)
    x = _z2_two_levels()
    cats = (b.level(1), x.level(1), x.level(2))
    for p in perms.all_perms(3):
        for q in perms.all_perms(3):
            one = G.smash_perm_iso(cats, p)
            two = G.smash_perm_iso(perms.apply_perm(p, cats), q)
            both = G.smash_perm_iso(cats, perms.compose_perms(p, q))
            assert one.then(two) == both, (p, q)
            assert one.is_isomorphism()


def test_sigma_twisted_swap_matches_the_smash_symmetry():
    b, x, ds = _unit_by_z2()
    lam = G.lambda_a(ds)
    sig = G.sigma_twisted(lam, (1, 0))
    assert sig.srcs == (lam.srcs[1], lam.srcs[0])
    for (n, m) in sig.components:
        sw = fincat.smash_swap_iso(x.level(n), b.level(m))
        assert sig.component((n, m)) == sw.then(lam.component((m, n)))
    assert G.sigma_twisted(sig, (1, 0)) == lam


def test_twisted_compose_through_a_nested_block():
    # feed a whole pairing into one slot of an outer pairing so that the
    # regrouping isos are exercised on a block of width two
    b = G.unit_gamma(1)
    x = _z2_two_levels()
    inner = G.day_smash(b, x, 2)
    outer = G.day_smash(b, inner.gamma, 2)
    lam_in = G.lambda_a(inner)
    lam_out = G.lambda_a(outer)
    comp = G.twisted_compose(lam_out, [G.twisted_identity(G.a_of(b)), lam_in])
    assert comp.arity() == 3
    assert sorted(comp.components) == sorted(
        t for t in itertools.product(range(2), range(2), range(3))
        if t[0] * t[1] * t[2] <= 2)
    # spot check one component against the hand composed route
    key = (1, 1, 2)
    cats = (b.level(1), b.level(1), x.level(2))
    route = G.smash_regroup([cats[:1], cats[1:]]).then(
        G.smash_n_functor((fincat.identity_functor(b.level(1)),
                           lam_in.component((1, 2))))).then(
        lam_out.component((1, 2)))
    assert comp.component(key) == route
