import random
from fractions import Fraction as F

import pytest

from ordperm import sampling
from ordperm.cert import check_cert, format_certs
from ordperm.errors import (
    DepthExhausted,
    IdentityBase,
    LocallyAbelian,
    NoSupportingInterval,
    NotInQ,
    NotInStabilizer,
    SupportsNotDisjoint,
)
from ordperm.intervals import IntervalSet
from ordperm.lex import PL2T, REG, LexAut, OBlock, TowerModel, block_element, embed, in_rst, in_st
from ordperm.oprim import oprim_report
from ordperm.plmap import PLMap, bump, comm, conj, interpolate
from ordperm.witnesses import (
    Consistent,
    FixesSupport,
    Refutation,
    centralizer_refute,
    lemma31,
    lemma41b,
    lemma42b,
    lemma51b,
    sample_W,
    sample_X,
)

T = PLMap.translation
B = bump(0, 1, 2, 3)
M2 = TowerModel.of(PL2T, PL2T)
M3 = TowerModel.of(PL2T, PL2T, PL2T)


def xg(h, g):
    return comm(h.inverse(), conj(h, g))


# -- sample_X / sample_W -----------------------------------------------------------------


def test_sample_x_examples():
    with pytest.raises(IdentityBase):
        sample_X(PLMap(), 3)
    s = sample_X(B, 6, seed=1)
    assert s.members[0].trivial and s.members[0].value == PLMap()
    assert s.members[1].designated == "fundamental" and not s.members[1].trivial
    assert all(m.value == xg(B, m.conjugator) for m in s.members)
    assert xg(B, bump(1, F(5, 4), F(3, 2), 2)) != PLMap()


def test_sample_x_deterministic():
    a, b = sample_X(B, 8, seed=4), sample_X(B, 8, seed=4)
    assert a == b
    assert sample_X(B, 8, seed=5) != a


def test_sample_w_plain_bump_has_noncommuting_members():
    s = sample_W(B, 4, seed=0)
    assert s.members
    for m in s.members:
        assert check_cert(m.cert)
        assert m.value == xg(conj(B, m.conjugator), m.inner)


def test_sample_w_locally_abelian_is_empty():
    model = TowerModel.of(PL2T, REG)
    blk = OBlock.of(0)
    h = block_element(model, blk, T(1))
    s = sample_W(h, 12, seed=2, block=blk)
    assert s.members == ()
    assert len(s.evidence) == 12 and all(c.relation == "eq" and check_cert(c) for c in s.evidence)


def test_sample_w_rejects_block_movers_as_disjoint():
    blk = OBlock.of(0)
    h = block_element(M2, blk, B)
    s = sample_W(h, 40, seed=3, block=blk)
    moved = [r for r in s.rejected if not in_st(r.conjugator, blk)]
    assert moved and all(r.reason == "disjoint" and check_cert(r.cert) for r in moved)
    with pytest.raises(NotInQ):
        sample_W(h, 3, block=OBlock(1))


def test_x_h_nontrivial_below_moved_block():
    # h in Q of a block, g supported in a child block that h moves: [h^-1, h^g] != 1
    rng = random.Random(7)
    for _ in range(60):
        level = rng.randint(1, 2)
        blk = sampling.rand_block(rng, M3, level)
        h = sampling.rand_q_element(rng, M3, blk)
        child = blk.child(sampling.rand_rat(rng, -3, 3, 4))
        if child.image(h) == child:
            continue
        sub = OBlock(child.level, child.prefix)
        g = sampling.rand_q_element(rng, M3, sub)
        assert xg(h, g) != LexAut(M3)


def test_disjoint_blocks_give_commuting_x_sets():
    rng = random.Random(8)
    for _ in range(30):
        blk = sampling.rand_block(rng, M3, 2)
        h = sampling.rand_q_element(rng, M3, blk)
        g = LexAut(M3, T(sampling.rand_rat(rng, 1, 3, 4)))
        k = conj(h, g)
        xs = [xg(h, sampling.rand_stabilizer_element(rng, M3, blk)) for _ in range(3)]
        ys = [xg(k, sampling.rand_stabilizer_element(rng, M3, blk.image(g))) for _ in range(3)]
        for a in xs:
            for b in ys:
                assert a * b == b * a


# -- two disjoint supports -------------------------------------------------------------------


def test_lemma31_example():
    r = lemma31(B, T(10))
    assert conj(B, T(10)).support() == IntervalSet([(10, 13)])
    assert check_cert(r.cert)
    assert r.w1(r.lam) == r.gamma and r.w2(r.lam) == r.delta and r.w2(r.gamma) == r.gamma
    assert (r.w1 * r.w2)(r.lam) != (r.w2 * r.w1)(r.lam)


def test_lemma31_errors():
    with pytest.raises(NoSupportingInterval):
        lemma31(PLMap(), T(10))
    with pytest.raises(SupportsNotDisjoint):
        lemma31(B, T(1))


@pytest.mark.parametrize("h, g", [
    (B, T(-10)),
    (B.inverse(), T(10)),
    (B.inverse(), T(-10)),
    (bump(-4, -3, -1, 0) * B, T(25)),
    (B, bump(-5, -4, -3, -1) * T(30)),
])
def test_lemma31_orientations(h, g):
    r = lemma31(h, g)
    assert check_cert(r.cert)
    assert r.w1(r.lam) == r.gamma and r.w2(r.lam) == r.delta


def test_sequence_matching_interpolation():
    # k matches one increasing six-term sequence with another, pointwise
    src = [F(-3), F(-2), F(1, 2), F(1), F(3, 2), F(4)]
    dst = [F(-5), F(-1), F(0), F(2), F(7, 3), F(9)]
    k = interpolate(zip(src, dst))
    assert [k(x) for x in src] == dst


# -- commuting with a sample commutator ------------------------------------------------------


def test_lemma41b_identity_fixes_support():
    h = block_element(M3, OBlock(1), B)
    res = lemma41b(h, LexAut(M3), OBlock(1))
    assert isinstance(res, FixesSupport) and res.ok and len(res.points) == 20


def test_lemma41b_depth3_example():
    # h moves level-2 blocks, f moves level-3 blocks inside one of them
    h = block_element(M3, OBlock(1), B)
    f = block_element(M3, OBlock.of(F(1)), T(1))
    res = lemma41b(h, f, OBlock(1))
    assert res.block.level == 3 and res.block.image(f) != res.block
    assert not isinstance(res, FixesSupport)
    assert check_cert(res.cert) and res.c * f != f * res.c


def test_lemma41b_pointwise_stabilizer():
    blk = OBlock.of(0)
    h = block_element(M3, blk, B)
    f = block_element(M3, OBlock.of(5), T(1))
    res = lemma41b(h, f, blk)
    assert isinstance(res, FixesSupport) and res.ok and len(res.points) == 20
    assert all(f(p) == p for p in res.points)


def test_lemma41b_depth_exhausted_then_bump():
    blk = OBlock.of(0, 0)
    h = block_element(M3, blk, B)
    f = block_element(M3, blk, T(1))
    with pytest.raises(DepthExhausted):
        lemma41b(h, f, blk)
    res = lemma51b(h, f, blk)
    assert res.regime == "bump" and check_cert(res.cert)
    with pytest.raises(LocallyAbelian):
        m = TowerModel.of(PL2T, REG)
        lemma51b(block_element(m, OBlock.of(0), T(1)), block_element(m, OBlock.of(0), T(2)), OBlock.of(0))


def test_bump_commutator_identities():
    # g a positive bump inside (a, a h): the commutator's positive part is g^2
    for h in (T(10), bump(-20, -1, 30, 40)):
        a = F(0)
        lo, hi = a, h(a)
        w = hi - lo
        g = bump(lo + w / 8, lo + w / 4, lo + w / 2, lo + 3 * w / 4)
        c = xg(h, g)
        assert c.vee(PLMap()) == g * g
        hs = [h ** i for i in (-1, 0, 1)]
        sets = [conj(g, x).support() for x in hs]
        # elements commuting with c preserve each of the three support sets
        for f in (c, c ** 2, g * g, (g * g).inverse()):
            assert f * c == c * f
            assert all(s.image(f) == s for s in sets)
        # a small translation does not commute, and moves the sets
        t = T(w / 100)
        assert t * c != c * t
        assert any(s.image(t) != s for s in sets)


# -- non-commuting pairs ---------------------------------------------------------------------


def test_lemma42b_plain_bump_is_minimal_case():
    pair = lemma42b(B, PLMap())
    assert pair.case == "ii" and check_cert(pair.cert)
    assert pair.a * pair.b != pair.b * pair.a


def test_lemma42b_case_i():
    blk = OBlock(1)
    h = block_element(M3, blk, B)
    g = embed(M3, (), LexAut(M3, bump(F(1, 2), 1, F(3, 2), 2)))
    pair = lemma42b(h, g, blk)
    assert pair.case == "i" and pair.variant == "standard" and check_cert(pair.cert)
    assert pair.a * pair.b != pair.b * pair.a


def test_lemma42b_case_i_adapted_one_level_above_bottom():
    blk = OBlock.of(0)
    h = block_element(M3, blk, B)
    pair = lemma42b(h, LexAut(M3), blk)
    assert pair.case == "i" and pair.variant == "adapted"
    assert pair.cert.claim.endswith("-adapted") and check_cert(pair.cert)


def test_lemma42b_case_iii():
    blk = OBlock.of(0)
    h = block_element(M3, blk, B)
    g = block_element(M3, blk, T(20))
    pair = lemma42b(h, g, blk)
    assert pair.case == "iii" and check_cert(pair.cert)
    assert pair.a * pair.b != pair.b * pair.a


def test_lemma42b_preconditions():
    h = block_element(M2, OBlock.of(0), B)
    with pytest.raises(NotInQ):
        lemma42b(h, LexAut(M2), OBlock(1))
    with pytest.raises(NotInStabilizer):
        lemma42b(h, LexAut(M2, T(1)), OBlock.of(0))


# -- centralizers ------------------------------------------------------------------------------


def test_centralizer_identity_is_consistent():
    blk = OBlock.of(0)
    h = block_element(M2, blk, B)
    res = centralizer_refute(h, LexAut(M2), blk)
    assert isinstance(res, Consistent) and all(check_cert(c) for c in res.certs)


def test_centralizer_moving_inside_block():
    blk = OBlock.of(0)
    h = block_element(M2, blk, B)
    f = block_element(M2, blk, T(F(1, 2)))
    res = centralizer_refute(h, f, blk)
    assert isinstance(res, Refutation) and res.branch.startswith("ii")
    assert check_cert(res.cert) and all(check_cert(c) for c in res.support)


def test_centralizer_double_sibling_mover():
    blk = OBlock.of(0)
    h = block_element(M2, blk, B)
    f = block_element(M2, OBlock.of(1), T(1))
    assert in_st(f, blk) and not in_rst(f, blk)
    res = centralizer_refute(h, f, blk, side="C2")
    assert isinstance(res, Refutation) and res.branch == "iii"
    y = res.witness
    assert check_cert(res.cert) and y * f != f * y
    assert y(( F(0), F(1, 3))) == (F(0), F(1, 3))  # y fixes the block pointwise
    inside = block_element(M2, blk, T(3))
    assert isinstance(centralizer_refute(h, inside, blk, side="C2"), Consistent)


def test_centralizer_is_deterministic():
    blk = OBlock.of(0)
    h = block_element(M2, blk, B)
    f = block_element(M2, OBlock.of(1), T(1)) * block_element(M2, blk, T(1))
    a = centralizer_refute(h, f, blk, side="C2", seed=3)
    b = centralizer_refute(h, f, blk, side="C2", seed=3)
    assert format_certs([a.cert, *a.support]) == format_certs([b.cert, *b.support])


def test_emitted_certs_always_check():
    rng = random.Random(99)
    count = 0
    for _ in range(120):
        level = rng.randint(1, 3)
        blk = sampling.rand_block(rng, M3, level)
        h = sampling.rand_q_element(rng, M3, blk)
        f = sampling.rand_lexaut(rng, M3)
        g = sampling.rand_stabilizer_element(rng, M3, blk)
        try:
            res = lemma41b(h, f, blk)
        except DepthExhausted:
            res = lemma51b(h, f, blk)
        certs = [] if isinstance(res, FixesSupport) else [res.cert]
        certs.append(lemma42b(h, g, blk).cert)
        for side in ("C", "C2"):
            out = centralizer_refute(h, f, blk, side=side)
            certs += list(out.certs) if isinstance(out, Consistent) else [out.cert, *out.support]
        assert all(check_cert(c) for c in certs)
        count += len(certs)
    assert count >= 500


@pytest.mark.parametrize("kinds, verdict", [
    ((REG,), "o-primitive-abelian"),
    ((PL2T,), "o-primitive"),
    ((PL2T, PL2T), "not-o-primitive"),
    ((PL2T, REG), "not-o-primitive"),
])
def test_oprim_small(kinds, verdict):
    rep = oprim_report(TowerModel.of(*kinds), trials=5, seed=1)
    assert rep.verdict == verdict and rep.passed
    assert all(check_cert(c) for c in rep.certs)
