"""
Explicit witness constructions for commutator sets and their centralizers.

For an element ``h`` write ``X_h`` for the set of commutators
``[h^-1, h^g]`` and ``W_h`` for the union of the ``X_{h^g}`` that fail to
commute elementwise with ``X_h``. The functions here build concrete members
and concrete non-commuting pairs, each packaged as a :class:`WitnessCert`
that can be re-checked by evaluation alone.

Plain PL maps are handled by viewing them as automorphisms of a depth-1
tower; results are converted back before they are returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .cert import (
    WitnessCert,
    letter,
    make_cert,
    substitute,
    w_comm,
    w_conj,
    w_inv,
    w_reduce,
    word_element,
)
from .errors import (
    DepthExhausted,
    IdentityBase,
    LocallyAbelian,
    NoSupportingInterval,
    NotInQ,
    NotInStabilizer,
    SupportsNotDisjoint,
)
from .intervals import Interval, midpoint
from .lex import (
    PL2T,
    REG,
    LexAut,
    OBlock,
    TowerModel,
    _pad,
    block_element,
    block_transporter,
    congr_V,
    cylinders_disjoint,
    in_ptstab,
    in_Q,
    in_rst,
    in_st,
    moved_point,
    moved_point_in_cylinder,
    restrict,
    support_cylinders,
    support_points,
)
from .plmap import PLMap, bump, comm, conj, interpolate
from . import sampling

Element = Union[PLMap, LexAut]

LINE = TowerModel.of(PL2T)
ONE = PLMap.translation(1)

H, G, F, K, X, Y = (letter(c) for c in "hgfkxy")


# -- small helpers ----------------------------------------------------------------


def _wrap(g: PLMap) -> LexAut:
    return LexAut(LINE, g)


def _unwrap_point(p):
    return p[0] if isinstance(p, tuple) else p


def unwrap_cert(cert: WitnessCert) -> WitnessCert:
    """Rewrite a certificate over depth-1 tower elements as one over PL maps."""
    if cert.model is None:
        return cert
    elems = {n: (g.top if isinstance(g, LexAut) else g) for n, g in cert.elements}
    return make_cert(cert.claim, cert.relation, elems, cert.lhs, cert.rhs,
                     _unwrap_point(cert.point), cert.notes)


def identity_like(g: Element) -> Element:
    return PLMap() if isinstance(g, PLMap) else LexAut(g.model)


def differing_point(u: Element, v: Element, prefer=()):
    """A point whose images under ``u`` and ``v`` differ, or None if ``u == v``."""
    for p in prefer:
        if p is not None and u(p) != v(p):
            return p
    d = u * v.inverse()
    if isinstance(d, PLMap):
        s = d.support()
        return s.sample() if s else None
    return moved_point(d)


def _comm_word(base, conjugator):
    """[base^-1, base^conjugator] as a word."""
    return w_reduce(w_comm(w_inv(base), w_conj(base, conjugator)))


def _second_word(hw, gw, kw):
    """[h^-g, h^gk] for words h, g, k."""
    return w_reduce(w_comm(w_inv(w_conj(hw, gw)), w_conj(hw, gw + kw)))


def _apart(i: Interval, j: Interval) -> bool:
    return (i.hi is not None and j.lo is not None and i.hi <= j.lo) or (
        j.hi is not None and i.lo is not None and j.hi <= i.lo)


def _below(i: Interval, j: Interval) -> bool:
    """Every point of ``i`` lies below every point of ``j``."""
    return i.hi is not None and j.lo is not None and i.hi <= j.lo


def _reflect_interval(i: Interval) -> Interval:
    return Interval(None if i.hi is None else -i.hi, None if i.lo is None else -i.lo)


def _ensure_kind(model: TowerModel, level: int) -> None:
    if model.kind_at(level) == REG:
        raise LocallyAbelian(f"level {level} component is abelian; no bump is available")


# -- X_h and W_h samples ----------------------------------------------------------------


@dataclass(frozen=True)
class Member:
    conjugator: Element
    value: Element
    trivial: bool = False
    designated: str = ""
    inner: Optional[Element] = None  # W members: value = [k^-1, k^inner] with k = h^conjugator
    cert: Optional[WitnessCert] = None
    case: str = ""


@dataclass(frozen=True)
class Rejection:
    conjugator: Element
    reason: str  # "disjoint", "commuting" or "undecided"
    cert: Optional[WitnessCert] = None


@dataclass(frozen=True)
class SampleSet:
    base: Element
    members: tuple
    seed: int
    policy: tuple = ()
    rejected: tuple = ()
    evidence: tuple = ()

    @property
    def values(self) -> list:
        return [m.value for m in self.members]


def fundamental_conjugator(h: Element) -> Optional[Element]:
    """A non-trivial g supported between some point and its image under h, if one exists."""
    if isinstance(h, PLMap):
        s = h.support()
        if not s:
            return None
        a = s.parts[0].sample()
        lo, hi = sorted((a, h(a)))
        w = hi - lo
        return bump(lo, lo + w / 3, lo + 2 * w / 3, hi)
    alpha = moved_point(h)
    if alpha is None:
        return None
    beta = h(alpha)
    v = congr_V(alpha, beta)
    n = h.model.depth
    lo, hi = sorted((alpha[v - 1], beta[v - 1]))
    if v < n:
        blk = OBlock(v + 1, tuple(alpha[: v - 1]) + (midpoint(lo, hi),))
        return block_element(h.model, blk, ONE)
    if h.model.kind_at(n) == REG:
        return None
    w = hi - lo
    blk = OBlock(n, tuple(alpha[: n - 1]))
    return block_element(h.model, blk, bump(lo, lo + w / 3, lo + 2 * w / 3, hi))


def _lex_pool(model: TowerModel, seed: int, size: int = 6) -> list[LexAut]:
    rng = sampling.rng_for(seed, "lexpool", model)
    pool = []
    for i in range(size):
        blk = sampling.rand_block(rng, model)
        kind = model.kind_at(blk.level)
        comp = sampling.rand_translation(rng) if kind == REG or i % 3 == 2 else sampling.rand_bump(rng)
        pool.append(block_element(model, blk, comp))
    return pool


def sample_X(h: Element, n: int, seed: int = 0, kind: str = PL2T) -> SampleSet:
    """
    ``n`` members of X_h: the identity member, a fundamental-interval member, then random ones.

    ``kind`` only matters for plain PL maps: with ``REG`` the conjugators are
    drawn from translations, so h is treated as an element of the translation group.
    """
    if h.is_identity():
        raise IdentityBase("X_h is only sampled for h != 1")
    one = identity_like(h)
    members = [Member(one, comm(h.inverse(), h), trivial=True, designated="identity")]
    g0 = None if isinstance(h, PLMap) and kind == REG else fundamental_conjugator(h)
    if g0 is not None:
        val = comm(h.inverse(), conj(h, g0))
        members.append(Member(g0, val, val.is_identity(), "fundamental"))
    if isinstance(h, PLMap):
        pool = sampling.conjugator_pool(seed, kind)
    else:
        pool = _lex_pool(h.model, seed)
    rng = sampling.rng_for(seed, "sample_X")
    while len(members) < n:
        g = sampling.rand_word_element(rng, pool, one)
        val = comm(h.inverse(), conj(h, g))
        members.append(Member(g, val, val.is_identity()))
    policy = (("word_length", 4), ("pool", len(pool)), ("max_den", sampling.MAX_DEN))
    return SampleSet(h, tuple(members[:n]), seed, policy)


def _candidate_conjugator(rng, model: TowerModel, block: OBlock, p_inside: float = 0.8) -> LexAut:
    g = sampling.rand_stabilizer_element(rng, model, block)
    if block.level > 1 and rng.random() > p_inside:
        parent = OBlock(block.level - 1, block.prefix[:-1])
        shift = PLMap.translation(sampling.rand_rat(rng, 1, 3, 2))
        g = g * block_element(model, parent, shift)
    return g


def sample_W(h: Element, n: int, seed: int = 0, block: Optional[OBlock] = None) -> SampleSet:
    """
    Sample ``n`` candidates g. For g in st(block), exhibit a member of X_{h^g}
    together with a certified non-commuting partner in X_h. Candidates moving
    the block are rejected with a disjointness record.
    """
    plain = isinstance(h, PLMap)
    hh = _wrap(h) if plain else h
    block = block or OBlock(1)
    if not in_Q(hh, block):
        raise NotInQ(f"h is not in Q for {block}")
    model = hh.model
    rng = sampling.rng_for(seed, "sample_W", block)
    abelian = block.level == model.depth and model.kinds[-1] == REG
    members, rejected, evidence = [], [], []
    for i in range(n):
        if plain and i == 0:
            g = LexAut(model)
        else:
            g = _candidate_conjugator(rng, model, block)
        k = conj(hh, g)
        if abelian:
            c = comm(hh.inverse(), k)
            if not c.is_identity():
                raise AssertionError("commutator in an abelian minimal component must vanish")
            pt = _pad(model, block.prefix)
            cert = make_cert("abelian-candidate", "eq", {"h": hh, "g": g}, _comm_word(H, G), (), pt)
            evidence.append(cert)
            rejected.append(Rejection(g, "commuting", cert))
            continue
        if not in_st(g, block):
            disjoint = cylinders_disjoint(support_cylinders(hh), support_cylinders(k))
            kw = w_conj(H, G)
            cert = make_cert("disjoint-conjugate", "eq", {"h": hh, "g": g}, H + kw, kw + H,
                             _pad(model, block.prefix), ("supports of h and h^g are disjoint",))
            rejected.append(Rejection(g, "disjoint" if disjoint else "overlapping", cert))
            continue
        try:
            pair = _lemma42b_lex(hh, g, block)
        except LocallyAbelian:
            rejected.append(Rejection(g, "undecided"))
            continue
        members.append(Member(g, pair.a, False, "", pair.a_conj, pair.cert, pair.case))
    if plain:
        members = [Member(m.conjugator.top, m.value.top, m.trivial, m.designated,
                          m.inner.top, unwrap_cert(m.cert), m.case) for m in members]
        h = hh.top
    policy = (("candidates", n), ("block", str(block)))
    return SampleSet(h, tuple(members), seed, policy, tuple(rejected), tuple(evidence))


# -- two disjoint supports ----------------------------------------------------------------


@dataclass(frozen=True)
class Lemma31Result:
    f: PLMap
    k: PLMap
    cert: WitnessCert
    w1: PLMap
    w2: PLMap
    gamma: Fraction
    delta: Fraction
    lam: Fraction
    mu: Fraction
    hw: tuple  # the normalized h, as a word over h and g
    gw: tuple  # the normalized g
    swapped: bool
    reflected: bool


def lemma31(h: PLMap, g: PLMap) -> Lemma31Result:
    """
    Given h != 1 with supp(h) and supp(h^g) disjoint, build f, k with
    [h^-1,h^f][h^-g,h^gk] != [h^-g,h^gk][h^-1,h^f], certified at a point lam.
    """
    if h.is_identity():
        raise NoSupportingInterval("h has empty support")
    if not h.support().isdisjoint(conj(h, g).support()):
        raise SupportsNotDisjoint("supp(h) meets supp(h^g)")

    hn, gn, hw, gw = h, g, H, G
    d1 = h.support().parts[0]
    d2 = d1.image(g)
    notes = []

    def swap():
        nonlocal hn, gn, hw, gw, d1, d2
        hn, gn = conj(hn, gn), gn.inverse()
        hw, gw = w_reduce(w_conj(hw, gw)), w_inv(gw)
        d1, d2 = d2, d1

    if _below(d2, d1):
        swap()
        notes.append("swapped h and h^g so the first interval lies below its image")
    reflected = False
    m = d1.sample()
    if hn(m) < m:
        # conjugate by x -> -x so that h moves its interval upwards; this reverses the order
        reflected = True
        hn, gn = hn.reflect(), gn.reflect()
        d1, d2 = _reflect_interval(d1), _reflect_interval(d2)
        swap()
        notes.append("conjugated by x -> -x so that h moves its interval upwards")

    k2 = conj(hn, gn)
    k2i = k2.inverse()
    hi = hn.inverse()

    p0 = d2.sample()
    p1 = k2(p0)
    p2 = k2(p1)
    p3 = k2(p2)
    gamma, mu = p0, p3
    delta = midpoint(p2, p3)
    lam = midpoint(delta, p3)
    seq1 = [gamma, k2(gamma), k2i(mu), delta, mu, k2(lam)]

    xi0 = d1.sample()
    xim1 = midpoint(d1.lo, xi0) if d1.lo is not None else xi0 - 1
    xi1 = d2.sample()
    xi2 = midpoint(k2(xi1), k2(k2(xi1)))
    seq2 = [xim1, xi0, xi1, k2(xi1), xi2, k2(xi2)]
    k = interpolate(zip(seq2, seq1))

    alpha = d1.sample()
    beta = midpoint(hi(alpha), alpha)
    z = d1.sample()
    step = (hn(z) - z) / 4
    zetas = [z, z + step, z + 2 * step, z + 3 * step]
    src = zetas + [hn(t) for t in zetas]
    dst = [(hi ** 3)(beta), (hi ** 3)(alpha), (hi ** 2)(beta), (hi ** 2)(alpha),
           k2i(gamma), gamma, delta, lam]
    f = interpolate(zip(src, dst))

    w1 = comm(hi, conj(hn, f))
    w2 = comm(k2i, conj(hn, gn * k))
    checks = {
        "lam w1 = gamma": w1(lam) == gamma,
        "lam w2 = delta": w2(lam) == delta,
        "gamma w2 = gamma": w2(gamma) == gamma,
        "delta w1 = gamma h^-g": w1(delta) == k2i(gamma),
    }
    bad = [name for name, ok in checks.items() if not ok]
    if bad:
        raise AssertionError(f"construction identities failed: {bad}")

    if reflected:
        f, k = f.reflect(), k.reflect()
        gamma, delta, lam, mu = -gamma, -delta, -lam, -mu
    elems = {"h": h, "g": g, "f": f, "k": k}
    w1w = _comm_word(hw, F)
    w2w = _second_word(hw, gw, K)
    cert = make_cert("lemma31", "ne", elems, w1w + w2w, w2w + w1w, lam, notes)
    one = PLMap()
    return Lemma31Result(
        f=f, k=k, cert=cert,
        w1=word_element(w1w, elems, one), w2=word_element(w2w, elems, one),
        gamma=gamma, delta=delta, lam=lam, mu=mu,
        hw=hw, gw=gw, swapped=hw != H, reflected=reflected,
    )


# -- commuting with a sample commutator ----------------------------------------------


@dataclass(frozen=True)
class FixesSupport:
    """f fixes supp(h) pointwise; ``checks`` are per-point fixedness tests."""

    points: tuple
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(self.checks)


@dataclass(frozen=True)
class CommutatorWitness:
    g: Element
    c: Element  # [h^-1, h^g]
    cert: WitnessCert
    block: Optional[OBlock]
    beta: object
    regime: str  # "block" or "bump"


def _moved_candidates(f: LexAut, cyl) -> list:
    """Points of the cylinder moved by ``f`` (a handful, not all)."""
    out = []
    p = moved_point_in_cylinder(f, cyl)
    if p is not None:
        out.append(p)
    prefix, iset = cyl
    if f.apply_prefix(prefix) == prefix:
        node = f.node_at(prefix)
        common = node.top.support().intersection(iset)
        for part in common:
            out.append(_pad(f.model, tuple(prefix) + (part.sample(),)))
        for x, child in node.over:
            if iset.contains(x) and not node.top.support().contains(x):
                out.append(tuple(prefix) + (x,) + moved_point(child))
    return out


def _moved_support_points(h: LexAut, f: LexAut) -> list:
    pts = []
    for cyl in support_cylinders(h):
        pts.extend(_moved_candidates(f, cyl))
    return pts


def _fixes_support(h: LexAut, f: LexAut) -> FixesSupport:
    pts = tuple(support_points(h, 20))
    return FixesSupport(pts, tuple(f(p) == p for p in pts))


def _commutator_cert(claim: str, h: LexAut, g: LexAut, f: LexAut, prefer) -> tuple:
    c = comm(h.inverse(), conj(h, g))
    cw = _comm_word(H, G)
    pt = differing_point(c * f, f * c, prefer)
    if pt is None:
        raise AssertionError("constructed commutator commutes with f")
    return c, make_cert(claim, "ne", {"h": h, "g": g, "f": f}, cw + F, F + cw, pt)


def _prepare(h, f, block):
    plain = isinstance(h, PLMap)
    if plain:
        h, f = _wrap(h), _wrap(f)
    block = block or OBlock(1)
    if not in_Q(h, block):
        raise NotInQ(f"h is not in Q for {block}")
    return plain, h, f, block


def _finish(plain: bool, res):
    if not plain or isinstance(res, FixesSupport):
        if plain:
            return FixesSupport(tuple(_unwrap_point(p) for p in res.points), res.checks)
        return res
    return CommutatorWitness(res.g.top, res.c.top, unwrap_cert(res.cert), None,
                             _unwrap_point(res.beta), res.regime)


def lemma41b(h: Element, f: Element, block: Optional[OBlock] = None):
    """
    Either f fixes supp(h) pointwise, or some g in Q of a block strictly below
    the congruences of (beta, beta h) and (beta, beta f) gives [[h^-1,h^g],f] != 1.
    """
    plain, h, f, block = _prepare(h, f, block)
    candidates = _moved_support_points(h, f)
    if not candidates:
        return _finish(plain, _fixes_support(h, f))
    n = h.model.depth
    best = min(candidates, key=lambda b: max(congr_V(b, h(b)), congr_V(b, f(b))))
    level = max(congr_V(best, h(best)), congr_V(best, f(best))) + 1
    if level > n:
        raise DepthExhausted(f"no block level below {level - 1} in a depth-{n} tower")
    sub = OBlock.containing(best, level)
    g = block_element(h.model, sub, ONE)
    c, cert = _commutator_cert("lemma41b", h, g, f, [_pad(h.model, sub.prefix), best])
    return _finish(plain, CommutatorWitness(g, c, cert, sub, best, "block"))


def lemma51b(h: Element, f: Element, block: Optional[OBlock] = None):
    """Minimal-block variant: a positive bump around a moved point of the bottom coordinate."""
    plain, h, f, block = _prepare(h, f, block)
    candidates = _moved_support_points(h, f)
    if not candidates:
        return _finish(plain, _fixes_support(h, f))
    model = h.model
    n = model.depth
    _ensure_kind(model, n)
    beta = candidates[0]
    bottom = OBlock.containing(beta, n)
    t = beta[-1]
    comps = []
    for e in (f, h, h.inverse()):
        if e.apply_prefix(bottom.prefix) == bottom.prefix:
            comps.append(e.node_at(bottom.prefix).top)
    eps = Fraction(1)
    for _ in range(64):
        window = Interval(t - eps, t + eps)
        if all(_apart(window, window.image(c)) for c in comps):
            break
        eps /= 2
    else:
        raise AssertionError("no separating window after 64 bisections")
    g = block_element(model, bottom, bump(t - eps, t, midpoint(t, t + eps), t + eps))
    c, cert = _commutator_cert("lemma51b", h, g, f, [beta])
    return _finish(plain, CommutatorWitness(g, c, cert, bottom, beta, "bump"))


# -- non-commuting pairs from X_h and X_{h^g} ------------------------------------------


@dataclass(frozen=True)
class NonCommutingPair:
    a: Element  # member of X_k, k = h^g
    b: Element  # member of X_h
    cert: WitnessCert
    case: str  # "i", "ii" or "iii"
    variant: str  # "standard" or "adapted"
    a_conj: Element  # a = [k^-1, k^a_conj]
    b_conj: Element  # b = [h^-1, h^b_conj]


def lemma42b(h: Element, g: Element, block: Optional[OBlock] = None) -> NonCommutingPair:
    """Certified a in X_{h^g} and b in X_h with ab != ba, for g in st(block)."""
    if isinstance(h, PLMap):
        pair = _lemma42b_lex(_wrap(h), _wrap(g), OBlock(1))
        return NonCommutingPair(pair.a.top, pair.b.top, unwrap_cert(pair.cert), pair.case,
                                pair.variant, pair.a_conj.top, pair.b_conj.top)
    return _lemma42b_lex(h, g, block or OBlock(1))


def _lemma42b_lex(h: LexAut, g: LexAut, block: OBlock) -> NonCommutingPair:
    if not in_Q(h, block):
        raise NotInQ(f"h is not in Q for {block}")
    if not in_st(g, block):
        raise NotInStabilizer(f"g does not fix {block}")
    model = h.model
    n, level, q = model.depth, block.level, block.prefix
    k = conj(h, g)
    hc = h.node_at(q).top
    kc = k.node_at(q).top
    common = hc.support().intersection(kc.support())
    kw = w_reduce(w_conj(H, G))
    if not common:
        return _case_iii(h, g, block, hc, g.node_at(q).top)
    if level == n:
        return _case_ii(h, g, block, hc, kc, common.sample(), kw)
    return _case_i(h, g, block, common.sample(), kw)


def _pair_cert(claim, elems, lhs, rhs, point, notes=()):
    cert = make_cert(claim, "ne", elems, lhs, rhs, point, notes)
    if cert.lhs_image == cert.rhs_image:
        raise AssertionError(f"{claim}: images agree at {point}")
    return cert


def _case_i(h, g, block, xc, kw) -> NonCommutingPair:
    model = h.model
    n, level, q = model.depth, block.level, block.prefix
    child = OBlock(level + 1, q + (xc,))
    y = block_element(model, child, ONE)
    if level + 2 <= n:
        inner = OBlock(level + 2, child.prefix + (Fraction(0),))
        x = block_element(model, inner, ONE)
        variant, note = "standard", "x acts on a block inside the common moved child block"
    else:
        _ensure_kind(model, n)
        x = block_element(model, child, bump(Fraction(-1, 2), 0, Fraction(1, 4), Fraction(1, 2)))
        variant, note = "adapted", "adapted: the moved child block is minimal, so x is a bump inside it"
    point = _pad(model, child.prefix)
    a_w = _comm_word(kw, X)
    b_w = _comm_word(H, Y)
    elems = {"h": h, "g": g, "x": x, "y": y}
    cert = _pair_cert("lemma42b-i" + ("" if variant == "standard" else "-adapted"),
                      elems, b_w + a_w, a_w + b_w, point, (note,))
    a = word_element(a_w, elems, LexAut(model))
    b = word_element(b_w, elems, LexAut(model))
    return NonCommutingPair(a, b, cert, "i", variant, x, y)


def _case_ii(h, g, block, hc, kc, delta, kw) -> NonCommutingPair:
    model = h.model
    _ensure_kind(model, block.level)
    q = block.prefix
    uh = hc if hc(delta) > delta else hc.inverse()
    uk = kc if kc(delta) > delta else kc.inverse()
    eps = Fraction(1)
    for _ in range(64):
        lam1 = delta - eps
        if uh(lam1) > delta and uk(lam1) > delta:
            break
        eps /= 2
    else:
        raise AssertionError("no working interval after 64 bisections")
    lam2 = midpoint(delta, min(uh(lam1), uk(lam1)))
    dy = midpoint(delta, lam2)
    ybar = bump(lam1, delta, dy, lam2)
    beta = midpoint(delta, dy)
    xbar = bump(delta, beta, midpoint(beta, dy), dy)
    y = block_element(model, block, ybar)
    x = block_element(model, block, xbar)
    a_w = _comm_word(kw, X)
    b_w = _comm_word(H, Y)
    elems = {"h": h, "g": g, "x": x, "y": y}
    point = _pad(model, q + (beta,))
    cert = _pair_cert("lemma42b-ii", elems, w_conj(a_w, b_w), a_w, point,
                      ("y supported in a window around a common moved point; x inside (delta, delta y)",))
    a = word_element(a_w, elems, LexAut(model))
    b = word_element(b_w, elems, LexAut(model))
    return NonCommutingPair(a, b, cert, "ii", "standard", x, y)


def _case_iii(h, g, block, hc, gc) -> NonCommutingPair:
    model = h.model
    _ensure_kind(model, block.level)
    r = lemma31(hc, gc)
    fl = block_element(model, block, r.f)
    kl = block_element(model, block, r.k)
    elems = {"h": h, "g": g, "F": fl, "K": kl}
    w1w = _comm_word(r.hw, letter("F"))
    w2w = _second_word(r.hw, r.gw, letter("K"))
    point = _pad(model, block.prefix + (r.lam,))
    notes = ("induced action on the child blocks reduced to the two-interval construction",) + r.cert.notes
    cert = _pair_cert("lemma42b-iii", elems, w1w + w2w, w2w + w1w, point, notes)
    one = LexAut(model)
    w1 = word_element(w1w, elems, one)
    w2 = word_element(w2w, elems, one)
    if r.swapped:
        # w1 lies in X_k and w2 in X_h
        return NonCommutingPair(w1, w2, cert, "iii", "standard", fl,
                                word_element(w_reduce(r.gw + letter("K")), elems, one))
    return NonCommutingPair(w2, w1, cert, "iii", "standard", kl, fl)


# -- centralizers ---------------------------------------------------------------------


@dataclass(frozen=True)
class Consistent:
    branch: str
    certs: tuple = ()
    note: str = ""


@dataclass(frozen=True)
class Refutation:
    branch: str
    cert: WitnessCert
    witness: Element
    support: tuple = ()


def centralizer_refute(h: Element, f: Element, block: Optional[OBlock] = None,
                       side: str = "C", seed: int = 0, evidence: int = 3):
    """
    side "C": is f in the centralizer of W_h? Elements fixing the block
    pointwise are consistent; anything else gets a certified member w of W_h
    with [w, f] != 1.

    side "C2": is f in the double centralizer? Elements of rst(block) are
    consistent; anything else gets a certified y fixing the block pointwise
    with [y, f] != 1.
    """
    plain, hh, ff, block = _prepare(h, f, block)
    if side == "C":
        res = _refute_c(hh, ff, block, seed, evidence)
    elif side == "C2":
        res = _refute_c2(hh, ff, block, seed, evidence)
    else:
        raise ValueError(f"unknown side {side!r}")
    if not plain:
        return res
    if isinstance(res, Consistent):
        return Consistent(res.branch, tuple(unwrap_cert(c) for c in res.certs), res.note)
    return Refutation(res.branch, unwrap_cert(res.cert), res.witness.top,
                      tuple(unwrap_cert(c) for c in res.support))


def _commuting_cert(claim: str, f: LexAut, w: LexAut) -> WitnessCert:
    pt = moved_point(w) or _pad(w.model, ())
    return make_cert(claim, "eq", {"w": w, "f": f}, letter("w") + F, F + letter("w"), pt)


def _refute_c(h, f, block, seed, evidence):
    if in_ptstab(f, block):
        # oversample: candidates moving the block are rejected, not members
        sample = sample_W(h, 4 * evidence, seed, block)
        certs = []
        for m in sample.members[:evidence]:
            if m.value * f != f * m.value:
                raise AssertionError("pointwise stabilizer element fails to commute with a W member")
            certs.append(_commuting_cert("centralizer-i", f, m.value))
            certs.append(m.cert)
        return Consistent("i", tuple(certs) + sample.evidence, "f fixes the block pointwise")
    delta = moved_point(f, block)
    alpha = support_points(h, 1)[0]
    gt = block_transporter(h.model, block, alpha, delta)
    hg = conj(h, gt)
    try:
        res = lemma41b(hg, f, block)
    except DepthExhausted:
        res = lemma51b(hg, f, block)
    if isinstance(res, FixesSupport):
        raise AssertionError("transported support point is not moved")
    cert = substitute(res.cert, "h", w_conj(H, letter("G")), {"h": h, "G": gt},
                      claim="centralizer-ii", notes=(f"via {res.cert.claim}",))
    member = lemma42b(h, gt, block)
    return Refutation("ii", cert, res.c, (member.cert,))


def _refute_c2(h, f, block, seed, evidence):
    model = h.model
    n = model.depth
    if in_rst(f, block):
        certs = []
        if block.level > 1:
            sib = OBlock(block.level, block.prefix[:-1] + (block.prefix[-1] + 1,))
            y = block_element(model, sib, ONE)
            certs.append(_commuting_cert("centralizer-rst", f, y))
        return Consistent("rst", tuple(certs), "f is supported inside the block")
    if in_st(f, block):
        rest = f * restrict(f, block).inverse()
        alpha = moved_point(rest)
        v = congr_V(alpha, rest(alpha))
        if v < n:
            y = block_element(model, OBlock.containing(alpha, v + 1), ONE)
        else:
            _ensure_kind(model, n)
            lo, hi = sorted((alpha[-1], rest(alpha)[-1]))
            w = hi - lo
            y = block_element(model, OBlock.containing(alpha, n),
                              bump(lo, lo + w / 3, lo + 2 * w / 3, hi))
        branch = "iii"
    else:
        y = block_element(model, block.image(f), ONE)
        branch = "iii-outside"
    if not in_ptstab(y, block):
        raise AssertionError("constructed y moves a point of the block")
    yf = conj(y, f)
    pt = differing_point(yf, y, [moved_point(y)])
    cert = make_cert("centralizer-" + branch, "ne", {"f": f, "y": y}, w_conj(letter("y"), F),
                     letter("y"), pt, ("y fixes the block pointwise",))
    support = []
    sample = sample_W(h, evidence, seed, block)
    for m in sample.members:
        if m.value * y != y * m.value:
            raise AssertionError("y fails to commute with a W member")
        support.append(_commuting_cert("centralizer-y-commutes", y, m.value))
    return Refutation(branch, cert, y, tuple(support))
