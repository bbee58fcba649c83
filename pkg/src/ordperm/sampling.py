"""
Seeded generators for small exact group elements.

Every generator takes a ``random.Random`` instance so callers control the
stream. Rationals are drawn with denominators at most ``MAX_DEN`` to keep
the arithmetic small.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .lex import PL2T, REG, LexAut, OBlock, TowerModel, block_element, embed
from .plmap import PLMap, bump, interpolate

MAX_DEN = 16


def rng_for(seed: int, *labels) -> random.Random:
    """Independent deterministic stream for ``seed`` and a label path."""
    return random.Random(":".join([str(seed)] + [str(x) for x in labels]))


def rand_rat(rng: random.Random, lo: int = -8, hi: int = 8, max_den: int = MAX_DEN) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def rand_increasing(rng: random.Random, count: int, lo: int = -8, hi: int = 8) -> list[Fraction]:
    """``count`` distinct sorted rationals in [lo, hi]."""
    pts: set[Fraction] = set()
    while len(pts) < count:
        pts.add(rand_rat(rng, lo, hi))
    return sorted(pts)


def rand_bump(rng: random.Random, lo: int = -8, hi: int = 8) -> PLMap:
    mu1, g1, g2, mu2 = rand_increasing(rng, 4, lo, hi)
    if rng.random() < 0.5:
        return bump(mu1, g1, g2, mu2)
    return bump(mu1, g1, g2, mu2).inverse()


def rand_translation(rng: random.Random, nonzero: bool = True) -> PLMap:
    while True:
        c = rand_rat(rng, -4, 4)
        if c or not nonzero:
            return PLMap.translation(c)


def rand_plmap(rng: random.Random, max_anchors: int = 4, lo: int = -8, hi: int = 8) -> PLMap:
    """A random PL map with at most ``max_anchors`` anchors; may be the identity."""
    n = rng.randint(1, max_anchors)
    xs = rand_increasing(rng, n, lo, hi)
    ys = rand_increasing(rng, n, lo, hi)
    return interpolate(zip(xs, ys))


def rand_nonidentity_plmap(rng: random.Random, **kw) -> PLMap:
    while True:
        f = rand_plmap(rng, **kw)
        if not f.is_identity():
            return f


def rand_component(rng: random.Random, kind: str, nonidentity: bool = True) -> PLMap:
    if kind == REG:
        return rand_translation(rng, nonzero=nonidentity)
    r = rng.random()
    if r < 0.4:
        return rand_bump(rng)
    if r < 0.55:
        return rand_translation(rng)
    return rand_nonidentity_plmap(rng) if nonidentity else rand_plmap(rng)


def rand_lexaut(rng: random.Random, model: TowerModel, overrides: int = 2, p_top: float = 0.7) -> LexAut:
    """Random automorphism: a random top map plus a few random fiber overrides."""
    kind = model.kinds[0]
    top = rand_component(rng, kind) if rng.random() < p_top else PLMap()
    tail = model.tail()
    over = {}
    if tail is not None:
        for _ in range(rng.randint(0, overrides)):
            over[rand_rat(rng, -4, 4, 4)] = rand_lexaut(rng, tail, max(overrides - 1, 1), p_top)
    return LexAut(model, top, tuple(over.items()))


def rand_prefix(rng: random.Random, length: int) -> tuple:
    return tuple(rand_rat(rng, -3, 3, 4) for _ in range(length))


def rand_block(rng: random.Random, model: TowerModel, level: Optional[int] = None) -> OBlock:
    if level is None:
        level = rng.randint(1, model.depth)
    return OBlock(level, rand_prefix(rng, level - 1))


def rand_q_element(rng: random.Random, model: TowerModel, block: OBlock, inner: float = 0.5) -> LexAut:
    """Random element of Q_block: moves the block's free coordinate, supported in the block."""
    comp = rand_component(rng, model.kind_at(block.level))
    g = block_element(model, block, comp)
    if block.level < model.depth and rng.random() < inner:
        # extra action deeper inside the block
        sub = OBlock(block.level + 1, block.prefix + (rand_rat(rng, -3, 3, 4),))
        g = g * block_element(model, sub, rand_component(rng, model.kind_at(sub.level)))
    return g


def rand_stabilizer_element(rng: random.Random, model: TowerModel, block: OBlock) -> LexAut:
    """Random element fixing ``block`` setwise (possibly acting elsewhere as well)."""
    if block.level == 1:
        return rand_lexaut(rng, model, 2)
    g = embed(model, block.prefix, rand_lexaut(rng, model.tail(block.level - 1), 1))
    if rng.random() < 0.5:
        # act on a sibling block too
        sib = OBlock(block.level, block.prefix[:-1] + (block.prefix[-1] + rand_rat(rng, 1, 3, 2),))
        g = g * block_element(model, sib, rand_component(rng, model.kind_at(sib.level)))
    return g


def conjugator_pool(seed: int, kind: str = PL2T, size: int = 6) -> list[PLMap]:
    """Per-seed pool of bumps and translations used to build random conjugator words."""
    rng = rng_for(seed, "pool", kind)
    pool = []
    for i in range(size):
        if kind == REG or i % 3 == 2:
            pool.append(rand_translation(rng))
        else:
            pool.append(rand_bump(rng))
    return pool


def rand_word_element(rng: random.Random, pool: list, identity, max_len: int = 4):
    """Product of up to ``max_len`` random pool elements or their inverses."""
    out = identity
    for _ in range(rng.randint(1, max_len)):
        g = rng.choice(pool)
        out = out * (g if rng.random() < 0.5 else g.inverse())
    return out
