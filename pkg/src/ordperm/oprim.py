"""
Sampled o-primitivity verdicts for tower models.

A model is o-primitive exactly when the double centralizer of W_g is the
whole group for every g != 1. The report samples elements and collects
certificates supporting one of four verdict branches:

* depth 1, abelian component: every sampled X_g is trivial;
* depth 1, PL component: X_g != 1 is exhibited and every sampled f passes
  the double-centralizer test;
* depth >= 2 with a PL bottom component: for g in Q of a proper block, an
  element outside the double centralizer is certified;
* depth >= 2 with an abelian bottom component: for g in Q of a minimal
  block, every sampled [g^-1, g^f] is exactly trivial, and a non-commuting
  pair shows the group is not abelian.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cert import letter, make_cert, w_comm, w_conj, w_inv
from .lex import REG, OBlock, TowerModel, _pad, block_element
from .plmap import PLMap, comm, conj
from . import sampling
from .witnesses import (
    Consistent,
    Refutation,
    centralizer_refute,
    differing_point,
    fundamental_conjugator,
    sample_W,
    sample_X,
)

O_PRIMITIVE_ABELIAN = "o-primitive-abelian"
O_PRIMITIVE = "o-primitive"
NOT_O_PRIMITIVE = "not-o-primitive"

_G, _F, _X = letter("g"), letter("f"), letter("x")


def _xg_word(conjugator):
    return w_comm(w_inv(_G), w_conj(_G, conjugator))


@dataclass
class OPrimTrial:
    index: int
    certs: list = field(default_factory=list)
    passed: bool = True
    note: str = ""


@dataclass
class OPrimReport:
    model: TowerModel
    verdict: str
    branch: str
    trials: list

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.trials)

    @property
    def certs(self) -> list:
        return [c for t in self.trials for c in t.certs]


def oprim_trial(model: TowerModel, seed: int, index: int) -> tuple[str, str, OPrimTrial]:
    """One sampled g: returns (verdict, branch, trial record)."""
    rng = sampling.rng_for(seed, "oprim", model, index)
    if model.depth == 1:
        return _depth_one(model, rng, index)
    if model.locally_abelian:
        return _locally_abelian(model, rng, index)
    return _refutable(model, rng, index)


def oprim_report(model: TowerModel, trials: int = 100, seed: int = 0) -> OPrimReport:
    verdict = branch = ""
    records = []
    for i in range(trials):
        v, b, rec = oprim_trial(model, seed, i)
        if verdict and (v, b) != (verdict, branch):
            rec.passed = False
            rec.note = f"inconsistent verdict {v}/{b}"
        verdict, branch = verdict or v, branch or b
        records.append(rec)
    return OPrimReport(model, verdict, branch, records)


def _depth_one(model, rng, index):
    rec = OPrimTrial(index)
    if model.kinds[0] == REG:
        g = sampling.rand_translation(rng)
        f = sampling.rand_translation(rng)
        c = comm(g.inverse(), conj(g, f))
        xs = sample_X(g, 4, index, REG)
        rec.passed = c.is_identity() and all(m.trivial for m in xs.members)
        rec.certs.append(make_cert("oprim-abelian", "eq", {"g": g, "f": f}, _xg_word(_F), (), Fraction(0)))
        return O_PRIMITIVE_ABELIAN, "abelian", rec
    g = sampling.rand_nonidentity_plmap(rng)
    x = fundamental_conjugator(g)
    member = comm(g.inverse(), conj(g, x))
    word = _xg_word(_X)
    pt = differing_point(member, PLMap())
    rec.certs.append(make_cert("oprim-xg-nontrivial", "ne", {"g": g, "x": x}, word, (), pt))
    f = sampling.rand_nonidentity_plmap(rng)
    res = centralizer_refute(g, f, side="C2")
    rec.passed = isinstance(res, Consistent) and not member.is_identity()
    rec.certs.extend(res.certs)
    return O_PRIMITIVE, "o-2-transitive", rec


def _locally_abelian(model, rng, index):
    rec = OPrimTrial(index)
    n = model.depth
    block = sampling.rand_block(rng, model, n)
    g = block_element(model, block, sampling.rand_translation(rng))
    if rng.random() < 0.5:
        f = sampling.rand_lexaut(rng, model)
    else:
        # candidates fixing the block setwise
        f = sampling.rand_stabilizer_element(rng, model, block)
    c = comm(g.inverse(), conj(g, f))
    rec.passed = c.is_identity()
    pt = _pad(model, block.prefix)
    rec.certs.append(make_cert("oprim-la-commutator", "eq", {"g": g, "f": f}, _xg_word(_F), (), pt))
    if index == 0:
        w = sample_W(g, 5, index, block)
        rec.passed &= not w.members
        rec.certs.extend(w.evidence)
    parent = OBlock(n - 1, block.prefix[:-1])
    z = block_element(model, parent, PLMap.translation(1))
    q = differing_point(g * z, z * g, [pt])
    rec.certs.append(make_cert("oprim-nonabelian", "ne", {"g": g, "z": z}, _G + letter("z"),
                               letter("z") + _G, q, ("the block and its image under z are disjoint",)))
    return NOT_O_PRIMITIVE, "locally-abelian", rec


def _refutable(model, rng, index):
    rec = OPrimTrial(index)
    level = rng.randint(2, model.depth)
    block = sampling.rand_block(rng, model, level)
    g = sampling.rand_q_element(rng, model, block)
    sib = OBlock(level, block.prefix[:-1] + (block.prefix[-1] + sampling.rand_rat(rng, 1, 3, 4),))
    f = sampling.rand_q_element(rng, model, sib)
    res = centralizer_refute(g, f, block, side="C2", seed=index, evidence=2)
    rec.passed = isinstance(res, Refutation)
    if isinstance(res, Refutation):
        rec.certs.append(res.cert)
        rec.certs.extend(res.support)
    return NOT_O_PRIMITIVE, "refutation", rec
