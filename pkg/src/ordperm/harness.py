"""
Scenario-driven suite runner.

A scenario is a flat ``key=value`` list separated by ``;`` or newlines::

    model=PL2T,PL2T; suite=lemma42,centralizer; trials=50; seed=7

Running a scenario writes one certificate file per trial plus a
``report.txt`` whose lines are stable across runs, and a separate
``timing.txt`` holding wall-clock figures.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .cert import WitnessCert, check_cert, format_certs, letter, make_cert, parse_certs
from .errors import (
    DepthExhausted,
    DepthOutOfRange,
    OrdpermError,
    ParseError,
    UnknownSuite,
)
from .lex import (
    KINDS,
    MAX_DEPTH,
    PL2T,
    REG,
    LexAut,
    OBlock,
    TowerModel,
    block_element,
    embed,
    format_lexaut,
    in_ptstab,
    parse_lexaut,
    parse_model,
)
from .plmap import PLMap, bump, conj, parse_plmap
from . import sampling
from .oprim import oprim_trial
from .witnesses import (
    Consistent,
    FixesSupport,
    centralizer_refute,
    lemma31,
    lemma41b,
    lemma42b,
    lemma51b,
)

SUITES = ("lemma31", "lemma41", "lemma42", "centralizer", "oprim", "algebra")
U64 = 2 ** 64


@dataclass(frozen=True)
class Scenario:
    model: TowerModel
    suites: tuple
    trials: int = 100
    seed: int = 0
    output: str = "out"


# -- scenario grammar -------------------------------------------------------------------


def _fields(text: str):
    """Yield (key, value, line, key_column, value_column) for every assignment."""
    for lineno, raw in enumerate(text.split("\n"), 1):
        col = 1
        for chunk in raw.split(";"):
            stripped = chunk.strip()
            lead = len(chunk) - len(chunk.lstrip())
            start = col + lead
            col += len(chunk) + 1
            if not stripped or stripped.startswith("#"):
                continue
            key, eq, value = stripped.partition("=")
            if not eq:
                raise ParseError(f"expected 'key=value', got {stripped!r}", lineno, start)
            vcol = start + len(key) + 1 + (len(value) - len(value.lstrip()))
            yield key.strip(), value.strip(), lineno, start, vcol


def parse_scenario(text: str) -> Scenario:
    seen: dict[str, tuple] = {}
    for key, value, line, kcol, vcol in _fields(text):
        if key not in ("model", "suite", "trials", "seed", "output"):
            raise ParseError(f"unknown key {key!r}", line, kcol)
        if key in seen:
            raise ParseError(f"duplicate key {key!r}", line, kcol)
        seen[key] = (value, line, vcol)
    for required in ("model", "suite"):
        if required not in seen:
            raise ParseError(f"missing required key {required!r}", 1, 1)

    value, line, col = seen["model"]
    kinds = [k.strip() for k in value.split(",")]
    offset = 0
    for k in kinds:
        if k not in KINDS:
            raise ParseError(f"unknown component kind {k!r}", line, col + offset)
        offset += len(k) + 1
    if not 1 <= len(kinds) <= MAX_DEPTH:
        raise DepthOutOfRange(f"depth {len(kinds)} outside 1..{MAX_DEPTH}")
    model = TowerModel(tuple(kinds))

    value, line, col = seen["suite"]
    suites = tuple(s.strip() for s in value.split(","))
    for s in suites:
        if s not in SUITES:
            raise UnknownSuite(f"unknown suite {s!r}; expected one of {', '.join(SUITES)}")

    def integer(key, default, lo, hi):
        if key not in seen:
            return default
        value, line, col = seen[key]
        if not value.isdigit():
            raise ParseError(f"{key} must be a non-negative integer", line, col)
        n = int(value)
        if not lo <= n < hi:
            raise ParseError(f"{key} out of range", line, col)
        return n

    trials = integer("trials", 100, 1, 10 ** 7)
    seed = integer("seed", 0, 0, U64)
    output = seen["output"][0] if "output" in seen else "out"
    return Scenario(model, suites, trials, seed, output)


# -- trials -------------------------------------------------------------------------------


@dataclass
class TrialResult:
    index: int
    suite: str
    passed: bool
    certs: list = field(default_factory=list)
    case: str = ""
    error: str = ""


def _rng(seed, suite, model, index):
    return sampling.rng_for(seed, suite, model, index)


def _algebra_elements(model, rng):
    if model.depth == 1:
        kind = model.kinds[0]
        return [sampling.rand_component(rng, kind, nonidentity=False) for _ in range(3)]
    return [sampling.rand_lexaut(rng, model) for _ in range(3)]


def trial_algebra(model, seed, index) -> TrialResult:
    rng = _rng(seed, "algebra", model, index)
    a, b, c = _algebra_elements(model, rng)
    one = PLMap() if isinstance(a, PLMap) else LexAut(model)
    checks = [
        (a * b) * c == a * (b * c),
        a * a.inverse() == one and a.inverse() * a == one,
        a.inverse().inverse() == a,
        a.vee(a.wedge(b)) == a,
        a.wedge(a.vee(b)) == a,
        a.vee(b) == b.vee(a),
        a.vee(b) * c == (a * c).vee(b * c),
        c * a.vee(b) == (c * a).vee(c * b),
    ]
    elems = {"a": a, "b": b, "c": c}
    abc = letter("a") + letter("b") + letter("c")
    inv = tuple((n, -e) for n, e in reversed(abc))
    pt = sampling.rand_rat(rng) if model.depth == 1 else tuple(sampling.rand_rat(rng) for _ in range(model.depth))
    certs = [make_cert("algebra-inverse", "eq", elems, abc + inv, (), pt)]
    if isinstance(a, PLMap):
        # support of a conjugate is the image of the support
        bc = conj(b, a)
        checks.append(bc.support() == b.support().image(a))
        if not bc.is_identity():
            q = bc.support().parts[0].sample()
            certs.append(make_cert("algebra-conjugate-support", "ne", {"a": a, "b": b},
                                   (("a", -1), ("b", 1), ("a", 1)), (), q))
    return TrialResult(index, "algebra", all(checks), certs)


def trial_lemma31(model, seed, index) -> TrialResult:
    rng = _rng(seed, "lemma31", model, index)
    h = sampling.rand_bump(rng)
    if rng.random() < 0.3:
        h = h * sampling.rand_bump(rng)
    if h.is_identity():
        h = bump(0, 1, 2, 3)
    shift = sampling.rand_rat(rng, 20, 40, 8) * rng.choice((1, -1))
    g = PLMap.translation(shift)
    if rng.random() < 0.5:
        g = sampling.rand_bump(rng) * g
    r = lemma31(h, g)
    ok = r.w1(r.lam) == r.gamma and r.w2(r.lam) == r.delta and r.w2(r.gamma) == r.gamma
    case = ("swapped" if r.swapped else "direct") + ("-reflected" if r.reflected else "")
    return TrialResult(index, "lemma31", ok, [r.cert], case)


def _sibling(rng, block: OBlock) -> OBlock:
    return OBlock(block.level, block.prefix[:-1] + (block.prefix[-1] + sampling.rand_rat(rng, 1, 3, 4),))


def trial_lemma41(model, seed, index) -> TrialResult:
    rng = _rng(seed, "lemma41", model, index)
    n = model.depth
    level = rng.randint(1, max(n - 1, 1))
    block = sampling.rand_block(rng, model, level)
    h = sampling.rand_q_element(rng, model, block)
    if level > 1 and rng.random() < 0.25:
        f = sampling.rand_q_element(rng, model, _sibling(rng, block))
    else:
        f = sampling.rand_lexaut(rng, model)
    try:
        res = lemma41b(h, f, block)
    except DepthExhausted:
        res = lemma51b(h, f, block)
    if isinstance(res, FixesSupport):
        certs = [make_cert("lemma41b-fixes", "eq", {"f": f}, letter("f"), (), p) for p in res.points]
        return TrialResult(index, "lemma41", res.ok and bool(certs), certs, "fixes")
    return TrialResult(index, "lemma41", True, [res.cert], res.regime)


def _stabilizer_with_top(rng, model, block, top: PLMap) -> LexAut:
    """Element fixing ``block`` whose induced action there is ``top``."""
    tail = model.tail(block.level - 1)
    inner = sampling.rand_lexaut(rng, tail, 1)
    g = embed(model, block.prefix, LexAut(tail, top, inner.over))
    if block.level > 1 and rng.random() < 0.5:
        sib = _sibling(rng, block)
        g = g * block_element(model, sib, sampling.rand_component(rng, model.kind_at(sib.level)))
    return g


def trial_lemma42(model, seed, index) -> TrialResult:
    rng = _rng(seed, "lemma42", model, index)
    n = model.depth
    target = ("i", "ii", "iii")[index % 3]
    if target == "i" and n == 1:
        target = "ii"
    if target == "i":
        level = rng.randint(1, n - 1)
    elif target == "ii":
        level = n
    else:
        level = rng.randint(1, n)
    block = sampling.rand_block(rng, model, level)
    kind = model.kind_at(level)
    if target == "iii":
        hc = sampling.rand_bump(rng) if kind == PL2T else sampling.rand_translation(rng)
        h = block_element(model, block, hc)
        if level < n and rng.random() < 0.5:
            sub = OBlock(level + 1, block.prefix + (sampling.rand_rat(rng, -3, 3, 4),))
            h = h * block_element(model, sub, sampling.rand_component(rng, model.kind_at(level + 1)))
        gc = PLMap.translation(sampling.rand_rat(rng, 20, 40, 8) * rng.choice((1, -1)))
        if rng.random() < 0.5:
            gc = sampling.rand_bump(rng) * gc
    else:
        h = sampling.rand_q_element(rng, model, block)
        gc = PLMap() if rng.random() < 0.3 or kind == REG else sampling.rand_bump(rng, -2, 2)
    g = _stabilizer_with_top(rng, model, block, gc)
    pair = lemma42b(h, g, block)
    return TrialResult(index, "lemma42", True, [pair.cert], pair.case + ("" if pair.variant == "standard" else "-" + pair.variant))


def _outside(rng, model, block) -> LexAut:
    """Element of the pointwise stabilizer of ``block``: acts only on blocks disjoint from it."""
    sib = _sibling(rng, block)
    level = rng.randint(sib.level, model.depth)
    tail = tuple(sampling.rand_rat(rng, -3, 3, 4) for _ in range(level - sib.level))
    target = OBlock(level, sib.prefix + tail)
    return sampling.rand_q_element(rng, model, target)


def trial_centralizer(model, seed, index) -> TrialResult:
    rng = _rng(seed, "centralizer", model, index)
    n = model.depth
    target = ("i", "ii", "iii")[index % 3]
    if n == 1:
        block = OBlock(1)
    elif target == "ii":
        block = sampling.rand_block(rng, model)
    else:
        block = sampling.rand_block(rng, model, rng.randint(2, n))
    h = sampling.rand_q_element(rng, model, block)
    if target == "i":
        f = _outside(rng, model, block) if n > 1 else LexAut(model)
        side = "C"
    elif target == "ii":
        f = sampling.rand_lexaut(rng, model)
        if in_ptstab(f, block):
            f = f * block_element(model, block, PLMap.translation(1))
        side = "C"
    else:
        if n == 1:
            f, side = sampling.rand_lexaut(rng, model), "C2"
        else:
            inside = sampling.rand_q_element(rng, model, block) if rng.random() < 0.5 else LexAut(model)
            f = inside * _outside(rng, model, block)
            side = "C2"
    res = centralizer_refute(h, f, block, side=side, seed=index)
    if isinstance(res, Consistent):
        certs = list(res.certs)
        expected = {"i": "i", "ii": None, "iii": "rst" if n == 1 else None}[target]
        return TrialResult(index, "centralizer", res.branch == expected, certs, res.branch)
    certs = [res.cert] + list(res.support)
    return TrialResult(index, "centralizer", res.branch.startswith(target), certs, res.branch)


def trial_oprim(model, seed, index) -> TrialResult:
    verdict, branch, rec = oprim_trial(model, seed, index)
    return TrialResult(index, "oprim", rec.passed, rec.certs, f"{verdict}/{branch}", rec.note)


TRIALS: dict[str, Callable] = {
    "algebra": trial_algebra,
    "lemma31": trial_lemma31,
    "lemma41": trial_lemma41,
    "lemma42": trial_lemma42,
    "centralizer": trial_centralizer,
    "oprim": trial_oprim,
}


def run_trial(suite: str, model: TowerModel, seed: int, index: int) -> TrialResult:
    """Run one trial; module errors are recorded, not raised."""
    if suite not in TRIALS:
        raise UnknownSuite(f"unknown suite {suite!r}")
    try:
        res = TRIALS[suite](model, seed, index)
    except (OrdpermError, AssertionError) as exc:
        return TrialResult(index, suite, False, [], "error", f"{type(exc).__name__}: {exc}")
    if not all(check_cert(c) for c in res.certs):
        res.passed = False
        res.error = res.error or "certificate check failed"
    return res


# -- runs and reports -----------------------------------------------------------------------


@dataclass
class SuiteResult:
    suite: str
    trials: list
    elapsed: float = 0.0

    @property
    def passed(self) -> int:
        return sum(t.passed for t in self.trials)

    @property
    def failed(self) -> int:
        return len(self.trials) - self.passed

    @property
    def cases(self) -> Counter:
        return Counter(t.case for t in self.trials)

    @property
    def verdict(self) -> str:
        if self.suite != "oprim" or not self.trials:
            return ""
        found = {t.case for t in self.trials if t.case != "error"}
        return found.pop() if len(found) == 1 else "inconsistent"


def run_suite(suite: str, model: TowerModel, trials: int, seed: int) -> SuiteResult:
    start = time.perf_counter()
    results = [run_trial(suite, model, seed, i) for i in range(1, trials + 1)]
    return SuiteResult(suite, results, time.perf_counter() - start)


@dataclass
class Report:
    scenario: Scenario
    suites: list

    @property
    def ok(self) -> bool:
        return all(s.failed == 0 for s in self.suites)

    def cert_path(self, suite: str, index: int) -> str:
        return f"{suite}/trial-{index:04d}.cert"

    def text(self) -> str:
        sc = self.scenario
        lines = [f"SCENARIO model={sc.model} suite={','.join(sc.suites)} trials={sc.trials} seed={sc.seed}"]
        for s in self.suites:
            for t in s.trials:
                ref = self.cert_path(s.suite, t.index) if t.certs else "-"
                lines.append(f"TRIAL {t.index} {s.suite} {'pass' if t.passed else 'fail'} {ref}")
                if t.error:
                    lines.append(f"ERROR {t.index} {s.suite} {t.error}")
        for s in self.suites:
            lines.append(f"SUITE {s.suite} pass={s.passed} fail={s.failed}")
            cases = " ".join(f"{k}={v}" for k, v in sorted(s.cases.items()) if k)
            if cases:
                lines.append(f"CASES {s.suite} {cases}")
            if s.verdict:
                lines.append(f"VERDICT {s.suite} {s.verdict}")
        lines.append(f"RESULT {'pass' if self.ok else 'fail'}")
        return "\n".join(lines) + "\n"

    def timing_text(self) -> str:
        return "".join(f"SUITE {s.suite} {s.elapsed:.3f}s\n" for s in self.suites)

    def write(self, out: Path) -> None:
        out.mkdir(parents=True, exist_ok=True)
        for s in self.suites:
            (out / s.suite).mkdir(exist_ok=True)
            for t in s.trials:
                if t.certs:
                    (out / self.cert_path(s.suite, t.index)).write_text(format_certs(t.certs))
        (out / "report.txt").write_text(self.text())
        (out / "timing.txt").write_text(self.timing_text())


def run(scenario: Scenario, out: Optional[Path] = None) -> Report:
    report = Report(scenario, [run_suite(s, scenario.model, scenario.trials, scenario.seed)
                               for s in scenario.suites])
    target = Path(out) if out is not None else Path(scenario.output)
    report.write(target)
    return report


# -- files of serialized objects ---------------------------------------------------------------


def parse_objects(text: str) -> list:
    """
    Parse a file of serialized objects: certificate blocks, ``PL[...]`` lines,
    and ``Lex{...}`` lines (interpreted in the model set by the latest
    ``MODEL <kinds>`` line). Blank lines and ``#`` comments are skipped.
    """
    if text.lstrip().startswith("CERT "):
        return parse_certs(text)
    out = []
    model = None
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("MODEL "):
                model = parse_model(line[6:])
            elif line.startswith("PL["):
                out.append(parse_plmap(line))
            elif line.startswith("Lex{"):
                if model is None:
                    raise ParseError("Lex element before any MODEL line")
                out.append(parse_lexaut(line, model))
            else:
                raise ParseError("expected 'MODEL', 'PL[' or 'Lex{'")
        except ParseError as exc:
            raise ParseError(str(exc).split(" (line")[0], lineno, exc.column) from None
        except DepthOutOfRange as exc:
            raise ParseError(str(exc), lineno, 7) from None
    return out


def format_objects(objs: list) -> str:
    if objs and isinstance(objs[0], WitnessCert):
        return format_certs(objs)
    lines = []
    model = None
    for g in objs:
        if isinstance(g, PLMap):
            lines.append(str(g))
        else:
            if g.model != model:
                model = g.model
                lines.append(f"MODEL {model}")
            lines.append(format_lexaut(g))
    return "\n".join(lines) + "\n"


def roundtrip_text(text: str) -> bool:
    first = parse_objects(text)
    second = parse_objects(format_objects(first))
    return first == second


def roundtrip(path) -> bool:
    return roundtrip_text(Path(path).read_text())


def verify(path) -> list[tuple[str, bool]]:
    """Check every certificate in a file; returns (claim, ok) pairs."""
    return [(c.claim, check_cert(c)) for c in parse_certs(Path(path).read_text())]


DEMO_MODELS = {
    "algebra": TowerModel.of(PL2T),
    "lemma31": TowerModel.of(PL2T),
    "lemma41": TowerModel.of(PL2T, PL2T, PL2T),
    "lemma42": TowerModel.of(PL2T, PL2T, PL2T),
    "centralizer": TowerModel.of(PL2T, PL2T),
    "oprim": TowerModel.of(PL2T, PL2T),
}
