"""
Word-data files for the certificate pipeline.

A word-data file is JSON with fields

    n        rank of the symmetric group S_n
    word     the expression as a list of 1-based generator indices,
             or null while a transcription is pending
    A        parabolic subset for the spherical module (list, or null)
    B        parabolic subset defining x = w_B (list)
    forced   "letters-in-B" or an explicit per-position list of allowed
             bit sets, e.g. [[0,1],[1],[0,1]]
    degree   the degree of the intersection form (the certificate uses -1)

plus optional "word_prefix" and "census" blocks used by the validator.
The GL15 word is defined by a string diagram with no plain-text source;
the shipped `gl15-partial` file records the documented prefix and census
facts (length 78, 23 free positions, 12 letters of index <= 3, eleven
s_4 letters) so that a hand transcription can be machine-checked before
it is trusted.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import coxeter
from .subexpr import EnumConstraint

BUILTIN_WORDS = {
    "gl15-partial": "gl15_word_partial.json",
    "demo-s4-fail": "demo_s4_interval_fail.json",
    "demo-s4-pass": "demo_s4_interval_pass.json",
}


@dataclass
class WordData:
    n: int
    word: tuple[int, ...] | None
    parabolic: frozenset | None      # the subset A
    lower: frozenset                 # the subset B, with x = w_B
    forced: object                   # "letters-in-B" or explicit slot list
    degree: int
    word_prefix: tuple[int, ...] = ()
    census: dict | None = None
    source: str = "<memory>"

    def is_complete(self) -> bool:
        return self.word is not None and self.parabolic is not None

    def constraint(self) -> EnumConstraint:
        if self.word is None:
            raise ValueError("word data has no word")
        if self.forced == "letters-in-B":
            return EnumConstraint.forced_letters(self.word, self.lower)
        return EnumConstraint(self.forced)

    def x_element(self) -> coxeter.Permutation:
        return coxeter.longest_element(self.lower, self.n)

    def w_element(self) -> coxeter.Permutation:
        if self.word is None or self.parabolic is None:
            raise ValueError("word data is incomplete")
        return coxeter.min_coset_rep(
            coxeter.evaluate_word(self.word, self.n), self.parabolic)


def load_word_data(path_or_name: str | Path) -> WordData:
    name = str(path_or_name)
    if name in BUILTIN_WORDS:
        ref = resources.files("heckekit").joinpath("data",
                                                   BUILTIN_WORDS[name])
        raw = json.loads(ref.read_text())
        source = name
    else:
        raw = json.loads(Path(name).read_text())
        source = name
    return parse_word_data(raw, source)


def parse_word_data(raw: dict, source: str = "<memory>") -> WordData:
    try:
        n = int(raw["n"])
        word = raw.get("word")
        parabolic = raw.get("A")
        lower = raw.get("B", [])
        forced = raw.get("forced", "letters-in-B")
        degree = int(raw.get("degree", -1))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed word data in {source}: {exc}") from exc
    if n < 1:
        raise ValueError(f"bad rank n={n}")
    for name, subset in (("A", parabolic), ("B", lower)):
        if subset is None:
            continue
        for i in subset:
            if not 1 <= int(i) <= n - 1:
                raise ValueError(f"{name} contains invalid generator {i}")
    if word is not None:
        word = tuple(int(t) for t in word)
        for t in word:
            if not 1 <= t <= n - 1:
                raise ValueError(f"word letter {t} out of range for S_{n}")
    if forced != "letters-in-B":
        forced = [tuple(int(b) for b in slot) for slot in forced]
        if word is not None and len(forced) != len(word):
            raise ValueError("explicit constraint length != word length")
    return WordData(
        n=n,
        word=word,
        parabolic=None if parabolic is None else
        frozenset(int(i) for i in parabolic),
        lower=frozenset(int(i) for i in lower),
        forced=forced,
        degree=degree,
        word_prefix=tuple(int(t) for t in raw.get("word_prefix", ())),
        census=raw.get("census"),
        source=source,
    )


@dataclass
class ValidationCheck:
    name: str
    ok: bool
    detail: str


@dataclass
class ValidationReport:
    checks: list[ValidationCheck] = field(default_factory=list)
    complete: bool = False

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(ValidationCheck(name, bool(ok), detail))

    def to_json_dict(self) -> dict:
        return {
            "ok": self.ok,
            "complete": self.complete,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail}
                       for c in self.checks],
        }


def validate_word_data(wd: WordData) -> ValidationReport:
    """Run the census checklist so a transcription can be trusted.

    Structural checks always run; word-dependent checks run once a word
    is present, and parabolic checks once A is present.
    """
    rep = ValidationReport()
    census = wd.census or {}

    if wd.parabolic is not None and wd.parabolic & wd.lower:
        rep.add("A-B-disjoint", False,
                f"A and B overlap: {sorted(wd.parabolic & wd.lower)}")
    elif wd.parabolic is not None:
        rep.add("A-B-disjoint", True, "")

    if wd.word is None:
        rep.add("word-present", False, "word is null (transcription pending)")
        rep.complete = False
        return rep
    rep.add("word-present", True, f"{len(wd.word)} letters")

    if "length" in census:
        want = int(census["length"])
        rep.add("census-length", len(wd.word) == want,
                f"expected {want}, found {len(wd.word)}")
    if wd.word_prefix:
        got = wd.word[:len(wd.word_prefix)]
        rep.add("documented-prefix", got == wd.word_prefix,
                "word starts with the documented prefix"
                if got == wd.word_prefix else f"prefix mismatch at {got[:8]}")
    if "letters_index_le_3" in census:
        low = sum(1 for t in wd.word if t <= 3)
        want = int(census["letters_index_le_3"])
        rep.add("census-low-letters", low == want,
                f"expected {want} letters of index <= 3, found {low}")
    if "letters_index_4" in census:
        s4 = sum(1 for t in wd.word if t == 4)
        want = int(census["letters_index_4"])
        rep.add("census-s4-letters", s4 == want,
                f"expected {want} letters s_4, found {s4}")
    if "free_positions" in census:
        free = len(wd.constraint().free_positions())
        want = int(census["free_positions"])
        rep.add("census-free-positions", free == want,
                f"expected {want} unforced positions, found {free}")

    rep.add("word-reduced", coxeter.is_reduced(wd.word, wd.n),
            "the word is a reduced expression"
            if coxeter.is_reduced(wd.word, wd.n) else "word is not reduced")

    wB = wd.x_element()
    forced_count = len(wd.word) - len(wd.constraint().free_positions())
    rep.add("forced-count-is-length-of-wB",
            forced_count == coxeter.length(wB),
            f"forced positions {forced_count}, len(w_B) {coxeter.length(wB)}")

    if wd.parabolic is not None:
        ok = coxeter.is_min_coset_rep(wB, wd.parabolic)
        rep.add("x-is-minimal-rep", ok,
                "w_B is a minimal coset representative for A"
                if ok else "w_B is not minimal in its A-coset")
        wfull = coxeter.evaluate_word(wd.word, wd.n)
        ok = coxeter.is_min_coset_rep(wfull, wd.parabolic)
        rep.add("w-is-minimal-rep", ok,
                "the word's element is a minimal coset representative"
                if ok else "the word's element is not minimal in its A-coset")
        rep.complete = rep.ok
    else:
        rep.add("parabolic-present", False, "A is null")
        rep.complete = False
    return rep
