"""Adaptation auditing: compare an adapted model against a gold standard.

The gold standard lists the element-level changes an ideal adaptation makes
(one entry per element and operation, optionally with an expectation on the
final element state).  Auditing diffs base vs. adapted model, matches the
diff against the gold entries, and reports three exact ratios:

* completeness — gold changes the adaptation touched at all;
* correctness  — gold changes whose expectation the result actually meets;
* efficiency   — correct changes per minute of adaptation effort.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import model as m
from .errors import InputError

OPS = ("ADD", "DEL", "MOD")


def _element_doc(model: m.QualityModel, kind: str, eid: str) -> dict:
    el = model.elements[kind][eid]
    return {f: el[f] for f in sorted(m.SCHEMA[kind])}


def diff_models(
    base: m.QualityModel, adapted: m.QualityModel, element_level: bool = True
) -> list[dict]:
    """Element-level changes from base to adapted.  Added elements appear as
    one ADD each (their field values are part of the addition, not separate
    modifications).  With ``element_level=False`` modifications are reported
    per changed field instead of folded per element."""
    out = []
    for kind in m.KINDS:
        base_ids = set(base.elements[kind])
        new_ids = set(adapted.elements[kind])
        for eid in sorted(new_ids - base_ids):
            out.append({"element": eid, "kind": kind, "op": "ADD"})
        for eid in sorted(base_ids - new_ids):
            out.append({"element": eid, "kind": kind, "op": "DEL"})
        for eid in sorted(base_ids & new_ids):
            before = _element_doc(base, kind, eid)
            after = _element_doc(adapted, kind, eid)
            if before == after:
                continue
            if element_level:
                out.append({"element": eid, "kind": kind, "op": "MOD"})
            else:
                for f in sorted(before):
                    if before[f] != after[f]:
                        out.append(
                            {"element": eid, "kind": kind, "op": "MOD", "field": f}
                        )
    return out


def _entry_key(entry: dict):
    return (entry["element"], entry["op"], entry.get("field"))


def parse_gold(document: dict) -> tuple[list[dict], Fraction | None]:
    if not isinstance(document, dict) or not isinstance(document.get("entries"), list):
        raise InputError("gold standard must be an object with an 'entries' array")
    entries = []
    seen = set()
    for entry in document["entries"]:
        if not isinstance(entry, dict) or entry.get("op") not in OPS:
            raise InputError("gold entry needs an op of ADD, DEL, or MOD")
        if not entry.get("element"):
            raise InputError("gold entry needs an element id")
        key = _entry_key(entry)
        if key in seen:
            raise InputError(f"duplicate gold entry for {key}")
        seen.add(key)
        entries.append(entry)
    minutes = document.get("minutes")
    if minutes is not None:
        minutes = Fraction(str(minutes))
        if minutes <= 0:
            raise InputError("minutes must be positive")
    return entries, minutes


def _expect_met(adapted: m.QualityModel, entry: dict) -> bool:
    expect = entry.get("expect")
    eid = entry["element"]
    if entry["op"] == "DEL":
        return not adapted.exists(eid)
    if not adapted.exists(eid):
        return False
    if expect is None:
        return True
    el = adapted.get(eid)
    if "value" in expect:
        for fname, wanted in expect["value"].items():
            if fname not in el or el[fname] != wanted:
                return False
        return True
    if "predicate" in expect:
        pred = expect["predicate"]
        fname = pred.get("field")
        if fname not in el:
            return False
        value = el[fname]
        test = pred.get("test")
        if test == "nonempty":
            return bool(value.strip() if isinstance(value, str) else value)
        if test == "empty":
            return not (value.strip() if isinstance(value, str) else value)
        if test == "set":
            return value is not None
        if test == "unset":
            return value is None
        if test == "contains":
            return pred.get("value") in (value or [])
        if test == "equals":
            return value == pred.get("value")
        raise InputError(f"unknown expectation test {test!r}")
    raise InputError("expectation must carry 'value' or 'predicate'")


@dataclass(frozen=True)
class AuditResult:
    completeness: Fraction
    correctness: Fraction
    efficiency: Fraction | None
    matched: list
    correct: list
    missed: list
    extra: list

    def to_json(self) -> dict:
        doc = {
            "completeness": str(self.completeness),
            "completenessDecimal": float(self.completeness),
            "correctness": str(self.correctness),
            "correctnessDecimal": float(self.correctness),
            "matched": self.matched,
            "correct": self.correct,
            "missed": self.missed,
            "extra": self.extra,
        }
        if self.efficiency is not None:
            doc["efficiency"] = str(self.efficiency)
            doc["efficiencyDecimal"] = float(self.efficiency)
        return doc


def audit(
    base: m.QualityModel,
    adapted: m.QualityModel,
    gold: dict,
    minutes=None,
    element_level: bool = True,
) -> AuditResult:
    entries, gold_minutes = parse_gold(gold)
    if minutes is None:
        minutes = gold_minutes
    else:
        minutes = Fraction(str(minutes))
        if minutes <= 0:
            raise InputError("minutes must be positive")
    if not entries:
        raise InputError("gold standard has no entries")

    actual = diff_models(base, adapted, element_level=element_level)
    actual_keys = {_entry_key(a) for a in actual}

    matched, correct, missed = [], [], []
    for entry in entries:
        key = _entry_key(entry)
        if key in actual_keys:
            matched.append(list(key))
            if _expect_met(adapted, entry):
                correct.append(list(key))
        else:
            missed.append(list(key))
    gold_keys = {_entry_key(e) for e in entries}
    extra = [list(k) for k in sorted(actual_keys - gold_keys, key=str)]

    total = len(entries)
    completeness = Fraction(len(matched), total)
    correctness = Fraction(len(correct), total)
    efficiency = None if minutes is None else Fraction(len(correct)) / minutes
    return AuditResult(
        completeness=completeness,
        correctness=correctness,
        efficiency=efficiency,
        matched=matched,
        correct=correct,
        missed=missed,
        extra=extra,
    )
