"""Typed quality-model graph: element kinds, primitives, referential integrity.

A model holds two trees (quality aspects, entity types) and flat collections
of the remaining seven element kinds.  Elements are stored as plain dicts
keyed by the wire field names, validated against a per-kind schema.  Owned
reference fields are writable; their inverses (``refinedBy``, ``children``,
``influencedBy``, ``isQuantified``, ``groupedImpacts``, ``evaluatedBy``) are
derived and maintained automatically, so bidirectional symmetry can never be
broken through the primitives.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

from .errors import (
    BlockedDeleteError,
    InputError,
    IntegrityError,
    KindError,
    NotFoundError,
)

SCHEMA_VERSION = "qm-adapt/1"

QUALITY_ASPECT = "qualityAspects"
ENTITY_TYPE = "entityTypes"
PROPERTY = "properties"
FACTOR = "factors"
IMPACT = "impacts"
QUALITY_REQUIREMENT = "qualityRequirements"
MEASURE = "measures"
IMPACT_EVALUATION = "impactEvaluations"
QUALITY_ASPECT_EVALUATION = "qualityAspectEvaluations"

KINDS = (
    QUALITY_ASPECT,
    ENTITY_TYPE,
    PROPERTY,
    FACTOR,
    IMPACT,
    QUALITY_REQUIREMENT,
    MEASURE,
    IMPACT_EVALUATION,
    QUALITY_ASPECT_EVALUATION,
)

EVALUATION_KINDS = (MEASURE, IMPACT_EVALUATION, QUALITY_ASPECT_EVALUATION)

ID_PREFIX = {
    QUALITY_ASPECT: "qa",
    ENTITY_TYPE: "et",
    PROPERTY: "pr",
    FACTOR: "fa",
    IMPACT: "im",
    QUALITY_REQUIREMENT: "qr",
    MEASURE: "me",
    IMPACT_EVALUATION: "ie",
    QUALITY_ASPECT_EVALUATION: "qe",
}

EFFECTS = ("positive", "negative")


@dataclass(frozen=True)
class FieldSpec:
    ftype: str  # "str" | "bool" | "enum" | "tags" | "strset" | "ref" | "refset" | "reflist"
    ref_kinds: tuple[str, ...] = ()
    required: bool = False  # cardinality-1; may be null only while stub=True
    derived: bool = False  # maintained as an inverse, not writable
    inverse: str | None = None  # derived field on the referenced element
    single_inverse: bool = False  # inverse holds at most one id
    enum: tuple[str, ...] = ()

    def default(self):
        if self.ftype in ("refset", "reflist", "strset"):
            return []
        if self.ftype == "tags":
            return {}
        if self.ftype == "bool":
            return False
        if self.ftype == "ref":
            return None
        if self.ftype == "enum":
            return self.enum[0]
        return ""


SCHEMA: dict[str, dict[str, FieldSpec]] = {
    QUALITY_ASPECT: {
        "name": FieldSpec("str"),
        "description": FieldSpec("str"),
        "parent": FieldSpec("ref", (QUALITY_ASPECT,), inverse="refinedBy"),
        "viewpoints": FieldSpec("strset"),
        "stub": FieldSpec("bool"),
        "refinedBy": FieldSpec("reflist", (QUALITY_ASPECT,), derived=True),
        "influencedBy": FieldSpec("refset", (IMPACT,), derived=True),
        "evaluatedBy": FieldSpec("ref", (QUALITY_ASPECT_EVALUATION,), derived=True),
    },
    ENTITY_TYPE: {
        "name": FieldSpec("str"),
        "description": FieldSpec("str"),
        "parent": FieldSpec("ref", (ENTITY_TYPE,), inverse="children"),
        "stub": FieldSpec("bool"),
        "children": FieldSpec("reflist", (ENTITY_TYPE,), derived=True),
    },
    PROPERTY: {
        "name": FieldSpec("str"),
        "description": FieldSpec("str"),
    },
    FACTOR: {
        "name": FieldSpec("str"),
        "description": FieldSpec("str"),
        "entityType": FieldSpec("ref", (ENTITY_TYPE,), required=True),
        "property": FieldSpec("ref", (PROPERTY,), required=True),
        "tags": FieldSpec("tags"),
        "stub": FieldSpec("bool"),
        "isQuantified": FieldSpec("refset", (MEASURE,), derived=True),
    },
    IMPACT: {
        "factor": FieldSpec("ref", (FACTOR,), required=True),
        "qualityAspect": FieldSpec(
            "ref", (QUALITY_ASPECT,), required=True, inverse="influencedBy"
        ),
        "requirement": FieldSpec(
            "ref", (QUALITY_REQUIREMENT,), inverse="groupedImpacts"
        ),
        "effect": FieldSpec("enum", enum=EFFECTS),
        "justification": FieldSpec("str"),
        "evaluatedBy": FieldSpec("ref", (IMPACT_EVALUATION,), derived=True),
    },
    QUALITY_REQUIREMENT: {
        "name": FieldSpec("str"),
        "description": FieldSpec("str"),
        "groupedImpacts": FieldSpec("refset", (IMPACT,), derived=True),
    },
    MEASURE: {
        "name": FieldSpec("str"),
        "measurementRule": FieldSpec("str"),
        "scale": FieldSpec("str"),
        "quantifies": FieldSpec("refset", (FACTOR,), inverse="isQuantified"),
        "tags": FieldSpec("tags"),
        "stub": FieldSpec("bool"),
    },
    IMPACT_EVALUATION: {
        "impact": FieldSpec(
            "ref", (IMPACT,), required=True, inverse="evaluatedBy", single_inverse=True
        ),
        "uses": FieldSpec("refset", (MEASURE,)),
        "evaluationRule": FieldSpec("str"),
        "evaluationScale": FieldSpec("str"),
    },
    QUALITY_ASPECT_EVALUATION: {
        "qualityAspect": FieldSpec(
            "ref",
            (QUALITY_ASPECT,),
            required=True,
            inverse="evaluatedBy",
            single_inverse=True,
        ),
        "aggregationRule": FieldSpec("str"),
        "considers": FieldSpec(
            "refset", (IMPACT_EVALUATION, QUALITY_ASPECT_EVALUATION)
        ),
    },
}

# Kinds whose elements may be stubs (placeholders exempt from operational rules).
STUB_KINDS = (QUALITY_ASPECT, ENTITY_TYPE, FACTOR, MEASURE)


def norm(value: str) -> str:
    """Case-insensitive comparison key for names and tag values."""
    return value.strip().casefold()


def normalize_tags(tags) -> dict[str, list[str]]:
    """Canonicalize a tag map: dedup case-insensitively, sort values."""
    if not isinstance(tags, dict):
        raise InputError("tags must be an object of string arrays")
    out = {}
    for dim, values in tags.items():
        if not isinstance(values, (list, tuple)) or not values:
            raise InputError(f"tag dimension {dim!r} must be a non-empty array")
        seen = {}
        for v in values:
            if not isinstance(v, str):
                raise InputError(f"tag value for {dim!r} must be a string")
            seen.setdefault(norm(v), v)
        out[dim.strip()] = sorted(seen.values(), key=norm)
    return out


def tags_compatible(tags: dict, context: dict) -> bool:
    """True if an element's tags admit use in the given application context.

    An element tag constrains applicability to the listed values of that
    dimension; an untagged dimension places no constraint.  The context is
    read closed-world: a dimension the context does not declare cannot
    satisfy a constraint on it.
    """
    ctx = {norm(d): {norm(v) for v in vs} for d, vs in context.items()}
    for dim, values in tags.items():
        allowed = ctx.get(norm(dim))
        if allowed is None or not allowed.intersection(norm(v) for v in values):
            return False
    return True


def _sorted_ids(ids) -> list[str]:
    return sorted(set(ids))


class QualityModel:
    """The element graph.  Mutating primitives keep structural invariants."""

    def __init__(self, name: str, version: str = "0"):
        if not name:
            raise InputError("model name must be non-empty")
        self.meta: dict = {"name": name, "version": version}
        self.goal: dict | None = None
        self.provenance: str = ""
        self.next_id: int = 1
        self.elements: dict[str, dict[str, dict]] = {k: {} for k in KINDS}

    # ---- lookup -----------------------------------------------------------

    def exists(self, element_id: str) -> bool:
        return any(element_id in coll for coll in self.elements.values())

    def kind_of(self, element_id: str) -> str:
        for kind, coll in self.elements.items():
            if element_id in coll:
                return kind
        raise NotFoundError(f"no element {element_id!r}")

    def get(self, element_id: str) -> dict:
        for coll in self.elements.values():
            if element_id in coll:
                return coll[element_id]
        raise NotFoundError(f"no element {element_id!r}")

    def all_ids(self, kind: str) -> list[str]:
        return sorted(self.elements[kind])

    def element_count(self) -> int:
        return sum(len(c) for c in self.elements.values())

    def display_name(self, element_id: str) -> str:
        el = self.get(element_id)
        return el.get("name") or element_id

    def roots(self, kind: str) -> list[str]:
        """Tree roots of the aspect or entity-type forest, id order."""
        return [i for i in self.all_ids(kind) if self.elements[kind][i]["parent"] is None]

    def artifact_root(self, et_id: str) -> str:
        """Name of the tree root an entity type belongs to."""
        if self.kind_of(et_id) != ENTITY_TYPE:
            raise KindError(f"{et_id} is not an entity type")
        cur = et_id
        seen = set()
        while True:
            el = self.elements[ENTITY_TYPE][cur]
            if el["parent"] is None or cur in seen:
                return el["name"]
            seen.add(cur)
            cur = el["parent"]

    def impacts_of_factor(self, factor_id: str) -> list[str]:
        return sorted(
            i
            for i, el in self.elements[IMPACT].items()
            if el["factor"] == factor_id
        )

    def factors_of_entity_type(self, et_id: str) -> list[str]:
        return sorted(
            i
            for i, el in self.elements[FACTOR].items()
            if el["entityType"] == et_id
        )

    def factors_of_property(self, prop_id: str) -> list[str]:
        return sorted(
            i for i, el in self.elements[FACTOR].items() if el["property"] == prop_id
        )

    def evaluations_using_measure(self, measure_id: str) -> list[str]:
        return sorted(
            i
            for i, el in self.elements[IMPACT_EVALUATION].items()
            if measure_id in el["uses"]
        )

    # ---- primitives -------------------------------------------------------

    def insert(self, kind: str, payload: dict, element_id: str | None = None) -> str:
        if kind not in SCHEMA:
            raise KindError(f"unknown element kind {kind!r}")
        schema = SCHEMA[kind]
        payload = dict(payload)
        explicit_id = payload.pop("id", element_id)
        unknown = [f for f in payload if f not in schema or schema[f].derived]
        if unknown:
            raise InputError(f"unknown or derived field(s) for {kind}: {unknown}")

        element = {f: copy.deepcopy(spec.default()) for f, spec in schema.items()}
        is_stub = bool(payload.get("stub")) and kind in STUB_KINDS
        for fname, value in payload.items():
            spec = schema[fname]
            element[fname] = self._coerce(kind, fname, spec, value)
        for fname, spec in schema.items():
            if spec.required and element[fname] is None and not is_stub:
                raise IntegrityError(f"{kind} requires field {fname!r}")
            if spec.ftype == "ref" and spec.single_inverse and element[fname] is not None:
                target = self.get(element[fname])
                if target[spec.inverse] is not None:
                    raise IntegrityError(
                        f"{element[fname]} already has an evaluation attached"
                    )

        if explicit_id is not None:
            if not isinstance(explicit_id, str) or not explicit_id:
                raise InputError("element id must be a non-empty string")
            if self.exists(explicit_id):
                raise IntegrityError(f"element id {explicit_id!r} already in use")
            new_id = explicit_id
        else:
            new_id = self._fresh_id(kind)

        self.elements[kind][new_id] = element
        self._link_inverses(kind, new_id, element)
        return new_id

    def update(self, element_id: str, fname: str, value) -> list[tuple[str, str]]:
        """Set one field; returns the (element, field) pairs that changed,
        including derived inverses on other elements."""
        kind = self.kind_of(element_id)
        schema = SCHEMA[kind]
        spec = schema.get(fname)
        if spec is None or spec.derived:
            raise InputError(f"unknown or derived field {fname!r} on {kind}")
        element = self.elements[kind][element_id]
        new_value = self._coerce(kind, fname, spec, value)
        old_value = element[fname]
        if new_value == old_value:
            return []

        if fname == "stub" and not new_value:
            for rf, rs in schema.items():
                if rs.required and element[rf] is None:
                    raise IntegrityError(
                        f"cannot clear stub on {element_id}: {rf} is unset"
                    )
        if spec.required and new_value is None and not element.get("stub"):
            raise IntegrityError(f"{fname} is required on non-stub {kind}")
        if fname == "parent" and new_value is not None:
            cur = new_value
            while cur is not None:
                if cur == element_id:
                    raise IntegrityError("parent change would create a cycle")
                cur = self.elements[kind][cur]["parent"]
        if spec.ftype == "ref" and spec.single_inverse and new_value is not None:
            target = self.get(new_value)
            if target[spec.inverse] not in (None, element_id):
                raise IntegrityError(f"{new_value} already has an evaluation attached")

        touched = [(element_id, fname)]
        if spec.inverse:
            touched.extend(
                self._adjust_inverse(spec, element_id, old_value, new_value)
            )
        element[fname] = new_value
        return touched

    def remove(self, element_id: str) -> None:
        kind = self.kind_of(element_id)
        referrers = self.references_to(element_id)
        if referrers:
            raise BlockedDeleteError(element_id, referrers)
        element = self.elements[kind][element_id]
        for fname, spec in SCHEMA[kind].items():
            if spec.inverse and not spec.derived:
                self._adjust_inverse(spec, element_id, element[fname], spec.default())
        del self.elements[kind][element_id]

    def references_to(self, element_id: str) -> list[tuple[str, str]]:
        """All inbound references via owned fields, sorted."""
        if not self.exists(element_id):
            raise NotFoundError(f"no element {element_id!r}")
        refs = []
        for kind, coll in self.elements.items():
            for fname, spec in SCHEMA[kind].items():
                if spec.derived or spec.ftype not in ("ref", "refset", "reflist"):
                    continue
                for rid, el in coll.items():
                    v = el[fname]
                    if (spec.ftype == "ref" and v == element_id) or (
                        spec.ftype != "ref" and element_id in v
                    ):
                        refs.append((rid, fname))
        return sorted(refs)

    def subtree(self, root_id: str) -> list[str]:
        """Depth-first pre-order over a tree node and its descendants."""
        kind = self.kind_of(root_id)
        if kind == QUALITY_ASPECT:
            child_field = "refinedBy"
        elif kind == ENTITY_TYPE:
            child_field = "children"
        else:
            raise KindError(f"{root_id} is not a tree node")
        out = []
        stack = [root_id]
        while stack:
            nid = stack.pop()
            out.append(nid)
            stack.extend(reversed(self.elements[kind][nid][child_field]))
        return out

    def detach_soft_links(self, element_id: str) -> list[tuple[str, str]]:
        """Remove set-membership references to an element about to be deleted
        (measure in ``uses``, factor in ``quantifies``, evaluation in
        ``considers``).  Hard cardinality-1 references must already be gone."""
        kind = self.kind_of(element_id)
        touched = []
        targets = {
            MEASURE: [(IMPACT_EVALUATION, "uses")],
            FACTOR: [(MEASURE, "quantifies")],
            IMPACT_EVALUATION: [(QUALITY_ASPECT_EVALUATION, "considers")],
            QUALITY_ASPECT_EVALUATION: [(QUALITY_ASPECT_EVALUATION, "considers")],
        }.get(kind, [])
        for holder_kind, fname in targets:
            for hid in self.all_ids(holder_kind):
                el = self.elements[holder_kind][hid]
                if element_id in el[fname]:
                    touched.extend(
                        self.update(hid, fname, [x for x in el[fname] if x != element_id])
                    )
        return touched

    # ---- copies and serialization ------------------------------------------

    def clone(self) -> "QualityModel":
        other = QualityModel.__new__(QualityModel)
        other.meta = dict(self.meta)
        other.goal = copy.deepcopy(self.goal)
        other.provenance = self.provenance
        other.next_id = self.next_id
        other.elements = {
            kind: {eid: copy.deepcopy(el) for eid, el in coll.items()}
            for kind, coll in self.elements.items()
        }
        return other

    def to_json(self) -> dict:
        meta = {
            "schema": SCHEMA_VERSION,
            "name": self.meta["name"],
            "version": self.meta["version"],
            "provenance": self.provenance,
            "nextId": self.next_id,
        }
        if self.goal is not None:
            meta["goal"] = copy.deepcopy(self.goal)
        doc = {"meta": meta}
        for kind in KINDS:
            arr = []
            for eid in self.all_ids(kind):
                el = self.elements[kind][eid]
                obj = {"id": eid}
                for fname in sorted(SCHEMA[kind]):
                    obj[fname] = copy.deepcopy(el[fname])
                if kind == ENTITY_TYPE:
                    obj["artifactRoot"] = self.artifact_root(eid)
                arr.append(obj)
            doc[kind] = arr
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "QualityModel":
        if not isinstance(doc, dict) or "meta" not in doc:
            raise InputError("model document must be an object with a 'meta' key")
        meta = doc["meta"]
        model = cls(meta.get("name") or "unnamed", str(meta.get("version", "0")))
        model.goal = copy.deepcopy(meta.get("goal"))
        model.provenance = meta.get("provenance", "")
        model.next_id = int(meta.get("nextId", 1))
        for kind in KINDS:
            for obj in doc.get(kind, []):
                eid = obj.get("id")
                if not eid or not isinstance(eid, str):
                    raise InputError(f"element in {kind} lacks an id")
                if model.exists(eid):
                    raise InputError(f"duplicate element id {eid!r}")
                el = {}
                for fname, spec in SCHEMA[kind].items():
                    if fname in obj:
                        el[fname] = copy.deepcopy(obj[fname])
                    else:
                        el[fname] = copy.deepcopy(spec.default())
                model.elements[kind][eid] = el
        return model

    # ---- internals ----------------------------------------------------------

    def _fresh_id(self, kind: str) -> str:
        while True:
            candidate = f"{ID_PREFIX[kind]}{self.next_id}"
            self.next_id += 1
            if not self.exists(candidate):
                return candidate

    def _coerce(self, kind: str, fname: str, spec: FieldSpec, value):
        if spec.ftype == "str":
            if value is None:
                return ""
            if not isinstance(value, str):
                raise InputError(f"{kind}.{fname} must be a string")
            return value
        if spec.ftype == "bool":
            return bool(value)
        if spec.ftype == "enum":
            if value not in spec.enum:
                raise InputError(f"{kind}.{fname} must be one of {spec.enum}")
            return value
        if spec.ftype == "tags":
            return normalize_tags(value or {})
        if spec.ftype == "strset":
            if not isinstance(value, (list, tuple)):
                raise InputError(f"{kind}.{fname} must be an array of strings")
            seen = {}
            for v in value:
                if not isinstance(v, str):
                    raise InputError(f"{kind}.{fname} entries must be strings")
                seen.setdefault(norm(v), v)
            return sorted(seen.values(), key=norm)
        if spec.ftype == "ref":
            if value is None:
                return None
            self._check_ref(kind, fname, spec, value)
            return value
        if spec.ftype in ("refset", "reflist"):
            if not isinstance(value, (list, tuple)):
                raise InputError(f"{kind}.{fname} must be an array of ids")
            for v in value:
                self._check_ref(kind, fname, spec, v)
            return _sorted_ids(value)
        raise InputError(f"unsupported field type {spec.ftype}")

    def _check_ref(self, kind: str, fname: str, spec: FieldSpec, value):
        if not isinstance(value, str):
            raise InputError(f"{kind}.{fname} must hold element ids")
        if not self.exists(value):
            raise IntegrityError(f"{kind}.{fname} references missing element {value!r}")
        if self.kind_of(value) not in spec.ref_kinds:
            raise KindError(
                f"{kind}.{fname} must reference {spec.ref_kinds}, "
                f"got {self.kind_of(value)}"
            )

    def _link_inverses(self, kind: str, new_id: str, element: dict) -> None:
        for fname, spec in SCHEMA[kind].items():
            if spec.derived or not spec.inverse:
                continue
            self._adjust_inverse(spec, new_id, spec.default(), element[fname])

    def _adjust_inverse(self, spec: FieldSpec, owner_id, old, new) -> list:
        touched = []
        if spec.ftype == "ref":
            old_ids = [] if old is None else [old]
            new_ids = [] if new is None else [new]
        else:
            old_ids, new_ids = list(old), list(new)
        inv = spec.inverse
        for removed in old_ids:
            if removed in new_ids or not self.exists(removed):
                continue
            target = self.get(removed)
            if spec.single_inverse:
                if target[inv] == owner_id:
                    target[inv] = None
            elif owner_id in target[inv]:
                target[inv] = [x for x in target[inv] if x != owner_id]
            touched.append((removed, inv))
        for added in new_ids:
            if added in old_ids:
                continue
            target = self.get(added)
            if spec.single_inverse:
                target[inv] = owner_id
            else:
                inv_spec = SCHEMA[self.kind_of(added)][inv]
                if inv_spec.ftype == "reflist":
                    if owner_id not in target[inv]:
                        target[inv].append(owner_id)
                else:
                    target[inv] = _sorted_ids(target[inv] + [owner_id])
            touched.append((added, inv))
        return touched


# ---- functional wrappers (value-style API over the mutating primitives) ----


def create_model(name: str) -> QualityModel:
    return QualityModel(name)


def insert_element(
    model: QualityModel, kind: str, payload: dict
) -> tuple[QualityModel, str]:
    out = model.clone()
    new_id = out.insert(kind, payload)
    return out, new_id


def remove_element(model: QualityModel, element_id: str) -> QualityModel:
    out = model.clone()
    out.remove(element_id)
    return out


def update_element(
    model: QualityModel, element_id: str, fname: str, value
) -> QualityModel:
    out = model.clone()
    out.update(element_id, fname, value)
    return out


def subtree(model: QualityModel, root_id: str) -> list[str]:
    return model.subtree(root_id)


def references_to(model: QualityModel, element_id: str) -> list[tuple[str, str]]:
    return model.references_to(element_id)
