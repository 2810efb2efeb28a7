"""Finite graded categories with explicit composition tables.

A category is stored skeletally: dense object indices, dense morphism
indices, one identity per object, and a partial composition table.  The
grading is a length functor into the naturals; the only morphisms of
length 0 are the identities (skeletal normal form).

Categories built from a quiver presentation may be length-truncated:
composites that would exceed the bound are marked out of range and the
`length_bound` attribute records the truncation for downstream verdicts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .homology import ValidationReport


class CategoryError(Exception):
    """Base for structural errors raised by this package."""


class SchemaError(CategoryError):
    """An input document does not match the expected schema."""


class RelationEndpointMismatch(CategoryError):
    """A relation pair joins paths with different endpoints."""


class RelationLengthMismatch(CategoryError):
    """A relation pair joins paths of different total length, breaking the grading."""


class NonCancellative(CategoryError):
    """Congruence closure merged two paths with different endpoints."""


class UnknownObject(CategoryError):
    pass


@dataclass(frozen=True)
class Morphism:
    source: int
    target: int
    length: int
    label: str


class FiniteGradedCategory:
    """Objects 0..n-1, morphisms 0..m-1, composition table, length grading.

    The composition table maps (f, g) with target(f) == source(g) to g o f.
    `length_bound` is None for a complete category; an integer L means the
    table omits composites of length > L (truncated quiver closures).
    Instances are immutable after construction and hash by identity.
    """

    def __init__(
        self,
        object_labels: Sequence[str],
        morphisms: Sequence[Morphism],
        identities: Sequence[int],
        composition: dict[tuple[int, int], int],
        length_bound: Optional[int] = None,
    ):
        self.object_labels = tuple(object_labels)
        self.morphisms = tuple(morphisms)
        self.identities = tuple(identities)
        self.composition = dict(composition)
        self.length_bound = length_bound
        self._cache: dict = {}
        if len(self.identities) != self.num_objects:
            raise CategoryError("need exactly one identity per object")
        for v, i in enumerate(self.identities):
            m = self.morphisms[i]
            if m.source != v or m.target != v:
                raise CategoryError(f"identity of object {v} has endpoints ({m.source},{m.target})")

    @property
    def num_objects(self) -> int:
        return len(self.object_labels)

    @property
    def num_morphisms(self) -> int:
        return len(self.morphisms)

    def source(self, f: int) -> int:
        return self.morphisms[f].source

    def target(self, f: int) -> int:
        return self.morphisms[f].target

    def length(self, f: int) -> int:
        return self.morphisms[f].length

    def label(self, f: int) -> str:
        return self.morphisms[f].label

    def is_identity(self, f: int) -> bool:
        return self.identities[self.morphisms[f].source] == f and self.morphisms[f].source == self.morphisms[f].target

    def compose(self, g: int, f: int) -> Optional[int]:
        """g o f (f applied first), or None if undefined/out of range."""
        return self.composition.get((f, g))

    def hom(self, v: int, w: int) -> list[int]:
        return [i for i, m in enumerate(self.morphisms) if m.source == v and m.target == w]

    def non_identity_morphisms(self) -> list[int]:
        return [i for i in range(self.num_morphisms) if not self.is_identity(i)]

    def max_length(self) -> int:
        return max((m.length for m in self.morphisms), default=0)

    def splittings(self, p: int) -> list[tuple[int, int]]:
        """All pairs (f, g) of non-identity morphisms with g o f == p."""
        cache = self._cache.get("splittings")
        if cache is None:
            cache = {i: [] for i in range(self.num_morphisms)}
            for (f, g), h in self.composition.items():
                if not self.is_identity(f) and not self.is_identity(g):
                    cache[h].append((f, g))
            for lst in cache.values():
                lst.sort()
            self._cache["splittings"] = cache
        return cache[p]

    def object_index(self, label: str) -> int:
        try:
            return self.object_labels.index(label)
        except ValueError:
            raise UnknownObject(f"no object labeled {label!r}") from None

    def morphism_index(self, label: str) -> int:
        for i, m in enumerate(self.morphisms):
            if m.label == label:
                return i
        raise CategoryError(f"no morphism labeled {label!r}")

    def __repr__(self):
        return (
            f"FiniteGradedCategory({self.num_objects} objects, {self.num_morphisms} morphisms"
            + (f", truncated at {self.length_bound})" if self.length_bound is not None else ")")
        )


def validate(cat: FiniteGradedCategory) -> ValidationReport:
    """Check identity laws, associativity, length additivity and the degree-0 normal form.

    Every violation is reported with a witness tuple of morphism ids; an
    empty report means the category is valid on its represented range.
    """
    report = ValidationReport()
    comp = cat.composition
    for i, m in enumerate(cat.morphisms):
        ident = cat.identities[m.source] == i and m.source == m.target
        if m.length == 0 and not ident:
            report.add("degree-zero", (i,), f"non-identity morphism {m.label!r} has length 0")
        if ident and m.length != 0:
            report.add("identity-length", (i,), f"identity {m.label!r} has length {m.length}")
    # identity laws
    for f in range(cat.num_morphisms):
        m = cat.morphisms[f]
        left = comp.get((f, cat.identities[m.target]))
        right = comp.get((cat.identities[m.source], f))
        if left != f:
            report.add("identity-law", (f, cat.identities[m.target]), f"id o {m.label!r} != {m.label!r}")
        if right != f:
            report.add("identity-law", (cat.identities[m.source], f), f"{m.label!r} o id != {m.label!r}")
    # composability domain, endpoints, additivity
    for (f, g), h in comp.items():
        mf, mg, mh = cat.morphisms[f], cat.morphisms[g], cat.morphisms[h]
        if mf.target != mg.source:
            report.add("composability", (f, g), "table entry for a non-composable pair")
            continue
        if mh.source != mf.source or mh.target != mg.target:
            report.add("endpoints", (f, g, h), "composite has wrong endpoints")
        if mh.length != mf.length + mg.length:
            report.add(
                "additivity",
                (f, g),
                f"length({mg.label!r} o {mf.label!r}) = {mh.length} != {mf.length} + {mg.length}",
            )
    bound = cat.length_bound
    for f in range(cat.num_morphisms):
        for g in range(cat.num_morphisms):
            if cat.morphisms[f].target != cat.morphisms[g].source:
                continue
            total = cat.morphisms[f].length + cat.morphisms[g].length
            if (f, g) not in comp and (bound is None or total <= bound):
                report.add("missing-composite", (f, g), "composable pair absent from the table")
    # associativity on every represented triple
    for (f, g), gf in comp.items():
        for h in range(cat.num_morphisms):
            if cat.morphisms[g].target != cat.morphisms[h].source:
                continue
            hg = comp.get((g, h))
            left = comp.get((gf, h))
            right = comp.get((f, hg)) if hg is not None else None
            if hg is None or left is None or right is None:
                continue  # out of truncated range
            if left != right:
                report.add("associativity", (f, g, h), "h o (g o f) != (h o g) o f")
    return report


@dataclass(frozen=True)
class QuiverPresentation:
    """Quiver with commutation-style relations and a truncation bound.

    Relation paths are given left-to-right (first arrow first); both paths
    of a pair must share endpoints and total length.
    """

    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str, str, int], ...]  # (label, source, target, length)
    relation_pairs: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]
    max_length: int

    @staticmethod
    def make(vertices, arrows, relation_pairs=(), max_length=4) -> "QuiverPresentation":
        arrs = []
        for a in arrows:
            if len(a) == 3:
                label, src, tgt = a
                length = 1
            else:
                label, src, tgt, length = a
            if length < 1:
                raise SchemaError(f"arrow {label!r} must have positive length")
            arrs.append((label, src, tgt, length))
        rels = tuple((tuple(p), tuple(q)) for p, q in relation_pairs)
        return QuiverPresentation(tuple(vertices), tuple(arrs), rels, max_length)


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            self.parent[x] = p = self.find(p)
        return p

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # keep the lexicographically smaller representative for determinism
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


def from_quiver(pres: QuiverPresentation) -> FiniteGradedCategory:
    """Path category of a quiver modulo the congruence generated by the relations.

    Paths of length <= max_length are enumerated and identified by
    union-find closure of one-step rewrites u.p.v -> u.q.v; composition is
    concatenation where the result stays within the bound, and out-of-range
    composites leave the table truncated (length_bound records this).
    """
    vindex = {v: i for i, v in enumerate(pres.vertices)}
    if len(vindex) != len(pres.vertices):
        raise SchemaError("duplicate vertex labels")
    aindex: dict[str, int] = {}
    for i, (label, src, tgt, length) in enumerate(pres.arrows):
        if label in aindex:
            raise SchemaError(f"duplicate arrow label {label!r}")
        if src not in vindex or tgt not in vindex:
            raise SchemaError(f"arrow {label!r} references unknown vertex")
        aindex[label] = i
    arrows = [(vindex[src], vindex[tgt], length, label) for label, src, tgt, length in pres.arrows]

    def path_data(labels: Sequence[str]) -> tuple[tuple[int, ...], int, int, int]:
        if not labels:
            raise SchemaError("relation paths must be nonempty")
        ids = []
        for lab in labels:
            if lab not in aindex:
                raise SchemaError(f"relation references unknown arrow {lab!r}")
            ids.append(aindex[lab])
        for a, b in zip(ids, ids[1:]):
            if arrows[a][1] != arrows[b][0]:
                raise SchemaError(f"relation path {list(labels)} is not composable")
        src = arrows[ids[0]][0]
        tgt = arrows[ids[-1]][1]
        tot = sum(arrows[a][2] for a in ids)
        return tuple(ids), src, tgt, tot

    relations = []
    for p_labels, q_labels in pres.relation_pairs:
        p, ps, pt, pl = path_data(p_labels)
        q, qs, qt, ql = path_data(q_labels)
        if (ps, pt) != (qs, qt):
            raise RelationEndpointMismatch(f"relation {p_labels} = {q_labels} has mismatched endpoints")
        if pl != ql:
            raise RelationLengthMismatch(f"relation {p_labels} = {q_labels} has mismatched lengths")
        if max(pl, ql) > pres.max_length:
            raise SchemaError("max_length must cover every relation path")
        relations.append((p, q))

    # enumerate all paths of total length <= max_length, as tuples of arrow ids;
    # the empty path at v is keyed ("id", v) so keys stay unique across vertices
    out_arrows: dict[int, list[int]] = {v: [] for v in range(len(pres.vertices))}
    for i, (src, tgt, length, label) in enumerate(arrows):
        out_arrows[src].append(i)
    info: dict[tuple, tuple[int, int, int]] = {}  # key -> (src, tgt, total length)
    keyed_paths: list[tuple] = []
    for v in range(len(pres.vertices)):
        stack: list[tuple[tuple[int, ...], int, int]] = [((), v, 0)]
        while stack:
            path, at, plen = stack.pop()
            key = path if path else ("id", v)
            info[key] = (v, at, plen)
            keyed_paths.append(key)
            for a in out_arrows[at]:
                alen = arrows[a][2]
                if plen + alen <= pres.max_length:
                    stack.append((path + (a,), arrows[a][1], plen + alen))

    uf = _UnionFind()
    for key in keyed_paths:
        uf.find(key)
    for p, q in relations:
        for w in keyed_paths:
            if w[0] == "id":
                continue
            n, m = len(w), len(p)
            for i in range(n - m + 1):
                if w[i : i + m] == p:
                    w2 = w[:i] + q + w[i + m :]
                    uf.union(w, w2)

    classes: dict = {}
    for key in keyed_paths:
        classes.setdefault(uf.find(key), []).append(key)

    # canonical representative: shortest, then lexicographically smallest
    def rep_key(key):
        if key[0] == "id":
            return (0, key)
        return (len(key), key)

    reps = {root: min(members, key=rep_key) for root, members in classes.items()}

    # consistency of endpoints and length on each class
    for root, members in classes.items():
        datas = {info[m] for m in members}
        srcs = {d[0] for d in datas}
        tgts = {d[1] for d in datas}
        lens = {d[2] for d in datas}
        if len(srcs) > 1 or len(tgts) > 1:
            raise NonCancellative(f"congruence merges paths with different endpoints: {members[:2]}")
        if len(lens) > 1:
            raise RelationLengthMismatch(f"congruence merges paths of different lengths: {members[:2]}")

    def label_of(key) -> str:
        if key[0] == "id":
            return f"id_{pres.vertices[key[1]]}"
        return "∘".join(pres.arrows[a][0] for a in reversed(key))  # composition order

    ordered_roots = sorted(reps, key=lambda r: rep_key(reps[r]))
    mor_of_root = {root: i for i, root in enumerate(ordered_roots)}
    morphisms = []
    for root in ordered_roots:
        src, tgt, plen = info[reps[root]]
        morphisms.append(Morphism(src, tgt, plen, label_of(reps[root])))
    identities = [mor_of_root[uf.find(("id", v))] for v in range(len(pres.vertices))]

    composition: dict[tuple[int, int], int] = {}
    truncated = False
    root_of_path = {key: uf.find(key) for key in keyed_paths}

    def concat(k1, k2):
        # k1 then k2, in path order
        if k1[0] == "id":
            return k2
        if k2[0] == "id":
            return k1
        return k1 + k2

    for r1 in ordered_roots:
        p1 = reps[r1]
        s1, t1, l1 = info[p1]
        for r2 in ordered_roots:
            p2 = reps[r2]
            s2, t2, l2 = info[p2]
            if t1 != s2:
                continue
            if l1 + l2 > pres.max_length:
                truncated = True
                continue
            w = concat(p1, p2)
            composition[(mor_of_root[r1], mor_of_root[r2])] = mor_of_root[root_of_path[w]]

    cat = FiniteGradedCategory(
        pres.vertices,
        morphisms,
        identities,
        composition,
        length_bound=pres.max_length if truncated else None,
    )
    # well-definedness of concatenation on classes is forced by the congruence,
    # but verify on the representatives we actually used
    rep = validate(cat)
    if not rep.ok:
        raise CategoryError(f"quiver closure produced an invalid category:\n{rep}")
    return cat


def opposite(cat: FiniteGradedCategory) -> FiniteGradedCategory:
    """Sources and targets swapped, composition transposed, lengths preserved."""
    morphisms = [Morphism(m.target, m.source, m.length, m.label) for m in cat.morphisms]
    composition = {(g, f): h for (f, g), h in cat.composition.items()}
    return FiniteGradedCategory(cat.object_labels, morphisms, cat.identities, composition, cat.length_bound)


def product(cat_a: FiniteGradedCategory, cat_b: FiniteGradedCategory) -> FiniteGradedCategory:
    """Cartesian product: pair objects and morphisms, add lengths, compose componentwise."""
    nb = cat_b.num_morphisms
    labels = [f"({la},{lb})" for la in cat_a.object_labels for lb in cat_b.object_labels]
    nob = cat_b.num_objects

    def obj(a, b):
        return a * nob + b

    def mor(f, g):
        return f * nb + g

    morphisms = []
    for f, mf in enumerate(cat_a.morphisms):
        for g, mg in enumerate(cat_b.morphisms):
            morphisms.append(
                Morphism(
                    obj(mf.source, mg.source),
                    obj(mf.target, mg.target),
                    mf.length + mg.length,
                    f"({mf.label},{mg.label})",
                )
            )
    identities = [
        mor(cat_a.identities[a], cat_b.identities[b])
        for a in range(cat_a.num_objects)
        for b in range(cat_b.num_objects)
    ]
    composition = {}
    for (f1, g1), h1 in cat_a.composition.items():
        for (f2, g2), h2 in cat_b.composition.items():
            composition[(mor(f1, f2), mor(g1, g2))] = mor(h1, h2)
    bounds = [b for b in (cat_a.length_bound, cat_b.length_bound) if b is not None]
    return FiniteGradedCategory(labels, morphisms, identities, composition, min(bounds) if bounds else None)


def skeletalize(cat: FiniteGradedCategory) -> FiniteGradedCategory:
    """Collapse indiscrete degree-0 components onto their lowest-index object.

    Inputs whose length-0 morphisms connect distinct objects are accepted
    only when each degree-0 component is indiscrete (exactly one morphism
    between any two member objects); the result is the equivalent full
    subcategory on the component representatives, which is skeletal.
    """
    n = cat.num_objects
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    zero_count: dict[tuple[int, int], int] = {}
    for m in cat.morphisms:
        if m.length == 0:
            a, b = find(m.source), find(m.target)
            zero_count[(m.source, m.target)] = zero_count.get((m.source, m.target), 0) + 1
            if a != b:
                parent[max(a, b)] = min(a, b)
    components: dict[int, list[int]] = {}
    for v in range(n):
        components.setdefault(find(v), []).append(v)
    for comp in components.values():
        for a in comp:
            for b in comp:
                if zero_count.get((a, b), 0) != 1:
                    raise CategoryError(
                        "degree-0 part is not indiscrete: objects "
                        f"{cat.object_labels[a]!r}, {cat.object_labels[b]!r} have "
                        f"{zero_count.get((a, b), 0)} morphisms of length 0"
                    )
    reps = sorted(min(comp) for comp in components.values())
    return full_subcategory(cat, reps)


def full_subcategory(cat: FiniteGradedCategory, objects: Iterable[int]) -> FiniteGradedCategory:
    """Restriction to a subset of objects with all morphisms between them."""
    objs = sorted(set(objects))
    omap = {v: i for i, v in enumerate(objs)}
    keep = [i for i, m in enumerate(cat.morphisms) if m.source in omap and m.target in omap]
    mmap = {f: i for i, f in enumerate(keep)}
    morphisms = [
        Morphism(omap[cat.morphisms[f].source], omap[cat.morphisms[f].target], cat.morphisms[f].length, cat.morphisms[f].label)
        for f in keep
    ]
    identities = [mmap[cat.identities[v]] for v in objs]
    composition = {
        (mmap[f], mmap[g]): mmap[h]
        for (f, g), h in cat.composition.items()
        if f in mmap and g in mmap and h in mmap
    }
    labels = [cat.object_labels[v] for v in objs]
    return FiniteGradedCategory(labels, morphisms, identities, composition, cat.length_bound)


# ---------- JSON interchange ----------

def category_to_json(cat: FiniteGradedCategory) -> dict:
    return {
        "objects": list(cat.object_labels),
        "morphisms": [
            {"label": m.label, "src": m.source, "tgt": m.target, "len": m.length} for m in cat.morphisms
        ],
        "compose": sorted([f, g, h] for (f, g), h in cat.composition.items()),
        "length_bound": cat.length_bound,
    }


def category_from_json(doc: dict) -> FiniteGradedCategory:
    """Load the explicit-table format; missing identities and identity
    compositions are synthesized."""
    for key in ("objects", "morphisms"):
        if key not in doc:
            raise SchemaError(f"category document missing key {key!r}")
    labels = [str(x) for x in doc["objects"]]
    if len(set(labels)) != len(labels):
        raise SchemaError("object labels must be unique")

    def obj_ref(x):
        if isinstance(x, int):
            if not 0 <= x < len(labels):
                raise SchemaError(f"object index {x} out of range")
            return x
        if x in labels:
            return labels.index(x)
        raise SchemaError(f"unknown object reference {x!r}")

    morphisms = []
    for entry in doc["morphisms"]:
        if not isinstance(entry, dict):
            raise SchemaError("morphisms must be objects with label/src/tgt/len")
        for key in ("label", "src", "tgt"):
            if key not in entry:
                raise SchemaError(f"morphism entry missing key {key!r}")
        morphisms.append(
            Morphism(obj_ref(entry["src"]), obj_ref(entry["tgt"]), int(entry.get("len", 1)), str(entry["label"]))
        )
    mlabels = [m.label for m in morphisms]
    if len(set(mlabels)) != len(mlabels):
        raise SchemaError("morphism labels must be unique")

    identities = {}
    for i, m in enumerate(morphisms):
        if m.length == 0 and m.source == m.target:
            if m.source in identities:
                raise SchemaError(f"two length-0 endomorphisms at object {labels[m.source]!r}")
            identities[m.source] = i
    for v in range(len(labels)):
        if v not in identities:
            identities[v] = len(morphisms)
            morphisms.append(Morphism(v, v, 0, f"id_{labels[v]}"))

    composition: dict[tuple[int, int], int] = {}
    for triple in doc.get("compose", []):
        if not (isinstance(triple, (list, tuple)) and len(triple) == 3):
            raise SchemaError("compose entries must be [i, j, k] triples")
        f, g, h = (int(x) for x in triple)
        for x in (f, g, h):
            if not 0 <= x < len(morphisms):
                raise SchemaError(f"compose entry references unknown morphism {x}")
        if (f, g) in composition and composition[(f, g)] != h:
            raise SchemaError(f"conflicting compose entries for pair ({f}, {g})")
        composition[(f, g)] = h
    for f, m in enumerate(morphisms):
        composition.setdefault((f, identities[m.target]), f)
        composition.setdefault((identities[m.source], f), f)

    idents = [identities[v] for v in range(len(labels))]
    bound = doc.get("length_bound")
    return FiniteGradedCategory(labels, morphisms, idents, composition, bound)


def quiver_from_json(doc: dict) -> QuiverPresentation:
    for key in ("vertices", "arrows"):
        if key not in doc:
            raise SchemaError(f"quiver document missing key {key!r}")
    arrows = []
    for entry in doc["arrows"]:
        for key in ("label", "src", "tgt"):
            if key not in entry:
                raise SchemaError(f"arrow entry missing key {key!r}")
        arrows.append((str(entry["label"]), str(entry["src"]), str(entry["tgt"]), int(entry.get("len", 1))))
    relations = []
    for pair in doc.get("relations", []):
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise SchemaError("relations must be pairs of label paths")
        relations.append((tuple(str(x) for x in pair[0]), tuple(str(x) for x in pair[1])))
    max_length = int(doc.get("max_length", 4))
    if max_length < 1:
        raise SchemaError("max_length must be >= 1")
    return QuiverPresentation.make([str(v) for v in doc["vertices"]], arrows, relations, max_length)


def load_category(doc: dict) -> FiniteGradedCategory:
    """Dispatch on document shape: explicit table or quiver presentation."""
    if "vertices" in doc:
        return from_quiver(quiver_from_json(doc))
    return category_from_json(doc)


def dumps_category(cat: FiniteGradedCategory) -> str:
    return json.dumps(category_to_json(cat), indent=2, sort_keys=True)
