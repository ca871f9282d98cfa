"""Finite categories presented by explicit composition tables.

Objects and morphisms are named by strings. The composition table is
total on composable pairs and validated exhaustively; every reported
defect names the offending cells. Constructions that iterate over a
category always follow the stored object and morphism order, so
everything built on top is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotACategory, NotAssociative


@dataclass(frozen=True)
class FinCat:
    objects: tuple[str, ...]
    morphs: tuple[str, ...]
    src: dict[str, str]
    tgt: dict[str, str]
    ids: dict[str, str]
    table: dict[tuple[str, str], str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "morphs", tuple(self.morphs))
        object.__setattr__(self, "src", dict(self.src))
        object.__setattr__(self, "tgt", dict(self.tgt))
        object.__setattr__(self, "ids", dict(self.ids))
        object.__setattr__(self, "table", dict(self.table))
        if len(set(self.objects)) != len(self.objects):
            raise NotACategory("duplicate object name")
        if len(set(self.morphs)) != len(self.morphs):
            raise NotACategory("duplicate morphism name")
        obj_set = set(self.objects)
        morph_set = set(self.morphs)
        for table_name, ends in (("src", self.src), ("tgt", self.tgt)):
            if set(ends) != morph_set:
                raise NotACategory(f"{table_name} map does not cover the morphisms exactly")
            for m, o in ends.items():
                if o not in obj_set:
                    raise NotACategory(f"{table_name}[{m}] = {o} is not an object")
        if set(self.ids) != obj_set:
            raise NotACategory("identity table does not cover the objects exactly")
        for o, m in self.ids.items():
            if m not in morph_set:
                raise NotACategory(f"identity of {o} is not a morphism")
            if self.src[m] != o or self.tgt[m] != o:
                raise NotACategory(f"identity of {o} has wrong ends")
        composable = {
            (g, f)
            for g in self.morphs
            for f in self.morphs
            if self.tgt[f] == self.src[g]
        }
        if set(self.table) != composable:
            missing = sorted(composable - set(self.table))
            extra = sorted(set(self.table) - composable)
            witness = missing[0] if missing else extra[0]
            raise NotACategory(f"composition table mismatch at {witness}")
        for (g, f), c in self.table.items():
            if c not in morph_set:
                raise NotACategory(f"composite of ({g}, {f}) is not a morphism")
            if self.src[c] != self.src[f] or self.tgt[c] != self.tgt[g]:
                raise NotACategory(f"composite of ({g}, {f}) has wrong ends")
        for f in self.morphs:
            if self.table[(self.ids[self.tgt[f]], f)] != f:
                raise NotACategory(f"left unit law fails at {f}")
            if self.table[(f, self.ids[self.src[f]])] != f:
                raise NotACategory(f"right unit law fails at {f}")
        for h in self.morphs:
            for g in self.morphs:
                if self.src[h] != self.tgt[g]:
                    continue
                hg = self.table[(h, g)]
                for f in self.morphs:
                    if self.src[g] != self.tgt[f]:
                        continue
                    if self.table[(h, self.table[(g, f)])] != self.table[(hg, f)]:
                        raise NotAssociative(f"associativity fails at ({h}, {g}, {f})")

    # -- queries -------------------------------------------------------

    def comp(self, g: str, f: str) -> str:
        """Composite g after f."""
        if self.tgt[f] != self.src[g]:
            raise NotACategory(f"({g}, {f}) is not composable")
        return self.table[(g, f)]

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        """Morphisms a -> b in stored morphism order."""
        return tuple(m for m in self.morphs if self.src[m] == a and self.tgt[m] == b)

    def ident(self, obj: str) -> str:
        return self.ids[obj]

    def is_identity(self, m: str) -> bool:
        return self.ids[self.src[m]] == m

    def nonidentity(self) -> tuple[str, ...]:
        return tuple(m for m in self.morphs if not self.is_identity(m))

    def op(self) -> "FinCat":
        return FinCat(
            self.objects,
            self.morphs,
            dict(self.tgt),
            dict(self.src),
            dict(self.ids),
            {(g, f): self.table[(f, g)] for (f, g) in self.table},
        )


# -- builders ---------------------------------------------------------


def discrete_category(names: tuple[str, ...] | list[str]) -> FinCat:
    names = tuple(names)
    ids = {o: f"id_{o}" for o in names}
    return FinCat(
        names,
        tuple(ids[o] for o in names),
        {ids[o]: o for o in names},
        {ids[o]: o for o in names},
        ids,
        {(ids[o], ids[o]): ids[o] for o in names},
    )


def poset_category(names: tuple[str, ...] | list[str], leq: list[tuple[str, str]]) -> FinCat:
    """Category of a partial order: one morphism a -> b whenever a <= b.

    leq lists generating pairs; the reflexive-transitive closure is taken,
    and a nontrivial cycle is rejected.
    """
    names = tuple(names)
    below = {a: {a} for a in names}
    for a, b in leq:
        if a not in below or b not in below:
            raise NotACategory(f"order pair ({a}, {b}) mentions an unknown element")
        below[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in names:
            grown = set(below[a])
            for b in below[a]:
                grown |= below[b]
            if grown != below[a]:
                below[a] = grown
                changed = True
    for a in names:
        for b in below[a]:
            if a != b and a in below[b]:
                raise NotACategory(f"order cycle between {a} and {b}")
    morphs = tuple(f"{a}->{b}" for a in names for b in names if b in below[a])
    src = {f"{a}->{b}": a for a in names for b in names if b in below[a]}
    tgt = {f"{a}->{b}": b for a in names for b in names if b in below[a]}
    ids = {a: f"{a}->{a}" for a in names}
    table = {}
    for g in morphs:
        for f in morphs:
            if tgt[f] == src[g]:
                table[(g, f)] = f"{src[f]}->{tgt[g]}"
    return FinCat(names, morphs, src, tgt, ids, table)


def chain_category(n: int) -> FinCat:
    """The linear order 0 -> 1 -> ... -> n."""
    names = [str(i) for i in range(n + 1)]
    return poset_category(names, [(str(i), str(i + 1)) for i in range(n)])


def arrow_category() -> FinCat:
    return chain_category(1)


def span_category() -> FinCat:
    """Two legs out of a common source: a <- c -> b."""
    return poset_category(("a", "b", "c"), [("c", "a"), ("c", "b")])


def cospan_category() -> FinCat:
    """Two legs into a common target: a -> c <- b."""
    return poset_category(("a", "b", "c"), [("a", "c"), ("b", "c")])


def parallel_pair_category() -> FinCat:
    """Two objects with two parallel non-identity arrows."""
    return FinCat(
        ("a", "b"),
        ("id_a", "id_b", "u", "v"),
        {"id_a": "a", "id_b": "b", "u": "a", "v": "a"},
        {"id_a": "a", "id_b": "b", "u": "b", "v": "b"},
        {"a": "id_a", "b": "id_b"},
        {
            ("id_a", "id_a"): "id_a",
            ("id_b", "id_b"): "id_b",
            ("u", "id_a"): "u",
            ("v", "id_a"): "v",
            ("id_b", "u"): "u",
            ("id_b", "v"): "v",
        },
    )


def monoid_category(elements: tuple[str, ...] | list[str], unit: str, mult: dict[tuple[str, str], str]) -> FinCat:
    """One-object category whose morphisms form the given monoid."""
    elements = tuple(elements)
    return FinCat(
        ("*",),
        elements,
        {e: "*" for e in elements},
        {e: "*" for e in elements},
        {"*": unit},
        dict(mult),
    )


def cyclic_group_category(order: int) -> FinCat:
    """One-object category of the cyclic group of the given order."""
    elements = [f"g{i}" for i in range(order)]
    mult = {
        (f"g{i}", f"g{j}"): f"g{(i + j) % order}"
        for i in range(order)
        for j in range(order)
    }
    return monoid_category(elements, "g0", mult)
