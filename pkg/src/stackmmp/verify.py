"""Numerical certification of exceptional collections.

Every ordered pair of objects gets a Hom-table check: backward pairs must
vanish in all degrees, diagonal pairs must be one-dimensional in degree 0,
and forward pairs are inspected for strongness.  Pairs whose Ext tables
cannot be pinned down exactly (spectral-sequence ambiguity, or pushforwards
on different strata) are reported as unchecked with a reason, never guessed.
Completeness is certified only as cardinality = K-theory rank.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cohomology import (
    ExtVerdict,
    PushforwardData,
    hom_line_bundles,
    hom_pushforward_line,
    hom_pushforwards,
    hom_with_pushforward,
)
from .fans import k0_rank


@dataclass(frozen=True)
class PairEntry:
    i: int
    j: int
    status: str       # exceptional | semiorthogonal-ok | strong-ok | violation | unchecked
    table: tuple = None
    reason: str = None

    def to_dict(self):
        d = {"i": self.i, "j": self.j, "status": self.status}
        if self.table is not None:
            d["table"] = list(self.table)
        if self.reason is not None:
            d["reason"] = self.reason
        return d


@dataclass(frozen=True)
class VerificationReport:
    entries: tuple
    cardinality: int
    k0: int
    complete: bool          # cardinality == K-theory rank
    exceptional: bool       # no violations, no unchecked
    strong: bool            # additionally all forward pairs in degree 0 only
    violations: int
    unchecked: int

    def to_dict(self):
        return {
            "entries": [e.to_dict() for e in self.entries],
            "cardinality": self.cardinality,
            "k0_rank": self.k0,
            "complete": self.complete,
            "exceptional": self.exceptional,
            "strong": self.strong,
            "violations": self.violations,
            "unchecked": self.unchecked,
        }

    def summary(self):
        lines = [
            f"objects: {self.cardinality} (K-theory rank {self.k0})",
            f"complete (cardinality proxy): {self.complete}",
            f"exceptional: {self.exceptional}",
            f"strong: {self.strong}",
            f"violations: {self.violations}  unchecked: {self.unchecked}",
        ]
        for e in self.entries:
            if e.status in ("violation", "unchecked"):
                extra = f" table={list(e.table)}" if e.table else ""
                extra += f" ({e.reason})" if e.reason else ""
                lines.append(f"  pair ({e.i}, {e.j}): {e.status}{extra}")
        return "\n".join(lines)


def _as_pushforward(obj):
    return PushforwardData(
        stratum=obj.stratum, star_class=obj.star_class, twist=obj.k
    )


def _pair_table(fan, a, b, method):
    """Hom table (or ExtVerdict) from object a to object b."""
    if a.shape == "line_bundle" and b.shape == "line_bundle":
        return hom_line_bundles(fan, a.k, b.k, method)
    if a.shape == "line_bundle":
        return hom_with_pushforward(fan, a.k, _as_pushforward(b), method)
    if b.shape == "line_bundle":
        return hom_pushforward_line(fan, _as_pushforward(a), b.k, method)
    if tuple(sorted(a.stratum)) != tuple(sorted(b.stratum)):
        return None
    return hom_pushforwards(fan, _as_pushforward(a), _as_pushforward(b), method)


def verify_collection(fan, coll, method="weight"):
    objs = coll.objects
    m = len(objs)
    entries = []
    strong = True
    for i in range(m):
        for j in range(m):
            res = _pair_table(fan, objs[i], objs[j], method)
            if res is None:
                entries.append(PairEntry(
                    i, j, "unchecked",
                    reason="pushforward objects on different strata",
                ))
                strong = False
                continue
            if isinstance(res, ExtVerdict):
                if res.status == "indeterminate":
                    entries.append(PairEntry(
                        i, j, "unchecked",
                        reason="Ext spectral sequence not determined at the "
                               "first page",
                    ))
                    strong = False
                    continue
                table = res.table
            else:
                table = tuple(res)
            entries.append(_classify(i, j, table))
            if i < j and any(table[1:]):
                strong = False
            if entries[-1].status == "violation":
                strong = False
    violations = sum(1 for e in entries if e.status == "violation")
    unchecked = sum(1 for e in entries if e.status == "unchecked")
    k0 = k0_rank(fan)
    return VerificationReport(
        entries=tuple(entries),
        cardinality=m,
        k0=k0,
        complete=(m == k0),
        exceptional=(violations == 0 and unchecked == 0),
        strong=(violations == 0 and unchecked == 0 and strong),
        violations=violations,
        unchecked=unchecked,
    )


def _classify(i, j, table):
    if i == j:
        ok = table[0] == 1 and not any(table[1:])
        return PairEntry(i, j, "exceptional" if ok else "violation", table=table)
    if i > j:
        ok = not any(table)
        return PairEntry(
            i, j, "semiorthogonal-ok" if ok else "violation", table=table
        )
    if any(table[1:]):
        return PairEntry(i, j, "semiorthogonal-ok", table=table)
    return PairEntry(i, j, "strong-ok", table=table)
