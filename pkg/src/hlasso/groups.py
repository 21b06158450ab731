"""Group structures mapping groups of variables to column indices.

A group structure is the combinatorial skeleton shared by every fit: an
ordered list of groups, each holding column indices of the design matrix.
Groups may overlap (a variable sitting in several groups), which the
logistic solver supports; the Gaussian solvers require a partition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = ["GroupStructure", "build_group_structure"]


@dataclass(frozen=True)
class GroupStructure:
    """Ordered groups of variable indices over ``n_vars`` columns.

    Attributes
    ----------
    groups : tuple of tuple of int
        One tuple of 0-based column indices per group.
    n_vars : int
        Total number of variables P; every index in [0, P) belongs to at
        least one group.
    overlapping : bool
        True iff some variable appears in two or more groups. When False
        the groups partition [0, P).
    group_ids : tuple of str
        Caller-supplied labels, one per group.
    """

    groups: tuple[tuple[int, ...], ...]
    n_vars: int
    overlapping: bool
    group_ids: tuple[str, ...] = field(default=())

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(g) for g in self.groups], dtype=np.int64)

    def group_of(self) -> np.ndarray:
        """Variable index -> group index map. Only defined for partitions."""
        if self.overlapping:
            raise ValueError("group_of is undefined for overlapping structures")
        out = np.full(self.n_vars, -1, dtype=np.int64)
        for k, members in enumerate(self.groups):
            out[list(members)] = k
        return out

    def membership_counts(self) -> np.ndarray:
        """Number of groups each variable belongs to (all 1 for partitions)."""
        counts = np.zeros(self.n_vars, dtype=np.int64)
        for members in self.groups:
            counts[list(members)] += 1
        return counts

    def member_arrays(self) -> list[np.ndarray]:
        return [np.asarray(g, dtype=np.int64) for g in self.groups]

    def subset(self, keep: Sequence[int]) -> "GroupStructure":
        """Structure restricted to the columns in ``keep`` (reindexed 0..len-1).

        Groups whose members are all dropped disappear; remaining groups keep
        their relative order and labels.
        """
        keep = sorted(set(int(j) for j in keep))
        remap = {old: new for new, old in enumerate(keep)}
        spec = []
        for label, members in zip(self._labels(), self.groups):
            reduced = [remap[j] for j in members if j in remap]
            if reduced:
                spec.append((label, reduced))
        if not spec:
            raise ValueError("subset removes every group")
        return build_group_structure(spec, n_vars=len(keep))

    def _labels(self) -> tuple[str, ...]:
        if self.group_ids:
            return self.group_ids
        return tuple(str(k) for k in range(self.n_groups))


def build_group_structure(
    spec: Iterable[tuple[str | int, Sequence[int]]] | Sequence[Sequence[int]],
    n_vars: int,
) -> GroupStructure:
    """Validate a group specification and build a :class:`GroupStructure`.

    Parameters
    ----------
    spec
        Either pairs ``(group_id, [variable indices])`` or bare index lists
        (labelled by position).
    n_vars
        Total variable count P.

    Raises
    ------
    ValueError
        On an empty group, an out-of-range index, a duplicate index inside
        one group, or a variable not assigned to any group.
    """
    if n_vars < 1:
        raise ValueError("n_vars must be at least 1")
    pairs: list[tuple[str, list[int]]] = []
    for k, entry in enumerate(spec):
        if (
            isinstance(entry, tuple)
            and len(entry) == 2
            and isinstance(entry[1], (list, tuple, np.ndarray))
        ):
            label, members = entry
        else:
            label, members = k, entry
        members = [int(j) for j in members]
        if not members:
            raise ValueError(f"group {label!r} is empty")
        for j in members:
            if j < 0 or j >= n_vars:
                raise ValueError(
                    f"group {label!r} references variable index {j}, "
                    f"outside [0, {n_vars})"
                )
        if len(set(members)) != len(members):
            raise ValueError(f"group {label!r} lists a variable more than once")
        pairs.append((str(label), members))
    if not pairs:
        raise ValueError("at least one group is required")

    counts = np.zeros(n_vars, dtype=np.int64)
    for _, members in pairs:
        counts[members] += 1
    uncovered = np.flatnonzero(counts == 0)
    if uncovered.size:
        raise ValueError(
            f"variable not assigned to any group: indices {uncovered.tolist()}"
        )
    overlapping = bool((counts > 1).any())
    return GroupStructure(
        groups=tuple(tuple(m) for _, m in pairs),
        n_vars=int(n_vars),
        overlapping=overlapping,
        group_ids=tuple(label for label, _ in pairs),
    )
