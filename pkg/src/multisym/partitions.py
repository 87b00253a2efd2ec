"""Set partitions of ``{0, .., n-1}``, the meet operation and block stabilizers.

Elements are 0-based internally. The text form ``{1,2|3,4}`` is 1-based, to
match the usual way of writing partitions of ``[n]``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Sequence


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0, .., n-1}``; ``images[i]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        images = list(range(n))
        images[i], images[j] = j, i
        return cls(tuple(images))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition: ``(s * t)(i) == s(t(i))``."""
        if self.n != other.n:
            raise ValueError("permutations of different degree")
        return Permutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))


def all_permutations(n: int) -> Iterator[Permutation]:
    for images in itertools.permutations(range(n)):
        yield Permutation(images)


@dataclass(frozen=True)
class SetPartition:
    """A partition of ``{0, .., n-1}`` in canonical form.

    Blocks are sorted tuples, ordered by their minimum element, so two
    partitions are equal iff their ``blocks`` are equal.
    """

    blocks: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else -1))
        seen = [x for b in blocks for x in b]
        if any(len(b) == 0 for b in blocks):
            raise ValueError("empty block")
        if sorted(seen) != list(range(self.n)):
            raise ValueError(f"blocks {blocks} do not partition range({self.n})")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_labels(cls, labels: Sequence[Hashable]) -> "SetPartition":
        """Partition by equality of labels: ``i ~ j`` iff ``labels[i] == labels[j]``."""
        groups: dict = {}
        for i, a in enumerate(labels):
            groups.setdefault(a, []).append(i)
        return cls(tuple(tuple(g) for g in groups.values()), len(labels))

    @classmethod
    def parse(cls, text: str) -> "SetPartition":
        """Parse the 1-based form ``{1,2|3,4}``."""
        body = text.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ValueError(f"bad partition {text!r}")
        blocks = [tuple(int(x) - 1 for x in part.split(",")) for part in body[1:-1].split("|")]
        n = sum(len(b) for b in blocks)
        return cls(tuple(blocks), n)

    @classmethod
    def singletons(cls, n: int) -> "SetPartition":
        return cls(tuple((i,) for i in range(n)), n)

    @classmethod
    def whole(cls, n: int) -> "SetPartition":
        return cls((tuple(range(n)),), n)

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return "{" + "|".join(",".join(str(x + 1) for x in b) for b in self.blocks) + "}"

    def block_of(self) -> list[int]:
        """Label vector: position ``i`` holds the index of the block containing ``i``."""
        out = [0] * self.n
        for k, b in enumerate(self.blocks):
            for x in b:
                out[x] = k
        return out


def parti(a: Sequence) -> SetPartition:
    """The partition of positions by equal coordinates of the vector ``a``."""
    if len(a) < 1:
        raise ValueError("empty vector")
    return SetPartition.from_labels(list(a))


def _check_same_n(A: SetPartition, B) -> None:
    if A.n != B.n:
        raise ValueError(f"size mismatch: {A.n} vs {B.n}")


def meet(A: SetPartition, B: SetPartition) -> SetPartition:
    """Nonempty pairwise intersections of blocks of A and B."""
    _check_same_n(A, B)
    a, b = A.block_of(), B.block_of()
    return SetPartition.from_labels(list(zip(a, b)))


def meet_all(partitions: Iterable[SetPartition]) -> SetPartition:
    it = iter(partitions)
    out = next(it)
    for P in it:
        out = meet(out, P)
    return out


def fixes(s: Permutation, A: SetPartition) -> bool:
    """True iff ``s`` maps every block of A onto itself."""
    _check_same_n(A, s)
    lab = A.block_of()
    return all(lab[s(i)] == lab[i] for i in range(A.n))


def refines(A: SetPartition, B: SetPartition) -> bool:
    """True iff every block of A lies inside a block of B."""
    _check_same_n(A, B)
    lab = B.block_of()
    return all(len({lab[x] for x in blk}) == 1 for blk in A.blocks)


def stabilizer_order(A: SetPartition) -> int:
    return math.prod(math.factorial(len(b)) for b in A.blocks)


def min_block(A: SetPartition) -> int:
    return min(len(b) for b in A.blocks)


def stabilizer(A: SetPartition) -> frozenset[Permutation]:
    """All of G_A, by exhaustion over S_n. Only sensible for small n."""
    return frozenset(s for s in all_permutations(A.n) if fixes(s, A))
