"""Canonical ordering of network cuts.

Cut ``k`` (1-based, ``1 <= k <= 2**m - 2``) is the party set whose members
are the set bits of ``k``: party ``i`` belongs to ``T_k`` iff bit ``i - 1`` of
``k`` is set. The empty set and the full set are excluded.
"""

from functools import lru_cache

from .exceptions import InvalidParameterError


def cut_count(m: int) -> int:
    """Number of nonempty proper subsets of ``m`` parties."""
    return 2**m - 2


@lru_cache(maxsize=32)
def cut_subsets(m: int) -> tuple[tuple[int, ...], ...]:
    """Return ``(T_1, ..., T_{2^m-2})`` as tuples of 1-based party indices."""
    if m < 2:
        raise InvalidParameterError(f"A network needs at least two parties, got {m}", details={"m": m})
    return tuple(tuple(i + 1 for i in range(m) if k >> i & 1) for k in range(1, 2**m - 1))


def complement(m: int, parties: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(i for i in range(1, m + 1) if i not in parties)


def cut_label(m: int, k: int) -> str:
    """Human label for cut ``k``, e.g. ``"T={1,3}"``."""
    subsets = cut_subsets(m)
    if not 1 <= k <= len(subsets):
        raise InvalidParameterError(f"Cut index {k} outside 1..{len(subsets)}", details={"k": k, "m": m})
    return "T={" + ",".join(str(i) for i in subsets[k - 1]) + "}"
