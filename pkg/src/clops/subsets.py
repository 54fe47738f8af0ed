"""Bitmask encoding of subsets of a ground set {1..n}.

A subset X of {1..n} is an int whose bit i-1 is set iff vertex i is in X.
All set algebra is plain bitwise arithmetic; vertices are 1-indexed in the
public API and 0-indexed in bit positions.
"""

from __future__ import annotations

from typing import Iterable, Iterator

MAX_GROUND_SET = 20
# Pairwise subset sweeps are 4^n; refuse beyond this unless overridden.
DEFAULT_SWEEP_LIMIT = 13


def full_mask(n: int) -> int:
    return (1 << n) - 1


def check_mask(bits: int, n: int) -> int:
    if not 0 <= bits < (1 << n):
        raise ValueError(f"mask {bits:#x} out of range for ground set of size {n}")
    return bits


def mask_of(vertices: Iterable[int], n: int) -> int:
    bits = 0
    for v in vertices:
        if not 1 <= v <= n:
            raise ValueError(f"vertex {v} out of range 1..{n}")
        bits |= 1 << (v - 1)
    return bits


def vertices_of(bits: int) -> list[int]:
    out = []
    v = 1
    while bits:
        if bits & 1:
            out.append(v)
        bits >>= 1
        v += 1
    return out


def card(bits: int) -> int:
    return bits.bit_count()


def singletons(n: int) -> Iterator[int]:
    for i in range(n):
        yield 1 << i


def all_masks(n: int) -> range:
    return range(1 << n)


def masks_by_cardinality(n: int, max_card: int | None = None) -> Iterator[int]:
    """All masks sorted by popcount, then numerically (Gosper's hack).

    The numeric tie-break makes every ``min``-style sweep deterministic; it
    never touches masks above the requested cardinality, so it stays cheap on
    large ground sets when only small generating sets are needed.
    """
    top = n if max_card is None else min(max_card, n)
    limit = 1 << n
    yield 0
    for c in range(1, top + 1):
        m = (1 << c) - 1
        while m < limit:
            yield m
            low = m & -m
            ripple = m + low
            m = ripple | (((m ^ ripple) >> 2) // low)


def submasks(bits: int) -> Iterator[int]:
    """All submasks of ``bits``, including 0 and ``bits`` itself."""
    sub = bits
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & bits


def format_set(bits: int) -> str:
    return "{" + ",".join(str(v) for v in vertices_of(bits)) + "}"


def parse_set(text: str, n: int) -> int:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"malformed set literal: {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return 0
    try:
        vertices = [int(tok) for tok in inner.split(",")]
    except ValueError as exc:
        raise ValueError(f"malformed set literal: {text!r}") from exc
    return mask_of(vertices, n)
