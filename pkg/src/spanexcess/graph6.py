"""graph6 reader and writer (orders up to 62)."""

from __future__ import annotations

from typing import Iterable, Iterator, TextIO

from .errors import Graph6Error
from .graph import Graph

HEADER = ">>graph6<<"
MAX_ORDER = 62


def _bit_pairs(n: int):
    for j in range(1, n):
        for i in range(j):
            yield i, j


def emit_graph6(g: Graph) -> str:
    if g.n > MAX_ORDER:
        raise ValueError(f"graph6 support is limited to {MAX_ORDER} vertices")
    bits = [1 if g.rows[i] >> j & 1 else 0 for i, j in _bit_pairs(g.n)]
    bits += [0] * (-len(bits) % 6)
    chars = [chr(63 + g.n)]
    for pos in range(0, len(bits), 6):
        value = 0
        for bit in bits[pos:pos + 6]:
            value = value << 1 | bit
        chars.append(chr(63 + value))
    return "".join(chars)


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 string; an optional ``>>graph6<<`` header is skipped.

    Raises :class:`Graph6Error` carrying the offending byte offset.
    """
    s = text.strip("\r\n")
    base = 0
    if s.startswith(HEADER):
        s = s[len(HEADER):]
        base = len(HEADER)
    if not s:
        raise Graph6Error("empty graph6 string", base)
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"byte {ch!r} outside the printable graph6 range", base + pos)
    n = ord(s[0]) - 63
    if n > MAX_ORDER:
        raise Graph6Error("multi-byte order prefix (n > 62) is not supported", base)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(s) - 1 != need:
        raise Graph6Error(f"expected {need} data bytes for order {n}, found {len(s) - 1}",
                          base + (len(s) if len(s) - 1 < need else need + 1))
    rows = [0] * n
    pairs = _bit_pairs(n)
    for idx in range(need):
        value = ord(s[1 + idx]) - 63
        for shift in range(5, -1, -1):
            bitpos = idx * 6 + (5 - shift)
            bit = value >> shift & 1
            if bitpos >= nbits:
                if bit:
                    raise Graph6Error("nonzero padding bits", base + 1 + idx)
                continue
            i, j = next(pairs)
            if bit:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return Graph(n, tuple(rows))


def read_graph6_lines(lines: Iterable[str]) -> Iterator[tuple[str, Graph]]:
    """Yield ``(line, graph)`` for each nonblank line of a graph6 stream."""
    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        yield line, parse_graph6(line)


def write_graph6_lines(graphs: Iterable[Graph], out: TextIO) -> None:
    for g in graphs:
        out.write(emit_graph6(g) + "\n")
