"""graph6 encoding/decoding and sparse6 decoding.

graph6 layout: an order prefix N(n) followed by the upper triangle of the
adjacency matrix in column order (0,1), (0,2), (1,2), (0,3), ... packed six
bits per byte, each byte offset by 63. sparse6 (leading ``:``) is accepted
on input only.
"""

from __future__ import annotations

from .errors import ParseError
from .graph import Graph

HEADER6 = ">>graph6<<"
HEADER_S6 = ">>sparse6<<"


def _encode_order(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126, 63 + (n >> 12 & 63), 63 + (n >> 6 & 63), 63 + (n & 63)])
    if n < 68719476736:
        return bytes([126, 126] + [63 + (n >> s & 63) for s in (30, 24, 18, 12, 6, 0)])
    raise ValueError(f"order {n} too large for graph6")


def _decode_order(data: bytes, start: int) -> tuple[int, int]:
    """Return (n, index just past the order field)."""

    def sextet(i):
        if i >= len(data):
            raise ParseError("truncated order field", i)
        b = data[i]
        if not 63 <= b <= 126:
            raise ParseError(f"byte {b!r} outside the printable range 63..126", i)
        return b - 63

    first = sextet(start)
    if first < 63:
        return first, start + 1
    if start + 1 < len(data) and data[start + 1] == 126:
        n = 0
        for i in range(start + 2, start + 8):
            n = n << 6 | sextet(i)
        return n, start + 8
    n = 0
    for i in range(start + 1, start + 4):
        n = n << 6 | sextet(i)
    return n, start + 4


def encode_graph6(g: Graph) -> str:
    out = bytearray(_encode_order(g.n))
    acc = nbits = 0
    for j in range(1, g.n):
        row = g.adj(j)
        for i in range(j):
            acc = acc << 1 | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return out.decode("ascii")


def parse_graph6(text: str | bytes) -> Graph:
    """Decode one graph6 (or sparse6, if it starts with ``:``) line."""
    data = text.encode("ascii", errors="replace") if isinstance(text, str) else bytes(text)
    data = data.rstrip(b"\r\n")
    start = 0
    if data.startswith(HEADER6.encode()):
        start = len(HEADER6)
    elif data.startswith(HEADER_S6.encode()):
        start = len(HEADER_S6)
    if start >= len(data):
        raise ParseError("empty graph6 line", start)
    if data[start] == ord(":"):
        return _parse_sparse6(data, start + 1)
    n, pos = _decode_order(data, start)
    need = (n * (n - 1) // 2 + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise ParseError(f"expected {need} adjacency bytes for order {n}, found {len(body)}",
                         pos + min(len(body), need))
    rows = [0] * n
    i, j = 0, 1
    total = n * (n - 1) // 2
    for k, b in enumerate(body):
        if not 63 <= b <= 126:
            raise ParseError(f"byte {b!r} outside the printable range 63..126", pos + k)
        v = b - 63
        for s in range(5, -1, -1):
            idx = 6 * k + 5 - s
            bit = v >> s & 1
            if idx >= total:
                if bit:
                    raise ParseError("non-zero padding bits", pos + k)
                continue
            if bit:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            i += 1
            if i == j:
                i, j = 0, j + 1
    return Graph(n, rows, _check=False)


def _parse_sparse6(data: bytes, start: int) -> Graph:
    n, pos = _decode_order(data, start)
    k = max(1, (n - 1).bit_length())
    for off in range(pos, len(data)):
        if not 63 <= data[off] <= 126:
            raise ParseError(f"byte {data[off]!r} outside the printable range 63..126", off)
    stream = []
    for b in data[pos:]:
        v = b - 63
        stream.extend(v >> s & 1 for s in range(5, -1, -1))
    rows = [0] * n
    v = 0
    p = 0
    while p + 1 + k <= len(stream):
        b = stream[p]
        x = 0
        for bit in stream[p + 1:p + 1 + k]:
            x = x << 1 | bit
        p += 1 + k
        if b:
            v += 1
        if x >= n or v >= n:
            break
        if x > v:
            v = x
        else:
            if x == v:
                raise ParseError("sparse6 self-loop is not a simple graph", pos + p // 6)
            if rows[x] >> v & 1:
                raise ParseError("sparse6 multi-edge is not a simple graph", pos + p // 6)
            rows[x] |= 1 << v
            rows[v] |= 1 << x
    return Graph(n, rows, _check=False)
