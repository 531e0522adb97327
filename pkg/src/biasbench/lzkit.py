"""LZ76 complexity of bit strings.

The phrase count follows the exhaustive-history parse: each new phrase is the
shortest extension of the current position that has not appeared earlier in
the string (an overlapping occurrence that starts before the phrase is allowed).
A trailing phrase that runs into the end of the string still counts as one.

The parse is done online with a suffix automaton, so the cost is linear in the
string length.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

BitLike = str | Sequence[int] | bytes


def as_bits(s: BitLike) -> str:
    """Normalise ``s`` to a ``'0'/'1'`` string, validating every symbol."""
    if isinstance(s, str):
        bits = s.strip()
    elif isinstance(s, (bytes, bytearray)):
        bits = s.decode("ascii").strip()
    else:
        values = [int(b) for b in s]
        if any(v not in (0, 1) for v in values):
            raise ValueError(f"bit strings may only contain 0 and 1, got {sorted(set(values) - {0, 1})!r}")
        bits = "".join(map(str, values))
    if bits.strip("01"):
        bad = sorted(set(bits) - {"0", "1"})
        raise ValueError(f"bit strings may only contain 0 and 1, got {bad!r}")
    return bits


class _SuffixAutomaton:
    """Incremental suffix automaton over the binary alphabet.

    Transitions live in two flat lists (one per symbol); -1 marks "absent".
    """

    __slots__ = ("length", "link", "to", "last")

    def __init__(self) -> None:
        self.length = [0]
        self.link = [-1]
        self.to = ([-1], [-1])
        self.last = 0

    def extend(self, c: int) -> tuple[int, int] | None:
        """Append symbol ``c``. Returns ``(split_state, clone)`` if a state was cloned."""
        length, link = self.length, self.link
        to_c = self.to[c]
        cur = len(length)
        length.append(length[self.last] + 1)
        link.append(-1)
        self.to[0].append(-1)
        self.to[1].append(-1)
        p = self.last
        while p != -1 and to_c[p] == -1:
            to_c[p] = cur
            p = link[p]
        self.last = cur
        if p == -1:
            link[cur] = 0
            return None
        q = to_c[p]
        if length[p] + 1 == length[q]:
            link[cur] = q
            return None
        clone = len(length)
        length.append(length[p] + 1)
        link.append(link[q])
        self.to[0].append(self.to[0][q])
        self.to[1].append(self.to[1][q])
        while p != -1 and to_c[p] == q:
            to_c[p] = clone
            p = link[p]
        link[q] = clone
        link[cur] = clone
        return q, clone


def lz76_phrase_count(s: BitLike) -> int:
    """Number of phrases in the LZ76 exhaustive-history parse of ``s``."""
    bits = [1 if ch == "1" else 0 for ch in as_bits(s)]
    n = len(bits)
    if n == 0:
        raise ValueError("empty input")

    sam = _SuffixAutomaton()
    to, length = sam.to, sam.length
    built = 0  # automaton holds bits[:built]
    phrases = 0
    i = 0
    while i < n:
        # Longest match of bits[i:i+matched] inside bits[:i+matched-1].
        state, matched = 0, 0
        while True:
            if i + matched == n:
                return phrases + 1
            nxt = to[bits[i + matched]][state]
            if nxt == -1:
                break
            state = nxt
            matched += 1
            split = sam.extend(bits[built])
            built += 1
            if split is not None and state == split[0] and matched <= length[split[1]]:
                state = split[1]
        # Phrase is bits[i:i+matched+1]; bring the automaton up to its end.
        while built <= i + matched:
            sam.extend(bits[built])
            built += 1
        phrases += 1
        i += matched + 1
    return phrases


def lz_complexity(s: BitLike) -> float:
    """Direction-averaged, log2-scaled LZ76 complexity.

    Constant strings get exactly ``log2(len(s))``; everything else gets
    ``log2(len(s)) * (N(s) + N(reversed s)) / 2``.
    """
    bits = as_bits(s)
    n = len(bits)
    if n == 0:
        raise ValueError("empty input")
    if n < 2:
        raise ValueError("string too short for log2 scaling")
    scale = math.log2(n)
    if bits.count(bits[0]) == n:
        return scale
    forward = lz76_phrase_count(bits)
    backward = lz76_phrase_count(bits[::-1])
    return scale * (forward + backward) / 2
