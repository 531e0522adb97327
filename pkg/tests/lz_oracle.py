"""Reference LZ76 parse written straight from the definition.

Kept deliberately naive: grow the candidate phrase while it still occurs in
the history that precedes its last symbol.
"""


def phrase_count_bruteforce(bits: str) -> int:
    n = len(bits)
    i = 0
    count = 0
    while i < n:
        k = 1
        while i + k <= n and bits[i : i + k] in bits[: i + k - 1]:
            k += 1
        count += 1
        i += k
    return count
