#!/usr/bin/env python3
"""Independent reference for the golden fixtures.

Writes digests.tsv, gen.tsv and gen_function.tsv next to this file. Needs the `blake3` module.
"""
import os
import random

import blake3

ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ-."
VERSIONS = [("ut32.4", 2**32 - 5, 32), ("ut40.4", 2**40 - 87, 40), ("ut64.4", 2**64 - 59, 64)]


def digits(v, base, n):
    out = []
    for _ in range(n):
        out.append(ALPHABET[v % base])
        v //= base
    assert v == 0
    return "".join(out)


def encode(rank, p, length):
    if rank == 0:
        return "0" * length
    if rank < p:
        h = digits(rank, 16, length // 4)
        return (h[0] + "_" + h[1:] + "_").ljust(length, "0")
    if rank < p**4:
        return digits(rank % 4096, 64, 2) + "_" + digits(rank // 4096, 16, length - 3)
    return digits(rank, 64, length)


def hash_value(content, p):
    bits = 6 * p.bit_length() - 1
    raw = blake3.blake3(content).digest(length=(bits + 7) // 8)
    return int.from_bytes(raw, "little") % (1 << bits)


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    rng = random.Random(20240601)
    with open(os.path.join(here, "digests.tsv"), "w") as out:
        out.write("version\trank\tdigest\n")
        for name, p, length in VERSIONS:
            ranks = [0, 1, 2, p - 1, p, p + 1, 4095 + p, p**4 - 1, p**4, p**4 + 1, p**6 - 1]
            ranks += [rng.randrange(1, p) for _ in range(3)]
            ranks += [rng.randrange(p, p**4) for _ in range(3)]
            ranks += [rng.randrange(p**4, p**6) for _ in range(3)]
            for r in ranks:
                out.write(f"{name}\t{r}\t{encode(r, p, length)}\n")
    contents = [b"", b"abc", bytes(1024)]
    gen = open(os.path.join(here, "gen.tsv"), "w")
    gen_fn = open(os.path.join(here, "gen_function.tsv"), "w")
    with gen, gen_fn:
        for out in (gen, gen_fn):
            out.write("version\tcontent\tdigest\n")
        for name, p, length in VERSIONS:
            for c in contents:
                v = hash_value(c, p)
                gen.write(f"{name}\t{c.hex()}\t{encode(v % p**4, p, length)}\n")
                f = v if v >= p**4 else v + p**4
                gen_fn.write(f"{name}\t{c.hex()}\t{encode(f, p, length)}\n")

if __name__ == "__main__":
    main()
