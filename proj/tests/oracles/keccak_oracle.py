#!/usr/bin/env python3
"""Standalone Keccak-256 (original padding, as used by Ethereum).

Test-only oracle: written directly from the Keccak-f[1600] permutation
definition, shares no code with the C++ engine. Prints the storage slots the
fixture tests freeze into their expected values.

Usage:
  keccak_oracle.py [--check]        print digests (--check: compare with pycryptodome)
  keccak_oracle.py --inc FILE       write the digests as a C++ initializer list
  keccak_oracle.py --verify FILE    compare with a frozen "name hex" table
"""
import sys

ROUNDS = 24
RATE = 136  # bytes, for 256-bit output

RC = [
    0x0000000000000001, 0x0000000000008082, 0x800000000000808A, 0x8000000080008000,
    0x000000000000808B, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008A, 0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
    0x000000008000808B, 0x800000000000008B, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800A, 0x800000008000000A,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
]

MASK = (1 << 64) - 1


def rotl(x, n):
    n %= 64
    return ((x << n) | (x >> (64 - n))) & MASK


def rotation_offsets():
    # r[x][y] from the (x, y) -> (y, 2x + 3y) walk.
    r = [[0] * 5 for _ in range(5)]
    x, y = 1, 0
    for t in range(24):
        r[x][y] = ((t + 1) * (t + 2) // 2) % 64
        x, y = y, (2 * x + 3 * y) % 5
    return r


R = rotation_offsets()


def keccak_f(a):
    for rnd in range(ROUNDS):
        c = [a[x][0] ^ a[x][1] ^ a[x][2] ^ a[x][3] ^ a[x][4] for x in range(5)]
        d = [c[(x - 1) % 5] ^ rotl(c[(x + 1) % 5], 1) for x in range(5)]
        a = [[a[x][y] ^ d[x] for y in range(5)] for x in range(5)]
        b = [[0] * 5 for _ in range(5)]
        for x in range(5):
            for y in range(5):
                b[y][(2 * x + 3 * y) % 5] = rotl(a[x][y], R[x][y])
        a = [[b[x][y] ^ ((~b[(x + 1) % 5][y]) & b[(x + 2) % 5][y]) for y in range(5)]
             for x in range(5)]
        a[0][0] ^= RC[rnd]
    return a


def keccak256(data: bytes) -> bytes:
    msg = bytearray(data)
    msg.append(0x01)
    while len(msg) % RATE:
        msg.append(0)
    msg[-1] |= 0x80
    a = [[0] * 5 for _ in range(5)]
    for off in range(0, len(msg), RATE):
        block = msg[off:off + RATE]
        for i in range(RATE // 8):
            lane = int.from_bytes(block[8 * i:8 * i + 8], "little")
            a[i % 5][i // 5] ^= lane
        a = keccak_f(a)
    out = b"".join(a[i % 5][i // 5].to_bytes(8, "little") for i in range(25))
    return out[:32]


def b32(n: int) -> bytes:
    return n.to_bytes(32, "big")


CASES = {
    "empty": b"",
    "dyn_base0": b32(0),
    "dyn_base1": b32(1),
    "map_1_100": b32(1) + b32(100),
    "map_1_200": b32(1) + b32(200),
    "map_0_100": b32(0) + b32(100),
    "map_0_200": b32(0) + b32(200),
    "map_0_300": b32(0) + b32(300),
    "evm_100_0": b32(100) + b32(0),
    "evm_200_0": b32(200) + b32(0),
    "abc": b"abc",
    "long_200": bytes(range(200)),
}


def main():
    args = sys.argv[1:]
    if args[:1] == ["--inc"]:
        with open(args[1], "w") as out:
            out.write("// generated by keccak_oracle.py\n")
            for name, data in CASES.items():
                out.write(f'{{"{name}", "{keccak256(data).hex()}"}},\n')
        return 0
    if args[:1] == ["--verify"]:
        frozen = dict(line.split() for line in open(args[1]) if line.strip())
        bad = 0
        for name, data in CASES.items():
            got = keccak256(data).hex()
            if frozen.get(name) != got:
                print(f"{name}: oracle {got}, frozen {frozen.get(name)}")
                bad += 1
        print(f"{len(CASES) - bad}/{len(CASES)} digests match")
        return 1 if bad else 0
    check = "--check" in args
    for name, data in CASES.items():
        digest = keccak256(data)
        line = f"{name} {digest.hex()}"
        if check:
            from Crypto.Hash import keccak  # type: ignore
            ref = keccak.new(digest_bits=256, data=data).digest()
            line += " ok" if ref == digest else " MISMATCH"
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
