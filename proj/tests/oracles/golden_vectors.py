#!/usr/bin/env python3
"""Independent reference for the bit-exact primitives.

Uses hashlib and the `cryptography` package (OpenSSL backend), so nothing here
shares code with the C++ library. Values printed by this script are frozen in
tests/unit/test_golden.cpp.
"""
import hashlib
import struct

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms

DOMAIN = b"beacon-forge.v1"


def derive_key(master_seed, beacon, purpose):
    return hashlib.sha256(DOMAIN + struct.pack(">QQ", master_seed, beacon) + purpose.encode()).digest()


def keystream_block(key, nonce, counter):
    # DJB ChaCha20: 64-bit block counter followed by 64-bit nonce.
    iv = struct.pack("<QQ", counter, nonce)
    enc = Cipher(algorithms.ChaCha20(key, iv), mode=None).encryptor()
    return enc.update(b"\0" * 64)


def stream_digit(key, index, alphabet):
    limit = (2**64 // alphabet) * alphabet
    counter = 0
    while True:
        block = keystream_block(key, index, counter)
        for w in struct.unpack("<8Q", block):
            if w < limit:
                return w % alphabet
        counter += 1


def combine_hash(index, digits, d):
    width = (d + 7) // 8
    msg = struct.pack(">Q", index) + b"".join(x.to_bytes(width, "big") for x in digits)
    top = int.from_bytes(hashlib.sha256(msg).digest(), "big")
    return top >> (256 - d)


def psrg_key(digits):
    return hashlib.sha256(b"beacon-forge.v1.psrg" + struct.pack(">Q", len(digits))
                          + b"".join(struct.pack(">Q", x) for x in digits)).digest()


def sabotaged(trg_key, alphabet, length, capture, reseed, marker):
    """Emitted digits and the mode each was produced in."""
    bits = (alphabet - 1).bit_length()
    window, seen = 0, 0
    mode, absorbed, key, ctr = "capturing", [], None, 0
    out = []
    for i in range(length):
        trg = stream_digit(trg_key, i, alphabet)
        produced_in = mode
        if mode in ("capturing", "reseeding"):
            d = trg
            absorbed.append(d)
            scan = False
        else:
            d = stream_digit(key, ctr, alphabet)
            ctr += 1
            scan = True
        hit = False
        for k in reversed(range(bits)):
            window = ((window << 1) | ((d >> k) & 1)) & ((1 << 40) - 1)
            seen += 1
            if scan and seen >= 40 and window == marker:
                hit = True
        if mode != "pseudorandom":
            need = capture if mode == "capturing" else reseed
            if len(absorbed) == need:
                key, ctr, absorbed, mode = psrg_key(absorbed), 0, [], "pseudorandom"
        elif hit:
            mode = "reseeding"
        out.append((d, produced_in))
    return out


def marker_from_window(trace, alphabet, end):
    """The 40-bit window that closes with digit `end` of a trace."""
    bits = (alphabet - 1).bit_length()
    window = 0
    for d, _ in trace[: end + 1]:
        for k in reversed(range(bits)):
            window = ((window << 1) | ((d >> k) & 1)) & ((1 << 40) - 1)
    return window


if __name__ == "__main__":
    print("hash d=8 i=0 (0x12,0x34):", combine_hash(0, [0x12, 0x34], 8))
    print("hash d=4 i=7 (3,9,15):", combine_hash(7, [3, 9, 15], 4))
    print("hash d=12 i=5 (0xabc,0x123):", combine_hash(5, [0xABC, 0x123], 12))
    k = derive_key(42, 0, "trg")
    print("key(42,0,trg):", k.hex())
    print("trg l=2 first 16:", [stream_digit(k, i, 2) for i in range(16)])
    print("trg l=10 first 16:", [stream_digit(k, i, 10) for i in range(16)])
    k1 = derive_key(0xFFFFFFFFFFFFFFFF, 3, "fallback")
    print("fallback(max,3) l=7 first 8:", [stream_digit(k1, i, 7) for i in range(8)])
    print("psrg_key(1,2,3):", psrg_key([1, 2, 3]).hex())
    tk = derive_key(3, 1, "trg")
    # Marker chosen as the window closing PSRG digit 30 of an unmarked run.
    plain = sabotaged(tk, 4, 60, 8, 5, marker=1 << 41)
    marker = marker_from_window(plain, 4, 30)
    trace = sabotaged(tk, 4, 60, 8, 5, marker)
    print("sabotaged marker:", hex(marker))
    print("sabotaged digits:", [d for d, _ in trace])
    print("sabotaged modes:", "".join(m[0] for _, m in trace))
