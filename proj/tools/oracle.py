#!/usr/bin/env python3
"""Standalone reference for the akaprime key hierarchy.

Reads a JSON list of {"op": name, "inputs": {...}} objects (file argument or
stdin) and prints a JSON list of {"op": name, "outputs": {...}} with every
byte string rendered as lowercase hex. Only hashlib/hmac are used so the
results stay independent of the C++ library.
"""

import hashlib
import hmac
import json
import sys


def h(data: bytes) -> str:
    return data.hex()


def b(hexstr: str) -> bytes:
    return bytes.fromhex(hexstr)


def mac256(key: bytes, data: bytes) -> bytes:
    return hmac.new(key, data, hashlib.sha256).digest()


def be48(value: int) -> bytes:
    return value.to_bytes(6, "big")


def usim_functions(k, rand, sqn, amf):
    return {
        "mac_a": mac256(k, b"\x01" + rand + be48(sqn) + amf)[:8],
        "xres": mac256(k, b"\x02" + rand)[:8],
        "ck": mac256(k, b"\x03" + rand)[:16],
        "ik": mac256(k, b"\x04" + rand)[:16],
        "ak": mac256(k, b"\x05" + rand)[:6],
    }


def build_autn(sqn, ak, amf, mac_a):
    sqn_xor_ak = bytes(x ^ y for x, y in zip(be48(sqn), ak))
    return sqn_xor_ak + amf + mac_a


def ck_ik_prime(ck, ik, snn: str, sqn_xor_ak):
    out = mac256(ck + ik, b"\x20" + snn.encode() + sqn_xor_ak)
    return out[:16], out[16:32]


def prf_prime(key, label, out_len):
    if out_len > 255 * 32:
        raise ValueError("out_len too large")
    out = b""
    block = b""
    i = 1
    while len(out) < out_len:
        block = mac256(key, block + label + bytes([i]))
        out += block
        i += 1
    return out[:out_len]


def master_keys(ck_p, ik_p, identity: str, rand, autn):
    mk = prf_prime(ik_p + ck_p, b"EAP-AKA'" + identity.encode(), 208)
    parts = {
        "mk": mk,
        "k_encr": mk[0:16],
        "k_aut": mk[16:48],
        "k_re": mk[48:80],
        "msk": mk[80:144],
        "emsk": mk[144:208],
    }
    parts["k_ausf"] = parts["emsk"][:32]
    parts["session_id"] = b"\x32" + rand + autn
    return parts


def k_seaf(k_ausf, snn: str):
    return mac256(k_ausf, b"\x6c" + snn.encode())


def k_ausf_5g_aka(ck, ik, snn: str, sqn_xor_ak):
    return mac256(ck + ik, b"\x6a" + snn.encode() + sqn_xor_ak)


def hashed_response(rand, res):
    return hashlib.sha256(rand + res).digest()[:16]


def suci_keystream(key, nonce, length):
    out = mac256(key, b"suci-ks" + nonce)
    i = 2
    while len(out) < length:
        out += mac256(key, b"suci-ks" + nonce + bytes([i]))
        i += 1
    return out[:length]


def conceal(msin: str, key, nonce):
    plain = msin.encode()
    ks = suci_keystream(key, nonce, len(plain))
    ct = bytes(x ^ y for x, y in zip(plain, ks))
    tag = mac256(key, b"suci-tag" + nonce + ct)[:16]
    return ct, tag


def av_rand(seed, sqn):
    return mac256(seed, b"akaprime-rand" + be48(sqn))[:16]


def run(op, inp):
    if op == "usim_functions":
        out = usim_functions(b(inp["k"]), b(inp["rand"]), int(inp["sqn"]), b(inp["amf"]))
        return {k: h(v) for k, v in out.items()}
    if op == "build_autn":
        return {"autn": h(build_autn(int(inp["sqn"]), b(inp["ak"]), b(inp["amf"]), b(inp["mac_a"])))}
    if op == "derive_ck_ik_prime":
        ckp, ikp = ck_ik_prime(b(inp["ck"]), b(inp["ik"]), inp["snn"], b(inp["sqn_xor_ak"]))
        return {"ck_prime": h(ckp), "ik_prime": h(ikp)}
    if op == "prf_prime":
        return {"out": h(prf_prime(b(inp["key"]), b(inp["label"]), int(inp["out_len"])))}
    if op == "derive_master_keys":
        out = master_keys(b(inp["ck_prime"]), b(inp["ik_prime"]), inp["identity"], b(inp["rand"]), b(inp["autn"]))
        return {k: h(v) for k, v in out.items()}
    if op == "derive_k_seaf":
        return {"k_seaf": h(k_seaf(b(inp["k_ausf"]), inp["snn"]))}
    if op == "derive_k_ausf_5g_aka":
        return {"k_ausf": h(k_ausf_5g_aka(b(inp["ck"]), b(inp["ik"]), inp["snn"], b(inp["sqn_xor_ak"])))}
    if op == "hashed_response":
        return {"out": h(hashed_response(b(inp["rand"]), b(inp["res"])))}
    if op == "conceal_supi":
        ct, tag = conceal(inp["msin"], b(inp["home_key"]), b(inp["nonce"]))
        return {"ciphertext": h(ct), "tag": h(tag)}
    if op == "eap_mac":
        return {"mac": h(mac256(b(inp["k_aut"]), b(inp["packet"]))[:16])}
    if op == "generate_av":
        k, sqn, amf, snn = b(inp["k"]), int(inp["sqn"]), b(inp["amf"]), inp["snn"]
        if sqn >= (1 << 48) - 1:
            raise ValueError("sqn overflow")
        rand = av_rand(b(inp["seed"]), sqn)
        u = usim_functions(k, rand, sqn, amf)
        autn = build_autn(sqn, u["ak"], amf, u["mac_a"])
        ckp, ikp = ck_ik_prime(u["ck"], u["ik"], snn, autn[:6])
        return {
            "rand": h(rand),
            "autn": h(autn),
            "xres": h(u["xres"]),
            "ck_prime": h(ckp),
            "ik_prime": h(ikp),
            "next_sqn": str(sqn + 1),
        }
    raise ValueError(f"unknown op {op}")


def main():
    src = open(sys.argv[1]) if len(sys.argv) > 1 else sys.stdin
    requests = json.load(src)
    results = [{"op": r["op"], "outputs": run(r["op"], r["inputs"])} for r in requests]
    json.dump(results, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
