#!/usr/bin/env python3
"""Exit codes, determinism and JSON shapes of the solsem CLI.

usage: check_cli.py <solsem binary> <fixture dir>
"""

import json
import os
import subprocess
import sys
import tempfile

import jsonschema

NUM = {"anyOf": [{"type": "integer", "minimum": 0}, {"type": "string", "pattern": "^0x[0-9a-f]+$"}]}
HEX = {"type": "string", "pattern": "^0x[0-9a-f]*$"}
ADDR = {"type": "string", "pattern": "^0x[0-9a-f]{40}$"}

WRITE = {
    "type": "object",
    "required": ["space", "at", "bytes"],
    "properties": {"space": {"enum": ["storage", "memory"]}, "at": HEX, "bytes": HEX},
}

EVENT = {
    "type": "object",
    "required": ["seq", "rule", "addr", "fn", "writes", "omega", "tx", "premises"],
    "properties": {
        "seq": {"type": "integer", "minimum": 0},
        "rule": {"type": "string", "minLength": 1},
        "addr": ADDR,
        "fn": {"type": "string"},
        "writes": {"type": "array", "items": WRITE},
        "call": {
            "type": "object",
            "required": ["kind", "from", "to", "fn", "value", "gas"],
            "properties": {"kind": {"enum": ["tx", "function", "fallback", "deploy"]}, "from": ADDR, "to": ADDR},
        },
        "value": NUM,
        "omega": {"type": "integer", "minimum": 0},
        "tx": {"type": "integer", "minimum": 0},
        "premises": {"type": "array", "items": {"type": "string"}},
    },
}

LAYOUT = {
    "type": "object",
    "required": ["contract", "address", "lambda", "vars", "hashedRegions"],
    "properties": {
        "contract": {"type": "string"},
        "address": ADDR,
        "lambda": NUM,
        "vars": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "type", "byteAddr", "slot", "offset", "size", "value"],
                "properties": {"byteAddr": NUM, "slot": NUM, "offset": {"type": "integer"}, "size": {"type": "integer"}},
            },
        },
        "hashedRegions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "base", "baseSlot", "key", "slot", "type", "value"],
                "properties": {"kind": {"enum": ["dyn", "map"]}, "slot": HEX},
            },
        },
    },
}

OUTCOME = {
    "type": "object",
    "required": ["ok", "halted", "actions", "asserts"],
    "properties": {
        "ok": {"type": "boolean"},
        "halted": {"type": "boolean"},
        "actions": {"type": "array", "items": {"type": "object", "required": ["line", "action", "ok"]}},
        "asserts": {
            "type": "array",
            "items": {"type": "object", "required": ["line", "assert", "passed", "actual", "expected"]},
        },
        "findings": {
            "type": "array",
            "items": {"type": "object", "required": ["victim", "contract", "fn", "outerSeq", "reentrantSeq"]},
        },
    },
}

failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True, timeout=60)


CLI, FIX = sys.argv[1], sys.argv[2]


def fx(name):
    return os.path.join(FIX, name)


# exit codes
check(run("run", fx("coin.sol"), fx("coin.scn")).returncode == 0, "coin scenario exits 0")
check(run("run", fx("dao_fixed.sol"), fx("dao_fixed.scn"), "--detect-reentrancy").returncode == 0, "fixed dao exits 0")
check(run("run", fx("dao.sol"), fx("dao.scn"), "--detect-reentrancy").returncode == 1, "dao with findings exits 1")
with tempfile.TemporaryDirectory() as tmp:
    bad = os.path.join(tmp, "bad.sol")
    with open(bad, "w") as f:
        f.write("contract A {\n  function f() { uint x = ; }\n}\n")
    r = run("run", bad)
    check(r.returncode == 2, "syntax error exits 2")
    check("bad.sol:2:" in r.stderr, "syntax error reports file:line")

    wrong = os.path.join(tmp, "wrong.scn")
    with open(wrong, "w") as f:
        f.write("deploy c Coin() from S\nassert c.minter == R\n")
    check(run("run", fx("coin.sol"), wrong).returncode == 1, "failed assertion exits 1")

    unsupported = os.path.join(tmp, "lib.sol")
    with open(unsupported, "w") as f:
        f.write("library L {}\n")
    check(run("parse", unsupported).returncode == 2, "unsupported feature exits 2")

    trace = os.path.join(tmp, "dao.jsonl")
    run("run", fx("dao.sol"), fx("dao.scn"), "--trace", trace)
    with open(trace) as f:
        events = [json.loads(line) for line in f if line.strip()]
    try:
        for ev in events:
            jsonschema.validate(ev, EVENT)
        check(len(events) > 0, "trace JSONL matches schema")
    except jsonschema.ValidationError as e:
        check(False, "trace JSONL matches schema: " + e.message)
    check([e["seq"] for e in events] == list(range(len(events))), "trace seq numbers are dense")
    check(max(e["omega"] for e in events) >= 2, "trace shows nested frames")

# determinism
a = run("run", fx("dao.sol"), fx("dao.scn"), "--detect-reentrancy", "--json")
b = run("run", fx("dao.sol"), fx("dao.scn"), "--detect-reentrancy", "--json")
check(a.stdout == b.stdout and a.stdout != "", "identical output across runs")

for name, doc, schema in [
    ("outcome", a.stdout, OUTCOME),
    ("layout test2", run("layout", fx("test2.sol"), "--contract", "Test2", "--json").stdout, LAYOUT),
    ("layout test4", run("layout", fx("test4.sol"), "--contract", "Test4", "--tx", "foo4", "--json").stdout, LAYOUT),
]:
    try:
        jsonschema.validate(json.loads(doc), schema)
        check(True, name + " JSON matches schema")
    except (json.JSONDecodeError, jsonschema.ValidationError) as e:
        check(False, name + " JSON matches schema: " + str(e)[:200])

out = json.loads(a.stdout)
check(out["ok"] is False and len(out["findings"]) > 0, "dao outcome reports findings")
check(all(f["contract"] == "Bank" and f["fn"] == "withdraw" for f in out["findings"]), "findings name Bank.withdraw")

sys.exit(1 if failures else 0)
