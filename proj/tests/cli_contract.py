"""CLI contract: every command's JSON validates against its schema and exit
codes follow 0 ok / 1 verification failure / 2 usage / 3 cap exceeded."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

GLOCAL = sys.argv[1]
SCHEMAS = pathlib.Path(sys.argv[2])
failures = []


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def run(args):
    p = subprocess.run([GLOCAL, "-q", *args], capture_output=True, text=True, timeout=300)
    return p.returncode, p.stdout, p.stderr


def case(args, schema_name, code=0, check=None):
    rc, out, err = run(args)
    label = " ".join(args)
    if rc != code:
        failures.append(f"{label}: exit {rc}, wanted {code}\n{err}")
        return None
    if schema_name is None:
        return out
    try:
        doc = json.loads(out)
        jsonschema.validate(doc, schema(schema_name))
    except (json.JSONDecodeError, jsonschema.ValidationError) as e:
        failures.append(f"{label}: {e}")
        return None
    if check and not check(doc):
        failures.append(f"{label}: content check failed\n{out[:400]}")
    return doc


for name in sorted(SCHEMAS.glob("*.schema.json")):
    jsonschema.Draft202012Validator.check_schema(json.loads(name.read_text()))

with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)

    case(["ring", "info", "--ring", "twist:9:1"], "ring_info", check=lambda d: d["order"] == 81 and not d["commutative"])
    case(["ring", "sqrt-one", "--ring", "zmod:27"], "sqrt_one", check=lambda d: d == {"solutions": ["1", "26"]})
    case(["ring", "sqrt-one", "--ring", "zmod:8!nohalf"], "sqrt_one", check=lambda d: len(d["solutions"]) == 4)
    case(["ring", "verify-local", "--ring", "dual:3:2"], "verify_local", check=lambda d: d["local"])
    case(["gl", "order", "--ring", "zmod:9", "--n", "2"], "gl_order", check=lambda d: d["order"] == 3888 and d["agree"])
    case(["gl", "invert", "--ring", "zmod:9", "--matrix", '[["1","2"],["0","1"]]'], "gl_invert",
         check=lambda d: d["inverse"] == [["1", "7"], ["0", "1"]])
    case(["gl", "mul", "--ring", "gf:3", "--a", "[[1,1],[0,1]]", "--b", "[[1,1],[0,1]]"], "gl_mul",
         check=lambda d: d["product"] == [["1", "2"], ["0", "1"]])
    case(["inv", "canon", "--ring", "zmod:9", "--matrix", "[[0,1,0],[1,0,0],[0,0,1]]"], "inv_canon",
         check=lambda d: d["signature"] == {"plus": 2, "minus": 1})
    case(["inv", "simdiag", "--ring", "gf:3", "--matrices", "[[[0,1],[1,0]],[[2,0],[0,2]]]"], "inv_simdiag")
    case(["inv", "frame", "--ring", "gf:3", "--n", "3"], "inv_frame", check=lambda d: len(d["members"]) == 7)
    case(["inv", "max-commuting", "--ring", "gf:3", "--n", "2"], "inv_max_commuting", check=lambda d: d["max"] == 3)
    case(["inv", "max-commuting", "--ring", "zmod:9", "--n", "4", "--mode", "greedy"], "inv_max_commuting",
         check=lambda d: d["max"] == 15 and not d["exact"])
    case(["rel", "verify", "--ring", "zmod:9", "--n", "3"], "rel_verify", check=lambda d: all(r["pass"] for r in d))
    case(["rel", "verify", "--ring", "zmod:9", "--n", "3", "--suite", "sigma", "--sigma12", "[[0,2,0],[2,0,0],[0,0,1]]"],
         "rel_verify", code=1, check=lambda d: any(r["counterexample"] for r in d))
    case(["rel", "solve", "--ring", "gf:3", "--lemma", "transvection"], "rel_solve", check=lambda d: len(d["solutions"]) == 2)
    case(["rel", "solve", "--ring", "zmod:9", "--lemma", "family", "--k", "2"], "rel_solve")
    case(["rel", "reconstruct", "--ring", "twist:9:1"], "rel_reconstruct",
         check=lambda d: d["isomorphic"] and not d["swapped_order_matches"])
    case(["rel", "invtrans", "--ring", "zmod:9", "--n", "2", "--mode", "exhaustive"], "rel_invtrans",
         check=lambda d: d["automorphism"])
    case(["rel", "invtrans", "--ring", "twist:9:1", "--n", "3", "--samples", "20"], "rel_invtrans", code=1,
         check=lambda d: d["witness"] is not None)

    src = tmp / "m.json"
    src.write_text(json.dumps({"ring": "gf:3", "matrices": [
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[2, 0, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 2, 0], [0, 0, 1]],
        [[1, 0, 0], [0, 1, 0], [0, 0, 2]], [[2, 0, 0], [0, 2, 0], [0, 0, 1]], [[2, 0, 0], [0, 1, 0], [0, 0, 2]],
        [[1, 0, 0], [0, 2, 0], [0, 0, 2]], [[2, 0, 0], [0, 2, 0], [0, 0, 2]]]}))
    ps = tmp / "ps.json"
    case(["sub", "extract", "--in", str(src), "--out", str(ps)], "partial_structure", check=lambda d: len(d["prod"]) == 64)
    case(["sub", "embed", "--ps", str(ps), "--target", "gl:gf:9:n=2"], "sub_embed", check=lambda d: d["status"] == "no_embedding")
    case(["sub", "embed", "--ps", str(ps), "--target", "gl:gf:3:n=3"], "sub_embed", check=lambda d: d["status"] == "found")
    case(["sub", "embed", "--ps", str(ps), "--target", "gl:gf:9:n=2", "--budget", "5"], "sub_embed", code=3)
    case(["sub", "iso", "--p", str(ps), "--q", str(ps)], "sub_iso", check=lambda d: d["isomorphic"])
    case(["thm", "desk-check", "--r1", "gf:3", "--n", "2", "--r2", "gf:3", "--m", "3"], "thm_desk_check",
         check=lambda d: d["distinguished"] and d["separator"] == "max-commuting-involutions")
    case(["thm", "desk-check", "--r1", "gf:3", "--n", "2", "--r2", "gf:3", "--m", "2"], "thm_desk_check",
         check=lambda d: not d["distinguished"])

    # Exit code matrix: usage errors, bad inputs, caps.
    case(["frobnicate"], None, code=2)
    case(["ring", "info"], None, code=2)
    case(["ring", "info", "--ring", "zmod:6"], "error", code=2)
    case(["ring", "info", "--ring", "zmod:8"], "error", code=2)
    case(["sub", "embed", "--ps", str(ps), "--target", "gf:9:2"], "error", code=2)
    case(["gl", "invert", "--ring", "zmod:9", "--matrix", "[[3,0],[0,1]]"], "error", code=1)
    case(["inv", "canon", "--ring", "zmod:9", "--matrix", "[[1,1],[0,1]]"], "error", code=1)
    case(["gl", "order", "--ring", "zmod:9", "--n", "3", "--mode", "enumerate"], "error", code=3)
    case(["thm", "desk-check", "--r1", "zmod:9", "--n", "3", "--r2", "gf:9", "--m", "3"], "error", code=3)
    case(["ring", "sqrt-one", "--ring", "zmod:6561", "--cap", "100"], "error", code=3)

    # Manifests: schema, replay, worker independence.
    man = tmp / "run.json"
    first = case(["inv", "max-commuting", "--ring", "gf:3", "--n", "3", "--workers", "1", "--manifest", str(man)], None)
    jsonschema.validate(json.loads(man.read_text()), schema("manifest"))
    rc, again, _ = run(["replay", str(man), "--workers", "4"])
    if rc != 0 or again != first:
        failures.append("replay under 4 workers changed the output")
    rc, again, _ = run(["replay", str(man)])
    if rc != 0 or again != first:
        failures.append("replay changed the output")

if failures:
    print("\n".join(failures))
    sys.exit(1)
print("cli contract: all checks passed")
