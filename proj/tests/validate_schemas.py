"""Run the CLI, validate every JSON output against schemas/ and check manifest hashes."""
import hashlib
import json
import pathlib
import subprocess
import sys
import tempfile

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

cli = pathlib.Path(sys.argv[1])
schema_dir = pathlib.Path(sys.argv[2])

registry = Registry()
schemas = {}
for path in schema_dir.glob("*.schema.json"):
    schemas[path.name] = json.loads(path.read_text())
    registry = registry.with_resource(path.name, Resource.from_contents(schemas[path.name]))
for name, schema in schemas.items():
    Draft202012Validator.check_schema(schema)

failures = []


def validate(doc, schema_name, label):
    validator = Draft202012Validator(schemas[schema_name], registry=registry)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
    for e in errors[:5]:
        failures.append(f"{label}: {'/'.join(map(str, e.path))}: {e.message[:200]}")
    print(f"{'ok  ' if not errors else 'FAIL'} {label} against {schema_name}")


def sha(text):
    return hashlib.sha256(text.encode()).hexdigest()


def run(args, schema_name, expect=0):
    proc = subprocess.run([str(cli), *args], capture_output=True, text=True)
    label = " ".join(args)
    if proc.returncode != expect:
        failures.append(f"{label}: exit {proc.returncode}, expected {expect}: {proc.stderr[:300]}")
        return None
    doc = json.loads(proc.stdout)
    validate(doc, schema_name, label)
    manifest = doc.get("manifest")
    if manifest is not None and schema_name != "report.schema.json":
        body = {k: v for k, v in doc.items() if k != "manifest"}
        if manifest["outputs"][0]["sha256"] != sha(json.dumps(body, indent=2, ensure_ascii=False)):
            failures.append(f"{label}: manifest hash does not match the document")
    return doc


run(["coeffs", "--nu", "2", "--target", "sphere", "--order", "12"], "coefficients.schema.json")
run(["coeffs", "--nu", "nu_c", "--target", "word:+-+", "--order", "9"], "coefficients.schema.json")
run(["coeffs", "--nu", "1/2", "--target", "U", "--order", "12"], "coefficients.schema.json")
run(["coeffs", "--nu", "3", "--target", "zplus:4", "--order", "12"], "coefficients.schema.json")
run(["oracle", "--kind", "pgon", "--p", "2", "--order", "7", "--nu", "2"], "oracle.schema.json")
run(["oracle", "--kind", "sphere", "--order", "6", "--nu", "nu_c"], "oracle.schema.json")
run(["verify", "--nu", "2", "--order", "12"], "verification.schema.json")
run(["verify", "--nu", "1", "--order", "9", "--suite", "catalytic,oracle"], "verification.schema.json")
for nu in ["nu_c", "1", "3", "1/2"]:
    run(["critical", "--nu", nu], "critical.schema.json")
run(["spectral", "--nu", "nu_c", "--order", "45"], "spectral.schema.json")
run(["asymp", "--nu", "1", "--target", "sphere", "--order", "45"], "asymptotics.schema.json")
run(["report", "--criteria", "1,2,3", "--format", "json"], "report.schema.json")

with tempfile.TemporaryDirectory() as tmp:
    for method, extra in [("exact", ["--n", "6"]), ("mcmc", ["--n", "8", "--steps", "2000"]),
                          ("boltzmann", ["--t", "1/20", "--word", "++-"])]:
        out = pathlib.Path(tmp) / method
        proc = subprocess.run([str(cli), "sample", method, "--nu", "2", "--reps", "4", "--seed", "9",
                               "--jobs", "2", "--out", str(out), *extra], capture_output=True, text=True)
        if proc.returncode != 0:
            failures.append(f"sample {method}: exit {proc.returncode}: {proc.stderr[:300]}")
            continue
        manifest = json.loads((out / "manifest.json").read_text())
        validate(manifest, "manifest.schema.json", f"sample {method} manifest.json")
        for entry in manifest["outputs"]:
            text = (out / entry["name"]).read_text()
            if sha(text) != entry["sha256"]:
                failures.append(f"sample {method}: hash mismatch for {entry['name']}")
            schema = "stats.schema.json" if entry["name"] == "stats.json" else "sample.schema.json"
            validate(json.loads(text), schema, f"sample {method} {entry['name']}")
        run(["stats", "--in", str(out)], "stats.schema.json")

if failures:
    print("\n".join(failures))
    sys.exit(1)
print("all outputs validate")
