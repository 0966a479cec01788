"""Exit codes, error reporting and bit-exact reruns of the CLI."""
import json
import pathlib
import subprocess
import sys
import tempfile

cli = sys.argv[1]
failures = []


def run(*args):
    return subprocess.run([cli, *args], capture_output=True, text=True)


def expect_exit(code, *args):
    proc = run(*args)
    ok = proc.returncode == code
    print(f"{'ok  ' if ok else 'FAIL'} exit {proc.returncode} (want {code}): {' '.join(args)}")
    if not ok:
        failures.append(f"{' '.join(args)}: {proc.stderr[:300]}")
    return proc


expect_exit(2, "coeffs", "--bogus")
expect_exit(2, "frobnicate")
expect_exit(2)
expect_exit(2, "coeffs", "--nu", "1/0")
expect_exit(2, "coeffs", "--nu", "t_nu")
expect_exit(2, "coeffs", "--target", "word:+x")
expect_exit(2, "coeffs", "--out", "xml")
expect_exit(2, "verify", "--suite", "catalytic,bogus")
expect_exit(2, "oracle", "--order", "12")
expect_exit(2, "sample", "exact", "--nu", "2")
expect_exit(0, "--help")

proc = expect_exit(1, "coeffs", "--nu", "1", "--target", "zplus:3", "--order", "6")
try:
    err = json.loads(proc.stderr)
    if set(err["error"]) != {"type", "message"}:
        failures.append("error JSON lacks type/message")
except (json.JSONDecodeError, KeyError):
    failures.append(f"stderr is not structured JSON: {proc.stderr[:200]}")

proc = expect_exit(0, "verify", "--nu", "2", "--order", "15")
doc = json.loads(proc.stdout)
if doc["suites"]["catalytic"]["detail"]["residual_terms"]:
    failures.append("catalytic residual at nu = 2 is not zero")

proc = expect_exit(0, "critical", "--nu", "nu_c")
if json.loads(proc.stdout)["rho"]["exact"] != "-55/864 + 25/864*sqrt7":
    failures.append("critical --nu nu_c does not print the exact radius")

proc = expect_exit(0, "coeffs", "--nu", "2", "--target", "sphere", "--order", "9", "--out", "csv")
if proc.stdout.splitlines()[:3] != ["exponent,coefficient,approx", '3,"136/1",136', '6,"10416/1",10416']:
    failures.append(f"unexpected CSV: {proc.stdout[:120]}")

with tempfile.TemporaryDirectory() as tmp:
    digests = []
    for jobs, name in [("1", "a"), ("3", "b"), ("1", "c")]:
        out = pathlib.Path(tmp) / name
        expect_exit(0, "sample", "mcmc", "--nu", "nu_c", "--n", "10", "--steps", "5000", "--reps", "5",
                    "--seed", "77", "--jobs", jobs, "--out", str(out))
        manifest = json.loads((out / "manifest.json").read_text())
        digests.append([(o["name"], o["sha256"]) for o in manifest["outputs"]])
    if not (digests[0] == digests[1] == digests[2]):
        failures.append("sample outputs differ between reruns or job counts")
    else:
        print("ok   sample outputs identical across reruns and --jobs")

if failures:
    print("\n".join(failures))
    sys.exit(1)
