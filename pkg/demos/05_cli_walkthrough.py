"""Driving the command-line interface.

Writes measure files to a temporary directory and runs each subcommand
in-process.  The same invocations work from a shell:

    zoloto w2 --mu mu.json --nu nu.json
    zoloto z2 --mu mu.json --nu nu.json --tol 1e-8
    zoloto certify --mu mu.json --nu nu.json --plan plan.json
    zoloto bounds --mu mu.json --nu nu.json
    zoloto paper opt14 --a 1 --b 2
    zoloto scan --family two_atom --n 50 --out scan.csv
"""

import json
import tempfile
from pathlib import Path

import zoloto as z
from zoloto.cli import main

tmp = Path(tempfile.mkdtemp(prefix="zoloto_demo_"))
mu, nu = z.two_atom_pair(1.0, 2.0)
z.save_measure(mu, tmp / "mu.json")
z.save_measure(nu, tmp / "nu.json")
print("measure file layout:")
print((tmp / "mu.json").read_text())

print("== w2 ==")
main(["w2", "--mu", str(tmp / "mu.json"), "--nu", str(tmp / "nu.json")])

print("== z2 (certified bracket) ==")
main(["z2", "--mu", str(tmp / "mu.json"), "--nu", str(tmp / "nu.json"),
      "--tol", "1e-8"])

print("== certify, dumping the 3-plan ==")
main(["certify", "--mu", str(tmp / "mu.json"), "--nu", str(tmp / "nu.json"),
      "--plan", str(tmp / "plan.json")])
plan = z.ThreePlan.from_json_dict(json.loads((tmp / "plan.json").read_text()))
print(f"dumped plan has {plan.n_triples} triples; "
      f"valid: {z.validate_three_plan(plan, mu, nu).valid}")

print("== bounds ==")
main(["bounds", "--mu", str(tmp / "mu.json"), "--nu", str(tmp / "nu.json")])

print("== reference tables (exit code 0 means every row passed) ==")
code = main(["paper", "opt14", "--a", "1", "--b", "2", "--format", "csv"])
print(f"opt14 exit code: {code}")
code = main(["paper", "noreverse", "--n", "10"])
print(f"noreverse exit code: {code}")

print("== scan to CSV ==")
main(["scan", "--family", "dilation", "--n", "4",
      "--out", str(tmp / "scan.csv")])
print((tmp / "scan.csv").read_text().splitlines()[0])
print(f"rows written: {len((tmp / 'scan.csv').read_text().splitlines()) - 1}")

print("== error contract: exit 0 with z2 = inf on barycentre mismatch ==")
z.save_measure(z.dirac([1.0]), tmp / "shifted.json")
code = main(["z2", "--mu", str(tmp / "mu.json"),
             "--nu", str(tmp / "shifted.json")])
print(f"exit code: {code}")
