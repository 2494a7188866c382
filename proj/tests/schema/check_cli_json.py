"""Runs the pdcov CLI on small synthetic inputs and validates its JSON."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema
import numpy as np


def write_csv(path, header, rows):
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for r in rows:
            f.write(",".join(repr(float(v)) for v in r) + "\n")


def run(exe, args):
    proc = subprocess.run([exe, *args], capture_output=True, text=True)
    if proc.returncode != 0:
        sys.exit(f"{' '.join(args)} exited {proc.returncode}: {proc.stderr}")
    return proc


def main():
    exe, schema_dir = sys.argv[1], Path(sys.argv[2])
    test_schema = json.loads((schema_dir / "test_report.schema.json").read_text())
    graph_schema = json.loads((schema_dir / "graph.schema.json").read_text())
    rng = np.random.default_rng(3)
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        n = 60
        f = rng.normal(size=(n, 2))
        x = f @ rng.normal(size=(2, 2)) + rng.normal(size=(n, 2))
        y = f @ rng.normal(size=(2, 1)) + 0.5 * x[:, :1] + rng.normal(size=(n, 1))
        data = tmp / "xyf.csv"
        write_csv(data, ["x1", "x2", "y1", "f1", "f2"], np.hstack([x, y, f]))

        for extra in ([], ["--permutations", "0"], ["--projection", "ols"]):
            out = run(exe, ["test", "--input", str(data), "--x-cols", "x1,x2", "--y-cols", "y1",
                            "--factor-cols", "f1-f2", *extra]).stdout
            jsonschema.validate(json.loads(out), test_schema)

        z = rng.normal(size=(n, 4))
        z[:, 1] += z[:, 0]
        z[:, 3] = 1.0
        nodes = tmp / "z.csv"
        write_csv(nodes, ["a", "b", "c", "d"], z)
        out_json = tmp / "g.json"
        run(exe, ["graph", "--input", str(nodes), "--projection", "ols", "--permutations", "49",
                  "--out", str(out_json)])
        graph = json.loads(out_json.read_text())
        jsonschema.validate(graph, graph_schema)
        assert len(graph["edges"]) == 6
        assert sum(e["untestable"] for e in graph["edges"]) == 3
        assert (tmp / "g.json.edges.csv").exists()

        run(exe, ["graph", "--input", str(nodes), "--projection", "ols", "--permutations", "0",
                  "--out", str(out_json)])
        jsonschema.validate(json.loads(out_json.read_text()), graph_schema)
    print("CLI JSON output matches the schemas")


if __name__ == "__main__":
    main()
