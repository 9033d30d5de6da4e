"""Subprocess checks of the qdpc command-line tool.

Usage: python test_cli.py /path/to/qdpc
"""

import csv
import json
import math
import os
import subprocess
import sys
import tempfile
import unittest

import numpy as np

QDPC = None


def run(*args, check=True):
    proc = subprocess.run([QDPC, *map(str, args)], capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(f"qdpc {' '.join(map(str, args))} exited {proc.returncode}: {proc.stderr}")
    return proc


def brute_force_labels(points, dc, rho_c, delta_c):
    """Plain O(n^2) density peak clustering with a Gaussian kernel."""
    n = len(points)
    dist = np.sqrt(((points[:, None, :] - points[None, :, :]) ** 2).sum(-1))
    rho = np.exp(-((dist / dc) ** 2)).sum(1) - 1.0
    parent = [-1] * n
    delta = [math.inf] * n
    for i in range(n):
        for j in range(n):
            higher = rho[j] > rho[i] or (rho[j] == rho[i] and j > i)
            if higher and dist[i, j] < delta[i]:
                delta[i], parent[i] = dist[i, j], j
    labels = []
    for i in range(n):
        x = i
        while delta[x] <= delta_c:
            x = parent[x]
        labels.append(x if rho[x] >= rho_c else None)
    return labels


def same_partition(a, b):
    mapping = {}
    for x, y in zip(a, b):
        if (x is None) != (y is None):
            return False
        if x is None:
            continue
        if mapping.setdefault(x, y) != y:
            return False
    return len(set(mapping.values())) == len(mapping)


class CliTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.dir, name)

    def test_generate_shape_and_determinism(self):
        a, b = self.path("a.json"), self.path("b.json")
        run("generate", "--family", "uniform", "--n", 100, "--d", 2, "--seed", 7, "--out", a)
        run("generate", "--family", "uniform", "--n", 100, "--d", 2, "--seed", 7, "--out", b)
        with open(a) as fa, open(b) as fb:
            text = fa.read()
            self.assertEqual(text, fb.read())
        data = json.loads(text)
        self.assertEqual((data["n"], data["d"]), (100, 2))
        self.assertEqual(np.asarray(data["points"]).shape, (100, 2))
        self.assertTrue((np.linalg.norm(data["points"], axis=1) <= 1.0).all())

        c = self.path("c.csv")
        run("generate", "--family", "gaussian", "--k", 3, "--n", 50, "--d", 3, "--seed", 1, "--out", c)
        self.assertEqual(np.loadtxt(c, delimiter=",").shape, (50, 3))

    def test_usage_errors_exit_2(self):
        self.assertEqual(run("generate", "--family", "uniform", "--d", 2, "--seed", 7,
                             "--out", self.path("x.json"), check=False).returncode, 2)
        self.assertEqual(run("toy", check=False).returncode, 2)  # --seed is mandatory
        self.assertEqual(run("nonsense", check=False).returncode, 2)
        self.assertEqual(run(check=False).returncode, 2)

    def test_unreadable_input_exit_1(self):
        proc = run("cluster", "--input", self.path("missing.json"), "--dc", 1, "--rho-c", 0,
                   "--delta-c", 1, "--out", self.path("l.json"), check=False)
        self.assertEqual(proc.returncode, 1)

    def blobs(self):
        rng = np.random.default_rng(3)
        centres = np.array([[0.0, 0.0], [12.0, 0.0], [0.0, 12.0]])
        pts = np.concatenate([c + rng.normal(size=(40, 2)) for c in centres])
        path = self.path("blobs.csv")
        np.savetxt(path, pts, delimiter=",", fmt="%.17g")
        return pts, path

    def test_cluster_matches_brute_force(self):
        pts, path = self.blobs()
        out = self.path("labels.json")
        proc = run("cluster", "--input", path, "--dc", 1.0, "--rho-c", 1.0, "--delta-c", 4.0, "--out", out)
        n = len(pts)
        self.assertIn(f"classical_queries: {(n * n - n) // 2}", proc.stdout)
        with open(out) as f:
            record = json.load(f)
        labels = [None if x == "noise" else x for x in record["labels"]]
        self.assertEqual(len(set(l for l in labels if l is not None)), 3)
        self.assertTrue(same_partition(labels, brute_force_labels(pts, 1.0, 1.0, 4.0)))

        with open(self.path("rho_delta.csv")) as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), n)
        self.assertEqual(sum(r["delta"] == "inf" for r in rows), 1)

    def test_cluster_single_point(self):
        path = self.path("one.csv")
        with open(path, "w") as f:
            f.write("1.5,2.5\n")
        out = self.path("one.json")
        proc = run("cluster", "--input", path, "--dc", 1, "--rho-c", 0, "--delta-c", 1, "--out", out,
                   "--rho-delta", self.path("rd.csv"))
        self.assertIn("classical_queries: 0", proc.stdout)
        with open(out) as f:
            record = json.load(f)
        self.assertEqual(record["roots"], [0])
        with open(self.path("rd.csv")) as f:
            self.assertEqual(f.read().splitlines(), ["id,rho,delta", "0,0,inf"])

    def test_decide_and_qdecide(self):
        pts, path = self.blobs()
        common = ["--input", path, "--dc", 1.0, "--rho-c", 1.0, "--delta-c", 4.0]
        same = json.loads(run("decide", *common, "--i", 5, "--j", 5).stdout)
        self.assertTrue(same["same_cluster"])
        self.assertEqual(set(same), {"same_cluster", "root_i", "root_j", "i_outlier", "j_outlier",
                                     "classical_queries"})
        # Elements 0 and 40 come from different blobs.
        self.assertFalse(json.loads(run("decide", *common, "--i", 0, "--j", 40).stdout)["same_cluster"])
        self.assertEqual(run("decide", *common, "--i", 0, "--j", 120, check=False).returncode, 2)

        eps, repeats = 0.1, 100
        q = json.loads(run("qdecide", *common, "--i", 1, "--j", 4, "--seed", 9, "--repeats", repeats,
                           "--epsilon", eps).stdout)
        self.assertEqual(q["classical"]["same_cluster"], True)
        self.assertGreaterEqual(q["quantum"]["agreement_rate"],
                                1 - eps - 3 * math.sqrt(eps * (1 - eps) / repeats))
        self.assertGreater(q["quantum"]["mean_charged_queries"], 0)
        self.assertEqual(run("qdecide", *common, "--i", 1, "--j", 4, "--seed", 9, "--repeats", repeats,
                             "--epsilon", eps).stdout, json.dumps(q, separators=(",", ":")) + "\n")

    def test_heights_threads_and_fit(self):
        outs = []
        for threads in (1, 3):
            out = self.path(f"h{threads}.csv")
            proc = run("heights", "--family", "uniform", "--d", 2, "--n-grid", "128,256,512", "--runs", 3,
                       "--seed", 5, "--threads", threads, "--out", out, "--long", self.path(f"l{threads}.csv"))
            fit = json.loads(proc.stdout)
            self.assertEqual(set(fit), {"family", "d", "slope", "intercept", "d_eff", "r2"})
            with open(out) as f:
                outs.append(f.read())
        self.assertEqual(outs[0], outs[1])
        self.assertEqual(outs[0].splitlines()[0], "family,d,n,run_count,mean_H")

        exact = self.path("exact.csv")
        with open(exact, "w") as f:
            f.write("family,d,n,run_count,mean_H\n")
            for n in (256, 512, 1024, 2048):
                f.write(f"uniform,4,{n},1,{2.0 * n ** 0.25!r}\n")
        fit = json.loads(run("fit", "--input", exact).stdout)
        self.assertAlmostEqual(fit["slope"], 0.25, places=12)
        self.assertAlmostEqual(fit["d_eff"], 4.0, places=10)
        self.assertEqual((fit["family"], fit["d"]), ("uniform", 4))

    def test_qbench(self):
        runs = self.path("runs.jsonl")
        summary = json.loads(run("qbench", "--d", 3, "--n-grid", "64,128", "--runs", 5, "--seed", 2,
                                 "--out", runs).stdout)
        self.assertEqual([e["n"] for e in summary["entries"]], [64, 128])
        with open(runs) as f:
            lines = [json.loads(line) for line in f]
        self.assertEqual(len(lines), 10)
        for r in lines:
            self.assertEqual(r["charged_queries"], (r["n"] - 1) + r["n"] * r["grover_iterations"])

        out = self.path("dec.csv")
        run("qbench", "--mode", "decision", "--d", 5, "--n-grid", "128", "--pairs", 2, "--repeats", 2,
            "--rho-c", 0, "--delta-c", 0.5, "--seed", 4, "--out", out)
        with open(out) as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), 2)
        self.assertTrue(all(int(r["classical_queries"]) == 128 * 127 // 2 for r in rows))

    def test_toy(self):
        out = self.path("toy.csv")
        proc = run("toy", "--runs", 1000, "--seed", 1, "--out", out)
        rows = list(csv.DictReader(proc.stdout.splitlines()))
        self.assertEqual(len(rows), 6)
        self.assertNotIn("1", [r["element"] for r in rows])
        self.assertNotIn("5", [r["element"] for r in rows])
        self.assertGreaterEqual(sum(float(r["quantum_mean"]) < float(r["classical_mean"]) for r in rows), 4)
        self.assertEqual(run("toy", "--runs", 1000, "--seed", 1).stdout, proc.stdout)


if __name__ == "__main__":
    QDPC = os.path.abspath(sys.argv.pop(1))
    unittest.main(verbosity=2)
