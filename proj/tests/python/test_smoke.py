"""Smoke tests for the sector2scale python bindings.

Driven by ctest with PYTHONPATH pointing at the built package; uses only the
standard library on top of the module itself.
"""

import json
import os
import tempfile
import unittest

import sector2scale as s2s

SCENE = {
    "scene": {
        "omega": [1, 2],
        "rho0p": 0.7,
        "holes": [
            {"kind": "disk", "center": [0.3535533906, 0.3535533906], "radius": 0.15}
        ],
        "f": {"constant": 1.0},
    },
    "params": {"ppu": 8, "refit": 12, "probes": 6, "eps": [0.1, 0.2], "cutoffs": [0, 2]},
}


class SmokeTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory(prefix="s2s_py_")
        cls.scene_path = os.path.join(cls.tmp.name, "scene.json")
        with open(cls.scene_path, "w", encoding="utf-8") as f:
            json.dump(SCENE, f)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def test_classify_angle(self):
        out = s2s.classify_angle(1.2360679774997896, depth=20)
        self.assertFalse(out["certified"])
        self.assertGreaterEqual(len(out["evidence"]), 5)
        rat = s2s.classify_rational(3, 7)
        self.assertEqual(rat["verdict"], "Rational")
        self.assertTrue(rat["certified"])

    def test_validate_scene(self):
        out = s2s.validate_scene(self.scene_path)
        self.assertTrue(out["ok"])
        self.assertEqual(out["issues"], [])

    def test_u0_value(self):
        # Interior values of the quarter-disk Poisson problem are negative.
        v = s2s.u0_value(self.scene_path, 0.3, 0.3, ppu=8.0)
        self.assertLess(v, 0.0)
        self.assertGreater(v, -0.2)

    def test_convergence_rows(self):
        rows = s2s.convergence_rows(
            self.scene_path, eps=[0.1, 0.2], cutoffs=[0, 2], probes=4
        )
        self.assertEqual(len(rows), 12)
        sup = {}
        for r in rows:
            sup[(r["frame"], r["eps"], r["order"])] = r["sup_error"]
        for eps in (0.1, 0.2):
            self.assertLess(sup[("global", eps, 2.0)], sup[("global", eps, 0.0)])

    def test_run_cli(self):
        out_dir = os.path.join(self.tmp.name, "cli_out")
        code, log = s2s.run(
            ["sweep", "--scene", self.scene_path, "--out", out_dir]
        )
        self.assertEqual(code, 0)
        self.assertIn("sweep:", log)
        with open(os.path.join(out_dir, "sweep.csv"), encoding="utf-8") as f:
            lines = f.read().strip().splitlines()
        self.assertEqual(lines[0], "eps,order,frame,sup_error,slope")
        self.assertEqual(len(lines), 13)

        code, log = s2s.run(["sweep", "--scene", "missing.json"])
        self.assertEqual(code, 2)
        self.assertIn("config error", log)

    def test_config_error_type(self):
        code, _ = s2s.run(["definitely-not-a-command"])
        self.assertEqual(code, 2)
        with self.assertRaises(ValueError):
            s2s.validate_scene("no_such_scene.json")


if __name__ == "__main__":
    unittest.main()
