"""Fixtures generating limitlab demo artifacts through the CLI.

The plots package consumes the primary component only through its artifact
files, so these fixtures shell out to the `limitlab` executable; tests are
skipped when it is not installed.
"""

import json
import os
import shutil
import subprocess

import pytest

HERE = os.path.dirname(os.path.abspath(__file__))
CONFIG_DIR = os.path.normpath(os.path.join(HERE, "..", "..", "configs"))


def _run_cli(config_path, out_dir):
    with open(config_path) as f:
        exp = json.load(f)["experiment"]
    parts = exp.split(":")
    args = ["limitlab", parts[0]] + (parts[1:] if parts[0] == "kcycle" else [])
    args += ["--config", config_path, "--out", out_dir]
    subprocess.run(args, check=True, capture_output=True)


@pytest.fixture(scope="session")
def demo_artifacts(tmp_path_factory):
    if shutil.which("limitlab") is None:
        pytest.skip("limitlab CLI not installed")
    if not os.path.isdir(CONFIG_DIR):
        pytest.skip("demo configs not found")
    root = tmp_path_factory.mktemp("artifacts")
    out = {}
    for name in sorted(os.listdir(CONFIG_DIR)):
        if not name.endswith(".json"):
            continue
        run_dir = str(root / name[:-5])
        _run_cli(os.path.join(CONFIG_DIR, name), run_dir)
        out[name[:-5]] = run_dir
    return out
