"""Smoke test for the legdrain_py extension module.

Uses an installed module when importable; otherwise loads the shared library
from target/{release,debug} (build it first with `cargo build -p legdrain-py`).
"""

import importlib
import importlib.util
import math
import os
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    try:
        return importlib.import_module("legdrain_py")
    except ImportError:
        pass
    candidates = [os.environ.get("LEGDRAIN_PY_LIB")] + [
        ROOT / "target" / profile / "liblegdrain_py.so" for profile in ("release", "debug")
    ]
    for c in candidates:
        if c and Path(c).is_file():
            tmp = Path(tempfile.mkdtemp())
            dest = tmp / "legdrain_py.so"
            shutil.copy(c, dest)
            spec = importlib.util.spec_from_file_location("legdrain_py", dest)
            module = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(module)
            return module
    sys.exit("legdrain_py not found; run `cargo build -p legdrain-py` first")


def main():
    ld = load_module()

    assert ld.parse_citizenship("Belgium  DR Congo") == ("Belgium", "DR Congo", False)
    assert ld.parse_citizenship("France") == ("France", None, False)
    assert ld.parse_citizenship("Spain  Argentina  Italy") == ("Spain", "Argentina", True)
    try:
        ld.parse_citizenship("   ")
    except ValueError:
        pass
    else:
        raise AssertionError("blank citizenship accepted")

    england = ld.resolve_country("England")
    assert england.stats_code == "ENG" and england.wdi_code == "GBR", england
    assert not ld.resolve_country("Atlantis").matched

    assert ld.best_xi_value(list(range(1, 16))) == sum(range(5, 16))

    names = ["Intercept", "x"]
    rows = [[1.0, float(i)] for i in range(10)]
    ols = ld.fit_ols(names, rows, [2.0 + 3.0 * i for i in range(10)])
    assert abs(ols.coefficient("x") - 3.0) < 1e-10, ols.coefficients

    ppml = ld.fit_poisson(["Intercept"], [[1.0]] * 4, [1.0, 2.0, 3.0, 6.0])
    assert abs(ppml.coefficients[0] - math.log(3.0)) < 1e-10

    try:
        ld.fit_poisson(names, rows, [-1.0] * 10)
    except ld.EstimationError:
        pass
    else:
        raise AssertionError("negative outcome accepted")

    fits = ld.synthetic_gravity()
    assert [f.estimator for f in fits] == ["OLS", "PPML", "PPML", "Poisson"]
    for f in fits[1:]:
        assert abs(f.coefficient("Colonial tie (origin to dest.)") - 2.0) < 0.15

    with tempfile.TemporaryDirectory() as d:
        path = Path(d) / "players.csv"
        path.write_text(
            "id,name,citizenship,market_value_eur\n"
            "1,A,Germany  Ghana,40000000\n"
            "2,B,Germany,10000000\n"
            "3,C,France  Senegal,5000000\n"
        )
        ds = ld.load_players(str(path))
        assert len(ds) == 3
        stats = ds.stats()
        assert stats["dual_players"] == 2 and stats["total_value"] == 55_000_000
        flows = sorted(ds.flows())
        assert flows == [("Ghana", "Germany", 1, 40_000_000), ("Senegal", "France", 1, 5_000_000)]
        assert sum(net for *_, net in ds.summaries()) == 0
        bestxi = {row[0]: row for row in ds.bestxi()}
        assert bestxi["Germany"][3] == 40_000_000

    print("python smoke test passed")


if __name__ == "__main__":
    main()
