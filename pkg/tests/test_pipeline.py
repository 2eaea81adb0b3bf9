import math

import numpy as np
import pytest

from heunchain.config import RunConfig, Tolerances, parse_config
from heunchain.errors import ConfigError, EmptyGroundStateError, NonConvergenceError
from heunchain.models import SoQ3Params, Su11Params, Su2Params, TruncationConfig
from heunchain.pipeline import bench_conditioning, converge_su11, evaluate, run
from heunchain.results import CSV_COLUMNS, ResultRow, rows_from_csv, rows_from_json, rows_to_csv, rows_to_json

S1_WORKED = -0.25 * math.log(0.25) - 0.75 * math.log(0.75)
ROUNDOFF = 64 * np.finfo(float).eps


def worked_cfg(**kw):
    return RunConfig(Su2Params(2, math.pi / 2, 0.5), ell=1, **kw)


def test_run_both_methods():
    rows = run(worked_cfg())
    assert [r.method for r in rows] == ["via_commutant", "direct"]
    assert abs(rows[0].S1 - rows[1].S1) <= 1e-8
    assert rows[0].S1 == pytest.approx(S1_WORKED, abs=1e-12)
    assert rows[0].commutator_residual <= 1e-14
    assert rows[1].commutator_residual is None
    assert all(r.K == 1 and r.sites == 3 and not r.flags for r in rows)


def test_run_bits():
    rows = run(worked_cfg(method="direct", bits=True))
    assert rows[0].entropy_unit == "bits"
    assert rows[0].S1 == pytest.approx(S1_WORKED / math.log(2))


def test_uniform_flag():
    rows = run(RunConfig(SoQ3Params(12, 10, 0.01), ell=3, method="direct"))
    assert rows[0].uniform_chain
    assert not run(RunConfig(SoQ3Params(12, 9, 0.0), ell=3, method="direct"))[0].uniform_chain


def test_full_sweep():
    rows = run(RunConfig(Su2Params(8, 0.9, 0.1), ell_sweep=(0, 100, 1)))
    ells = [r.ell for r in rows]
    assert ells == sorted(ells) and ells[-1] == 8
    assert rows[-1].S1 <= 1e-8 and rows[-2].S1 <= 1e-8


def test_evaluate_rejects_ell():
    with pytest.raises(ConfigError):
        evaluate(Su2Params(2, 1.0, 0.1), 3)


def test_converge_example():
    row, trace = converge_su11(Su11Params(1.0, 0.4, -3.2), 4)
    assert row.K == 2
    assert 0 < row.S1 < 1
    res = [s.commutator_residual for s in trace]
    assert all(b <= a + ROUNDOFF for a, b in zip(res, res[1:]))
    assert trace[-1].S1_change <= 1e-10 and trace[-1].window_change <= 1e-10
    assert math.isinf(trace[0].window_change)


def test_converge_strictly_decreasing_residual():
    # large theta: the ell window needs a bigger truncation, so the residual
    # falls visibly with size
    row, trace = converge_su11(Su11Params(1.0, 3.0, -4.2), 4)
    res = [s.commutator_residual for s in trace]
    assert res[0] > 1e-4 and res[1] < 1e-2 * res[0] and res[2] < 1e-8
    assert all(b < a for a, b in zip(res[:3], res[1:3]))
    assert row.S1 == pytest.approx(0.679035016343903, abs=1e-10)


def test_converge_decoupled():
    row, trace = converge_su11(Su11Params(1.0, 0.0, -3.2), 4)
    assert row.S1 == 0.0
    assert len(trace) == 2


def test_converge_empty_sea():
    with pytest.raises(EmptyGroundStateError):
        converge_su11(Su11Params(1.0, 0.4, 0.0), 2)


def test_converge_window_too_small():
    with pytest.raises(ConfigError):
        converge_su11(Su11Params(1.0, 0.4, -3.2, TruncationConfig(initial_size=16)), 4)


def test_non_convergence_carries_trace():
    p = Su11Params(1.0, 3.0, -4.2, TruncationConfig(initial_size=32, max_size=64))
    with pytest.raises(NonConvergenceError) as info:
        converge_su11(p, 4)
    assert [s.size for s in info.value.trace] == [32, 64]


def test_su11_run_rows():
    rows = run(RunConfig(Su11Params(0.5, 1.0, -3.0), ell=3))
    assert len(rows) == 2
    assert abs(rows[0].S1 - rows[1].S1) <= 1e-10


def test_bench_uniform_chain():
    rep = bench_conditioning(SoQ3Params(101, 99, 0.0), 49)
    assert rep.direct_edge_count >= 25
    assert rep.commutant_min_gap_rel > 1e-6
    assert rep.valid
    assert rep.max_rayleigh_residual <= 1e-12


def test_bench_smoke():
    rep = bench_conditioning(Su2Params(3, 0.8, 0.1), 1)
    summary = rep.summary()
    assert all(v is not None for v in summary.values())
    lines = rep.to_csv().splitlines()
    assert len(lines) == 3 and lines[0].startswith("k,nu_direct")


def test_bench_negative_control():
    rep = bench_conditioning(Su2Params(10, 0.7, 0.11), 4, mu_shift=0.1)
    assert rep.max_rayleigh_residual > 1e-6
    assert not rep.valid


def test_bench_rejects_su11():
    with pytest.raises(ConfigError):
        bench_conditioning(Su11Params(1.0, 0.4, -3.2), 2)


def test_csv_json_round_trip():
    cfg = worked_cfg(include_spectra=True)
    rows = run(cfg)
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    back = rows_from_csv(text)
    back_json = rows_from_json(rows_to_json(rows))
    for r, c, j in zip(rows, back, back_json):
        assert c["S1"] == r.S1 == j.S1
        assert c["commutator_residual"] == r.commutator_residual == j.commutator_residual
        assert j.nu == r.nu
        assert c["method"] == r.method
    assert isinstance(back_json[0], ResultRow)


def test_parse_config_round():
    cfg = parse_config({"model": {"type": "su2", "two_s": 2, "theta": 1.0, "b": 0.5},
                        "ell_sweep": [0, 1, 1], "method": "via-commutant"})
    assert cfg.method == "via_commutant"
    assert cfg.ells(3) == [0, 1]
    assert parse_config({"model": {"type": "soq3", "root_order": 10, "rep_dim": 8, "b": 0.1},
                         "ell": 2}).ell == 2


@pytest.mark.parametrize("doc", [
    {"model": {"type": "su2", "two_s": 2, "theta": 1.0, "b": 0.5}},
    {"model": {"type": "su2", "two_s": 2, "theta": 1.0, "b": 0.5}, "ell": 1, "ell_sweep": [0, 1, 1]},
    {"model": {"type": "su2", "two_s": 2, "theta": 1.0}, "ell": 1},
    {"model": {"type": "nope"}, "ell": 1},
    {"model": {"type": "su2", "two_s": 2, "theta": 1.0, "b": 0.5}, "ell": 1, "extra": 3},
    {"model": {"type": "su2", "two_s": 2, "theta": 1.0, "b": 0.5}, "ell": 1, "method": "fast"},
    {"model": {"type": "su2", "two_s": 2, "theta": 1.0, "b": 0.5}, "ell": -1},
    {"model": {"type": "custom", "fields_B": [0, 0], "hoppings_J": [1.0]}, "ell": 1},
    {"model": {"type": "soq3", "root_order": 3, "rep_dim": 5, "b": 0}, "ell": 1},
])
def test_parse_config_errors(doc):
    with pytest.raises(ConfigError):
        parse_config(doc)


def test_custom_complex_model():
    cfg = parse_config({
        "model": {"type": "custom", "fields_B": [0.5, 0.5, 0.5],
                  "hoppings_J": [[0.0, 0.7071067811865476], [0.0, 0.7071067811865476]],
                  "lambda": [1, 0, -1, -2]},
        "ell": 1,
    })
    rows = run(cfg)
    assert rows[0].method == "via_commutant" and not rows[0].flags
    assert rows[0].S1 == pytest.approx(S1_WORKED, abs=1e-12)
    assert rows[1].S1 == pytest.approx(S1_WORKED, abs=1e-12)


def test_refused_commutant_falls_back():
    cfg = RunConfig(Su2Params(6, 0.0, 0.1), ell=2, method="via_commutant",
                    tolerances=Tolerances(commutator_tol=1e-8))
    row = run(cfg)[0]
    assert "commutant_refused" in row.flags
    assert row.method == "direct"
