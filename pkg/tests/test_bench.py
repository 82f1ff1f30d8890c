from dataclasses import replace

import numpy as np
import pytest

from runsort.bench import (
    ExperimentSpec,
    ResultRow,
    main,
    read_csv,
    read_profiles,
    run_experiment,
    verify_bounds,
    write_csv,
    write_profiles,
)
from runsort.gen import RunProfile, save_array


def spec(**kw):
    base = dict(algorithms=("powersort",), generator="permutation", n=1000,
                seeds=(1,), reps=1)
    base.update(kw)
    return ExperimentSpec(**base)


def test_spec_validation():
    with pytest.raises(ValueError):
        spec(algorithms=("quicksort",))
    with pytest.raises(ValueError):
        spec(generator="fractal")
    with pytest.raises(ValueError):
        spec(n=-1)
    with pytest.raises(ValueError):
        spec(reps=0)
    with pytest.raises(ValueError):
        spec(generator="file")


def test_single_row_shape():
    rows, profiles = run_experiment(spec())
    assert len(rows) == 1 and len(profiles) == 1
    row = rows[0]
    assert row.algo == "powersort" and row.n == 1000
    assert row.merge_cost > 0
    assert row.normalized_cost > 0


def test_multi_algorithm_same_input():
    s = spec(algorithms=("peeksort", "powersort"), generator="random-runs",
             n=4000, mean_len=50, seeds=(1, 2), reps=2,
             min_run_len=1, merge_kind="classic")
    rows, _ = run_experiment(s)
    assert len(rows) == 2 * 2 * 2
    # repetitions of the same (seed, algo) see identical inputs: metrics equal
    by = {(r.seed, r.rep, r.algo): r for r in rows}
    for seed in (1, 2):
        for algo in ("peeksort", "powersort"):
            a, b = by[(seed, 0, algo)], by[(seed, 1, algo)]
            assert (a.merge_cost, a.comparisons) == (b.merge_cost, b.comparisons)
    # both algorithms saw the same entropy/profile
    assert by[(1, 0, "peeksort")].entropy_H == by[(1, 0, "powersort")].entropy_H


def test_adaptive_beats_blind_normalizer():
    s = spec(algorithms=("powersort",), generator="random-runs",
             n=100_000, mean_len=1000, seeds=(3,))
    rows, _ = run_experiment(s)
    assert rows[0].normalized_cost < 1.0


def test_file_generator(tmp_path):
    path = tmp_path / "input.bin"
    save_array(path, np.arange(100, 0, -1))
    rows, profiles = run_experiment(
        spec(generator="file", n=100, input_path=str(path)))
    assert rows[0].runs_detected == 1  # one descending run
    assert profiles[0][1].r == 1


def test_memory_guard():
    with pytest.raises(MemoryError):
        run_experiment(spec(n=1 << 48))


# --- bound verification ---------------------------------------------------------


def test_verify_bounds_clean():
    s = spec(algorithms=("peeksort", "powersort"), generator="random-runs",
             n=20_000, mean_len=100, seeds=(1, 2, 3),
             min_run_len=1, merge_kind="classic")
    rows, profiles = run_experiment(s)
    report = verify_bounds(rows, dict(profiles))
    assert report.ok and report.checked == 6


def test_verify_bounds_sorted_input_trivial():
    rows, profiles = run_experiment(
        spec(algorithms=("peeksort",), generator="random-runs",
             n=5000, mean_len=10**9, seeds=(1,),
             min_run_len=1, merge_kind="classic"))
    assert rows[0].merge_cost == 0
    assert verify_bounds(rows, dict(profiles)).ok


def test_verify_bounds_six_run_instance():
    from runsort.gen import from_run_lengths, run_profile
    from runsort.sorters import SORTERS, SortConfig
    from runsort.runcore import Metrics

    a = from_run_lengths([5, 3, 3, 14, 1, 2])
    prof = run_profile(a)
    m = Metrics()
    SORTERS["peeksort"](a.copy(), SortConfig(min_run_len=1, merge_kind="classic"), m)
    row = ResultRow("peeksort", "file", 28, 0, 0, 0, m.merge_cost,
                    m.comparisons, m.runs_detected, 0, 0.0, 0.0)
    report = verify_bounds([row], {0: prof})
    assert m.merge_cost == 65
    assert report.ok


def test_verify_bounds_refuses_wrong_mode():
    with pytest.raises(ValueError):
        verify_bounds([], min_run_len=24)
    with pytest.raises(ValueError):
        verify_bounds([], merge_kind="bitonic")


def test_verify_bounds_flags_violation():
    row = ResultRow("powersort", "permutation", 1000, 1, 0, 0,
                    10**9, 10**9, 10, 5, 2.0, 1.0)
    report = verify_bounds([row], {1: RunProfile((500, 500))})
    assert not report.ok
    assert {v.bound for v in report.violations} == {
        "powersort merge cost", "powersort comparisons"}


# --- CSV / profiles ---------------------------------------------------------------


def test_csv_round_trip(tmp_path):
    rows, profiles = run_experiment(
        spec(algorithms=("peeksort", "bottom-up"), seeds=(1, 2)))
    path = tmp_path / "out.csv"
    write_csv(rows, path)
    assert read_csv(path) == rows
    write_csv([], path)
    assert path.read_text().count("\n") == 1
    assert read_csv(path) == []


def test_profiles_round_trip(tmp_path):
    profiles = [(1, RunProfile((3, 2, 7))), (9, RunProfile((1,)))]
    path = tmp_path / "p.bin"
    write_profiles(profiles, path)
    assert read_profiles(path) == dict(profiles)


def test_csv_write_failure_has_path_context(tmp_path):
    with pytest.raises(OSError, match="no/such"):
        write_csv([], tmp_path / "no" / "such" / "dir.csv")


# --- CLI -------------------------------------------------------------------------


def test_cli_run_and_verify(tmp_path):
    out = tmp_path / "res.csv"
    prof = tmp_path / "prof.bin"
    code = main(["run", "--algo", "peeksort,powersort", "--gen", "random-runs",
                 "--n", "5000", "--mean-len", "50", "--seeds", "2",
                 "--min-run-len", "1", "--merge", "classic", "--warmup", "0",
                 "--verify-bounds", "--out", str(out), "--profiles", str(prof)])
    assert code == 0
    assert len(read_csv(out)) == 4
    assert main(["verify", "--in", str(out), "--profiles", str(prof)]) == 0


def test_cli_rejects_unknown_algorithm(tmp_path, capsys):
    code = main(["run", "--algo", "bogosort", "--gen", "permutation",
                 "--n", "10"])
    assert code == 2
    assert "unknown algorithm" in capsys.readouterr().err


def test_cli_determinism_modulo_time(tmp_path):
    argv = ["run", "--algo", "powersort,alpha-stack", "--gen", "random-runs",
            "--n", "3000", "--mean-len", "30", "--seeds", "3", "--reps", "2",
            "--warmup", "0"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    rows_a = [replace(r, time_ns=0) for r in read_csv(a)]
    rows_b = [replace(r, time_ns=0) for r in read_csv(b)]
    assert rows_a == rows_b
