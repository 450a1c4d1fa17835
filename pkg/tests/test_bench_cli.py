import csv
import io
import os
import subprocess
import sys

import pytest

from initarray import (
    CSV_COLUMNS,
    GeneralArray,
    Workload,
    parse_dump,
    rows_to_csv,
    run_sweep,
)
from initarray.cli import build_parser, main


def test_workload_plan():
    epochs, writes, reads = Workload(1000, 8, freq=0.1).plan()
    assert (epochs, writes, reads) == (100, 50, 50)
    # tiny frequencies still get a nonempty epoch
    epochs, writes, reads = Workload(1000, 8, freq=0.0001).plan()
    assert writes >= 1 and reads >= 1
    # saturating frequencies collapse to one epoch of everything
    epochs, writes, reads = Workload(100, 8, freq=10.0, ops=1000).plan()
    assert epochs == 1 and writes + reads == 1000


def test_run_sweep_rows_and_skips():
    skipped = []
    rows = run_sweep(
        [Workload(101, 8, freq=0.5, ops=400)],
        ["naive", "folklore", "special"],
        reps=2,
        skipped=skipped,
    )
    # special cannot take an odd length; it lands in the skip list instead
    assert [r.variant for r in rows] == ["naive", "folklore"]
    assert skipped == [("special", 101, 8)]
    for r in rows:
        assert r.word_accesses >= 1
        assert r.init_ns > 0 and r.read_ns > 0 and r.write_ns > 0
    by = {r.variant: r for r in rows}
    assert by["naive"].extra_bits == 0
    assert by["folklore"].extra_bits == 2 * 8 * 102


def test_csv_header_and_shape():
    rows = run_sweep([Workload(64, 8, freq=0.5, ops=200)], ["naive"], reps=1)
    text = rows_to_csv(rows)
    reader = csv.reader(io.StringIO(text))
    table = list(reader)
    assert tuple(table[0]) == CSV_COLUMNS
    assert len(table) == 2
    assert table[1][0] == "naive"
    float(table[1][4])  # numeric fields parse


def test_non_timing_fields_are_deterministic():
    def grab():
        rows = run_sweep(
            [Workload(256, 8, freq=0.5, ops=500, seed=9)],
            ["folklore", "special", "general"],
            reps=1,
        )
        return [(r.variant, r.word_accesses, r.extra_bits) for r in rows]

    assert grab() == grab()


def test_parser_defaults():
    args = build_parser().parse_args([])
    assert args.n == 4096 and args.elem_bits == 16 and args.variant == "all"
    assert args.ops == 10000 and args.seed == 1


def test_cli_simulate_w16(capsys):
    assert main(["--simulate-w16"]) == 0
    out = capsys.readouterr().out.strip()
    assert out == "1100110011001100"
    assert main(["--simulate-w16", "--value", "101", "--elem-bits", "3"]) == 0
    out = capsys.readouterr().out.strip()
    assert out == "0101101101101101"


def test_cli_simulate_w16_rejects_junk(capsys):
    assert main(["--simulate-w16", "--value", "10x1"]) == 2


def test_cli_check_ok(capsys):
    rc = main(["--check", "--n", "300", "--elem-bits", "9", "--ops", "2000"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.startswith("OK")


def test_cli_check_single_variant(capsys):
    rc = main(["--check", "--variant", "general", "--n", "600", "--elem-bits", "3",
               "--ops", "1500"])
    assert rc == 0
    assert capsys.readouterr().out.startswith("OK")


def test_cli_bad_shape_exits_2(capsys):
    assert main(["--n", "0"]) == 2
    assert main(["--elem-bits", "300"]) == 2


def test_cli_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as e:
        build_parser().parse_args(["--frequency", "1"])
    assert e.value.code == 2


def test_cli_sweep_stdout(capsys):
    rc = main(["--n", "128", "--elem-bits", "8", "--variant", "naive",
               "--freq", "0.5", "--ops", "200"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.splitlines()[0] == ",".join(CSV_COLUMNS)


def test_cli_sweep_writes_csv_and_figure(tmp_path, capsys):
    target = tmp_path / "sweep.csv"
    rc = main(["--n", "256", "--elem-bits", "8", "--variant", "all",
               "--freq", "0.1", "--freq", "1.0", "--ops", "300",
               "--csv", str(target)])
    capsys.readouterr()
    assert rc == 0
    assert target.exists()
    figure = tmp_path / "sweep.png"
    assert figure.exists() and figure.stat().st_size > 1000
    with open(target, newline="") as fh:
        table = list(csv.reader(fh))
    assert tuple(table[0]) == CSV_COLUMNS
    assert len(table) == 1 + 2 * 5  # two frequencies, five variants


def test_cli_no_plot(tmp_path, capsys):
    target = tmp_path / "quiet.csv"
    rc = main(["--n", "128", "--elem-bits", "8", "--variant", "naive",
               "--freq", "0.5", "--ops", "200", "--csv", str(target), "--no-plot"])
    capsys.readouterr()
    assert rc == 0
    assert target.exists()
    assert not (tmp_path / "quiet.png").exists()


def test_cli_dump_is_parseable(tmp_path, capsys):
    target = tmp_path / "state.bin"
    rc = main(["--check", "--variant", "general", "--n", "600", "--elem-bits", "3",
               "--ops", "500", "--dump", str(target)])
    capsys.readouterr()
    assert rc == 0
    blob = target.read_bytes()
    word_bits, elem_bits, n, flag, words = parse_dump(blob)
    assert (word_bits, elem_bits, n) == (64, 3, 600)
    assert len(words) == (600 * 3 + 63) // 64
    back = GeneralArray.from_dump(blob)
    assert back.n == 600


def test_cli_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "initarray.cli", "--simulate-w16"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "1100110011001100"
