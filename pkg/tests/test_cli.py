"""Tests for the command-line interface: flags, files, exit codes.

Run in-process through main() so exit codes and outputs are checked
cheaply; the acceptance suite separately drives the installed entry point
in real subprocesses.
"""

import json

import pytest

from motivsim.cli import build_parser, main

TINY = json.dumps(
    {
        "name": "tinycli",
        "seed": 4,
        "world": {"width": 30, "height": 30},
        "entities": [{"kind": "food_source", "x": 20, "y": 15, "radius": 1}],
        "animats": [{"x": 15, "y": 15, "internal": {"hunger": 0.7}}],
        "ticks": 40,
    }
)


@pytest.fixture()
def tiny_path(tmp_path):
    path = tmp_path / "tiny.json"
    path.write_text(TINY)
    return path


def run_cli(*argv):
    return main([str(a) for a in argv])


# --- run -------------------------------------------------------------------


def test_run_writes_trace_and_metrics(tiny_path, tmp_path, capsys):
    out = tmp_path / "t"
    assert run_cli("run", "--scenario", tiny_path, "--seed", 42, "--out", out) == 0
    assert (out / "trace.jsonl").is_file()
    assert (out / "trace.csv").is_file()
    assert (out / "metrics.json").is_file()
    metrics = json.loads((out / "metrics.json").read_text())
    assert metrics["seed"] == 42
    assert "tinycli seed 42" in capsys.readouterr().out


def test_run_unknown_scenario_exits_2(tmp_path, capsys):
    assert run_cli("run", "--scenario", "nope", "--out", tmp_path / "x") == 2
    assert "unknown scenario" in capsys.readouterr().err


def test_run_invalid_scenario_file_exits_4(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"ticks": 0}')
    assert run_cli("run", "--scenario", bad, "--out", tmp_path / "x") == 4
    assert "ticks" in capsys.readouterr().err


def test_run_unwritable_output_exits_3(tiny_path, tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("file, not a directory")
    out = blocker / "sub"
    assert run_cli("run", "--scenario", tiny_path, "--out", out) == 3
    assert "cannot write" in capsys.readouterr().err


def test_run_twice_produces_identical_bytes(tiny_path, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run_cli("run", "--scenario", tiny_path, "--out", a)
    run_cli("run", "--scenario", tiny_path, "--out", b)
    for name in ("trace.jsonl", "trace.csv", "metrics.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_run_builtin_by_name(tmp_path):
    # Builtins resolve by bare name, no file needed.
    out = tmp_path / "builtin"
    code = run_cli("run", "--scenario", "abundant_food", "--seed", 1, "--out", out)
    assert code == 0
    assert (out / "metrics.json").is_file()


def test_run_format_flag_limits_outputs(tiny_path, tmp_path):
    out = tmp_path / "csvonly"
    run_cli("run", "--scenario", tiny_path, "--format", "csv", "--out", out)
    assert (out / "trace.csv").is_file()
    assert not (out / "trace.jsonl").exists()


def test_run_seed_range_fans_out_per_seed_dirs(tiny_path, tmp_path):
    out = tmp_path / "fan"
    assert run_cli("run", "--scenario", tiny_path, "--seeds", "3..5", "--out", out) == 0
    for seed in (3, 4, 5):
        metrics = json.loads((out / f"seed-{seed}" / "metrics.json").read_text())
        assert metrics["seed"] == seed
    assert not (out / "metrics.json").exists()


@pytest.mark.parametrize("bad", ["3-5", "a..b", "5..3"])
def test_run_rejects_malformed_seed_ranges(tiny_path, tmp_path, bad, capsys):
    assert run_cli("run", "--scenario", tiny_path, "--seeds", bad, "--out", tmp_path / "x") == 4
    assert "seeds" in capsys.readouterr().err


def test_out_dir_falls_back_to_environment(tiny_path, tmp_path, monkeypatch):
    env_out = tmp_path / "envout"
    monkeypatch.setenv("MOTIVSIM_OUT", str(env_out))
    assert run_cli("run", "--scenario", tiny_path) == 0
    assert (env_out / "trace.jsonl").is_file()


# --- replay ----------------------------------------------------------------------


def traced(tiny_path, tmp_path):
    out = tmp_path / "t"
    run_cli("run", "--scenario", tiny_path, "--out", out)
    return out / "trace.jsonl"


def test_replay_summarizes_a_trace(tiny_path, tmp_path, capsys):
    trace = traced(tiny_path, tmp_path)
    assert run_cli("replay", "--trace", trace) == 0
    out = capsys.readouterr().out
    assert "40 records" in out
    assert "final tick 39" in out


def test_replay_verify_passes_on_pristine_trace(tiny_path, tmp_path, capsys):
    trace = traced(tiny_path, tmp_path)
    assert run_cli("replay", "--trace", trace, "--verify") == 0
    assert "reproducible" in capsys.readouterr().out


def test_replay_verify_flags_tampering(tiny_path, tmp_path, capsys):
    trace = traced(tiny_path, tmp_path)
    lines = trace.read_text().splitlines()
    lines[5] = lines[5].replace('"tick":4', '"tick":400')
    trace.write_text("\n".join(lines) + "\n")
    assert run_cli("replay", "--trace", trace, "--verify") == 5
    assert "mismatch at line 6" in capsys.readouterr().err


def test_replay_missing_file_exits_4(tmp_path, capsys):
    assert run_cli("replay", "--trace", tmp_path / "absent.jsonl") == 4
    assert "cannot read" in capsys.readouterr().err


def test_replay_garbage_file_exits_4(tmp_path, capsys):
    junk = tmp_path / "junk.jsonl"
    junk.write_text("not a trace\n")
    assert run_cli("replay", "--trace", junk, "--verify") == 4
    assert "invalid trace" in capsys.readouterr().err


# --- metrics ---------------------------------------------------------------------


def test_metrics_recomputes_from_trace(tiny_path, tmp_path, capsys):
    out = tmp_path / "t"
    run_cli("run", "--scenario", tiny_path, "--out", out)
    capsys.readouterr()  # drop the run command's status line
    assert run_cli("metrics", "--trace", out / "trace.jsonl") == 0
    recomputed = json.loads(capsys.readouterr().out)
    stored = json.loads((out / "metrics.json").read_text())
    assert recomputed == stored


def test_metrics_writes_to_file_when_asked(tiny_path, tmp_path):
    out = tmp_path / "t"
    run_cli("run", "--scenario", tiny_path, "--out", out)
    target = tmp_path / "m.json"
    assert run_cli("metrics", "--trace", out / "trace.jsonl", "--out", target) == 0
    assert json.loads(target.read_text()) == json.loads((out / "metrics.json").read_text())


# --- list-scenarios and help ----------------------------------------------------------


def test_list_scenarios_prints_builtin_names(capsys):
    assert run_cli("list-scenarios") == 0
    names = capsys.readouterr().out.split()
    assert "scarce_food" in names
    assert "abundant_food" in names
    assert "reunion" in names
    assert names == sorted(names)


def test_every_flag_appears_in_its_subcommand_help():
    parser = build_parser()
    subactions = next(
        a for a in parser._actions if isinstance(a, type(parser._subparsers._group_actions[0]))
    )
    for name, sub in subactions.choices.items():
        text = sub.format_help()
        for action in sub._actions:
            for option in action.option_strings:
                assert option in text, f"{name}: {option} missing from --help"


def test_unknown_subcommand_is_a_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2
