import json

import pytest

from focuse.cli import main

FIG1_TEXT = "<> <a> <b,c> <> <d> <a>"

NET_SRC = """\
component Identity
  in x
  out y
  trans x = any ==> y = x
end

net Main
  in ein
  out eout
  use A = Identity
  wire ein -> A.x
  wire A.y -> eout
end
"""

CYCLE_SRC = """\
component Identity
  in x
  out y
  trans x = any ==> y = x
end

net Loop
  use A = Identity
  use B = Identity
  wire A.y -> B.x
  wire B.y -> A.x
end
"""


@pytest.fixture
def fig1_file(tmp_path):
    path = tmp_path / "fig1.fstream"
    path.write_text(FIG1_TEXT + "\n")
    return str(path)


@pytest.fixture
def net_file(tmp_path):
    path = tmp_path / "main.fnet"
    path.write_text(NET_SRC)
    return str(path)


class TestConvert:
    def test_to_event(self, fig1_file, capsys):
        assert main(["convert", "--to-event", fig1_file]) == 0
        assert capsys.readouterr().out == "<a> <b,c> <d> <a>\n"

    def test_to_event_identity_shape(self, tmp_path, capsys):
        path = tmp_path / "s.fstream"
        path.write_text("<a> <b>")
        assert main(["convert", "--to-event", str(path)]) == 0
        assert capsys.readouterr().out == "<a> <b>\n"

    def test_to_timed_with_schedule(self, tmp_path, capsys):
        path = tmp_path / "e.fstream"
        path.write_text("<a>")
        assert main(["convert", "--to-timed", "--schedule", "3", str(path)]) == 0
        assert capsys.readouterr().out == "<> <> <> <a>\n"

    def test_round_trip_through_cli(self, fig1_file, tmp_path, capsys):
        out = tmp_path / "event.fstream"
        assert main(["convert", "--to-event", fig1_file, "-o", str(out)]) == 0
        assert main([
            "convert", "--to-timed", "--schedule", "1,2,4,5", str(out)
        ]) == 0
        assert capsys.readouterr().out == FIG1_TEXT + "\n"

    def test_parse_failure_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.fstream"
        path.write_text("<a b>")
        assert main(["convert", "--to-event", str(path)]) == 2
        assert "expected ',' or '>'" in capsys.readouterr().err

    def test_schedule_mismatch_exits_2(self, tmp_path, capsys):
        path = tmp_path / "e.fstream"
        path.write_text("<a> <b>")
        assert main(["convert", "--to-timed", "--schedule", "0", str(path)]) == 2

    def test_schedule_required(self, tmp_path):
        path = tmp_path / "e.fstream"
        path.write_text("<a>")
        assert main(["convert", "--to-timed", str(path)]) == 2

    def test_json_format(self, fig1_file, capsys):
        assert main(["convert", "--to-event", fig1_file, "--format", "json"]) == 0
        assert json.loads(capsys.readouterr().out) == {"stream": "<a> <b,c> <d> <a>"}

    def test_missing_file(self, capsys):
        assert main(["convert", "--to-event", "/nonexistent.fstream"]) == 2


class TestSimulate:
    def test_identity_network(self, net_file, fig1_file, tmp_path, capsys):
        trace_path = tmp_path / "trace.jsonl"
        code = main([
            "simulate", net_file, "--input", f"ein={fig1_file}",
            "-T", "6", "--trace", str(trace_path),
        ])
        assert code == 0
        lines = trace_path.read_text().splitlines()
        assert len(lines) == 6
        last = json.loads(lines[-1])
        assert last["channels"]["eout"] == ["a"]
        out = capsys.readouterr().out
        assert "simulated 6 intervals" in out

    def test_trace_byte_identical(self, net_file, fig1_file, tmp_path):
        paths = [tmp_path / "a.jsonl", tmp_path / "b.jsonl"]
        for path in paths:
            main(["simulate", net_file, "--input", f"ein={fig1_file}",
                  "-T", "6", "--trace", str(path)])
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_zero_intervals(self, net_file, fig1_file, tmp_path):
        trace_path = tmp_path / "trace.jsonl"
        assert main([
            "simulate", net_file, "--input", f"ein={fig1_file}",
            "-T", "0", "--trace", str(trace_path),
        ]) == 0
        assert trace_path.read_text() == ""

    def test_undelayed_cycle_exits_2(self, tmp_path, capsys):
        path = tmp_path / "loop.fnet"
        path.write_text(CYCLE_SRC)
        assert main(["simulate", str(path), "-T", "1"]) == 2
        err = capsys.readouterr().err
        assert "undelayed cycle" in err and "A" in err and "B" in err

    def test_missing_input_exits_2(self, net_file):
        assert main(["simulate", net_file, "-T", "2"]) == 2

    def test_warn_on_assumption_violation(self, tmp_path, fig1_file, capsys):
        src = (
            "component OneAtATime\n"
            "  in x\n"
            "  out y\n"
            "  asm x = <> | x = msg(m)\n"
            "  trans x = any ==> y = x\n"
            "end\n\n"
            "net N\n  in ein\n  out eout\n  use A = OneAtATime\n"
            "  wire ein -> A.x\n  wire A.y -> eout\nend\n"
        )
        path = tmp_path / "asm.fnet"
        path.write_text(src)
        assert main(["simulate", str(path), "--input", f"ein={fig1_file}",
                     "-T", "6"]) == 0
        out = capsys.readouterr().out
        assert "WARN assumption of A violated at intervals 2" in out

    def test_json_summary(self, net_file, fig1_file, capsys):
        assert main(["simulate", net_file, "--input", f"ein={fig1_file}",
                     "-T", "6", "--format", "json"]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["intervals"] == 6
        assert summary["channels"]["eout"] == 5


class TestCheck:
    def _props(self, tmp_path, text):
        path = tmp_path / "props.fprop"
        path.write_text(text)
        return str(path)

    def test_holds_exit_0(self, tmp_path, fig1_file, capsys):
        props = self._props(tmp_path, "first a before d in s\n")
        assert main(["check", props, "--stream", f"s={fig1_file}"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("HOLDS first a before d in s")

    def test_violated_exit_1_with_witness(self, tmp_path, fig1_file, capsys):
        props = self._props(tmp_path, "first d before a in s\n")
        assert main(["check", props, "--stream", f"s={fig1_file}"]) == 1
        out = capsys.readouterr().out
        assert out.startswith("VIOLATED first d before a in s")
        assert "a at ci 0 in s" in out

    def test_missing_stream_exit_2(self, tmp_path, fig1_file, capsys):
        props = self._props(tmp_path, "occurs(a) in ghost\n")
        assert main(["check", props, "--stream", f"s={fig1_file}"]) == 2
        assert "ghost" in capsys.readouterr().err

    def test_check_against_trace(self, tmp_path, net_file, fig1_file, capsys):
        trace_path = tmp_path / "trace.jsonl"
        main(["simulate", net_file, "--input", f"ein={fig1_file}",
              "-T", "6", "--trace", str(trace_path)])
        capsys.readouterr()
        props = self._props(
            tmp_path, "first a before d in eout\nci(ein,0) before ci(A.y,1)\n"
        )
        assert main(["check", props, "--trace", str(trace_path)]) == 0
        out = capsys.readouterr().out.splitlines()
        assert all(line.startswith("HOLDS") for line in out)

    def test_event_stream_binding(self, tmp_path, capsys):
        stream = tmp_path / "e.fstream"
        stream.write_text("<a> <b>")
        props = self._props(tmp_path, "ci(e,0) before ci(e,1)\n")
        assert main(["check", props, "--event-stream", f"e={stream}"]) == 0

    def test_unsupported_comparison_exit_2(self, tmp_path, capsys):
        s1 = tmp_path / "s1.fstream"
        s1.write_text("<a>")
        s2 = tmp_path / "s2.fstream"
        s2.write_text("<b>")
        props = self._props(tmp_path, "ci(s1,0) before ci(s2,0)\n")
        assert main(["check", props, "--event-stream", f"s1={s1}",
                     "--event-stream", f"s2={s2}"]) == 2

    def test_json_report(self, tmp_path, fig1_file, capsys):
        props = self._props(tmp_path, "occurs(c) in s\n")
        assert main(["check", props, "--stream", f"s={fig1_file}",
                     "--format", "json"]) == 0
        [report] = json.loads(capsys.readouterr().out)
        assert report["holds"] is True
        assert report["witnesses"] == [{"stream": "s", "index": 1, "message": "c"}]

    def test_no_ansi_when_not_a_tty(self, tmp_path, fig1_file, capsys):
        props = self._props(tmp_path, "occurs(a) in s\n")
        main(["check", props, "--stream", f"s={fig1_file}"])
        assert "\x1b[" not in capsys.readouterr().out


class TestValidate:
    def test_well_formed_component(self, tmp_path, capsys):
        path = tmp_path / "ok.fcomp"
        path.write_text(
            "component Identity\n  in x\n  out y\n"
            "  trans x = any ==> y = x\nend\n"
        )
        assert main(["validate", str(path)]) == 0
        assert capsys.readouterr().out == "0 errors, 0 warnings\n"

    def test_duplicate_channel(self, tmp_path, capsys):
        path = tmp_path / "dup.fcomp"
        path.write_text("component C\n  in x, x\n  trans ==>\nend\n")
        assert main(["validate", str(path)]) == 1
        captured = capsys.readouterr()
        assert "DUP_NAME" in captured.err
        assert captured.out == "1 errors, 0 warnings\n"

    def test_binary_garbage(self, tmp_path):
        path = tmp_path / "junk.fnet"
        path.write_bytes(bytes(range(256)) * 4)
        assert main(["validate", str(path)]) == 1

    def test_unknown_extension(self, tmp_path):
        path = tmp_path / "spec.txt"
        path.write_text("hello")
        assert main(["validate", str(path)]) == 2

    def test_warning_only_exits_0(self, tmp_path, capsys):
        path = tmp_path / "warn.fcomp"
        path.write_text("component C\n  in x\nend\n")
        assert main(["validate", str(path)]) == 0
        captured = capsys.readouterr()
        assert "NO_TRANSITIONS" in captured.err
        assert captured.out == "0 errors, 1 warnings\n"

    def test_json_diagnostics(self, tmp_path, capsys):
        path = tmp_path / "dup.fcomp"
        path.write_text("component C\n  in x, x\n  trans ==>\nend\n")
        assert main(["validate", str(path), "--format", "json"]) == 1
        diags = json.loads(capsys.readouterr().out)
        assert any(d["code"] == "DUP_NAME" and d["line"] == 2 for d in diags)

    def test_stream_file(self, tmp_path, capsys):
        path = tmp_path / "s.fstream"
        path.write_text("<a b>")
        assert main(["validate", str(path)]) == 1
