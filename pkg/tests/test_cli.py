import json

import numpy as np

from mapproc import serialize
from mapproc.cli import main
from mapproc.qcore import pauli, trace_distance
from mapproc.qid import qid_povm, sic_program


def run(tmp_path, *argv):
    out = tmp_path / f"out{len(argv)}.json"
    code = main([*argv, "--output", str(out)])
    return code, out


def write_json(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def sic_povm_file(tmp_path):
    elements = [np.asarray(f) for f in qid_povm(sic_program()).elements]
    return write_json(tmp_path, "sic.json", serialize.encode_povm(elements))


def mixed_state_file(tmp_path):
    return write_json(
        tmp_path, "mixed.json", serialize.encode_operator(np.eye(2, dtype=complex) / 2)
    )


def measurements_file(tmp_path, name="ms.json"):
    sx = {
        "dim": 2,
        "basis": [
            serialize.encode_state(np.array([1, 1]) / np.sqrt(2)),
            serialize.encode_state(np.array([1, -1]) / np.sqrt(2)),
        ],
    }
    sz = {
        "dim": 2,
        "basis": [
            serialize.encode_state(np.array([1.0, 0.0])),
            serialize.encode_state(np.array([0.0, 1.0])),
        ],
    }
    return write_json(tmp_path, name, {"measurements": [sx, sz]})


class TestQidPovm:
    def test_sic_flag_emits_tetrahedron(self, tmp_path):
        code, out = run(tmp_path, "qid-povm", "--sic")
        assert code == 0
        doc = json.loads(out.read_text())
        f0 = serialize.decode_operator(doc["elements"][0])
        expected = 0.25 * (np.eye(2) + (pauli(1) + pauli(2) + pauli(3)) / np.sqrt(3))
        assert np.max(np.abs(f0 - expected)) < 1e-12
        assert doc["informationally_complete"] is True
        assert doc["manifest"]["command"] == "qid-povm"

    def test_trivial_program_file(self, tmp_path):
        prog = write_json(tmp_path, "p.json", {"alpha": [[1, 0], [0, 0], [0, 0], [0, 0]]})
        code, out = run(tmp_path, "qid-povm", prog)
        doc = json.loads(out.read_text())
        assert code == 0
        assert doc["informationally_complete"] is False
        for el in doc["elements"]:
            assert np.allclose(serialize.decode_operator(el), np.eye(2) / 4, atol=1e-12)

    def test_two_amplitude_program(self, tmp_path):
        s = 1 / np.sqrt(2)
        prog = write_json(tmp_path, "p.json", {"alpha": [[s, 0], [s, 0], [0, 0], [0, 0]]})
        code, out = run(tmp_path, "qid-povm", prog)
        doc = json.loads(out.read_text())
        assert doc["informationally_complete"] is False
        assert np.allclose(doc["anchor_bloch"], [1, 0, 0], atol=1e-12)

    def test_non_normalized_program_exits_2(self, tmp_path, capsys):
        prog = write_json(tmp_path, "p.json", {"alpha": [[1, 0], [1, 0], [0, 0], [0, 0]]})
        code, _ = run(tmp_path, "qid-povm", prog)
        assert code == 2
        assert "normalized" in capsys.readouterr().err


class TestQidProgram:
    def test_pauli_axis_includes_partition(self, tmp_path):
        code, out = run(tmp_path, "qid-program", "--pauli-axis", "2")
        doc = json.loads(out.read_text())
        assert code == 0
        assert doc["partition"]["blocks"] == [[0, 2], [1, 3]]
        s = 1 / np.sqrt(2)
        assert np.allclose(doc["alpha"], [[s, 0], [0, 0], [s, 0], [0, 0]], atol=1e-15)

    def test_unitary_program(self, tmp_path):
        code, out = run(tmp_path, "qid-program", "--unitary", "0", "0", "0")
        doc = json.loads(out.read_text())
        assert doc["alpha"] == [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]

    def test_requires_exactly_one_mode(self, tmp_path):
        code, _ = run(tmp_path, "qid-program")
        assert code == 2


class TestSimulate:
    def test_zero_samples(self, tmp_path):
        code, out = run(
            tmp_path, "simulate", mixed_state_file(tmp_path), sic_povm_file(tmp_path), "--n", "0"
        )
        doc = json.loads(out.read_text())
        assert code == 0
        assert doc["outcome_counts"] == [0, 0, 0, 0]

    def test_same_seed_gives_identical_bytes(self, tmp_path):
        state = mixed_state_file(tmp_path)
        povm = sic_povm_file(tmp_path)
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        for out in (out1, out2):
            assert main(
                ["simulate", state, povm, "--n", "5000", "--seed", "9", "--output", str(out)]
            ) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_reference_seed_counts_are_balanced(self, tmp_path):
        code, out = run(
            tmp_path,
            "simulate", mixed_state_file(tmp_path), sic_povm_file(tmp_path),
            "--n", "1000000",
        )
        counts = json.loads(out.read_text())["outcome_counts"]
        assert sum(counts) == 10**6
        assert all(245000 <= c <= 255000 for c in counts)

    def test_malformed_json_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _ = run(tmp_path, "simulate", str(bad), sic_povm_file(tmp_path), "--n", "10")
        assert code == 2
        assert "invalid JSON" in capsys.readouterr().err


class TestReconstruct:
    def test_uniform_probabilities(self, tmp_path):
        probs = write_json(tmp_path, "p.json", {"probabilities": [0.25, 0.25, 0.25, 0.25]})
        code, out = run(tmp_path, "reconstruct", probs, sic_povm_file(tmp_path))
        doc = json.loads(out.read_text())
        state = serialize.decode_operator(doc["state"])
        assert trace_distance(state, np.eye(2) / 2) < 1e-12

    def test_round_trip_ground_state(self, tmp_path):
        elements = [np.asarray(f) for f in qid_povm(sic_program()).elements]
        rho = np.diag([1.0, 0.0]).astype(complex)
        p = [float(np.trace(rho @ f).real) for f in elements]
        probs = write_json(tmp_path, "p.json", {"probabilities": p})
        code, out = run(tmp_path, "reconstruct", probs, sic_povm_file(tmp_path))
        state = serialize.decode_operator(json.loads(out.read_text())["state"])
        assert trace_distance(state, rho) < 1e-10

    def test_counts_with_projection(self, tmp_path):
        counts = write_json(tmp_path, "c.json", {"outcome_counts": [1, 0, 0, 0]})
        code, out = run(tmp_path, "reconstruct", counts, sic_povm_file(tmp_path), "--project")
        doc = json.loads(out.read_text())
        assert code == 0
        assert doc["diagnostics"]["projected"] is True
        assert min(doc["diagnostics"]["eigenvalues"]) < -0.5
        state = serialize.decode_operator(doc["state"])
        assert np.linalg.eigvalsh(state).min() > -1e-12

    def test_pvm_input_exits_3_naming_rank(self, tmp_path, capsys):
        pvm = write_json(
            tmp_path,
            "pvm.json",
            serialize.encode_povm([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]),
        )
        probs = write_json(tmp_path, "p.json", {"probabilities": [0.5, 0.5]})
        code, _ = run(tmp_path, "reconstruct", probs, pvm)
        assert code == 3
        assert "rank-2" in capsys.readouterr().err


class TestVnCommands:
    def test_check_four_outcome_pairing(self, tmp_path):
        ms = measurements_file(tmp_path)
        code, out = run(
            tmp_path,
            "vn-check", ms,
            "--pairing", "[[0,0],[0,1],[1,1],[1,0]]",
            "--weights", "[0.5,0.5,0.5,0.5]",
        )
        doc = json.loads(out.read_text())
        assert code == 0
        assert abs(doc["scalar"][0] - 0.5) < 1e-12 and abs(doc["scalar"][1]) < 1e-12
        s = serialize.decode_operator(doc["condition_operator"])
        assert np.max(np.abs(s - 0.5 * np.eye(2))) < 1e-12

    def test_check_index_pairing_requires_orthogonal_programs(self, tmp_path):
        code, out = run(tmp_path, "vn-check", measurements_file(tmp_path))
        doc = json.loads(out.read_text())
        assert doc["scalar"] is None
        assert doc["orthogonal_programs_required"] is True

    def test_synth_two_measurements(self, tmp_path):
        code, out = run(tmp_path, "vn-synth", measurements_file(tmp_path))
        doc = json.loads(out.read_text())
        assert code == 0
        proc = serialize.decode_processor(doc["processor"])
        assert proc.gate.shape == (8, 8)
        assert all(rec["realized"] for rec in doc["measurements"])
        assert all(rec["postulate_compliant"] for rec in doc["measurements"])

    def test_synth_overlapping_slots_exits_3(self, tmp_path, capsys):
        code, _ = run(
            tmp_path,
            "vn-synth", measurements_file(tmp_path),
            "--slots", "[[0,1],[1,2]]", "--program-dim", "3",
        )
        assert code == 3
        assert "isometry" in capsys.readouterr().err

    def test_relaxed_two_qubit_pvms(self, tmp_path):
        code, out = run(tmp_path, "vn-relaxed", measurements_file(tmp_path))
        doc = json.loads(out.read_text())
        assert code == 0
        proc = serialize.decode_processor(doc["processor"])
        assert proc.program_dim == 2
        assert all(rec["realized"] for rec in doc["measurements"])

    def test_relaxed_three_qubit_pvms_exits_3(self, tmp_path, capsys):
        sy = {
            "dim": 2,
            "basis": [
                serialize.encode_state(np.array([1, 1j]) / np.sqrt(2)),
                serialize.encode_state(np.array([1, -1j]) / np.sqrt(2)),
            ],
        }
        doc = json.loads(open(measurements_file(tmp_path)).read())
        doc["measurements"].append(sy)
        ms = write_json(tmp_path, "three.json", doc)
        code, _ = run(tmp_path, "vn-relaxed", ms)
        assert code == 3
        assert "at most" in capsys.readouterr().err


class TestBlochExport:
    def test_sic_tetrahedron_csv(self, tmp_path):
        out = tmp_path / "points.csv"
        assert main(["bloch-export", "--sic", "--output", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# manifest:")
        assert lines[1] == "label,x,y,z"
        rows = [line.split(",") for line in lines[2:]]
        assert [r[0] for r in rows] == ["F0", "F1", "F2", "F3"]
        coords = np.array([[float(x) for x in r[1:]] for r in rows])
        assert np.allclose(np.linalg.norm(coords, axis=1), 1.0, atol=1e-12)
        assert np.allclose(coords[0], np.full(3, 1 / np.sqrt(3)), atol=1e-12)

    def test_byte_identical_runs(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            assert main(["bloch-export", "--sic", "--output", str(path)]) == 0
        assert a.read_bytes() == b.read_bytes()


def test_stdout_and_stdin_streams(tmp_path, capsys, monkeypatch):
    import io

    assert main(["qid-program", "--sic", "--output", "-"]) == 0
    doc = json.loads(capsys.readouterr().out)
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps({"alpha": doc["alpha"]})))
    assert main(["qid-povm", "-", "--output", "-"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["informationally_complete"] is True


def test_no_command_prints_help_and_exits_2(capsys):
    assert main([]) == 2
    assert "usage" in capsys.readouterr().out
