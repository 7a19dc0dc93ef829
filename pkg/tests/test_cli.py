import json
import subprocess
import sys

import pytest

from ordgames import cli

GAMMA1_MODEL = {
    "dim": 1,
    "subspaces": [[]],
    "compacts": [[["1"]]],
    "functionals": [["1"]],
    "epsilon": "1/2",
    "norm": "max",
}


def run_cli(capsys, *argv):
    code = cli.run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestOrd:
    def test_add(self, capsys):
        assert run_cli(capsys, "ord", "add", "w", "1") == (0, "w+1\n", "")

    def test_cmp(self, capsys):
        assert run_cli(capsys, "ord", "cmp", "w+1", "w*2")[1] == "less\n"
        assert run_cli(capsys, "ord", "cmp", "w", "w")[1] == "equal\n"
        assert run_cli(capsys, "ord", "cmp", "w^(w)", "w^3*9")[1] == "greater\n"

    def test_mul_pow_quotrem(self, capsys):
        assert run_cli(capsys, "ord", "mul", "w+1", "2")[1] == "w*2+1\n"
        assert run_cli(capsys, "ord", "pow", "w")[1] == "w^(w)\n"
        assert run_cli(capsys, "ord", "quotrem", "w^2*3+w+4", "2")[1] == "3 w+4\n"
        assert run_cli(capsys, "ord", "quotrem", "w^2", "2", "--above")[1] == "0 w^(2)\n"

    def test_domain_error_exit_code(self, capsys):
        code, out, err = run_cli(capsys, "ord", "add", "x", "1")
        assert code == 1 and out == "" and "error" in err

    def test_usage_error_exit_code(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            cli.run(["ord", "frobnicate"])
        assert excinfo.value.code == 2


class TestTree:
    def test_validate_order_rank_derive(self, capsys, tmp_path):
        tree_file = tmp_path / "tree.json"
        tree_file.write_text(json.dumps({"nodes": [["3"], ["3", "2"], ["3", "2", "1"]]}))
        assert run_cli(capsys, "tree", "validate", str(tree_file))[1] == "true\n"
        assert run_cli(capsys, "tree", "order", str(tree_file))[1] == "3\n"
        assert run_cli(capsys, "tree", "rank", str(tree_file), "3,2")[1] == "1\n"
        code, out, _ = run_cli(capsys, "tree", "derive", str(tree_file))
        assert code == 0
        assert json.loads(out) == {"nodes": [["3"], ["3", "2"]]}

    def test_invalid_tree(self, capsys, tmp_path):
        tree_file = tmp_path / "bad.json"
        tree_file.write_text(json.dumps({"nodes": [["3", "2"]]}))
        assert run_cli(capsys, "tree", "validate", str(tree_file))[1] == "false\n"
        assert run_cli(capsys, "tree", "order", str(tree_file))[0] == 1


class TestFamily:
    def test_member_and_maximal(self, capsys):
        assert run_cli(capsys, "family", "member", "Gamma", "1", "3,2")[1] == "true\n"
        assert run_cli(capsys, "family", "member", "Gamma", "1", "2,2")[1] == "false\n"
        assert run_cli(capsys, "family", "maximal", "Gamma", "1", "3,2,1")[1] == "true\n"

    def test_branches_with_sums(self, capsys):
        code, out, _ = run_cli(
            capsys, "family", "branches", "Gamma", "1", "--max-n", "3", "--sum"
        )
        lines = out.splitlines()
        assert code == 0 and len(lines) == 3
        assert all(line.endswith("1/1") for line in lines)
        assert lines[2] == "3,2,1\t1/3,1/3,1/3\t1/1"

    def test_branches_t_family(self, capsys):
        code, out, _ = run_cli(capsys, "family", "branches", "T", "3", "--max-n", "2")
        assert out == "3,2,1\n"

    def test_branches_limit(self, capsys):
        code, out, _ = run_cli(
            capsys, "family", "branches", "Gamma", "w", "--max-n", "2", "--limit", "4", "--sum"
        )
        lines = out.splitlines()
        assert len(lines) == 4 and all(line.endswith("1/1") for line in lines)

    def test_budget_json_flag(self, capsys):
        flag_form = run_cli(
            capsys, "family", "branches", "Gamma", "1", "--max-n", "3", "--sum"
        )
        json_form = run_cli(
            capsys, "family", "branches", "Gamma", "1", "--budget", '{"max_n": 3}', "--sum"
        )
        assert flag_form == json_form

    def test_children_weight_rank(self, capsys):
        assert run_cli(capsys, "family", "children", "Gamma", "1", "--max-n", "3")[1] == "1,2,3\n"
        assert run_cli(capsys, "family", "children", "Gamma", "1", "3,2")[1] == "1\n"
        assert run_cli(capsys, "family", "weight", "Gamma", "1", "3,2")[1] == "1/3\n"
        assert run_cli(capsys, "family", "rank", "Gamma", "2", "w+2,w+1")[1] == "w\n"
        assert run_cli(capsys, "family", "weight", "T", "3", "3,2")[0] == 1

    def test_truncate(self, capsys):
        code, out, _ = run_cli(capsys, "family", "truncate", "T", "3", "--max-n", "1")
        assert json.loads(out) == {"nodes": [["3"], ["3", "2"], ["3", "2", "1"]]}

    def test_embed(self, capsys):
        assert run_cli(capsys, "family", "embed", "2", "3", "2,1")[1] == "3,2\n"
        assert run_cli(capsys, "family", "embed", "3", "2", "2,1")[0] == 1

    def test_deterministic_output(self, capsys):
        args = ("family", "branches", "Gamma", "2", "--max-n", "3", "--sum")
        first = run_cli(capsys, *args)
        second = run_cli(capsys, *args)
        assert first == second


class TestCbAndBound:
    def test_cb(self, capsys):
        assert run_cli(capsys, "cb", "step", "w^(w)")[1] == "w^(w)\n"
        assert run_cli(capsys, "cb", "stage", "w^2*3+w+4", "1")[1] == "w*3+1\n"
        assert run_cli(capsys, "cb", "index", "w^3*2+w")[1] == "4\n"

    def test_bound(self, capsys):
        assert run_cli(capsys, "bound", "dz", "w^2")[1] == "w^(3)\n"
        assert run_cli(capsys, "bound", "dz", "w^(w)")[1] == "w^(w)\n"
        assert run_cli(capsys, "bound", "dz", "0")[0] == 1


class TestGame:
    def build_game_file(self, capsys, tmp_path, xi="1", max_n="3"):
        model_file = tmp_path / "model.json"
        model_file.write_text(json.dumps(GAMMA1_MODEL))
        code, out, _ = run_cli(
            capsys, "game", "build", xi, str(model_file), "--max-n", max_n
        )
        assert code == 0
        game_file = tmp_path / "game.json"
        game_file.write_text(out)
        return game_file

    def test_build_solve_verify_extract(self, capsys, tmp_path):
        game_file = self.build_game_file(capsys, tmp_path)
        code, out, _ = run_cli(capsys, "game", "solve", str(game_file))
        assert code == 0
        solution = json.loads(out)
        assert solution["winner"] == "II"
        solution_file = tmp_path / "solution.json"
        solution_file.write_text(out)
        assert run_cli(capsys, "game", "verify", str(game_file), str(solution_file))[1] == "true\n"
        code, out, _ = run_cli(capsys, "game", "extract", str(game_file), str(solution_file))
        assert code == 0
        collections = json.loads(out)
        assert set(collections) == {"compacts", "functionals", "selections"}
        assert collections["functionals"]["1:0"] == ["1/1"]

    def test_solve_deterministic(self, capsys, tmp_path):
        game_file = self.build_game_file(capsys, tmp_path, xi="2", max_n="2")
        first = run_cli(capsys, "game", "solve", str(game_file))
        second = run_cli(capsys, "game", "solve", str(game_file))
        assert first == second

    def test_stdin_input(self, capsys, tmp_path, monkeypatch):
        import io

        model_json = json.dumps(GAMMA1_MODEL)
        monkeypatch.setattr(sys, "stdin", io.StringIO(model_json))
        code, out, _ = run_cli(capsys, "game", "build", "0", "-", "--max-n", "1")
        assert code == 0
        assert json.loads(out)["weights"] == {"1": "1/1"}


class TestConsoleScript:
    def test_entry_point(self):
        result = subprocess.run(
            [sys.executable, "-m", "ordgames.cli", "ord", "add", "w", "1"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert result.stdout == "w+1\n"

    def test_bytes_identical_across_hash_seeds(self, tmp_path):
        model_file = tmp_path / "model.json"
        model_file.write_text(json.dumps(GAMMA1_MODEL))
        outputs = []
        for seed in ("1", "2"):
            build = subprocess.run(
                [sys.executable, "-m", "ordgames.cli", "game", "build", "2",
                 str(model_file), "--max-n", "2"],
                capture_output=True,
                env={"PYTHONHASHSEED": seed, "PATH": "/usr/bin:/bin"},
                cwd="/root/pkg",
            )
            assert build.returncode == 0
            game_file = tmp_path / f"game{seed}.json"
            game_file.write_bytes(build.stdout)
            solved = subprocess.run(
                [sys.executable, "-m", "ordgames.cli", "game", "solve", str(game_file)],
                capture_output=True,
                env={"PYTHONHASHSEED": seed, "PATH": "/usr/bin:/bin"},
                cwd="/root/pkg",
            )
            assert solved.returncode == 0
            outputs.append(build.stdout + solved.stdout)
        assert outputs[0] == outputs[1]
