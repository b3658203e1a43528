import pytest

from gsworkbench import constructions as C
from gsworkbench import fileformat as F
from gsworkbench.cli import main
from gsworkbench.model import t_and, exactly


@pytest.fixture
def example1_file(tmp_path):
    path = tmp_path / "example1_k2.gsw"
    path.write_text(F.serialize(C.build_example1(2)), encoding="utf-8")
    return str(path)


@pytest.fixture
def example1_prog_file(tmp_path):
    pg = C.cd_to_programmed(C.build_example1(2), 2, "exactly")
    path = tmp_path / "example1_k2_prog.gsw"
    path.write_text(F.serialize(pg), encoding="utf-8")
    return str(path)


@pytest.fixture
def anbnambm_file(tmp_path):
    path = tmp_path / "anbnambm.gsw"
    path.write_text(
        F.serialize(C.build_anbnambm(), uniform_mode=t_and(exactly(1))),
        encoding="utf-8",
    )
    return str(path)


class TestEnumerate:
    def test_example1_words(self, example1_file, capsys):
        code = main(["enumerate", example1_file, "--mode", "(t & =2)", "--max-len", "9"])
        assert code == 0
        out = capsys.readouterr().out
        assert out == (
            "a1 a2 a3\n"
            "a1 a1 a2 a2 a3 a3\n"
            "a1 a1 a1 a2 a2 a2 a3 a3 a3\n"
        )

    def test_stdout_is_stable(self, example1_file, capsys):
        argv = ["enumerate", example1_file, "--mode", "(t & =2)", "--max-len", "9"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first

    def test_mode_from_file(self, anbnambm_file, capsys):
        assert main(["enumerate", anbnambm_file, "--max-len", "4"]) == 0
        assert capsys.readouterr().out == "a b a b\n"

    def test_missing_mode_is_parse_error(self, example1_file, capsys):
        code = main(["enumerate", example1_file, "--max-len", "5"])
        assert code == 2

    def test_bad_file_is_parse_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.gsw"
        bad.write_text("grammar g cdgs\n", encoding="utf-8")
        assert main(["enumerate", str(bad), "--max-len", "5"]) == 2


class TestTransform:
    def test_roundtrip_through_disk(self, tmp_path, capsys):
        out = tmp_path / "out.gsw"
        code = main(["transform", "example1", "--k", "2", "-o", str(out)])
        assert code == 0
        assert F.parse_grammar(out.read_text(encoding="utf-8")) == C.build_example1(2)

    def test_snk_writes_mode_line(self, tmp_path):
        out = tmp_path / "snk.gsw"
        assert main(["transform", "snk", "--n", "1", "--k", "1", "-o", str(out)]) == 0
        gf = F.parse_file(out.read_text(encoding="utf-8"))
        assert gf.uniform_mode == t_and(exactly(2))

    def test_cd_to_programmed(self, example1_file, tmp_path):
        out = tmp_path / "prog.gsw"
        code = main(["transform", "cd-to-programmed", example1_file,
                     "--k", "2", "-o", str(out)])
        assert code == 0
        pg = F.parse_grammar(out.read_text(encoding="utf-8"))
        assert pg == C.cd_to_programmed(C.build_example1(2), 2, "exactly")

    def test_unknown_transform(self, tmp_path, capsys):
        assert main(["transform", "bogus", "-o", str(tmp_path / "x.gsw")]) == 2

    def test_missing_parameter(self, example1_file, tmp_path):
        code = main(["transform", "prolong", example1_file,
                     "-o", str(tmp_path / "x.gsw")])
        assert code == 2


class TestCheckEquiv:
    def test_equal_is_exit_zero(self, example1_file, example1_prog_file, capsys):
        code = main(["check-equiv", example1_file, example1_prog_file,
                     "--mode-a", "(t & =2)", "--max-len", "9"])
        assert code == 0
        assert capsys.readouterr().out == ""

    def test_difference_is_exit_one_with_report(
        self, example1_file, example1_prog_file, capsys
    ):
        code = main(["check-equiv", example1_file, example1_prog_file,
                     "--mode-a", "(t & <=2)", "--max-len", "9"])
        assert code == 1
        out = capsys.readouterr().out
        assert out.startswith("MISSING ") or out.startswith("EXTRA ")


class TestIndex:
    def test_word_index(self, anbnambm_file, capsys):
        code = main(["index", anbnambm_file, "--word", "abab", "--max-len", "8"])
        assert code == 0
        assert capsys.readouterr().out == "2\n"

    def test_word_segmentation_multichar(self, example1_file, capsys):
        code = main(["index", example1_file, "--word", "a1a2a3",
                     "--mode", "(t & =2)", "--max-len", "9"])
        assert code == 0
        assert capsys.readouterr().out == "2\n"

    def test_unknown_word(self, anbnambm_file, capsys):
        code = main(["index", anbnambm_file, "--word", "aabb", "--max-len", "8"])
        assert code == 0
        assert capsys.readouterr().out == "UNKNOWN\n"

    def test_unsegmentable_word(self, anbnambm_file, capsys):
        assert main(["index", anbnambm_file, "--word", "abz", "--max-len", "8"]) == 2


class TestNsfCheck:
    def test_clean_grammar(self, tmp_path, pg_abc, capsys):
        path = tmp_path / "pg.gsw"
        path.write_text(F.serialize(pg_abc), encoding="utf-8")
        code = main(["nsf-check", str(path), "--depth", "12"])
        assert code == 0
        out = capsys.readouterr().out
        assert "VIOLATION" not in out

    def test_violating_grammar(self, tmp_path, capsys):
        text = (
            "grammar bad programmed lambda-free\n"
            "nonterminals S A\nterminals x\naxiom S\n"
            "rule p : S -> A A ; succ q ; fail\n"
            "rule q : A -> x ; succ q ; fail\n"
        )
        path = tmp_path / "bad.gsw"
        path.write_text(text, encoding="utf-8")
        code = main(["nsf-check", str(path), "--depth", "8"])
        assert code == 1
        assert "VIOLATION" in capsys.readouterr().out

    def test_needs_programmed_grammar(self, example1_file):
        assert main(["nsf-check", example1_file, "--depth", "4"]) == 2
