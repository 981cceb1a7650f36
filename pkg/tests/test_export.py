"""Tests for the export module."""

import csv
import io
import json
from dataclasses import dataclass

import pytest
from mpmath import mpf

from markov_fock.cohn import Mat2
from markov_fock.export import (
    bound_str,
    emit,
    make_json_safe,
    render_csv,
    render_json,
    render_json_lines,
    tree_records,
    tree_table,
)
from markov_fock.farey import ContinuedFraction, Fraction, Side
from markov_fock.fock_norm import HomologyClass
from markov_fock.hpreal import HPReal
from markov_fock.markov import MarkovTriple, enumerate_tree


class TestMakeJsonSafe:

    def test_domain_types(self, classical):
        payload = {
            "x": Fraction(1, 3),
            "cf": ContinuedFraction.parse("0;2,(1)"),
            "h": HomologyClass(2, -1),
            "side": Side.LEFT,
            "surface": classical,
            "triple": MarkovTriple(1, 2, 5, classical),
            "matrix": Mat2(1, 1, 1, 2),
            "exact": HPReal.from_int(5),
        }
        assert make_json_safe(payload) == {
            "x": "1/3",
            "cf": "0;2,(1)",
            "h": "(2,-1)",
            "side": "left",
            "surface": "classical",
            "triple": ["1", "2", "5"],
            "matrix": [["1", "1"], ["1", "2"]],
            "exact": {"value": "5", "err": "0"},
        }

    def test_integers_become_strings(self):
        big = 10 ** 40
        assert make_json_safe([big, True, None]) == [str(big), True, None]

    def test_dataclass(self):
        @dataclass
        class Row:
            depth: int
            label: str

        assert make_json_safe(Row(3, "a")) == {"depth": "3", "label": "a"}

    def test_mpf(self):
        assert make_json_safe(mpf("0.5")) == "0.5"

    def test_rejects_unknown_types(self):
        with pytest.raises(TypeError, match="Cannot export"):
            make_json_safe(0.5)


class TestRender:

    def test_render_json(self):
        text = render_json({"value": 5})
        assert text.endswith("\n")
        assert json.loads(text) == {"value": "5"}

    def test_json_lines(self, classical):
        records = tree_records(enumerate_tree(classical, 1), classical)
        lines = render_json_lines(records).splitlines()
        assert len(lines) == 3
        first = json.loads(lines[0])
        assert first == {"fraction": "1/3", "triple": ["1", "2", "5"], "a": None, "surface": "classical"}

    def test_json_lines_carry_a(self, a2):
        records = tree_records(enumerate_tree(a2, 0), a2)
        assert records[0]["a"] == 2
        assert json.loads(render_json_lines(records))["a"] == "2"

    def test_csv(self, classical):
        header, rows = tree_table(enumerate_tree(classical, 1))
        text = render_csv(header, rows)
        assert text.splitlines() == [
            "fraction,X,Y,Z",
            "1/3,1,2,5",
            "1/4,1,5,13",
            "2/5,5,2,29",
        ]

    def test_csv_nested_cells(self):
        text = render_csv(["cell"], [[{"value": "1", "err": "0"}], [None]])
        rows = list(csv.reader(io.StringIO(text)))
        assert json.loads(rows[1][0]) == {"value": "1", "err": "0"}
        assert rows[2] == [""]


class TestBoundStr:

    def test_outward_rounding(self):
        x = mpf(1) / 3
        assert mpf(bound_str(x, "down")) < x
        assert mpf(bound_str(x, "up")) > x

    def test_zero(self):
        assert bound_str(mpf(0), "down") == "0"


class TestEmit:

    def test_stdout(self, capsys):
        emit("hello\n", None)
        assert capsys.readouterr().out == "hello\n"

    def test_file_with_parent_dirs(self, tmp_path):
        target = tmp_path / "nested" / "out.json"
        emit("{}\n", str(target))
        assert target.read_text(encoding="utf-8") == "{}\n"
