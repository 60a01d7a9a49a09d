import numpy as np
import pytest

from app.errors import ExportError, InconsistencyError
from app.exporters.incidence_export import FileSink, export_graph, export_incidence
from app.geometry.incidence import IncidenceStructure

FANO_LINES = ((0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5))


@pytest.fixture
def fano():
    return IncidenceStructure("fano", tuple("abcdefg"), FANO_LINES,
                              shading=("dark",) * 3 + ("light",) * 3 + ("nucleus",))


def test_text_export(fano):
    text = export_incidence(fano, "text")
    lines = text.splitlines()
    assert lines[0] == "# fano"
    assert lines[1] == "points 7"
    assert lines[2] == "0 a dark"
    assert lines[8] == "6 g nucleus"
    assert lines[9] == "lines 7"
    assert lines[10] == "0 1 2"
    assert text.endswith("\n")


def test_text_export_with_order():
    S = IncidenceStructure("pair", ("x", "y"), ((0, 1),), order=(1, 0))
    assert export_incidence(S).splitlines()[:3] == ["# pair", "order 1 0", "points 2"]


def test_empty_structure():
    S = IncidenceStructure("empty", (), ())
    assert export_incidence(S, "text") == "# empty\npoints 0\nlines 0\n"
    assert S.collinearity_graph().vcount() == 0
    assert "graph" in export_incidence(S, "dot")


def test_dot_export(fano):
    dot = export_incidence(fano, "DOT")
    assert dot.lstrip().startswith("graph") or dot.lstrip().startswith("/*")
    assert dot.count("--") == 21
    assert "nucleus" in dot


def test_unknown_format(fano):
    with pytest.raises(ExportError):
        export_incidence(fano, "svg")
    with pytest.raises(ExportError):
        export_graph(["a"], [[False]], "svg")


def test_graph_export():
    adj = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=bool)
    text = export_graph(["u", "v", "w"], adj, "text", name="path")
    assert text.splitlines() == ["# path", "vertices 3", "0 u", "1 v", "2 w", "edges 2", "0 1", "1 2"]
    assert export_graph(["u", "v", "w"], adj, "dot").count("--") == 2


def test_structure_validation():
    with pytest.raises(InconsistencyError):
        IncidenceStructure("bad", ("a", "b"), ((0, 0),))
    with pytest.raises(InconsistencyError):
        IncidenceStructure("bad", ("a", "b"), ((0, 2),))
    with pytest.raises(InconsistencyError):
        IncidenceStructure("bad", ("a", "b"), (), shading=("dark",))


def test_fano_invariants(fano):
    assert fano.lines_per_point() == [3] * 7
    assert set(fano.collinearity_graph().degree()) == {6}
    relabelled = IncidenceStructure("fano2", tuple("abcdefg"),
                                    tuple(tuple(sorted((x + 1) % 7 for x in line)) for line in FANO_LINES))
    assert fano.is_isomorphic(relabelled)
    star = IncidenceStructure("star", tuple("abcdefg"),
                              ((0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 3, 5)))
    assert not fano.is_isomorphic(star)


def test_file_sink(tmp_path):
    sink = FileSink(str(tmp_path / "out"))
    res = sink.send([("a.txt", "alpha\n"), ("b.txt", "beta\n")])
    assert res["ok"] == 2 and res["failed"] == 0 and res["dest"] == "file"
    assert (tmp_path / "out" / "a.txt").read_text() == "alpha\n"
    assert len(res["paths"]) == 2
