import json

import pytest

from trackpaths.api import compare_record, solve_record
from trackpaths.errors import InstanceFormatError, ModulatorError
from trackpaths.fileformat import (ResultRecord, export_dot, parse_instance, read_trackers,
                                   serialize_instance, write_result)
from trackpaths.generators import generate_instance

C4 = "p tp 4 4\ns 1\nt 3\nk vc\nm 2 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n"
TRIANGLE = "p tp 3 3\ns 1\nt 3\nk cvd\ne 1 2\ne 2 3\ne 1 3\n"


def test_c4_parses_as_valid_cover():
    inst = parse_instance(C4)
    assert inst.modulator == {2, 4} and inst.graph.num_edges() == 4


def test_comments_and_blank_lines():
    inst = parse_instance("# a comment\nc another\n\n" + C4)
    assert inst.graph.s == 1


def test_empty_cover_is_rejected():
    with pytest.raises(ModulatorError):
        parse_instance("p tp 2 1\ns 1\nt 2\ne 1 2\nk vc\n")


def test_self_loop():
    with pytest.raises(InstanceFormatError) as err:
        parse_instance("p tp 2 1\ns 1\nt 2\nk vc\ne 1 1\n")
    assert err.value.line == 5


@pytest.mark.parametrize("text,line,col", [
    ("p tp 2 1\ns 1\nt 2\nk vc\nq 1 2\n", 5, 1),
    ("p tp 2 1\ns 1\ns 2\n", 3, 1),
    ("p tp 2 1\ns 1\nt 2\nk vc\ne 1 x\n", 5, 5),
    ("p tp 2 1\ns 1\nt 2\nk vc\ne 1 7\n", 5, 5),
    ("s 1\n", 1, 1),
    ("p tp 2 1\ns 1\nt 2\nk xx\ne 1 2\n", 4, 3),
])
def test_diagnostics_have_positions(text, line, col):
    with pytest.raises(InstanceFormatError) as err:
        parse_instance(text)
    assert (err.value.line, err.value.column) == (line, col)


def test_missing_lines():
    for text in ("", "p tp 2 1\nt 2\nk vc\ne 1 2\n", "p tp 2 1\ns 1\nt 2\ne 1 2\n"):
        with pytest.raises(InstanceFormatError):
            parse_instance(text)


def test_edge_count_must_match_header():
    with pytest.raises(InstanceFormatError):
        parse_instance("p tp 4 5\ns 1\nt 3\nk vc\nm 2 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n")


def test_round_trip():
    for kind in ("vc", "cvd"):
        for seed in range(30):
            inst = generate_instance(kind, 9, 3, seed)
            text = serialize_instance(inst)
            back = parse_instance(text)
            assert back == inst
            assert serialize_instance(back) == text


def test_canonical_file_is_fixed_point():
    canonical = "p tp 4 4\ns 1\nt 3\nk vc\nm 2 4\ne 1 2\ne 1 4\ne 2 3\ne 3 4\n"
    assert serialize_instance(parse_instance(C4)) == canonical
    assert serialize_instance(parse_instance(canonical)) == canonical


def test_triangle_record():
    rec, _ = solve_record(parse_instance(TRIANGLE))
    d = json.loads(write_result(rec))
    assert d["trackers"] == [2] and d["size"] == 1 and d["verified"] is True
    assert list(d) == sorted(d)


def test_trivial_record():
    rec, sol = solve_record(parse_instance("p tp 3 2\ns 1\nt 3\nk vc\nm 2\ne 1 2\ne 2 3\n"))
    assert sol.trivially_solved and rec.trackers == [] and rec.size == 0


def test_compare_record_has_both_sizes():
    d = compare_record(parse_instance(C4)).as_dict()
    assert d["oracle_size"] == d["size"] == 1 and d["equal"] is True


def test_wall_time_only_on_request():
    assert "wall_time" not in ResultRecord("vc", [1], True).as_dict()
    assert "wall_time" in ResultRecord("vc", [1], True, wall_time=0.5).as_dict()


def test_read_trackers():
    assert read_trackers("4, 1 7") == [1, 4, 7]
    assert read_trackers('{"trackers": [3, 2]}') == [2, 3]


def test_export_dot_with_solution():
    dot = export_dot(parse_instance(C4), [2])
    assert dot.startswith("graph tracking {") and dot.rstrip().endswith("}")
    assert '2 [shape=box style=filled fillcolor="gray70"];' in dot
    assert dot.count("doublecircle") == 2
    assert "4 [shape=box];" in dot
    assert dot.count(" -- ") == 4


def test_export_dot_plain_and_no_virtuals():
    inst = parse_instance(C4)
    plain = export_dot(inst)
    assert "filled" not in plain
    assert export_dot(inst, [2, 99]) == export_dot(inst, [2])
