from __future__ import annotations

import json

import pytest

from ultratree import space_to_json, tree_to_json, build_representing_tree
from ultratree.cli import run
from util import nested_four_point_space, two_pair_space


@pytest.fixture
def space_file(tmp_path):
    path = tmp_path / "space.json"
    path.write_text(json.dumps(space_to_json(nested_four_point_space())))
    return str(path)


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_accepts_and_rejects(tmp_path, capsys, space_file):
    code, out, _ = invoke(capsys, "check", space_file)
    assert code == 0
    assert json.loads(out) == {"ultrametric": True, "witness": None}

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "points": ["a", "b", "c"],
        "matrix": [["0", "1", "3"], ["1", "0", "1"], ["3", "1", "0"]],
    }))
    code, out, _ = invoke(capsys, "check", str(bad))
    assert code == 1
    assert json.loads(out) == {"ultrametric": False, "witness": ["a", "b", "c"]}


def test_check_rejects_malformed_input(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    code, _, err = invoke(capsys, "check", str(broken))
    assert code == 2 and "error" in err

    asym = tmp_path / "asym.json"
    asym.write_text(json.dumps({
        "points": ["a", "b"],
        "matrix": [["0", "1"], ["2", "0"]],
    }))
    code, _, err = invoke(capsys, "check", str(asym))
    assert code == 2 and "symmetr" in err


def test_dset(capsys, space_file):
    code, out, _ = invoke(capsys, "dset", space_file)
    assert code == 0
    assert json.loads(out) == {"distances": ["0", "1", "2"]}


def test_balls(capsys, space_file):
    code, out, _ = invoke(capsys, "balls", space_file)
    assert code == 0
    assert len(json.loads(out)["balls"]) == 6


def test_tree_json_and_dot(capsys, space_file):
    code, out, _ = invoke(capsys, "tree", space_file)
    assert code == 0
    payload = json.loads(out)
    assert payload["root"] == 0
    assert payload["labels"] == ["2", "0", "1", "0", "0", "0"]

    code, out, _ = invoke(capsys, "tree", space_file, "--dot")
    assert code == 0
    assert out.startswith("graph tree {")
    assert out.count("--") == 5
    assert out.count("doublecircle") == 4


def test_iso_and_weaksim(tmp_path, capsys, space_file):
    perm = tmp_path / "perm.json"
    base = nested_four_point_space()
    order = [2, 3, 0, 1]
    perm.write_text(json.dumps({
        "points": [base.names[i] for i in order],
        "matrix": [[str(base.matrix[i][j]) for j in order] for i in order],
    }))
    code, out, _ = invoke(capsys, "iso", space_file, str(perm))
    assert code == 0 and json.loads(out) == {"isometric": True}

    other = tmp_path / "other.json"
    other.write_text(json.dumps(space_to_json(two_pair_space())))
    code, out, _ = invoke(capsys, "iso", space_file, str(other))
    assert code == 1 and json.loads(out) == {"isometric": False}

    code, out, _ = invoke(capsys, "weaksim", space_file, str(perm))
    assert code == 0 and json.loads(out) == {"weakly_similar": True}
    code, out, _ = invoke(capsys, "weaksim", space_file, str(other))
    assert code == 1


def test_reconstruct_and_representable(tmp_path, capsys, space_file):
    tree_path = tmp_path / "tree.json"
    tree = build_representing_tree(nested_four_point_space())
    tree_path.write_text(json.dumps(tree_to_json(tree)))

    code, out, _ = invoke(capsys, "reconstruct", str(tree_path))
    assert code == 0
    rebuilt = json.loads(out)
    assert len(rebuilt["points"]) == 4

    code, out, _ = invoke(capsys, "representable", str(tree_path))
    assert code == 0
    assert json.loads(out)["accepted"] is True

    two = tmp_path / "two.json"
    two.write_text(json.dumps({
        "root": 0, "labels": ["1", "0"], "edges": [[0, 1]], "ball_points": None,
    }))
    code, out, _ = invoke(capsys, "representable", str(two))
    assert code == 1
    assert "out-degree 1" in json.loads(out)["reason"]


def test_posetcheck(tmp_path, capsys):
    doubled = tmp_path / "doubled.json"
    doubled.write_text(json.dumps({
        "elements": ["l", "b1", "b2", "s0"],
        "covers": [[1, 0], [2, 0], [3, 1], [3, 2]],
    }))
    code, out, _ = invoke(capsys, "posetcheck", str(doubled))
    assert code == 1
    assert json.loads(out)["unique_upper_cover"] is False

    star = tmp_path / "star.json"
    star.write_text(json.dumps({
        "elements": ["l", "a", "b", "c"],
        "covers": [[1, 0], [2, 0], [3, 0]],
    }))
    code, out, _ = invoke(capsys, "posetcheck", str(star))
    assert code == 0
    assert json.loads(out)["accepted"] is True


def test_transform(capsys, space_file):
    code, out, _ = invoke(capsys, "transform", "--fn", "threshold:1", space_file)
    assert code == 0
    payload = json.loads(out)
    assert payload["matrix"][0][1] == "1"

    code, out, _ = invoke(capsys, "transform", "--fn", "bound:3", space_file)
    assert code == 0
    assert json.loads(out)["matrix"][0][1] == "2"  # 3*2/(1+2)

    code, _, err = invoke(capsys, "transform", "--fn", "unbound:2", space_file)
    assert code == 2 and "error" in err

    code, _, err = invoke(capsys, "transform", "--fn", "nonsense", space_file)
    assert code == 2


def test_padic_and_bethe(tmp_path, capsys):
    pts = tmp_path / "pts.json"
    pts.write_text(json.dumps([str(i) for i in range(10)]))
    code, out, _ = invoke(capsys, "padic", "--prime", "3", "--points", str(pts))
    assert code == 0
    space = json.loads(out)
    assert space["matrix"][0][9] == "1/9"

    code, out, _ = invoke(capsys, "bethe", "--prime", "2", "--depth", "2")
    assert code == 0
    tree = json.loads(out)
    assert len(tree["labels"]) == 7 and tree["truncated"] is True

    code, out, _ = invoke(capsys, "bethe", "--prime", "3", "--depth", "1", "--sphere")
    assert code == 0
    assert len(json.loads(out)["labels"]) == 3

    code, _, err = invoke(capsys, "padic", "--prime", "4", "--points", str(pts))
    assert code == 2


def test_roundtrip(capsys, space_file):
    code, out, _ = invoke(capsys, "roundtrip", space_file)
    assert code == 0
    payload = json.loads(out)
    assert payload == {"points": 4, "balls": 6, "isometric": True}


def test_output_is_deterministic(capsys, space_file):
    _, first, _ = invoke(capsys, "tree", space_file)
    _, second, _ = invoke(capsys, "tree", space_file)
    assert first == second


def test_emitted_space_reparses_to_equal_value(tmp_path, capsys, space_file):
    code, out, _ = invoke(capsys, "transform", "--fn", "quantize", space_file)
    assert code == 0
    from ultratree import space_from_json

    space = space_from_json(json.loads(out))
    assert space_to_json(space) == json.loads(out)
