import warnings

import pytest

from localview.errors import ScenarioError
from localview.network import GainMatrix, Topology
from localview.scenario import dump_scenario, load_scenario, parse_scenario

GOOD = """\
label: demo
K: 2
links:
  - [1, 1, 2]
  - [2, 2, 1]
  - [1, 2, 1]
"""


def test_parse_good_document():
    sc = parse_scenario(GOOD)
    assert sc.label == "demo" and sc.K == 2
    assert sc.gains.n(1, 2) == 1 and sc.topology.cross_links == {(1, 2)}
    assert not sc.genie and sc.gain_bound is None


def test_options():
    sc = parse_scenario(GOOD + "genie: true\ngain_bound: 3\n")
    assert sc.genie and sc.gain_bound == 3


def test_json_is_accepted():
    sc = parse_scenario('{"K": 1, "links": [[1, 1, 4]]}')
    assert sc.gains.q == 4 and sc.label == "scenario"


@pytest.mark.parametrize("text,where", [
    ("K: 2\nlinks:\n  - [1, 1, 1]\n  - [1, 3, 1]\n  - [2, 2, 1]\n", "links[1] (line 4)"),
    ("K: 2\nlinks:\n  - [1, 1, 1]\n  - [2, 2, 1]\n  - [1, 1, 2]\n", "links[2] (line 5)"),
    ("K: 2\nlinks:\n  - [1, 1, 1]\n  - [1, 2, 1]\n", "links (line 2)"),
    ("K: 2\nlinks:\n  - [1, 1, 1]\n  - [2, 2, -1]\n", "links[1] (line 4)"),
    ("K: 2\nlinks:\n  - [1, 1]\n  - [2, 2, 1]\n", "links[0] (line 3)"),
    ("K: 0\nlinks: []\n", "K (line 1)"),
    ("K: 1\nlinks: [[1, 1, 1]]\ncolour: red\n", "colour (line 3)"),
    ("K: 1\nlinks: [[1, 1, 1]]\ngenie: maybe\n", "genie (line 3)"),
    ("links: [[1, 1, 1]]\n", "K"),
])
def test_errors_name_the_field(text, where):
    with pytest.raises(ScenarioError) as info:
        parse_scenario(text)
    assert info.value.where == where


def test_yaml_syntax_error_has_line():
    with pytest.raises(ScenarioError) as info:
        parse_scenario("K: 2\nlinks: [[1, 1, 1]\n")
    assert info.value.where.startswith("line")


def test_not_a_mapping():
    with pytest.raises(ScenarioError):
        parse_scenario("- 1\n- 2\n")


def test_large_q_warns():
    with pytest.warns(UserWarning, match="exceeds"):
        parse_scenario("K: 1\nlinks: [[1, 1, 7]]\n")
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        parse_scenario("K: 1\nlinks: [[1, 1, 6]]\n")


def test_roundtrip(tmp_path):
    gm = GainMatrix.from_dict(Topology.from_cross(3, [(1, 3), (2, 1)]),
                              {(1, 1): 2, (2, 2): 0, (3, 3): 3, (1, 3): 1, (2, 1): 2})
    path = tmp_path / "net.yaml"
    path.write_text(dump_scenario(gm, "net", gain_bound=2))
    sc = load_scenario(path)
    assert sc.gains == gm and sc.label == "net" and sc.gain_bound == 2


def test_label_defaults_to_file_stem(tmp_path):
    path = tmp_path / "plain.yaml"
    path.write_text("K: 1\nlinks: [[1, 1, 1]]\n")
    assert load_scenario(path).label == "plain"


def test_missing_file():
    with pytest.raises(ScenarioError, match="cannot read"):
        load_scenario("/nonexistent/x.yaml")
