"""Scenario documents.

A scenario is a YAML (or JSON) mapping::

    label: many-to-one      # optional
    K: 3
    links:                  # [tx, rx, gain], 1-indexed; every [k, k, n] required
      - [1, 1, 1]
      - [2, 2, 1]
      - [3, 3, 1]
      - [1, 2, 1]
      - [3, 2, 1]
    genie: false            # optional run option
    gain_bound: 2           # optional, used by sweeps

Errors carry the offending field and, when known, the source line.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import yaml

from .errors import LocalViewError, ScenarioError
from .gf2 import MAX_ENUMERATED_LEVELS
from .network import GainMatrix, Topology

ALLOWED_KEYS = {"label", "K", "links", "genie", "gain_bound"}


@dataclass(frozen=True)
class Scenario:
    label: str
    gains: GainMatrix
    genie: bool = False
    gain_bound: int | None = None

    @property
    def K(self) -> int:
        return self.gains.K

    @property
    def topology(self) -> Topology:
        return self.gains.topology


def _line_map(text: str) -> dict[str, int]:
    """Map field paths such as ``links[2]`` to 1-based source lines."""
    try:
        root = yaml.compose(text)
    except yaml.YAMLError:
        return {}
    lines: dict[str, int] = {}
    if not isinstance(root, yaml.MappingNode):
        return lines
    for key, value in root.value:
        name = str(key.value)
        lines[name] = key.start_mark.line + 1
        if name == "links" and isinstance(value, yaml.SequenceNode):
            for i, item in enumerate(value.value):
                lines[f"links[{i}]"] = item.start_mark.line + 1
    return lines


def _where(field: str, lines: dict[str, int]) -> str:
    return f"{field} (line {lines[field]})" if field in lines else field


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def parse_scenario(text: str, default_label: str = "scenario") -> Scenario:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}" if mark is not None else None
        raise ScenarioError(f"not valid YAML/JSON: {getattr(exc, 'problem', exc)}", where) from None
    lines = _line_map(text)
    if not isinstance(doc, dict):
        raise ScenarioError("document must be a mapping with K and links")
    unknown = sorted(set(map(str, doc)) - ALLOWED_KEYS)
    if unknown:
        raise ScenarioError(f"unknown field(s) {unknown}", _where(unknown[0], lines))
    for key in ("K", "links"):
        if key not in doc:
            raise ScenarioError("missing required field", key)

    K = doc["K"]
    if not _is_int(K) or K < 1:
        raise ScenarioError(f"must be a positive integer, got {K!r}", _where("K", lines))
    label = doc.get("label", default_label)
    if not isinstance(label, (str, int)):
        raise ScenarioError("must be a string", _where("label", lines))

    genie = doc.get("genie", False)
    if not isinstance(genie, bool):
        raise ScenarioError("must be true or false", _where("genie", lines))
    bound = doc.get("gain_bound")
    if bound is not None and (not _is_int(bound) or bound < 0):
        raise ScenarioError(f"must be a nonnegative integer, got {bound!r}", _where("gain_bound", lines))

    raw = doc["links"]
    if not isinstance(raw, list):
        raise ScenarioError("must be a list of [tx, rx, gain] triples", _where("links", lines))
    gains = {}
    for i, item in enumerate(raw):
        where = _where(f"links[{i}]", lines)
        if not isinstance(item, (list, tuple)) or len(item) != 3 or not all(map(_is_int, item)):
            raise ScenarioError(f"expected [tx, rx, gain] integers, got {item!r}", where)
        t, r, n = item
        if not (1 <= t <= K and 1 <= r <= K):
            raise ScenarioError(f"user index out of range 1..{K}", where)
        if n < 0:
            raise ScenarioError(f"gain must be nonnegative, got {n}", where)
        if (t, r) in gains:
            raise ScenarioError(f"duplicate link ({t}, {r})", where)
        gains[(t, r)] = n
    missing = [k for k in range(1, K + 1) if (k, k) not in gains]
    if missing:
        raise ScenarioError(f"direct links missing for users {missing}", _where("links", lines))

    try:
        gm = GainMatrix.from_dict(Topology(K, frozenset(gains)), gains)
    except LocalViewError as exc:  # pragma: no cover - checks above mirror the model's
        raise ScenarioError(str(exc), "links") from None
    if gm.q > MAX_ENUMERATED_LEVELS:
        warnings.warn(f"q = {gm.q} exceeds {MAX_ENUMERATED_LEVELS}; the oracle will refuse this scenario",
                      stacklevel=2)
    return Scenario(str(label), gm, genie, bound)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read file: {exc.strerror}", str(path)) from None
    return parse_scenario(text, default_label=path.stem)


def dump_scenario(gm: GainMatrix, label: str | None = None, genie: bool = False,
                  gain_bound: int | None = None) -> str:
    doc = {}
    if label is not None:
        doc["label"] = label
    doc["K"] = gm.K
    doc["links"] = [list(t) for t in gm.triples()]
    if genie:
        doc["genie"] = True
    if gain_bound is not None:
        doc["gain_bound"] = gain_bound
    return yaml.safe_dump(doc, default_flow_style=None, sort_keys=False)
