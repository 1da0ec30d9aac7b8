"""JSON class and stream files.

Class file::

    {"instances": ["x1", ...], "labels": ["a", ...],
     "hypotheses": [{"name": "h1", "map": ["a", ...]}, ...]}

Stream file::

    {"examples": [{"x": "x1", "y": "a"}, ...]}
"""

from __future__ import annotations

import json
from pathlib import Path

from .classes import HypothesisClass, Stream
from .errors import ParseError, ValidationError


def _read_json(path):
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None


def _expect(cond, where, msg):
    if not cond:
        raise ParseError(f"{where}: {msg}")


def _names(doc, field, where):
    _expect(field in doc, where, f"missing field {field!r}")
    values = doc[field]
    _expect(isinstance(values, list), f"{where}.{field}", "expected a list")
    for i, v in enumerate(values):
        _expect(isinstance(v, str), f"{where}.{field}[{i}]", "expected a string")
    return values


def class_to_dict(cls: HypothesisClass) -> dict:
    return {
        "instances": list(cls.instances),
        "labels": list(cls.labels),
        "hypotheses": [
            {"name": name, "map": [cls.labels[y] for y in row]} for name, row in zip(cls.names, cls.table)
        ],
    }


def class_from_dict(doc, where="class") -> HypothesisClass:
    _expect(isinstance(doc, dict), where, "expected a JSON object")
    instances = _names(doc, "instances", where)
    labels = _names(doc, "labels", where)
    _expect("hypotheses" in doc, where, "missing field 'hypotheses'")
    hyps = doc["hypotheses"]
    _expect(isinstance(hyps, list), f"{where}.hypotheses", "expected a list")
    label_ids = {name: i for i, name in enumerate(labels)}
    names, table = [], []
    for i, hyp in enumerate(hyps):
        at = f"{where}.hypotheses[{i}]"
        _expect(isinstance(hyp, dict), at, "expected an object")
        _expect(isinstance(hyp.get("name"), str), at, "missing or non-string 'name'")
        row = hyp.get("map")
        _expect(isinstance(row, list), f"{at}.map", "expected a list")
        _expect(len(row) == len(instances), f"{at}.map", f"expected {len(instances)} labels, got {len(row)}")
        ids = []
        for j, cell in enumerate(row):
            _expect(cell in label_ids, f"{at}.map[{j}]", f"unknown label {cell!r}")
            ids.append(label_ids[cell])
        names.append(hyp["name"])
        table.append(tuple(ids))
    try:
        return HypothesisClass(instances, labels, table, names)
    except ValidationError as e:
        raise ValidationError(f"{where}: {e}") from None


def save_class(cls: HypothesisClass, path):
    Path(path).write_text(json.dumps(class_to_dict(cls), indent=2) + "\n", encoding="utf-8")


def load_class(path) -> HypothesisClass:
    return class_from_dict(_read_json(path), where=str(path))


def stream_to_dict(stream: Stream, cls: HypothesisClass) -> dict:
    stream.validate(cls)
    return {"examples": [{"x": cls.instances[x], "y": cls.labels[y]} for x, y in stream]}


def stream_from_dict(doc, cls: HypothesisClass, where="stream") -> Stream:
    _expect(isinstance(doc, dict) and isinstance(doc.get("examples"), list), where, "expected {'examples': [...]}")
    x_ids = {name: i for i, name in enumerate(cls.instances)}
    y_ids = {name: i for i, name in enumerate(cls.labels)}
    examples = []
    for t, ex in enumerate(doc["examples"]):
        at = f"{where}.examples[{t}]"
        _expect(isinstance(ex, dict), at, "expected an object")
        if ex.get("x") not in x_ids:
            raise ValidationError(f"{at}: instance {ex.get('x')!r} not in the class")
        if ex.get("y") not in y_ids:
            raise ValidationError(f"{at}: label {ex.get('y')!r} not in the class")
        examples.append((x_ids[ex["x"]], y_ids[ex["y"]]))
    return Stream(examples).annotated(cls)


def save_stream(stream: Stream, cls: HypothesisClass, path):
    Path(path).write_text(json.dumps(stream_to_dict(stream, cls), indent=2) + "\n", encoding="utf-8")


def load_stream(path, cls: HypothesisClass) -> Stream:
    return stream_from_dict(_read_json(path), cls, where=str(path))
