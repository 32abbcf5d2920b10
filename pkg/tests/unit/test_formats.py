#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

import copy
import json

import pytest

from biderive import BiderMode, biderivation_space
from chevalley import classical_algebra
from formats import (
    FormatError,
    build_report,
    dump_json,
    frame_block,
    frame_from_block,
    load_algebra,
    parse_algebra,
    parse_report,
    render_algebra,
    render_report,
    save_algebra,
    space_task,
)
from liecore import affine_line, sl2
from literals import TOOL_VERSION

AFF_DOCUMENT = {
    "format_version": 1,
    "field": "rational",
    "dim": 2,
    "labels": ["x", "y"],
    "constants": [{"i": 0, "j": 1, "coeffs": [[0, "1"]]}],
}


def broken(path, value):
    document = copy.deepcopy(AFF_DOCUMENT)
    target = document
    for key in path[:-1]:
        target = target[key]
    target[path[-1]] = value
    return json.dumps(document)


def test_render_is_canonical(sl2_q):
    text = render_algebra(sl2_q)

    assert text.endswith("}\n")
    assert "\r" not in text
    assert json.loads(text)["field"] == "rational"
    assert text == dump_json(json.loads(text))


def test_algebra_round_trip(sl2_q, f7):
    for L in (sl2_q, sl2(f7), affine_line(f7)):
        text = render_algebra(L)
        document = parse_algebra(text)

        assert document.algebra == L
        assert document.algebra.labels == L.labels
        assert document.frame is None
        assert render_algebra(document.algebra) == text


def test_prime_field_descriptor(f7):
    data = json.loads(render_algebra(sl2(f7)))

    assert data["field"] == {"prime": 7}
    # -2 is written as its residue
    assert data["constants"][0]["coeffs"] == [[0, "5"]]


def test_frame_block_round_trip(qq, tmp_path):
    frame = classical_algebra("B", 2, qq)
    path = str(tmp_path / "b2.json")
    save_algebra(path, frame.algebra, frame_block(frame))

    document = load_algebra(path)
    rebuilt = frame_from_block(document.algebra, document.frame)

    assert document.algebra == frame.algebra
    assert rebuilt.e_index == frame.e_index
    assert rebuilt.h_index == frame.h_index
    assert rebuilt.cartan == frame.cartan


def test_frame_block_refuses_foreign_roots(qq):
    frame = classical_algebra("A", 2, qq)
    block = frame_block(frame).copy(update={"roots": [[1, 0]]})

    with pytest.raises(FormatError):
        frame_from_block(frame.algebra, block)


def test_load_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_algebra(str(tmp_path / "missing.json"))


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        broken(["format_version"], 2),
        broken(["dim"], -1),
        broken(["labels"], ["x"]),
        broken(["field"], "complex"),
        broken(["field"], {"prime": 4}),
        broken(["constants", 0, "i"], 1),
        broken(["constants", 0, "coeffs"], [[0, "1.5"]]),
        broken(["constants", 0, "coeffs"], [[0, 1]]),
        broken(["constants", 0, "coeffs"], [[2, "1"]]),
        broken(["constants", 0, "coeffs"], [[0, "1/0"]]),
        broken(["constants"], [AFF_DOCUMENT["constants"][0]] * 2),
    ],
)
def test_parse_algebra_refuses(text):
    with pytest.raises(FormatError):
        parse_algebra(text)


def test_report_digest_survives_reload(aff_q):
    space = biderivation_space(aff_q, BiderMode.SYMMETRIC)
    report = build_report(
        aff_q.fingerprint, aff_q.domain, [space_task("bider:sym", space)], {"bider:sym": 12}
    )
    reloaded = parse_report(render_report(report))

    assert reloaded.tool_version == TOOL_VERSION
    assert reloaded.tasks[0]["dim"] == 3
    assert reloaded.determinism_digest == report.determinism_digest
    assert reloaded.expected_digest == report.determinism_digest


def test_report_digest_ignores_timing(aff_q):
    space = biderivation_space(aff_q, BiderMode.SKEW)
    tasks = [space_task("bider:skew", space)]
    fast = build_report(aff_q.fingerprint, aff_q.domain, tasks, {"bider:skew": 1})
    slow = build_report(aff_q.fingerprint, aff_q.domain, tasks, {"bider:skew": 900})

    assert fast.determinism_digest == slow.determinism_digest
    assert render_report(fast) != render_report(slow)


def test_parse_report_refuses():
    with pytest.raises(FormatError):
        parse_report("[]")
    with pytest.raises(FormatError):
        parse_report("{")
