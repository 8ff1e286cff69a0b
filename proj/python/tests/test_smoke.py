# Copyright 2026 The Protolite Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Smoke tests for the Python module."""

import os
import pathlib

import pytest

import protolite

PROGRAMS = pathlib.Path(
    os.environ.get("PROTOLITE_PROGRAMS_DIR",
                   pathlib.Path(__file__).resolve().parents[2] / "programs"))


def source(name):
    return (PROGRAMS / name).read_text()


@pytest.mark.parametrize("name,value", [
    ("appendixB_callProtected_A.stl", "11"),
    ("appendixB_callProtected_B.stl", "42"),
    ("appendixB_sum.stl", "84"),
    ("appendixB_publicInSubclass.stl", "36"),
])
def test_run_matches_reference(name, value):
    src = source(name)
    for g in (True, False):
        for i in (True, False):
            out = protolite.run(src, global_cache=g, inline_cache=i)
            assert out["kind"] == "value"
            assert out["value"] == value
    ref = protolite.reference(src)
    assert ref["value"] == value


def test_protected_object_send_is_dnu():
    out = protolite.run(source("appendixB_raiseError.stl"))
    assert out["kind"] == "error"
    assert out["error"]["reason"] == "DoesNotUnderstand"
    assert out["error"]["class"] == "A"


def test_narrowing_reported_and_rejected():
    src = source("narrowing.stl")
    violations = protolite.check(src)
    assert violations[0]["rule"] == "OVERRIDINGPUBLICMETHOD"
    with pytest.raises(protolite.ValidationError):
        protolite.run(src)
    assert protolite.check(source("listing1.stl")) == []


def test_parse_error():
    with pytest.raises(protolite.ParseError):
        protolite.pretty("class A extends Object { method m( }")


def test_desugar_and_install():
    text = protolite.desugar(source("listing1.stl"))
    assert "__protectedMethod -> A#protectedMethod protected" in text
    assert "callProtected -> A#callProtected public shared" in text
    deferred_src = source("deferred.stl")
    assert protolite.run(deferred_src)["kind"] == "error"
    method = ("A", "protected method unknown() { 7 }")
    assert protolite.run(deferred_src, installs=[method])["value"] == "7"
    assert "deferred" not in protolite.desugar(deferred_src, installs=[method])


def test_diff_and_generate_agree():
    for seed in range(50):
        src = protolite.generate(seed)
        assert protolite.generate(seed) == src
        assert protolite.check(src) == []
        assert protolite.diff(src, fuel=20000)["agree"]
    free = protolite.diff(protolite.generate(3, protected_ratio=0.0))
    assert free["dictionariesEqual"]


def test_stats_shape_and_collision():
    stats = protolite.stats(source("collision.stl"))
    assert set(stats["cache"]) == {"probe1", "probe2", "probe3", "misses",
                                   "distinctKeys", "ic"}
    assert stats["cache"]["probe2"] >= 1
    worst = protolite.stats(source("listing1.stl"), mode="worst-case")
    assert worst["memory"]["totalEntries"] == 14
    assert worst["worstCaseRatios"]["entries"] == 2.0
    with pytest.raises(ValueError):
        protolite.stats(source("listing1.stl"), mode="bogus")
