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

"""Python access to the protolite compiler, runtime, and tooling."""

import json

from protolite import _protolite
from protolite._protolite import DEFAULT_FUEL, ParseError, ValidationError

__all__ = [
    "DEFAULT_FUEL",
    "ParseError",
    "ValidationError",
    "check",
    "desugar",
    "diff",
    "generate",
    "pretty",
    "reference",
    "run",
    "stats",
]


def pretty(source):
    """Returns the program in canonical printed form."""
    return _protolite.pretty(source)


def check(source):
    """Returns the list of validation violations; empty when valid."""
    return json.loads(_protolite.check_json(source))


def run(source, mode="protected", global_cache=True, inline_cache=True,
        fuel=DEFAULT_FUEL, installs=()):
    """Compiles and runs a program; returns the outcome and cache counters.

    `installs` is a sequence of (class, method source) pairs applied to the
    compiled image before running.
    """
    return json.loads(_protolite.run_json(source, mode, global_cache,
                                          inline_cache, fuel, list(installs)))


def reference(source, fuel=DEFAULT_FUEL):
    """Evaluates a program with the reference evaluator."""
    return json.loads(_protolite.reference_json(source, fuel))


def desugar(source, mode="protected", installs=()):
    """Returns the dictionary and rewritten-body dump of the compiled image."""
    return _protolite.desugar(source, mode, list(installs))


def diff(source, fuel=DEFAULT_FUEL):
    """Compares the reference evaluator and the compiled runtime."""
    return json.loads(_protolite.diff_json(source, fuel))


def generate(seed, protected_ratio=0.4):
    """Returns the source of a generated valid program."""
    return _protolite.generate(seed, protected_ratio)


def stats(source, mode="protected", global_cache=True, inline_cache=True,
          fuel=DEFAULT_FUEL):
    """Returns cache counters, probe percentages, and memory accounting."""
    return json.loads(_protolite.stats_json(source, mode, global_cache,
                                            inline_cache, fuel))
