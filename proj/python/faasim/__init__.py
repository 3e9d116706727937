# Copyright 2026 The faasim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python front end for the faasim simulator core."""

from __future__ import annotations

import json
from typing import Any, Iterable, Mapping, Optional, Sequence

from . import _faasim
from ._faasim import FaasimError

__all__ = [
    "FaasimError",
    "Platform",
    "allocate_cores",
    "calibrate",
    "cold_starts",
    "compare_backends",
    "config_digest",
    "default_config",
    "load_config",
    "percentile",
    "reproduce",
    "sweep",
]

Config = Mapping[str, Any]


def _dump(config: Optional[Config]) -> str:
    return json.dumps(default_config() if config is None else config)


def default_config() -> dict:
    return json.loads(_faasim.default_config())


def load_config(path: Optional[str] = None, overrides: Sequence[str] = ()) -> dict:
    """Defaults, then the JSON file, then ``key.path=value`` overrides."""
    return json.loads(_faasim.load_config(path, list(overrides)))


def config_digest(config: Optional[Config] = None) -> str:
    return _faasim.config_digest(_dump(config))


def compare_backends(config: Optional[Config] = None) -> dict:
    return json.loads(_faasim.compare_backends(_dump(config)))


def sweep(config: Optional[Config] = None) -> dict:
    return json.loads(_faasim.sweep(_dump(config)))


def calibrate(config: Optional[Config] = None) -> dict:
    return json.loads(_faasim.calibrate(_dump(config)))


def cold_starts(config: Optional[Config] = None) -> dict:
    return json.loads(_faasim.cold_starts(_dump(config)))


def reproduce(config: Optional[Config] = None, out_dir: Optional[str] = None) -> dict:
    return json.loads(_faasim.reproduce(_dump(config), out_dir))


def percentile(samples: Iterable[int], p: float) -> int:
    return _faasim.percentile(list(samples), p)


def allocate_cores(instances: Sequence[Mapping[str, int]], usable: int) -> dict:
    """Max-min core grants keyed by instance id."""
    return _faasim.allocate_cores([dict(i) for i in instances], usable)


class Platform:
    """One simulated host on a single backend."""

    def __init__(self, config: Optional[Config] = None, kind: str = "bypass") -> None:
        self._p = _faasim.Platform(_dump(config), kind)

    def deploy(self, name: str, service_us: float = 120.0, sigma: float = 0.0,
               max_cores: int = 1, mechanism: str = "raise-core-cap") -> dict:
        return json.loads(self._p.deploy(name, service_us, sigma, max_cores, mechanism))

    def scale(self, name: str, n: int) -> dict:
        return json.loads(self._p.scale(name, n))

    def remove(self, name: str) -> None:
        self._p.remove(name)

    def resolve(self, name: str) -> dict:
        return json.loads(self._p.resolve(name))

    def invoke(self, name: str, at: Optional[int] = None, req_bytes: int = 600,
               resp_bytes: int = 600) -> int:
        return self._p.invoke(name, at, req_bytes, resp_bytes)

    def run_until(self, t: int) -> None:
        self._p.run_until(t)

    def run_to_idle(self) -> None:
        self._p.run_to_idle()

    @property
    def now(self) -> int:
        return self._p.now

    def record(self, invocation_id: int) -> dict:
        return json.loads(self._p.record(invocation_id))

    def counters(self) -> dict:
        return json.loads(self._p.counters())
