# Copyright 2026 The RBlur Authors
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

"""Foveated image transform with acuity tables, scanpaths and certification."""

from rblur._core import (
    Config,
    ConfigError,
    DataError,
    Foveator,
    InputError,
    acuity_table,
    certify,
    clopper_pearson_lower,
    eccentricity_map,
    gaussian_blur,
    sample_scanpath,
    std_normal_cdf,
    std_normal_quantile,
)


def rblur(image, fixation, config=None, index=0):
    """One-shot transform: noise, blur and blend at `fixation` (x, y)."""
    return Foveator(config if config is not None else Config()).apply(image, fixation, index)


__all__ = [
    "Config",
    "ConfigError",
    "DataError",
    "Foveator",
    "InputError",
    "acuity_table",
    "certify",
    "clopper_pearson_lower",
    "eccentricity_map",
    "gaussian_blur",
    "rblur",
    "sample_scanpath",
    "std_normal_cdf",
    "std_normal_quantile",
]
