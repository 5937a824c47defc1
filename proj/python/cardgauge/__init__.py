# Copyright 2026 The cardgauge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Model-card documentation quality metrics."""

import json

from ._core import (
    Error,
    InvalidArgument,
    IoError,
    WordHistogram,
    builtin_stop_words,
    compare_histograms,
    composite_score,
    download_bin_index,
    export_tree,
    gld,
    heading_paths,
    match_counts,
    merge,
    nld_ratio,
    nld_sorted,
    nlss,
    pearson,
    rank_descending,
    token_sort_key,
    tokenize,
)
from ._core import gap_report_json as _gap_report_json

__version__ = "0.1.0"


def gap_report(left, right, top_k=20):
    """Common, left-only and right-only words of two histograms as a dict."""
    return json.loads(_gap_report_json(left, right, top_k))


__all__ = [
    "Error",
    "InvalidArgument",
    "IoError",
    "WordHistogram",
    "builtin_stop_words",
    "compare_histograms",
    "composite_score",
    "download_bin_index",
    "export_tree",
    "gap_report",
    "gld",
    "heading_paths",
    "match_counts",
    "merge",
    "nld_ratio",
    "nld_sorted",
    "nlss",
    "pearson",
    "rank_descending",
    "token_sort_key",
    "tokenize",
]
