// Copyright 2026 The cardgauge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cardgauge/cohort.hpp"
#include "cardgauge/histogram.hpp"
#include "cardgauge/mdparse.hpp"
#include "cardgauge/report.hpp"
#include "cardgauge/simmetrics.hpp"
#include "cardgauge/text.hpp"
#include "cardgauge/textprep.hpp"

namespace py = pybind11;
using namespace cardgauge;

namespace {

FilterConfig make_filter(const std::string& stop_words, int max_x, bool lowercase) {
  FilterConfig cfg;
  if (!stop_words.empty()) cfg.stop_words = load_stop_words(stop_words);
  cfg.max_x_occurrences = max_x;
  cfg.lowercase = lowercase;
  cfg.validate();
  return cfg;
}

std::vector<std::string> path_texts(const std::string& markdown) {
  std::vector<std::string> out;
  for (const auto& p : heading_paths(parse_toc(markdown))) out.push_back(p.text());
  return out;
}

py::dict comparison_dict(const HistogramComparison& c) {
  py::dict d;
  d["count_common_words"] = c.count_common_words;
  d["count_left_only_words"] = c.count_left_only;
  d["count_right_only_words"] = c.count_right_only;
  d["histogram_intersection"] = c.histogram_intersection;
  d["cosine_similarity"] = c.cosine_similarity;
  d["kl_left_ref"] = c.kl_left_ref ? py::cast(*c.kl_left_ref) : py::none();
  d["kl_right_ref"] = c.kl_right_ref ? py::cast(*c.kl_right_ref) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Model-card documentation metrics";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  m.def("builtin_stop_words", [] {
    const auto& s = builtin_stop_words();
    return std::vector<std::string>(s.begin(), s.end());
  });
  m.def(
      "tokenize",
      [](const std::string& text, const std::string& stop_words, int max_x, bool lowercase) {
        return tokenize(text, make_filter(stop_words, max_x, lowercase));
      },
      py::arg("text"), py::arg("stop_words") = std::string(kBuiltinStopWords), py::arg("max_x") = 2,
      py::arg("lowercase") = true);

  m.def(
      "export_tree",
      [](const std::string& markdown, const std::string& format) {
        return export_tree(parse_toc(markdown), parse_tree_format(format));
      },
      py::arg("markdown"), py::arg("format") = "json");
  m.def("heading_paths", &path_texts, py::arg("markdown"), "Root-to-node heading strings in document order");

  m.def(
      "nlss",
      [](const std::string& hf, const std::string& zd) {
        const auto hw = text::split_whitespace(hf);
        const auto zw = text::split_whitespace(zd);
        const auto r = nlss(hw, zw);
        return py::make_tuple(r.score, r.common_words);
      },
      py::arg("hf"), py::arg("zd"), "Returns (score, common_words)");
  m.def("gld", [](const std::string& a, const std::string& b) { return gld(a, b); });
  m.def("nld_ratio", [](const std::string& a, const std::string& b) { return nld_ratio(a, b); });
  m.def("nld_sorted", [](const std::string& a, const std::string& b) { return nld_sorted(a, b); });
  m.def("token_sort_key", [](const std::string& s) { return token_sort_key(s); });
  m.def(
      "match_counts",
      [](const std::string& card, const std::string& reference, double nlss_th, double nld_th) {
        const auto hf = heading_paths(parse_toc(card));
        const auto zd = heading_paths(parse_toc(reference));
        MatchThresholds th{nlss_th, nld_th};
        th.validate();
        if (hf.empty() || zd.empty()) return py::make_tuple(std::size_t{0}, std::size_t{0});
        const auto matches = match_headings(hf, zd, th);
        return py::make_tuple(matched_heading_count(matches, Metric::nlss), matched_heading_count(matches, Metric::nld));
      },
      py::arg("card"), py::arg("reference"), py::arg("nlss_threshold") = 25.0, py::arg("nld_threshold") = 50.0,
      "Returns (nlss_matches, nld_matches) counted per card heading");

  py::class_<WordHistogram>(m, "WordHistogram")
      .def(py::init<>())
      .def(py::init([](const std::vector<std::string>& tokens) { return histogram_of(tokens); }))
      .def("add", [](WordHistogram& h, const std::string& w, std::uint64_t n) { h.add(w, n); }, py::arg("word"),
           py::arg("n") = 1)
      .def("count", [](const WordHistogram& h, const std::string& w) { return h.count(w); })
      .def_property_readonly("total", &WordHistogram::total)
      .def("__len__", &WordHistogram::size)
      .def("__contains__", [](const WordHistogram& h, const std::string& w) { return h.contains(w); })
      .def("__eq__", [](const WordHistogram& a, const WordHistogram& b) { return a == b; })
      .def("to_dict", [](const WordHistogram& h) { return std::map<std::string, std::uint64_t>(h.counts().begin(), h.counts().end()); })
      .def("to_tsv", [](const WordHistogram& h) { return to_tsv(h); })
      .def_static("from_tsv", [](const std::string& tsv) { return from_tsv(tsv); })
      .def("top_k", [](const WordHistogram& h, std::size_t k) { return top_k(h, k); });

  m.def("merge", [](const std::vector<WordHistogram>& parts) { return merge(parts); });
  m.def(
      "compare_histograms",
      [](const WordHistogram& left, const WordHistogram& right, bool common_cosine, bool common_kl, bool add_one) {
        HistogramComparisonConfig cfg;
        cfg.cosine = common_cosine ? CosineSupport::common_words : CosineSupport::full_vocabulary;
        cfg.kl_normalization = common_kl ? KlNormalization::common_words : KlNormalization::full_vocabulary;
        cfg.kl_add_one = add_one;
        return comparison_dict(compare_histograms(left, right, cfg));
      },
      py::arg("left"), py::arg("right"), py::arg("common_cosine") = false, py::arg("common_kl") = false,
      py::arg("kl_add_one") = false);
  m.def(
      "gap_report_json",
      [](const WordHistogram& left, const WordHistogram& right, std::size_t top_k) {
        return emit(gap_report(left, right, top_k), OutputFormat::json);
      },
      py::arg("left"), py::arg("right"), py::arg("top_k") = 20);

  m.def("rank_descending", [](const std::vector<double>& v) { return rank_descending(v); });
  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); });
  m.def("download_bin_index", &download_bin_index);
  m.def("composite_score", &composite_score, py::arg("nlss_matches"), py::arg("nld_matches"),
        py::arg("common_word_count"), py::arg("reference_vocabulary"));
}
