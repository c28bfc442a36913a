#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "fieldscope/error.hpp"
#include "fieldscope/features.hpp"
#include "fieldscope/forest.hpp"
#include "fieldscope/ingest.hpp"
#include "fieldscope/keywords.hpp"
#include "fieldscope/linear.hpp"
#include "fieldscope/linkage.hpp"
#include "fieldscope/metrics.hpp"
#include "fieldscope/model_io.hpp"
#include "fieldscope/record.hpp"
#include "fieldscope/text.hpp"
#include "fieldscope/version.hpp"

namespace py = pybind11;
using namespace fieldscope;

namespace {

PublicationRecord record_from_dict(const py::dict& d) {
  PublicationRecord r;
  r.id = py::cast<std::string>(d["id"]);
  if (d.contains("source"))
    r.source = source_from_name(py::cast<std::string>(d["source"]));
  auto opt_str = [&](const char* key) -> std::optional<std::string> {
    if (!d.contains(key) || d[key].is_none()) return std::nullopt;
    return py::cast<std::string>(d[key]);
  };
  r.title = opt_str("title");
  r.abstract = opt_str("abstract");
  if (d.contains("year") && !d["year"].is_none()) r.year = py::cast<int>(d["year"]);
  if (d.contains("authors"))
    r.authors = py::cast<std::vector<std::string>>(d["authors"]);
  r.doi = opt_str("doi");
  if (d.contains("citations") && !d["citations"].is_none())
    r.citation_ids = py::cast<std::set<std::string>>(d["citations"]);
  r.language = opt_str("language");
  if (d.contains("subjects"))
    r.subjects = py::cast<std::set<std::string>>(d["subjects"]);
  if (d.contains("field_scores"))
    r.field_scores = py::cast<std::map<std::string, double>>(d["field_scores"]);
  return r;
}

std::vector<PublicationRecord> records_from_list(const py::list& items) {
  std::vector<PublicationRecord> records;
  records.reserve(items.size());
  for (const auto& item : items) records.push_back(record_from_dict(py::cast<py::dict>(item)));
  return records;
}

}  // namespace

PYBIND11_MODULE(_fieldscope, m) {
  m.doc() = "Field delineation over publication metadata: keyword, "
            "scored-lexicon forest, and embedding classifiers plus linkage.";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "FieldscopeError");

  m.def("normalize", [](const std::string& raw) { return normalize_text(raw).tokens; },
        py::arg("text"), "Lowercased punctuation-free tokens.");

  py::class_<SubjectConfig>(m, "SubjectConfig")
      .def_static("default_ai", &SubjectConfig::default_ai)
      .def_static("load_file", &SubjectConfig::load_file, py::arg("path"))
      .def("canonical", &SubjectConfig::canonical, py::arg("code"))
      .def("is_relevant_subject", &SubjectConfig::is_relevant_subject, py::arg("code"))
      .def_property_readonly("relevant_subjects", &SubjectConfig::relevant_subjects);

  m.def("derive_relevance_label",
        [](const std::set<std::string>& subjects, const SubjectConfig& config) {
          PublicationRecord r;
          r.id = "<python>";
          r.subjects = subjects;
          return derive_relevance_label(r, config);
        },
        py::arg("subjects"), py::arg("config"));

  py::class_<KeywordModel>(m, "KeywordLexicon")
      .def_static("load_file",
                  [](const std::string& path) {
                    return KeywordModel{load_lexicon_file(path)};
                  },
                  py::arg("path"))
      .def_static("from_terms",
                  [](const std::vector<std::string>& terms) {
                    KeywordModel model;
                    for (const auto& term : terms)
                      model.patterns.push_back(TermPattern::compile(term));
                    return model;
                  },
                  py::arg("terms"))
      .def("__len__", [](const KeywordModel& model) { return model.patterns.size(); })
      .def("terms",
           [](const KeywordModel& model) {
             std::vector<std::string> out;
             for (const auto& p : model.patterns) out.push_back(p.source());
             return out;
           })
      .def("classify",
           [](const KeywordModel& model, const std::string& title,
              const std::string& abstract) {
             const KeywordResult res = classify_by_keywords(
                 normalize_text(title), normalize_text(abstract), model.patterns);
             return py::make_tuple(res.relevant, res.hits);
           },
           py::arg("title"), py::arg("abstract") = std::string(),
           "Returns (relevant, hit indices).");

  py::class_<ScoredLexicon>(m, "ScoredLexicon")
      .def_static("load_file", &ScoredLexicon::load_file, py::arg("path"))
      .def_static("from_terms", &ScoredLexicon::from_terms, py::arg("terms"))
      .def("__len__", &ScoredLexicon::size);

  m.def("feature_names", [] {
    const auto& names = lexicon_feature_names();
    return std::vector<std::string>(names.begin(), names.end());
  });
  m.def("extract_features",
        [](const std::string& title, const std::string& abstract,
           const ScoredLexicon& lexicon) {
          PublicationRecord r;
          r.id = "<python>";
          r.title = title;
          r.abstract = abstract;
          return extract_features(r, lexicon).values;
        },
        py::arg("title"), py::arg("abstract"), py::arg("lexicon"));

  py::class_<ForestModel>(m, "ForestModel")
      .def_property_readonly("n_trees",
                             [](const ForestModel& model) { return model.trees.size(); })
      .def_property_readonly("feature_dim",
                             [](const ForestModel& model) { return model.feature_dim; })
      .def("predict",
           [](const ForestModel& model, const std::vector<double>& x) {
             const Prediction p = predict_forest(model, x);
             return py::make_tuple(p.label, p.score);
           },
           py::arg("x"), "Returns (label, score).")
      .def("save",
           [](const ForestModel& model, const std::string& path) {
             save_model_file(path, model);
           },
           py::arg("path"));

  m.def("train_forest",
        [](const std::vector<std::vector<double>>& x, const std::vector<bool>& y,
           int n_trees, int max_depth, int min_leaf, int features_per_split,
           std::uint64_t seed, std::optional<std::pair<double, double>> class_weights,
           unsigned threads) {
          std::vector<FeatureVector> features(x.size());
          for (std::size_t i = 0; i < x.size(); ++i) {
            features[i].record_id = std::to_string(i);
            features[i].values = x[i];
          }
          ForestHyperparams hp{n_trees, max_depth, min_leaf, features_per_split};
          return train_forest(features, y, hp, seed, class_weights, threads);
        },
        py::arg("x"), py::arg("y"), py::arg("n_trees") = 100, py::arg("max_depth") = 0,
        py::arg("min_leaf") = 1, py::arg("features_per_split") = 0, py::arg("seed") = 0,
        py::arg("class_weights") = std::nullopt, py::arg("threads") = 1);

  py::class_<LinearModel>(m, "LinearModel")
      .def_readonly("bias", &LinearModel::bias)
      .def_readonly("weights", &LinearModel::weights)
      .def_readwrite("threshold", &LinearModel::threshold)
      .def("predict",
           [](const LinearModel& model, const std::vector<double>& x) {
             const Prediction p = predict_linear(model, x);
             return py::make_tuple(p.label, p.score);
           },
           py::arg("x"))
      .def("save",
           [](const LinearModel& model, const std::string& path) {
             save_model_file(path, model);
           },
           py::arg("path"));

  m.def("train_linear",
        [](const std::map<std::string, std::vector<double>>& rows,
           const std::map<std::string, bool>& labels, double l2,
           std::optional<std::pair<double, double>> class_weights) {
          EmbeddingTable table;
          for (const auto& [id, vec] : rows) {
            if (table.rows.empty()) table.dim = vec.size();
            table.rows[id] = vec;
          }
          LinearTrainOptions options;
          options.l2 = l2;
          options.class_weights = class_weights;
          return train_linear(table, labels, options);
        },
        py::arg("embeddings"), py::arg("labels"), py::arg("l2") = 1.0,
        py::arg("class_weights") = std::nullopt);

  m.def("load_model_kind", [](const std::string& path) {
    return std::string(model_kind(load_model_file(path)));
  });

  m.def("stratified_split",
        [](const py::list& records, double dev_fraction, double test_fraction,
           std::uint64_t seed) {
          const auto parsed = records_from_list(records);
          const SplitAssignment split = stratified_split(
              parsed, SubjectConfig::default_ai(), dev_fraction, test_fraction, seed);
          std::map<std::string, std::string> out;
          for (const auto& [id, part] : split.parts)
            out[id] = std::string(split_part_name(part));
          return out;
        },
        py::arg("records"), py::arg("dev_fraction") = 0.10,
        py::arg("test_fraction") = 0.10, py::arg("seed") = 0);

  m.def("compute_metrics",
        [](const std::map<std::string, bool>& predictions,
           const std::map<std::string, bool>& labels,
           const std::map<std::string, int>& years) {
          const EvalReport report = compute_metrics(predictions, labels, years);
          auto row_to_dict = [](const MetricsRow& row) {
            py::dict d;
            if (row.year) d["year"] = *row.year;
            d["positive"] =
                py::make_tuple(row.positive.precision, row.positive.recall,
                               row.positive.f1, row.positive.support);
            d["negative"] =
                py::make_tuple(row.negative.precision, row.negative.recall,
                               row.negative.f1, row.negative.support);
            d["weighted_f1"] = row.weighted_f1;
            d["total"] = row.total;
            return d;
          };
          py::dict out;
          py::list per_year;
          for (const auto& row : report.per_year) per_year.append(row_to_dict(row));
          out["per_year"] = per_year;
          out["aggregate"] = row_to_dict(report.aggregate);
          return out;
        },
        py::arg("predictions"), py::arg("labels"),
        py::arg("years") = std::map<std::string, int>{});

  m.def("cluster",
        [](const py::list& records) {
          const auto parsed = records_from_list(records);
          py::list out;
          for (const auto& c : cluster(parsed)) {
            py::dict d;
            d["canonical_id"] = c.canonical_id;
            d["member_ids"] = c.member_ids;
            std::vector<std::string> sources;
            for (Source s : c.sources) sources.emplace_back(source_name(s));
            d["sources"] = sources;
            out.append(d);
          }
          return out;
        },
        py::arg("records"),
        "Transitive >=3-shared-field clustering; records are dicts.");

  m.def("pair_matches",
        [](const py::dict& a, const py::dict& b) {
          const PublicationRecord ra = record_from_dict(a);
          const PublicationRecord rb = record_from_dict(b);
          return pair_matches(derive_keys(ra), derive_keys(rb), ra.source == rb.source);
        },
        py::arg("a"), py::arg("b"));
}
