// fieldscope: delineate a research field in publication metadata.
//
// Subcommands: split, train, predict, evaluate, crosstab, dedup. Every
// command writes its machine outputs plus a manifest.json into --out; reruns
// with identical inputs and seed are byte-identical (manifest timestamps
// aside). Exit codes: 0 success, 2 usage/input error, 3 data error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fieldscope/error.hpp"
#include "fieldscope/features.hpp"
#include "fieldscope/forest.hpp"
#include "fieldscope/grid.hpp"
#include "fieldscope/ingest.hpp"
#include "fieldscope/keywords.hpp"
#include "fieldscope/linear.hpp"
#include "fieldscope/linkage.hpp"
#include "fieldscope/manifest.hpp"
#include "fieldscope/metrics.hpp"
#include "fieldscope/model_io.hpp"
#include "fieldscope/parallel.hpp"
#include "fieldscope/version.hpp"

namespace fs = std::filesystem;
using namespace fieldscope;
using nlohmann::json;

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

fs::path ensure_out_dir(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory '" + out + "'");
  return dir;
}

SubjectConfig load_subjects(const std::string& path) {
  return path.empty() ? SubjectConfig::default_ai() : SubjectConfig::load_file(path);
}

ParseMode parse_mode_from(const std::string& name) {
  if (name == "abort") return ParseMode::abort;
  if (name == "skip") return ParseMode::skip;
  throw InputError("unknown parse mode '" + name + "'");
}

// Relevance label for --target: "all" = any configured subject; otherwise
// membership of that single subject (alias-merged), one-versus-all.
bool target_label(const PublicationRecord& r, const SubjectConfig& config,
                  const std::string& target) {
  if (target == "all") return derive_relevance_label(r, config);
  if (r.subjects.empty()) throw MissingSubjects(r.id);
  const std::string& want = config.canonical(target);
  for (const auto& code : r.subjects)
    if (config.canonical(code) == want) return true;
  return false;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw InputError("empty value list '" + csv + "'");
  return out;
}

std::map<std::string, bool> read_predictions_file(const std::string& path) {
  std::ifstream in = open_input(path);
  std::map<std::string, bool> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (!obj.contains("id") || !obj.contains("label"))
      throw ParseError(line_no, "prediction lines need 'id' and 'label'");
    out[obj["id"].get<std::string>()] = obj["label"].get<bool>();
  }
  return out;
}

json snapshot(const CLI::App& cmd) {
  json config;
  for (const CLI::Option* opt : cmd.get_options()) {
    const std::string name = opt->get_name();
    if (name.empty() || name == "--help") continue;
    if (!opt->results().empty())
      config[name] = opt->results().size() == 1 ? json(opt->results()[0])
                                                : json(opt->results());
  }
  return config;
}

struct CommonFlags {
  std::string out;
  std::string parse_mode = "abort";
  unsigned threads = default_thread_count();
};

// ---------------------------------------------------------------- split ----

int run_split(const std::string& corpus, const std::string& subjects_path,
              double dev_fraction, double test_fraction, std::uint64_t seed,
              const CommonFlags& flags, const json& config) {
  Stopwatch total;
  const fs::path out_dir = ensure_out_dir(flags.out);
  const SubjectConfig subjects = load_subjects(subjects_path);

  std::ifstream in = open_input(corpus);
  IngestStats stats;
  const auto records =
      read_labeled_corpus(in, parse_mode_from(flags.parse_mode), &stats);
  const SplitAssignment split =
      stratified_split(records, subjects, dev_fraction, test_fraction, seed);

  auto split_out = open_output(fs::path(flags.out) / "split.csv");
  split.save(split_out);

  RunManifest manifest{"split", kVersion, config, {}, seed, {}};
  manifest.add_input(corpus);
  if (!subjects_path.empty()) manifest.add_input(subjects_path);
  manifest.timings_ms["total"] = total.ms();
  manifest.save_file((out_dir / "manifest.json").string());
  std::cerr << "split: " << records.size() << " records (" << stats.skipped
            << " skipped) -> " << (out_dir / "split.csv").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- train ----

struct TrainInputs {
  std::string method;
  std::string corpus;
  std::string lexicon;
  std::string scored_lexicon;
  std::string embeddings;
  std::string subjects;
  std::string split_file;
  std::string fit_part = "train";
  std::string target = "all";
  std::string grid_n_trees = "50,100,200";
  std::string grid_max_depth = "8,16,0";
  std::string grid_min_leaf = "1,5";
  std::string grid_l2 = "0.01,0.1,1";
  std::string class_weights;  // "wp,wn" override
  int folds = 5;
  bool tune_threshold_flag = false;
};

// Indices of the records used for fitting: all of them, or one split part.
std::vector<std::size_t> fit_indices(const std::vector<PublicationRecord>& records,
                                     const TrainInputs& inputs) {
  std::vector<std::size_t> idx;
  if (inputs.split_file.empty()) {
    idx.resize(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) idx[i] = i;
    return idx;
  }
  std::ifstream in = open_input(inputs.split_file);
  const SplitAssignment split = SplitAssignment::load(in);
  const SplitPart want = split_part_from_name(inputs.fit_part);
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto it = split.parts.find(records[i].id);
    if (it != split.parts.end() && it->second == want) idx.push_back(i);
  }
  return idx;
}

std::optional<std::pair<double, double>> parse_class_weights(const std::string& csv) {
  if (csv.empty()) return std::nullopt;
  const auto values = parse_double_list(csv);
  if (values.size() != 2) throw InputError("--class-weights needs exactly two values");
  return std::make_pair(values[0], values[1]);
}

int run_train(const TrainInputs& inputs, std::uint64_t seed, const CommonFlags& flags,
              const json& config) {
  Stopwatch total;
  const fs::path out_dir = ensure_out_dir(flags.out);
  RunManifest manifest{"train", kVersion, config, {}, seed, {}};
  const fs::path model_path = out_dir / "model.txt";

  if (inputs.method == "keywords") {
    if (inputs.lexicon.empty()) throw InputError("--lexicon is required for keywords");
    KeywordModel model{load_lexicon_file(inputs.lexicon)};
    save_model_file(model_path.string(), model);
    manifest.add_input(inputs.lexicon);
    manifest.timings_ms["total"] = total.ms();
    manifest.save_file((out_dir / "manifest.json").string());
    std::cerr << "train: compiled " << model.patterns.size() << " patterns -> "
              << model_path.string() << "\n";
    return 0;
  }

  if (inputs.corpus.empty())
    throw InputError("--corpus is required for " + inputs.method);
  const SubjectConfig subjects = load_subjects(inputs.subjects);
  std::ifstream corpus_in = open_input(inputs.corpus);
  IngestStats stats;
  const auto records =
      read_labeled_corpus(corpus_in, parse_mode_from(flags.parse_mode), &stats);
  const auto idx = fit_indices(records, inputs);
  if (idx.empty())
    throw Error("EmptyData", ErrorKind::data, "no records selected for fitting");

  std::vector<char> labels(idx.size());
  std::vector<std::string> strata(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto& r = records[idx[k]];
    labels[k] = target_label(r, subjects, inputs.target) ? 1 : 0;
    strata[k] = r.year ? std::to_string(*r.year) : std::string("?");
  }
  const auto class_weights = parse_class_weights(inputs.class_weights);

  GridSpec spec;
  spec.folds = inputs.folds;

  if (inputs.method == "lexicon_forest") {
    if (inputs.scored_lexicon.empty())
      throw InputError("--scored-lexicon is required for lexicon_forest");
    ScoredLexicon lexicon = ScoredLexicon::load_file(inputs.scored_lexicon);
    Stopwatch features_watch;
    std::vector<FeatureVector> x(idx.size());
    parallel_chunks(idx.size(), flags.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k)
        x[k] = extract_features(records[idx[k]], lexicon);
    });
    manifest.timings_ms["features"] = features_watch.ms();

    spec.axes["n_trees"] = parse_double_list(inputs.grid_n_trees);
    spec.axes["max_depth"] = parse_double_list(inputs.grid_max_depth);
    spec.axes["min_leaf"] = parse_double_list(inputs.grid_min_leaf);

    auto forest_for_cell = [&](std::span<const std::size_t> train_idx,
                               const GridCell& cell, std::uint64_t cell_seed) {
      std::vector<FeatureVector> sub_x;
      std::vector<bool> sub_y;
      sub_x.reserve(train_idx.size());
      sub_y.reserve(train_idx.size());
      for (std::size_t i : train_idx) {
        sub_x.push_back(x[i]);
        sub_y.push_back(labels[i] != 0);
      }
      ForestHyperparams hp;
      hp.n_trees = static_cast<int>(cell.at("n_trees", 100));
      hp.max_depth = static_cast<int>(cell.at("max_depth", 0));
      hp.min_leaf = static_cast<int>(cell.at("min_leaf", 1));
      return train_forest(sub_x, sub_y, hp, cell_seed, class_weights, flags.threads);
    };

    Stopwatch cv_watch;
    const GridResult cv =
        grid_search(labels, strata, spec, seed, forest_for_cell,
                    [&](const ForestModel& model, std::size_t i) {
                      return predict_forest(model, x[i]).label;
                    });
    manifest.timings_ms["grid_search"] = cv_watch.ms();

    auto cv_out = open_output(out_dir / "cv_table.csv");
    write_cv_table_csv(cv_out, cv);

    // Refit the winning cell on everything selected for fitting.
    std::vector<std::size_t> all(idx.size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    ForestModel final_forest = forest_for_cell(all, cv.best, seed);
    save_model_file(model_path.string(),
                    LexiconForestModel{std::move(lexicon), std::move(final_forest)});
    manifest.add_input(inputs.scored_lexicon);
  } else if (inputs.method == "embedding_linear") {
    if (inputs.embeddings.empty())
      throw InputError("--embeddings is required for embedding_linear");
    std::ifstream embeddings_in = open_input(inputs.embeddings);
    const EmbeddingTable table = read_embeddings(embeddings_in);

    std::vector<const std::vector<double>*> rows(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      auto it = table.rows.find(records[idx[k]].id);
      if (it == table.rows.end()) throw MissingEmbedding(records[idx[k]].id);
      rows[k] = &it->second;
    }

    spec.axes["l2"] = parse_double_list(inputs.grid_l2);
    auto linear_for_cell = [&](std::span<const std::size_t> train_idx,
                               const GridCell& cell, std::uint64_t) {
      EmbeddingTable sub;
      sub.dim = table.dim;
      std::map<std::string, bool> sub_labels;
      for (std::size_t i : train_idx) {
        const std::string& id = records[idx[i]].id;
        sub.rows.emplace(id, *rows[i]);
        sub_labels[id] = labels[i] != 0;
      }
      LinearTrainOptions options;
      options.l2 = cell.at("l2", 1.0);
      options.class_weights = class_weights;
      return train_linear(sub, sub_labels, options);
    };

    Stopwatch cv_watch;
    const GridResult cv =
        grid_search(labels, strata, spec, seed, linear_for_cell,
                    [&](const LinearModel& model, std::size_t i) {
                      return predict_linear(model, *rows[i]).label;
                    });
    manifest.timings_ms["grid_search"] = cv_watch.ms();

    auto cv_out = open_output(out_dir / "cv_table.csv");
    write_cv_table_csv(cv_out, cv);

    std::vector<std::size_t> all(idx.size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    LinearModel model = linear_for_cell(all, cv.best, seed);
    if (inputs.tune_threshold_flag) {
      std::vector<double> scores(idx.size());
      for (std::size_t k = 0; k < idx.size(); ++k)
        scores[k] = predict_linear(model, *rows[k]).score;
      model.threshold = tune_threshold(scores, labels);
    }
    save_model_file(model_path.string(), model);
    manifest.add_input(inputs.embeddings);
  } else {
    throw InputError("unknown method '" + inputs.method + "'");
  }

  manifest.add_input(inputs.corpus);
  if (!inputs.subjects.empty()) manifest.add_input(inputs.subjects);
  if (!inputs.split_file.empty()) manifest.add_input(inputs.split_file);
  manifest.timings_ms["total"] = total.ms();
  manifest.save_file((out_dir / "manifest.json").string());
  std::cerr << "train: " << idx.size() << " records -> " << model_path.string() << "\n";
  return 0;
}

// -------------------------------------------------------------- predict ----

int run_predict(const std::string& model_path, const std::string& corpus,
                const std::string& embeddings_path, const std::string& source,
                const CommonFlags& flags, const json& config) {
  Stopwatch total;
  const fs::path out_dir = ensure_out_dir(flags.out);
  const Model model = load_model_file(model_path);
  const ParseMode mode = parse_mode_from(flags.parse_mode);
  if (std::holds_alternative<ForestModel>(model))
    throw InputError("bare forest models carry no lexicon; train lexicon_forest");

  EmbeddingTable table;
  if (std::holds_alternative<LinearModel>(model)) {
    if (embeddings_path.empty())
      throw InputError("--embeddings is required for linear models");
    std::ifstream in = open_input(embeddings_path);
    table = read_embeddings(in);
  }

  std::ifstream in = open_input(corpus);
  auto predictions_out = open_output(out_dir / "predictions.jsonl");
  std::size_t n_skipped_no_text = 0, n_skipped_no_embedding = 0, n_out = 0;

  const auto emit = [&](const PublicationRecord& r) {
    json line;
    line["id"] = r.id;
    if (const auto* kw = std::get_if<KeywordModel>(&model)) {
      const KeywordResult res = classify_by_keywords(r, kw->patterns);
      line["label"] = res.relevant;
      line["score"] = res.relevant ? 1.0 : 0.0;
      json hits = json::array();
      for (std::size_t i : res.hits) hits.push_back(kw->patterns[i].source());
      line["hits"] = hits;
    } else if (const auto* lf = std::get_if<LexiconForestModel>(&model)) {
      const Prediction p = predict_forest(lf->forest, extract_features(r, lf->lexicon));
      line["label"] = p.label;
      line["score"] = p.score;
    } else {
      const auto& linear = std::get<LinearModel>(model);
      auto row = table.rows.find(r.id);
      if (row == table.rows.end()) throw MissingEmbedding(r.id);
      const Prediction p = predict_linear(linear, row->second);
      line["label"] = p.label;
      line["score"] = p.score;
    }
    predictions_out << line.dump() << '\n';
    ++n_out;
  };

  IngestStats stats;
  for_each_unlabeled(in, source_from_name(source), mode,
                     [&](PublicationRecord&& r) {
                       try {
                         emit(r);
                       } catch (const NoText&) {
                         if (mode == ParseMode::abort) throw;
                         ++n_skipped_no_text;
                       } catch (const MissingEmbedding&) {
                         if (mode == ParseMode::abort) throw;
                         ++n_skipped_no_embedding;
                       }
                     },
                     &stats);

  RunManifest manifest{"predict", kVersion, config, {}, std::nullopt, {}};
  manifest.add_input(model_path);
  manifest.add_input(corpus);
  if (!embeddings_path.empty()) manifest.add_input(embeddings_path);
  manifest.timings_ms["total"] = total.ms();
  manifest.save_file((out_dir / "manifest.json").string());
  std::cerr << "predict: " << n_out << " predictions (" << stats.skipped
            << " unparsed, " << n_skipped_no_text << " without text, "
            << n_skipped_no_embedding << " without embeddings)\n";
  return 0;
}

// ------------------------------------------------------------- evaluate ----

int run_evaluate(const std::string& predictions_path, const std::string& corpus,
                 const std::string& subjects_path, const std::string& split_path,
                 const std::string& part_name, const std::string& target,
                 const std::string& format, const CommonFlags& flags,
                 const json& config) {
  Stopwatch total;
  const fs::path out_dir = ensure_out_dir(flags.out);
  const SubjectConfig subjects = load_subjects(subjects_path);
  const auto predictions_all = read_predictions_file(predictions_path);

  std::ifstream corpus_in = open_input(corpus);
  IngestStats stats;
  const auto records =
      read_labeled_corpus(corpus_in, parse_mode_from(flags.parse_mode), &stats);

  std::optional<SplitAssignment> split;
  SplitPart part = SplitPart::test;
  if (!split_path.empty()) {
    std::ifstream split_in = open_input(split_path);
    split = SplitAssignment::load(split_in);
    part = split_part_from_name(part_name);
  }

  std::map<std::string, bool> predictions, labels;
  std::map<std::string, int> years;
  for (const auto& r : records) {
    if (split) {
      auto it = split->parts.find(r.id);
      if (it == split->parts.end() || it->second != part) continue;
    }
    auto p = predictions_all.find(r.id);
    if (p == predictions_all.end())
      throw KeyMismatch("no prediction for id '" + r.id + "'");
    predictions[r.id] = p->second;
    labels[r.id] = target_label(r, subjects, target);
    if (r.year) years[r.id] = *r.year;
  }

  const EvalReport report = compute_metrics(predictions, labels, years);
  {
    auto csv = open_output(out_dir / "report.csv");
    write_report_csv(csv, report);
    auto table = open_output(out_dir / "report.txt");
    write_report_table(table, report);
    auto f1 = open_output(out_dir / "f1_by_year.csv");
    write_f1_by_year_csv(f1, report);
  }
  if (format == "table")
    write_report_table(std::cout, report);
  else
    write_report_csv(std::cout, report);

  RunManifest manifest{"evaluate", kVersion, config, {}, std::nullopt, {}};
  manifest.add_input(predictions_path);
  manifest.add_input(corpus);
  if (!subjects_path.empty()) manifest.add_input(subjects_path);
  if (!split_path.empty()) manifest.add_input(split_path);
  manifest.timings_ms["total"] = total.ms();
  manifest.save_file((out_dir / "manifest.json").string());
  return 0;
}

// ------------------------------------------------------------- crosstab ----

int run_crosstab(const std::string& corpus,
                 const std::vector<std::string>& prediction_args,
                 const std::string& source, const std::string& format,
                 const CommonFlags& flags, const json& config) {
  Stopwatch total;
  const fs::path out_dir = ensure_out_dir(flags.out);

  std::vector<std::pair<std::string, std::map<std::string, bool>>> predictions;
  for (const auto& arg : prediction_args) {
    const std::size_t eq = arg.find('=');
    if (eq == std::string::npos)
      throw InputError("--predictions expects name=path, got '" + arg + "'");
    predictions.emplace_back(arg.substr(0, eq),
                             read_predictions_file(arg.substr(eq + 1)));
  }

  std::ifstream in = open_input(corpus);
  IngestStats stats;
  const auto records = read_unlabeled_corpus(
      in, source_from_name(source), parse_mode_from(flags.parse_mode), &stats);
  const Crosstab table = field_crosstab(records, predictions);
  {
    auto csv = open_output(out_dir / "crosstab.csv");
    write_crosstab_csv(csv, table);
    auto text = open_output(out_dir / "crosstab.txt");
    write_crosstab_table(text, table);
  }
  if (format == "table")
    write_crosstab_table(std::cout, table);
  else
    write_crosstab_csv(std::cout, table);

  RunManifest manifest{"crosstab", kVersion, config, {}, std::nullopt, {}};
  manifest.add_input(corpus);
  for (const auto& arg : prediction_args)
    manifest.add_input(arg.substr(arg.find('=') + 1));
  manifest.timings_ms["total"] = total.ms();
  manifest.save_file((out_dir / "manifest.json").string());
  return 0;
}

// ---------------------------------------------------------------- dedup ----

int run_dedup(const std::vector<std::string>& input_args, int min_year,
              const std::string& language_gate_spec, const std::string& priority_csv,
              std::size_t memory_budget_mb, const CommonFlags& flags,
              const json& config) {
  Stopwatch total;
  const fs::path out_dir = ensure_out_dir(flags.out);

  LanguageGate gate = pass_through_gate();
  if (language_gate_spec != "none") {
    if (language_gate_spec.rfind("declared:", 0) != 0)
      throw InputError("--language-gate must be 'none' or 'declared:<codes>'");
    std::set<std::string> allowed;
    std::stringstream ss(language_gate_spec.substr(9));
    std::string code;
    while (std::getline(ss, code, ','))
      if (!code.empty()) allowed.insert(code);
    gate = declared_language_gate(std::move(allowed));
  }

  ClusterOptions options;
  options.n_threads = flags.threads;
  options.memory_budget_bytes = memory_budget_mb << 20;
  if (!priority_csv.empty()) {
    options.source_priority.clear();
    std::stringstream ss(priority_csv);
    std::string name;
    while (std::getline(ss, name, ','))
      if (!name.empty()) options.source_priority.push_back(source_from_name(name));
  }

  std::vector<KeyedRecord> keyed;
  std::map<std::string, std::size_t> rejects;
  std::size_t n_read = 0;
  RunManifest manifest{"dedup", kVersion, config, {}, std::nullopt, {}};
  for (const auto& arg : input_args) {
    const std::size_t eq = arg.find('=');
    if (eq == std::string::npos)
      throw InputError("--input expects source=path, got '" + arg + "'");
    const Source source = source_from_name(arg.substr(0, eq));
    const std::string path = arg.substr(eq + 1);
    std::ifstream in = open_input(path);
    IngestStats stats;
    for_each_unlabeled(in, source, parse_mode_from(flags.parse_mode),
                       [&](PublicationRecord&& r) {
                         ++n_read;
                         const AdmitResult admit = admit_record(r, min_year, gate);
                         if (!admit.admitted) {
                           rejects[std::string(reject_reason_name(admit.reason))] += 1;
                           return;
                         }
                         keyed.push_back({r.id, r.source, derive_keys(r)});
                       },
                       &stats);
    rejects["unparsed"] += stats.skipped;
    manifest.add_input(path);
  }

  Stopwatch cluster_watch;
  const auto clusters = cluster_keyed(keyed, options);
  manifest.timings_ms["cluster"] = cluster_watch.ms();

  {
    auto jsonl = open_output(out_dir / "clusters.jsonl");
    write_clusters_jsonl(jsonl, clusters);
    auto crosswalk = open_output(out_dir / "crosswalk.csv");
    write_crosswalk_csv(crosswalk, clusters);
  }

  manifest.timings_ms["total"] = total.ms();
  manifest.save_file((out_dir / "manifest.json").string());
  std::cerr << "dedup: " << n_read << " read, " << keyed.size() << " admitted, "
            << clusters.size() << " clusters";
  for (const auto& [reason, count] : rejects)
    std::cerr << ", " << reason << "=" << count;
  std::cerr << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fieldscope: field delineation over publication metadata"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "Optional config file (flags win)");
  app.require_subcommand(1);

  // split
  auto* split_cmd = app.add_subcommand("split", "Stratified train/dev/test split");
  std::string split_corpus, split_subjects;
  double dev_fraction = 0.10, test_fraction = 0.10;
  std::uint64_t split_seed = 0;
  CommonFlags split_flags;
  split_cmd->add_option("--corpus", split_corpus, "Labeled corpus JSONL")->required();
  split_cmd->add_option("--subjects", split_subjects, "Subject config JSON");
  split_cmd->add_option("--dev", dev_fraction, "Dev fraction");
  split_cmd->add_option("--test", test_fraction, "Test fraction");
  split_cmd->add_option("--seed", split_seed, "RNG seed")->required();
  split_cmd->add_option("--out", split_flags.out, "Output directory")->required();
  split_cmd->add_option("--parse-mode", split_flags.parse_mode, "abort|skip");

  // train
  auto* train_cmd = app.add_subcommand("train", "Fit a classifier");
  TrainInputs train_inputs;
  std::uint64_t train_seed = 0;
  CommonFlags train_flags;
  train_cmd
      ->add_option("--method", train_inputs.method,
                   "keywords|lexicon_forest|embedding_linear")
      ->required();
  train_cmd->add_option("--corpus", train_inputs.corpus, "Labeled corpus JSONL");
  train_cmd->add_option("--lexicon", train_inputs.lexicon, "Keyword lexicon file");
  train_cmd->add_option("--scored-lexicon", train_inputs.scored_lexicon,
                        "term<TAB>score lexicon file");
  train_cmd->add_option("--embeddings", train_inputs.embeddings, "Embeddings JSONL");
  train_cmd->add_option("--subjects", train_inputs.subjects, "Subject config JSON");
  train_cmd->add_option("--split", train_inputs.split_file, "Split CSV from 'split'");
  train_cmd->add_option("--fit-part", train_inputs.fit_part, "Split part to fit on");
  train_cmd->add_option("--target", train_inputs.target,
                        "'all' or one subject code (one-versus-all)");
  train_cmd->add_option("--grid-n-trees", train_inputs.grid_n_trees, "Forest axis");
  train_cmd->add_option("--grid-max-depth", train_inputs.grid_max_depth,
                        "Forest axis (0 = unlimited)");
  train_cmd->add_option("--grid-min-leaf", train_inputs.grid_min_leaf, "Forest axis");
  train_cmd->add_option("--grid-l2", train_inputs.grid_l2, "Linear axis");
  train_cmd->add_option("--class-weights", train_inputs.class_weights,
                        "wp,wn (default: inverse class frequency)");
  train_cmd->add_option("--folds", train_inputs.folds, "CV folds");
  train_cmd->add_flag("--tune-threshold", train_inputs.tune_threshold_flag,
                      "Tune the decision threshold for positive F1");
  train_cmd->add_option("--seed", train_seed, "RNG seed")->required();
  train_cmd->add_option("--out", train_flags.out, "Output directory")->required();
  train_cmd->add_option("--parse-mode", train_flags.parse_mode, "abort|skip");
  train_cmd->add_option("--threads", train_flags.threads, "Worker threads");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Apply a model to a corpus");
  std::string predict_model, predict_corpus, predict_embeddings,
      predict_source = "other";
  CommonFlags predict_flags;
  predict_cmd->add_option("--model", predict_model, "Model file")->required();
  predict_cmd->add_option("--corpus", predict_corpus, "Corpus JSONL")->required();
  predict_cmd->add_option("--embeddings", predict_embeddings, "Embeddings JSONL");
  predict_cmd->add_option("--source", predict_source, "Source tag for corpus records");
  predict_cmd->add_option("--out", predict_flags.out, "Output directory")->required();
  predict_cmd->add_option("--parse-mode", predict_flags.parse_mode, "abort|skip");
  predict_cmd->add_option("--threads", predict_flags.threads, "Worker threads");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Score predictions against labels");
  std::string eval_predictions, eval_corpus, eval_subjects, eval_split,
      eval_part = "test", eval_target = "all", eval_format = "csv";
  CommonFlags eval_flags;
  eval_cmd->add_option("--predictions", eval_predictions, "Predictions JSONL")
      ->required();
  eval_cmd->add_option("--corpus", eval_corpus, "Labeled corpus JSONL")->required();
  eval_cmd->add_option("--subjects", eval_subjects, "Subject config JSON");
  eval_cmd->add_option("--split", eval_split, "Split CSV; restricts to --part");
  eval_cmd->add_option("--part", eval_part, "train|dev|test");
  eval_cmd->add_option("--target", eval_target, "'all' or one subject code");
  eval_cmd->add_option("--format", eval_format, "csv|table")
      ->check(CLI::IsMember({"csv", "table"}));
  eval_cmd->add_option("--out", eval_flags.out, "Output directory")->required();
  eval_cmd->add_option("--parse-mode", eval_flags.parse_mode, "abort|skip");

  // crosstab
  auto* crosstab_cmd =
      app.add_subcommand("crosstab", "Field-of-study cross-tabulation");
  std::string crosstab_corpus, crosstab_source = "mag", crosstab_format = "csv";
  std::vector<std::string> crosstab_predictions;
  CommonFlags crosstab_flags;
  crosstab_cmd
      ->add_option("--corpus", crosstab_corpus, "Corpus JSONL with field_scores")
      ->required();
  crosstab_cmd
      ->add_option("--predictions", crosstab_predictions, "name=path, repeatable")
      ->required();
  crosstab_cmd->add_option("--source", crosstab_source, "Source tag");
  crosstab_cmd->add_option("--format", crosstab_format, "csv|table")
      ->check(CLI::IsMember({"csv", "table"}));
  crosstab_cmd->add_option("--out", crosstab_flags.out, "Output directory")->required();
  crosstab_cmd->add_option("--parse-mode", crosstab_flags.parse_mode, "abort|skip");

  // dedup
  auto* dedup_cmd = app.add_subcommand("dedup", "Cross-corpus deduplication");
  std::vector<std::string> dedup_inputs;
  int dedup_min_year = 2010;
  std::string dedup_gate = "none", dedup_priority;
  std::size_t dedup_budget_mb = 512;
  CommonFlags dedup_flags;
  dedup_cmd->add_option("--input", dedup_inputs, "source=path, repeatable")->required();
  dedup_cmd->add_option("--min-year", dedup_min_year, "Admit records since this year");
  dedup_cmd->add_option("--language-gate", dedup_gate, "none|declared:<codes>");
  dedup_cmd->add_option("--priority", dedup_priority,
                        "Canonical source priority, e.g. wos,dimensions,mag");
  dedup_cmd->add_option("--memory-budget-mb", dedup_budget_mb,
                        "Candidate index budget before spilling");
  dedup_cmd->add_option("--out", dedup_flags.out, "Output directory")->required();
  dedup_cmd->add_option("--parse-mode", dedup_flags.parse_mode, "abort|skip");
  dedup_cmd->add_option("--threads", dedup_flags.threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  try {
    if (split_cmd->parsed())
      return run_split(split_corpus, split_subjects, dev_fraction, test_fraction,
                       split_seed, split_flags, snapshot(*split_cmd));
    if (train_cmd->parsed())
      return run_train(train_inputs, train_seed, train_flags, snapshot(*train_cmd));
    if (predict_cmd->parsed())
      return run_predict(predict_model, predict_corpus, predict_embeddings,
                         predict_source, predict_flags, snapshot(*predict_cmd));
    if (eval_cmd->parsed())
      return run_evaluate(eval_predictions, eval_corpus, eval_subjects, eval_split,
                          eval_part, eval_target, eval_format, eval_flags,
                          snapshot(*eval_cmd));
    if (crosstab_cmd->parsed())
      return run_crosstab(crosstab_corpus, crosstab_predictions, crosstab_source,
                          crosstab_format, crosstab_flags, snapshot(*crosstab_cmd));
    if (dedup_cmd->parsed())
      return run_dedup(dedup_inputs, dedup_min_year, dedup_gate, dedup_priority,
                       dedup_budget_mb, dedup_flags, snapshot(*dedup_cmd));
  } catch (const Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::input ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: Unexpected: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
