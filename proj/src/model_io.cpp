#include "fieldscope/model_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fieldscope/error.hpp"

namespace fieldscope {

namespace {

std::string dhex(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

// Line-oriented reader that tracks line numbers for ParseError.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    return true;
  }

  std::string expect() {
    std::string line;
    if (!next(line)) throw ParseError(line_no_ + 1, "unexpected end of model file");
    return line;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string field;
  while (ss >> field) out.push_back(field);
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ParseError(line_no, "bad numeric value '" + s + "'");
  return v;
}

long parse_long(const std::string& s, std::size_t line_no) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw ParseError(line_no, "bad integer value '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s, std::size_t line_no) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw ParseError(line_no, "bad integer value '" + s + "'");
  return v;
}

void save_keywords(std::ostream& out, const KeywordModel& model) {
  out << "n_patterns " << model.patterns.size() << '\n';
  for (const auto& p : model.patterns) out << "term " << p.source() << '\n';
}

KeywordModel load_keywords(LineReader& reader) {
  KeywordModel model;
  std::string line = reader.expect();
  auto fields = split_fields(line);
  if (fields.size() != 2 || fields[0] != "n_patterns")
    throw ParseError(reader.line_no(), "expected 'n_patterns <count>'");
  const long count = parse_long(fields[1], reader.line_no());
  for (long i = 0; i < count; ++i) {
    line = reader.expect();
    if (line.rfind("term ", 0) != 0)
      throw ParseError(reader.line_no(), "expected 'term <text>'");
    model.patterns.push_back(TermPattern::compile(line.substr(5)));
  }
  if (reader.expect() != "end") throw ParseError(reader.line_no(), "expected 'end'");
  return model;
}

void save_forest(std::ostream& out, const ForestModel& model) {
  out << "feature_dim " << model.feature_dim << '\n';
  out << "n_trees " << model.hp.n_trees << '\n';
  out << "max_depth " << model.hp.max_depth << '\n';
  out << "min_leaf " << model.hp.min_leaf << '\n';
  out << "features_per_split " << model.hp.features_per_split << '\n';
  out << "class_weights " << dhex(model.weight_positive) << ' '
      << dhex(model.weight_negative) << '\n';
  out << "seed " << model.seed << '\n';
  for (const auto& tree : model.trees) {
    out << "tree " << tree.nodes.size() << '\n';
    for (const auto& n : tree.nodes)
      out << "node " << n.feature << ' ' << dhex(n.threshold) << ' ' << n.left << ' '
          << n.right << ' ' << dhex(n.vote) << '\n';
  }
}

ForestModel load_forest(LineReader& reader) {
  ForestModel model;
  auto header_field = [&](const char* key) {
    auto fields = split_fields(reader.expect());
    if (fields.size() < 2 || fields[0] != key)
      throw ParseError(reader.line_no(), std::string("expected '") + key + " ...'");
    return fields;
  };
  model.feature_dim =
      static_cast<std::size_t>(parse_long(header_field("feature_dim")[1], reader.line_no()));
  model.hp.n_trees = static_cast<int>(parse_long(header_field("n_trees")[1], reader.line_no()));
  model.hp.max_depth =
      static_cast<int>(parse_long(header_field("max_depth")[1], reader.line_no()));
  model.hp.min_leaf =
      static_cast<int>(parse_long(header_field("min_leaf")[1], reader.line_no()));
  model.hp.features_per_split =
      static_cast<int>(parse_long(header_field("features_per_split")[1], reader.line_no()));
  auto weights = header_field("class_weights");
  if (weights.size() != 3) throw ParseError(reader.line_no(), "expected two class weights");
  model.weight_positive = parse_double(weights[1], reader.line_no());
  model.weight_negative = parse_double(weights[2], reader.line_no());
  model.seed = parse_u64(header_field("seed")[1], reader.line_no());

  std::string line;
  while (reader.next(line)) {
    if (line == "end") return model;
    auto fields = split_fields(line);
    if (fields.size() != 2 || fields[0] != "tree")
      throw ParseError(reader.line_no(), "expected 'tree <n_nodes>' or 'end'");
    const long n_nodes = parse_long(fields[1], reader.line_no());
    DecisionTree tree;
    tree.nodes.reserve(static_cast<std::size_t>(n_nodes));
    for (long i = 0; i < n_nodes; ++i) {
      auto node_fields = split_fields(reader.expect());
      if (node_fields.size() != 6 || node_fields[0] != "node")
        throw ParseError(reader.line_no(),
                         "expected 'node <feature> <threshold> <left> <right> <vote>'");
      TreeNode node;
      node.feature = static_cast<int>(parse_long(node_fields[1], reader.line_no()));
      node.threshold = parse_double(node_fields[2], reader.line_no());
      node.left = static_cast<std::int32_t>(parse_long(node_fields[3], reader.line_no()));
      node.right = static_cast<std::int32_t>(parse_long(node_fields[4], reader.line_no()));
      node.vote = parse_double(node_fields[5], reader.line_no());
      tree.nodes.push_back(node);
    }
    model.trees.push_back(std::move(tree));
  }
  throw ParseError(reader.line_no(), "missing 'end'");
}

void save_linear(std::ostream& out, const LinearModel& model) {
  out << "dim " << model.weights.size() << '\n';
  out << "l2 " << dhex(model.l2) << '\n';
  out << "threshold " << dhex(model.threshold) << '\n';
  out << "class_weights " << dhex(model.weight_positive) << ' '
      << dhex(model.weight_negative) << '\n';
  out << "bias " << dhex(model.bias) << '\n';
  out << "weights\n";
  for (std::size_t i = 0; i < model.weights.size(); ++i) {
    out << dhex(model.weights[i]);
    out << ((i % 8 == 7 || i + 1 == model.weights.size()) ? '\n' : ' ');
  }
}

LinearModel load_linear(LineReader& reader) {
  LinearModel model;
  auto header_field = [&](const char* key) {
    auto fields = split_fields(reader.expect());
    if (fields.size() < 2 || fields[0] != key)
      throw ParseError(reader.line_no(), std::string("expected '") + key + " ...'");
    return fields;
  };
  const long dim = parse_long(header_field("dim")[1], reader.line_no());
  model.l2 = parse_double(header_field("l2")[1], reader.line_no());
  model.threshold = parse_double(header_field("threshold")[1], reader.line_no());
  auto weights = header_field("class_weights");
  if (weights.size() != 3) throw ParseError(reader.line_no(), "expected two class weights");
  model.weight_positive = parse_double(weights[1], reader.line_no());
  model.weight_negative = parse_double(weights[2], reader.line_no());
  model.bias = parse_double(header_field("bias")[1], reader.line_no());
  if (reader.expect() != "weights") throw ParseError(reader.line_no(), "expected 'weights'");
  model.weights.reserve(static_cast<std::size_t>(dim));
  while (model.weights.size() < static_cast<std::size_t>(dim)) {
    for (const auto& field : split_fields(reader.expect()))
      model.weights.push_back(parse_double(field, reader.line_no()));
  }
  if (model.weights.size() != static_cast<std::size_t>(dim))
    throw ParseError(reader.line_no(), "weight count does not match dim");
  if (reader.expect() != "end") throw ParseError(reader.line_no(), "expected 'end'");
  return model;
}

}  // namespace

std::string_view model_kind(const Model& model) {
  if (std::holds_alternative<KeywordModel>(model)) return "keywords";
  if (std::holds_alternative<ForestModel>(model)) return "forest";
  if (std::holds_alternative<LexiconForestModel>(model)) return "lexicon_forest";
  return "linear";
}

void save_model(std::ostream& out, const Model& model) {
  out << "fieldscope-model v1 " << model_kind(model) << '\n';
  if (const auto* kw = std::get_if<KeywordModel>(&model)) {
    save_keywords(out, *kw);
  } else if (const auto* forest = std::get_if<ForestModel>(&model)) {
    save_forest(out, *forest);
  } else if (const auto* lf = std::get_if<LexiconForestModel>(&model)) {
    out << "lexicon " << lf->lexicon.size() << '\n';
    for (const auto& entry : lf->lexicon.entries())
      out << "scored_term " << entry.score << ' ' << entry.pattern.source() << '\n';
    save_forest(out, lf->forest);
  } else {
    save_linear(out, std::get<LinearModel>(model));
  }
  out << "end\n";
}

void save_model_file(const std::string& path, const Model& model) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model '" + path + "'");
  save_model(out, model);
}

Model load_model(std::istream& in) {
  LineReader reader(in);
  const std::string header = reader.expect();
  auto fields = split_fields(header);
  if (fields.size() != 3 || fields[0] != "fieldscope-model")
    throw ParseError(reader.line_no(), "not a fieldscope model file");
  if (fields[1] != "v1")
    throw ParseError(reader.line_no(), "unsupported model version '" + fields[1] + "'");
  if (fields[2] == "keywords") return load_keywords(reader);
  if (fields[2] == "forest") return load_forest(reader);
  if (fields[2] == "linear") return load_linear(reader);
  if (fields[2] == "lexicon_forest") {
    LexiconForestModel model;
    auto lex_header = split_fields(reader.expect());
    if (lex_header.size() != 2 || lex_header[0] != "lexicon")
      throw ParseError(reader.line_no(), "expected 'lexicon <count>'");
    const long count = parse_long(lex_header[1], reader.line_no());
    std::vector<std::pair<std::string, int>> terms;
    for (long i = 0; i < count; ++i) {
      const std::string line = reader.expect();
      if (line.rfind("scored_term ", 0) != 0)
        throw ParseError(reader.line_no(), "expected 'scored_term <score> <text>'");
      const std::size_t space = line.find(' ', 12);
      if (space == std::string::npos)
        throw ParseError(reader.line_no(), "expected 'scored_term <score> <text>'");
      terms.emplace_back(line.substr(space + 1),
                         static_cast<int>(parse_long(line.substr(12, space - 12),
                                                     reader.line_no())));
    }
    model.lexicon = ScoredLexicon::from_terms(terms);
    model.forest = load_forest(reader);
    return model;
  }
  throw ParseError(reader.line_no(), "unknown model kind '" + fields[2] + "'");
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model '" + path + "'");
  return load_model(in);
}

}  // namespace fieldscope
