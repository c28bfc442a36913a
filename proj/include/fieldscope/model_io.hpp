#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "fieldscope/forest.hpp"
#include "fieldscope/keywords.hpp"
#include "fieldscope/linear.hpp"

namespace fieldscope {

// The keyword baseline has no learned parameters; its "model" is the
// compiled pattern list.
struct KeywordModel {
  std::vector<TermPattern> patterns;
};

// Scored lexicon bundled with the forest trained on its features, so a
// single model file suffices for prediction.
struct LexiconForestModel {
  ScoredLexicon lexicon;
  ForestModel forest;
};

using Model = std::variant<KeywordModel, ForestModel, LinearModel, LexiconForestModel>;

// Versioned structured-text format ("fieldscope-model v1 <kind>" header).
// Doubles are written as C hex-float literals, so save/load round-trips
// bit-exactly.
void save_model(std::ostream& out, const Model& model);
void save_model_file(const std::string& path, const Model& model);

Model load_model(std::istream& in);  // throws ParseError on malformed files
Model load_model_file(const std::string& path);

std::string_view model_kind(const Model& model);

}  // namespace fieldscope
