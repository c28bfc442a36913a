#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fieldscope {

// Exit-code buckets used by the CLI: usage/input errors map to 2, data errors to 3.
enum class ErrorKind { input, data };

// Base for all structured errors. `name()` is the stable identifier printed
// on stderr and asserted in tests; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string name, ErrorKind kind, const std::string& detail)
      : std::runtime_error(detail), name_(std::move(name)), kind_(kind) {}

  const std::string& name() const { return name_; }
  ErrorKind kind() const { return kind_; }

 private:
  std::string name_;
  ErrorKind kind_;
};

struct ParseError : Error {
  ParseError(std::size_t line, const std::string& detail)
      : Error("ParseError", ErrorKind::data,
              "line " + std::to_string(line) + ": " + detail),
        line(line) {}
  std::size_t line;
};

struct MissingSubjects : Error {
  explicit MissingSubjects(const std::string& id)
      : Error("MissingSubjects", ErrorKind::data,
              "record '" + id + "' has no subjects (unlabeled corpus?)") {}
};

struct MissingYear : Error {
  explicit MissingYear(const std::string& id)
      : Error("MissingYear", ErrorKind::data, "record '" + id + "' has no year") {}
};

struct EmptyTerm : Error {
  explicit EmptyTerm(const std::string& term)
      : Error("EmptyTerm", ErrorKind::data,
              "term '" + term + "' normalizes to zero tokens") {}
};

struct NoText : Error {
  explicit NoText(const std::string& id)
      : Error("NoText", ErrorKind::data,
              "record '" + id + "' has neither title nor abstract") {}
};

struct DimensionMismatch : Error {
  DimensionMismatch(const std::string& id, std::size_t expected, std::size_t got)
      : Error("DimensionMismatch", ErrorKind::data,
              "'" + id + "': expected dimension " + std::to_string(expected) +
                  ", got " + std::to_string(got)) {}
};

struct DuplicateId : Error {
  explicit DuplicateId(const std::string& id)
      : Error("DuplicateId", ErrorKind::data, "duplicate record id '" + id + "'") {}
};

struct NonFiniteValue : Error {
  explicit NonFiniteValue(const std::string& id)
      : Error("NonFiniteValue", ErrorKind::data,
              "non-finite value in vector for id '" + id + "'") {}
};

struct SingleClass : Error {
  SingleClass()
      : Error("SingleClass", ErrorKind::data,
              "training data contains only one class") {}
};

struct EmptyData : Error {
  EmptyData() : Error("EmptyData", ErrorKind::data, "training data is empty") {}
};

struct MissingEmbedding : Error {
  explicit MissingEmbedding(const std::string& id)
      : Error("MissingEmbedding", ErrorKind::data,
              "no embedding vector for labeled id '" + id + "'") {}
};

struct KeyMismatch : Error {
  explicit KeyMismatch(const std::string& detail)
      : Error("KeyMismatch", ErrorKind::data, detail) {}
};

struct InputError : Error {
  explicit InputError(const std::string& detail)
      : Error("InputError", ErrorKind::input, detail) {}
};

}  // namespace fieldscope
