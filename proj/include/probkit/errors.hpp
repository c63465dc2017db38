#pragma once

#include <stdexcept>
#include <string>

namespace probkit {

enum class errc {
  space_mismatch,
  empty_family,
  size_limit,
  not_disjoint,
  condition_on_null,
  prefix_null,
  evidence_null,
  not_a_partition,
  index_out_of_range,
  length_mismatch,
  invalid_prior,
  syntax_error,
  duplicate_name,
  unknown_name,
  invalid_weight,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::space_mismatch: return "SpaceMismatch";
    case errc::empty_family: return "EmptyFamily";
    case errc::size_limit: return "SizeLimit";
    case errc::not_disjoint: return "NotDisjoint";
    case errc::condition_on_null: return "ConditionOnNull";
    case errc::prefix_null: return "PrefixNull";
    case errc::evidence_null: return "EvidenceNull";
    case errc::not_a_partition: return "NotAPartition";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::invalid_prior: return "InvalidPrior";
    case errc::syntax_error: return "SyntaxError";
    case errc::duplicate_name: return "DuplicateName";
    case errc::unknown_name: return "UnknownName";
    case errc::invalid_weight: return "InvalidWeight";
  }
  return "UnknownError";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

// 1-based line/column of a character in source text.
struct source_pos {
  int line = 1;
  int col = 1;
};

class syntax_error : public error {
 public:
  syntax_error(source_pos pos, const std::string& msg)
      : error(errc::syntax_error,
              std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + msg),
        pos_(pos) {}

  source_pos pos() const { return pos_; }

 private:
  source_pos pos_;
};

}  // namespace probkit
