#pragma once

// JSON source documents.
//
//   {"model": "pw", "tuples": [["Bob","CS100"], ...],
//    "worlds": [{"tuples": [0, 1], "prob": "3/10"}, ...]}
//   {"model": "pr", "rows": [{"tuple": [...], "event": "!c1"}, ...],
//    "var_probs": {"c1": "1/5"}}
//   {"model": "epr", "rows": [...], "constraints": [{"lhs": "...", "rhs": "..."}],
//    "var_probs": {...}}
//
// Probabilities are strings, either decimal ("0.35") or fractions ("9/13").
// A world may also be written as a bare array of tuple indices.

#include <string>
#include <variant>

#include "json.hpp"
#include "probint/prdb.hpp"

namespace probint {

using Json = nlohmann::ordered_json;
using Document = std::variant<UncertainDB, PrRelation, EprRelation>;

/// "pw", "pr" or "epr".
std::string model_name(const Document& doc);

/// Parses and validates. Throws ValidationError (or ParseError for a bad
/// event formula).
Document parse_document(const Json& j);
Document parse_document_text(const std::string& text);
Document load_document(const std::string& path);

Json to_json(const UncertainDB& u);
Json to_json(const PrRelation& r);
Json to_json(const EprRelation& q);
Json to_json(const Document& doc);

/// Two-space indented JSON followed by a newline.
std::string dump(const Json& j);

}  // namespace probint
