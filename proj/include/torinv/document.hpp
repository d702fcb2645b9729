#pragma once

// JSON document model for the command-line tool: six document kinds
// (matrix, complex, representation, nerve, transition-data, cocycle) under
// the versioned schema "torinv/1".  Integers outside the 53-bit range and
// non-integer rationals are encoded as strings ("123...", "p/q") so that
// every value survives a JSON round-trip losslessly.

#include <string>
#include <variant>

#include "json.hpp"
#include "torinv/affine_groups.hpp"
#include "torinv/bundle_cocycles.hpp"
#include "torinv/exact_linalg.hpp"
#include "torinv/twisted_complex.hpp"

namespace torinv {

inline constexpr const char* kSchemaVersion = "torinv/1";

// A chain complex over a group ring together with the representation that
// turns it into an integer cochain complex.
struct TwistedComplexDocument {
    TwistedComplex complex;
    Representation twisting;
};

using DocumentPayload = std::variant<IntMatrix, TwistedComplexDocument, Representation,
                                     CoverNerve, TransitionData, ChernCocycle>;

struct Document {
    DocumentPayload payload;
};

// One of "matrix", "complex", "representation", "nerve", "transition-data",
// "cocycle".
std::string document_kind(const Document& doc);

nlohmann::json document_to_json(const Document& doc);
// Throws ParseError on any malformed or invalid payload (including domain
// validation: unimodularity, relators, nerve well-formedness).
Document document_from_json(const nlohmann::json& j);

std::string serialize_document(const Document& doc);  // dump(2) + newline
Document parse_document(const std::string& text);     // throws ParseError

// Resolves "builtin:<name>" (rp2-twisted, rp2-bundle, s2-tetra, circle-loop)
// or reads the file at the given path.
Document load_document(const std::string& target);

// Scalar and matrix encoding helpers, shared with the command-line reports.
nlohmann::json int_to_json(const Int& v);
Int int_from_json(const nlohmann::json& j);
nlohmann::json rat_to_json(const Rat& v);
Rat rat_from_json(const nlohmann::json& j);
nlohmann::json int_vec_to_json(const IntVec& v);
IntVec int_vec_from_json(const nlohmann::json& j);
nlohmann::json int_matrix_to_json(const IntMatrix& m);
IntMatrix int_matrix_from_json(const nlohmann::json& j);

}  // namespace torinv
