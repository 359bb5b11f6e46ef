#pragma once

#include "ruthkit/atiyah.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace ruthkit {

using ojson = nlohmann::ordered_json;

inline constexpr const char* kArtifactName = "ruthkit";
inline constexpr const char* kArtifactVersion = "0.1.0";

/// Malformed input: bad JSON, bad rational, schema violation, index out of range.
struct ModelParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A Lie pair with a flat A-superconnection and an optional L-extension seed.
struct Model {
  LiePair pair;
  SuperConnection DA;
  std::optional<SuperConnection> seed;
  std::string preset;  // empty unless produced by a preset
};

// ---- scalar and tensor encodings ----

Q rational_from_json(const ojson& j);
/// A string or integer is a constant; an object maps monomial labels to rationals.
VecQ element_from_json(const CoeffAlgebra& a, const ojson& j);
ojson element_to_json(const CoeffAlgebra& a, const VecQ& v);
/// Sparse blocks: [{"indices": [...], "entries": [[row, col, coeff], ...]}, ...].
ojson form_to_json(const Form& f);
ojson cmat_to_json(const CoeffAlgebra& a, const CMat& m);
ojson failures_to_json(const std::vector<AxiomFailure>& fs);
ojson dims_to_json(const std::map<int, int>& dims);

// ---- models ----

Model parse_model(const ojson& j);
/// Parses text; JSON syntax errors become ModelParseError.
Model parse_model_text(const std::string& text);
ojson serialize_model(const Model& m);
bool models_equal(const Model& a, const Model& b);

/// Superconnection block {"del", "nabla", "forms"} over `base` on the bundle E.
SuperConnection superconnection_from_json(const ojson& j, AlgebroidPtr base, const GradedBundle& E);
ojson superconnection_to_json(const SuperConnection& D);
/// An extension seed file: either a bare block or an object with "extension_seed" or "superconnection".
SuperConnection seed_from_text(const std::string& text, const Model& m);

/// Built-in models: abelian, double, normal, adjoint.
Model preset_model(const std::string& name);
/// Applies a named preset to the ambient pair of `m`.
Model apply_preset(const std::string& name, const LiePair& pair, const ojson& params = ojson::object());

std::string sha256_hex(const std::string& bytes);

}  // namespace ruthkit
