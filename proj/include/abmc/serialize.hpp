#pragma once

// JSON (format 1) for algebras, modules, morphisms and complexes, and the
// aligned text rendering of reports. Readers reject unknown fields and name
// the offending location by JSON pointer.

#include <string>

#include "abmc/chains.hpp"
#include "abmc/model_structure.hpp"
#include "json.hpp"

namespace abmc::io {

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

inline constexpr int kFormat = 1;

class SpecError : public AbmcError {
 public:
  SpecError(std::string pointer, const std::string& message)
      : AbmcError((pointer.empty() ? "/" : pointer) + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

std::string child(const std::string& pointer, const std::string& key);
std::string child(const std::string& pointer, std::size_t index);
/// Throws SpecError at the first key of j outside `allowed`.
void require_keys(const json& j, const std::string& pointer, std::initializer_list<const char*> allowed);
const json& require_field(const json& j, const std::string& pointer, const char* key);

Int read_int(const json& j, const std::string& pointer);
long read_long(const json& j, const std::string& pointer);
Mat read_matrix(const json& j, const std::string& pointer, std::size_t rows, std::size_t cols);

/// "Z", "F3", "Z[C2]", "F2[C3]", "T2(F2)" or {"base", "group_table"} or
/// {"base", "structure_constants", "unit"}.
AlgebraPtr read_algebra(const json& j, const std::string& pointer);
/// Shorthand strings ("0", "A^2", "Z/4 + Z", "triv", "sign/3", "k") or
/// objects {"free"}, {"trivial"}, {"sign"}, {"sum"}, {"orders", "actions"},
/// {"gens", "relations", "actions"}, each with an optional "label".
Module read_module(const AlgebraPtr& A, const json& j, const std::string& pointer);
/// {"src", "dst", "matrix"}; the matrix is dst.gens x src.gens.
Morphism read_morphism(const AlgebraPtr& A, const json& j, const std::string& pointer);
/// {"lo", "entries", "diffs"} with diffs[k] = d_{lo+k+1}, or {"disk", "module"}
/// or {"sphere", "module"}.
ChainComplex read_complex(const AlgebraPtr& A, const json& j, const std::string& pointer);

ordered to_json(const Int& a);
ordered to_json(const Vec& v);
ordered to_json(const Mat& m);
ordered to_json(const Module& M);
ordered to_json(const Morphism& f);
ordered to_json(const ChainComplex& X);
ordered to_json(const ChainMap& f);
ordered to_json(const Verdict& v);
ordered to_json(const SES& s);
ordered to_json(const OrthogonalityReport& r);
ordered to_json(const ThickReport& r);
ordered to_json(const HereditaryReport& r);
ordered to_json(const Factorization& f);
ordered to_json(const MapClass& c);
ordered to_json(const MonoidalReport& r);
ordered to_json(const InducedPairReport& r);
ordered to_json(const PurityReport& r);

/// Keys padded per object, nested objects indented, short arrays inline.
std::string render_text(const ordered& report);

}  // namespace abmc::io
