#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ncmatsaev/dilation_lab.hpp"
#include "ncmatsaev/poly_shift.hpp"

namespace ncm::io {

using json = nlohmann::ordered_json;

/// {"rows": n, "cols": m, "data": [[re, im], ...]} row-major. Plain numbers
/// are accepted as real entries when reading.
json to_json(const ComplexMatrix& m);
json to_json(const RealMatrix& m);
ComplexMatrix complex_matrix_from_json(const json& j);
/// Rejects entries with an imaginary part above 1e-14.
RealMatrix real_matrix_from_json(const json& j);

/// {"blocks": n, "block_dim": m, "data": [matrix, ...]}.
json to_json(const BlockVector& x);
BlockVector block_vector_from_json(const json& j);

json estimate_record(const PNormEstimate& e, const PExponent& p, int restarts, std::uint64_t seed);

json to_json(const NormProfile& profile);
std::string profile_csv(const NormProfile& profile); // columns n, value, converged

/// {"kind": "cyclic", "n": N}, {"kind": "dihedral", "n": N} or {"kind": "table", "table": [[...]]}.
FiniteGroup group_from_json(const json& j);
json to_json(const FiniteGroup& g);

/// {"alphas": [[...], ...]}, one inner array per point alpha_i.
SemigroupSpec semigroup_from_json(const json& j);
json to_json(const SemigroupSpec& s);

/// {"kind": "indicator", "left", "right"} | {"kind": "triangle", "center", "half_width"}
/// | {"kind": "exp", "rate", "end"} | {"kind": "samples", "values", "end"}; optional "scale".
KernelFunction kernel_from_json(const json& j);
json to_json(const KernelFunction& k);

json to_json(const PairPartition& v);
json to_json(const BundleChecks& c);
json bundle_report(const DilationBundle& b, const DilationReport& r);
json to_json(const SchoenbergResult& r);
json to_json(const GapSearchResult& r);

double p_from_json(const json& j); // number or "inf"
json p_to_json(double p);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace ncm::io
