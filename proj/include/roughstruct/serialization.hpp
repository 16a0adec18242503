#pragma once

#include <string>

#include "json.hpp"
#include "roughstruct/rde_solver.hpp"
#include "roughstruct/rough_core.hpp"
#include "roughstruct/wavelets.hpp"

namespace roughstruct {

/// {"alpha", "path_csv", "second_order": [[k, n x n row-major]...]} with the
/// finest-level tensors. Processes whose coarse blocks were not filled by
/// Chen also carry "dyadic_blocks": [[level, i, tensor]...] for levels >= 1,
/// so the stored object is the one that was computed.
nlohmann::json rough_path_to_json(const RoughPath& rp, const std::string& path_csv);

/// Inverse of rough_path_to_json given the already loaded path. Throws
/// InvalidArgument on malformed JSON or size mismatches.
RoughPath rough_path_from_json(const nlohmann::json& j, const SampledPath& path);

/// Writes the path CSV and the JSON; "path_csv" is stored relative to the
/// JSON file's directory.
void write_rough_path(const RoughPath& rp, const std::string& json_file, const std::string& csv_file);
/// Reads the JSON and the CSV it references (relative to the JSON file).
RoughPath read_rough_path(const std::string& json_file);

/// {"l": int, "phi": [[k, value]...], "psi": [[j, k, value]...]}
nlohmann::json coefficients_to_json(const WaveletCoefficients& c);
WaveletCoefficients coefficients_from_json(const nlohmann::json& j);

/// {"windows": [{"t0", "t1", "iters", "ratio", "box_lo", "box_hi"}], "halvings",
///  "residual", "fixed_point_identity"}
nlohmann::json diagnostics_to_json(const SolveDiagnostics& d);

}  // namespace roughstruct
