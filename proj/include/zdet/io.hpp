#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "zdet/cylinder.hpp"
#include "zdet/gluing.hpp"
#include "zdet/mode_problem.hpp"
#include "zdet/spectral_model.hpp"

namespace zdet {

using Json = nlohmann::json;

/// {"kind":"arithmetic","a":0.5,"d":1.0,"mult":[1],"kernel":0}
/// {"kind":"explicit","lines":[[1.0,1],[2.0,1]],"kernel":0}
TangentialModel model_from_json(const Json& j);
TangentialModel load_model(const std::filesystem::path& path);

/// {"mu":"absB_plus","pert":{"c":1.0,"beta":1.0},"kernel_value":0.0} or {"mu":"zero"}
CapOperator cap_from_json(const Json& j, const TangentialModel& model);
CapOperator load_cap(const std::filesystem::path& path, const TangentialModel& model);

Json to_json(const RegScalar& x);
Json to_json(const ComplexRegScalar& x);
Json to_json(const RootSequence& seq);
RootSequence root_sequence_from_json(const Json& j);

/// Reads and parses a JSON file; ConfigError on I/O or syntax errors.
Json read_json_file(const std::filesystem::path& path);

/// Looks up a cached root sequence for (lambda, r) with at least `count` roots.
std::optional<RootSequence> load_cached_roots(const std::filesystem::path& dir, double lambda,
                                              double r, int count);
void store_cached_roots(const std::filesystem::path& dir, const RootSequence& seq);

}  // namespace zdet
