#pragma once

#include <string>

#include "prhpg/model.hpp"

namespace prhpg {

// JSON interchange format for models and gain files. Matrices are encoded
// as {"rows": r, "cols": c, "data": [row-major floats]}; the model document
// carries {n, m, d, lo, hi, basis, vertices}. Parse failures throw
// std::invalid_argument naming the offending key.

std::string model_to_json(const PolytopicModel& model);
PolytopicModel model_from_json(const std::string& text);

void save_model(const std::string& path, const PolytopicModel& model);
PolytopicModel load_model(const std::string& path);

std::string gains_to_json(const StageGains& gains);
StageGains gains_from_json(const std::string& text);

void save_gains(const std::string& path, const StageGains& gains);
StageGains load_gains(const std::string& path);

}  // namespace prhpg
