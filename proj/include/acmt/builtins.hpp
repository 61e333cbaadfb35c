#pragma once

#include <map>
#include <string>
#include <vector>

#include "acmt/model.hpp"

namespace acmt {

/// Builtin chart models. Parameters come as strings (CLI form):
///   hyperbolic       n, c, k (comma list, |k| = c)
///   h-alt-1          n (>= 2)
///   h-alt-2          n (>= 2)
///   flat             n
///   alpha-sasakian   n, a
///   synthetic-random n, seed
std::vector<std::string> builtin_names();
bool is_builtin(const std::string& name);

std::pair<FrameModel, AcmStructure> make_builtin(
    const std::string& name, const std::map<std::string, std::string>& params);

/// Deterministic low-discrepancy evaluation points inside the model domain.
std::vector<ChartPoint> default_points(const std::string& name, int dim, int count);

/// Raw bracket table of a seeded synthetic structure (pointwise pipeline).
Tensor3 synthetic_random_brackets(int n, unsigned long seed);

} // namespace acmt
