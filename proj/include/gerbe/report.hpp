#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gerbe/crossed_module.hpp"
#include "gerbe/gerbe.hpp"
#include "gerbe/glue.hpp"
#include "gerbe/variation.hpp"

namespace gerbe {

using Json = nlohmann::ordered_json;

// Serializes with every floating-point number printed as %.17g, keys in
// insertion order and two-space indentation.  Non-finite numbers become null.
std::string dump_json(const Json& j);

// {"rows": r, "cols": c, "re": [[...]], "im": [[...]]}
Json matrix_json(const Mat& m);
Json config_json(const TransportConfig& cfg);
Json config_json(const FDConfig& fd);
Json grid_json(const GridAssignment& g);

Json report_json(const AxiomReport& r);
Json report_json(const ValidationReport& r);
Json report_json(const GlobalHolonomy& h);
Json report_json(const DerivativeBreakdown& d);
Json report_json(const DerivativeCheck& d);

// Header "step,fd_norm,formula_norm,abs_err,rel_err,est_order", one row per FD step.
std::string convergence_csv(const std::vector<ConvergenceRow>& table);

}  // namespace gerbe
