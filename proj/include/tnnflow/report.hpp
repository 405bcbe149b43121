#pragma once

#include <json.hpp>

#include "tnnflow/cells.hpp"
#include "tnnflow/embedding.hpp"
#include "tnnflow/flow.hpp"
#include "tnnflow/folding.hpp"

namespace tnnflow::report {

using nlohmann::json;

// Floats are written as 17-significant-digit decimal strings, rationals as "p/q".
json decimal(double x);
json decimals(const Eigen::VectorXd& v);
json decimals(const Eigen::MatrixXd& m);
json fractions(const RatVector& v);
json fractions(const RatMatrix& m);
RatMatrix parse_fractions(const json& rows);
Eigen::VectorXd parse_decimals(const json& values);

json to_json(const Pinning& p);
json to_json(const FactorizationParams& f);
json to_json(const FlagPoint& f);
json to_json(const RepModule& rep);
json to_json(const Chart& chart);
json to_json(const FlowSpec& spec);
json to_json(const AxiomReport& r);
json to_json(const InvarianceReport& r);
json to_json(const FoldingReport& r);
json to_json(const Convergence& c);

}  // namespace tnnflow::report
