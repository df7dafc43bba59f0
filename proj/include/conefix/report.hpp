#pragma once

#include <json.hpp>

#include <string>

#include "conefix/engine.hpp"

namespace conefix {

// Non-finite values serialise as null.
nlohmann::json number(double v);

nlohmann::json to_json(const IterationCertificate& c);
nlohmann::json to_json(const ConvergenceReport& r);
nlohmann::json to_json(const AuditResult& a);

// Columns n, residual, certified_bound.
void write_residuals_csv(const std::string& path, const ConvergenceReport& r);
void write_json(const std::string& path, const nlohmann::json& j);

} // namespace conefix
