#pragma once

#include <json.hpp>

#include "corrbc/covariance.hpp"
#include "corrbc/grouping.hpp"

namespace corrbc {

// {"m": M, "lags": [[re, im], ...]}
nlohmann::json correlation_to_json(const CorrelationMatrix& r);
CorrelationMatrix correlation_from_json(const nlohmann::json& doc);

// Bases are not stored; they are regenerated from the generator descriptor.
nlohmann::json grouped_system_to_json(const GroupedSystem& gs);
GroupedSystem grouped_system_from_json(const nlohmann::json& doc);

}  // namespace corrbc
