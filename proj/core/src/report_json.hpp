#pragma once

#include "json.hpp"
#include "uniharm/report.hpp"

namespace uniharm::detail {

nlohmann::json complex_json(cplx c);
nlohmann::json json_value(const SupEstimate& s);
nlohmann::json json_value(const CriterionReport& r);
nlohmann::json json_value(const OracleGrid& g);
nlohmann::json json_value(const OracleVerdict& v);
nlohmann::json json_value(const JacobianScan& j);
nlohmann::json json_value(const UnivalenceReport& r);
nlohmann::json json_value(const ConnectivityEstimate& c);
nlohmann::json json_value(const std::vector<SweepEntry>& sweep);

}  // namespace uniharm::detail
