#ifndef DISPT_IO_HPP
#define DISPT_IO_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "dispt/diagnostics.hpp"
#include "dispt/field.hpp"
#include "dispt/operators.hpp"
#include "dispt/solver.hpp"
#include "dispt/tensor.hpp"

namespace dispt {

using json = nlohmann::json;

json tensor_to_json(const CoeffTensor& w);
CoeffTensor tensor_from_json(const json& doc);

json condition_report_to_json(const ConditionReport& rep);

json field_to_json(const TorusField& f);
TorusField field_from_json(const json& doc);

json rate_report_to_json(const RateReport& rep);
json energy_report_to_json(const EnergyReport& rep);
json identity_table_to_json(const std::vector<IdentityResidual>& table);

// Deterministic serialization with every floating-point number rendered at 17
// significant digits.
std::string dump_json(const json& doc);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// CSV with a header row; each row rendered at 17 significant digits.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

// Static log-log scatter+line plot.
std::string svg_loglog_plot(const std::string& title, const std::vector<double>& x,
                            const std::vector<double>& y, double slope, double intercept);

}  // namespace dispt

#endif
