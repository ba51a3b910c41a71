#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "felab/quadrature.hpp"
#include "felab/set_model.hpp"

namespace felab {

using json = nlohmann::json;

// Decimal with 17 significant digits.
std::string fmt17(double x);

json affine_to_json(const AffineMap& T);
AffineMap affine_from_json(const json& j, int d);

json set_to_json(const SetModel& E);
SetModel set_from_json(const json& j);
SetModel read_set_file(const std::string& path);
void write_set_file(const std::string& path, const SetModel& E);

json config_to_json(const QuadratureConfig& cfg);

void write_csv_row(std::ostream& os, const std::vector<double>& row);

}  // namespace felab
