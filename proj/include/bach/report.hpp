#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bach/pareto.hpp"

namespace bach {

// Every CSV starts with a "# bach <schema> v<N>" line followed by the header
// row. Numbers use "%.10g".
inline constexpr int kSchemaVersion = 1;

struct CaseRow {
  std::string label;
  ObjectiveValues objectives;
};

struct SensitivityRow {
  std::string param;
  double value = 0.0;
  bool ok = false;
  ObjectiveValues objectives;  // of the compromise point
  std::string error;
};

void write_case_summary_csv(const std::vector<CaseRow>& rows, const DeviceFleet& fleet,
                            std::ostream& out);
void write_front_csv(const ParetoFront& front, std::ostream& out);
void write_front_json(const ParetoFront& front, const DeviceFleet& fleet, std::ostream& out);
void write_battery_life_csv(const ParetoFront& front, const DeviceFleet& fleet, std::ostream& out);
void write_schedule_csv(const Schedule& schedule, const DeviceFleet& fleet, std::ostream& out);
void write_soc_csv(const std::vector<SocTrajectory>& soc, const DeviceFleet& fleet,
                   std::ostream& out);
void write_voltages_csv(const std::vector<PowerFlowSolution>& flows, const NetworkModel& network,
                        std::ostream& out);
void write_sensitivity_csv(const std::vector<SensitivityRow>& rows, std::ostream& out);

/// Schema line plus header row for each CSV kind, pinned by golden tests.
std::string csv_preamble(const std::string& schema);

}  // namespace bach
