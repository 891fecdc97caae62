#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "msp/knapsack.hpp"
#include "msp/model.hpp"
#include "msp/problems.hpp"
#include "msp/reductions.hpp"

namespace msp {

using AnyInstance = std::variant<MspInstance, DindpInstance, DistpInstance, X3cInstance, KnapsackInstance>;

struct InstanceFile {
  AnyInstance instance;
  ReductionMeta meta;

  std::string kind() const;
};

/// Schema errors name the offending field, e.g. "arcs[3]: head 7 out of range".
InstanceFile parse_instance_text(const std::string& text);
InstanceFile parse_instance(const std::string& path);
std::string instance_to_text(const InstanceFile& file);
void write_instance(const std::string& path, const InstanceFile& file);

std::string solution_to_text(const Solution& sol, const ObjectivePoint& point);
/// Checks dimensions against the instance; the stored objective is returned
/// through `stored` when present.
Solution parse_solution_text(const std::string& text, const MspInstance& inst, ObjectivePoint* stored = nullptr);
Solution parse_solution(const std::string& path, const MspInstance& inst, ObjectivePoint* stored = nullptr);

struct FrontierRow {
  double lambda = 0.0;
  double budget = 0.0;
  ObjectivePoint point;
  std::string source;  // psi, sample, patch0, patch1, oracle
};

/// Sorted by T, then E, source and lambda.
void write_frontier_csv(std::ostream& out, std::vector<FrontierRow> rows);

std::string format_number(double x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace msp
