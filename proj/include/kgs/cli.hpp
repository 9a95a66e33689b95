#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "kgs/model.hpp"

namespace kgs::cli {

/// Flat key=value configuration with dotted sections. Values from a config
/// file load first; command-line pairs override.
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> kv;
  bool has(const std::string& k) const { return kv.count(k) > 0; }
  std::string get(const std::string& k, const std::string& dflt) const;
  double get_double(const std::string& k, double dflt) const;
  int get_int(const std::string& k, int dflt) const;
};

/// argv form: <command> [key=value | --key value | --key=value]...
RunConfig parse_args(const std::vector<std::string>& args);

/// Exit codes: 0 success, 1 precondition/parse failure, 2 solver
/// non-convergence, 3 property-suite violation.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int main_entry(int argc, char** argv);

}  // namespace kgs::cli
