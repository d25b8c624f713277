#pragma once

#include <iosfwd>
#include <string>

#include "grushin/config.hpp"

namespace grushin {

/// Runs the experiment described by a parsed config: writes a JSON summary,
/// CSV tables, and field files into the configured output directory.
/// Returns 0 on success and 1 when a quality gate inside the experiment
/// fails; module errors propagate as exceptions.
int run_experiment(const ConfigFile& cfg, std::ostream& log);

int run_experiment_file(const std::string& path, std::ostream& log);

/// Desk-scale self checks behind `grushin-lab verify <suite>`; suites are
/// identities, kelvin, operator, solver, and all. Prints one line per check
/// and returns the number of failures.
int verify_suite(const std::string& suite, std::ostream& log);

}  // namespace grushin
