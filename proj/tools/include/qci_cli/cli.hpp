// Copyright 2026 The qci Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qci/program.hpp"
#include "qci/solver.hpp"
#include "qci_cli/json_io.hpp"

namespace qci::cli {

// Exit codes. 0/2/3 mirror the solver verdicts yes/no/unknown.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNo = 2;
inline constexpr int kExitUnknown = 3;
inline constexpr int kExitUsage = 64;  // bad flags, malformed JSON
inline constexpr int kExitData = 65;   // dimension and other data errors
inline constexpr int kExitIo = 66;     // unreadable input / unwritable output

/** Rejected flag or program-file value. */
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/** Solver-related overrides from the command line. Unset means "use the
 * program file, then the library default". */
struct ConfigFlags {
  std::optional<std::string> cone;
  std::optional<std::string> tp_mode;
  std::optional<double> w;
  std::optional<double> trace_cap;
  std::optional<double> feas_tol;
  std::optional<std::size_t> max_iter;
  std::optional<std::size_t> lmo_restarts;
  std::optional<std::uint64_t> seed;  // already resolved against QCI_SEED
};

struct SolveConfig {
  ProgramSpec spec;
  SolveParams params;
};

/**
 * Merges flags over the program file and fills every default explicitly
 * (w, trace_cap, feas_tol, lmo_restarts), so the result is self-describing.
 * Throws ConfigError for w <= 0, trace_cap <= d, feas_tol <= 0, a missing
 * cone, or a hull cone without generators.
 */
SolveConfig validate_config(const ConfigFlags& flags, io::ProgramFile file,
                            std::vector<Matrix> generators = {});

/** QCI_SEED when set and numeric, else `flag`. */
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

/** Runs one command; argv excludes the program name. */
int run(const std::vector<std::string>& argv, std::ostream& out,
        std::ostream& err);

/** The single stdout line: "<verdict> delta=<9 significant digits>". */
std::string verdict_line(const std::string& verdict, double delta);

}  // namespace qci::cli
