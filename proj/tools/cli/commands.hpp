#ifndef SPDSR_CLI_COMMANDS_HPP_
#define SPDSR_CLI_COMMANDS_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spdsr/interp.hpp"
#include "spdsr/srdist.hpp"

namespace spdsr::cli {

enum class OutputFormat { kJson, kCsv };

struct JobConfig {
  double k = 1.0;
  double tol_eq = kTolEq;
  double tol_tie = 1e-9;
  double tol_g = 1e-12;
  int max_iter = 200;
  int n_samples = 101;
  std::vector<Scheme> schemes{Scheme::kSR, Scheme::kE, Scheme::kLE, Scheme::kAI};
  OutputFormat format = OutputFormat::kJson;
  /// Directory for output files; stdout when empty.
  std::string output_dir;
  std::string input;
  std::vector<double> k_grid;

  /// Throws ParseError on a non-positive k or tolerance, fewer than two
  /// samples or an empty scheme set.
  void validate() const;
  SrConfig sr_config(double k_override = 0.0) const;
};

int cmd_distance(const JobConfig& cfg, std::ostream& out);
int cmd_interpolate(const JobConfig& cfg, std::ostream& out);
int cmd_versions(const JobConfig& cfg, std::ostream& out);
int cmd_ksweep(const JobConfig& cfg, std::ostream& out);

/// Worker count: SPDSR_THREADS if set to a positive integer, else the
/// hardware concurrency.
unsigned thread_count();

/// Full command line, argv[0] excluded.  Returns the process exit status:
/// 0 ok, 2 parse error, 3 domain error, 4 convergence failure, 1 otherwise.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spdsr::cli

#endif  // SPDSR_CLI_COMMANDS_HPP_
