#ifndef CSYMPL_SUITES_HPP
#define CSYMPL_SUITES_HPP

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace csympl::suites
{

using Json = nlohmann::json;

struct SuiteConfig
{
  std::string suite;
  std::vector<int> dims;  // empty: suite default
  int samples = -1;  // per dimension; negative: suite default
  std::uint64_t seed = 7;
  std::optional<double> tol;  // replaces every check's default tolerance
  int grid = 64;
  int modes = 3;
  std::complex<double> t = -1.0;
  std::string control = "closed";  // closed | nonclosed
};

Json to_json(const SuiteConfig &config);
SuiteConfig config_from_json(const Json &j);

// One aggregated check: max residual over its samples against a tolerance.
struct CheckResult
{
  std::string check;
  int dim = 0;
  int samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::uint64_t seed = 0;
  Json details = Json::object();
};

// Enough to re-run one case.
struct FailureCase
{
  std::string suite;
  std::string check;
  int dim = 0;
  int index = 0;
  std::uint64_t case_seed = 0;
  SuiteConfig config;
};

Json to_json(const FailureCase &c);
FailureCase failure_case_from_json(const Json &j);

struct SuiteReport
{
  std::string suite;
  SuiteConfig config;
  std::vector<CheckResult> checks;
  bool pass = true;
  std::optional<FailureCase> first_failure;
  double wall_time = 0.0;  // seconds; the only field that varies between identical runs
};

// Check JSON is {"check", "dim", "samples", "max_residual", "pass", "seed"} plus "tolerance"
// and "details"; the report wraps the checks with the suite name, config and wall time.
Json to_json(const SuiteReport &report);
// One CSV row per check.
void write_csv(std::ostream &out, const SuiteReport &report);

const std::vector<std::string> &suite_names();
bool is_known_suite(const std::string &name);

// Throws InvalidInput for unknown suites or invalid configuration.
SuiteReport run_suite(const SuiteConfig &config);

// Re-runs one case and writes its intermediate data to log. The report holds that single
// case.
SuiteReport replay(const FailureCase &c, std::ostream &log);

// Per-case seed: a function of the run seed, suite, dimension and case index only.
std::uint64_t case_seed(std::uint64_t seed, const std::string &suite, int dim, int index);

}  // namespace csympl::suites

#endif
