// csympl: verification suites, case replay, K3 lattice computations and the torus testbed.
//
// Exit status: 0 when every check passes, 1 when a check fails (the first failing case is
// written for replay), 2 for usage errors, unknown suites and malformed input.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csympl/csymplectic.hpp"
#include "csympl/errors.hpp"
#include "csympl/flat_testbed.hpp"
#include "csympl/io.hpp"
#include "csympl/lattice_k3.hpp"
#include "csympl/suites.hpp"

namespace
{

using csympl::io::Json;
using csympl::cplx;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::vector<std::string> split(const std::string &s, char sep)
{
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep))
    parts.push_back(item);
  return parts;
}

std::vector<double> parse_doubles(const std::string &s)
{
  std::vector<double> v;
  for (const auto &p : split(s, ','))
    v.push_back(std::stod(p));
  return v;
}

cplx parse_complex(const std::string &s)
{
  const auto v = parse_doubles(s);
  if (v.size() == 1)
    return {v[0], 0.0};
  if (v.size() != 2)
    throw csympl::InvalidInput("complex value must be RE or RE,IM");
  return {v[0], v[1]};
}

csympl::lattice::IntVector parse_int_vector(const std::string &s)
{
  csympl::lattice::IntVector v;
  for (const auto &p : split(s, ','))
    v.emplace_back(p);
  return v;
}

void emit(const Json &j, const std::string &out)
{
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f)
    throw csympl::InvalidInput("cannot open output file " + out);
  f << j.dump(2) << '\n';
}

std::uint64_t default_seed()
{
  if (const char *env = std::getenv("CSYMPL_SEED"))
    return std::stoull(env);
  return 7;
}

std::string suite_usage()
{
  std::string s = "known suites:";
  for (const auto &n : csympl::suites::suite_names())
    s += " " + n;
  return s;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Numerical verification of c-symplectic linear algebra, degenerate twistor "
               "deformations and K3 lattice section classes"};
  app.require_subcommand(1);

  // suite
  auto *suite_cmd = app.add_subcommand("suite", "Run a verification suite");
  std::string suite_name, dims_arg, out_path, format = "json", t_arg = "-1,0", control = "closed",
                                             case_out;
  int samples = -1, grid = 64, modes = 3;
  std::uint64_t seed = 0;
  double tol = 0.0;
  suite_cmd->add_option("--suite", suite_name, "Suite name")->required();
  suite_cmd->add_option("--dims", dims_arg, "Comma separated real dimensions");
  suite_cmd->add_option("--n", samples, "Samples per dimension");
  auto *seed_opt = suite_cmd->add_option("--seed", seed, "Seed (default: $CSYMPL_SEED, else 7)");
  auto *tol_opt = suite_cmd->add_option("--tol", tol, "Tolerance override for every check");
  suite_cmd->add_option("--out", out_path, "Report path (default: stdout)");
  suite_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  suite_cmd->add_option("--grid", grid, "Testbed grid resolution");
  suite_cmd->add_option("--modes", modes, "Testbed Fourier mode cutoff");
  suite_cmd->add_option("--t", t_arg, "Testbed deformation parameter RE,IM");
  suite_cmd->add_option("--control", control, "Testbed field: closed or nonclosed");
  suite_cmd->add_option("--case-out", case_out,
                        "Where to write the first failing case (default: <out>.case.json or "
                        "csympl_failure_case.json)");

  // replay
  auto *replay_cmd = app.add_subcommand("replay", "Re-run one case from a case file, verbosely");
  std::string case_file, replay_out;
  replay_cmd->add_option("file", case_file, "Case file")->required();
  replay_cmd->add_option("--out", replay_out, "Report path (default: stdout)");

  // lattice
  auto *lattice_cmd = app.add_subcommand("lattice", "K3 lattice computations");
  lattice_cmd->require_subcommand(1);
  std::string e_arg, s_arg, omega_re, omega_im, lattice_file;
  auto *find_cmd = lattice_cmd->add_subcommand("find-section", "Section class s for a fiber class e");
  find_cmd->add_option("--e", e_arg, "Primitive isotropic vector, comma separated")->required();
  find_cmd->add_option("--lattice", lattice_file, "Lattice JSON (default: the K3 lattice)");
  auto *param_cmd = lattice_cmd->add_subcommand("twistor-param", "Deformation parameter t");
  param_cmd->add_option("--s", s_arg, "Class s")->required();
  param_cmd->add_option("--e", e_arg, "Fiber class e")->required();
  param_cmd->add_option("--omega-re", omega_re, "Re [Omega]")->required();
  param_cmd->add_option("--omega-im", omega_im, "Im [Omega]")->required();
  auto *curve_cmd = lattice_cmd->add_subcommand("curve", "Twistor-curve planes over a grid");
  int curve_grid = 10;
  std::uint64_t curve_seed = 0;
  curve_cmd->add_option("--grid", curve_grid, "Points per axis in [-2, 2]");
  auto *curve_seed_opt = curve_cmd->add_option("--seed", curve_seed, "Seed");

  // testbed
  auto *testbed_cmd = app.add_subcommand("testbed", "Torus fibration certificate");
  int tb_grid = 64, tb_modes = 3;
  std::string tb_t = "-1,0", tb_control = "closed", tb_csv;
  std::uint64_t tb_seed = 0;
  testbed_cmd->add_option("--grid", tb_grid, "Grid resolution");
  testbed_cmd->add_option("--modes", tb_modes, "Fourier mode cutoff");
  testbed_cmd->add_option("--t", tb_t, "Deformation parameter RE,IM");
  auto *tb_seed_opt = testbed_cmd->add_option("--seed", tb_seed, "Seed");
  testbed_cmd->add_option("--control", tb_control, "closed or nonclosed")
    ->check(CLI::IsMember({"closed", "nonclosed"}));
  testbed_cmd->add_option("--csv", tb_csv, "Per-node residual CSV path");

  // inspect
  auto *inspect_cmd = app.add_subcommand("inspect", "Criteria and induced structure of a 2-form");
  std::string form_file;
  inspect_cmd->add_option("file", form_file, "2-form JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*suite_cmd) {
      if (!csympl::suites::is_known_suite(suite_name)) {
        std::cerr << "unknown suite: " << suite_name << '\n' << suite_usage() << '\n'
                  << suite_cmd->help();
        return kExitUsage;
      }
      csympl::suites::SuiteConfig config;
      config.suite = suite_name;
      if (!dims_arg.empty())
        for (const auto &p : split(dims_arg, ','))
          config.dims.push_back(std::stoi(p));
      config.samples = samples;
      config.seed = *seed_opt ? seed : default_seed();
      if (*tol_opt)
        config.tol = tol;
      config.grid = grid;
      config.modes = modes;
      config.t = parse_complex(t_arg);
      config.control = control;

      const auto report = csympl::suites::run_suite(config);
      if (format == "csv") {
        if (out_path.empty() || out_path == "-") {
          csympl::suites::write_csv(std::cout, report);
        } else {
          std::ofstream f(out_path);
          csympl::suites::write_csv(f, report);
        }
      } else {
        emit(csympl::suites::to_json(report), out_path);
      }
      for (const auto &c : report.checks)
        std::cerr << (c.pass ? "PASS " : "FAIL ") << c.check << " dim " << c.dim << " samples "
                  << c.samples << " max_residual " << c.max_residual << " tol " << c.tolerance
                  << '\n';
      if (!report.pass) {
        const std::string path = !case_out.empty() ? case_out
                                 : (!out_path.empty() && out_path != "-") ? out_path + ".case.json"
                                                                          : "csympl_failure_case.json";
        emit(csympl::suites::to_json(*report.first_failure), path);
        std::cerr << "first failing case written to " << path << '\n';
        return kExitFail;
      }
      return kExitPass;
    }

    if (*replay_cmd) {
      std::ifstream f(case_file);
      if (!f) {
        std::cerr << "cannot read case file " << case_file << '\n';
        return kExitUsage;
      }
      Json j;
      try {
        j = Json::parse(f);
      } catch (const nlohmann::json::exception &err) {
        std::cerr << "malformed case file: " << err.what() << '\n';
        return kExitUsage;
      }
      const auto c = csympl::suites::failure_case_from_json(j);
      const auto report = csympl::suites::replay(c, std::cout);
      emit(csympl::suites::to_json(report), replay_out);
      return report.pass ? kExitPass : kExitFail;
    }

    if (*lattice_cmd) {
      using namespace csympl::lattice;
      if (*find_cmd) {
        IntegralLattice L = standard_k3_lattice();
        if (!lattice_file.empty()) {
          std::ifstream f(lattice_file);
          if (!f)
            throw csympl::InvalidInput("cannot read lattice file " + lattice_file);
          L = csympl::io::lattice_from_json(Json::parse(f));
        }
        const IntVector e = parse_int_vector(e_arg);
        const IntVector b = dual_vector(L, e);
        const IntVector s = square_minus_two(L, e, b);
        emit({{"e", csympl::io::to_json(e)},
              {"b", csympl::io::to_json(b)},
              {"s", csympl::io::to_json(s)},
              {"s_dot_e", L.pairing(s, e).convert_to<long long>()},
              {"s_dot_s", L.norm(s).convert_to<long long>()}},
             "");
        return kExitPass;
      }
      if (*param_cmd) {
        const IntegralLattice L = standard_k3_lattice();
        const IntVector s = parse_int_vector(s_arg), e = parse_int_vector(e_arg);
        const auto re = parse_doubles(omega_re), im = parse_doubles(omega_im);
        if (static_cast<int>(re.size()) != L.rank() || static_cast<int>(im.size()) != L.rank())
          throw csympl::InvalidInput("omega must have 22 real and 22 imaginary entries");
        Eigen::VectorXcd omega(L.rank());
        for (int i = 0; i < L.rank(); ++i)
          omega(i) = cplx(re[static_cast<std::size_t>(i)], im[static_cast<std::size_t>(i)]);
        const cplx t = twistor_parameter(L, s, e, omega);
        emit({{"t", {t.real(), t.imag()}},
              {"substitution_residual", twistor_substitution_residual(L, s, e, omega, t)}},
             "");
        return kExitPass;
      }
      if (*curve_cmd) {
        if (curve_grid < 2)
          throw csympl::InvalidInput("--grid must be at least 2");
        csympl::Rng rng(*curve_seed_opt ? curve_seed : default_seed());
        const IntMatrix g = random_k3_isometry(rng);
        const IntVector &e = g[0];
        const PeriodPoint p = random_period_point(rng, g);
        const TwistorPlane base = twistor_curve_plane(p, e, 0.0, 0.0);
        double deviation = 0.0, min_eig = std::numeric_limits<double>::infinity();
        for (int a = 0; a < curve_grid; ++a)
          for (int b = 0; b < curve_grid; ++b) {
            const double x = -2.0 + 4.0 * a / (curve_grid - 1), y = -2.0 + 4.0 * b / (curve_grid - 1);
            const TwistorPlane plane = twistor_curve_plane(p, e, x, y);
            deviation = std::max(deviation, (plane.gram - base.gram).cwiseAbs().maxCoeff() /
                                              base.gram.cwiseAbs().maxCoeff());
            min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(plane.gram)
                                          .eigenvalues()
                                          .minCoeff());
          }
        emit({{"e", csympl::io::to_json(e)},
              {"base_gram", csympl::io::matrix_to_json(base.gram)},
              {"max_relative_gram_deviation", deviation},
              {"min_eigenvalue", min_eig},
              {"positive", min_eig > 0.0}},
             "");
        return kExitPass;
      }
    }

    if (*testbed_cmd) {
      using namespace csympl::testbed;
      const cplx t = parse_complex(tb_t);
      csympl::suites::SuiteConfig config;
      config.suite = "testbed-nijenhuis";
      config.seed = *tb_seed_opt ? tb_seed : default_seed();
      config.grid = tb_grid;
      config.modes = tb_modes;
      config.t = t;
      config.control = tb_control;
      config.samples = 1;
      const auto report = csympl::suites::run_suite(config);
      Json j = csympl::suites::to_json(report);
      if (!tb_csv.empty()) {
        std::ofstream f(tb_csv);
        if (!f)
          throw csympl::InvalidInput("cannot open " + tb_csv);
        if (tb_control == "closed") {
          csympl::Rng rng(csympl::suites::case_seed(config.seed, config.suite, 4, 0));
          const auto sigma = SmoothSection::random(rng, tb_modes);
          const auto cert = verify_section_holomorphic(sigma, tb_grid, t);
          const auto eta = sample_section_form(sigma, tb_grid).eta;
          const auto nij = nijenhuis_norm(deformed_structure_field(eta, t).structure);
          write_node_csv(f, eta.grid(), {"section_residual", "nijenhuis"},
                         {&cert.per_node, &nij.per_node});
        } else {
          const auto field = nonclosed_form_field(t, 1.0, tb_grid);
          const auto nij = nijenhuis_norm(structure_field(field).structure);
          write_node_csv(f, field.grid(), {"nijenhuis"}, {&nij.per_node});
        }
        j["csv"] = tb_csv;
      }
      emit(j, "");
      return report.pass ? kExitPass : kExitFail;
    }

    if (*inspect_cmd) {
      std::ifstream f(form_file);
      if (!f)
        throw csympl::InvalidInput("cannot read " + form_file);
      const auto omega = csympl::io::two_form_from_json(Json::parse(f));
      const auto rank = csympl::is_c_symplectic_rank(omega);
      const auto power = csympl::is_c_symplectic_power(omega);
      Json j = {{"dim", omega.dim()},
                {"rank_criterion", {{"holds", rank.holds}, {"kernel_dim", rank.kernel_dim},
                                    {"real_span_dim", rank.real_span_dim},
                                    {"conditioning_warning", rank.conditioning_warning},
                                    {"reason", rank.reason}}},
                {"power_criterion", {{"holds", power.holds}, {"top_power_norm", power.top_power_norm},
                                     {"mixed_power_norm", power.mixed_power_norm},
                                     {"reason", power.reason}}}};
      if (rank.holds && power.holds)
        j["induced_structure"] = csympl::io::to_json(csympl::induced_complex_structure(omega));
      emit(j, "");
      return kExitPass;
    }
  } catch (const csympl::InvalidInput &err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception &err) {
    std::cerr << "error: malformed JSON: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument &err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
