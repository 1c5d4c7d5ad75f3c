#include "csympl/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>

#include "csympl/deformation.hpp"
#include "csympl/errors.hpp"
#include "csympl/flat_testbed.hpp"
#include "csympl/generators.hpp"
#include "csympl/io.hpp"
#include "csympl/lattice_k3.hpp"

namespace csympl::suites
{

namespace
{

const Eigen::IOFormat kMatrixFormat(Eigen::FullPrecision, 0, ", ", "\n", "  [", "]");

std::uint64_t fnv1a(const std::string &s)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Shared state of one suite run: aggregation by (check, dim) in first-seen order, the first
// failing case, and for replay a single case filter plus a log.
class Context
{
public:
  Context(const SuiteConfig &config, std::ostream *log, std::optional<std::pair<int, int>> only)
    : config_(config), log_(log), only_(only)
  {
  }

  const SuiteConfig &config() const { return config_; }
  bool verbose() const { return log_ != nullptr; }
  std::ostream &log() { return *log_; }

  bool selected(int dim, int index) const
  {
    return !only_ || (only_->first == dim && only_->second == index);
  }

  double tol(double fallback) const { return config_.tol.value_or(fallback); }

  std::uint64_t seed_for(int dim, int index) const
  {
    return case_seed(config_.seed, config_.suite, dim, index);
  }

  // Records one sample; a sample fails when residual > tolerance or is NaN.
  void record(const std::string &check, int dim, int index, double residual, double tolerance)
  {
    record_with(check, dim, index, residual, tolerance, !(residual <= tolerance));
  }

  void record_with(const std::string &check, int dim, int index, double residual,
                   double tolerance, bool failed)
  {
    CheckResult &r = slot(check, dim);
    r.samples += 1;
    r.tolerance = tolerance;
    if (r.samples == 1 || std::isnan(residual) ||
        (!std::isnan(r.max_residual) && residual > r.max_residual))
      r.max_residual = residual;
    if (failed) {
      r.pass = false;
      if (!first_failure_)
        first_failure_ = FailureCase{config_.suite, check, dim, index, seed_for(dim, index), config_};
    }
    if (verbose())
      log() << "check " << check << " dim " << dim << " case " << index << ": residual "
            << residual << " tolerance " << tolerance << (failed ? " FAIL" : " ok") << '\n';
  }

  Json &details(const std::string &check, int dim) { return slot(check, dim).details; }

  SuiteReport finish(double wall)
  {
    SuiteReport report;
    report.suite = config_.suite;
    report.config = config_;
    for (auto &r : results_) {
      r.seed = config_.seed;
      report.pass = report.pass && r.pass;
      report.checks.push_back(std::move(r));
    }
    report.first_failure = first_failure_;
    report.wall_time = wall;
    return report;
  }

private:
  CheckResult &slot(const std::string &check, int dim)
  {
    const auto key = std::make_pair(check, dim);
    auto it = index_.find(key);
    if (it == index_.end()) {
      CheckResult r;
      r.check = check;
      r.dim = dim;
      results_.push_back(std::move(r));
      it = index_.emplace(key, results_.size() - 1).first;
    }
    return results_[it->second];
  }

  SuiteConfig config_;
  std::ostream *log_;
  std::optional<std::pair<int, int>> only_;
  std::vector<CheckResult> results_;
  std::map<std::pair<std::string, int>, std::size_t> index_;
  std::optional<FailureCase> first_failure_;
};

std::vector<int> dims_or(const Context &ctx, std::vector<int> fallback)
{
  const auto &d = ctx.config().dims;
  std::vector<int> dims = d.empty() ? std::move(fallback) : d;
  for (int m : dims)
    if (m < 4 || m % 4 != 0 || m > 16)
      throw InvalidInput("dimensions must be positive multiples of 4 up to 16");
  return dims;
}

int samples_or(const Context &ctx, int fallback)
{
  return ctx.config().samples >= 0 ? ctx.config().samples : fallback;
}

double bool_residual(bool ok) { return ok ? 0.0 : 1.0; }

double max_abs(const Eigen::MatrixXd &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const Eigen::MatrixXcd &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

void log_matrix(Context &ctx, const char *name, const Eigen::MatrixXcd &m)
{
  if (ctx.verbose())
    ctx.log() << name << " =\n" << m.format(kMatrixFormat) << '\n';
}

void log_matrix(Context &ctx, const char *name, const Eigen::MatrixXd &m)
{
  if (ctx.verbose())
    ctx.log() << name << " =\n" << m.format(kMatrixFormat) << '\n';
}

// Kinds of random 2-forms in the criteria mixture. Only the first is c-symplectic.
enum class FormKind
{
  CSymplectic,
  ComplexGaussian,
  RealSymplectic,
  RealHalfRank,
  LowRankComplex,
  PerturbedCSymplectic,
};

const char *kind_name(FormKind k)
{
  switch (k) {
  case FormKind::CSymplectic:
    return "c-symplectic";
  case FormKind::ComplexGaussian:
    return "complex-gaussian";
  case FormKind::RealSymplectic:
    return "real-symplectic";
  case FormKind::RealHalfRank:
    return "real-half-rank";
  case FormKind::LowRankComplex:
    return "low-rank-complex";
  case FormKind::PerturbedCSymplectic:
    return "perturbed-c-symplectic";
  }
  return "";
}

FormKind kind_for(int index)
{
  static const FormKind cycle[8] = {FormKind::CSymplectic,     FormKind::ComplexGaussian,
                                    FormKind::CSymplectic,     FormKind::RealSymplectic,
                                    FormKind::RealHalfRank,    FormKind::CSymplectic,
                                    FormKind::LowRankComplex,  FormKind::PerturbedCSymplectic};
  return cycle[index % 8];
}

ComplexTwoForm mixture_form(Rng &rng, FormKind kind, int m)
{
  switch (kind) {
  case FormKind::CSymplectic:
    return gen::c_symplectic(rng, m / 4).omega;
  case FormKind::ComplexGaussian:
    return ComplexTwoForm(gen::complex_antisymmetric(rng, m));
  case FormKind::RealSymplectic:
    return gen::real_symplectic(rng, m);
  case FormKind::RealHalfRank:
    return gen::real_half_rank(rng, m);
  case FormKind::LowRankComplex:
    return gen::low_rank_complex(rng, m);
  case FormKind::PerturbedCSymplectic:
    return gen::perturbed_c_symplectic(rng, m / 4);
  }
  throw ConsistencyError("mixture_form: unknown kind");
}

void criteria_equivalence(Context &ctx)
{
  const double tol = ctx.tol(kDefaultTol);
  if (ctx.selected(4, 0)) {
    const ComplexTwoForm q(q_block());
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(4, 4);
    const cplx value = wedge(q.to_kform(), q.conj().to_kform()).evaluate(id);
    ctx.record("q-block-wedge", 4, 0, std::abs(value - cplx(4.0)), ctx.tol(1e-12));
    ctx.record("q-block-criteria", 4, 0,
               bool_residual(is_c_symplectic_rank(q, tol).holds && is_c_symplectic_power(q, tol).holds),
               0.0);
  }
  for (int m : dims_or(ctx, {4, 8, 12})) {
    const int n = samples_or(ctx, 500);
    std::map<std::string, int> counts;
    for (int i = 0; i < n; ++i) {
      if (!ctx.selected(m, i))
        continue;
      Rng rng(ctx.seed_for(m, i));
      const FormKind kind = kind_for(i);
      const ComplexTwoForm omega = mixture_form(rng, kind, m);
      const auto rank = is_c_symplectic_rank(omega, tol);
      const auto power = is_c_symplectic_power(omega, tol);
      log_matrix(ctx, "omega", omega.matrix());
      if (ctx.verbose())
        ctx.log() << "kind " << kind_name(kind) << "; rank criterion " << rank.holds << " (kernel dim "
                  << rank.kernel_dim << ", real span " << rank.real_span_dim << ")"
                  << "; power criterion " << power.holds << " (top " << power.top_power_norm
                  << ", mixed " << power.mixed_power_norm << ")\n";
      counts[kind_name(kind)] += 1;
      counts[rank.holds ? "verdict-true" : "verdict-false"] += 1;
      ctx.record("criteria-agree", m, i, bool_residual(rank.holds == power.holds), 0.0);
      ctx.record("criteria-construction", m, i,
                 bool_residual(rank.holds == (kind == FormKind::CSymplectic)), 0.0);
    }
    if (!ctx.verbose())
      ctx.details("criteria-agree", m) = counts;
  }
}

void induced_structure(Context &ctx)
{
  for (int m : dims_or(ctx, {4, 8, 12})) {
    const int n = samples_or(ctx, 200);
    for (int i = 0; i < n; ++i) {
      if (!ctx.selected(m, i))
        continue;
      Rng rng(ctx.seed_for(m, i));
      const auto inst = gen::form_of_type_20(rng, m / 4);
      const ComplexStructure I = induced_complex_structure(inst.omega);
      const cplx lambda = rng.complex_normal();
      const ComplexStructure scaled = induced_complex_structure(lambda * inst.omega);
      const Eigen::MatrixXcd a = inst.omega.matrix();
      const Eigen::MatrixXcd rel =
        I.matrix().transpose().cast<cplx>() * a - cplx(0.0, 1.0) * a;
      log_matrix(ctx, "omega", a);
      log_matrix(ctx, "J", inst.structure.matrix());
      log_matrix(ctx, "I", I.matrix());
      ctx.record("recover-structure", m, i, I.distance(inst.structure), ctx.tol(1e-8));
      ctx.record("scaling-invariance", m, i, scaled.distance(I), ctx.tol(1e-9));
      ctx.record("type-relation", m, i, max_abs(rel) / inst.omega.max_norm(), ctx.tol(1e-9));
    }
  }
}

void gram_schmidt(Context &ctx)
{
  for (int m : dims_or(ctx, {4, 8, 12})) {
    const int n = samples_or(ctx, 200);
    for (int i = 0; i < n; ++i) {
      if (!ctx.selected(m, i))
        continue;
      Rng rng(ctx.seed_for(m, i));
      const auto inst = gen::c_symplectic(rng, m / 4);
      const Eigen::MatrixXd b = c_symplectic_basis(inst.omega);
      log_matrix(ctx, "omega", inst.omega.matrix());
      log_matrix(ctx, "B", b);
      log_matrix(ctx, "B^T A B", Eigen::MatrixXcd(b.transpose() * inst.omega.matrix() * b));
      ctx.record("canonical-basis", m, i, c_symplectic_basis_residual(inst.omega, b), ctx.tol(1e-8));
    }
  }
}

void hitchin(Context &ctx)
{
  const double tol = kDefaultTol;
  for (int m : dims_or(ctx, {4, 8, 12})) {
    const int n = samples_or(ctx, 100);
    for (int i = 0; i < n; ++i) {
      if (!ctx.selected(m, i))
        continue;
      Rng rng(ctx.seed_for(m, i));
      const auto inst = gen::c_symplectic(rng, m / 4);
      const Subspace L = gen::random_maximal_isotropic(rng, inst.omega, tol);
      const Eigen::MatrixXd I = induced_complex_structure(inst.omega).matrix();
      const Eigen::MatrixXd lb = L.real_orthonormal_basis();
      log_matrix(ctx, "omega", inst.omega.matrix());
      log_matrix(ctx, "L", lb);
      log_matrix(ctx, "I", I);
      const bool lagrangian = is_c_lagrangian(L, inst.omega, tol);
      ctx.record("maximal-isotropic-is-lagrangian", m, i, bool_residual(lagrangian), 0.0);
      ctx.record("lagrangian-invariance", m, i,
                 lagrangian ? L.residual_outside((I * lb).cast<cplx>())
                            : std::numeric_limits<double>::infinity(),
                 ctx.tol(1e-9));
      // An isotropic subspace is maximal exactly when it equals its Omega-orthogonal.
      const int k = 1 + static_cast<int>(rng.uniform_int(0, L.dim() - 1));
      const Subspace sub = Subspace::real(lb.leftCols(k));
      const bool maximal = omega_orthogonal(sub, inst.omega, tol).same_span(sub, 1e-6);
      ctx.record("maximality-criterion", m, i,
                 bool_residual(maximal == is_c_lagrangian(sub, inst.omega, tol)), 0.0);
    }
  }
}

struct FamilyCase
{
  LagrangianProjection projection;
  ComplexTwoForm gamma;
};

FamilyCase random_family(Rng &rng, int m)
{
  const auto inst = gen::c_symplectic(rng, m / 4);
  CSymplecticSpace space(inst.omega);
  Subspace L = gen::random_maximal_isotropic(rng, inst.omega);
  LagrangianProjection p(std::move(space), std::move(L));
  ComplexTwoForm gamma = gen::form_without_02(rng, p.base_structure());
  return {std::move(p), std::move(gamma)};
}

void preservance(Context &ctx)
{
  for (int m : dims_or(ctx, {4, 8})) {
    const int n = samples_or(ctx, 200);
    for (int i = 0; i < n; ++i) {
      if (!ctx.selected(m, i))
        continue;
      Rng rng(ctx.seed_for(m, i));
      auto fc = random_family(rng, m);
      const cplx t0 = rng.complex_normal();
      bool deformed = true;
      try {
        (void)deform(fc.projection, fc.gamma, t0);
      } catch (const ConsistencyError &err) {
        deformed = false;
        if (ctx.verbose())
          ctx.log() << err.what() << '\n';
      }
      const DeformationFamily family(fc.projection, fc.gamma);
      log_matrix(ctx, "omega", fc.projection.space().omega().matrix());
      log_matrix(ctx, "L", fc.projection.fiber_basis());
      log_matrix(ctx, "gamma", fc.gamma.matrix());
      std::vector<cplx> ts = default_t_samples();
      const auto report = verify_preservance(family, ts, ctx.tol(1e-9));
      if (ctx.verbose())
        for (const auto &s : report.samples)
          ctx.log() << "t = " << s.t << ": c-symplectic " << s.c_symplectic << ", isotropy "
                    << s.fiber_isotropy << ", fiber structure " << s.fiber_structure
                    << ", quotient structure " << s.quotient_structure << '\n';
      const bool all_cs = std::all_of(report.samples.begin(), report.samples.end(),
                                      [](const PreservanceSample &s) { return s.c_symplectic; });
      ctx.record("deformed-c-symplectic", m, i, bool_residual(deformed && all_cs), 0.0);
      ctx.record("fiber-isotropy", m, i, report.max_fiber_isotropy, ctx.tol(1e-9));
      ctx.record("fiber-structure", m, i, report.max_fiber_structure, ctx.tol(1e-9));
      ctx.record("quotient-structure", m, i, report.max_quotient_structure, ctx.tol(1e-9));
      // Affine in t: Omega_{t1 + t2} = Omega_{t1} + t2 pi^* gamma.
      const cplx t1 = rng.complex_normal(), t2 = rng.complex_normal();
      const Eigen::MatrixXcd lhs = family.at(t1 + t2).matrix();
      const Eigen::MatrixXcd rhs = family.at(t1).matrix() + t2 * family.pulled_back_gamma().matrix();
      ctx.record("affine-in-t", m, i, max_abs(Eigen::MatrixXcd(lhs - rhs)) / std::max(1.0, max_abs(lhs)),
                 ctx.tol(1e-12));
    }
  }
}

void section_theorem(Context &ctx)
{
  for (int m : dims_or(ctx, {4, 8})) {
    const int n = samples_or(ctx, 200);
    for (int i = 0; i < n; ++i) {
      if (!ctx.selected(m, i))
        continue;
      Rng rng(ctx.seed_for(m, i));
      const auto inst = gen::c_symplectic(rng, m / 4);
      CSymplecticSpace space(inst.omega);
      Subspace L = gen::random_maximal_isotropic(rng, inst.omega);
      LagrangianProjection p(std::move(space), std::move(L));
      Eigen::MatrixXd offset(p.dim() - p.base_dim(), p.base_dim());
      for (Eigen::Index c = 0; c < offset.cols(); ++c)
        for (Eigen::Index r = 0; r < offset.rows(); ++r)
          offset(r, c) = rng.normal();
      const LinearSection s = LinearSection::with_fiber_offset(p, offset);
      const SectionForm sf = section_form(s);
      const auto h = holomorphize_section(s, ctx.tol(1e-9));
      log_matrix(ctx, "omega", inst.omega.matrix());
      log_matrix(ctx, "section", s.map());
      log_matrix(ctx, "eta", h.eta.matrix());
      log_matrix(ctx, "omega'", h.omega_prime.matrix());
      ctx.record("section-form-02", m, i, sf.types.norm02 / std::max(1.0, sf.form.max_norm()),
                 ctx.tol(1e-9));
      ctx.record("graph-vanishing", m, i, h.graph_vanishing, ctx.tol(1e-9));
      ctx.record("graph-lagrangian", m, i, h.graph_lagrangian, ctx.tol(1e-9));
      ctx.record("intertwining", m, i, h.intertwining, ctx.tol(1e-9));
    }
  }
}

// Shear amplitude of the twisted closed field.
constexpr double kTwistEpsilon = 0.01;
// Amplitude of the non-closed control perturbation.
constexpr double kControlAmplitude = 1.0;

void testbed_nijenhuis(Context &ctx)
{
  const auto &cfg = ctx.config();
  const int grid = cfg.grid;
  if (grid < 16 || grid % 4 != 0)
    throw InvalidInput("testbed: --grid must be a multiple of 4, at least 16");
  const int coarse = grid / 2;
  const cplx t = cfg.t;
  if (cfg.control == "nonclosed") {
    if (!ctx.selected(4, 0))
      return;
    const double n_coarse =
      testbed::nijenhuis_norm(testbed::structure_field(testbed::nonclosed_form_field(t, kControlAmplitude, coarse)).structure).max_norm;
    const double n_fine =
      testbed::nijenhuis_norm(testbed::structure_field(testbed::nonclosed_form_field(t, kControlAmplitude, grid)).structure).max_norm;
    const double change = std::abs(n_fine - n_coarse) / std::max(n_fine, 1e-300);
    // Bounded away from zero: far above the closed-case bound at both resolutions.
    const double lower_bound = 1e3 * 1e-4;
    const bool ok = std::min(n_coarse, n_fine) >= lower_bound && change <= ctx.tol(0.05);
    ctx.record_with("control-nijenhuis", 4, 0, change, ctx.tol(0.05), !ok);
    ctx.details("control-nijenhuis", 4) = {{"norm_coarse", n_coarse}, {"norm_fine", n_fine},
                                           {"grid_coarse", coarse}, {"grid_fine", grid},
                                           {"lower_bound", lower_bound},
                                           {"amplitude", kControlAmplitude}};
    return;
  }
  if (cfg.control != "closed")
    throw InvalidInput("testbed: --control must be closed or nonclosed");
  const int n = samples_or(ctx, 3);
  Json orders = Json::array();
  for (int i = 0; i < n; ++i) {
    if (!ctx.selected(4, i))
      continue;
    Rng rng(ctx.seed_for(4, i));
    const auto sigma = testbed::SmoothSection::random(rng, cfg.modes);
    const auto cert = testbed::verify_section_holomorphic(sigma, grid, t);
    ctx.record("section-holomorphic", 4, i, cert.max_residual, ctx.tol(1e-8));
    ctx.record("section-form-02", 4, i, cert.max_02, ctx.tol(1e-12));

    const auto eta = testbed::sample_section_form(sigma, grid).eta;
    const auto omega_t = testbed::deformed_form_field(eta, t);
    const auto induced = testbed::structure_field(omega_t);
    ctx.record("pointwise-c-symplectic", 4, i, static_cast<double>(induced.flagged.size()), 0.0);
    const double untwisted = testbed::nijenhuis_norm(induced.structure).max_norm;
    ctx.record("nijenhuis", 4, i, untwisted, ctx.tol(1e-4));

    double closed = 0.0;
    const auto d_omega = testbed::exterior_derivative_fd(omega_t);
    for (const auto &d : d_omega.values())
      closed = std::max(closed, d.max_norm());
    ctx.record("closedness", 4, i, closed, ctx.tol(1e-10));

    const double tw_coarse = testbed::nijenhuis_norm(
      testbed::structure_field(testbed::twisted_form_field(sigma, t, coarse, kTwistEpsilon)).structure).max_norm;
    const double tw_fine = testbed::nijenhuis_norm(
      testbed::structure_field(testbed::twisted_form_field(sigma, t, grid, kTwistEpsilon)).structure).max_norm;
    const double order = std::log2(tw_coarse / tw_fine);
    if (ctx.verbose())
      ctx.log() << "untwisted Nijenhuis " << untwisted << "; twisted " << tw_coarse << " (N = "
                << coarse << "), " << tw_fine << " (N = " << grid << "), observed order " << order
                << '\n';
    ctx.record("nijenhuis-order", 4, i, std::abs(order - 2.0), ctx.tol(0.25));
    orders.push_back({{"twisted_coarse", tw_coarse}, {"twisted_fine", tw_fine}, {"order", order},
                      {"richardson_limit", tw_fine - (tw_coarse - tw_fine) / 3.0}});
  }
  if (!ctx.verbose()) {
    ctx.details("nijenhuis-order", 4) = {{"epsilon", kTwistEpsilon}, {"grid_coarse", coarse},
                                         {"grid_fine", grid}, {"cases", orders}};
  }
}

void lattice_sections(Context &ctx)
{
  using namespace lattice;
  const IntegralLattice k3 = standard_k3_lattice();
  const int r = k3.rank();
  if (ctx.selected(r, -1)) {
    // Fixed vectors: the first U block, alone and inside the K3 lattice.
    const IntegralLattice u = hyperbolic_plane();
    const IntVector s_u = find_section_class(u, to_int_vector({1, 0}));
    IntVector e(static_cast<std::size_t>(r), Integer(0));
    e[0] = 1;
    const IntVector s_k3 = find_section_class(k3, e);
    const bool ok = u.pairing(s_u, to_int_vector({1, 0})) == 1 && u.norm(s_u) == -2 &&
                    k3.pairing(s_k3, e) == 1 && k3.norm(s_k3) == -2;
    ctx.record("standard-section-class", r, -1, bool_residual(ok), 0.0);
  }
  const int n = samples_or(ctx, 100);
  std::size_t max_bits = 0;
  for (int i = 0; i < n; ++i) {
    if (!ctx.selected(r, i))
      continue;
    Rng rng(ctx.seed_for(r, i));
    const IntVector e = random_primitive_isotropic(rng);
    bool ok = is_primitive_isotropic(k3, e);
    IntVector s;
    if (ok) {
      s = find_section_class(k3, e);
      ok = k3.pairing(s, e) == 1 && k3.norm(s) == -2;
    }
    for (const auto &x : e)
      max_bits = std::max<std::size_t>(max_bits, msb(Integer(abs(x) + 1)));
    if (ctx.verbose())
      ctx.log() << "e = " << io::to_json(e).dump() << "\ns = " << io::to_json(s).dump() << '\n';
    ctx.record("section-class", r, i, bool_residual(ok), 0.0);
  }
  if (!ctx.verbose())
    ctx.details("section-class", r) = {{"max_entry_bits", max_bits}};
}

void twistor_curve(Context &ctx)
{
  using namespace lattice;
  const IntegralLattice k3 = standard_k3_lattice();
  const int r = k3.rank();
  const int n = samples_or(ctx, 100);
  for (int i = 0; i < n; ++i) {
    if (!ctx.selected(r, i))
      continue;
    Rng rng(ctx.seed_for(r, i));
    const IntMatrix g = random_k3_isometry(rng);
    const IntVector &e = g[0];
    const IntVector s = find_section_class(k3, e);
    const PeriodPoint p = random_period_point(rng, g);
    const cplx t = twistor_parameter(k3, s, e, p.omega_class());
    if (ctx.verbose())
      ctx.log() << "e = " << io::to_json(e).dump() << "\ns = " << io::to_json(s).dump()
                << "\nomega =\n" << p.omega_class().transpose().format(kMatrixFormat) << "\nt = " << t
                << '\n';
    ctx.record("substitution", r, i, twistor_substitution_residual(k3, s, e, p.omega_class(), t),
               ctx.tol(1e-12));
    const TwistorPlane base = twistor_curve_plane(p, e, 0.0, 0.0);
    double deviation = 0.0;
    bool positive = true;
    for (int a = 0; a < 10; ++a)
      for (int b = 0; b < 10; ++b) {
        const double x = -2.0 + 4.0 * a / 9.0, y = -2.0 + 4.0 * b / 9.0;
        try {
          const TwistorPlane plane = twistor_curve_plane(p, e, x, y);
          // Relative to the magnitude |v|^T |G| |v| of the terms in the pairing.
          const Eigen::MatrixXd ag = p.gram().cwiseAbs();
          const double scale =
            std::max(plane.v1.cwiseAbs().dot(ag * plane.v1.cwiseAbs()),
                     plane.v2.cwiseAbs().dot(ag * plane.v2.cwiseAbs()));
          deviation = std::max(deviation, max_abs(Eigen::MatrixXd(plane.gram - base.gram)) / scale);
        } catch (const ConsistencyError &) {
          positive = false;
        }
      }
    ctx.record("plane-gram-constant", r, i, deviation, ctx.tol(1e-12));
    ctx.record("plane-positive", r, i, bool_residual(positive), 0.0);
  }
}

void selftest(Context &ctx, bool fail)
{
  const int n = samples_or(ctx, 3);
  for (int i = 0; i < n; ++i) {
    if (!ctx.selected(4, i))
      continue;
    Rng rng(ctx.seed_for(4, i));
    const double residual = fail ? 1.0 + rng.uniform() : 0.0;
    ctx.record("synthetic", 4, i, residual, ctx.tol(0.5));
  }
}

using SuiteFn = std::function<void(Context &)>;

const std::vector<std::pair<std::string, SuiteFn>> &registry()
{
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
    {"criteria-equivalence", criteria_equivalence},
    {"induced-structure", induced_structure},
    {"gram-schmidt", gram_schmidt},
    {"hitchin", hitchin},
    {"preservance", preservance},
    {"section-theorem", section_theorem},
    {"testbed-nijenhuis", testbed_nijenhuis},
    {"lattice-sections", lattice_sections},
    {"twistor-curve", twistor_curve},
    {"selftest-pass", [](Context &c) { selftest(c, false); }},
    {"selftest-fail", [](Context &c) { selftest(c, true); }},
  };
  return r;
}

const SuiteFn &find_suite(const std::string &name)
{
  for (const auto &[n, fn] : registry())
    if (n == name)
      return fn;
  throw InvalidInput("unknown suite: " + name);
}

SuiteReport run(const SuiteConfig &config, std::ostream *log, std::optional<std::pair<int, int>> only)
{
  const SuiteFn &fn = find_suite(config.suite);
  const auto start = std::chrono::steady_clock::now();
  Context ctx(config, log, only);
  fn(ctx);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return ctx.finish(wall);
}

}  // namespace

std::uint64_t case_seed(std::uint64_t seed, const std::string &suite, int dim, int index)
{
  return mix_seed(seed, {fnv1a(suite), static_cast<std::uint64_t>(dim),
                         static_cast<std::uint64_t>(static_cast<std::int64_t>(index))});
}

const std::vector<std::string> &suite_names()
{
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto &[n, fn] : registry())
      if (n.rfind("selftest", 0) != 0)
        v.push_back(n);
    return v;
  }();
  return names;
}

bool is_known_suite(const std::string &name)
{
  for (const auto &[n, fn] : registry())
    if (n == name)
      return true;
  return false;
}

SuiteReport run_suite(const SuiteConfig &config) { return run(config, nullptr, std::nullopt); }

SuiteReport replay(const FailureCase &c, std::ostream &log)
{
  SuiteConfig config = c.config;
  config.suite = c.suite;
  if (case_seed(config.seed, c.suite, c.dim, c.index) != c.case_seed)
    throw InvalidInput("replay: case seed does not match the recorded configuration");
  log << "replaying suite " << c.suite << " check " << c.check << " dim " << c.dim << " case "
      << c.index << " (case seed " << c.case_seed << ")\n";
  return run(config, &log, std::make_pair(c.dim, c.index));
}

Json to_json(const SuiteConfig &c)
{
  return {{"suite", c.suite},   {"dims", c.dims}, {"samples", c.samples},
          {"seed", c.seed},     {"tol", c.tol ? Json(*c.tol) : Json(nullptr)},
          {"grid", c.grid},     {"modes", c.modes}, {"t", {c.t.real(), c.t.imag()}},
          {"control", c.control}};
}

SuiteConfig config_from_json(const Json &j)
{
  if (!j.is_object())
    throw InvalidInput("config must be an object");
  SuiteConfig c;
  try {
    c.suite = j.at("suite").get<std::string>();
    c.dims = j.at("dims").get<std::vector<int>>();
    c.samples = j.at("samples").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("tol").is_null())
      c.tol = j.at("tol").get<double>();
    c.grid = j.at("grid").get<int>();
    c.modes = j.at("modes").get<int>();
    const auto t = j.at("t").get<std::vector<double>>();
    if (t.size() != 2)
      throw InvalidInput("config: t must be [re, im]");
    c.t = {t[0], t[1]};
    c.control = j.at("control").get<std::string>();
  } catch (const nlohmann::json::exception &err) {
    throw InvalidInput(std::string("config: ") + err.what());
  }
  return c;
}

Json to_json(const FailureCase &c)
{
  return {{"suite", c.suite}, {"check", c.check},         {"dim", c.dim},
          {"index", c.index}, {"case_seed", c.case_seed}, {"config", to_json(c.config)}};
}

FailureCase failure_case_from_json(const Json &j)
{
  if (!j.is_object())
    throw InvalidInput("case file must hold a JSON object");
  FailureCase c;
  try {
    c.suite = j.at("suite").get<std::string>();
    c.check = j.at("check").get<std::string>();
    c.dim = j.at("dim").get<int>();
    c.index = j.at("index").get<int>();
    c.case_seed = j.at("case_seed").get<std::uint64_t>();
    c.config = config_from_json(j.at("config"));
  } catch (const nlohmann::json::exception &err) {
    throw InvalidInput(std::string("case file: ") + err.what());
  }
  if (!is_known_suite(c.suite))
    throw InvalidInput("case file: unknown suite " + c.suite);
  return c;
}

Json to_json(const SuiteReport &report)
{
  Json checks = Json::array();
  for (const auto &r : report.checks)
    checks.push_back({{"check", r.check},
                      {"dim", r.dim},
                      {"samples", r.samples},
                      {"max_residual", r.max_residual},
                      {"pass", r.pass},
                      {"seed", r.seed},
                      {"tolerance", r.tolerance},
                      {"details", r.details}});
  Json j = {{"suite", report.suite},
            {"pass", report.pass},
            {"seed", report.config.seed},
            {"config", to_json(report.config)},
            {"checks", checks},
            {"wall_time_s", report.wall_time}};
  if (report.first_failure)
    j["first_failure"] = to_json(*report.first_failure);
  return j;
}

void write_csv(std::ostream &out, const SuiteReport &report)
{
  out << "suite,check,dim,samples,max_residual,tolerance,pass,seed\n";
  out.precision(17);
  for (const auto &r : report.checks)
    out << report.suite << ',' << r.check << ',' << r.dim << ',' << r.samples << ','
        << r.max_residual << ',' << r.tolerance << ',' << (r.pass ? "true" : "false") << ','
        << r.seed << '\n';
}

}  // namespace csympl::suites
