#include "csympl/lattice_k3.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "csympl/errors.hpp"

namespace csympl::lattice
{

namespace
{

using Rational = boost::multiprecision::cpp_rational;

IntVector zero_vector(int r) { return IntVector(static_cast<std::size_t>(r), Integer(0)); }

IntVector unit_vector(int r, int i)
{
  IntVector v = zero_vector(r);
  v[static_cast<std::size_t>(i)] = 1;
  return v;
}

void require_size(const IntegralLattice &L, const IntVector &v, const char *what)
{
  if (static_cast<int>(v.size()) != L.rank())
    throw InvalidInput(std::string(what) + ": vector length does not match the lattice rank");
}

bool is_zero(const IntVector &v)
{
  return std::all_of(v.begin(), v.end(), [](const Integer &x) { return x == 0; });
}

// g = u a + v b with g = gcd(a, b) >= 0.
void extended_gcd(const Integer &a, const Integer &b, Integer &g, Integer &u, Integer &v)
{
  Integer r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    const Integer q = r0 / r1;
    Integer tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = s0 - q * s1;
    s0 = s1;
    s1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (r0 < 0) {
    r0 = -r0;
    s0 = -s0;
    t0 = -t0;
  }
  g = r0;
  u = s0;
  v = t0;
}

double to_d(const Integer &x) { return x.convert_to<double>(); }

}  // namespace

IntVector to_int_vector(const std::vector<long long> &v)
{
  IntVector out;
  out.reserve(v.size());
  for (long long x : v)
    out.emplace_back(x);
  return out;
}

IntegralLattice::IntegralLattice(IntMatrix gram) : gram_(std::move(gram))
{
  const std::size_t r = gram_.size();
  for (const auto &row : gram_)
    if (row.size() != r)
      throw InvalidInput("IntegralLattice: Gram matrix must be square");
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j)
      if (gram_[i][j] != gram_[j][i])
        throw InvalidInput("IntegralLattice: Gram matrix must be symmetric");
}

IntVector IntegralLattice::gram_times(const IntVector &v) const
{
  IntVector out = zero_vector(rank());
  for (std::size_t i = 0; i < gram_.size(); ++i)
    for (std::size_t j = 0; j < gram_.size(); ++j)
      if (gram_[i][j] != 0)
        out[i] += gram_[i][j] * v[j];
  return out;
}

Integer IntegralLattice::pairing(const IntVector &v, const IntVector &w) const
{
  require_size(*this, v, "pairing");
  require_size(*this, w, "pairing");
  const IntVector gw = gram_times(w);
  Integer s = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += v[i] * gw[i];
  return s;
}

bool IntegralLattice::is_even() const
{
  for (std::size_t i = 0; i < gram_.size(); ++i)
    if (gram_[i][i] % 2 != 0)
      return false;
  return true;
}

Integer IntegralLattice::determinant() const
{
  // Bareiss: every intermediate entry is a minor, so divisions are exact.
  IntMatrix a = gram_;
  const std::size_t n = a.size();
  if (n == 0)
    return 1;
  int sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0)
        ++p;
      if (p == n)
        return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::pair<int, int> IntegralLattice::signature() const
{
  // Congruence diagonalization over Q: S^T G S diagonal with rational entries.
  const std::size_t n = gram_.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a[i][j] = Rational(gram_[i][j]);
  auto add_to = [&](std::size_t dst, std::size_t src, const Rational &c) {
    for (std::size_t j = 0; j < n; ++j)
      a[dst][j] += c * a[src][j];
    for (std::size_t j = 0; j < n; ++j)
      a[j][dst] += c * a[j][src];
  };
  auto swap_index = [&](std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    for (std::size_t k = 0; k < n; ++k)
      std::swap(a[k][i], a[k][j]);
  };
  int pos = 0, neg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][p] == 0)
        ++p;
      if (p < n) {
        swap_index(k, p);
      } else {
        std::size_t q = k + 1;
        while (q < n && a[k][q] == 0)
          ++q;
        if (q == n)
          continue;  // a[k][.] = 0: null direction
        add_to(k, q, Rational(1));  // a[k][k] becomes 2 a[k][q]
      }
    }
    for (std::size_t i = k + 1; i < n; ++i)
      if (a[i][k] != 0)
        add_to(i, k, -a[i][k] / a[k][k]);
    if (a[k][k] > 0)
      ++pos;
    else if (a[k][k] < 0)
      ++neg;
  }
  return {pos, neg};
}

Eigen::MatrixXd IntegralLattice::gram_double() const
{
  const int r = rank();
  Eigen::MatrixXd g(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      g(i, j) = to_d(gram_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  return g;
}

IntegralLattice hyperbolic_plane()
{
  return IntegralLattice({{Integer(0), Integer(1)}, {Integer(1), Integer(0)}});
}

IntegralLattice e8_negative()
{
  // Bourbaki labelling 1..8: chain 1-3-4-5-6-7-8 with 2 attached to 4.
  static const int edges[7][2] = {{1, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {2, 4}};
  IntMatrix g(8, zero_vector(8));
  for (int i = 0; i < 8; ++i)
    g[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = -2;
  for (const auto &e : edges) {
    const auto i = static_cast<std::size_t>(e[0] - 1), j = static_cast<std::size_t>(e[1] - 1);
    g[i][j] = 1;
    g[j][i] = 1;
  }
  return IntegralLattice(std::move(g));
}

IntegralLattice orthogonal_sum(const std::vector<IntegralLattice> &parts)
{
  int r = 0;
  for (const auto &p : parts)
    r += p.rank();
  IntMatrix g(static_cast<std::size_t>(r), zero_vector(r));
  std::size_t off = 0;
  for (const auto &p : parts) {
    for (std::size_t i = 0; i < p.gram().size(); ++i)
      for (std::size_t j = 0; j < p.gram().size(); ++j)
        g[off + i][off + j] = p.gram()[i][j];
    off += p.gram().size();
  }
  return IntegralLattice(std::move(g));
}

IntegralLattice standard_k3_lattice()
{
  const auto u = hyperbolic_plane();
  const auto e8 = e8_negative();
  IntegralLattice k3 = orthogonal_sum({u, u, u, e8, e8});
  if (!k3.is_even() || !k3.is_unimodular())
    throw ConsistencyError("standard_k3_lattice: lattice is not even unimodular");
  return k3;
}

Integer content(const IntVector &v)
{
  Integer g = 0;
  for (const auto &x : v)
    g = gcd(g, abs(x));
  return g;
}

bool is_primitive_isotropic(const IntegralLattice &L, const IntVector &e)
{
  require_size(L, e, "is_primitive_isotropic");
  if (is_zero(e))
    throw InvalidInput("is_primitive_isotropic: zero vector");
  return content(e) == 1 && L.norm(e) == 0;
}

IntVector dual_vector(const IntegralLattice &L, const IntVector &e)
{
  require_size(L, e, "dual_vector");
  if (!L.is_unimodular())
    throw InvalidInput("dual_vector: lattice is not unimodular");
  if (is_zero(e) || content(e) != 1)
    throw InvalidInput("dual_vector: vector is not primitive");
  // Solve c . x = 1 for c = G e; gcd(c) = 1 since G is invertible over Z.
  const IntVector c = L.gram_times(e);
  const int r = L.rank();
  Integer g = 0;
  IntVector x = zero_vector(r);
  for (int i = 0; i < r; ++i) {
    const Integer &ci = c[static_cast<std::size_t>(i)];
    if (ci == 0)
      continue;
    Integer h, u, v;
    extended_gcd(g, ci, h, u, v);
    for (auto &xj : x)
      xj *= u;
    x[static_cast<std::size_t>(i)] += v;
    g = h;
  }
  if (g != 1)
    throw ConsistencyError("dual_vector: entries of G e are not coprime");
  if (L.pairing(x, e) != 1)
    throw ConsistencyError("dual_vector: (b, e) != 1");
  return x;
}

IntVector square_minus_two(const IntegralLattice &L, const IntVector &e, const IntVector &b)
{
  require_size(L, e, "square_minus_two");
  require_size(L, b, "square_minus_two");
  if (L.pairing(b, e) != 1)
    throw InvalidInput("square_minus_two: (b, e) != 1");
  const Integer bb = L.norm(b);
  if (bb % 2 != 0)
    throw InvalidInput("square_minus_two: (b, b) is odd");
  if (L.norm(e) != 0)
    throw InvalidInput("square_minus_two: e is not isotropic");
  const Integer c = bb / 2 + 1;
  IntVector a = b;
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] -= c * e[i];
  if (L.pairing(a, e) != 1 || L.norm(a) != -2)
    throw ConsistencyError("square_minus_two: (a, e) = 1 and (a, a) = -2 do not both hold");
  return a;
}

IntVector find_section_class(const IntegralLattice &L, const IntVector &e)
{
  if (!L.is_even())
    throw InvalidInput("find_section_class: lattice is not even");
  if (!is_primitive_isotropic(L, e))
    throw InvalidInput("find_section_class: e is not primitive isotropic");
  return square_minus_two(L, e, dual_vector(L, e));
}

IntVector eichler_transvection(const IntegralLattice &L, const IntVector &f, const IntVector &a,
                               const IntVector &x)
{
  if (L.norm(f) != 0 || L.pairing(f, a) != 0)
    throw InvalidInput("eichler_transvection: need (f, f) = 0 and (f, a) = 0");
  const Integer ax = L.pairing(a, x);
  const Integer fx = L.pairing(f, x);
  const Integer half_aa = L.norm(a) / 2;
  IntVector y = x;
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] += ax * f[i] - fx * a[i] - half_aa * fx * f[i];
  return y;
}

IntVector apply(const IntMatrix &g, const IntVector &x)
{
  // Columns of g are images of basis vectors; stored as g[column].
  IntVector y = zero_vector(static_cast<int>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] != 0)
      for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += g[j][i] * x[j];
  return y;
}

IntMatrix random_k3_isometry(Rng &rng, int factors)
{
  const IntegralLattice k3 = standard_k3_lattice();
  const int r = k3.rank();
  IntMatrix g;
  for (int j = 0; j < r; ++j)
    g.push_back(unit_vector(r, j));
  for (int step = 0; step < factors; ++step) {
    const int block = static_cast<int>(rng.uniform_int(0, 2));
    const IntVector f = unit_vector(r, 2 * block + static_cast<int>(rng.uniform_int(0, 1)));
    IntVector a;
    do {
      a = zero_vector(r);
      for (int k = 0; k < 3; ++k) {
        int idx;
        do {
          idx = static_cast<int>(rng.uniform_int(0, r - 1));
        } while (idx / 2 == block && idx < 6);
        a[static_cast<std::size_t>(idx)] = rng.uniform_int(-1, 1);
      }
    } while (is_zero(a));
    for (auto &col : g)
      col = eichler_transvection(k3, f, a, col);
  }
  return g;
}

Eigen::MatrixXd to_double(const IntMatrix &g)
{
  const auto r = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd m(r, r);
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = 0; i < r; ++i)
      m(i, j) = to_d(g[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
  return m;
}

Eigen::VectorXd to_double(const IntVector &v)
{
  Eigen::VectorXd d(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    d(static_cast<Eigen::Index>(i)) = to_d(v[i]);
  return d;
}

IntVector random_primitive_isotropic(Rng &rng, int factors)
{
  const IntMatrix g = random_k3_isometry(rng, factors);
  return g[0];
}

PeriodPoint::PeriodPoint(IntegralLattice lattice, Eigen::VectorXcd omega_class, double tol)
  : lattice_(std::move(lattice)), gram_(lattice_.gram_double()), omega_(std::move(omega_class))
{
  if (omega_.size() != lattice_.rank())
    throw InvalidInput("PeriodPoint: class length does not match the lattice rank");
  const Eigen::VectorXd mag = omega_.cwiseAbs();
  const double scale = std::max(mag.dot(gram_.cwiseAbs() * mag), 1e-300);
  const std::complex<double> oo = omega_.transpose() * gram_ * omega_;
  const double ob = (omega_.transpose() * gram_ * omega_.conjugate()).value().real();
  if (std::abs(oo) > tol * scale)
    throw InvalidInput("PeriodPoint: (Omega, Omega) != 0");
  if (ob <= tol * scale)
    throw InvalidInput("PeriodPoint: (Omega, conj Omega) is not positive");
}

PeriodPoint random_period_point(Rng &rng, const IntMatrix &isometry, double perturbation)
{
  IntegralLattice k3 = standard_k3_lattice();
  const Eigen::MatrixXd g = k3.gram_double();
  const int r = k3.rank();
  for (;;) {
    // p = f2 + g2, q = f3 + g3 in the second and third U blocks, perturbed inside f1^perp,
    // where f1 = e_0 and (e_0, x) = x_1.
    Eigen::VectorXd p = Eigen::VectorXd::Zero(r), q = Eigen::VectorXd::Zero(r);
    p(2) = p(3) = 1.0;
    q(4) = q(5) = 1.0;
    for (int i = 0; i < r; ++i) {
      if (i == 1)
        continue;
      p(i) += perturbation * rng.normal();
      q(i) += perturbation * rng.normal();
    }
    const double pp = p.dot(g * p);
    if (pp < 0.5)
      continue;
    q -= (p.dot(g * q) / pp) * p;
    const double qq = q.dot(g * q);
    if (qq < 0.5)
      continue;
    q *= std::sqrt(pp / qq);
    const Eigen::MatrixXd gd = to_double(isometry);
    Eigen::VectorXcd omega(r);
    const Eigen::VectorXd gp = gd * p, gq = gd * q;
    for (int i = 0; i < r; ++i)
      omega(i) = std::complex<double>(gp(i), gq(i));
    return PeriodPoint(std::move(k3), std::move(omega));
  }
}

std::complex<double> twistor_parameter(const IntegralLattice &L, const IntVector &s,
                                       const IntVector &e, const Eigen::VectorXcd &omega_class)
{
  require_size(L, s, "twistor_parameter");
  require_size(L, e, "twistor_parameter");
  const Integer se = L.pairing(s, e);
  if (se == 0)
    throw InvalidInput("twistor_parameter: (s, e) = 0, no unique deformation");
  const Eigen::VectorXcd gs = (L.gram_double() * to_double(s)).cast<std::complex<double>>();
  return gs.dot(omega_class) / to_d(se);
}

double twistor_substitution_residual(const IntegralLattice &L, const IntVector &s,
                                     const IntVector &e, const Eigen::VectorXcd &omega_class,
                                     std::complex<double> t)
{
  const Eigen::MatrixXd g = L.gram_double();
  const Eigen::VectorXd gs = g * to_double(s);
  const Eigen::VectorXd ed = to_double(e);
  const Eigen::VectorXcd deformed = omega_class - t * ed.cast<std::complex<double>>();
  const std::complex<double> value = gs.cast<std::complex<double>>().dot(deformed);
  const double scale = gs.cwiseAbs().dot(omega_class.cwiseAbs()) +
                       std::abs(t) * gs.cwiseAbs().dot(ed.cwiseAbs());
  return scale > 0.0 ? std::abs(value) / scale : std::abs(value);
}

TwistorPlane twistor_curve_plane(const PeriodPoint &p, const IntVector &e, double x, double y,
                                 double tol)
{
  const IntegralLattice &L = p.lattice();
  require_size(L, e, "twistor_curve_plane");
  if (L.norm(e) != 0)
    throw InvalidInput("twistor_curve_plane: (e, e) != 0");
  const Eigen::MatrixXd &g = p.gram();
  const Eigen::VectorXd ed = to_double(e);
  const Eigen::VectorXd re = p.omega_class().real(), im = p.omega_class().imag();
  const Eigen::VectorXd ge = g * ed;
  for (const auto &[name, v] : {std::pair{"Re Omega", re}, std::pair{"Im Omega", im}}) {
    const double scale = std::max(ge.cwiseAbs().dot(v.cwiseAbs()), 1e-300);
    if (std::abs(ge.dot(v)) > tol * scale)
      throw InvalidInput(std::string("twistor_curve_plane: (e, ") + name + ") != 0");
  }
  TwistorPlane plane;
  plane.v1 = 2.0 * re + 2.0 * x * ed;
  plane.v2 = -2.0 * im - 2.0 * y * ed;
  plane.gram << plane.v1.dot(g * plane.v1), plane.v1.dot(g * plane.v2),
    plane.v2.dot(g * plane.v1), plane.v2.dot(g * plane.v2);
  if (!(plane.gram(0, 0) > 0.0 && plane.gram.determinant() > 0.0))
    throw ConsistencyError("twistor_curve_plane: plane is not positive definite");
  return plane;
}

}  // namespace csympl::lattice
