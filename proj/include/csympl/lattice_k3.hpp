#ifndef CSYMPL_LATTICE_K3_HPP
#define CSYMPL_LATTICE_K3_HPP

#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "csympl/random.hpp"

namespace csympl::lattice
{

using Integer = boost::multiprecision::cpp_int;
using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;  // row-major

IntVector to_int_vector(const std::vector<long long> &v);

// Z^r with the symmetric integer pairing (v, w) = v^T G w.
class IntegralLattice
{
public:
  // Rejects non-square or non-symmetric Gram matrices.
  explicit IntegralLattice(IntMatrix gram);

  int rank() const { return static_cast<int>(gram_.size()); }
  const IntMatrix &gram() const { return gram_; }

  Integer pairing(const IntVector &v, const IntVector &w) const;
  Integer norm(const IntVector &v) const { return pairing(v, v); }
  // G v.
  IntVector gram_times(const IntVector &v) const;

  bool is_even() const;  // all diagonal entries even
  Integer determinant() const;  // exact, fraction-free elimination
  bool is_unimodular() const { return abs(determinant()) == 1; }
  // (positive, negative) inertia, exact rational diagonalization.
  std::pair<int, int> signature() const;

  Eigen::MatrixXd gram_double() const;

private:
  IntMatrix gram_;
};

// U = [[0,1],[1,0]].
IntegralLattice hyperbolic_plane();
// Negative of the E8 Cartan matrix.
IntegralLattice e8_negative();
IntegralLattice orthogonal_sum(const std::vector<IntegralLattice> &parts);
// U + U + U + E8(-1) + E8(-1), rank 22; U blocks on coordinates 0-5.
IntegralLattice standard_k3_lattice();

Integer content(const IntVector &v);  // gcd of the entries, nonnegative

// gcd(e) = 1 and (e, e) = 0. Rejects the zero vector.
bool is_primitive_isotropic(const IntegralLattice &L, const IntVector &e);

// b with (b, e) = 1. Rejects non-unimodular L and non-primitive e.
IntVector dual_vector(const IntegralLattice &L, const IntVector &e);

// a = b - ((b,b)/2 + 1) e, so that (a, e) = 1 and (a, a) = -2. Rejects (b, e) != 1 and odd
// (b, b); checks both identities exactly.
IntVector square_minus_two(const IntegralLattice &L, const IntVector &e, const IntVector &b);

// s with (s, e) = 1 and (s, s) = -2, for even unimodular L and primitive isotropic e.
IntVector find_section_class(const IntegralLattice &L, const IntVector &e);

// Eichler transvection x + (a,x) f - (f,x) a - (a,a)/2 (f,x) f for isotropic f and a
// orthogonal to f; an isometry of any even lattice.
IntVector eichler_transvection(const IntegralLattice &L, const IntVector &f, const IntVector &a,
                               const IntVector &x);

// An isometry of the K3 lattice as a product of transvections with entries of a in
// {-1, 0, 1}; g[j] is the image of the j-th basis vector.
IntMatrix random_k3_isometry(Rng &rng, int factors = 6);

IntVector apply(const IntMatrix &g, const IntVector &x);
Eigen::MatrixXd to_double(const IntMatrix &g);
Eigen::VectorXd to_double(const IntVector &v);

// A random primitive isotropic vector: image of the first U basis vector under a random
// isometry.
IntVector random_primitive_isotropic(Rng &rng, int factors = 6);

// A class [Omega] in L (x) C with (Omega, Omega) = 0 and (Omega, conj Omega) > 0.
class PeriodPoint
{
public:
  // Rejects classes violating either condition beyond tol relative to |Omega|^2 |G|.
  PeriodPoint(IntegralLattice lattice, Eigen::VectorXcd omega_class, double tol = 1e-9);

  const IntegralLattice &lattice() const { return lattice_; }
  const Eigen::VectorXcd &omega_class() const { return omega_; }
  const Eigen::MatrixXd &gram() const { return gram_; }

private:
  IntegralLattice lattice_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXcd omega_;
};

// A random period point orthogonal to e = g(first U basis vector), where g is the isometry
// that produced e.
PeriodPoint random_period_point(Rng &rng, const IntMatrix &isometry, double perturbation = 0.3);

// t = (s, Omega) / (s, e); then s is orthogonal to Omega - t e. Rejects (s, e) = 0.
std::complex<double> twistor_parameter(const IntegralLattice &L, const IntVector &s,
                                       const IntVector &e, const Eigen::VectorXcd &omega_class);

// |(s, Omega - t e)| relative to the floating point scale of the pairing.
double twistor_substitution_residual(const IntegralLattice &L, const IntVector &s,
                                     const IntVector &e, const Eigen::VectorXcd &omega_class,
                                     std::complex<double> t);

struct TwistorPlane
{
  Eigen::VectorXd v1;  // (Omega + conj Omega) + 2x e
  Eigen::VectorXd v2;  // i (Omega - conj Omega) - 2y e
  Eigen::Matrix2d gram;
};

// Rejects e that is not isotropic or not orthogonal to Re Omega and Im Omega, and checks the
// resulting plane is positive definite.
TwistorPlane twistor_curve_plane(const PeriodPoint &p, const IntVector &e, double x, double y,
                                 double tol = 1e-9);

}  // namespace csympl::lattice

#endif
