#pragma once

// Fox H-function H^{m,n}_{p,q}[z | (a_j, alpha_j); (b_j, beta_j)] under the
// convention H(z) = (1/(2 pi i)) int_L theta(s) z^(-s) ds with
//   theta(s) = prod_{j<=m} G(b_j + beta_j s) prod_{j<=n} G(1 - a_j - alpha_j s)
//            / (prod_{j>m} G(1 - b_j - beta_j s) prod_{j>n} G(a_j + alpha_j s)).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "foxh/error.hpp"

namespace foxh {

/// One parameter pair (a_j, alpha_j) or (b_j, beta_j).
struct HPair {
  double shift = 0.0;
  double scale = 1.0;
  bool operator==(const HPair&) const = default;
};

struct HParams {
  int m = 1;
  int n = 0;
  std::vector<HPair> upper;  // (a_j, alpha_j), length p
  std::vector<HPair> lower;  // (b_j, beta_j), length q

  int p() const { return static_cast<int>(upper.size()); }
  int q() const { return static_cast<int>(lower.size()); }
  bool operator==(const HParams&) const = default;
};

/// Throws DomainError unless 1 <= m <= q, 0 <= n <= p and all scales are
/// positive and all entries finite.
void validate(const HParams& h);

/// "(m,n,p,q)".
std::string orders_string(const HParams& h);

/// The Mellin-Barnes integrand theta(s). Throws PoleError at numerator poles;
/// returns 0 at denominator poles.
Complex mellin_theta(const HParams& h, Complex s);

enum class HMethod { ResidueLeft, ResidueRight, ContourOnly, Divergent };

const char* to_string(HMethod m);

/// Delta = sum beta - sum alpha, delta = prod alpha^-alpha prod beta^beta and
/// the aperture a* = sum_{j<=n} alpha - sum_{j>n} alpha + sum_{j<=m} beta - sum_{j>m} beta.
struct HCharacteristics {
  double Delta;
  double delta;
  double aperture;
};

HCharacteristics characteristics(const HParams& h);

/// Which evaluation path converges at z. Total; never throws for valid params.
HMethod check_convergence(const HParams& h, Complex z);

/// A prepared H-function: identical numerator/denominator gamma factors are
/// cancelled and the pole families are precomputed.
class HFunction {
 public:
  explicit HFunction(HParams h);

  const HParams& params() const { return h_; }

  /// Evaluate by the residue series when it converges, by the contour
  /// integral otherwise. Throws DomainError for divergent cases and
  /// PoleError for coincident poles when no contour is available.
  Complex operator()(Complex z) const;

  /// Extra analytic factor multiplying theta(s) z^(-s); it must have no
  /// poles on the side of the contour that is closed.
  using MellinFactor = std::function<Complex(Complex)>;

  /// Residue series over the left (left = true) or right pole family.
  Complex by_residues(Complex z, bool left) const;
  Complex by_residues(Complex z, bool left, const MellinFactor& extra) const;
  /// Contour integral on the line Re s = contour_abscissa().
  Complex by_contour(Complex z, double tol = 1e-11) const;
  /// Contour integral of theta(s) extra(s) z^(-s) on Re s = abscissa.
  Complex by_contour(Complex z, double tol, const MellinFactor& extra, double abscissa,
                     bool conjugate_symmetric) const;

  HMethod method(Complex z) const;
  Complex theta(Complex s) const;

  /// Largest pole of the left family / smallest pole of the right family
  /// (+inf when there is none).
  double left_pole_max() const { return left_max_; }
  double right_pole_min() const { return right_min_; }
  bool contour_available() const { return left_max_ < right_min_; }
  double contour_abscissa() const;

  /// H(z) ~ z^{leading_exponent()} as z -> 0 (generic case).
  double leading_exponent() const { return -left_max_; }

 private:
  struct Factor {
    double c0, c1;  // Gamma(c0 + c1 s)
  };
  Complex residue_sum(Complex z, bool left, const MellinFactor* extra, double* cancellation) const;
  bool contour_allowed(Complex z) const;

  HParams h_;
  HCharacteristics ch_;
  std::vector<Factor> num_, den_;
  double left_max_, right_min_;
};

/// H(z) in one call.
Complex eval_h(const HParams& h, Complex z);

/// Stored templates.
HParams exponential_template();
/// E_{alpha,beta}(z) = H^{1,1}_{1,2}[-z | (0,1); (0,1), (1-beta, alpha)].
HParams mittag_leffler_template(double alpha, double beta);
/// lambda^(eta)_{mu,nu}(z) = H^{2,0}_{1,2}[z | (1-(nu+1)/eta, 1/eta); (0,1), (-mu-nu/eta, 1/eta)].
HParams lambda_template(double eta, double mu, double nu);

enum class KnownKind { Exponential, MittagLeffler, Lambda };

/// Result of reduce_to_known: H(z) = (1/scale) z^shift F(z^(1/scale)) with F
/// the named function at the recorded parameters (for Mittag-Leffler F(y) =
/// E_{alpha,beta}(-y)).
struct Reduction {
  KnownKind kind;
  double shift = 0.0;
  double scale = 1.0;
  double p1 = 0.0, p2 = 0.0, p3 = 0.0;  // (alpha, beta) or (eta, mu, nu)

  std::string describe() const;
  Complex evaluate(Complex z) const;
};

std::optional<Reduction> reduce_to_known(const HParams& h);

}  // namespace foxh
