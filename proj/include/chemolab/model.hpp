#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "chemolab/error.hpp"

namespace chemolab {

/// Coefficients of the quasilinear attraction-repulsion system
///
///   u_t = div((u+1)^{m-1} grad u - chi u (u+1)^{p-2} grad v + xi u (u+1)^{q-2} grad w) + f(u)
///   0   = lap v + alpha u - beta v
///   0   = lap w + gamma u - delta w
///
/// with the logistic-type source f(u) = lambda0 u - mu1 r^a u^kappa.
struct ModelParams {
  double m = 1.0;
  double p = 2.0;
  double q = 2.0;
  double chi = 1.0;
  double xi = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double delta = 1.0;
  double lambda0 = 0.0;
  double mu1 = 0.0;
  double a = 0.0;
  double kappa = 1.0;
  bool source_enabled = false;
};

/// Ball B_R(0) in R^n.
struct DomainSpec {
  int n = 3;
  double R = 1.0;
};

/// Parameters that passed validate_params. Only constructible through it.
class ValidatedParams {
 public:
  const ModelParams& params() const noexcept { return params_; }
  const DomainSpec& domain() const noexcept { return domain_; }

 private:
  friend ValidatedParams validate_params(const ModelParams&, const DomainSpec&, bool);
  ValidatedParams(const ModelParams& p, const DomainSpec& d) : params_(p), domain_(d) {}

  ModelParams params_;
  DomainSpec domain_;
};

enum class Verdict { BoundedThm31, BoundedThm33, BlowupThm41, BlowupThm44, NoTheoremApplies };
enum class ConditionCase { C1, C2, C3 };

const char* to_string(Verdict v);
const char* to_string(ConditionCase c);

struct RegimePrediction {
  Verdict verdict = Verdict::NoTheoremApplies;
  std::optional<ConditionCase> condition_case;
  std::optional<double> kappa_bound;
  std::optional<double> sigma_exponent;
  std::string details;
};

inline constexpr double kDefaultEps0 = 0.1;

/// y_+ = max{0, y}
inline double positive_part(double y) { return y > 0.0 ? y : 0.0; }

/// allow_zero_taxis admits chi = 0 and/or xi = 0 (the decoupled limit used by
/// verification runs); every other invariant still applies.
ValidatedParams validate_params(const ModelParams& params, const DomainSpec& dom, bool allow_zero_taxis = false);

/// Boundedness theorems (f == 0 only): p < q, or p = q with chi*alpha - xi*gamma < 0.
RegimePrediction check_boundedness_regime(const ModelParams& params, const DomainSpec& dom);

/// First satisfied case among C1 (n in {3,4}), C2, C3 (n >= 5); inequalities
/// are evaluated strict or non-strict exactly as stated for each case.
std::optional<ConditionCase> check_condition_case(double m, double p, int n);

/// Strict upper bound on kappa for the given case.
double kappa_upper_bound(const ModelParams& params, const DomainSpec& dom, ConditionCase c);

/// n(n-1)/((m-p+1)n+1) + eps. Throws DegenerateDenominator if the
/// denominator is not positive.
double sigma_exponent(int n, double m, double p, double eps);

/// Blow-up theorems: p > q (or p = q with chi*alpha - xi*gamma > 0), a case
/// C1-C3, and kappa below kappa_upper_bound. n >= 3 is required.
RegimePrediction check_blowup_regime(const ModelParams& params, const DomainSpec& dom,
                                     double eps0 = kDefaultEps0);

/// Both predicate families combined: a boundedness verdict if one applies,
/// otherwise the blow-up verdict.
RegimePrediction predict_regime(const ModelParams& params, const DomainSpec& dom,
                                double eps0 = kDefaultEps0);

/// Constant C_eps with (x+1)^ell <= (1+eps) x^ell + C_eps for x >= 0:
///   C_eps = (1+eps) ((1+eps)^{1/(ell-1)} - 1)^{-(ell-1)}.
template <typename Scalar>
Scalar convexity_constant(Scalar ell, Scalar eps) {
  using std::expm1;
  using std::log1p;
  using std::pow;
  if (!(ell > Scalar(1))) throw Error(ErrorCode::InvalidExponent, "ell must exceed 1");
  if (!(eps > Scalar(0))) throw Error(ErrorCode::InvalidEps, "eps must be positive");
  const Scalar k = ell - Scalar(1);
  // (1+eps)^{1/k} - 1 without cancellation for small eps.
  const Scalar root_minus_one = expm1(log1p(eps) / k);
  return (Scalar(1) + eps) * pow(root_minus_one, -k);
}

}  // namespace chemolab
