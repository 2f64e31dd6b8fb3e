#include "chemolab/model.hpp"

#include <cmath>
#include <sstream>

namespace chemolab {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::BoundedThm31: return "BoundedThm31";
    case Verdict::BoundedThm33: return "BoundedThm33";
    case Verdict::BlowupThm41: return "BlowupThm41";
    case Verdict::BlowupThm44: return "BlowupThm44";
    case Verdict::NoTheoremApplies: return "NoTheoremApplies";
  }
  return "?";
}

const char* to_string(ConditionCase c) {
  switch (c) {
    case ConditionCase::C1: return "C1";
    case ConditionCase::C2: return "C2";
    case ConditionCase::C3: return "C3";
  }
  return "?";
}

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) throw Error(ErrorCode::NonPositiveCoefficient, name);
}

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) throw Error(ErrorCode::NonPositiveCoefficient, name);
}

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) throw Error(ErrorCode::ValidationError, std::string(name) + " must be finite");
}

double attraction_balance(const ModelParams& prm) { return prm.chi * prm.alpha - prm.xi * prm.gamma; }

}  // namespace

ValidatedParams validate_params(const ModelParams& params, const DomainSpec& dom, bool allow_zero_taxis) {
  if (dom.n < 1) throw Error(ErrorCode::InvalidDimension, "n = " + std::to_string(dom.n));
  if (!(dom.R > 0.0) || !std::isfinite(dom.R)) throw Error(ErrorCode::InvalidDomain, "R must be positive");

  require_finite(params.m, "m");
  require_finite(params.p, "p");
  require_finite(params.q, "q");
  if (allow_zero_taxis) {
    require_nonnegative(params.chi, "chi");
    require_nonnegative(params.xi, "xi");
  } else {
    require_positive(params.chi, "chi");
    require_positive(params.xi, "xi");
  }
  require_positive(params.alpha, "alpha");
  require_positive(params.beta, "beta");
  require_positive(params.gamma, "gamma");
  require_positive(params.delta, "delta");
  require_nonnegative(params.a, "a");
  require_finite(params.kappa, "kappa");

  if (params.source_enabled) {
    if (params.kappa < 1.0) throw Error(ErrorCode::InvalidKappa, "kappa must be >= 1 with the source enabled");
    require_nonnegative(params.lambda0, "lambda0");
    require_nonnegative(params.mu1, "mu1");
  } else if (params.lambda0 != 0.0 || params.mu1 != 0.0) {
    throw Error(ErrorCode::ValidationError, "lambda0 and mu1 must be 0 when the source is disabled");
  }
  return ValidatedParams(params, dom);
}

RegimePrediction check_boundedness_regime(const ModelParams& params, const DomainSpec& /*dom*/) {
  RegimePrediction out;
  if (params.source_enabled) {
    out.details = "boundedness theorems assume f == 0; source is enabled";
    return out;
  }
  if (params.p < params.q) {
    out.verdict = Verdict::BoundedThm31;
    out.details = "p < q";
    return out;
  }
  if (params.p == params.q) {
    const double balance = attraction_balance(params);
    if (balance < 0.0) {
      out.verdict = Verdict::BoundedThm33;
      out.details = "p = q and chi*alpha - xi*gamma < 0";
    } else if (balance == 0.0) {
      out.details = "p = q and chi*alpha - xi*gamma = 0 is not covered";
    } else {
      out.details = "p = q and chi*alpha - xi*gamma > 0";
    }
    return out;
  }
  out.details = "p > q";
  return out;
}

std::optional<ConditionCase> check_condition_case(double m, double p, int n) {
  if (n < 3 || !(m >= 1.0)) return std::nullopt;
  const double nn = n;
  const double upper_common = 2.0 / (nn + 1.0) * m + 2.0 * (nn * nn + 1.0) / (nn * (nn + 1.0));
  const double mixing_bound = -1.0 / (nn - 2.0) * m + 2.0 * (nn * nn - nn - 1.0) / (nn * (nn - 2.0));
  const bool gap = m - p < -2.0 / nn;

  if (n == 3 || n == 4) {
    if (p < upper_common && p < mixing_bound && gap) return ConditionCase::C1;
    return std::nullopt;
  }

  const double lower_common = -2.0 / (nn - 3.0) * m + 2.0 * (nn * nn - 2.0 * nn - 1.0) / (nn * (nn - 3.0));
  const double split = -(nn + 2.0) / (nn - 4.0) * m + (3.0 * nn * nn - 5.0 * nn - 4.0) / (nn * (nn - 4.0));
  const double c2_cap = (nn + 2.0) / 3.0 * m - (nn * nn - 3.0 * nn - 4.0) / (3.0 * nn);
  const bool common = lower_common < p && p < upper_common;
  if (!common) return std::nullopt;

  if (p < split && p <= c2_cap) return ConditionCase::C2;
  if (split <= p && p < mixing_bound && gap) return ConditionCase::C3;
  return std::nullopt;
}

double kappa_upper_bound(const ModelParams& params, const DomainSpec& dom, ConditionCase c) {
  const double n = dom.n;
  const double m = params.m;
  const double p = params.p;
  const double k = (m - p + 1.0) * n + 1.0;
  const double source_gain = params.a * k / (n * (n - 1.0));
  switch (c) {
    case ConditionCase::C1:
    case ConditionCase::C2:
      return 1.0 + (n - 2.0) * k / (n * (n - 1.0)) + source_gain - (m - 1.0) - positive_part(2.0 - p);
    case ConditionCase::C3:
      return 1.0 + k / (2.0 * (n - 1.0)) + source_gain - positive_part(2.0 - p) / 2.0;
  }
  return 0.0;
}

double sigma_exponent(int n, double m, double p, double eps) {
  const double denom = (m - p + 1.0) * n + 1.0;
  if (!(denom > 0.0)) throw Error(ErrorCode::DegenerateDenominator, "(m-p+1)n+1 <= 0");
  return static_cast<double>(n) * (n - 1) / denom + eps;
}

RegimePrediction check_blowup_regime(const ModelParams& params, const DomainSpec& dom, double eps0) {
  RegimePrediction out;
  if (dom.n < 3) {
    out.details = "blow-up theorems require n >= 3";
    return out;
  }
  if (!(params.m > 0.0)) {
    out.details = "blow-up theorems require m > 0";
    return out;
  }

  Verdict candidate;
  if (params.p > params.q) {
    candidate = Verdict::BlowupThm41;
  } else if (params.p == params.q && attraction_balance(params) > 0.0) {
    candidate = Verdict::BlowupThm44;
  } else {
    out.details = params.p < params.q ? "p < q" : "p = q without chi*alpha - xi*gamma > 0";
    return out;
  }

  const auto cc = check_condition_case(params.m, params.p, dom.n);
  if (!cc) {
    out.details = "none of C1, C2, C3 holds";
    return out;
  }
  out.condition_case = cc;
  const double bound = kappa_upper_bound(params, dom, *cc);
  out.kappa_bound = bound;
  try {
    out.sigma_exponent = sigma_exponent(dom.n, params.m, params.p, eps0);
  } catch (const Error&) {
    out.sigma_exponent.reset();
  }

  std::ostringstream os;
  os.precision(17);
  if (params.kappa < bound) {
    out.verdict = candidate;
    os << to_string(*cc) << " holds and kappa = " << params.kappa << " < " << bound;
  } else {
    os << to_string(*cc) << " holds but kappa = " << params.kappa << " >= " << bound;
  }
  out.details = os.str();
  return out;
}

RegimePrediction predict_regime(const ModelParams& params, const DomainSpec& dom, double eps0) {
  auto bounded = check_boundedness_regime(params, dom);
  if (bounded.verdict != Verdict::NoTheoremApplies) return bounded;
  auto blowup = check_blowup_regime(params, dom, eps0);
  if (blowup.verdict != Verdict::NoTheoremApplies) return blowup;
  if (blowup.details.empty()) return bounded;
  blowup.details = bounded.details + "; " + blowup.details;
  return blowup;
}

}  // namespace chemolab
