#include "hwq/dist.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hwq/stats.hpp"

namespace hwq::dist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMeanTol = 1e-12;

double table_mean(const std::vector<std::pair<double, double>>& tab) {
  // trapezoid of the inverse CDF over u in [0,1] = exact mean of the
  // piecewise-linear law the sampler produces
  double m = 0.0;
  for (std::size_t i = 1; i < tab.size(); ++i)
    m += 0.5 * (tab[i].second + tab[i - 1].second) * (tab[i].first - tab[i - 1].first);
  return m;
}

double table_interp(const std::vector<std::pair<double, double>>& tab, double u) {
  if (u <= tab.front().first) return tab.front().second;
  if (u >= tab.back().first) return tab.back().second;
  std::size_t lo = 0, hi = tab.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (tab[mid].first <= u ? lo : hi) = mid;
  }
  const double span = tab[hi].first - tab[lo].first;
  const double w = span > 0 ? (u - tab[lo].first) / span : 0.0;
  return tab[lo].second + w * (tab[hi].second - tab[lo].second);
}

void validate_table(const std::vector<std::pair<double, double>>& tab, const char* what) {
  if (tab.size() < 2) throw std::invalid_argument(std::string(what) + ": need >= 2 rows");
  if (tab.front().first < 0.0 || tab.back().first > 1.0)
    throw std::invalid_argument(std::string(what) + ": u outside [0,1]");
  for (std::size_t i = 1; i < tab.size(); ++i) {
    if (tab[i].first <= tab[i - 1].first)
      throw std::invalid_argument(std::string(what) + ": u not increasing");
    if (tab[i].second < tab[i - 1].second)
      throw std::invalid_argument(std::string(what) + ": x not nondecreasing");
  }
  if (tab.front().second < 0.0)
    throw std::invalid_argument(std::string(what) + ": negative values");
}

}  // namespace

DistributionSpec DistributionSpec::exponential(double rate) {
  if (std::abs(rate - 1.0) > kMeanTol)
    throw std::invalid_argument("exponential: rate must be 1 (mean-one normalization)");
  DistributionSpec s;
  s.family_ = Family::exponential;
  return s;
}

DistributionSpec DistributionSpec::pareto_mean_one(double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("pareto_mean_one: alpha must exceed 1");
  DistributionSpec s;
  s.family_ = Family::pareto_mean_one;
  s.alpha_ = alpha;
  s.pareto_scale_ = (alpha - 1.0) / alpha;
  return s;
}

DistributionSpec DistributionSpec::deterministic(double value) {
  if (std::abs(value - 1.0) > kMeanTol)
    throw std::invalid_argument("deterministic: value must be 1 (mean-one normalization)");
  DistributionSpec s;
  s.family_ = Family::deterministic;
  return s;
}

DistributionSpec DistributionSpec::tabulated(std::vector<std::pair<double, double>> inverse_cdf,
                                             std::vector<std::pair<double, double>> residual) {
  validate_table(inverse_cdf, "tabulated");
  const double m = table_mean(inverse_cdf);
  if (std::abs(m - 1.0) > kMeanTol)
    throw std::invalid_argument("tabulated: mean is " + std::to_string(m) +
                                ", must equal 1; rescale the table first");
  if (!residual.empty()) validate_table(residual, "tabulated residual");
  DistributionSpec s;
  s.family_ = Family::tabulated;
  s.table_ = std::move(inverse_cdf);
  s.residual_table_ = std::move(residual);
  return s;
}

DistributionSpec DistributionSpec::parse(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("cannot parse distribution spec '" + std::string(text) +
                                "'; expected exp, det, or pareto(alpha=A)");
  };
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  auto paren = t.find('(');
  std::string name = t.substr(0, paren);
  double arg = std::numeric_limits<double>::quiet_NaN();
  std::string key;
  if (paren != std::string::npos) {
    if (t.back() != ')') fail();
    std::string inner = t.substr(paren + 1, t.size() - paren - 2);
    auto eq = inner.find('=');
    if (eq == std::string::npos) fail();
    key = inner.substr(0, eq);
    try {
      std::size_t used = 0;
      arg = std::stod(inner.substr(eq + 1), &used);
      if (used != inner.size() - eq - 1) fail();
    } catch (const std::exception&) {
      fail();
    }
  }
  if (name == "exp") return exponential(paren == std::string::npos ? 1.0 : (key == "rate" ? arg : (fail(), 0.0)));
  if (name == "det") return deterministic(paren == std::string::npos ? 1.0 : (key == "value" ? arg : (fail(), 0.0)));
  if (name == "pareto") {
    if (paren == std::string::npos || key != "alpha") fail();
    return pareto_mean_one(arg);
  }
  fail();
  return exponential();
}

double DistributionSpec::sample(RngStream& rng) const {
  switch (family_) {
    case Family::exponential:
      return rng.exponential();
    case Family::deterministic:
      return 1.0;
    case Family::pareto_mean_one:
      return pareto_scale_ * std::pow(rng.uniform(), -1.0 / alpha_);
    case Family::tabulated:
      return table_interp(table_, rng.uniform());
  }
  return 0.0;
}

double DistributionSpec::sample_equilibrium(RngStream& rng) const {
  switch (family_) {
    case Family::exponential:
      return rng.exponential();  // memoryless
    case Family::deterministic:
      return rng.uniform();      // residual of a constant is U[0,1]
    case Family::pareto_mean_one: {
      // Residual density is P(X > y): uniform below x_m, power law above.
      const double u = rng.uniform();
      if (u <= pareto_scale_) return u;
      return std::pow(pareto_scale_, alpha_ / (alpha_ - 1.0)) *
             std::pow((1.0 - u) * (alpha_ - 1.0), -1.0 / (alpha_ - 1.0));
    }
    case Family::tabulated:
      if (residual_table_.empty())
        throw std::invalid_argument(
            "sample_equilibrium: tabulated spec has no residual table");
      return table_interp(residual_table_, rng.uniform());
  }
  return 0.0;
}

double DistributionSpec::variance() const {
  switch (family_) {
    case Family::exponential:
      return 1.0;
    case Family::deterministic:
      return 0.0;
    case Family::pareto_mean_one: {
      if (alpha_ <= 2.0) return kInf;
      const double ex2 = pareto_scale_ * pareto_scale_ * alpha_ / (alpha_ - 2.0);
      return ex2 - 1.0;
    }
    case Family::tabulated: {
      // exact second moment of the piecewise-linear law
      double ex2 = 0.0;
      for (std::size_t i = 1; i < table_.size(); ++i) {
        const double a = table_[i - 1].second, b = table_[i].second;
        const double du = table_[i].first - table_[i - 1].first;
        ex2 += du * (a * a + a * b + b * b) / 3.0;
      }
      return ex2 - 1.0;
    }
  }
  return 0.0;
}

double DistributionSpec::frac_moment(double eps) const {
  if (!(eps > 0.0) || eps > 1.0) throw std::invalid_argument("frac_moment: eps outside (0,1]");
  const double p = 1.0 + eps;
  switch (family_) {
    case Family::exponential:
      return std::tgamma(p + 1.0);
    case Family::deterministic:
      return 1.0;
    case Family::pareto_mean_one:
      if (p >= alpha_) return kInf;
      return std::pow(pareto_scale_, p) * alpha_ / (alpha_ - p);
    case Family::tabulated: {
      const auto& tab = table_;
      return stats::adaptive_simpson(
          [&](double u) { return std::pow(table_interp(tab, u), p); }, 0.0, 1.0, 1e-12);
    }
  }
  return 1.0;
}

double DistributionSpec::laplace(double theta) const {
  if (theta < 0.0) throw std::invalid_argument("laplace: theta must be >= 0");
  if (theta == 0.0) return 1.0;
  switch (family_) {
    case Family::exponential:
      return 1.0 / (1.0 + theta);
    case Family::deterministic:
      return std::exp(-theta);
    case Family::pareto_mean_one: {
      // substitute v = (x_m/x)^alpha; integrand is smooth and vanishes at v=0
      const double xm = pareto_scale_, a = alpha_;
      return stats::adaptive_simpson(
          [&](double v) {
            return v > 0.0 ? std::exp(-theta * xm * std::pow(v, -1.0 / a)) : 0.0;
          },
          0.0, 1.0, 1e-12);
    }
    case Family::tabulated: {
      const auto& tab = table_;
      return stats::adaptive_simpson(
          [&](double u) { return std::exp(-theta * table_interp(tab, u)); }, 0.0, 1.0,
          1e-12);
    }
  }
  return 1.0;
}

std::optional<double> DistributionSpec::tail_constant() const {
  if (family_ != Family::pareto_mean_one) return std::nullopt;
  return std::pow(pareto_scale_, alpha_);
}

std::optional<double> DistributionSpec::tail_index() const {
  if (family_ != Family::pareto_mean_one) return std::nullopt;
  return alpha_;
}

std::string DistributionSpec::to_string() const {
  switch (family_) {
    case Family::exponential:
      return "exp";
    case Family::deterministic:
      return "det";
    case Family::pareto_mean_one: {
      std::ostringstream os;
      os << "pareto(alpha=" << alpha_ << ")";
      return os.str();
    }
    case Family::tabulated:
      return "table[" + std::to_string(table_.size()) + "]";
  }
  return "?";
}

MomentSummary moments(const DistributionSpec& spec, double eps, double theta) {
  MomentSummary m;
  m.variance = spec.variance();
  m.sigma_sq = m.variance;
  m.eps = eps;
  m.frac_moment = spec.frac_moment(eps);
  m.theta = theta;
  m.laplace = spec.laplace(theta);
  m.tail_constant = spec.tail_constant();
  m.tail_index = spec.tail_index();
  return m;
}

double sample_stable(double alpha, double sigma, double beta, double mu, RngStream& rng) {
  if (!(alpha > 1.0) || !(alpha < 2.0))
    throw std::invalid_argument("sample_stable: alpha must lie in (1,2)");
  if (!(sigma > 0.0)) throw std::invalid_argument("sample_stable: sigma must be positive");
  if (beta < -1.0 || beta > 1.0)
    throw std::invalid_argument("sample_stable: beta outside [-1,1]");
  const double tb = beta * std::tan(std::numbers::pi * alpha / 2.0);
  const double b0 = std::atan(tb) / alpha;
  const double s0 = std::pow(1.0 + tb * tb, 1.0 / (2.0 * alpha));
  const double v = rng.uniform(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
  const double w = rng.exponential();
  const double x = s0 * std::sin(alpha * (v + b0)) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos(v - alpha * (v + b0)) / w, (1.0 - alpha) / alpha);
  return sigma * x + mu;
}

}  // namespace hwq::dist
