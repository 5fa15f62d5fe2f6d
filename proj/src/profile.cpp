#include "curvlab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace curvlab::warping {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest t with log^(k)(t) > 0 is the (k-1)-fold exponential of 1.
double iterated_log_floor(int logs) {
  double tow = 1.0;
  for (int i = 1; i < logs; ++i) tow = std::exp(tow);
  return tow;
}
}  // namespace

CurvatureProfile CurvatureProfile::constant(double value) {
  CurvatureProfile p;
  p.kind_ = Kind::constant;
  p.value_ = value;
  return p;
}

CurvatureProfile CurvatureProfile::power_log(int logs, double amplitude, double t_min) {
  if (logs < 1 || logs > 6)
    throw std::invalid_argument("power_log: logs must be in [1,6]");
  if (!(amplitude > 0)) throw std::invalid_argument("power_log: amplitude must be > 0");
  CurvatureProfile p;
  p.kind_ = Kind::power_log;
  p.logs_ = logs;
  p.amplitude_ = amplitude;
  p.t_min_ = std::max(t_min, iterated_log_floor(logs) * 1.02 + 0.01);
  return p;
}

CurvatureProfile CurvatureProfile::tabulated(std::vector<double> t,
                                             std::vector<double> g) {
  if (t.size() != g.size() || t.size() < 2)
    throw std::invalid_argument("tabulated: need >= 2 matching samples");
  if (!std::is_sorted(t.begin(), t.end()))
    throw std::invalid_argument("tabulated: abscissae must be sorted");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] == t[i - 1]) throw std::invalid_argument("tabulated: repeated abscissa");
  CurvatureProfile p;
  p.kind_ = Kind::tabulated;
  p.tab_t_ = std::move(t);
  p.tab_g_ = std::move(g);
  return p;
}

CurvatureProfile CurvatureProfile::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("polynomial: empty coefficients");
  CurvatureProfile p;
  p.kind_ = Kind::closed_form;
  p.name_ = "polynomial";
  p.coeffs_ = std::move(coeffs);
  return p;
}

CurvatureProfile CurvatureProfile::affine_power(double a, double b, double p_exp) {
  CurvatureProfile p;
  p.kind_ = Kind::closed_form;
  p.name_ = "affine_pow";
  p.aff_a_ = a;
  p.aff_b_ = b;
  p.aff_p_ = p_exp;
  return p;
}

double CurvatureProfile::operator()(double t) const {
  switch (kind_) {
    case Kind::constant:
      return value_;
    case Kind::power_log: {
      const double tt = std::max(t, t_min_);
      double v = tt * tt;
      double l = tt;
      for (int i = 0; i < logs_; ++i) {
        l = std::log(l);
        v *= l * l;
      }
      return amplitude_ * v;
    }
    case Kind::tabulated: {
      if (t < tab_t_.front() || t > tab_t_.back())
        throw std::domain_error("tabulated profile evaluated outside its samples");
      auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
      std::size_t k = static_cast<std::size_t>(it - tab_t_.begin());
      if (k == 0) k = 1;
      if (k == tab_t_.size()) k = tab_t_.size() - 1;
      const double w = (t - tab_t_[k - 1]) / (tab_t_[k] - tab_t_[k - 1]);
      return tab_g_[k - 1] + w * (tab_g_[k] - tab_g_[k - 1]);
    }
    case Kind::closed_form:
      if (name_ == "polynomial") {
        double v = 0.0;
        for (std::size_t k = coeffs_.size(); k-- > 0;) v = v * t + coeffs_[k];
        return v;
      }
      if (t * aff_b_ + aff_a_ <= 0.0 && std::floor(aff_p_) != aff_p_)
        throw std::domain_error("affine_pow evaluated where the base is nonpositive");
      return std::pow(aff_a_ + aff_b_ * t, aff_p_);
  }
  throw std::logic_error("unreachable profile kind");
}

double CurvatureProfile::derivative(double t) const {
  switch (kind_) {
    case Kind::constant:
      return 0.0;
    case Kind::power_log: {
      if (t < t_min_) return 0.0;
      // logarithmic derivative: 2/t + sum_i 2 / (L_i * t * prod_{j<i} L_j)
      double ld = 2.0 / t;
      double chain = t;  // t * L_1 * ... * L_{i-1}
      double l = t;
      for (int i = 0; i < logs_; ++i) {
        l = std::log(l);
        ld += 2.0 / (chain * l);
        chain *= l;
      }
      return (*this)(t)*ld;
    }
    case Kind::tabulated: {
      if (t < tab_t_.front() || t > tab_t_.back())
        throw std::domain_error("tabulated profile evaluated outside its samples");
      auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
      std::size_t k = static_cast<std::size_t>(it - tab_t_.begin());
      if (k == 0) k = 1;
      if (k == tab_t_.size()) k = tab_t_.size() - 1;
      return (tab_g_[k] - tab_g_[k - 1]) / (tab_t_[k] - tab_t_[k - 1]);
    }
    case Kind::closed_form:
      if (name_ == "polynomial") {
        double v = 0.0;
        for (std::size_t k = coeffs_.size(); k-- > 1;)
          v = v * t + coeffs_[k] * static_cast<double>(k);
        return v;
      }
      return aff_b_ * aff_p_ * std::pow(aff_a_ + aff_b_ * t, aff_p_ - 1.0);
  }
  throw std::logic_error("unreachable profile kind");
}

Interval CurvatureProfile::domain() const {
  switch (kind_) {
    case Kind::constant:
    case Kind::power_log:
      return {-kInf, kInf};
    case Kind::tabulated:
      return {tab_t_.front(), tab_t_.back()};
    case Kind::closed_form:
      if (name_ == "polynomial") return {-kInf, kInf};
      if (std::floor(aff_p_) == aff_p_) return {-kInf, kInf};
      if (aff_b_ > 0.0) return {-aff_a_ / aff_b_, kInf};
      if (aff_b_ < 0.0) return {-kInf, -aff_a_ / aff_b_};
      return {-kInf, kInf};
  }
  throw std::logic_error("unreachable profile kind");
}

std::optional<CurvatureProfile::TailIntegral> CurvatureProfile::analytic_tail() const {
  switch (kind_) {
    case Kind::constant:
      return value_ > 0 ? std::optional(TailIntegral::divergent) : std::nullopt;
    case Kind::power_log:
      // 1/sqrt(G) ~ 1/(t log t ... log^(k) t); its integral is the next
      // iterated log, which still diverges.
      return TailIntegral::divergent;
    case Kind::tabulated:
      return std::nullopt;
    case Kind::closed_form:
      if (name_ == "polynomial") {
        std::size_t deg = 0;
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
          if (coeffs_[k] != 0.0) deg = k;
        if (coeffs_[deg] <= 0.0) return std::nullopt;
        return deg <= 2 ? TailIntegral::divergent : TailIntegral::convergent;
      }
      if (aff_b_ > 0.0 && aff_p_ > 0.0)
        return aff_p_ <= 2.0 ? TailIntegral::divergent : TailIntegral::convergent;
      if (aff_b_ == 0.0 && aff_a_ > 0.0) return TailIntegral::divergent;
      return std::nullopt;
  }
  return std::nullopt;
}

bool CurvatureProfile::looks_even(double span) const {
  const Interval dom = domain();
  const double s = std::min({span, dom.hi, -dom.lo});
  if (!(s > 0)) return false;
  for (int i = 1; i <= 8; ++i) {
    const double t = s * i / 8.0;
    const double a = (*this)(t), b = (*this)(-t);
    if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a))) return false;
  }
  return true;
}

nlohmann::json CurvatureProfile::to_json() const {
  using nlohmann::json;
  switch (kind_) {
    case Kind::constant:
      return json{{"kind", "constant"}, {"value", value_}};
    case Kind::power_log:
      return json{{"kind", "power_log"},
                  {"logs", logs_},
                  {"amplitude", amplitude_},
                  {"t_min", t_min_}};
    case Kind::tabulated:
      return json{{"kind", "tabulated"}, {"t", tab_t_}, {"g", tab_g_}};
    case Kind::closed_form:
      if (name_ == "polynomial")
        return json{{"kind", "closed_form"}, {"name", "polynomial"}, {"coeffs", coeffs_}};
      return json{{"kind", "closed_form"},
                  {"name", "affine_pow"},
                  {"a", aff_a_},
                  {"b", aff_b_},
                  {"p", aff_p_}};
  }
  throw std::logic_error("unreachable profile kind");
}

CurvatureProfile CurvatureProfile::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw std::invalid_argument("profile: missing string field 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  auto need = [&](const char* field) -> const nlohmann::json& {
    if (!j.contains(field))
      throw std::invalid_argument(std::string("profile(") + kind +
                                  "): missing field '" + field + "'");
    return j.at(field);
  };
  if (kind == "constant") return constant(need("value").get<double>());
  if (kind == "power_log")
    return power_log(need("logs").get<int>(), j.value("amplitude", 1.0),
                     j.value("t_min", 3.0));
  if (kind == "tabulated")
    return tabulated(need("t").get<std::vector<double>>(),
                     need("g").get<std::vector<double>>());
  if (kind == "closed_form") {
    const std::string name = need("name").get<std::string>();
    if (name == "polynomial")
      return polynomial(need("coeffs").get<std::vector<double>>());
    if (name == "affine_pow")
      return affine_power(need("a").get<double>(), need("b").get<double>(),
                          need("p").get<double>());
    throw std::invalid_argument("profile: unknown closed_form name '" + name + "'");
  }
  throw std::invalid_argument("profile: unknown kind '" + kind + "'");
}

}  // namespace curvlab::warping
