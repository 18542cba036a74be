#include "ftpellet/surrogate.hpp"

#include <cmath>
#include <stdexcept>

#include "ftpellet/errors.hpp"
#include "ftpellet/site_solver.hpp"

namespace ftpellet {

NormalizedInput normalize_conditions(const Conditions& cond, const KineticParameters& params,
                                     const std::array<double, 2>& r_CO,
                                     const std::array<double, 2>& r_H2,
                                     const std::array<double, 2>& r_H2O,
                                     const std::array<double, 2>& r_T) {
  const double to_mpa = params.unit_to_bar() / 10.0;
  NormalizedInput in;
  const std::array<double, 4> raw = {cond.P_CO * to_mpa, cond.P_H2 * to_mpa,
                                     cond.P_H2O * to_mpa, cond.T};
  const std::array<const std::array<double, 2>*, 4> ranges = {&r_CO, &r_H2, &r_H2O, &r_T};
  for (int i = 0; i < 4; ++i) {
    const auto& r = *ranges[i];
    in.x[i] = (raw[i] - r[0]) / (r[1] - r[0]);
    if (in.x[i] < 0.0 || in.x[i] > 1.0) in.out_of_box = true;
  }
  return in;
}

double sigma_estimate(const AggregatedCoefficients& k, double y) {
  if (!(y >= 0.0)) throw OutOfRange("surrogate transform needs y >= 0");
  if (k.kappa_par_long == 0.0)
    throw DegenerateConditions("surrogate transform needs P_H2 > 0");
  const double kpl = k.kappa_par_long;
  return kpl / (k.c0 * kpl + k.cS * k.alpha1 * (kpl + k.kappa_growth * y));
}

double alpha2_tilde(const AggregatedCoefficients& k, double sigma_value) {
  if (k.kappa_growth == 0.0) return 0.0;
  return alpha_n(k, sigma_value, 2);
}

double transform_G(const AggregatedCoefficients& k, double y) {
  const double sigma = sigma_estimate(k, y);
  const double a2t = alpha2_tilde(k, sigma);
  const double kpl = k.kappa_par_long;
  return kpl /
         (k.c0 * kpl + k.cS * k.alpha1 * (kpl + a2t * (kpl + k.kappa_growth * y)));
}

double transform_G_reference(const AggregatedCoefficients& k, double y) {
  if (!(y >= 0.0)) throw OutOfRange("surrogate transform needs y >= 0");
  if (!(k.eps > 0.0))
    throw DegenerateConditions("reference transform divides by eps, needs eps > 0");
  const double sigma = 1.0 / (k.c0 + k.cS * k.alpha1 * (1.0 + y / k.eps));
  const double a2t = alpha2_tilde(k, sigma);
  return 1.0 / (k.c0 + k.cS * k.alpha1 * (1.0 + a2t * (1.0 + y / k.eps)));
}

double invert_G(const AggregatedCoefficients& k, double S_target, double tol) {
  if (!(S_target > 0.0)) throw OutOfRange("invert_G needs S_target > 0");
  const double g0 = transform_G(k, 0.0);
  if (S_target > g0)
    throw OutOfRange("S_target above G(0); no y >= 0 reaches it");
  if (S_target == g0) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  while (transform_G(k, hi) > S_target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e18)
      throw NoBracket("G never drops to S_target below y = 1e18; target below the plateau floor");
  }
  while (hi - lo > tol * (hi > 1.0 ? hi : 1.0)) {
    const double mid = 0.5 * (lo + hi);
    if (transform_G(k, mid) > S_target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

NetworkModel::NetworkModel(WeightFile w) : weights(std::move(w)) { weights.validate(); }

double NetworkModel::raw_output(const NormalizedInput& in) const { return weights.infer(in.x); }

double ExactInverse::raw_output(const NormalizedInput& in) const {
  // Undo the default normalization, solve the true site balance, then map
  // the answer back through the transform's inverse. Feeding this model to
  // TransformedSiteBackend must reproduce the direct solver to round-off.
  const double to_unit = 10.0 / params->unit_to_bar();
  Conditions cond;
  cond.P_CO = (0.0 + in.x[0] * 6.0) * to_unit;
  cond.P_H2 = (0.0 + in.x[1] * 6.0) * to_unit;
  cond.P_H2O = (0.0 + in.x[2] * 6.1) * to_unit;
  cond.T = 473.15 + in.x[3] * (513.15 - 473.15);
  const AggregatedCoefficients k = aggregate(*params, cond);
  const double S = solve_site_fraction(k, tol).S;
  return invert_G(k, S);
}

double ExactSiteBackend::site_fraction(const KineticParameters& params,
                                       const Conditions& cond) const {
  return solve_site_fraction(params, cond, tol).S;
}

double TransformedSiteBackend::site_fraction(const KineticParameters& params,
                                             const Conditions& cond) const {
  const AggregatedCoefficients k = aggregate(params, cond);
  const double y = raw->raw_output(normalize_conditions(cond, params));
  return transform_G(k, y);
}

double Baseline10ySiteBackend::site_fraction(const KineticParameters& params,
                                             const Conditions& cond) const {
  const double y = raw->raw_output(normalize_conditions(cond, params));
  return std::pow(10.0, y);
}

std::shared_ptr<SiteBackend> make_backend(const std::string& selector,
                                          const std::string& weights_path) {
  auto parse_y0 = [&](const std::string& text) {
    try {
      size_t pos = 0;
      const double v = std::stod(text, &pos);
      if (pos != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw SchemaError("backend selector: cannot parse y0 from '" + text + "'");
    }
  };

  std::string head = selector;
  std::string arg;
  if (const auto colon = selector.find(':'); colon != std::string::npos) {
    head = selector.substr(0, colon);
    arg = selector.substr(colon + 1);
  }

  if (head == "exact") {
    if (!arg.empty()) throw SchemaError("backend selector: 'exact' takes no argument");
    return std::make_shared<ExactSiteBackend>();
  }
  if (head == "plateau") {
    const double y0 = arg.empty() ? 0.5 : parse_y0(arg);
    return std::make_shared<TransformedSiteBackend>(std::make_shared<PlateauStub>(y0));
  }
  if (head == "baseline10y") {
    const double y0 = arg.empty() ? 0.5 : parse_y0(arg);
    return std::make_shared<Baseline10ySiteBackend>(std::make_shared<PlateauStub>(y0));
  }
  if (head == "weights") {
    const std::string path = arg.empty() ? weights_path : arg;
    if (path.empty())
      throw SchemaError("backend selector: 'weights' needs a path (weights:<path> or --weights)");
    return std::make_shared<TransformedSiteBackend>(
        std::make_shared<NetworkModel>(WeightFile::load(path)));
  }
  throw SchemaError("backend selector: unknown backend '" + selector + "'");
}

}  // namespace ftpellet
