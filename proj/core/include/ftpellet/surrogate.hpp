#pragma once

#include <array>
#include <memory>
#include <string>

#include "ftpellet/kinetics.hpp"
#include "ftpellet/weights.hpp"

namespace ftpellet {

// Conditions mapped into the surrogate's normalized input box. Values
// outside [0, 1] are kept as-is (extrapolation is allowed and sometimes
// the point), but flagged.
struct NormalizedInput {
  std::array<double, 4> x{0.0, 0.0, 0.0, 0.0};  // x_CO, x_H2, x_H2O, x_T
  bool out_of_box = false;
};

// Normalizes pressures (converted to MPa from the parameter unit) and
// temperature by the given ranges.
NormalizedInput normalize_conditions(const Conditions& cond, const KineticParameters& params,
                                     const std::array<double, 2>& r_CO = {0.0, 6.0},
                                     const std::array<double, 2>& r_H2 = {0.0, 6.0},
                                     const std::array<double, 2>& r_H2O = {0.0, 6.1},
                                     const std::array<double, 2>& r_T = {473.15, 513.15});

// First-stage site estimate around which the output transform is built:
// sigma(y) = 1/(c0 + cS*alpha1*(1 + y/eps)). Decreasing in y, equals the
// site balance's solution structure with the whole chain series replaced
// by 1 + y/eps. Throws DegenerateConditions when eps = 0.
double sigma_estimate(const AggregatedCoefficients& k, double y);

// Second growth probability evaluated at S = sigma instead of the true S.
double alpha2_tilde(const AggregatedCoefficients& k, double sigma_value);

// The output transform: maps a bounded raw surrogate output y >= 0 to a
// site fraction that keeps the exact S ~ P_H2^2 low-pressure asymptotics
// regardless of what y does. Implemented in the division-free-in-eps form
//
//   G(y) = kpl / (c0*kpl + cS*alpha1*(kpl + a2t*(kpl + kg*y)))
//
// with a2t = alpha2_tilde(sigma(y)), which stays finite as eps -> 0.
// Strictly decreasing in y with range (G_inf, G(0)].
double transform_G(const AggregatedCoefficients& k, double y);

// Textbook form of the same map, kept for the equivalence test. Divides
// by eps, so it loses digits in the deep asymptotic regime.
double transform_G_reference(const AggregatedCoefficients& k, double y);

// Inverse of transform_G on y >= 0: finds y with G(y) = S_target by
// doubling the bracket then bisecting. Throws OutOfRange when
// S_target > G(0) or S_target <= 0, NoBracket when no crossing is found
// below y = 1e18 (S_target at or below the y -> inf limit of G).
double invert_G(const AggregatedCoefficients& k, double S_target, double tol = 1e-14);

// Raw surrogate backends: anything that turns normalized conditions into
// a non-negative scalar. The rectifier is part of the contract.
struct RawModel {
  virtual ~RawModel() = default;
  virtual double raw_output(const NormalizedInput& in) const = 0;
};

// Constant output regardless of input. Stress stub for the asymptotics
// tests and the baseline-transform failure demo.
struct PlateauStub final : RawModel {
  double y0;
  explicit PlateauStub(double y) : y0(y) {}
  double raw_output(const NormalizedInput&) const override { return y0; }
};

// Loaded network weights.
struct NetworkModel final : RawModel {
  WeightFile weights;
  explicit NetworkModel(WeightFile w);
  double raw_output(const NormalizedInput& in) const override;
};

// Wraps the exact site solver as a raw model: y = invert_G(S_true), so
// G(raw_output(..)) reproduces the solver to round-off. The reference
// oracle the transform is validated against.
struct ExactInverse final : RawModel {
  const KineticParameters* params;
  double tol;
  explicit ExactInverse(const KineticParameters& p, double solver_tol = 1e-12)
      : params(&p), tol(solver_tol) {}
  double raw_output(const NormalizedInput& in) const override;
};

// What the pellet solver consumes: site fraction as a function of local
// conditions.
struct SiteBackend {
  virtual ~SiteBackend() = default;
  virtual double site_fraction(const KineticParameters& params, const Conditions& cond) const = 0;
  virtual const char* name() const = 0;
};

// Direct nonlinear solve at every call. The reference backend.
struct ExactSiteBackend final : SiteBackend {
  double tol;
  explicit ExactSiteBackend(double solver_tol = 1e-12) : tol(solver_tol) {}
  double site_fraction(const KineticParameters& params, const Conditions& cond) const override;
  const char* name() const override { return "exact"; }
};

// Raw model routed through the output transform G.
struct TransformedSiteBackend final : SiteBackend {
  std::shared_ptr<const RawModel> raw;
  explicit TransformedSiteBackend(std::shared_ptr<const RawModel> m) : raw(std::move(m)) {}
  double site_fraction(const KineticParameters& params, const Conditions& cond) const override;
  const char* name() const override { return "transformed"; }
};

// Raw model routed through the naive 10^y output map. No asymptotics
// enforcement; exists to demonstrate the failure mode.
struct Baseline10ySiteBackend final : SiteBackend {
  std::shared_ptr<const RawModel> raw;
  explicit Baseline10ySiteBackend(std::shared_ptr<const RawModel> m) : raw(std::move(m)) {}
  double site_fraction(const KineticParameters& params, const Conditions& cond) const override;
  const char* name() const override { return "baseline10y"; }
};

// Parses a backend selector string:
//   "exact"             reference solver
//   "plateau"           constant stub (y0 = 0.5) through G
//   "plateau:<y0>"      constant stub through G
//   "baseline10y"       constant stub (y0 = 0.5) through 10^y
//   "baseline10y:<y0>"  same with explicit y0
//   "weights"           network through G; path supplied separately
//   "weights:<path>"    network through G, path inline
// Throws SchemaError on anything else or when a needed path is missing.
std::shared_ptr<SiteBackend> make_backend(const std::string& selector,
                                          const std::string& weights_path = "");

}  // namespace ftpellet
