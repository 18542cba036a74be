#pragma once

#include <string>

namespace ftpellet {

enum class PressureUnit { bar, MPa };

// One Arrhenius-type pair. For equilibrium constants E holds the reaction
// enthalpy dH (typically negative, adsorption); for rate constants it holds
// the activation energy Ea (positive). Either way the evaluated constant is
// A * exp(-E / (R*T)).
struct ArrheniusPair {
  double A = 0.0;
  double E = 0.0;

  double at(double T, double R) const;
};

// Full parameter set of the CO-insertion microkinetics model plus the
// series truncation length. Loaded from a flat key/value file; see
// data/params_placeholder.txt for the schema and field-by-field docs.
struct KineticParameters {
  ArrheniusPair K1, K2, K4, K5, K6;         // adsorption equilibria (A, dH)
  ArrheniusPair k3, k7, k7M, k8_0, k8E_0;   // rate constants (A, Ea)
  double dE = 0.0;                          // chain-length energy increment, J/mol
  double R = 8.314;                         // J/(mol K)
  int N_max = 100;                          // product-sum truncation
  PressureUnit pressure_unit = PressureUnit::bar;

  // Throws SchemaError on unknown/missing/duplicate keys or invalid values.
  static KineticParameters load(const std::string& path);

  // The calibrated placeholder set shipped in data/params_placeholder.txt,
  // compiled in so tests and default CLI runs need no file lookup.
  static KineticParameters placeholder();

  // Enforces positivity and range invariants; throws SchemaError.
  void validate() const;

  // Factor converting a pressure in this parameter set's unit to bar.
  double unit_to_bar() const { return pressure_unit == PressureUnit::bar ? 1.0 : 10.0; }
};

}  // namespace ftpellet
