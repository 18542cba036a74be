#pragma once

#include <array>
#include <string>
#include <vector>

namespace ftpellet {

// Feed-forward network weights in the self-describing text format
// documented in README.md (see data/weights_example.txt). Inference only;
// training happens elsewhere.
struct WeightFile {
  enum class Activation { identity, relu, gelu };

  struct Layer {
    int rows = 0;
    int cols = 0;
    std::vector<double> W;  // row-major, rows x cols
    std::vector<double> b;  // rows
    Activation activation = Activation::identity;
  };

  int input_dim = 0;
  std::vector<Layer> layers;

  // Input normalization ranges {lo, hi} stored with the weights so a file
  // is meaningful on its own. Defaults match the training-box convention
  // used throughout: pressures normalized by 6 MPa (6.1 for water),
  // temperature mapped from [473.15, 513.15] K.
  std::array<double, 2> norm_P_CO{0.0, 6.0};
  std::array<double, 2> norm_P_H2{0.0, 6.0};
  std::array<double, 2> norm_P_H2O{0.0, 6.1};
  std::array<double, 2> norm_T{473.15, 513.15};

  static WeightFile load(const std::string& path);  // throws SchemaError
  void save(const std::string& path) const;

  // Dimension-chain and value checks; throws SchemaError.
  void validate() const;

  // Runs the network on an already normalized input vector and applies the
  // final rectifier, so the result is always >= 0.
  double infer(const std::array<double, 4>& x) const;
};

double gelu(double x);

}  // namespace ftpellet
