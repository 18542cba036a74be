#include "ftpellet/weights.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ftpellet/errors.hpp"

namespace ftpellet {

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

namespace {

const char* activation_name(WeightFile::Activation a) {
  switch (a) {
    case WeightFile::Activation::identity: return "identity";
    case WeightFile::Activation::relu: return "relu";
    case WeightFile::Activation::gelu: return "gelu";
  }
  return "identity";
}

WeightFile::Activation activation_from(const std::string& name, const std::string& path) {
  if (name == "identity") return WeightFile::Activation::identity;
  if (name == "relu") return WeightFile::Activation::relu;
  if (name == "gelu") return WeightFile::Activation::gelu;
  throw SchemaError(path + ": unknown activation '" + name + "'");
}

// Pulls tokens one at a time so the format stays whitespace-agnostic.
class TokenReader {
 public:
  TokenReader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

  // '#' opens a comment running to end of line, anywhere whitespace is
  // allowed (same convention as the parameter files).
  std::string word(const char* what) {
    std::string t;
    while (in_ >> t) {
      if (t[0] == '#') {
        in_.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
        continue;
      }
      return t;
    }
    throw SchemaError(path_ + ": unexpected end of file, expected " + std::string(what));
  }

  void expect(const char* literal) {
    const std::string t = word(literal);
    if (t != literal)
      throw SchemaError(path_ + ": expected '" + literal + "', found '" + t + "'");
  }

  int integer(const char* what) {
    const std::string t = word(what);
    try {
      size_t pos = 0;
      const int v = std::stoi(t, &pos);
      if (pos != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw SchemaError(path_ + ": expected integer for " + std::string(what) +
                        ", found '" + t + "'");
    }
  }

  double real(const char* what) {
    const std::string t = word(what);
    try {
      size_t pos = 0;
      const double v = std::stod(t, &pos);
      if (pos != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw SchemaError(path_ + ": expected number for " + std::string(what) +
                        ", found '" + t + "'");
    }
  }

  bool at_end() {
    std::string t;
    while (in_ >> t) {
      if (t[0] == '#') {
        in_.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
        continue;
      }
      return false;
    }
    return true;
  }

 private:
  std::istream& in_;
  std::string path_;
};

}  // namespace

WeightFile WeightFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot open weight file");
  TokenReader tok(in, path);

  tok.expect("ftpellet_weights");
  tok.expect("v1");

  WeightFile wf;
  tok.expect("input_dim");
  wf.input_dim = tok.integer("input_dim");
  tok.expect("layers");
  const int n_layers = tok.integer("layer count");
  if (n_layers <= 0) throw SchemaError(path + ": layer count must be positive");

  for (int i = 0; i < n_layers; ++i) {
    tok.expect("layer");
    const int idx = tok.integer("layer index");
    if (idx != i)
      throw SchemaError(path + ": layer blocks must be in order, expected layer " +
                        std::to_string(i) + " found " + std::to_string(idx));
    Layer layer;
    tok.expect("rows");
    layer.rows = tok.integer("rows");
    tok.expect("cols");
    layer.cols = tok.integer("cols");
    if (layer.rows <= 0 || layer.cols <= 0)
      throw SchemaError(path + ": layer " + std::to_string(i) +
                        " has non-positive dimensions");
    tok.expect("activation");
    layer.activation = activation_from(tok.word("activation name"), path);
    tok.expect("W");
    layer.W.resize(static_cast<size_t>(layer.rows) * layer.cols);
    for (double& v : layer.W) v = tok.real("weight entry");
    tok.expect("b");
    layer.b.resize(layer.rows);
    for (double& v : layer.b) v = tok.real("bias entry");
    wf.layers.push_back(std::move(layer));
  }

  auto range = [&](const char* key, std::array<double, 2>& out) {
    tok.expect(key);
    out[0] = tok.real("range low");
    out[1] = tok.real("range high");
  };
  range("norm_P_CO", wf.norm_P_CO);
  range("norm_P_H2", wf.norm_P_H2);
  range("norm_P_H2O", wf.norm_P_H2O);
  range("norm_T", wf.norm_T);

  if (!tok.at_end()) throw SchemaError(path + ": trailing tokens after norm_T range");

  wf.validate();
  return wf;
}

void WeightFile::save(const std::string& path) const {
  validate();
  std::ostringstream out;
  out.precision(17);
  out << "ftpellet_weights v1\n";
  out << "input_dim " << input_dim << "\n";
  out << "layers " << layers.size() << "\n";
  for (size_t i = 0; i < layers.size(); ++i) {
    const Layer& l = layers[i];
    out << "layer " << i << "\n";
    out << "rows " << l.rows << "\n";
    out << "cols " << l.cols << "\n";
    out << "activation " << activation_name(l.activation) << "\n";
    out << "W";
    for (double v : l.W) out << " " << v;
    out << "\n";
    out << "b";
    for (double v : l.b) out << " " << v;
    out << "\n";
  }
  out << "norm_P_CO " << norm_P_CO[0] << " " << norm_P_CO[1] << "\n";
  out << "norm_P_H2 " << norm_P_H2[0] << " " << norm_P_H2[1] << "\n";
  out << "norm_P_H2O " << norm_P_H2O[0] << " " << norm_P_H2O[1] << "\n";
  out << "norm_T " << norm_T[0] << " " << norm_T[1] << "\n";

  std::ofstream f(path);
  if (!f) throw SchemaError(path + ": cannot open for writing");
  f << out.str();
  if (!f) throw SchemaError(path + ": write failed");
}

void WeightFile::validate() const {
  if (input_dim != 4)
    throw SchemaError("weight file: input_dim must be 4 (P_CO, P_H2, P_H2O, T), got " +
                      std::to_string(input_dim));
  if (layers.empty()) throw SchemaError("weight file: needs at least one layer");
  int expect_cols = input_dim;
  for (size_t i = 0; i < layers.size(); ++i) {
    const Layer& l = layers[i];
    const std::string tag = "weight file: layer " + std::to_string(i);
    if (l.rows <= 0 || l.cols <= 0) throw SchemaError(tag + " has non-positive dimensions");
    if (l.cols != expect_cols)
      throw SchemaError(tag + " expects " + std::to_string(l.cols) +
                        " inputs but the previous layer provides " +
                        std::to_string(expect_cols));
    if (l.W.size() != static_cast<size_t>(l.rows) * l.cols)
      throw SchemaError(tag + " weight matrix size mismatch");
    if (l.b.size() != static_cast<size_t>(l.rows))
      throw SchemaError(tag + " bias size mismatch");
    for (double v : l.W)
      if (!std::isfinite(v)) throw SchemaError(tag + " has a non-finite weight");
    for (double v : l.b)
      if (!std::isfinite(v)) throw SchemaError(tag + " has a non-finite bias");
    expect_cols = l.rows;
  }
  if (layers.back().rows != 1)
    throw SchemaError("weight file: final layer must produce a single output, got " +
                      std::to_string(layers.back().rows));
  for (const auto* r : {&norm_P_CO, &norm_P_H2, &norm_P_H2O, &norm_T}) {
    if (!std::isfinite((*r)[0]) || !std::isfinite((*r)[1]) || !((*r)[1] > (*r)[0]))
      throw SchemaError("weight file: normalization ranges must be finite with hi > lo");
  }
}

double WeightFile::infer(const std::array<double, 4>& x) const {
  std::vector<double> cur(x.begin(), x.end());
  std::vector<double> next;
  for (const Layer& l : layers) {
    next.assign(l.rows, 0.0);
    for (int r = 0; r < l.rows; ++r) {
      double acc = l.b[r];
      const double* row = l.W.data() + static_cast<size_t>(r) * l.cols;
      for (int c = 0; c < l.cols; ++c) acc += row[c] * cur[c];
      switch (l.activation) {
        case Activation::identity: break;
        case Activation::relu: acc = acc > 0.0 ? acc : 0.0; break;
        case Activation::gelu: acc = gelu(acc); break;
      }
      next[r] = acc;
    }
    cur.swap(next);
  }
  // Output rectifier: the transform downstream needs y >= 0 and every
  // backend honors that through this one exit point.
  return cur[0] > 0.0 ? cur[0] : 0.0;
}

}  // namespace ftpellet
