#include "ftpellet/params.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ftpellet/errors.hpp"

namespace ftpellet {

double ArrheniusPair::at(double T, double R) const {
  return A * std::exp(-E / (R * T));
}

namespace {

// key = value lines, # comments, blank lines ignored.
std::map<std::string, std::string> parse_kv(std::istream& in, const std::string& origin) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto notspace = [](unsigned char ch) { return !std::isspace(ch); };
    auto b = std::find_if(line.begin(), line.end(), notspace);
    if (b == line.end()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SchemaError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    auto trim = [&](std::string s) {
      auto first = std::find_if(s.begin(), s.end(), notspace);
      auto last = std::find_if(s.rbegin(), s.rend(), notspace).base();
      return first < last ? std::string(first, last) : std::string();
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw SchemaError(origin + ":" + std::to_string(lineno) + ": empty key or value");
    if (kv.count(key))
      throw SchemaError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = val;
  }
  return kv;
}

double to_double(const std::string& key, const std::string& val) {
  std::size_t pos = 0;
  double d;
  try {
    d = std::stod(val, &pos);
  } catch (const std::exception&) {
    throw SchemaError("field '" + key + "': not a number: '" + val + "'");
  }
  if (pos != val.size())
    throw SchemaError("field '" + key + "': trailing junk in '" + val + "'");
  if (!std::isfinite(d)) throw SchemaError("field '" + key + "': not finite");
  return d;
}

}  // namespace

KineticParameters KineticParameters::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open parameter file: " + path);
  auto kv = parse_kv(in, path);

  KineticParameters p;
  auto take = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw SchemaError(path + ": missing field '" + key + "'");
    double d = to_double(key, it->second);
    kv.erase(it);
    return d;
  };
  auto pair = [&](ArrheniusPair& dst, const std::string& a, const std::string& e) {
    dst.A = take(a);
    dst.E = take(e);
  };
  pair(p.K1, "A_K1", "dH_K1");
  pair(p.K2, "A_K2", "dH_K2");
  pair(p.K4, "A_K4", "dH_K4");
  pair(p.K5, "A_K5", "dH_K5");
  pair(p.K6, "A_K6", "dH_K6");
  pair(p.k3, "A_k3", "Ea_k3");
  pair(p.k7, "A_k7", "Ea_k7");
  pair(p.k7M, "A_k7M", "Ea_k7M");
  pair(p.k8_0, "A_k8_0", "Ea_k8_0");
  pair(p.k8E_0, "A_k8E_0", "Ea_k8E_0");
  p.dE = take("dE");
  p.R = take("R");
  double nmax = take("N_max");
  if (nmax != std::floor(nmax)) throw SchemaError("N_max must be an integer");
  p.N_max = static_cast<int>(nmax);

  auto unit_it = kv.find("pressure_unit");
  if (unit_it == kv.end()) throw SchemaError(path + ": missing field 'pressure_unit'");
  if (unit_it->second == "bar") {
    p.pressure_unit = PressureUnit::bar;
  } else if (unit_it->second == "MPa") {
    p.pressure_unit = PressureUnit::MPa;
  } else {
    throw SchemaError("pressure_unit must be 'bar' or 'MPa', got '" + unit_it->second + "'");
  }
  kv.erase(unit_it);

  if (!kv.empty()) throw SchemaError(path + ": unknown field '" + kv.begin()->first + "'");

  p.validate();
  return p;
}

void KineticParameters::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw SchemaError(std::string(what) + " must be > 0");
  };
  positive(K1.A, "A_K1");
  positive(K2.A, "A_K2");
  positive(K4.A, "A_K4");
  positive(K5.A, "A_K5");
  positive(K6.A, "A_K6");
  positive(k3.A, "A_k3");
  positive(k7.A, "A_k7");
  positive(k7M.A, "A_k7M");
  positive(k8_0.A, "A_k8_0");
  positive(k8E_0.A, "A_k8E_0");
  positive(dE, "dE");
  positive(R, "R");
  if (N_max < 2) throw SchemaError("N_max must be >= 2");
}

KineticParameters KineticParameters::placeholder() {
  KineticParameters p;
  p.K1 = {7.1e-7, -42000.0};
  p.K2 = {1.0e-5, -35000.0};
  p.K4 = {0.40, -6600.0};
  p.K5 = {0.30, -5700.0};
  p.K6 = {0.50, -5700.0};
  p.k3 = {1.5e6, 75000.0};
  p.k7 = {5.9e5, 70000.0};
  p.k7M = {1.18e4, 70000.0};
  p.k8_0 = {3.3e4, 65000.0};
  p.k8E_0 = {6.6e4, 65000.0};
  p.dE = 1100.0;
  p.R = 8.314;
  p.N_max = 100;
  p.pressure_unit = PressureUnit::bar;
  return p;
}

}  // namespace ftpellet
