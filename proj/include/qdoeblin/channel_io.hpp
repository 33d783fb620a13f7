#pragma once

// Channel descriptions: builtin families by name + numeric parameters, and
// the JSON channel file format
//   {"d_in": 2, "d_out": 2, "kraus": [[[re, im], ...], ...]}
//   {"name": "gad", "params": {"p": 0.3, "eta": 0.6}}
// Kraus operators are stored row-major, d_out*d_in entries each.

#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "qdoeblin/channel.hpp"
#include "qdoeblin/error.hpp"
#include "qdoeblin/oracles.hpp"

namespace qdoeblin {

using ParamMap = std::map<std::string, double>;

inline const std::vector<std::string>& builtin_channels() {
  static const std::vector<std::string> names = {
      "identity", "depolarizing", "transpose_depolarizing", "erasure", "gad",
      "bitflip", "dephasing", "pauli", "werner_holevo", "replacer",
      "generalized_depolarizing", "random"};
  return names;
}

namespace detail {

inline double param(const ParamMap& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw InvalidInput("missing channel parameter '" + key + "'");
  return it->second;
}

inline double param_or(const ParamMap& m, const std::string& key, double fallback) {
  auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

inline int int_param(const ParamMap& m, const std::string& key, int fallback) {
  const double v = param_or(m, key, fallback);
  if (v != std::floor(v)) throw InvalidInput("parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

/// Qubit state from Bloch parameters rx, ry, rz (default: maximally mixed);
/// maximally mixed for d > 2.
inline ComplexMatrix state_param(const ParamMap& m, int d) {
  if (d != 2) {
    if (m.count("rx") || m.count("ry") || m.count("rz"))
      throw InvalidInput("Bloch parameters rx, ry, rz only apply to d = 2");
    return ComplexMatrix::Identity(d, d) / double(d);
  }
  const Bloch r(param_or(m, "rx", 0.0), param_or(m, "ry", 0.0), param_or(m, "rz", 0.0));
  if (r.norm() > 1.0 + 1e-12) throw InvalidParameter("Bloch vector must have norm <= 1");
  return bloch_state(r);
}

}  // namespace detail

inline QuantumChannel make_channel(const std::string& name, const ParamMap& params) {
  using detail::param;
  const int d = detail::int_param(params, "d", 2);
  if (name == "identity") return identity_channel(d);
  if (name == "depolarizing") return depolarizing(param(params, "p"), d);
  if (name == "transpose_depolarizing") return transpose_depolarizing(param(params, "q"), d);
  if (name == "erasure") return erasure(param(params, "eps"), d);
  if (name == "gad") return gad(param(params, "p"), param(params, "eta"));
  if (name == "bitflip") return bitflip(param(params, "p"));
  if (name == "dephasing") return dephasing(param(params, "b"));
  if (name == "pauli") {
    const double px = detail::param_or(params, "px", 0.0);
    const double py = detail::param_or(params, "py", 0.0);
    const double pz = detail::param_or(params, "pz", 0.0);
    return pauli_channel({1.0 - px - py - pz, px, py, pz});
  }
  if (name == "werner_holevo") return werner_holevo(d);
  if (name == "replacer") return replacer(detail::state_param(params, d), d);
  if (name == "generalized_depolarizing")
    return generalized_depolarizing(param(params, "p"), detail::state_param(params, d));
  if (name == "random")
    return random_channel(detail::int_param(params, "d_in", d),
                          detail::int_param(params, "d_out", d),
                          detail::int_param(params, "env", 4),
                          static_cast<std::uint64_t>(detail::int_param(params, "seed", 1)));
  std::string list;
  for (const auto& n : builtin_channels()) list += (list.empty() ? "" : ", ") + n;
  throw InvalidInput("unknown channel '" + name + "' (known: " + list + ")");
}

inline QuantumChannel channel_from_json(const nlohmann::json& j) {
  try {
    if (j.contains("name")) {
      ParamMap params;
      if (j.contains("params"))
        for (const auto& [key, value] : j.at("params").items())
          params[key] = value.get<double>();
      return make_channel(j.at("name").get<std::string>(), params);
    }
    const int d_in = j.at("d_in").get<int>();
    const int d_out = j.at("d_out").get<int>();
    std::vector<ComplexMatrix> kraus;
    for (const auto& op : j.at("kraus")) {
      if (op.size() != static_cast<std::size_t>(d_in * d_out))
        throw InvalidInput("channel file: Kraus operator needs d_out*d_in entries");
      ComplexMatrix a(d_out, d_in);
      for (int r = 0; r < d_out; ++r)
        for (int c = 0; c < d_in; ++c) {
          const auto& z = op.at(static_cast<std::size_t>(r * d_in + c));
          a(r, c) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
        }
      kraus.push_back(std::move(a));
    }
    return QuantumChannel::from_kraus(std::move(kraus), d_in, d_out);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("channel file: ") + e.what());
  }
}

inline nlohmann::json channel_to_json(const QuantumChannel& n) {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& a : n.kraus()) {
    nlohmann::json op = nlohmann::json::array();
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c) op.push_back({a(r, c).real(), a(r, c).imag()});
    ops.push_back(std::move(op));
  }
  return {{"d_in", n.d_in()}, {"d_out", n.d_out()}, {"kraus", std::move(ops)}};
}

inline QuantumChannel load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open channel file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("channel file '" + path + "': " + e.what());
  }
  return channel_from_json(j);
}

}  // namespace qdoeblin
