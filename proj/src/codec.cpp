// SPDX-License-Identifier: Apache-2.0
#include "defcast/codec.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "defcast/errors.hpp"

namespace defcast {
namespace {

template <class... Ts> struct Overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> Overloaded(Ts...) -> Overloaded<Ts...>;

template <class F> auto with_key(const std::string& key, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind(key, 0) == 0) throw;
    key_error(key, what);
  }
}

Json coords_json(const std::vector<std::size_t>& coords) {
  Json out = Json::array();
  for (auto c : coords) out.push_back(c);
  return out;
}

std::vector<std::size_t> read_coords(ObjectReader& r, std::size_t fd, std::size_t dd) {
  const bool has_on = r.has("on");
  const bool has_coords = r.has("coords");
  if (has_on && has_coords) key_error(r.key_path("on"), "give either 'on' or 'coords', not both");
  std::vector<std::size_t> coords;
  if (has_coords) {
    const Json& list = r.raw("coords");
    if (!list.is_array() || list.empty()) key_error(r.key_path("coords"), "expected a non-empty array of indices");
    for (const auto& c : list) {
      if (!c.is_number_unsigned()) key_error(r.key_path("coords"), "indices must be non-negative integers");
      const auto idx = c.get<std::size_t>();
      if (idx >= fd + dd) {
        key_error(r.key_path("coords"), "index " + std::to_string(idx) + " out of range for " +
                                            std::to_string(fd + dd) + " coordinates");
      }
      coords.push_back(idx);
    }
    return coords;
  }
  const std::string on = r.string_or("on", "fx");
  std::size_t begin = 0;
  std::size_t end = fd + dd;
  if (on == "f") {
    end = fd;
  } else if (on == "x") {
    begin = fd;
  } else if (on != "fx") {
    key_error(r.key_path("on"), "expected 'f', 'x' or 'fx', got '" + on + "'");
  }
  if (begin == end) key_error(r.key_path("on"), "selects no coordinates (datum_dim is 0)");
  for (std::size_t c = begin; c < end; ++c) coords.push_back(c);
  return coords;
}

void need_object(const Json& j, const std::string& path) {
  if (!j.is_object()) key_error(path, "expected an object");
}

} // namespace

void key_error(const std::string& key, const std::string& message) { throw ValidationError(key + ": " + message); }

ObjectReader::ObjectReader(const Json& json, std::string path) : json_(json), path_(std::move(path)) {
  need_object(json_, path_);
}

bool ObjectReader::has(const std::string& key) const { return json_.contains(key); }

std::string ObjectReader::key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

const Json& ObjectReader::raw(const std::string& key) {
  if (!json_.contains(key)) key_error(key_path(key), "missing required key");
  used_.push_back(key);
  return json_.at(key);
}

double ObjectReader::number(const std::string& key) {
  const Json& v = raw(key);
  if (!v.is_number()) key_error(key_path(key), "expected a number");
  return v.get<double>();
}

double ObjectReader::number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

std::int64_t ObjectReader::integer(const std::string& key) {
  const Json& v = raw(key);
  if (!v.is_number_integer()) key_error(key_path(key), "expected an integer");
  return v.get<std::int64_t>();
}

std::int64_t ObjectReader::integer_or(const std::string& key, std::int64_t fallback) {
  return has(key) ? integer(key) : fallback;
}

std::uint64_t ObjectReader::unsigned_or(const std::string& key, std::uint64_t fallback) {
  if (!has(key)) return fallback;
  const Json& v = raw(key);
  if (!v.is_number_unsigned()) key_error(key_path(key), "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string ObjectReader::string(const std::string& key) {
  const Json& v = raw(key);
  if (!v.is_string()) key_error(key_path(key), "expected a string");
  return v.get<std::string>();
}

std::string ObjectReader::string_or(const std::string& key, const std::string& fallback) {
  return has(key) ? string(key) : fallback;
}

bool ObjectReader::boolean_or(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const Json& v = raw(key);
  if (!v.is_boolean()) key_error(key_path(key), "expected true or false");
  return v.get<bool>();
}

std::vector<double> ObjectReader::numbers(const std::string& key) {
  const Json& v = raw(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) key_error(key_path(key), "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) key_error(key_path(key), "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<double> ObjectReader::numbers_or(const std::string& key, std::vector<double> fallback) {
  return has(key) ? numbers(key) : std::move(fallback);
}

void ObjectReader::finish() const {
  for (const auto& item : json_.items()) {
    if (std::find(used_.begin(), used_.end(), item.key()) == used_.end()) key_error(key_path(item.key()), "unknown key");
  }
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (double c : v) out.push_back(c);
  return out;
}

Vector vector_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return Vector{j.get<double>()};
  if (!j.is_array()) key_error(path, "expected an array of numbers");
  Vector v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) key_error(path, "expected an array of numbers");
    v[k] = j[k].get<double>();
  }
  return v;
}

Json to_json(const Box& box) {
  Json out = Json::array();
  for (const auto& s : box.sides) out.push_back(Json::array({s.lo, s.hi}));
  return out;
}

Box box_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) key_error(path, "expected an array of [lo, hi] pairs");
  Box b;
  for (const auto& side : j) {
    if (!side.is_array() || side.size() != 2 || !side[0].is_number() || !side[1].is_number()) {
      key_error(path, "expected an array of [lo, hi] pairs");
    }
    const double lo = side[0].get<double>();
    const double hi = side[1].get<double>();
    if (!(lo <= hi)) key_error(path, "each side needs lo <= hi");
    b.sides.push_back({lo, hi});
  }
  return b;
}

Json to_json(const ProtocolSpec& protocol) {
  Json out;
  out["type"] = to_string(protocol.kind());
  switch (protocol.kind()) {
    case ProtocolKind::Binary: break;
    case ProtocolKind::MultiClass: out["m"] = protocol.classes(); break;
    case ProtocolKind::BoundedRegression:
    case ProtocolKind::MeanVariance:
      out["A"] = protocol.lo();
      out["B"] = protocol.hi();
      break;
  }
  return out;
}

ProtocolSpec protocol_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string type = r.string("type");
  ProtocolSpec out = ProtocolSpec::binary();
  if (type == "binary") {
  } else if (type == "multiclass") {
    const auto m = r.integer("m");
    out = with_key(r.key_path("m"), [&] { return ProtocolSpec::multi_class(m < 0 ? 0 : static_cast<std::size_t>(m)); });
  } else if (type == "bounded_regression" || type == "mean_variance") {
    const double a = r.number("A");
    const double b = r.number("B");
    out = with_key(r.key_path("B"), [&] {
      return type == "mean_variance" ? ProtocolSpec::mean_variance(a, b) : ProtocolSpec::bounded_regression(a, b);
    });
  } else {
    key_error(r.key_path("type"), "unknown protocol '" + type +
                                      "' (binary, bounded_regression, multiclass, mean_variance)");
  }
  r.finish();
  return out;
}

Json to_json(const Kernel& kernel) {
  namespace kf = kernel_family;
  return std::visit(Overloaded{
                        [](const kf::Constant& k) {
                          Json o;
                          o["family"] = "constant";
                          o["c"] = k.value;
                          return o;
                        },
                        [](const kf::GaussianRbf& k) {
                          Json o;
                          o["family"] = "gaussian_rbf";
                          o["bandwidth"] = k.bandwidth;
                          o["coords"] = coords_json(k.coords);
                          return o;
                        },
                        [](const kf::SobolevExp& k) {
                          Json o;
                          o["family"] = "sobolev_exp";
                          o["coords"] = coords_json(k.coords);
                          return o;
                        },
                        [](const kf::Linear& k) {
                          Json o;
                          o["family"] = "linear";
                          o["offset"] = k.offset;
                          o["coords"] = coords_json(k.coords);
                          return o;
                        },
                        [](const kf::Product& k) {
                          Json o;
                          o["family"] = "product";
                          o["factors"] = Json::array();
                          for (const auto& f : k.factors) o["factors"].push_back(to_json(f));
                          return o;
                        },
                        [](const kf::Sum& k) {
                          Json o;
                          o["family"] = "sum";
                          o["terms"] = Json::array();
                          for (const auto& t : k.terms) o["terms"].push_back(to_json(t));
                          o["weights"] = k.weights;
                          return o;
                        },
                    },
                    kernel.family());
}

Kernel kernel_from_json(const Json& j, std::size_t fd, std::size_t dd, const std::string& path) {
  ObjectReader r(j, path);
  const std::string family = r.string("family");
  auto build = [&]() -> Kernel {
    if (family == "constant") {
      const double c = r.number_or("c", 1.0);
      return with_key(r.key_path("c"), [&] { return Kernel::constant(c, fd, dd); });
    }
    if (family == "gaussian_rbf") {
      const double bw = r.number("bandwidth");
      auto coords = read_coords(r, fd, dd);
      return with_key(r.key_path("bandwidth"), [&] { return Kernel::gaussian_rbf(bw, fd, dd, coords); });
    }
    if (family == "sobolev_exp") {
      auto coords = read_coords(r, fd, dd);
      return with_key(path, [&] { return Kernel::sobolev_exp(fd, dd, coords); });
    }
    if (family == "linear") {
      const double offset = r.number_or("offset", 0.0);
      auto coords = read_coords(r, fd, dd);
      return with_key(r.key_path("offset"), [&] { return Kernel::linear(offset, fd, dd, coords); });
    }
    if (family == "product") {
      const Json& list = r.raw("factors");
      if (!list.is_array() || list.empty()) key_error(r.key_path("factors"), "expected a non-empty array of kernels");
      std::vector<Kernel> factors;
      for (std::size_t k = 0; k < list.size(); ++k) {
        factors.push_back(kernel_from_json(list[k], fd, dd, r.key_path("factors") + "[" + std::to_string(k) + "]"));
      }
      return with_key(r.key_path("factors"), [&] { return Kernel::product(std::move(factors)); });
    }
    if (family == "sum") {
      const Json& list = r.raw("terms");
      if (!list.is_array() || list.empty()) key_error(r.key_path("terms"), "expected a non-empty array of kernels");
      std::vector<Kernel> terms;
      for (std::size_t k = 0; k < list.size(); ++k) {
        terms.push_back(kernel_from_json(list[k], fd, dd, r.key_path("terms") + "[" + std::to_string(k) + "]"));
      }
      auto weights = r.numbers_or("weights", std::vector<double>(terms.size(), 1.0));
      return with_key(r.key_path("weights"), [&] { return Kernel::sum(std::move(terms), std::move(weights)); });
    }
    key_error(r.key_path("family"), "unknown kernel family '" + family +
                                        "' (constant, gaussian_rbf, sobolev_exp, linear, product, sum)");
  };
  Kernel out = build();
  r.finish();
  return out;
}

Json to_json(const SolverConfig& solver) {
  Json o;
  o["field_tol"] = solver.field_tol;
  o["max_iters"] = solver.max_iters;
  o["step"] = solver.step;
  o["grid_resolution"] = solver.grid_resolution;
  return o;
}

SolverConfig solver_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  SolverConfig s;
  s.field_tol = r.number_or("field_tol", s.field_tol);
  s.max_iters = static_cast<int>(r.integer_or("max_iters", s.max_iters));
  s.step = r.number_or("step", s.step);
  s.grid_resolution = static_cast<int>(r.integer_or("grid_resolution", s.grid_resolution));
  r.finish();
  with_key(path, [&] { s.validate(); });
  return s;
}

Json to_json(const ForecasterSpec& forecaster) {
  Json o;
  o["type"] = to_string(forecaster.kind);
  if (forecaster.kind == ForecasterSpec::Kind::Constant) o["value"] = to_json(forecaster.value);
  return o;
}

ForecasterSpec forecaster_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  ForecasterSpec out;
  const std::string type = r.string_or("type", "k29");
  if (type == "k29") {
    out.kind = ForecasterSpec::Kind::K29;
  } else if (type == "constant") {
    out.kind = ForecasterSpec::Kind::Constant;
    out.value = vector_from_json(r.raw("value"), r.key_path("value"));
  } else {
    key_error(r.key_path("type"), "unknown forecaster '" + type + "' (k29, constant)");
  }
  r.finish();
  return out;
}

Json to_json(const SkepticSpec& skeptic) {
  Json o;
  o["type"] = to_string(skeptic.kind);
  if (skeptic.kind == SkepticKind::Exploit) o["C"] = skeptic.scale;
  o["initial_capital"] = skeptic.initial_capital;
  return o;
}

SkepticSpec skeptic_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  SkepticSpec out;
  const std::string type = r.string_or("type", "wlln");
  if (type == "wlln") {
    out.kind = SkepticKind::Wlln;
  } else if (type == "exploit") {
    out.kind = SkepticKind::Exploit;
    out.scale = r.number("C");
    if (!(out.scale > 0.0)) key_error(r.key_path("C"), "must be > 0");
  } else if (type == "null") {
    out.kind = SkepticKind::Null;
  } else {
    key_error(r.key_path("type"), "unknown skeptic '" + type + "' (wlln, exploit, null)");
  }
  out.initial_capital = r.number_or("initial_capital", 0.0);
  r.finish();
  return out;
}

Json to_json(const LinkSpec& link) {
  Json o;
  o["type"] = to_string(link.kind);
  switch (link.kind) {
    case LinkSpec::Kind::Constant: o["probs"] = link.probs; break;
    case LinkSpec::Kind::Logistic:
      o["weights"] = link.weights;
      o["bias"] = link.biases.empty() ? 0.0 : link.biases.front();
      break;
    case LinkSpec::Kind::Piecewise:
      o["thresholds"] = link.thresholds;
      o["values"] = link.values;
      break;
    case LinkSpec::Kind::Softmax:
      o["weights"] = link.weights;
      o["biases"] = link.biases;
      break;
  }
  return o;
}

LinkSpec link_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  LinkSpec out;
  const std::string type = r.string("type");
  if (type == "constant") {
    out.kind = LinkSpec::Kind::Constant;
    if (r.has("p") && r.has("probs")) key_error(r.key_path("p"), "give either 'p' or 'probs'");
    out.probs = r.has("p") ? r.numbers("p") : r.numbers("probs");
  } else if (type == "logistic") {
    out.kind = LinkSpec::Kind::Logistic;
    out.weights = r.numbers("weights");
    out.biases = {r.number_or("bias", 0.0)};
  } else if (type == "piecewise") {
    out.kind = LinkSpec::Kind::Piecewise;
    out.thresholds = r.numbers_or("thresholds", {});
    out.values = r.numbers("values");
  } else if (type == "softmax") {
    out.kind = LinkSpec::Kind::Softmax;
    out.weights = r.numbers("weights");
    out.biases = r.numbers("biases");
  } else {
    key_error(r.key_path("type"), "unknown link '" + type + "' (constant, logistic, piecewise, softmax)");
  }
  r.finish();
  return out;
}

namespace {

Json datum_json(const DatumSpec& d) {
  Json o;
  o["uniform"] = to_json(Box{d.uniform});
  return o;
}

DatumSpec datum_from_json(ObjectReader& parent) {
  if (!parent.has("datum")) return {};
  ObjectReader r(parent.raw("datum"), parent.key_path("datum"));
  DatumSpec d;
  d.uniform = box_from_json(r.raw("uniform"), r.key_path("uniform")).sides;
  r.finish();
  return d;
}

} // namespace

Json to_json(const RealitySpec& reality) {
  return std::visit(Overloaded{
                        [](const ReplaySpec& s) {
                          Json o;
                          o["source"] = "replay";
                          o["input"] = s.path;
                          return o;
                        },
                        [](const IidSpec& s) {
                          Json o;
                          o["source"] = "iid";
                          o["link"] = to_json(s.link);
                          o["datum"] = datum_json(s.datum);
                          return o;
                        },
                        [](const AdversarialSpec& s) {
                          Json o;
                          o["source"] = "adversarial";
                          o["policy"] = to_string(s.policy);
                          o["datum"] = datum_json(s.datum);
                          return o;
                        },
                    },
                    reality);
}

RealitySpec reality_from_json(const Json& j, const ProtocolSpec& protocol, std::size_t datum_dim,
                              const std::string& base_dir, const std::string& path) {
  ObjectReader r(j, path);
  const std::string source = r.string("source");
  RealitySpec out;
  if (source == "replay") {
    ReplaySpec s;
    s.path = r.string("input");
    std::filesystem::path file(s.path);
    if (file.is_relative() && !base_dir.empty()) file = std::filesystem::path(base_dir) / file;
    try {
      s.rows = load_replay_csv_file(file.string(), protocol, datum_dim);
    } catch (const ParseError& e) {
      key_error(r.key_path("input"), file.string() + ": " + e.what());
    }
    out = std::move(s);
  } else if (source == "iid") {
    IidSpec s;
    s.link = r.has("link") ? link_from_json(r.raw("link"), r.key_path("link")) : LinkSpec{};
    s.datum = datum_from_json(r);
    out = std::move(s);
  } else if (source == "adversarial") {
    AdversarialSpec s;
    const std::string policy = r.string_or("policy", "max_residual");
    if (policy == "max_residual") {
      s.policy = AdversaryPolicy::MaxResidual;
    } else if (policy == "anti_forecast") {
      s.policy = AdversaryPolicy::AntiForecast;
    } else {
      key_error(r.key_path("policy"), "unknown policy '" + policy + "' (max_residual, anti_forecast)");
    }
    s.datum = datum_from_json(r);
    out = std::move(s);
  } else {
    key_error(r.key_path("source"), "unknown source '" + source + "' (replay, iid, adversarial)");
  }
  r.finish();
  with_key(path, [&] { validate_reality(out, protocol, datum_dim); });
  return out;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace defcast
