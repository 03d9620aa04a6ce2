#include <cmath>
#include <string>

#include "latticelab/norms.hpp"

namespace latticelab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("norm spec is missing '") + key + "'");
  return j[key];
}

double number(const nlohmann::json& v, const char* what) {
  if (!v.is_number()) throw ParseError(std::string(what) + " must be a number");
  return v.get<double>();
}

std::vector<double> numbers(const nlohmann::json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(number(e, what));
  return out;
}

double parse_p(const nlohmann::json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return kInfinity;
    throw ParseError("p must be a number or \"inf\"");
  }
  return number(v, "p");
}

}  // namespace

void to_json(nlohmann::json& j, const NormSpec& s) {
  std::visit(
      Overloaded{
          [&](const PNormNode& v) {
            j = {{"type", "pnorm"}};
            if (std::isinf(v.p)) {
              j["p"] = "inf";
            } else {
              j["p"] = v.p;
            }
            if (!v.weights.empty()) j["weights"] = v.weights;
          },
          [&](const PullbackNode& v) {
            j = {{"type", "pullback"}, {"matrix", v.matrix}, {"inner", *v.inner}};
          },
          [&](const GaugeNode& v) { j = {{"type", "gauge"}, {"body", *v.body}}; },
          [&](const RectangularizedNode& v) {
            j = {{"type", "rectangularized"}, {"inner", *v.inner}};
            if (v.mode == RectMode::kSample) {
              j["mode"] = "sample";
              j["samples"] = v.samples;
              j["seed"] = v.seed;
            }
          },
          [&](const VNormNode& v) { j = {{"type", "vnorm"}, {"inner", *v.inner}}; },
          [&](const ScaledNode& v) { j = {{"type", "scaled"}, {"c", v.c}, {"inner", *v.inner}}; }},
      s.node);
}

NormSpecPtr norm_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("norm spec must be a JSON object");
  const auto& t = field(j, "type");
  if (!t.is_string()) throw ParseError("norm spec 'type' must be a string");
  const auto type = t.get<std::string>();
  if (type == "pnorm") {
    std::vector<double> w;
    if (j.contains("weights")) w = numbers(j["weights"], "weights");
    return spec::pnorm(parse_p(field(j, "p")), std::move(w));
  }
  if (type == "pullback") {
    const auto& m = field(j, "matrix");
    if (!m.is_array()) throw ParseError("matrix must be an array of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& r : m) rows.push_back(numbers(r, "matrix row"));
    return spec::pullback(std::move(rows), norm_spec_from_json(field(j, "inner")));
  }
  if (type == "gauge") return spec::gauge(body_from_json(field(j, "body")));
  if (type == "rectangularized") {
    auto inner = norm_spec_from_json(field(j, "inner"));
    if (j.contains("mode")) {
      if (!j["mode"].is_string()) throw ParseError("mode must be a string");
      const auto mode = j["mode"].get<std::string>();
      if (mode == "sample") {
        const auto& s = field(j, "samples");
        if (!s.is_number_unsigned()) throw ParseError("samples must be a non-negative integer");
        std::uint64_t seed = 0;
        if (j.contains("seed")) {
          if (!j["seed"].is_number_unsigned()) throw ParseError("seed must be a non-negative integer");
          seed = j["seed"].get<std::uint64_t>();
        }
        return spec::rectangularized_sampled(std::move(inner), s.get<std::size_t>(), seed);
      }
      if (mode != "exact") throw ParseError("mode must be exact or sample");
    }
    return spec::rectangularized(std::move(inner));
  }
  if (type == "vnorm") return spec::vnorm(norm_spec_from_json(field(j, "inner")));
  if (type == "scaled") {
    return spec::scaled(number(field(j, "c"), "c"), norm_spec_from_json(field(j, "inner")));
  }
  throw ParseError("unknown norm type '" + type + "'");
}

NormSpecPtr norm_spec_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return norm_spec_from_json(j);
}

}  // namespace latticelab
