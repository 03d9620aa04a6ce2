#include <iomanip>
#include <sstream>

#include "latticelab/certify.hpp"

namespace latticelab {

std::string to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::kRestriction: return "restriction";
    case WitnessKind::kSignFlip: return "sign_flip";
    case WitnessKind::kPair: return "pair";
    case WitnessKind::kModulusPair: return "modulus_pair";
    case WitnessKind::kCoordinate: return "coordinate";
  }
  return "unknown";
}

std::string to_string(Method method) {
  return method == Method::kExhaustive ? "exhaustive" : "random+refine";
}

void to_json(nlohmann::json& j, const Witness& w) {
  j = {{"kind", to_string(w.kind)}, {"f", w.f}};
  if (w.g) j[w.kind == WitnessKind::kSignFlip ? "signs" : "g"] = *w.g;
  if (w.set) j["set"] = *w.set;
  if (w.atom) j["atom"] = *w.atom;
}

void to_json(nlohmann::json& j, const ConstantEstimate& e) {
  j = {{"value", e.value},
       {"exact", e.exact},
       {"method", to_string(e.method)},
       {"inner_exhaustive", e.inner_exhaustive},
       {"evaluations", e.evaluations},
       {"witness", e.witness}};
}

void to_json(nlohmann::json& j, const RieszViolation& r) {
  j = {{"ratio", r.ratio}, {"f", r.f}, {"g", r.g}};
}

void to_json(nlohmann::json& j, const MultiplierReport& r) {
  j = {{"mode", r.asserted ? "asserted" : "diagnostic"},
       {"pairs", r.pairs},
       {"max_modulus_ratio", r.max_modulus_ratio},
       {"max_product_ratio", r.max_product_ratio},
       {"modulus_violations", r.modulus_violations},
       {"product_violations", r.product_violations},
       {"passed", r.passed()}};
  if (r.modulus_witness) {
    j["modulus_witness"] = {{"s", r.modulus_witness->first}, {"g", r.modulus_witness->second}};
  }
  if (r.product_witness) {
    j["product_witness"] = {{"s", r.product_witness->first}, {"g", r.product_witness->second}};
  }
}

void to_json(nlohmann::json& j, const CoordinateBounds& c) {
  j = {{"bound", c.bound},
       {"basis_norm", c.basis_norm},
       {"restriction", c.restriction},
       {"holds", c.holds},
       {"passed", c.passed()},
       {"witness", c.witness}};
}

void to_json(nlohmann::json& j, const VNormReport& r) {
  j = {{"mode", r.asserted ? "asserted" : "diagnostic"},
       {"samples", r.samples},
       {"min_ratio", r.min_ratio},
       {"max_ratio", r.max_ratio},
       {"bound_violations", r.bound_violations},
       {"cone_mismatches", r.cone_mismatches},
       {"max_triangle_excess", r.max_triangle_excess},
       {"triangle_violations", r.triangle_violations},
       {"passed", r.passed()}};
  if (r.bound_witness) j["bound_witness"] = *r.bound_witness;
  if (r.triangle_witness) {
    j["triangle_witness"] = {r.triangle_witness->first, r.triangle_witness->second};
  }
}

void to_json(nlohmann::json& j, const RelationRow& r) {
  j = {{"relation", r.relation},
       {"lhs", r.lhs},
       {"rhs", r.rhs},
       {"applicable", r.applicable},
       {"holds", r.holds}};
}

void to_json(nlohmann::json& j, const PropertyReport& r) {
  const auto& e = r.estimates;
  j = nlohmann::json::object();
  j["schema"] = kSchema;
  j["config"] = r.config;
  j["constants"] = {{"restriction", e.restriction},
                    {"monotonicity", e.monotonicity},
                    {"ideal", e.ideal},
                    {"unconditional", e.unconditional},
                    {"abs_lipschitz", e.abs_lipschitz}};
  j["riesz_violation"] = e.riesz ? nlohmann::json(*e.riesz) : nlohmann::json(nullptr);
  if (e.coordinates) j["coordinate_bounds"] = *e.coordinates;
  j["multiplier_check"] = r.multiplier;
  j["vnorm_equivalence"] = r.vnorm;
  j["verdicts"] = {
      {"strictly_rectangular", r.strictly_rectangular()},
      {"rectangular", {{"C", e.restriction.value}}},
      {"monotone", {{"C", e.monotonicity.value}}},
      {"riesz", r.riesz()},
      {"ideal", {{"C", e.ideal.value}}},
      {"unconditional", {{"K", e.unconditional.value}}},
      {"subsequence_property", true},
  };
  j["relations"] = r.audit.rows;
  j["audit_passed"] = r.audit.passed();
  j["notes"] = {
      "Constants are certified lower bounds; each witness reproduces its value.",
      "With finitely many atoms of positive mass every coordinate functional is "
      "continuous, so the subsequence property holds and the rectangular constant "
      "alone decides whether an equivalent lattice (Banach function space) norm exists.",
  };
  j["warnings"] = r.warnings;
}

std::string constants_csv(const PropertyReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "name,value,exact,method,inner_exhaustive\n";
  const auto& e = r.estimates;
  for (const auto* c :
       {&e.restriction, &e.monotonicity, &e.ideal, &e.unconditional, &e.abs_lipschitz}) {
    os << c->name << ',' << c->value << ',' << (c->exact ? "true" : "false") << ','
       << to_string(c->method) << ',' << (c->inner_exhaustive ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string report_text(const PropertyReport& r) {
  std::ostringstream os;
  os << std::setprecision(12);
  const auto& e = r.estimates;
  os << "constants (certified lower bounds)\n";
  for (const auto* c :
       {&e.restriction, &e.monotonicity, &e.ideal, &e.unconditional, &e.abs_lipschitz}) {
    os << "  " << std::left << std::setw(14) << c->name << ' ' << c->value
       << (c->exact ? "  (exact)" : "") << '\n';
  }
  os << "strictly rectangular: " << (r.strictly_rectangular() ? "yes" : "no") << '\n';
  os << "riesz norm:           " << (r.riesz() ? "no violation found" : "violated") << '\n';
  if (e.riesz) {
    os << "  witness f = " << nlohmann::json(e.riesz->f).dump()
       << ", g = " << nlohmann::json(e.riesz->g).dump() << ", ratio " << e.riesz->ratio << '\n';
  }
  os << "multiplier check:     " << (r.multiplier.asserted ? "asserted" : "diagnostic")
     << ", max ratios " << r.multiplier.max_modulus_ratio << " / "
     << r.multiplier.max_product_ratio << (r.multiplier.passed() ? "" : "  FAILED") << '\n';
  os << "v-norm equivalence:   " << (r.vnorm.asserted ? "asserted" : "diagnostic")
     << ", ratio range [" << r.vnorm.min_ratio << ", " << r.vnorm.max_ratio << "]"
     << (r.vnorm.passed() ? "" : "  FAILED") << '\n';
  os << "relations\n";
  for (const auto& row : r.audit.rows) {
    os << "  [" << (!row.applicable ? "n/a " : row.holds ? "ok  " : "FAIL") << "] "
       << row.relation << "  (" << row.lhs << " vs " << row.rhs << ")\n";
  }
  for (const auto& w : r.warnings) os << "warning: " << w << '\n';
  return os.str();
}

}  // namespace latticelab
