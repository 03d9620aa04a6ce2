#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "latticelab/core.hpp"
#include "latticelab/norms.hpp"
#include "latticelab/search.hpp"

namespace latticelab {

constexpr double kRelationTol = 1e-6;
constexpr double kReplayTol = 1e-9;
constexpr double kStrictRectangular = 1.0 + 1e-6;

enum class WitnessKind {
  kRestriction,  // ||chi_A f|| / ||f||
  kSignFlip,     // ||eps . f|| / ||f||, eps stored in g
  kPair,         // ||f|| / ||g||
  kModulusPair,  // || |f| - |g| || / ||f - g||
  kCoordinate,   // |f(k)| / ||f||
};

struct Witness {
  WitnessKind kind = WitnessKind::kPair;
  Func f;
  std::optional<Func> g;
  std::optional<AtomSet> set;
  std::optional<std::size_t> atom;
};

// Recomputes the ratio a witness certifies, from scratch.
double replay(const NormOracle& norm, const Witness& w);

enum class Method { kExhaustive, kRandomRefine };

// Certified lower bound on a supremum together with the point attaining it.
struct ConstantEstimate {
  std::string name;
  double value = 0.0;
  Witness witness;
  Method method = Method::kRandomRefine;
  // The bound is the true constant: closed form, or the whole candidate
  // space was enumerated.
  bool exact = false;
  // Sets / sign patterns / vertices were fully enumerated per candidate.
  bool inner_exhaustive = false;
  std::size_t evaluations = 0;
};

struct CertifyOptions {
  SearchBudget budget;
  std::uint64_t seed = 0;
  ExecPolicy exec;
  // Extra starting points (length n), evaluated with the fixed candidates.
  std::vector<Func> warm_starts;
};

// sup_{f, A} ||chi_A f|| / ||f||.
ConstantEstimate restriction_constant(const NormOracle& norm, const CertifyOptions& opt);
// sup ||f|| / ||g|| over 0 <= f <= g.
ConstantEstimate monotonicity_constant(const NormOracle& norm, const CertifyOptions& opt);
// sup ||t|| / ||s|| over |t| <= |s|.
ConstantEstimate ideal_constant(const NormOracle& norm, const CertifyOptions& opt);
// sup ||eps . f|| / ||f|| over sign patterns eps (canonical basis).
ConstantEstimate unconditional_constant(const NormOracle& norm, const CertifyOptions& opt);
// sup || |g| - |h| || / ||g - h||, the Lipschitz constant of f -> |f|.
ConstantEstimate abs_lipschitz(const NormOracle& norm, const CertifyOptions& opt);

struct RieszViolation {
  double ratio = 0.0;
  Func f;  // |f| <= |g| and ||f|| > ||g||
  Func g;
};
// Searches |f| <= |g| with ||f|| > ||g|| (1 + 1e-9).
std::optional<RieszViolation> riesz_violation(const NormOracle& norm, const CertifyOptions& opt);
std::optional<RieszViolation> riesz_from_ideal(const ConstantEstimate& ideal);

struct MultiplierReport {
  bool asserted = false;  // false: diagnostic mode
  std::size_t pairs = 0;
  double max_modulus_ratio = 0.0;  // || |s g| || / (||s||_inf || |g| ||), bound 1
  double max_product_ratio = 0.0;  // ||s g|| / (||s||_inf ||g||), bound 4
  std::size_t modulus_violations = 0;
  std::size_t product_violations = 0;
  std::optional<std::pair<Func, Func>> modulus_witness;  // (s, g) at the max
  std::optional<std::pair<Func, Func>> product_witness;
  bool passed() const {
    return !asserted || (modulus_violations == 0 && product_violations == 0);
  }
};
MultiplierReport multiplier_check(const NormOracle& norm, const CertifyOptions& opt,
                                  bool strictly_rectangular);

struct CoordinateBounds {
  std::vector<double> bound;       // estimated sup |f(k)| / ||f||
  std::vector<double> basis_norm;  // ||e_k||
  std::vector<Witness> witness;
  double restriction = 0.0;        // C used for the audit
  std::vector<bool> holds;         // bound_k <= C / ||e_k|| within 1e-6
  bool passed() const;
};
// Estimates each coordinate functional's norm. Throws DegenerateNormError if
// some ||e_k|| = 0.
CoordinateBounds coordinate_bounds(const NormOracle& norm, const CertifyOptions& opt);
void audit_coordinate_bounds(CoordinateBounds& bounds, double restriction);

struct VNormReport {
  bool asserted = false;
  std::size_t samples = 0;
  double min_ratio = 0.0;  // min || |f| || / ||f||, bound 1/2
  double max_ratio = 0.0;  // max || |f| || / ||f||, bound 2
  std::size_t bound_violations = 0;
  std::size_t cone_mismatches = 0;  // || |f| || != ||f|| for f >= 0
  double max_triangle_excess = 0.0;  // max of || |f+g| || - || |f| || - || |g| ||, relative
  std::size_t triangle_violations = 0;
  std::optional<Func> bound_witness;
  std::optional<std::pair<Func, Func>> triangle_witness;
  bool passed() const {
    return !asserted ||
           (bound_violations == 0 && cone_mismatches == 0 && triangle_violations == 0);
  }
};
VNormReport vnorm_equivalence_check(const NormOracle& norm, const CertifyOptions& opt,
                                    bool strictly_rectangular);

struct Estimates {
  ConstantEstimate restriction;
  ConstantEstimate ideal;
  ConstantEstimate unconditional;
  ConstantEstimate monotonicity;
  ConstantEstimate abs_lipschitz;
  std::optional<RieszViolation> riesz;
  std::optional<CoordinateBounds> coordinates;
};

struct RelationRow {
  std::string relation;
  double lhs = 0.0;
  double rhs = 0.0;
  bool applicable = true;
  bool holds = true;
};

struct RelationsAudit {
  std::vector<RelationRow> rows;
  bool passed() const;
  // First failing row, for error messages.
  const RelationRow* first_failure() const;
};

RelationsAudit relations_audit(const Estimates& est);

struct PropertyReport {
  nlohmann::json config;
  Estimates estimates;
  MultiplierReport multiplier;
  VNormReport vnorm;
  RelationsAudit audit;
  std::vector<std::string> warnings;

  bool strictly_rectangular() const {
    return estimates.restriction.value <= kStrictRectangular;
  }
  bool riesz() const { return !estimates.riesz.has_value(); }
};

// Runs every estimator, feeding witnesses forward (coordinate -> restriction
// -> unconditional/ideal) so the lower bounds are mutually consistent, then
// audits the relations among them.
PropertyReport analyze(const NormOracle& norm, const CertifyOptions& opt,
                       nlohmann::json config = nlohmann::json::object());

std::string to_string(WitnessKind kind);
std::string to_string(Method method);
void to_json(nlohmann::json& j, const Witness& w);
void to_json(nlohmann::json& j, const ConstantEstimate& e);
void to_json(nlohmann::json& j, const RieszViolation& r);
void to_json(nlohmann::json& j, const MultiplierReport& r);
void to_json(nlohmann::json& j, const CoordinateBounds& c);
void to_json(nlohmann::json& j, const VNormReport& r);
void to_json(nlohmann::json& j, const RelationRow& r);
void to_json(nlohmann::json& j, const PropertyReport& r);
// Flat table: name,value,exact,method,inner_exhaustive
std::string constants_csv(const PropertyReport& r);
std::string report_text(const PropertyReport& r);

inline constexpr const char* kSchema = "latticelab/1";

}  // namespace latticelab
