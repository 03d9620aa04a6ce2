#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "latticelab/certify.hpp"
#include "latticelab/norms.hpp"

namespace latticelab {

class UnknownEntryError : public Error {
 public:
  using Error::Error;
};

// Where an expected value comes from: a worked example from the literature,
// a closed form, or evaluation of an explicit witness.
enum class Provenance { kExample, kClosedForm, kDerived };

struct Expectation {
  std::string label;
  double observed = 0.0;
  double expected = 0.0;
  Provenance provenance = Provenance::kDerived;
  double tol = 1e-9;
  bool relative = false;
  // observed >= expected - tol instead of |observed - expected| <= tol
  bool lower_bound = false;
  bool passed = false;
};

struct GalleryResult {
  std::string name;
  std::size_t dimension = 0;
  std::vector<Expectation> rows;
  std::vector<std::string> notes;
  bool passed() const;
};

struct EntryInfo {
  std::string name;
  std::string description;
  std::size_t default_dim;
  std::size_t min_dim;
  std::size_t max_dim;
};

std::vector<EntryInfo> list_entries();
NormSpecPtr entry_spec(const std::string& name, std::optional<std::size_t> dim = std::nullopt);
GalleryResult run_entry(const std::string& name, std::optional<std::size_t> dim = std::nullopt,
                        ExecPolicy exec = {});

struct SuiteNorm {
  std::string name;
  NormSpecPtr spec;
  std::size_t dim;
};

// Reference collection used by the acceptance and regression suites; all
// members have at most 10 atoms.
std::vector<SuiteNorm> reference_suite();

std::string to_string(Provenance p);
void to_json(nlohmann::json& j, const Expectation& e);
void to_json(nlohmann::json& j, const GalleryResult& r);
std::string gallery_text(const GalleryResult& r);

}  // namespace latticelab
