#include "latticelab/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace latticelab {

namespace {

void check_dims(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

MeasureSpace::MeasureSpace(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw ValidationError("measure space needs at least one atom");
  for (double w : weights_) {
    if (!std::isfinite(w) || w <= 0.0) {
      throw ValidationError("atom weights must be finite and strictly positive");
    }
  }
}

MeasureSpace MeasureSpace::counting(std::size_t n) {
  return MeasureSpace(std::vector<double>(n, 1.0));
}

double MeasureSpace::total() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

AtomSet::AtomSet(std::size_t n, std::initializer_list<std::size_t> indices)
    : AtomSet(n, std::span<const std::size_t>(indices.begin(), indices.size())) {}

AtomSet::AtomSet(std::size_t n, std::span<const std::size_t> indices)
    : member_(n, false) {
  for (std::size_t k : indices) insert(k);
}

AtomSet AtomSet::all(std::size_t n) {
  AtomSet s(n);
  s.member_.assign(n, true);
  return s;
}

AtomSet AtomSet::from_mask(std::size_t n, std::uint64_t mask) {
  if (n > 64) throw DimensionError("mask form supports at most 64 atoms");
  AtomSet s(n);
  for (std::size_t k = 0; k < n; ++k) s.member_[k] = (mask >> k) & 1u;
  if (n < 64 && (mask >> n) != 0) throw DimensionError("mask selects atoms beyond n");
  return s;
}

void AtomSet::insert(std::size_t k) {
  if (k >= member_.size()) {
    throw DimensionError("atom index " + std::to_string(k) + " out of range");
  }
  member_[k] = true;
}

void AtomSet::erase(std::size_t k) {
  if (k >= member_.size()) {
    throw DimensionError("atom index " + std::to_string(k) + " out of range");
  }
  member_[k] = false;
}

bool AtomSet::empty() const {
  return std::none_of(member_.begin(), member_.end(), [](bool b) { return b; });
}

std::size_t AtomSet::count() const {
  return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), true));
}

std::vector<std::size_t> AtomSet::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < member_.size(); ++k) {
    if (member_[k]) out.push_back(k);
  }
  return out;
}

std::uint64_t AtomSet::mask() const {
  if (member_.size() > 64) throw DimensionError("mask form supports at most 64 atoms");
  std::uint64_t m = 0;
  for (std::size_t k = 0; k < member_.size(); ++k) {
    if (member_[k]) m |= std::uint64_t{1} << k;
  }
  return m;
}

void AtomSet::check_same(const AtomSet& other) const {
  check_dims(member_.size(), other.member_.size(), "AtomSet");
}

AtomSet AtomSet::operator|(const AtomSet& other) const {
  check_same(other);
  AtomSet out(*this);
  for (std::size_t k = 0; k < member_.size(); ++k) out.member_[k] = member_[k] || other.member_[k];
  return out;
}

AtomSet AtomSet::operator&(const AtomSet& other) const {
  check_same(other);
  AtomSet out(*this);
  for (std::size_t k = 0; k < member_.size(); ++k) out.member_[k] = member_[k] && other.member_[k];
  return out;
}

AtomSet AtomSet::operator-(const AtomSet& other) const {
  check_same(other);
  AtomSet out(*this);
  for (std::size_t k = 0; k < member_.size(); ++k) out.member_[k] = member_[k] && !other.member_[k];
  return out;
}

AtomSet AtomSet::complement() const {
  AtomSet out(*this);
  out.member_.flip();
  return out;
}

Func::Func(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("function values must be finite");
  }
}

Func::Func(std::initializer_list<double> values)
    : Func(std::vector<double>(values)) {}

Func Func::indicator(const AtomSet& set) {
  Func f(set.universe());
  for (std::size_t k : set.indices()) f.values_[k] = 1.0;
  return f;
}

Func Func::basis(std::size_t n, std::size_t k) {
  if (k >= n) throw DimensionError("basis index out of range");
  Func f(n);
  f.values_[k] = 1.0;
  return f;
}

double Func::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool Func::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

Func Func::operator+(const Func& other) const {
  check_dims(size(), other.size(), "Func +");
  Func out(*this);
  for (std::size_t k = 0; k < size(); ++k) out.values_[k] += other.values_[k];
  return out;
}

Func Func::operator-(const Func& other) const {
  check_dims(size(), other.size(), "Func -");
  Func out(*this);
  for (std::size_t k = 0; k < size(); ++k) out.values_[k] -= other.values_[k];
  return out;
}

Func Func::operator-() const {
  Func out(*this);
  for (double& v : out.values_) v = -v;
  return out;
}

Func Func::operator*(double c) const {
  Func out(*this);
  for (double& v : out.values_) v *= c;
  return out;
}

Func operator*(double c, const Func& f) { return f * c; }

Func hadamard(const Func& a, const Func& b) {
  check_dims(a.size(), b.size(), "hadamard");
  Func out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

Func restrict(const Func& f, const AtomSet& set) {
  check_dims(f.size(), set.universe(), "restrict");
  Func out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (set.contains(k)) out[k] = f[k];
  }
  return out;
}

AbsParts abs_parts(const Func& f) {
  const std::size_t n = f.size();
  AtomSet nonneg(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (f[k] >= 0.0) nonneg.insert(k);
  }
  AbsParts parts{abs(f), restrict(f, nonneg), -restrict(f, nonneg.complement())};
  // -0.0 would break bitwise comparisons downstream.
  for (std::size_t k = 0; k < n; ++k) {
    if (parts.pos[k] == 0.0) parts.pos[k] = 0.0;
    if (parts.neg[k] == 0.0) parts.neg[k] = 0.0;
  }
  return parts;
}

Func abs(const Func& f) {
  Func out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = std::abs(f[k]);
  return out;
}

Func pointwise_max(const Func& f, const Func& g) {
  check_dims(f.size(), g.size(), "pointwise_max");
  Func out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = std::max(f[k], g[k]);
  return out;
}

Func evaluate(const SimpleRep& rep) {
  const std::size_t n = rep.base.size();
  std::vector<double> coeff(n, 0.0);
  std::vector<bool> covered(n, false);
  for (const auto& piece : rep.pieces) {
    check_dims(n, piece.set.universe(), "SimpleRep piece");
    for (std::size_t k = 0; k < n; ++k) {
      if (!piece.set.contains(k)) continue;
      coeff[k] = covered[k] ? coeff[k] + piece.coefficient : piece.coefficient;
      covered[k] = true;
    }
  }
  Func out(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (covered[k]) out[k] = coeff[k] * rep.base[k];
  }
  return out;
}

SimpleRep disjointify(const SimpleRep& rep) {
  const std::size_t n = rep.base.size();
  std::vector<SimplePiece> parts;
  for (const auto& piece : rep.pieces) {
    check_dims(n, piece.set.universe(), "SimpleRep piece");
    AtomSet covered(n);
    std::vector<SimplePiece> next;
    next.reserve(parts.size() + 2);
    for (const auto& part : parts) {
      covered = covered | part.set;
      AtomSet inside = part.set & piece.set;
      if (inside.empty()) {
        next.push_back(part);
        continue;
      }
      AtomSet outside = part.set - piece.set;
      if (!outside.empty()) next.push_back({part.coefficient, std::move(outside)});
      next.push_back({part.coefficient + piece.coefficient, std::move(inside)});
    }
    AtomSet leftover = piece.set - covered;
    if (!leftover.empty()) next.push_back({piece.coefficient, std::move(leftover)});
    parts = std::move(next);
  }
  return SimpleRep{rep.base, std::move(parts)};
}

SimpleRep normalize(const SimpleRep& rep) {
  SimpleRep out{rep.base, {}};
  for (const auto& piece : rep.pieces) {
    if (piece.coefficient != 0.0 && !piece.set.empty()) out.pieces.push_back(piece);
  }
  return out;
}

bool pairwise_disjoint(const SimpleRep& rep) {
  for (std::size_t i = 0; i < rep.pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < rep.pieces.size(); ++j) {
      if (!(rep.pieces[i].set & rep.pieces[j].set).empty()) return false;
    }
  }
  return true;
}

void to_json(nlohmann::json& j, const Func& f) { j = f.values(); }

void from_json(const nlohmann::json& j, Func& f) {
  if (!j.is_array()) throw ParseError("function must be a JSON array of numbers");
  std::vector<double> values;
  for (const auto& v : j) {
    if (!v.is_number()) throw ParseError("function entries must be numbers");
    values.push_back(v.get<double>());
  }
  f = Func(std::move(values));
}

void to_json(nlohmann::json& j, const AtomSet& s) { j = s.indices(); }

AtomSet atom_set_from_json(const nlohmann::json& j, std::size_t n) {
  if (!j.is_array()) throw ParseError("atom set must be a JSON array of indices");
  AtomSet s(n);
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) throw ParseError("atom indices must be non-negative integers");
    s.insert(v.get<std::size_t>());
  }
  return s;
}

void to_json(nlohmann::json& j, const MeasureSpace& m) {
  j = nlohmann::json{{"weights", m.weights()}};
}

MeasureSpace measure_space_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("weights") || !j["weights"].is_array()) {
    throw ParseError("measure space must be {\"weights\": [...]}");
  }
  std::vector<double> w;
  for (const auto& v : j["weights"]) {
    if (!v.is_number()) throw ParseError("weights must be numbers");
    w.push_back(v.get<double>());
  }
  return MeasureSpace(std::move(w));
}

}  // namespace latticelab
