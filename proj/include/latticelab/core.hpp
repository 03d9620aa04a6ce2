#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <json.hpp>

#include "latticelab/error.hpp"

namespace latticelab {

// Finite atomic measure space. Every atom carries strictly positive mass, so
// each class in L0 has a single representative and no quotienting is needed.
class MeasureSpace {
 public:
  explicit MeasureSpace(std::vector<double> weights);
  static MeasureSpace counting(std::size_t n);

  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double total() const;

 private:
  std::vector<double> weights_;
};

// Subset of {0, ..., n-1}.
class AtomSet {
 public:
  explicit AtomSet(std::size_t n) : member_(n, false) {}
  AtomSet(std::size_t n, std::initializer_list<std::size_t> indices);
  AtomSet(std::size_t n, std::span<const std::size_t> indices);

  static AtomSet all(std::size_t n);
  // Bit k of mask selects atom k; requires n <= 64.
  static AtomSet from_mask(std::size_t n, std::uint64_t mask);

  std::size_t universe() const { return member_.size(); }
  bool contains(std::size_t k) const { return member_.at(k); }
  void insert(std::size_t k);
  void erase(std::size_t k);
  bool empty() const;
  std::size_t count() const;
  std::vector<std::size_t> indices() const;
  std::uint64_t mask() const;

  AtomSet operator|(const AtomSet& other) const;
  AtomSet operator&(const AtomSet& other) const;
  AtomSet operator-(const AtomSet& other) const;
  AtomSet complement() const;
  bool operator==(const AtomSet& other) const = default;

 private:
  void check_same(const AtomSet& other) const;
  std::vector<bool> member_;
};

// Real function on the atoms. Entries are finite.
class Func {
 public:
  Func() = default;
  explicit Func(std::size_t n) : values_(n, 0.0) {}
  explicit Func(std::vector<double> values);
  Func(std::initializer_list<double> values);

  static Func zeros(std::size_t n) { return Func(n); }
  static Func indicator(const AtomSet& set);
  static Func basis(std::size_t n, std::size_t k);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }
  std::span<const double> span() const { return values_; }
  const std::vector<double>& values() const { return values_; }

  double sup_norm() const;
  bool is_zero() const;

  Func operator+(const Func& other) const;
  Func operator-(const Func& other) const;
  Func operator-() const;
  Func operator*(double c) const;
  bool operator==(const Func& other) const = default;

 private:
  std::vector<double> values_;
};

Func operator*(double c, const Func& f);
// Pointwise product.
Func hadamard(const Func& a, const Func& b);

Func restrict(const Func& f, const AtomSet& set);

struct AbsParts {
  Func abs;
  Func pos;
  Func neg;
};
AbsParts abs_parts(const Func& f);
Func abs(const Func& f);

Func pointwise_max(const Func& f, const Func& g);

struct SimplePiece {
  double coefficient;
  AtomSet set;
};

// sum_m b_m * base * chi_{B_m}
struct SimpleRep {
  Func base;
  std::vector<SimplePiece> pieces;
};

// Coefficients covering an atom are added in piece order before the product
// with the base value, which makes disjointify bit-exact.
Func evaluate(const SimpleRep& rep);
SimpleRep disjointify(const SimpleRep& rep);
// Drops zero coefficients and empty sets.
SimpleRep normalize(const SimpleRep& rep);
bool pairwise_disjoint(const SimpleRep& rep);

void to_json(nlohmann::json& j, const Func& f);
void from_json(const nlohmann::json& j, Func& f);
void to_json(nlohmann::json& j, const AtomSet& s);
AtomSet atom_set_from_json(const nlohmann::json& j, std::size_t n);
void to_json(nlohmann::json& j, const MeasureSpace& m);
MeasureSpace measure_space_from_json(const nlohmann::json& j);

}  // namespace latticelab
