#pragma once

#include <boost/dynamic_bitset.hpp>

#include <array>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rccs/error.hpp"
#include "rccs/rational.hpp"

namespace rccs {

struct Atom {
  std::string label;
  Rational weight;
};

class Event;

/// A finite classical probability space. The event algebra is the full power
/// set of the atoms. Atoms keep insertion order; values are immutable and
/// cheap to copy (shared storage).
class ProbSpace {
 public:
  explicit ProbSpace(std::vector<Atom> atoms) {
    if (atoms.empty()) throw Error(ErrorCode::InvalidArgument, "space needs at least one atom");
    auto data = std::make_shared<Data>();
    Rational total = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (sgn(atoms[i].weight) < 0)
        throw Error(ErrorCode::InvalidArgument, "negative weight on atom " + atoms[i].label);
      if (!data->index.emplace(atoms[i].label, i).second)
        throw Error(ErrorCode::InvalidArgument, "duplicate atom label " + atoms[i].label);
      total += atoms[i].weight;
    }
    if (total != 1)
      throw Error(ErrorCode::InvalidArgument, "weights sum to " + to_string(total) + ", not 1");
    data->atoms = std::move(atoms);
    data_ = std::move(data);
  }

  std::size_t size() const noexcept { return data_->atoms.size(); }
  const std::vector<Atom>& atoms() const noexcept { return data_->atoms; }
  const Atom& atom(std::size_t i) const { return data_->atoms.at(i); }
  const Rational& weight(std::size_t i) const { return data_->atoms.at(i).weight; }

  std::size_t index_of(const std::string& label) const {
    auto it = data_->index.find(label);
    if (it == data_->index.end()) throw Error(ErrorCode::InvalidArgument, "unknown atom " + label);
    return it->second;
  }
  bool has_atom(const std::string& label) const { return data_->index.contains(label); }

  Event whole() const;
  Event empty_event() const;
  Event event(std::initializer_list<std::string> labels) const;
  Event event(std::span<const std::string> labels) const;
  Event event_from_indices(std::span<const std::size_t> indices) const;
  Event event_from_bits(boost::dynamic_bitset<> bits) const;

  /// Same underlying object, not structural equality.
  bool same_as(const ProbSpace& other) const noexcept { return data_ == other.data_; }

 private:
  struct Data {
    std::vector<Atom> atoms;
    std::unordered_map<std::string, std::size_t> index;
  };
  friend class Event;
  std::shared_ptr<const Data> data_;
};

/// A set of atoms of one particular space.
class Event {
 public:
  const boost::dynamic_bitset<>& bits() const noexcept { return bits_; }
  bool contains(std::size_t atom) const { return bits_.test(atom); }
  std::size_t count() const noexcept { return bits_.count(); }
  bool empty() const noexcept { return bits_.none(); }
  bool belongs_to(const ProbSpace& space) const noexcept { return space_ == space.data_; }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos; i = bits_.find_next(i))
      out.push_back(space_->atoms[i].label);
    return out;
  }

  Event complement() const { return Event(space_, ~bits_); }
  Event meet(const Event& other) const {
    require_same(other);
    return Event(space_, bits_ & other.bits_);
  }
  Event join(const Event& other) const {
    require_same(other);
    return Event(space_, bits_ | other.bits_);
  }
  bool disjoint_from(const Event& other) const {
    require_same(other);
    return !bits_.intersects(other.bits_);
  }

  friend Event operator&(const Event& x, const Event& y) { return x.meet(y); }
  friend Event operator|(const Event& x, const Event& y) { return x.join(y); }
  friend Event operator~(const Event& x) { return x.complement(); }
  friend bool operator==(const Event& x, const Event& y) {
    return x.space_ == y.space_ && x.bits_ == y.bits_;
  }

 private:
  friend class ProbSpace;
  Event(std::shared_ptr<const ProbSpace::Data> space, boost::dynamic_bitset<> bits)
      : space_(std::move(space)), bits_(std::move(bits)) {}

  void require_same(const Event& other) const {
    if (space_ != other.space_)
      throw Error(ErrorCode::ForeignEvent, "events belong to different spaces");
  }

  std::shared_ptr<const ProbSpace::Data> space_;
  boost::dynamic_bitset<> bits_;
};

inline Event ProbSpace::whole() const {
  boost::dynamic_bitset<> bits(size());
  bits.set();
  return Event(data_, std::move(bits));
}

inline Event ProbSpace::empty_event() const { return Event(data_, boost::dynamic_bitset<>(size())); }

inline Event ProbSpace::event(std::initializer_list<std::string> labels) const {
  return event(std::span<const std::string>(labels.begin(), labels.size()));
}

inline Event ProbSpace::event(std::span<const std::string> labels) const {
  boost::dynamic_bitset<> bits(size());
  for (const auto& label : labels) bits.set(index_of(label));
  return Event(data_, std::move(bits));
}

inline Event ProbSpace::event_from_indices(std::span<const std::size_t> indices) const {
  boost::dynamic_bitset<> bits(size());
  for (auto i : indices) {
    if (i >= size()) throw Error(ErrorCode::InvalidArgument, "atom index out of range");
    bits.set(i);
  }
  return Event(data_, std::move(bits));
}

inline Event ProbSpace::event_from_bits(boost::dynamic_bitset<> bits) const {
  if (bits.size() != size()) throw Error(ErrorCode::InvalidArgument, "bitset size mismatch");
  return Event(data_, std::move(bits));
}

/// Ordered, pairwise-disjoint, covering cells. Only `validate_partition`
/// builds one, so holding a Partition means the checks passed.
class Partition {
 public:
  std::size_t size() const noexcept { return cells_.size(); }
  const std::vector<Event>& cells() const noexcept { return cells_; }
  const Event& operator[](std::size_t i) const { return cells_.at(i); }
  auto begin() const noexcept { return cells_.begin(); }
  auto end() const noexcept { return cells_.end(); }

 private:
  friend Partition validate_partition(const ProbSpace&, std::vector<Event>);
  explicit Partition(std::vector<Event> cells) : cells_(std::move(cells)) {}
  std::vector<Event> cells_;
};

namespace detail {

inline void require_member(const ProbSpace& space, const Event& e) {
  if (!e.belongs_to(space)) throw Error(ErrorCode::ForeignEvent, "event belongs to another space");
}

}  // namespace detail

inline Rational probability(const ProbSpace& space, const Event& e) {
  detail::require_member(space, e);
  Rational total = 0;
  const auto& bits = e.bits();
  for (auto i = bits.find_first(); i != boost::dynamic_bitset<>::npos; i = bits.find_next(i))
    total += space.weight(i);
  return total;
}

/// p(x | given). Conditioning on a null event is an error, never 0 or NaN.
inline Rational conditional(const ProbSpace& space, const Event& x, const Event& given) {
  const Rational denom = probability(space, given);
  if (is_zero(denom))
    throw Error(ErrorCode::ZeroMeasureCondition, "conditioning event has probability 0");
  return Rational(probability(space, x & given) / denom);
}

enum class Quadrant : std::size_t { AB = 0, ABbar = 1, AbarB = 2, AbarBbar = 3 };

/// Quadrant cell of an atom with respect to the pair (A, B).
inline Quadrant quadrant_of(const Event& A, const Event& B, std::size_t atom) {
  const bool a = A.contains(atom);
  const bool b = B.contains(atom);
  if (a) return b ? Quadrant::AB : Quadrant::ABbar;
  return b ? Quadrant::AbarB : Quadrant::AbarBbar;
}

/// The probabilistic profile of a pair: marginals, joint, covariance gamma,
/// and the four quadrant probabilities in the order AB, AB̄, ĀB, ĀB̄.
struct CorrelationSummary {
  Rational a;
  Rational b;
  Rational pAB;
  Rational gamma;
  std::array<Rational, 4> quadrants;

  bool positive() const { return is_positive(gamma); }
  /// Positive correlation with at least one empty quadrant.
  bool strict() const {
    for (const auto& q : quadrants)
      if (is_zero(q)) return true;
    return false;
  }

  /// Summary of a target given only a = p(A), b = p(B) and p(A∧B).
  static CorrelationSummary from_marginals(const Rational& a, const Rational& b,
                                           const Rational& pAB) {
    CorrelationSummary s{a, b, pAB, Rational(pAB - a * b),
                         {pAB, Rational(a - pAB), Rational(b - pAB), Rational(1 - a - b + pAB)}};
    for (const auto& q : s.quadrants)
      if (sgn(q) < 0 || q > 1)
        throw Error(ErrorCode::InvalidArgument, "marginals a=" + to_string(a) + ", b=" +
                                                    to_string(b) + ", pAB=" + to_string(pAB) +
                                                    " are not jointly realizable");
    return s;
  }

  friend bool operator==(const CorrelationSummary&, const CorrelationSummary&) = default;
};

inline CorrelationSummary correlation_summary(const ProbSpace& space, const Event& A,
                                              const Event& B) {
  detail::require_member(space, A);
  detail::require_member(space, B);
  CorrelationSummary s;
  for (std::size_t i = 0; i < space.size(); ++i)
    s.quadrants[static_cast<std::size_t>(quadrant_of(A, B, i))] += space.weight(i);
  s.pAB = s.quadrants[0];
  s.a = s.quadrants[0] + s.quadrants[1];
  s.b = s.quadrants[0] + s.quadrants[2];
  s.gamma = s.pAB - s.a * s.b;
  return s;
}

inline Partition validate_partition(const ProbSpace& space, std::vector<Event> cells) {
  if (cells.empty()) throw NotAPartitionError(PartitionDefect::Empty, "no cells");
  boost::dynamic_bitset<> seen(space.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    detail::require_member(space, cells[i]);
    if (seen.intersects(cells[i].bits()))
      throw NotAPartitionError(PartitionDefect::Overlap,
                               "cell " + std::to_string(i + 1) + " overlaps an earlier cell");
    seen |= cells[i].bits();
  }
  if (!seen.all()) {
    const auto missing = (~seen).find_first();
    throw NotAPartitionError(PartitionDefect::Gap,
                             "atom " + space.atom(missing).label + " is in no cell");
  }
  return Partition(std::move(cells));
}

}  // namespace rccs
