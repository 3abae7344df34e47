#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "specgraph/error.hpp"

namespace specgraph {

/// Subset of the vertex range 0..n-1 stored as a packed bit array.
/// Sets over at most 64 vertices convert to and from a single machine word.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}

  VertexSet(std::size_t universe, std::initializer_list<std::size_t> members)
      : VertexSet(universe) {
    for (std::size_t v : members) insert(v);
  }

  static VertexSet from_indices(std::size_t universe, std::span<const std::size_t> members) {
    VertexSet s(universe);
    for (std::size_t v : members) s.insert(v);
    return s;
  }

  static VertexSet from_mask(std::size_t universe, std::uint64_t mask) {
    if (universe > 64) throw Error(Errc::too_large, "mask form needs at most 64 vertices");
    if (universe < 64 && (mask >> universe) != 0) {
      throw Error(Errc::vertex_out_of_range, "mask has bits beyond the vertex range");
    }
    VertexSet s(universe);
    if (!s.words_.empty()) s.words_[0] = mask;
    return s;
  }

  static VertexSet full(std::size_t universe) {
    VertexSet s(universe);
    for (std::size_t v = 0; v < universe; ++v) s.insert(v);
    return s;
  }

  std::size_t universe() const noexcept { return universe_; }

  bool contains(std::size_t v) const {
    check(v);
    return (words_[v / 64] >> (v % 64)) & 1u;
  }

  void insert(std::size_t v) {
    check(v);
    words_[v / 64] |= std::uint64_t{1} << (v % 64);
  }

  void erase(std::size_t v) {
    check(v);
    words_[v / 64] &= ~(std::uint64_t{1} << (v % 64));
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool empty() const noexcept {
    for (auto w : words_) {
      if (w != 0) return false;
    }
    return true;
  }

  std::uint64_t mask() const {
    if (universe_ > 64) throw Error(Errc::too_large, "mask form needs at most 64 vertices");
    return words_.empty() ? 0 : words_[0];
  }

  VertexSet complement() const {
    VertexSet c(universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) c.words_[i] = ~words_[i];
    c.trim();
    return c;
  }

  bool intersects(const VertexSet& other) const {
    same_universe(other);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & other.words_[i]) return true;
    }
    return false;
  }

  VertexSet operator|(const VertexSet& other) const {
    same_universe(other);
    VertexSet r(universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] | other.words_[i];
    return r;
  }

  VertexSet operator&(const VertexSet& other) const {
    same_universe(other);
    VertexSet r(universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & other.words_[i];
    return r;
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        out.push_back(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  void check(std::size_t v) const {
    if (v >= universe_) throw Error(Errc::vertex_out_of_range, "vertex index outside the set universe");
  }
  void same_universe(const VertexSet& other) const {
    if (other.universe_ != universe_) throw Error(Errc::size_mismatch, "vertex sets over different universes");
  }
  void trim() {
    if (universe_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
    }
  }

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Two-sided partition A ⊔ B of the vertex set, both sides nonempty.
/// The sign function is +1 on A and -1 on B.
class Partition {
 public:
  static Partition from_side(VertexSet a) {
    VertexSet b = a.complement();
    if (a.empty() || b.empty()) throw Error(Errc::invalid_partition, "both sides of a partition must be nonempty");
    return Partition(std::move(a), std::move(b));
  }

  static Partition from_mask(std::size_t universe, std::uint64_t side_a) {
    return from_side(VertexSet::from_mask(universe, side_a));
  }

  const VertexSet& a() const noexcept { return a_; }
  const VertexSet& b() const noexcept { return b_; }
  std::size_t universe() const noexcept { return a_.universe(); }
  int sign(std::size_t v) const { return a_.contains(v) ? 1 : -1; }

 private:
  Partition(VertexSet a, VertexSet b) : a_(std::move(a)), b_(std::move(b)) {}
  VertexSet a_;
  VertexSet b_;
};

}  // namespace specgraph
