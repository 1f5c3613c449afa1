#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bushygw {

// A finite string of unsigned labels, read as a path from the root of an
// infinitely branching tree.  The empty string is the root.
//
// Text form: labels in decimal separated by single spaces; the empty string
// prints as "-".  parse() accepts any amount of surrounding whitespace and
// is the inverse of to_text() on canonical output.
class PathString {
public:
  PathString() = default;
  explicit PathString(std::vector<std::uint32_t> labels)
      : labels_(std::move(labels)) {}
  PathString(std::initializer_list<std::uint32_t> labels) : labels_(labels) {}

  std::size_t length() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::vector<std::uint32_t>& labels() const { return labels_; }
  std::uint32_t at(std::size_t i) const { return labels_[i]; }

  // sigma.extended(k) is the path sigma followed by the single label k.
  PathString extended(std::uint32_t k) const;

  // First len labels.  Requires len <= length().
  PathString prefix(std::size_t len) const;

  bool is_prefix_of(const PathString& other) const;

  std::string to_text() const;
  static std::optional<PathString> parse(std::string_view text);

  bool operator==(const PathString&) const = default;

  // Length-lexicographic order: shorter strings first, ties broken by the
  // leftmost differing label.  This is the canonical total order used for
  // leaf bags, enumeration and witness selection.
  std::strong_ordering operator<=>(const PathString& other) const;

private:
  std::vector<std::uint32_t> labels_;
};

PathString concat(const PathString& sigma, const PathString& tau);
bool is_prefix(const PathString& sigma, const PathString& tau);

// True iff no element of the list is a proper or improper prefix of a
// different element.  Duplicates therefore violate the antichain property.
bool is_antichain(const std::vector<PathString>& strings);

// All strings with labels < branch_bound and length <= depth_bound.
// Construction rejects parameter combinations whose total string count
// would not fit in 64 bits.
class FiniteUniverse {
public:
  FiniteUniverse(std::uint32_t branch_bound, std::uint32_t depth_bound);

  std::uint32_t branch_bound() const { return branch_bound_; }
  std::uint32_t depth_bound() const { return depth_bound_; }

  bool contains(const PathString& s) const;

  // Number of member strings: sum over d <= depth_bound of branch_bound^d.
  std::uint64_t size() const { return size_; }

  // All members in length-lexicographic order.  Rejects universes with more
  // than max_enumeration strings instead of exhausting memory.
  std::vector<PathString> enumerate(
      std::uint64_t max_enumeration = 10'000'000) const;

private:
  std::uint32_t branch_bound_;
  std::uint32_t depth_bound_;
  std::uint64_t size_;
};

}  // namespace bushygw
