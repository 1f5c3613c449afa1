#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "bushygw/path_string.hpp"

namespace bushygw {

using StringPredicate = std::function<bool(const PathString&)>;

StringPredicate predicate_from_set(std::set<PathString> members);

// A finite nonempty antichain of strings, every one extending a common root.
// Leaves are kept sorted in length-lexicographic order with no duplicates.
class LeafBag {
public:
  // Validates the invariants; throws std::invalid_argument on violation.
  static LeafBag make(PathString root, std::vector<PathString> leaves);

  const PathString& root() const { return root_; }
  const std::vector<PathString>& leaves() const { return leaves_; }
  std::size_t size() const { return leaves_.size(); }

  bool operator==(const LeafBag&) const = default;

private:
  LeafBag() = default;
  PathString root_;
  std::vector<PathString> leaves_;
};

// True iff every node strictly between the root and a leaf (the root
// included, leaves excluded) has at least n immediate successors that are
// prefixes of leaves.  A singleton bag at its own root is n-bushy for all n.
// n must be positive.
bool is_bushy_from(const LeafBag& bag, std::uint64_t n);

// Same predicate on a raw antichain.  leaves must be a nonempty antichain of
// extensions of root; the function also returns false when a leaf fails to
// extend root or two leaves are comparable.
bool is_bushy_from(const PathString& root,
                   const std::vector<PathString>& leaves, std::uint64_t n);

struct SplitResult {
  int label;    // 1: bag is a-bushy with all leaves satisfying p;
                // 0: bag is b-bushy with no leaf satisfying p.
  LeafBag bag;  // sub-bag of the input with the same root
};

// Splits an (a+b-1)-bushy bag along the predicate p by labeling leaves with
// membership in p and propagating labels toward the root: an inner node gets
// label 1 iff at least a of its labeled successors do.  The side selected by
// the root label is returned and always certifies as above.
SplitResult split_bushy(const LeafBag& bag, std::uint64_t a, std::uint64_t b,
                        const StringPredicate& p);

struct PigeonholeResult {
  std::size_t part_index;  // 0-based index into parts
  LeafBag bag;
};

// Given a 2^(a-1)*n-bushy bag whose every leaf belongs to at least one of
// the a parts, returns an index i and an n-bushy sub-bag all of whose leaves
// belong to parts[i].  Works down the parts in order, peeling each off with
// split_bushy at threshold 2^(a-2)*n.
PigeonholeResult pigeonhole_split(const LeafBag& bag, std::uint64_t n,
                                  const std::vector<StringPredicate>& parts);

// Decides, inside the given universe, whether some n-bushy bag rooted at
// root has all leaves satisfying p, and returns the canonical witness:
// membership in p is preferred at the shallowest node, otherwise the n
// smallest good successors are taken in label order.
std::optional<LeafBag> find_bushy_bag(const PathString& root, std::uint64_t n,
                                      const StringPredicate& p,
                                      const FiniteUniverse& universe);

// Thins an (n+delta-1)-bushy bag, none of whose root-reachable strings
// carries an n-bushy bag for p, down to a delta-bushy sub-bag none of whose
// leaves carries one either.  Preconditions are checked and violations throw
// std::invalid_argument.
LeafBag thin_to_unreachable(const LeafBag& bag, std::uint64_t n,
                            std::uint64_t delta, const StringPredicate& p,
                            const FiniteUniverse& universe);

}  // namespace bushygw
