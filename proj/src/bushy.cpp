#include "bushygw/bushy.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace bushygw {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

// Checks the successor condition over a lexicographically sorted antichain:
// within [begin, end) all leaves agree on labels before pos and the node at
// pos is interior, so the distinct labels at pos are its successors.
bool bushy_scan(const std::vector<PathString>& leaves, std::size_t begin,
                std::size_t end, std::size_t pos, std::uint64_t n) {
  if (end - begin == 1 && leaves[begin].length() == pos) return true;
  std::uint64_t successors = 0;
  std::size_t i = begin;
  while (i < end) {
    if (leaves[i].length() <= pos) return false;  // comparable leaves
    std::uint32_t label = leaves[i].at(pos);
    std::size_t j = i;
    while (j < end && leaves[j].length() > pos && leaves[j].at(pos) == label)
      ++j;
    ++successors;
    if (!bushy_scan(leaves, i, j, pos + 1, n)) return false;
    i = j;
  }
  return successors >= n;
}

bool lex_less(const PathString& a, const PathString& b) {
  return std::lexicographical_compare(a.labels().begin(), a.labels().end(),
                                      b.labels().begin(), b.labels().end());
}

}  // namespace

StringPredicate predicate_from_set(std::set<PathString> members) {
  return [members = std::move(members)](const PathString& s) {
    return members.count(s) > 0;
  };
}

LeafBag LeafBag::make(PathString root, std::vector<PathString> leaves) {
  require(!leaves.empty(), "leaf bag must contain at least one leaf");
  std::sort(leaves.begin(), leaves.end());
  leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
  for (const PathString& leaf : leaves)
    require(root.is_prefix_of(leaf), "every leaf must extend the root");
  require(is_antichain(leaves), "leaves must form an antichain");
  LeafBag bag;
  bag.root_ = std::move(root);
  bag.leaves_ = std::move(leaves);
  return bag;
}

bool is_bushy_from(const LeafBag& bag, std::uint64_t n) {
  return is_bushy_from(bag.root(), bag.leaves(), n);
}

bool is_bushy_from(const PathString& root,
                   const std::vector<PathString>& leaves, std::uint64_t n) {
  require(n >= 1, "bushiness degree must be positive");
  if (leaves.empty()) return false;
  for (const PathString& leaf : leaves)
    if (!root.is_prefix_of(leaf)) return false;
  std::vector<PathString> sorted = leaves;
  std::sort(sorted.begin(), sorted.end(), lex_less);
  return bushy_scan(sorted, 0, sorted.size(), root.length(), n);
}

SplitResult split_bushy(const LeafBag& bag, std::uint64_t a, std::uint64_t b,
                        const StringPredicate& p) {
  require(a >= 1 && b >= 1, "split thresholds must be positive");
  require(a <= UINT64_MAX - b, "split thresholds overflow");
  require(is_bushy_from(bag, a + b - 1),
          "leaf bag is not (a+b-1)-bushy from its root");

  // Leaf labels come from p; inner labels are computed bottom-up, longest
  // nodes first, which the reverse of length-lex order guarantees.
  std::map<PathString, int> label;
  std::map<PathString, std::set<std::uint32_t>> successors;
  for (const PathString& leaf : bag.leaves()) {
    label[leaf] = p(leaf) ? 1 : 0;
    for (std::size_t len = bag.root().length(); len < leaf.length(); ++len)
      successors[leaf.prefix(len)].insert(leaf.at(len));
  }
  for (auto it = successors.rbegin(); it != successors.rend(); ++it) {
    const auto& [node, labels] = *it;
    std::uint64_t ones = 0;
    for (std::uint32_t k : labels)
      if (label.at(node.extended(k)) == 1) ++ones;
    label[node] = ones >= a ? 1 : 0;
  }

  // Keep the leaves reachable from the root through same-labeled nodes only.
  // A 1-labeled interior node has >= a successors labeled 1 and a 0-labeled
  // one has >= b labeled 0 (it has >= a+b-1 in total), so the kept bag is
  // a- respectively b-bushy.  Keeping every same-labeled leaf instead would
  // admit leaves below opposite-labeled nodes and break bushiness.
  int side = label.at(bag.root());
  std::set<PathString> leaf_set(bag.leaves().begin(), bag.leaves().end());
  std::vector<PathString> kept;
  std::vector<PathString> pending{bag.root()};
  while (!pending.empty()) {
    PathString node = std::move(pending.back());
    pending.pop_back();
    if (leaf_set.count(node)) {
      kept.push_back(std::move(node));
      continue;
    }
    for (std::uint32_t k : successors.at(node)) {
      PathString child = node.extended(k);
      if (label.at(child) == side) pending.push_back(std::move(child));
    }
  }
  if (kept.empty())
    throw std::logic_error("split selected an empty side of a bushy bag");
  return {side, LeafBag::make(bag.root(), std::move(kept))};
}

PigeonholeResult pigeonhole_split(const LeafBag& bag, std::uint64_t n,
                                  const std::vector<StringPredicate>& parts) {
  require(n >= 1, "bushiness degree must be positive");
  require(!parts.empty(), "at least one part is required");
  std::size_t a = parts.size();
  require(a - 1 < 64 && n <= (UINT64_MAX >> (a - 1)),
          "pigeonhole threshold overflows");
  require(is_bushy_from(bag, n << (a - 1)),
          "leaf bag is not 2^(a-1)*n-bushy from its root");
  for (const PathString& leaf : bag.leaves()) {
    bool covered = false;
    for (const StringPredicate& part : parts)
      if (part(leaf)) {
        covered = true;
        break;
      }
    require(covered, "every leaf must belong to at least one part");
  }

  LeafBag current = bag;
  for (std::size_t offset = 0;; ++offset) {
    std::size_t remaining = a - offset;
    if (remaining == 1) return {offset, std::move(current)};
    std::uint64_t m = n << (remaining - 2);
    SplitResult split = split_bushy(current, m, m, parts[offset]);
    if (split.label == 1) return {offset, std::move(split.bag)};
    current = std::move(split.bag);
  }
}

namespace {

// Memoized reachability: a node is good iff it satisfies p or at least n of
// its successors inside the universe are good.  Children are probed in label
// order and only until n good ones are seen, so assembly re-probes lazily.
class BushySearch {
public:
  BushySearch(std::uint64_t n, const StringPredicate& p,
              const FiniteUniverse& universe)
      : n_(n), p_(p), universe_(universe) {}

  bool good(const PathString& s) {
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    bool result = false;
    if (p_(s)) {
      result = true;
    } else if (s.length() < universe_.depth_bound()) {
      std::uint64_t found = 0;
      for (std::uint32_t k = 0;
           k < universe_.branch_bound() && found < n_; ++k)
        if (good(s.extended(k))) ++found;
      result = found >= n_;
    }
    memo_.emplace(s, result);
    return result;
  }

  void assemble(const PathString& s, std::vector<PathString>& leaves) {
    if (p_(s)) {
      leaves.push_back(s);
      return;
    }
    std::uint64_t taken = 0;
    for (std::uint32_t k = 0; k < universe_.branch_bound() && taken < n_;
         ++k) {
      PathString child = s.extended(k);
      if (good(child)) {
        assemble(child, leaves);
        ++taken;
      }
    }
  }

private:
  std::uint64_t n_;
  const StringPredicate& p_;
  const FiniteUniverse& universe_;
  std::map<PathString, bool> memo_;
};

}  // namespace

std::optional<LeafBag> find_bushy_bag(const PathString& root, std::uint64_t n,
                                      const StringPredicate& p,
                                      const FiniteUniverse& universe) {
  require(n >= 1, "bushiness degree must be positive");
  require(universe.contains(root), "root lies outside the universe");
  BushySearch search(n, p, universe);
  if (!search.good(root)) return std::nullopt;
  std::vector<PathString> leaves;
  search.assemble(root, leaves);
  return LeafBag::make(root, std::move(leaves));
}

LeafBag thin_to_unreachable(const LeafBag& bag, std::uint64_t n,
                            std::uint64_t delta, const StringPredicate& p,
                            const FiniteUniverse& universe) {
  require(n >= 1 && delta >= 1, "degrees must be positive");
  require(universe.contains(bag.root()), "root lies outside the universe");
  for (const PathString& leaf : bag.leaves())
    require(universe.contains(leaf), "leaf lies outside the universe");
  require(n <= UINT64_MAX - delta, "degrees overflow");
  require(is_bushy_from(bag, n + delta - 1),
          "leaf bag is not (n+delta-1)-bushy from its root");
  require(!find_bushy_bag(bag.root(), n, p, universe).has_value(),
          "an n-bushy bag for p is already reachable from the root");

  StringPredicate reaches = [&](const PathString& s) {
    return find_bushy_bag(s, n, p, universe).has_value();
  };
  SplitResult split = split_bushy(bag, n, delta, reaches);
  if (split.label == 1)
    throw std::logic_error(
        "thinning selected the reachable side although the root reaches "
        "no n-bushy bag");
  return split.bag;
}

}  // namespace bushygw
