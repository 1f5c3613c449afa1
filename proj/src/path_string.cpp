#include "bushygw/path_string.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace bushygw {

PathString PathString::extended(std::uint32_t k) const {
  std::vector<std::uint32_t> out;
  out.reserve(labels_.size() + 1);
  out = labels_;
  out.push_back(k);
  return PathString(std::move(out));
}

PathString PathString::prefix(std::size_t len) const {
  if (len > labels_.size())
    throw std::invalid_argument("prefix length exceeds string length");
  return PathString(
      std::vector<std::uint32_t>(labels_.begin(), labels_.begin() + len));
}

bool PathString::is_prefix_of(const PathString& other) const {
  if (labels_.size() > other.labels_.size()) return false;
  return std::equal(labels_.begin(), labels_.end(), other.labels_.begin());
}

std::string PathString::to_text() const {
  if (labels_.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += std::to_string(labels_[i]);
  }
  return out;
}

std::optional<PathString> PathString::parse(std::string_view text) {
  std::size_t begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return std::nullopt;
  std::size_t end = text.find_last_not_of(" \t\r\n");
  text = text.substr(begin, end - begin + 1);
  if (text == "-") return PathString();

  std::vector<std::uint32_t> labels;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find_first_of(" \t", pos);
    std::string_view token = text.substr(
        pos, next == std::string_view::npos ? std::string_view::npos
                                            : next - pos);
    if (!token.empty()) {
      std::uint32_t value = 0;
      auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size())
        return std::nullopt;
      labels.push_back(value);
    }
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  if (labels.empty()) return std::nullopt;
  return PathString(std::move(labels));
}

std::strong_ordering PathString::operator<=>(const PathString& other) const {
  if (labels_.size() != other.labels_.size())
    return labels_.size() <=> other.labels_.size();
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] != other.labels_[i]) return labels_[i] <=> other.labels_[i];
  return std::strong_ordering::equal;
}

PathString concat(const PathString& sigma, const PathString& tau) {
  std::vector<std::uint32_t> out;
  out.reserve(sigma.length() + tau.length());
  out = sigma.labels();
  out.insert(out.end(), tau.labels().begin(), tau.labels().end());
  return PathString(std::move(out));
}

bool is_prefix(const PathString& sigma, const PathString& tau) {
  return sigma.is_prefix_of(tau);
}

bool is_antichain(const std::vector<PathString>& strings) {
  for (std::size_t i = 0; i < strings.size(); ++i)
    for (std::size_t j = 0; j < strings.size(); ++j)
      if (i != j && strings[i].is_prefix_of(strings[j])) return false;
  return true;
}

FiniteUniverse::FiniteUniverse(std::uint32_t branch_bound,
                               std::uint32_t depth_bound)
    : branch_bound_(branch_bound), depth_bound_(depth_bound), size_(0) {
  if (branch_bound == 0)
    throw std::invalid_argument("branch bound must be positive");
  // size = sum_{d=0..D} B^d, accumulated with overflow checks.
  std::uint64_t level = 1;
  std::uint64_t total = 0;
  for (std::uint32_t d = 0;; ++d) {
    if (total > UINT64_MAX - level)
      throw std::overflow_error("universe size does not fit in 64 bits");
    total += level;
    if (d == depth_bound) break;
    if (branch_bound > 1 && level > UINT64_MAX / branch_bound)
      throw std::overflow_error("universe size does not fit in 64 bits");
    level *= branch_bound;
  }
  size_ = total;
}

bool FiniteUniverse::contains(const PathString& s) const {
  if (s.length() > depth_bound_) return false;
  for (std::uint32_t label : s.labels())
    if (label >= branch_bound_) return false;
  return true;
}

std::vector<PathString> FiniteUniverse::enumerate(
    std::uint64_t max_enumeration) const {
  if (size_ > max_enumeration)
    throw std::overflow_error("universe too large to enumerate");
  std::vector<PathString> out;
  out.reserve(size_);
  out.emplace_back();
  std::size_t level_begin = 0;
  for (std::uint32_t d = 0; d < depth_bound_; ++d) {
    std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (std::uint32_t k = 0; k < branch_bound_; ++k)
        out.push_back(out[i].extended(k));
    level_begin = level_end;
  }
  return out;
}

}  // namespace bushygw
