#pragma once

#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bushygw/bushy.hpp"
#include "bushygw/schedule.hpp"

namespace bushygw {

// Malformed input file; what() carries a "file:line: message" diagnostic.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& file, std::size_t line,
             const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " +
                           message),
        file_(file),
        line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

private:
  std::string file_;
  std::size_t line_;
};

// Leaf-bag file: a "root: <path>" line followed by one leaf per line.
// Blank lines are ignored.  Bag invariant violations are reported against
// the file as a whole (line 0).
LeafBag read_leaf_bag(std::istream& in, const std::string& filename);
LeafBag read_leaf_bag_file(const std::string& path);
void write_leaf_bag(std::ostream& out, const LeafBag& bag);

// String-set file: one path per line, blank lines ignored.
std::set<PathString> read_string_set(std::istream& in,
                                     const std::string& filename);
std::set<PathString> read_string_set_file(const std::string& path);

// Trace file: one stage event per line, "1" for a converged stage or
// "2 <index>" for a diverged one.
std::vector<StageEvent> read_trace(std::istream& in,
                                   const std::string& filename);
std::vector<StageEvent> read_trace_file(const std::string& path);

}  // namespace bushygw
