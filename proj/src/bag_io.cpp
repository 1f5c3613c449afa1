#include "bushygw/bag_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace bushygw {

namespace {

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return in;
}

}  // namespace

LeafBag read_leaf_bag(std::istream& in, const std::string& filename) {
  std::string line;
  std::size_t line_no = 0;
  PathString root;
  bool have_root = false;
  std::vector<PathString> leaves;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    if (!have_root) {
      constexpr std::string_view kPrefix = "root:";
      if (line.rfind(kPrefix, 0) != 0)
        throw ParseError(filename, line_no,
                         "expected a 'root: <path>' line first");
      auto parsed = PathString::parse(line.substr(kPrefix.size()));
      if (!parsed)
        throw ParseError(filename, line_no, "not a valid path: '" +
                                                line.substr(kPrefix.size()) +
                                                "'");
      root = *parsed;
      have_root = true;
      continue;
    }
    auto parsed = PathString::parse(line);
    if (!parsed)
      throw ParseError(filename, line_no, "not a valid path: '" + line + "'");
    leaves.push_back(*parsed);
  }
  if (!have_root)
    throw ParseError(filename, line_no, "missing 'root: <path>' line");
  try {
    return LeafBag::make(std::move(root), std::move(leaves));
  } catch (const std::invalid_argument& e) {
    throw ParseError(filename, 0, e.what());
  }
}

LeafBag read_leaf_bag_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return read_leaf_bag(in, path);
}

void write_leaf_bag(std::ostream& out, const LeafBag& bag) {
  out << "root: " << bag.root().to_text() << "\n";
  for (const PathString& leaf : bag.leaves()) out << leaf.to_text() << "\n";
}

std::set<PathString> read_string_set(std::istream& in,
                                     const std::string& filename) {
  std::set<PathString> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    auto parsed = PathString::parse(line);
    if (!parsed)
      throw ParseError(filename, line_no, "not a valid path: '" + line + "'");
    out.insert(*parsed);
  }
  return out;
}

std::set<PathString> read_string_set_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return read_string_set(in, path);
}

std::vector<StageEvent> read_trace(std::istream& in,
                                   const std::string& filename) {
  std::vector<StageEvent> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    auto parsed = PathString::parse(line);  // reuse the integer-list parser
    if (parsed && parsed->length() == 1 && parsed->at(0) == 1) {
      out.push_back(StageEvent{StageEvent::Kind::kConverged, 0});
    } else if (parsed && parsed->length() == 2 && parsed->at(0) == 2) {
      out.push_back(StageEvent{StageEvent::Kind::kDiverged, parsed->at(1)});
    } else {
      throw ParseError(filename, line_no,
                       "expected '1' or '2 <index>', got '" + line + "'");
    }
  }
  return out;
}

std::vector<StageEvent> read_trace_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return read_trace(in, path);
}

}  // namespace bushygw
