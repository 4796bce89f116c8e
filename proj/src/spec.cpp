#include "mixer/spec.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mixer/error.hpp"

namespace mixer {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return c >= '0' && c <= '9'; });
}

std::uint32_t parse_u32(const std::string& s, const std::string& context) {
  if (!all_digits(s) || s.size() > 9) fail(Errc::spec_syntax, "expected a number in '" + context + "', got '" + s + "'");
  return static_cast<std::uint32_t>(std::stoul(s));
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open generator file " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  if (out.empty()) fail(Errc::spec_syntax, "generator file " + path + " is empty");
  return out;
}

std::vector<std::uint32_t> parse_matrix_entries(std::string s, const std::string& context) {
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') fail(Errc::spec_syntax, "unterminated matrix in '" + context + "'");
    s = s.substr(1, s.size() - 2);
    std::replace(s.begin(), s.end(), ';', ',');
  }
  std::vector<std::uint32_t> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_u32(trim(item), context));
  if (out.size() != 4) fail(Errc::spec_syntax, "a 2x2 matrix needs four entries in '" + context + "'");
  return out;
}

}  // namespace

GroupSpec parse_spec(const std::string& raw, std::uint64_t max_order) {
  const std::string text = trim(raw);
  const auto colon = text.find(':');
  if (colon == std::string::npos) fail(Errc::spec_syntax, "group spec '" + text + "' has no ':'");
  const std::string head = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  GroupSpec spec;
  if (head == "A" || head == "S") {
    const auto n = parse_u32(rest, text);
    spec = head == "A" ? GroupSpec::alternating(n) : GroupSpec::symmetric(n);
  } else if (head == "SL2" || head == "PSL2") {
    const auto q = parse_u32(rest, text);
    spec = head == "SL2" ? GroupSpec::sl2(q) : GroupSpec::psl2(q);
  } else if (head == "permgen") {
    if (rest.empty()) fail(Errc::spec_syntax, "permgen needs a file");
    const auto lines = read_lines(rest);
    std::uint32_t degree = 0;
    for (const auto& l : lines) degree = std::max<std::uint32_t>(degree, static_cast<std::uint32_t>(parse_cycles(l, 0).size()));
    std::vector<Permutation> gens;
    for (const auto& l : lines) gens.push_back(parse_cycles(l, degree));
    spec = GroupSpec::generated(std::move(gens), degree);
    spec.text = text;
  } else if (head == "matgen") {
    const auto comma = rest.rfind(',');
    if (comma == std::string::npos || rest.compare(comma + 1, 2, "q=") != 0) {
      fail(Errc::spec_syntax, "matgen needs the form matgen:<file>,q=<q>");
    }
    const auto q = parse_u32(rest.substr(comma + 3), text);
    std::uint32_t p = 0;
    std::uint32_t k = 0;
    if (!prime_power(q, p, k)) fail(Errc::unsupported_parameters, text + ": q is not a prime power");
    FiniteFieldSpec field = ff_make(p, k);
    std::vector<Matrix2> gens;
    for (const auto& l : read_lines(rest.substr(0, comma))) {
      const auto e = parse_matrix_entries(l, l);
      for (auto v : e) {
        if (v >= q) fail(Errc::spec_syntax, "matrix entry " + std::to_string(v) + " is not an element of GF(" + std::to_string(q) + ")");
      }
      gens.push_back(Matrix2{e[0], e[1], e[2], e[3]});
    }
    spec = GroupSpec::generated(std::move(gens), std::move(field));
    spec.text = text;
  } else {
    fail(Errc::spec_syntax, "unknown group family '" + head + "'");
  }
  spec.max_order = max_order;
  spec.validate();
  return spec;
}

Index parse_element(const std::string& raw, const GroupTable& group) {
  const std::string text = trim(raw);
  if (text.empty()) fail(Errc::spec_syntax, "empty element");
  if (all_digits(text)) {
    const auto i = std::stoull(text.substr(0, 12));
    if (text.size() > 12 || i >= group.order()) fail(Errc::invalid_argument, "element index " + text + " out of range");
    return static_cast<Index>(i);
  }
  if (text == "e" || text == "id" || text == "()") return group.identity();
  if (text.rfind("hex:", 0) == 0) {
    const std::string hex = text.substr(4);
    for (Index i = 0; i < group.order(); ++i) {
      if (group.hex(i) == hex) return i;
    }
    fail(Errc::invalid_argument, "no element with canonical bytes " + hex);
  }
  if (text.front() == '(') {
    if (!group.is_permutation_group()) fail(Errc::spec_syntax, "cycle notation given for a matrix group");
    const auto perm = parse_cycles(text, static_cast<std::uint32_t>(group.width()));
    return group.index_of_raw(std::vector<std::uint16_t>(perm.begin(), perm.end()));
  }
  if (text.find(',') != std::string::npos) {
    if (group.is_permutation_group()) fail(Errc::spec_syntax, "matrix given for a permutation group");
    const auto e = parse_matrix_entries(text, text);
    std::vector<std::uint16_t> entries;
    for (auto v : e) {
      if (v >= group.spec().q) fail(Errc::invalid_argument, "matrix entry out of range in '" + text + "'");
      entries.push_back(static_cast<std::uint16_t>(v));
    }
    return group.index_of_raw(entries);
  }
  fail(Errc::spec_syntax, "cannot parse element '" + text + "'");
}

std::uint32_t parse_class(const std::string& raw, const GroupTable& group, const ClassData& classes) {
  const std::string text = trim(raw);
  if (all_digits(text)) {
    if (text.size() > 9 || std::stoul(text) >= classes.count()) {
      fail(Errc::invalid_argument, "class index " + text + " out of range (" + std::to_string(classes.count()) + " classes)");
    }
    return static_cast<std::uint32_t>(std::stoul(text));
  }
  return classes.class_of[parse_element(text, group)];
}

}  // namespace mixer
