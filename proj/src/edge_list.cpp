#include "averkit/edge_list.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace averkit {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& why) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + why);
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no, const char* what) {
  field = trim(field);
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    parse_fail(line_no, std::string("cannot parse ") + what + " '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

WeightedDigraph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t declared_n = 0;
  bool have_header = false;
  std::size_t max_id_plus_one = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (view.starts_with("n=")) {
      if (have_header) parse_fail(line_no, "repeated n= header");
      declared_n = parse_number<std::size_t>(view.substr(2), line_no, "node count");
      have_header = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = view.find('\t', start);
      fields.push_back(view.substr(start, tab == std::string_view::npos ? tab : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3) {
      parse_fail(line_no, "expected 3 tab-separated fields, got " + std::to_string(fields.size()));
    }
    Edge e;
    e.src = parse_number<NodeId>(fields[0], line_no, "source id");
    e.dst = parse_number<NodeId>(fields[1], line_no, "target id");
    e.weight = parse_number<double>(fields[2], line_no, "weight");
    max_id_plus_one = std::max<std::size_t>(max_id_plus_one, std::max(e.src, e.dst) + std::size_t{1});
    edges.push_back(e);
  }
  const std::size_t n = have_header ? declared_n : max_id_plus_one;
  return WeightedDigraph::from_edges(n, edges);
}

WeightedDigraph read_edge_list_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const WeightedDigraph& g) {
  out << "n=" << g.size() << '\n';
  for (const Edge& e : g.edges()) {
    out << e.src << '\t' << e.dst << '\t' << format_double(e.weight) << '\n';
  }
}

void write_edge_list_file(const std::filesystem::path& path, const WeightedDigraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  write_edge_list(out, g);
}

}  // namespace averkit
