#include "circmc/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace circmc {

std::string format_double(double v) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, result.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  double v = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), v);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<ChainState>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const std::size_t d = trace.empty() ? 0 : trace.front().x.size();
  const std::size_t m = trace.empty() ? 0 : trace.front().p.size();
  out << 't';
  for (std::size_t i = 1; i <= d; ++i) out << ",x" << i;
  for (std::size_t i = 1; i <= m; ++i) out << ",p" << i;
  out << '\n';
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const auto& s = trace[t];
    if (s.x.size() != d || s.p.size() != m) {
      throw std::invalid_argument("write_trace_csv: states differ in shape");
    }
    out << t;
    for (double v : s.x) out << ',' << format_double(v);
    for (double v : s.p) out << ',' << format_double(v);
    out << '\n';
  }
}

std::vector<ChainState> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("trace CSV: missing header");
  const auto header = split_csv_line(line);
  if (header.empty() || header[0] != "t") throw std::invalid_argument("trace CSV: bad header");
  std::size_t d = 0;
  std::size_t m = 0;
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (!header[i].empty() && header[i][0] == 'x') {
      ++d;
    } else if (!header[i].empty() && header[i][0] == 'p') {
      ++m;
    } else {
      throw std::invalid_argument("trace CSV: unknown column '" + header[i] + "'");
    }
  }
  std::vector<ChainState> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 1 + d + m) throw std::invalid_argument("trace CSV: ragged row");
    ChainState s;
    for (std::size_t i = 0; i < d; ++i) s.x.push_back(parse_double(fields[1 + i]));
    for (std::size_t i = 0; i < m; ++i) s.p.push_back(parse_double(fields[1 + d + i]));
    trace.push_back(std::move(s));
  }
  return trace;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << value.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return nlohmann::json::parse(in);
}

}  // namespace circmc
