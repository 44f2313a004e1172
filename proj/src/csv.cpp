#include "cpde/csv.hpp"

#include <fstream>
#include <sstream>

#include "cpde/errors.hpp"
#include "cpde/format.hpp"

namespace cpde {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  cells.push_back(cell);
  for (auto& c : cells) {
    const auto b = c.find_first_not_of(" \t");
    const auto e = c.find_last_not_of(" \t");
    c = b == std::string::npos ? "" : c.substr(b, e - b + 1);
  }
  return cells;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

std::vector<std::pair<UserId, UserId>> read_graph_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw parse_error("empty graph file: " + path);
  if (split_csv_line(lines[0]) != std::vector<std::string>{"follower", "followee"})
    throw parse_error("graph file must start with header 'follower,followee'", 1);
  std::vector<std::pair<UserId, UserId>> records;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const auto cells = split_csv_line(lines[i]);
    if (cells.size() != 2)
      throw parse_error("expected 2 columns, got " + std::to_string(cells.size()),
                        static_cast<long>(i + 1));
    records.emplace_back(parse_int(cells[0], static_cast<long>(i + 1)),
                         parse_int(cells[1], static_cast<long>(i + 1)));
  }
  return records;
}

std::vector<std::pair<UserId, double>> read_cascade_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw parse_error("empty cascade file: " + path);
  if (split_csv_line(lines[0]) != std::vector<std::string>{"user_id", "time_hours"})
    throw parse_error("cascade file must start with header 'user_id,time_hours'", 1);
  std::vector<std::pair<UserId, double>> events;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const auto cells = split_csv_line(lines[i]);
    if (cells.size() != 2)
      throw parse_error("expected 2 columns, got " + std::to_string(cells.size()),
                        static_cast<long>(i + 1));
    events.emplace_back(parse_int(cells[0], static_cast<long>(i + 1)),
                        parse_double(cells[1], static_cast<long>(i + 1)));
  }
  return events;
}

std::set<UserId> read_sources_file(const std::string& path) {
  const auto lines = read_lines(path);
  std::set<UserId> sources;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    sources.insert(parse_int(split_csv_line(lines[i])[0], static_cast<long>(i + 1)));
  }
  if (sources.empty()) throw parse_error("sources file lists no user ids: " + path);
  return sources;
}

void write_density_csv(const std::string& path, const DensityField& field) {
  std::ostringstream out;
  out << "distance";
  for (double t : field.times) out << ',' << format_double(t);
  const bool sidecar = !field.group_sizes.empty();
  if (sidecar) out << ",group_size";
  out << '\n';
  for (size_t r = 0; r < field.distances.size(); ++r) {
    out << field.distances[r];
    for (Eigen::Index c = 0; c < field.values.cols(); ++c)
      out << ',' << format_double(field.values(static_cast<Eigen::Index>(r), c));
    if (sidecar) {
      auto it = field.group_sizes.find(field.distances[r]);
      out << ',' << (it == field.group_sizes.end() ? 0 : it->second);
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

DensityField read_density_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw parse_error("empty density file: " + path);
  auto header = split_csv_line(lines[0]);
  if (header.size() < 2 || header[0] != "distance")
    throw parse_error("density file must start with header 'distance,<times...>'", 1);
  DensityField f;
  const bool sidecar = header.back() == "group_size";
  const size_t ntimes = header.size() - 1 - (sidecar ? 1 : 0);
  if (ntimes == 0) throw parse_error("density header lists no time columns", 1);
  for (size_t c = 0; c < ntimes; ++c) f.times.push_back(parse_double(header[c + 1], 1));

  std::vector<std::vector<double>> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const auto cells = split_csv_line(lines[i]);
    if (cells.size() != header.size())
      throw parse_error("expected " + std::to_string(header.size()) + " columns, got " +
                            std::to_string(cells.size()),
                        static_cast<long>(i + 1));
    const int x = static_cast<int>(parse_int(cells[0], static_cast<long>(i + 1)));
    f.distances.push_back(x);
    std::vector<double> row(ntimes);
    for (size_t c = 0; c < ntimes; ++c) row[c] = parse_double(cells[c + 1], static_cast<long>(i + 1));
    rows.push_back(std::move(row));
    if (sidecar)
      f.group_sizes[x] = parse_int(cells[header.size() - 1], static_cast<long>(i + 1));
  }
  f.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ntimes));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < ntimes; ++c)
      f.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return f;
}

void write_solution_csv(const std::string& path, const SolutionField& field, int component) {
  const auto& block = field.component(component);
  std::ostringstream out;
  out << 'x';
  for (double t : field.times) out << ',' << format_double(t);
  out << '\n';
  for (Eigen::Index i = 0; i < field.x.size(); ++i) {
    out << format_double(field.x[i]);
    for (Eigen::Index c = 0; c < block.cols(); ++c) out << ',' << format_double(block(i, c));
    out << '\n';
  }
  write_text_file(path, out.str());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot write file: " + path);
  out << content;
}

}  // namespace cpde
