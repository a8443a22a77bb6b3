#include "choiceevo/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace choiceevo {

std::string format_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_metagame_csv(std::ostream& os, const MetaGame& m) {
  os << "type";
  for (const auto& l : m.labels()) os << ',' << l;
  os << '\n';
  for (int r = 0; r < m.size(); ++r) {
    os << m.labels()[r];
    for (int c = 0; c < m.size(); ++c) os << ',' << format_fixed6(m(r, c));
    os << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

MetaGame read_metagame_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("meta-game CSV is empty");
  auto header = split_csv_line(line);
  if (header.size() < 2) throw std::runtime_error("meta-game CSV header has no labels");
  std::vector<std::string> labels(header.begin() + 1, header.end());
  const auto n = static_cast<Eigen::Index>(labels.size());

  Eigen::MatrixXd fitness(n, n);
  Eigen::Index r = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    if (r >= n) throw std::runtime_error("meta-game CSV has more rows than labels");
    auto cells = split_csv_line(line);
    if (static_cast<Eigen::Index>(cells.size()) != n + 1)
      throw std::runtime_error("meta-game CSV row " + std::to_string(r + 1) + " has wrong width");
    if (cells[0] != labels[r])
      throw std::runtime_error("meta-game CSV row label '" + cells[0] + "' does not match header");
    for (Eigen::Index c = 0; c < n; ++c) {
      try {
        std::size_t used = 0;
        fitness(r, c) = std::stod(cells[c + 1], &used);
        if (used != cells[c + 1].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw std::runtime_error("meta-game CSV has a non-numeric entry '" + cells[c + 1] + "'");
      }
    }
    ++r;
  }
  if (r != n) throw std::runtime_error("meta-game CSV has fewer rows than labels");
  return MetaGame(std::move(labels), std::move(fitness));
}

MetaGame read_metagame_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open meta-game file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw std::runtime_error("meta-game file '" + path.string() + "' is empty");
  if (text[first] == '{') {
    try {
      return nlohmann::json::parse(text).get<MetaGame>();
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("malformed meta-game JSON in '" + path.string() + "': " + e.what());
    }
  }
  std::istringstream is(text);
  return read_metagame_csv(is);
}

void write_trajectory_csv_header(std::ostream& os, std::span<const std::string> labels) {
  os << "start,iteration";
  for (const auto& l : labels) os << ',' << l;
  os << '\n';
}

void write_trajectory_csv_rows(std::ostream& os, int start, const Trajectory& t) {
  for (const auto& rec : t.states) {
    os << start << ',' << rec.iteration;
    for (int i = 0; i < rec.state.size(); ++i) os << ',' << format_fixed6(rec.state[i]);
    os << '\n';
  }
}

}  // namespace choiceevo
