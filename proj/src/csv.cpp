#include "pcs/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "pcs/errors.hpp"

namespace pcs {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string_view trimmed(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view raw, std::size_t line_no,
                  std::size_t col_no) {
  const std::string_view s = trimmed(raw);
  double value = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw DataError("non-numeric cell at line " + std::to_string(line_no) +
                    ", column " + std::to_string(col_no + 1));
  return value;
}

}  // namespace

DataMatrix read_csv(const std::filesystem::path& path,
                    const std::string& response_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());

  std::string line;
  do {
    if (!std::getline(in, line))
      throw DataError("no header row in " + path.string());
  } while (!line.empty() && line[0] == '#');
  auto header = split_line(line);
  for (auto& h : header) h = std::string(trimmed(h));
  for (std::size_t a = 0; a < header.size(); ++a)
    for (std::size_t b = a + 1; b < header.size(); ++b)
      if (header[a] == header[b])
        throw DataError("duplicate column name '" + header[a] + "' in " +
                        path.string());

  std::size_t response_col = header.size();
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == response_column) response_col = j;
  if (response_col == header.size())
    throw DataError("response column '" + response_column + "' not found in " +
                    path.string());

  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (j != response_col) names.push_back(header[j]);

  const std::size_t ncol = header.size();
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    if (line[0] == '#') continue;
    const auto cells = split_line(line);
    if (cells.size() != ncol)
      throw DataError("ragged row at line " + std::to_string(line_no) +
                      ": expected " + std::to_string(ncol) + " cells, got " +
                      std::to_string(cells.size()));
    std::vector<double> row(ncol);
    for (std::size_t j = 0; j < ncol; ++j)
      row[j] = parse_cell(cells[j], line_no, j);
    rows.push_back(std::move(row));
  }

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(ncol - 1);
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index jj = 0;
    for (std::size_t j = 0; j < ncol; ++j) {
      if (j == response_col)
        y(i) = rows[static_cast<std::size_t>(i)][j];
      else
        x(i, jj++) = rows[static_cast<std::size_t>(i)][j];
    }
  }
  return make_data_matrix(std::move(x), std::move(y), std::move(names));
}

void write_csv(const std::filesystem::path& path, const DataMatrix& data,
               const std::string& response_column, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());

  if (!comment.empty()) out << "# " << comment << '\n';
  for (Eigen::Index j = 0; j < data.p(); ++j) {
    if (j > 0) out << ',';
    out << data.feature_names[static_cast<std::size_t>(j)];
  }
  out << ',' << response_column << '\n';

  char buf[32];
  auto emit = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      emit(data.x(i, j));
      out << ',';
    }
    emit(data.y(i));
    out << '\n';
  }
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace pcs
