#include "adaptctl/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "adaptctl/error.hpp"

namespace adaptctl::csv {

std::string format(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_row(std::ostream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << format(values[i]);
  }
  os << '\n';
}

std::string trajectory_header(const sim::Trajectory& traj) {
  std::ostringstream os;
  os << 't';
  for (Eigen::Index i = 0; i < traj.e.rows(); ++i) os << ",e" << i + 1;
  for (Eigen::Index i = 0; i < traj.W_hat.rows(); ++i) os << ",What" << i + 1;
  os << ",u";
  for (Eigen::Index i = 0; i < traj.q.rows(); ++i) os << ",q" << i + 1;
  if (traj.z)
    for (Eigen::Index i = 0; i < traj.z->rows(); ++i) os << ",z" << i + 1;
  return os.str();
}

void write_trajectory(std::ostream& os, const sim::Trajectory& traj) {
  os << trajectory_header(traj) << '\n';
  std::vector<double> row;
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    const auto c = static_cast<Eigen::Index>(k);
    row.clear();
    row.push_back(traj.t[k]);
    for (Eigen::Index i = 0; i < traj.e.rows(); ++i) row.push_back(traj.e(i, c));
    for (Eigen::Index i = 0; i < traj.W_hat.rows(); ++i) row.push_back(traj.W_hat(i, c));
    row.push_back(traj.u(c));
    for (Eigen::Index i = 0; i < traj.q.rows(); ++i) row.push_back(traj.q(i, c));
    if (traj.z)
      for (Eigen::Index i = 0; i < traj.z->rows(); ++i) row.push_back((*traj.z)(i, c));
    write_row(os, row);
  }
}

void write_bode(std::ostream& os, const std::vector<freqresp::SensitivitySample>& table) {
  os << "omega,mag_db,phase_deg,re,im\n";
  for (const auto& s : table)
    write_row(os, {s.omega, s.mag_db, s.phase_deg, s.value.real(), s.value.imag()});
}

std::string bode_file_name(const std::string& law, const std::string& tag) {
  return "bode_" + law + "_" + tag + ".csv";
}

void write_table(std::ostream& os, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw ValidationError("csv: header/column count mismatch");
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw ValidationError("csv: ragged columns");
  std::vector<double> row(columns.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) row[c] = columns[c][r];
    write_row(os, row);
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace adaptctl::csv
