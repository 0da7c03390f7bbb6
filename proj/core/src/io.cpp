#include "cascademix/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cascademix/version.hpp"

namespace cascademix {

namespace {

std::string stamp_line(const FileStamp& stamp) {
  return "# tool=cascademix-" + stamp.tool_version + " config=" + stamp.config_hash;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  return in;
}

// Lines of a CSV body: stamp/comment lines are skipped and the header is
// checked verbatim.
std::vector<std::string> read_csv_body(const std::filesystem::path& path,
                                       const std::string& header) {
  std::ifstream in = open_in(path);
  std::vector<std::string> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != header)
        throw ValidationError(path.string() + ": expected header '" + header + "'");
      header_seen = true;
      continue;
    }
    rows.push_back(line);
  }
  if (!header_seen) throw ValidationError(path.string() + ": missing header");
  return rows;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw ValidationError("malformed number '" + s + "'");
  return v;
}

long parse_long(const std::string& s) {
  std::size_t pos = 0;
  const long v = std::stol(s, &pos);
  if (pos != s.size()) throw ValidationError("malformed integer '" + s + "'");
  return v;
}

}  // namespace

std::string config_hash(const std::string& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_network_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                       const FileStamp& stamp) {
  std::ofstream out = open_out(path);
  out << stamp_line(stamp) << "\nsrc,dst,weight\n";
  for (int j = 0; j < m.rows(); ++j)
    for (int i = 0; i < m.cols(); ++i)
      if (m(j, i) != 0.0) out << j << ',' << i << ',' << format_double(m(j, i)) << '\n';
}

Eigen::MatrixXd read_network_csv(const std::filesystem::path& path, int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const std::string& row : read_csv_body(path, "src,dst,weight")) {
    const auto f = split_csv(row);
    if (f.size() != 3) throw ValidationError(path.string() + ": bad row '" + row + "'");
    const long j = parse_long(f[0]), i = parse_long(f[1]);
    if (j < 0 || j >= n || i < 0 || i >= n)
      throw ValidationError(path.string() + ": node id out of range");
    m(j, i) = parse_double(f[2]);
  }
  return m;
}

void write_mask_csv(const std::filesystem::path& path, const SupportMask& mask,
                    const FileStamp& stamp) {
  std::ofstream out = open_out(path);
  out << stamp_line(stamp) << "\nsrc,dst\n";
  for (int j = 0; j < mask.rows(); ++j)
    for (int i = 0; i < mask.cols(); ++i)
      if (mask(j, i) != 0) out << j << ',' << i << '\n';
}

SupportMask read_mask_csv(const std::filesystem::path& path, int n) {
  SupportMask mask = SupportMask::Zero(n, n);
  for (const std::string& row : read_csv_body(path, "src,dst")) {
    const auto f = split_csv(row);
    if (f.size() != 2) throw ValidationError(path.string() + ": bad row '" + row + "'");
    const long j = parse_long(f[0]), i = parse_long(f[1]);
    if (j < 0 || j >= n || i < 0 || i >= n)
      throw ValidationError(path.string() + ": node id out of range");
    mask(j, i) = 1;
  }
  validate_mask(mask);
  return mask;
}

void write_cascades_csv(const std::filesystem::path& path, const std::vector<Cascade>& cascades,
                        const FileStamp& stamp) {
  std::ofstream out = open_out(path);
  out << stamp_line(stamp) << "\ncascade_id,node_id,time\n";
  for (std::size_t c = 0; c < cascades.size(); ++c)
    for (int i = 0; i < cascades[c].size(); ++i)
      if (cascades[c].activated(i))
        out << c << ',' << i << ',' << format_double(cascades[c].times[i]) << '\n';
}

std::vector<Cascade> read_cascades_csv(const std::filesystem::path& path, int n, double window,
                                       int n_cascades) {
  std::vector<Eigen::VectorXd> times(static_cast<std::size_t>(n_cascades),
                                     Eigen::VectorXd::Constant(n, window));
  for (const std::string& row : read_csv_body(path, "cascade_id,node_id,time")) {
    const auto f = split_csv(row);
    if (f.size() != 3) throw ValidationError(path.string() + ": bad row '" + row + "'");
    const long c = parse_long(f[0]), i = parse_long(f[1]);
    if (c < 0 || c >= n_cascades) throw ValidationError(path.string() + ": cascade id out of range");
    if (i < 0 || i >= n) throw ValidationError(path.string() + ": node id out of range");
    times[static_cast<std::size_t>(c)][i] = parse_double(f[2]);
  }
  std::vector<Cascade> cascades;
  cascades.reserve(times.size());
  for (auto& t : times) cascades.emplace_back(std::move(t), window);
  return cascades;
}

void write_pi_csv(const std::filesystem::path& path, const Eigen::VectorXd& pi,
                  const FileStamp& stamp) {
  std::ofstream out = open_out(path);
  out << stamp_line(stamp) << "\nnode_id,pi\n";
  for (Eigen::Index i = 0; i < pi.size(); ++i)
    out << i << ',' << format_double(pi[i]) << '\n';
}

Eigen::VectorXd read_pi_csv(const std::filesystem::path& path, int n) {
  Eigen::VectorXd pi = Eigen::VectorXd::Constant(n, -1.0);
  for (const std::string& row : read_csv_body(path, "node_id,pi")) {
    const auto f = split_csv(row);
    if (f.size() != 2) throw ValidationError(path.string() + ": bad row '" + row + "'");
    const long i = parse_long(f[0]);
    if (i < 0 || i >= n) throw ValidationError(path.string() + ": node id out of range");
    pi[i] = parse_double(f[1]);
  }
  for (Eigen::Index i = 0; i < pi.size(); ++i)
    if (pi[i] < 0.0) throw ValidationError(path.string() + ": missing pi entry");
  return pi;
}

void write_z_csv(const std::filesystem::path& path, const Eigen::MatrixXi& z,
                 const FileStamp& stamp) {
  std::ofstream out = open_out(path);
  out << stamp_line(stamp) << "\ncascade_id,node_id,z\n";
  for (Eigen::Index c = 0; c < z.rows(); ++c)
    for (Eigen::Index i = 0; i < z.cols(); ++i) out << c << ',' << i << ',' << z(c, i) << '\n';
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  nlohmann::json j;
  j["tool_version"] = m.stamp.tool_version;
  j["config_hash"] = m.stamp.config_hash;
  j["seed"] = m.seed;
  j["n"] = m.n;
  j["window"] = m.window;
  j["n_cascades"] = m.n_cascades;
  j["command"] = m.command;
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  RunManifest m;
  try {
    m.stamp.tool_version = j.at("tool_version").get<std::string>();
    m.stamp.config_hash = j.at("config_hash").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.n = j.at("n").get<int>();
    m.window = j.at("window").get<double>();
    m.n_cascades = j.at("n_cascades").get<int>();
    m.command = j.value("command", "");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return m;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
}

}  // namespace cascademix
