#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cascademix/types.hpp"

namespace cascademix {

// All text outputs are deterministic: doubles are printed with 17
// significant digits (round-trip exact), no timestamps, and every file
// starts with a `# tool=... config=...` stamp line.

struct FileStamp {
  std::string tool_version;
  std::string config_hash;
};

// FNV-1a hash of a canonical config string, rendered as 16 hex digits.
std::string config_hash(const std::string& canonical);

std::string format_double(double x);  // %.17g

// Sparse edge list `src,dst,weight`, nonzero entries only.
void write_network_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                       const FileStamp& stamp);
Eigen::MatrixXd read_network_csv(const std::filesystem::path& path, int n);

// Binary mask as `src,dst` pairs.
void write_mask_csv(const std::filesystem::path& path, const SupportMask& mask,
                    const FileStamp& stamp);
SupportMask read_mask_csv(const std::filesystem::path& path, int n);

// `cascade_id,node_id,time`, one row per activated node; censored nodes are
// implicit (their time is the window length from the manifest).
void write_cascades_csv(const std::filesystem::path& path, const std::vector<Cascade>& cascades,
                        const FileStamp& stamp);
std::vector<Cascade> read_cascades_csv(const std::filesystem::path& path, int n, double window,
                                       int n_cascades);

void write_pi_csv(const std::filesystem::path& path, const Eigen::VectorXd& pi,
                  const FileStamp& stamp);
Eigen::VectorXd read_pi_csv(const std::filesystem::path& path, int n);

void write_z_csv(const std::filesystem::path& path, const Eigen::MatrixXi& z,
                 const FileStamp& stamp);

// Run manifest: node count, window, cascade count, seed, and the stamp.
struct RunManifest {
  int n = 0;
  double window = 0.0;
  int n_cascades = 0;
  std::uint64_t seed = 0;
  std::string command;
  FileStamp stamp;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace cascademix
