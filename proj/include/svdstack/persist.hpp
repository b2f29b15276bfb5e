#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "svdstack/common.hpp"

namespace svdstack {

// MAT1 container: "MAT1" magic, u32 version (little-endian), u64 rows, u64
// cols, then the row-major payload. Version 1 stores IEEE-754 doubles,
// version 2 stores floats (intermediate count matrices only, never
// representations). A JSON sidecar lives next to the file as
// `<name>.meta.json`.

enum class MatrixIoStatus {
    Ok,
    BadMagic,
    BadVersion,
    LengthMismatch,
    IoFailure,
};

class MatrixIoError : public DataError {
  public:
    MatrixIoError(MatrixIoStatus status, const std::string& what)
        : DataError(what), status_(status) {}
    MatrixIoStatus status() const { return status_; }

  private:
    MatrixIoStatus status_;
};

struct MatrixMeta {
    std::string provenance;  // e.g. "svd2/1layer", "raw-counts"
    std::optional<Eigen::Index> k;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> state_flags;
    std::string row_label_file;  // relative reference, may be empty
    std::string extra_json;      // serialized object with pipeline parameters
};

enum class StoragePrecision { Float64, Float32 };

/// Writes matrix + sidecar atomically (temp file, then rename).
/// Non-finite entries are refused with NumericError.
void write_matrix(const Eigen::MatrixXd& m, const std::filesystem::path& path,
                  const MatrixMeta& meta = {},
                  StoragePrecision precision = StoragePrecision::Float64);

struct LoadedMatrix {
    Eigen::MatrixXd values;
    MatrixMeta meta;  // default-initialized when no sidecar exists
};

/// Validates magic, version and payload length before reading.
LoadedMatrix read_matrix(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& matrix_path);

}  // namespace svdstack
