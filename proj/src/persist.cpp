#include "svdstack/persist.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace svdstack {

namespace {

constexpr std::array<char, 4> kMagic = {'M', 'A', 'T', '1'};
constexpr std::uint32_t kVersionF64 = 1;
constexpr std::uint32_t kVersionF32 = 2;

void put_u32(std::ostream& out, std::uint32_t v) {
    std::array<unsigned char, 4> b{};
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b.data()), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b.data()), b.size());
}

std::uint32_t get_u32(std::istream& in) {
    std::array<unsigned char, 4> b{};
    in.read(reinterpret_cast<char*>(b.data()), b.size());
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{b[i]} << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> b{};
    in.read(reinterpret_cast<char*>(b.data()), b.size());
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
    return v;
}

// Payloads are written via byte-level copies of the native representation;
// little-endian IEEE-754 is assumed (checked nowhere else in this codebase,
// and true for every platform this builds on).
static_assert(std::numeric_limits<double>::is_iec559);
static_assert(std::numeric_limits<float>::is_iec559);

nlohmann::json meta_to_json(const MatrixMeta& meta) {
    nlohmann::json j;
    j["provenance"] = meta.provenance;
    if (meta.k) j["k"] = *meta.k;
    if (meta.seed) j["seed"] = *meta.seed;
    j["state_flags"] = meta.state_flags;
    j["row_label_file"] = meta.row_label_file;
    if (!meta.extra_json.empty())
        j["extra"] = nlohmann::json::parse(meta.extra_json);
    return j;
}

MatrixMeta meta_from_json(const nlohmann::json& j) {
    MatrixMeta meta;
    meta.provenance = j.value("provenance", "");
    if (j.contains("k")) meta.k = j["k"].get<Eigen::Index>();
    if (j.contains("seed")) meta.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("state_flags"))
        meta.state_flags = j["state_flags"].get<std::vector<std::string>>();
    meta.row_label_file = j.value("row_label_file", "");
    if (j.contains("extra")) meta.extra_json = j["extra"].dump();
    return meta;
}

void atomic_replace(const std::filesystem::path& tmp, const std::filesystem::path& path) {
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw MatrixIoError(MatrixIoStatus::IoFailure,
                            "cannot move " + tmp.string() + " to " + path.string());
    }
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& matrix_path) {
    std::filesystem::path p = matrix_path;
    p += ".meta.json";
    return p;
}

void write_matrix(const Eigen::MatrixXd& m, const std::filesystem::path& path,
                  const MatrixMeta& meta, StoragePrecision precision) {
    if (!m.allFinite())
        throw NumericError("refusing to write matrix with non-finite entries to " +
                           path.string());

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw MatrixIoError(MatrixIoStatus::IoFailure, "cannot open " + tmp.string());
        out.write(kMagic.data(), kMagic.size());
        put_u32(out, precision == StoragePrecision::Float64 ? kVersionF64 : kVersionF32);
        put_u64(out, static_cast<std::uint64_t>(m.rows()));
        put_u64(out, static_cast<std::uint64_t>(m.cols()));
        if (precision == StoragePrecision::Float64) {
            std::vector<double> row(static_cast<std::size_t>(m.cols()));
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                for (Eigen::Index j = 0; j < m.cols(); ++j)
                    row[static_cast<std::size_t>(j)] = m(i, j);
                out.write(reinterpret_cast<const char*>(row.data()),
                          static_cast<std::streamsize>(row.size() * sizeof(double)));
            }
        } else {
            std::vector<float> row(static_cast<std::size_t>(m.cols()));
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                for (Eigen::Index j = 0; j < m.cols(); ++j)
                    row[static_cast<std::size_t>(j)] = static_cast<float>(m(i, j));
                out.write(reinterpret_cast<const char*>(row.data()),
                          static_cast<std::streamsize>(row.size() * sizeof(float)));
            }
        }
        if (!out)
            throw MatrixIoError(MatrixIoStatus::IoFailure, "write failed: " + tmp.string());
    }
    atomic_replace(tmp, path);

    const std::filesystem::path meta_tmp = sidecar_path(path).string() + ".tmp";
    {
        std::ofstream out(meta_tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw MatrixIoError(MatrixIoStatus::IoFailure,
                                "cannot open " + meta_tmp.string());
        out << meta_to_json(meta).dump(2) << '\n';
        if (!out)
            throw MatrixIoError(MatrixIoStatus::IoFailure,
                                "write failed: " + meta_tmp.string());
    }
    atomic_replace(meta_tmp, sidecar_path(path));
}

LoadedMatrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw MatrixIoError(MatrixIoStatus::IoFailure, "cannot open " + path.string());

    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic)
        throw MatrixIoError(MatrixIoStatus::BadMagic, "bad magic in " + path.string());

    const std::uint32_t version = get_u32(in);
    if (version != kVersionF64 && version != kVersionF32)
        throw MatrixIoError(MatrixIoStatus::BadVersion,
                            "unsupported version " + std::to_string(version) + " in " +
                                path.string());

    const std::uint64_t rows = get_u64(in);
    const std::uint64_t cols = get_u64(in);
    if (!in)
        throw MatrixIoError(MatrixIoStatus::LengthMismatch,
                            "truncated header in " + path.string());

    const std::size_t elem = version == kVersionF64 ? sizeof(double) : sizeof(float);
    const std::uintmax_t expected = 24 + rows * cols * elem;
    const std::uintmax_t actual = std::filesystem::file_size(path);
    if (actual != expected)
        throw MatrixIoError(MatrixIoStatus::LengthMismatch,
                            "payload length mismatch in " + path.string() + ": expected " +
                                std::to_string(expected) + " bytes, found " +
                                std::to_string(actual));

    LoadedMatrix loaded;
    loaded.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    if (version == kVersionF64) {
        std::vector<double> row(cols);
        for (std::uint64_t i = 0; i < rows; ++i) {
            in.read(reinterpret_cast<char*>(row.data()),
                    static_cast<std::streamsize>(cols * sizeof(double)));
            for (std::uint64_t j = 0; j < cols; ++j)
                loaded.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    row[j];
        }
    } else {
        std::vector<float> row(cols);
        for (std::uint64_t i = 0; i < rows; ++i) {
            in.read(reinterpret_cast<char*>(row.data()),
                    static_cast<std::streamsize>(cols * sizeof(float)));
            for (std::uint64_t j = 0; j < cols; ++j)
                loaded.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    static_cast<double>(row[j]);
        }
    }
    if (!in)
        throw MatrixIoError(MatrixIoStatus::LengthMismatch,
                            "truncated payload in " + path.string());

    const std::filesystem::path side = sidecar_path(path);
    if (std::filesystem::exists(side)) {
        std::ifstream meta_in(side, std::ios::binary);
        if (meta_in) {
            try {
                loaded.meta = meta_from_json(nlohmann::json::parse(meta_in));
            } catch (const nlohmann::json::exception& e) {
                throw MatrixIoError(MatrixIoStatus::IoFailure,
                                    "malformed sidecar " + side.string() + ": " + e.what());
            }
        }
    }
    return loaded;
}

}  // namespace svdstack
