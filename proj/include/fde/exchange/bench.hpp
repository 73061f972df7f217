#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fde/exchange/wire.hpp"
#include "fde/kzg/kzg.hpp"

namespace fde::ex {

struct BenchCell {
    Scheme scheme = Scheme::kStar;
    pay::Rail rail = pay::Rail::kContract;
    double beta = 2.0;
    uint64_t bytes = 0;
};

struct BenchRow {
    BenchCell cell;
    uint64_t bytes_wire = 0;
    double t_commit_ms = 0, t_enc_ms = 0, t_prove_ms = 0, t_verify_ms = 0, t_dec_ms = 0;
    bool delivered = false;

    double ratio() const { return static_cast<double>(bytes_wire) / static_cast<double>(cell.bytes); }
};

/// "scheme=star,plus rail=contract beta=2 size=64KiB,1MiB": the cross product
/// of the listed values. Sizes take B, KiB, MiB suffixes. Throws DomainError.
std::vector<BenchCell> parse_grid(const std::string& spec);
uint64_t parse_size(const std::string& s);

/// Smallest crs degree that serves every cell.
size_t crs_degree_for(const std::vector<BenchCell>& cells);

/// Runs one full in-process exchange per cell on a random file.
BenchRow bench_cell(const kzg::Crs& crs, const BenchCell& cell, uint64_t seed = 1);
std::vector<BenchRow> bench(const kzg::Crs& crs, const std::vector<BenchCell>& cells, uint64_t seed = 1);

inline constexpr const char* kBenchHeader =
    "scheme,rail,beta,bytes_plain,bytes_wire,t_commit_ms,t_enc_ms,t_prove_ms,t_verify_ms,t_dec_ms";
std::string to_csv_line(const BenchRow& row);

}  // namespace fde::ex
