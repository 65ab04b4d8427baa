#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "specbm/bounds.hpp"
#include "specbm/clustering.hpp"
#include "specbm/sbm.hpp"

namespace specbm {

// Writes content to path via a temp file in the same directory followed by
// an atomic rename; either the complete file appears or nothing changes.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// JSON text (2-space indent, trailing newline) for one clustering run.
// params/seed/agreement blocks appear only when known; labels are
// canonicalized so the first entry is +1 (agreement is flip-invariant).
std::string cluster_result_to_json(
    const ClusterResult& result, const SbmParams* params = nullptr,
    std::optional<std::uint64_t> seed = std::nullopt,
    std::optional<double> agreement_value = std::nullopt,
    std::optional<bool> recovered = std::nullopt);

// JSON text for the closed-form regime report: conditions A1/A2, the
// exponent f at the midpoint (alpha-beta)/2, and the binomial tail exponent.
std::string regime_report_to_json(const RegimeConstants& rc);

// Debug dumps: full dense matrix as plain text (one row per line), and the
// stored lower-triangle entries as i,j,value CSV (1-based, header line).
std::string dump_dense_text(const SymMatrix& m);
std::string dump_sparse_csv(const SymMatrix& m);

}  // namespace specbm
