#pragma once

#include <cstdint>
#include <filesystem>

#include "sblo/factor_model.hpp"
#include "sblo/score_matrix.hpp"

namespace sblo {

// Binary matrix dump, little-endian:
//   char[8]  magic "SBLOMAT\0"
//   uint32   version (1)
//   uint32   kind (0 = factor matrix S, 1 = score matrix R)
//   uint64   rows, cols
//   float64  lambda1, lambda2
//   uint64   training-network fingerprint
//   uint32   masked flag, uint32 reserved
//   float64  rows*cols values, row-major
enum class DumpKind : std::uint32_t { Factors = 0, Scores = 1 };

struct MatrixDump {
    DumpKind kind = DumpKind::Factors;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::uint64_t train_fingerprint = 0;
    bool masked = false;
    RowMatrix values;
};

void write_dump(const std::filesystem::path &path, const MatrixDump &dump);
MatrixDump read_dump(const std::filesystem::path &path);

MatrixDump to_dump(const ImplicitFactorMatrix &factors);
MatrixDump to_dump(const ScoreMatrix &scores, const SbloParams &params,
                   std::uint64_t train_fingerprint);
ImplicitFactorMatrix factors_from_dump(const MatrixDump &dump);

} // namespace sblo
