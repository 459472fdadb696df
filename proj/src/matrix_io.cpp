#include "sblo/matrix_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "sblo/error.hpp"

namespace sblo {

static_assert(std::endian::native == std::endian::little,
              "matrix dumps are written in host byte order");

namespace {

constexpr std::array<char, 8> kMagic{'S', 'B', 'L', 'O', 'M', 'A', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream &out, const T &value) {
    out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <class T>
T get(std::istream &in, const std::filesystem::path &path) {
    T value{};
    if (!in.read(reinterpret_cast<char *>(&value), sizeof(T)))
        throw DataError(path.string() + ": truncated matrix header");
    return value;
}

} // namespace

void write_dump(const std::filesystem::path &path, const MatrixDump &dump) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write " + path.string());
    out.write(kMagic.data(), kMagic.size());
    put(out, kVersion);
    put(out, static_cast<std::uint32_t>(dump.kind));
    put(out, static_cast<std::uint64_t>(dump.values.rows()));
    put(out, static_cast<std::uint64_t>(dump.values.cols()));
    put(out, dump.lambda1);
    put(out, dump.lambda2);
    put(out, dump.train_fingerprint);
    put(out, static_cast<std::uint32_t>(dump.masked ? 1 : 0));
    put(out, std::uint32_t{0});
    out.write(reinterpret_cast<const char *>(dump.values.data()),
              static_cast<std::streamsize>(dump.values.size() * sizeof(double)));
    if (!out)
        throw DataError("write failed: " + path.string());
}

MatrixDump read_dump(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic)
        throw DataError(path.string() + ": not a matrix dump");
    if (get<std::uint32_t>(in, path) != kVersion)
        throw DataError(path.string() + ": unsupported dump version");
    MatrixDump dump;
    auto kind = get<std::uint32_t>(in, path);
    if (kind > 1)
        throw DataError(path.string() + ": unknown matrix kind");
    dump.kind = static_cast<DumpKind>(kind);
    const auto rows = get<std::uint64_t>(in, path);
    const auto cols = get<std::uint64_t>(in, path);
    dump.lambda1 = get<double>(in, path);
    dump.lambda2 = get<double>(in, path);
    dump.train_fingerprint = get<std::uint64_t>(in, path);
    dump.masked = get<std::uint32_t>(in, path) != 0;
    (void)get<std::uint32_t>(in, path);
    dump.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    if (!in.read(reinterpret_cast<char *>(dump.values.data()),
                 static_cast<std::streamsize>(rows * cols * sizeof(double))))
        throw DataError(path.string() + ": truncated matrix body");
    return dump;
}

MatrixDump to_dump(const ImplicitFactorMatrix &factors) {
    return MatrixDump{.kind = DumpKind::Factors,
                      .lambda1 = factors.params().lambda1,
                      .lambda2 = factors.params().lambda2,
                      .train_fingerprint = factors.train_fingerprint(),
                      .masked = false,
                      .values = factors.matrix()};
}

MatrixDump to_dump(const ScoreMatrix &scores, const SbloParams &params,
                   std::uint64_t train_fingerprint) {
    return MatrixDump{.kind = DumpKind::Scores,
                      .lambda1 = params.lambda1,
                      .lambda2 = params.lambda2,
                      .train_fingerprint = train_fingerprint,
                      .masked = scores.masked(),
                      .values = scores.values()};
}

ImplicitFactorMatrix factors_from_dump(const MatrixDump &dump) {
    if (dump.kind != DumpKind::Factors)
        throw DataError("dump does not hold a factor matrix");
    if (dump.values.rows() != dump.values.cols())
        throw DataError("factor matrix dump is not square");
    return ImplicitFactorMatrix(DenseMatrix(dump.values),
                                SbloParams{.lambda1 = dump.lambda1, .lambda2 = dump.lambda2},
                                dump.train_fingerprint);
}

} // namespace sblo
