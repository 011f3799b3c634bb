#include "qmcopt/sobol.hpp"

#include <bit>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qmcopt/seed.hpp"

namespace qmcopt {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw std::runtime_error("direction numbers, line " + std::to_string(line) +
                           ": " + what);
}

}  // namespace

DirectionNumbers DirectionNumbers::load(std::istream& in) {
  DirectionNumbers table;
  std::string line;
  int lineno = 0;
  std::uint32_t expect_d = 2;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank line
    if (first == "d") continue;    // header line
    Row row;
    std::uint32_t d = 0;
    try {
      d = static_cast<std::uint32_t>(std::stoul(first));
    } catch (const std::exception&) {
      parse_fail(lineno, "expected dimension index, got '" + first + "'");
    }
    if (d != expect_d)
      parse_fail(lineno, "expected dimension " + std::to_string(expect_d) +
                             ", got " + std::to_string(d));
    if (!(ls >> row.degree >> row.poly))
      parse_fail(lineno, "missing degree or polynomial");
    if (row.degree == 0 || row.degree > 31)
      parse_fail(lineno, "degree out of range");
    const std::uint32_t a_max = row.degree == 1 ? 1u : (1u << (row.degree - 1));
    if (row.poly >= a_max)
      parse_fail(lineno, "polynomial coefficients out of range");
    std::uint32_t m = 0;
    while (ls >> m) row.m.push_back(m);
    if (row.m.size() != row.degree)
      parse_fail(lineno, "expected " + std::to_string(row.degree) +
                             " m values, got " + std::to_string(row.m.size()));
    for (std::size_t k = 0; k < row.m.size(); ++k) {
      if (row.m[k] % 2 == 0) parse_fail(lineno, "m values must be odd");
      if (row.m[k] >= (1u << (k + 1)))
        parse_fail(lineno, "m_" + std::to_string(k + 1) + " out of range");
    }
    table.rows.push_back(std::move(row));
    ++expect_d;
  }
  if (table.rows.empty())
    throw std::runtime_error("direction numbers: no data rows");
  return table;
}

const DirectionNumbers& DirectionNumbers::builtin() {
  static const DirectionNumbers table = [] {
    std::istringstream in(detail::joe_kuo_d6_text());
    return load(in);
  }();
  return table;
}

SobolSampler::SobolSampler(int dim, Randomize mode, std::uint64_t seed,
                           const DirectionNumbers& table)
    : dim_(dim), mode_(mode), seed_(seed) {
  if (dim < 1) throw std::invalid_argument("SobolSampler: dim must be >= 1");
  if (dim > table.max_dimension())
    throw std::invalid_argument(
        "SobolSampler: dim " + std::to_string(dim) +
        " exceeds direction-number table (max " +
        std::to_string(table.max_dimension()) + ")");
  build_base(table);
  dirs_ = base_;
  shift_.assign(dim_, 0u);
  if (mode_ != Randomize::None) rerandomize(draw_count_);
}

void SobolSampler::build_base(const DirectionNumbers& table) {
  base_.resize(dim_);
  // dimension 1: van der Corput, v_k = 2^(31-k)
  for (int k = 0; k < kBits; ++k) base_[0][k] = 1u << (kBits - 1 - k);
  for (int j = 1; j < dim_; ++j) {
    const auto& row = table.rows[static_cast<std::size_t>(j - 1)];
    const int s = static_cast<int>(row.degree);
    auto& v = base_[static_cast<std::size_t>(j)];
    for (int k = 0; k < kBits; ++k) {
      if (k < s) {
        v[k] = row.m[static_cast<std::size_t>(k)] << (kBits - 1 - k);
      } else {
        v[k] = v[k - s] ^ (v[k - s] >> s);
        for (int i = 1; i < s; ++i)
          v[k] ^= ((row.poly >> (s - 1 - i)) & 1u) * v[k - i];
      }
    }
  }
}

void SobolSampler::rerandomize(std::uint64_t stream) {
  std::mt19937_64 rng(derive_seed(seed_, stream));
  auto rand32 = [&rng] { return static_cast<std::uint32_t>(rng() >> 32); };
  for (int j = 0; j < dim_; ++j) {
    auto& v = dirs_[static_cast<std::size_t>(j)];
    if (mode_ == Randomize::LinearScramble) {
      // lower-triangular scramble matrix with unit diagonal, acting on
      // output bits; row i mixes output bits 1..i+1. MSB-aligned words.
      std::array<std::uint32_t, kBits> lrow;
      for (int i = 0; i < kBits; ++i) {
        const std::uint32_t diag = 1u << (kBits - 1 - i);
        const std::uint32_t strict =
            i == 0 ? 0u : (~0u << (kBits - i));  // bits above the diagonal
        lrow[static_cast<std::size_t>(i)] = (rand32() & strict) | diag;
      }
      const auto& b = base_[static_cast<std::size_t>(j)];
      for (int k = 0; k < kBits; ++k) {
        std::uint32_t g = 0;
        for (int i = 0; i < kBits; ++i)
          g |= static_cast<std::uint32_t>(
                   std::popcount(lrow[static_cast<std::size_t>(i)] & b[k]) & 1)
               << (kBits - 1 - i);
        v[k] = g;
      }
    } else {
      v = base_[static_cast<std::size_t>(j)];
    }
    shift_[static_cast<std::size_t>(j)] = rand32();
  }
}

void SobolSampler::point_into(std::uint64_t index, double* out) const {
  constexpr double scale = 1.0 / 4294967296.0;  // 2^-32
  for (int j = 0; j < dim_; ++j) {
    const auto& v = dirs_[static_cast<std::size_t>(j)];
    std::uint32_t g = 0;
    std::uint64_t i = index;
    int k = 0;
    while (i) {
      if (i & 1u) g ^= v[k];
      i >>= 1;
      ++k;
    }
    out[j] = (g ^ shift_[static_cast<std::size_t>(j)]) * scale;
  }
}

Eigen::VectorXd SobolSampler::next_point() {
  if (index_ >= (std::uint64_t{1} << kBits))
    throw std::runtime_error(
        "SobolSampler: 2^32 points exhausted without rerandomization");
  Eigen::VectorXd p(dim_);
  point_into(index_++, p.data());
  return p;
}

SampleBatch SobolSampler::draw(int n) {
  if (n < 1) throw std::invalid_argument("SobolSampler: batch size must be >= 1");
  if (mode_ != Randomize::None) {
    rerandomize(++draw_count_);
    index_ = 0;
  }
  if (index_ + static_cast<std::uint64_t>(n) > (std::uint64_t{1} << kBits))
    throw std::runtime_error(
        "SobolSampler: batch would exceed 2^32 points without rerandomization");
  SampleBatch batch;
  batch.points.resize(n, dim_);
  Eigen::VectorXd row(dim_);
  for (int r = 0; r < n; ++r) {
    point_into(index_++, row.data());
    batch.points.row(r) = row;
  }
  return batch;
}

McSampler::McSampler(int dim, std::uint64_t seed) : dim_(dim), state_(seed) {
  if (dim < 1) throw std::invalid_argument("McSampler: dim must be >= 1");
}

SampleBatch McSampler::draw(int n) {
  if (n < 1) throw std::invalid_argument("McSampler: batch size must be >= 1");
  std::mt19937_64 rng(derive_seed(state_, calls_++));
  SampleBatch batch;
  batch.points.resize(n, dim_);
  constexpr double scale = 0x1.0p-53;
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < dim_; ++j)
      batch.points(r, j) = static_cast<double>(rng() >> 11) * scale;
  return batch;
}

SampleBatch mc_batch(std::uint64_t seed, int n, int dim) {
  McSampler s(dim, seed);
  return s.draw(n);
}

}  // namespace qmcopt
