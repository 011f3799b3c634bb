#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <memory>
#include <vector>

#include <Eigen/Core>

namespace qmcopt {

// Direction-number table in Joe-Kuo text format: one row per Sobol'
// dimension >= 2, "d s a m_1 ... m_s". Dimension 1 is the built-in
// van der Corput column and needs no row.
struct DirectionNumbers {
  struct Row {
    std::uint32_t degree = 0;  // s
    std::uint32_t poly = 0;    // interior coefficient bits a
    std::vector<std::uint32_t> m;
  };

  std::vector<Row> rows;  // rows[i] drives Sobol' dimension i + 2

  int max_dimension() const { return static_cast<int>(rows.size()) + 1; }

  // Parses the text format; throws std::runtime_error with a line number
  // on malformed input (bad counts, even m, out-of-range values).
  static DirectionNumbers load(std::istream& in);

  // Table bundled into the library (dimensions up to 129).
  static const DirectionNumbers& builtin();
};

enum class Randomize {
  None,           // raw sequence, deterministic
  DigitalShift,   // random digital XOR shift per dimension
  LinearScramble  // random linear matrix scramble plus digital shift
};

// One batch of points in [0,1)^dim, one point per row.
struct SampleBatch {
  Eigen::MatrixXd points;
  std::int64_t iteration = 0;  // caller-assigned tag, carried through estimators

  int n() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

// Common interface for the point sources the estimators and optimizers use.
class BatchSampler {
 public:
  virtual ~BatchSampler() = default;
  virtual SampleBatch draw(int n) = 0;
  virtual int dim() const = 0;
};

// Sobol' generator with 32-bit output precision, natural index order
// (so dimension 1 reproduces the base-2 radical inverse), and optional
// randomization. Under a randomizing mode every draw() re-randomizes the
// same leading point set, giving independent replicates; under
// Randomize::None draw() walks the deterministic sequence chunk by chunk.
class SobolSampler : public BatchSampler {
 public:
  static constexpr int kBits = 32;

  SobolSampler(int dim, Randomize mode, std::uint64_t seed,
               const DirectionNumbers& table = DirectionNumbers::builtin());

  int dim() const override { return dim_; }
  Randomize mode() const { return mode_; }

  // Next point of the current (possibly randomized) stream.
  Eigen::VectorXd next_point();

  SampleBatch draw(int n) override;

 private:
  void build_base(const DirectionNumbers& table);
  void rerandomize(std::uint64_t stream);
  void point_into(std::uint64_t index, double* out) const;

  int dim_;
  Randomize mode_;
  std::uint64_t seed_;
  std::uint64_t draw_count_ = 0;
  std::uint64_t index_ = 0;
  // direction integers, MSB-aligned: entry k scales 2^-(k+1)
  std::vector<std::array<std::uint32_t, kBits>> base_;
  std::vector<std::array<std::uint32_t, kBits>> dirs_;
  std::vector<std::uint32_t> shift_;
};

// Plain pseudorandom uniforms behind the same interface (mt19937_64,
// 53-bit mantissa doubles in [0,1)).
class McSampler : public BatchSampler {
 public:
  McSampler(int dim, std::uint64_t seed);

  int dim() const override { return dim_; }
  SampleBatch draw(int n) override;

 private:
  int dim_;
  std::uint64_t state_;  // mt19937_64 kept in cpp via pimpl-free reseed
  std::uint64_t calls_ = 0;
};

// One-shot pseudorandom batch.
SampleBatch mc_batch(std::uint64_t seed, int n, int dim);

namespace detail {
const char* joe_kuo_d6_text();
}

}  // namespace qmcopt
