#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlb {

/// Feature normalization regime: LInf bounds every entry, L2 bounds every row.
enum class NormRegime { LInf, L2 };

const char* to_string(NormRegime regime);
NormRegime parse_regime(const std::string& text);

using IndexSet = std::vector<std::size_t>;

/// Design matrix X (N x d) with targets y.
struct SampleSet {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  NormRegime regime = NormRegime::LInf;

  std::size_t rows() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(X.cols()); }
};

/// One regime violation. `col` is empty for row-level (L2) or target violations.
struct Violation {
  std::size_t row;
  std::optional<std::size_t> col;
  bool target = false;
  double value;  ///< offending magnitude (|X_ij|, ||x_i||_2 or |y_i|)
  std::string describe() const;
};

/// Every entry or row breaking the regime constraint. Empty means valid.
std::vector<Violation> validate(const SampleSet& S);

/// Planted Lasso samples: x_j = +1 w.p. 1/2 + p for j in W, 1/2 otherwise; y = 1.
struct PlantedSamples {
  SampleSet samples;
  IndexSet W;
};

/// Draws M samples from the planted Lasso distribution. W is drawn from the seed
/// unless supplied; columns use independent substreams keyed by column index.
PlantedSamples gen_lasso_hidden(std::size_t d, std::size_t w, double p, std::size_t M,
                                std::uint64_t seed,
                                const std::optional<IndexSet>& W = std::nullopt);

/// Ridge analogue: entries are +-1/sqrt(d), biased towards + on W and - off W.
PlantedSamples gen_ridge_hidden(std::size_t d, std::size_t w, double p, std::size_t M,
                                std::uint64_t seed,
                                const std::optional<IndexSet>& W = std::nullopt);

/// Exact rational bias num/den.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

enum class WorstCaseVariant { WSF, WSSF };

const char* to_string(WorstCaseVariant variant);

/// Fixed matrix whose planted columns have an exact surplus of +entries.
struct WorstCaseMatrix {
  Eigen::MatrixXd X;
  IndexSet W;
  Rational p;
  WorstCaseVariant variant = WorstCaseVariant::WSF;

  std::size_t rows() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(X.cols()); }
  NormRegime regime() const {
    return variant == WorstCaseVariant::WSF ? NormRegime::LInf : NormRegime::L2;
  }
};

/// WSF: planted columns carry N/2 + pN entries +1, the rest N/2.
/// WSSF: entries +-1/sqrt(d); planted columns N/2 + pN positive, others N/2 - pN.
WorstCaseMatrix gen_worst_case(std::size_t d, std::size_t w, Rational p, std::size_t N,
                               WorstCaseVariant variant, std::uint64_t seed,
                               const std::optional<IndexSet>& W = std::nullopt);

struct Resampled {
  SampleSet samples;
  /// Distinct entries of each column of the source matrix that were read.
  std::vector<std::size_t> distinct_reads;
  /// Total entry reads, M * d.
  std::uint64_t total_reads = 0;
};

/// X'_ij = Xw[R_ij, j] with R uniform over rows, y = 1.
Resampled worst_to_average(const WorstCaseMatrix& Xw, std::size_t M, std::uint64_t seed);

/// Column-permuted resampling X'_ij = Xw[R_{i,pi(j)}, pi(j)].
Resampled worst_to_average_permuted(const WorstCaseMatrix& Xw, std::size_t M,
                                    const std::vector<std::size_t>& perm,
                                    std::uint64_t seed);

/// Error raised while parsing a sample CSV; `line` is 1-based.
class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Header line `d,N,regime`, then N lines `y,x_0,...,x_{d-1}`.
void save_csv(const SampleSet& S, const std::string& path);
SampleSet load_csv(const std::string& path);
std::string to_csv(const SampleSet& S);
SampleSet parse_csv(const std::string& text);

/// Uniform generalization bound for the given regime (binary logarithms).
double generalization_gap_bound(std::size_t N, std::size_t d, double delta, NormRegime regime);

}  // namespace qlb
