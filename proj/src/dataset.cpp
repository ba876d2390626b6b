#include "qlb/dataset.hpp"

#include "qlb/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qlb {

namespace {

constexpr std::uint64_t kStreamW = 0;
constexpr std::uint64_t kStreamColumns = 1;
constexpr std::uint64_t kStreamResample = 2;

// Row norms are accumulated from rounded entries; allow for that rounding.
constexpr double kRowNormSlack = 1e-12;

IndexSet resolve_planted_set(std::size_t d, std::size_t w, std::uint64_t seed,
                             const std::optional<IndexSet>& W) {
  if (w > d) throw std::invalid_argument("w must not exceed d");
  if (!W) {
    Rng rng = Rng::stream(seed, kStreamW);
    return random_subset(d, w, rng);
  }
  IndexSet sorted = *W;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() != w) throw std::invalid_argument("supplied W does not have size w");
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] >= d) throw std::invalid_argument("supplied W has an index >= d");
    if (k > 0 && sorted[k] == sorted[k - 1]) {
      throw std::invalid_argument("supplied W has duplicate indices");
    }
  }
  return sorted;
}

std::vector<bool> membership(std::size_t d, const IndexSet& W) {
  std::vector<bool> in(d, false);
  for (std::size_t j : W) in[j] = true;
  return in;
}

void check_common(std::size_t d, std::size_t M) {
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  if (M < 1) throw std::invalid_argument("M must be at least 1");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_real(std::string_view field, std::size_t line) {
  field = trim(field);
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw CsvError(line, "non-numeric cell '" + std::string(field) + "'");
  }
  return value;
}

std::size_t parse_count(std::string_view field, std::size_t line, const char* name) {
  field = trim(field);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw CsvError(line, std::string("malformed header: ") + name + " is not a count");
  }
  return value;
}

}  // namespace

const char* to_string(NormRegime regime) {
  return regime == NormRegime::LInf ? "linf" : "l2";
}

NormRegime parse_regime(const std::string& text) {
  if (text == "linf" || text == "LInf") return NormRegime::LInf;
  if (text == "l2" || text == "L2") return NormRegime::L2;
  throw std::invalid_argument("unknown norm regime '" + text + "'");
}

const char* to_string(WorstCaseVariant variant) {
  return variant == WorstCaseVariant::WSF ? "wsf" : "wssf";
}

std::string Violation::describe() const {
  std::ostringstream out;
  if (target) {
    out << "|y_" << row << "| = " << value << " > 1";
  } else if (col) {
    out << "|X_" << row << "," << *col << "| = " << value << " > 1";
  } else {
    out << "||x_" << row << "||_2 = " << value << " > 1";
  }
  return out.str();
}

std::vector<Violation> validate(const SampleSet& S) {
  std::vector<Violation> out;
  const auto N = S.rows();
  const auto d = S.dim();
  if (static_cast<std::size_t>(S.y.size()) != N) {
    throw std::invalid_argument("validate: y length differs from the number of rows");
  }
  for (std::size_t i = 0; i < N; ++i) {
    if (S.regime == NormRegime::LInf) {
      for (std::size_t j = 0; j < d; ++j) {
        const double v = std::abs(S.X(i, j));
        if (!(v <= 1.0)) out.push_back({i, j, false, v});
      }
    } else {
      const double sq = S.X.row(i).squaredNorm();
      if (!(sq <= 1.0 + kRowNormSlack)) out.push_back({i, std::nullopt, false, std::sqrt(sq)});
    }
    const double yv = std::abs(S.y(i));
    if (!(yv <= 1.0)) out.push_back({i, std::nullopt, true, yv});
  }
  return out;
}

PlantedSamples gen_lasso_hidden(std::size_t d, std::size_t w, double p, std::size_t M,
                                std::uint64_t seed, const std::optional<IndexSet>& W) {
  check_common(d, M);
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("p must lie in (0, 1/2)");
  PlantedSamples out;
  out.W = resolve_planted_set(d, w, seed, W);
  const auto in_w = membership(d, out.W);
  auto& S = out.samples;
  S.regime = NormRegime::LInf;
  S.X.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(d));
  S.y = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(M));
  for (std::size_t j = 0; j < d; ++j) {
    Rng rng = Rng::stream(seed, kStreamColumns, j);
    const double q = in_w[j] ? 0.5 + p : 0.5;
    double* col = S.X.col(static_cast<Eigen::Index>(j)).data();
    for (std::size_t i = 0; i < M; ++i) col[i] = rng.bernoulli(q) ? 1.0 : -1.0;
  }
  return out;
}

PlantedSamples gen_ridge_hidden(std::size_t d, std::size_t w, double p, std::size_t M,
                                std::uint64_t seed, const std::optional<IndexSet>& W) {
  check_common(d, M);
  if (!(p > 0.0 && p < 0.25)) throw std::invalid_argument("p must lie in (0, 1/4)");
  PlantedSamples out;
  out.W = resolve_planted_set(d, w, seed, W);
  const auto in_w = membership(d, out.W);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  auto& S = out.samples;
  S.regime = NormRegime::L2;
  S.X.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(d));
  S.y = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(M));
  for (std::size_t j = 0; j < d; ++j) {
    Rng rng = Rng::stream(seed, kStreamColumns, j);
    // The favoured sign has probability 1/2 + p.
    const double favoured = in_w[j] ? scale : -scale;
    double* col = S.X.col(static_cast<Eigen::Index>(j)).data();
    for (std::size_t i = 0; i < M; ++i) col[i] = rng.bernoulli(0.5 + p) ? favoured : -favoured;
  }
  return out;
}

WorstCaseMatrix gen_worst_case(std::size_t d, std::size_t w, Rational p, std::size_t N,
                               WorstCaseVariant variant, std::uint64_t seed,
                               const std::optional<IndexSet>& W) {
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  if (N < 2 || N % 2 != 0) throw std::invalid_argument("N must be even and positive");
  if (p.den <= 0 || p.num < 0) throw std::invalid_argument("p must be a non-negative fraction");
  const auto n = static_cast<std::int64_t>(N);
  if ((n * p.num) % p.den != 0) throw std::invalid_argument("pN must be an integer");
  const std::int64_t pN = n * p.num / p.den;
  if (2 * pN > n) throw std::invalid_argument("p must not exceed 1/2");

  WorstCaseMatrix out;
  out.W = resolve_planted_set(d, w, seed, W);
  out.p = p;
  out.variant = variant;
  const auto in_w = membership(d, out.W);
  const double scale =
      variant == WorstCaseVariant::WSF ? 1.0 : 1.0 / std::sqrt(static_cast<double>(d));
  out.X.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(d));
  const std::int64_t half = n / 2;
  for (std::size_t j = 0; j < d; ++j) {
    std::int64_t positives = half;
    if (in_w[j]) {
      positives = half + pN;
    } else if (variant == WorstCaseVariant::WSSF) {
      positives = half - pN;
    }
    Rng rng = Rng::stream(seed, kStreamColumns, j);
    const auto order = random_permutation(N, rng);
    double* col = out.X.col(static_cast<Eigen::Index>(j)).data();
    for (std::size_t i = 0; i < N; ++i) {
      col[order[i]] = static_cast<std::int64_t>(i) < positives ? scale : -scale;
    }
  }
  return out;
}

Resampled worst_to_average_permuted(const WorstCaseMatrix& Xw, std::size_t M,
                                    const std::vector<std::size_t>& perm,
                                    std::uint64_t seed) {
  if (M < 1) throw std::invalid_argument("M must be at least 1");
  const std::size_t N = Xw.rows();
  const std::size_t d = Xw.dim();
  if (perm.size() != d) throw std::invalid_argument("permutation length differs from d");
  Resampled out;
  out.samples.regime = Xw.regime();
  out.samples.X.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(d));
  out.samples.y = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(M));
  out.distinct_reads.assign(d, 0);
  out.total_reads = static_cast<std::uint64_t>(M) * d;
  std::vector<bool> seen(N);
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t src = perm[j];
    if (src >= d) throw std::invalid_argument("permutation entry out of range");
    // R's column for source column src is a substream of (seed, src).
    Rng rng = Rng::stream(seed, kStreamResample, src);
    std::fill(seen.begin(), seen.end(), false);
    const double* from = Xw.X.col(static_cast<Eigen::Index>(src)).data();
    double* to = out.samples.X.col(static_cast<Eigen::Index>(j)).data();
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < M; ++i) {
      const auto r = static_cast<std::size_t>(rng.below(N));
      to[i] = from[r];
      if (!seen[r]) {
        seen[r] = true;
        ++distinct;
      }
    }
    out.distinct_reads[src] = distinct;
  }
  return out;
}

Resampled worst_to_average(const WorstCaseMatrix& Xw, std::size_t M, std::uint64_t seed) {
  std::vector<std::size_t> identity(Xw.dim());
  for (std::size_t j = 0; j < identity.size(); ++j) identity[j] = j;
  return worst_to_average_permuted(Xw, M, identity, seed);
}

CsvError::CsvError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string to_csv(const SampleSet& S) {
  std::string out;
  out += std::to_string(S.dim()) + "," + std::to_string(S.rows()) + "," + to_string(S.regime) +
         "\n";
  for (std::size_t i = 0; i < S.rows(); ++i) {
    out += format_double(S.y(static_cast<Eigen::Index>(i)));
    for (std::size_t j = 0; j < S.dim(); ++j) {
      out += ',';
      out += format_double(S.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out += '\n';
  }
  return out;
}

SampleSet parse_csv(const std::string& text) {
  std::vector<std::string_view> lines;
  std::string_view rest(text);
  while (!rest.empty()) {
    const std::size_t nl = rest.find('\n');
    lines.push_back(rest.substr(0, nl));
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw CsvError(1, "malformed header: file is empty");

  const auto header = split_fields(lines[0]);
  if (header.size() != 3) throw CsvError(1, "malformed header: expected 'd,N,regime'");
  const std::size_t d = parse_count(header[0], 1, "d");
  const std::size_t N = parse_count(header[1], 1, "N");
  if (d < 1 || N < 1) throw CsvError(1, "malformed header: d and N must be positive");
  SampleSet S;
  try {
    S.regime = parse_regime(std::string(trim(header[2])));
  } catch (const std::invalid_argument&) {
    throw CsvError(1, "malformed header: unknown regime '" + std::string(trim(header[2])) + "'");
  }
  if (lines.size() - 1 != N) {
    throw CsvError(lines.size() < N + 1 ? lines.size() + 1 : N + 2,
                   "expected " + std::to_string(N) + " data rows, found " +
                       std::to_string(lines.size() - 1));
  }
  S.X.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(d));
  S.y.resize(static_cast<Eigen::Index>(N));
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t line = i + 2;
    const auto fields = split_fields(lines[i + 1]);
    if (fields.size() != d + 1) {
      throw CsvError(line, "row has " + std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(d + 1));
    }
    S.y(static_cast<Eigen::Index>(i)) = parse_real(fields[0], line);
    for (std::size_t j = 0; j < d; ++j) {
      S.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_real(fields[j + 1], line);
    }
  }
  return S;
}

void save_csv(const SampleSet& S, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << to_csv(S);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

SampleSet load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

double generalization_gap_bound(std::size_t N, std::size_t d, double delta, NormRegime regime) {
  if (N < 1 || d < 1) throw std::invalid_argument("N and d must be at least 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
  const double n = static_cast<double>(N);
  const double confidence = 4.0 * std::sqrt(std::log2(1.0 / delta) / (2.0 * n));
  if (regime == NormRegime::LInf) {
    return 4.0 * std::sqrt(2.0 * std::log2(2.0 * static_cast<double>(d)) / n) + confidence;
  }
  return 8.0 * std::sqrt(1.0 / n) + confidence;
}

}  // namespace qlb
