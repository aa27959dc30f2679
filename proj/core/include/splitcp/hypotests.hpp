#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace splitcp {

// Rows are before/after the candidate, columns are success/failure:
//
//            success  failure
//   before      a        b
//   after       c        d
struct ContingencyTable {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
  std::int64_t d = 0;
};

enum class TestMethod { fisher_exact, permutation_shift };

std::string_view to_string(TestMethod method) noexcept;

struct TestOutcome {
  double p_value = 1.0;
  // Fisher: after-rate minus before-rate. Permutation: shifted mean difference.
  double statistic = 0.0;
  TestMethod method = TestMethod::fisher_exact;
  bool two_sided = true;
  bool exact = true;
  std::int64_t permutations_used = 0;  // enumerated or sampled relabelings
  std::optional<std::uint64_t> seed;
  double delta = 0.0;
};

// Two-sided Fisher exact test: sums the hypergeometric probabilities of every
// table with the observed margins whose point probability does not exceed the
// observed one. Any zero margin throws degenerate_table.
TestOutcome fisher_exact(const ContingencyTable& table);

struct PermutationOptions {
  std::int64_t n_perm = 2000;
  std::uint64_t seed = 0;
  // Enumerate every relabeling when C(|x| + |y|, |y|) is at most this.
  std::int64_t exact_limit = 20000;
  // +1 or -1 fixes the tested direction in advance; 0 takes it from the sign
  // of the observed difference. A data-chosen direction roughly doubles the
  // null rejection rate, so callers with an independent estimate of the
  // direction should pass it.
  int direction = 0;
};

// One-sided two-sample permutation test of the composite null
// |mean(y) - mean(x)| <= delta. The post sample y is shifted toward x by
// delta along the observed direction; the p-value is the fraction of
// relabelings of the pooled (x, y') whose mean difference is at least as far
// along that direction as the observed one. Sampled p-values use the
// (1 + hits) / (1 + n_perm) correction.
TestOutcome perm_test_shift(std::span<const double> x, std::span<const double> y,
                            double delta, const PermutationOptions& options = {});

// C(n, k) as a double, or +inf once it would exceed `cap`. Used to decide
// between enumeration and sampling.
double binomial_capped(std::int64_t n, std::int64_t k, double cap);

}  // namespace splitcp
