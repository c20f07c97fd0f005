#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rhostat {

enum class SourceKind { ClosedForm, Table, Recurrence, Stochastic, Derived };

const char* to_string(SourceKind kind) noexcept;

/// A strictly increasing list of 1-based indices n_1 < n_2 < ...
class IndexSubsequence {
 public:
  IndexSubsequence() = default;
  /// Throws invalid-subsequence unless indices are >= 1 and strictly increasing.
  explicit IndexSubsequence(std::vector<std::uint64_t> indices);

  std::span<const std::uint64_t> indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  /// n_k for 1-based k.
  std::uint64_t at(std::size_t k) const;
  std::uint64_t back() const { return indices_.back(); }

  /// k -> n_{inner_k}: the single subsequence equal to taking `inner` of
  /// the subsequence `*this`.
  IndexSubsequence compose(const IndexSubsequence& inner) const;

  bool operator==(const IndexSubsequence&) const = default;

 private:
  std::vector<std::uint64_t> indices_;
};

/// Contiguous alpha_1..alpha_n. Keeps the backing storage alive.
struct Prefix {
  std::shared_ptr<const std::vector<double>> storage;
  std::span<const double> values;

  std::size_t size() const noexcept { return values.size(); }
};

/// A real sequence alpha_1, alpha_2, ... defined up to an explicit horizon.
///
/// Sources are immutable and cheap to copy. Table, recurrence, and stochastic
/// sources hold their values; closed-form and derived sources evaluate on
/// demand and are deterministic, so repeated evaluation is bit-identical.
class SequenceSource {
 public:
  using Generator = std::function<double(std::uint64_t)>;
  using Rule = std::function<double(std::uint64_t k, std::span<const double> previous)>;

  static SequenceSource from_generator(Generator generator, std::uint64_t horizon,
                                       std::string label, SourceKind kind = SourceKind::ClosedForm);
  /// alpha_k given by an expression in k (see Expression for the syntax).
  static SequenceSource closed_form(std::string_view expression, std::uint64_t horizon,
                                    std::string label = {});
  static SequenceSource constant(double value, std::uint64_t horizon);
  static SequenceSource table(std::vector<double> values, std::string label,
                              SourceKind kind = SourceKind::Table);
  /// alpha_k = rule(k, alpha_1..alpha_{k-1}) after the initial terms;
  /// evaluated eagerly up to the horizon.
  static SequenceSource recurrence(std::vector<double> initial, const Rule& rule,
                                   std::uint64_t horizon, std::string label);
  /// Realizes a stochastic prefix once, at construction, from `seed`.
  static SequenceSource stochastic(std::uint64_t seed,
                                   const std::function<std::vector<double>(std::uint64_t)>& realize,
                                   std::string label);

  /// alpha_k for 1 <= k <= horizon().
  double at(std::uint64_t k) const;
  /// alpha_1..alpha_n without copying when the source holds its values.
  Prefix prefix(std::uint64_t n) const;

  std::uint64_t horizon() const noexcept { return horizon_; }
  const std::string& label() const noexcept { return label_; }
  SourceKind kind() const noexcept { return kind_; }
  /// True when values are held in memory.
  bool stored() const noexcept { return static_cast<bool>(values_); }

  SequenceSource relabeled(std::string label) const;

 private:
  SequenceSource(SourceKind kind, std::uint64_t horizon, std::string label,
                 std::shared_ptr<const std::vector<double>> values, Generator generator);

  SourceKind kind_;
  std::uint64_t horizon_;
  std::string label_;
  std::shared_ptr<const std::vector<double>> values_;
  Generator generator_;
};

/// (alpha_1, ..., alpha_n); throws horizon-exceeded when n > horizon.
std::vector<double> eval_prefix(const SequenceSource& source, std::uint64_t n);

/// Delta alpha_k = alpha_{k+1} - alpha_k, horizon one shorter.
SequenceSource difference(const SequenceSource& source);

/// (a1, a2, a1, a2, a3, a2, a3, a4, a3, a4, ...): a1 followed by blocks
/// (a_j, a_{j-1}, a_j) for j = 2, 3, ..., so every adjacent pair of terms
/// occurs in both orders. Output horizon 3H - 2; position m reads only
/// indices <= ceil(m/3) + 1.
SequenceSource zigzag_interleave(const SequenceSource& source);

/// (a1, l, a1, l, a2, l, a2, l, ...), horizon 4H.
SequenceSource limit_interleave(const SequenceSource& source, double level);

/// (b1, a1, b2, a2, ...), horizon 2H. Horizons must match.
SequenceSource pair_interleave(const SequenceSource& beta, const SequenceSource& alpha);

/// k -> alpha_{n_k}.
SequenceSource take_subsequence(const SequenceSource& source, const IndexSubsequence& indices);

/// k -> fn(alpha_k).
SequenceSource map_values(const SequenceSource& source, std::function<double(double)> fn,
                          std::string label);

/// Same values, held in memory (evaluates the full horizon once).
SequenceSource materialize(const SequenceSource& source);

}  // namespace rhostat
