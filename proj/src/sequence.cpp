#include "rhostat/sequence.hpp"

#include <cmath>
#include <sstream>

#include "rhostat/error.hpp"
#include "rhostat/expr.hpp"

namespace rhostat {

const char* to_string(SourceKind kind) noexcept {
  switch (kind) {
    case SourceKind::ClosedForm: return "closed-form";
    case SourceKind::Table: return "table";
    case SourceKind::Recurrence: return "recurrence";
    case SourceKind::Stochastic: return "stochastic";
    case SourceKind::Derived: return "derived";
  }
  return "unknown";
}

// --- IndexSubsequence -------------------------------------------------------

IndexSubsequence::IndexSubsequence(std::vector<std::uint64_t> indices)
    : indices_(std::move(indices)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] == 0)
      fail(ErrorCode::InvalidSubsequence, "subsequence indices are 1-based; found 0");
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      fail(ErrorCode::InvalidSubsequence,
           "subsequence indices must be strictly increasing; position " + std::to_string(i + 1) +
               " has " + std::to_string(indices_[i]) + " after " +
               std::to_string(indices_[i - 1]));
    }
  }
}

std::uint64_t IndexSubsequence::at(std::size_t k) const {
  if (k == 0 || k > indices_.size())
    fail(ErrorCode::HorizonExceeded, "subsequence position " + std::to_string(k) +
                                         " outside 1.." + std::to_string(indices_.size()));
  return indices_[k - 1];
}

IndexSubsequence IndexSubsequence::compose(const IndexSubsequence& inner) const {
  std::vector<std::uint64_t> out;
  out.reserve(inner.size());
  for (const auto k : inner.indices()) out.push_back(at(k));
  return IndexSubsequence(std::move(out));
}

// --- SequenceSource ---------------------------------------------------------

namespace {

void check_finite(double v, std::uint64_t k, const std::string& label) {
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "sequence '" << label << "': alpha_" << k << " = " << v << " is not finite";
    throw IndexedError(ErrorCode::NonFiniteValue, msg.str(), k);
  }
}

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

SequenceSource::SequenceSource(SourceKind kind, std::uint64_t horizon, std::string label,
                               std::shared_ptr<const std::vector<double>> values,
                               Generator generator)
    : kind_(kind), horizon_(horizon), label_(std::move(label)), values_(std::move(values)),
      generator_(std::move(generator)) {}

SequenceSource SequenceSource::from_generator(Generator generator, std::uint64_t horizon,
                                              std::string label, SourceKind kind) {
  if (!generator) fail(ErrorCode::InvalidConfig, "sequence '" + label + "' has no generator");
  return SequenceSource(kind, horizon, std::move(label), nullptr, std::move(generator));
}

SequenceSource SequenceSource::closed_form(std::string_view expression, std::uint64_t horizon,
                                           std::string label) {
  auto expr = Expression::parse(expression);
  if (label.empty()) label = "expr:" + std::string(expression);
  return from_generator([expr](std::uint64_t k) { return expr(static_cast<double>(k)); }, horizon,
                        std::move(label), SourceKind::ClosedForm);
}

SequenceSource SequenceSource::constant(double value, std::uint64_t horizon) {
  return from_generator([value](std::uint64_t) { return value; }, horizon,
                        "const:" + format_number(value), SourceKind::ClosedForm);
}

SequenceSource SequenceSource::table(std::vector<double> values, std::string label,
                                     SourceKind kind) {
  for (std::size_t i = 0; i < values.size(); ++i) check_finite(values[i], i + 1, label);
  const std::uint64_t horizon = values.size();
  return SequenceSource(kind, horizon, std::move(label),
                        std::make_shared<const std::vector<double>>(std::move(values)), nullptr);
}

SequenceSource SequenceSource::recurrence(std::vector<double> initial, const Rule& rule,
                                          std::uint64_t horizon, std::string label) {
  if (initial.empty()) fail(ErrorCode::DegenerateInput, "recurrence '" + label + "' needs initial terms");
  std::vector<double> values = std::move(initial);
  if (values.size() > horizon) values.resize(horizon);
  values.reserve(horizon);
  while (values.size() < horizon) {
    const std::uint64_t k = values.size() + 1;
    values.push_back(rule(k, std::span<const double>(values)));
  }
  return table(std::move(values), std::move(label), SourceKind::Recurrence);
}

SequenceSource SequenceSource::stochastic(
    std::uint64_t seed, const std::function<std::vector<double>(std::uint64_t)>& realize,
    std::string label) {
  return table(realize(seed), std::move(label), SourceKind::Stochastic);
}

double SequenceSource::at(std::uint64_t k) const {
  if (k == 0 || k > horizon_) {
    fail(ErrorCode::HorizonExceeded, "sequence '" + label_ + "': index " + std::to_string(k) +
                                         " outside 1.." + std::to_string(horizon_));
  }
  if (values_) return (*values_)[k - 1];
  const double v = generator_(k);
  check_finite(v, k, label_);
  return v;
}

Prefix SequenceSource::prefix(std::uint64_t n) const {
  if (n > horizon_) {
    fail(ErrorCode::HorizonExceeded, "sequence '" + label_ + "': prefix of length " +
                                         std::to_string(n) + " exceeds horizon " +
                                         std::to_string(horizon_));
  }
  if (values_) return Prefix{values_, std::span<const double>(values_->data(), n)};
  auto values = std::make_shared<std::vector<double>>(n);
  for (std::uint64_t k = 1; k <= n; ++k) {
    const double v = generator_(k);
    check_finite(v, k, label_);
    (*values)[k - 1] = v;
  }
  std::shared_ptr<const std::vector<double>> frozen = std::move(values);
  return Prefix{frozen, std::span<const double>(frozen->data(), n)};
}

SequenceSource SequenceSource::relabeled(std::string label) const {
  SequenceSource copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

// --- transforms ---------------------------------------------------------------

std::vector<double> eval_prefix(const SequenceSource& source, std::uint64_t n) {
  const Prefix p = source.prefix(n);
  return {p.values.begin(), p.values.end()};
}

SequenceSource difference(const SequenceSource& source) {
  if (source.horizon() < 2)
    fail(ErrorCode::DegenerateInput,
         "difference of '" + source.label() + "' needs horizon >= 2");
  return SequenceSource::from_generator(
      [source](std::uint64_t k) { return source.at(k + 1) - source.at(k); },
      source.horizon() - 1, "diff(" + source.label() + ")", SourceKind::Derived);
}

SequenceSource zigzag_interleave(const SequenceSource& source) {
  if (source.horizon() < 2)
    fail(ErrorCode::DegenerateInput,
         "zigzag of '" + source.label() + "' needs horizon >= 2");
  const std::uint64_t horizon = 3 * source.horizon() - 2;
  return SequenceSource::from_generator(
      [source](std::uint64_t m) {
        if (m == 1) return source.at(1);
        const std::uint64_t j = 2 + (m - 2) / 3;
        return (m - 2) % 3 == 1 ? source.at(j - 1) : source.at(j);
      },
      horizon, "zigzag(" + source.label() + ")", SourceKind::Derived);
}

SequenceSource limit_interleave(const SequenceSource& source, double level) {
  if (source.horizon() < 1)
    fail(ErrorCode::DegenerateInput, "limit interleave of '" + source.label() + "' is empty");
  return SequenceSource::from_generator(
      [source, level](std::uint64_t m) {
        if (m % 2 == 0) return level;
        return source.at((m - 1) / 4 + 1);
      },
      4 * source.horizon(), "limit(" + source.label() + "," + format_number(level) + ")",
      SourceKind::Derived);
}

SequenceSource pair_interleave(const SequenceSource& beta, const SequenceSource& alpha) {
  if (beta.horizon() != alpha.horizon()) {
    fail(ErrorCode::HorizonMismatch,
         "pair interleave needs equal horizons; '" + beta.label() + "' has " +
             std::to_string(beta.horizon()) + ", '" + alpha.label() + "' has " +
             std::to_string(alpha.horizon()));
  }
  return SequenceSource::from_generator(
      [beta, alpha](std::uint64_t m) {
        return m % 2 == 1 ? beta.at((m + 1) / 2) : alpha.at(m / 2);
      },
      2 * beta.horizon(), "pair(" + beta.label() + "," + alpha.label() + ")",
      SourceKind::Derived);
}

SequenceSource take_subsequence(const SequenceSource& source, const IndexSubsequence& indices) {
  if (!indices.empty() && indices.back() > source.horizon()) {
    fail(ErrorCode::InvalidSubsequence,
         "subsequence index " + std::to_string(indices.back()) + " exceeds horizon " +
             std::to_string(source.horizon()) + " of '" + source.label() + "'");
  }
  return SequenceSource::from_generator(
      [source, indices](std::uint64_t k) { return source.at(indices.at(k)); }, indices.size(),
      "sub(" + source.label() + ")", SourceKind::Derived);
}

SequenceSource map_values(const SequenceSource& source, std::function<double(double)> fn,
                          std::string label) {
  return SequenceSource::from_generator(
      [source, fn = std::move(fn)](std::uint64_t k) { return fn(source.at(k)); },
      source.horizon(), std::move(label), SourceKind::Derived);
}

SequenceSource materialize(const SequenceSource& source) {
  if (source.stored()) return source;
  return SequenceSource::table(eval_prefix(source, source.horizon()), source.label(),
                               source.kind());
}

}  // namespace rhostat
