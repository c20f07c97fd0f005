#include "rhostat/weights.hpp"

#include <cmath>
#include <sstream>

#include "rhostat/error.hpp"
#include "rhostat/expr.hpp"
#include "rhostat/io.hpp"

namespace rhostat {

const char* to_string(WeightKind kind) noexcept {
  switch (kind) {
    case WeightKind::Statistical: return "statistical";
    case WeightKind::ClosedForm: return "closed-form";
    case WeightKind::Table: return "table";
  }
  return "unknown";
}

namespace {

void validate(const std::vector<double>& values, const std::string& description) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    const std::uint64_t n = i + 1;
    if (!std::isfinite(v) || v <= 0.0) {
      std::ostringstream msg;
      msg << "weights '" << description << "': rho_" << n << " = " << v << " is not positive";
      throw IndexedError(ErrorCode::InvalidWeights, msg.str(), n);
    }
    if (i > 0 && v < values[i - 1]) {
      std::ostringstream msg;
      msg << "weights '" << description << "': rho_" << n << " = " << v << " < rho_" << i
          << " = " << values[i - 1] << " (decreasing)";
      throw IndexedError(ErrorCode::InvalidWeights, msg.str(), n);
    }
  }
}

}  // namespace

WeightSequence::WeightSequence(WeightKind kind, std::uint64_t horizon, std::string description,
                               std::shared_ptr<const std::vector<double>> values)
    : kind_(kind), horizon_(horizon), description_(std::move(description)),
      values_(std::move(values)) {}

WeightSequence WeightSequence::statistical(std::uint64_t horizon) {
  if (horizon == 0) fail(ErrorCode::InvalidWeights, "weights need a positive horizon");
  return WeightSequence(WeightKind::Statistical, horizon, "statistical", nullptr);
}

WeightSequence WeightSequence::closed_form(std::function<double(double)> fn, std::uint64_t horizon,
                                           const std::map<std::uint64_t, double>& overrides,
                                           std::string description) {
  if (horizon == 0) fail(ErrorCode::InvalidWeights, "weights need a positive horizon");
  std::vector<double> values(horizon);
  for (std::uint64_t n = 1; n <= horizon; ++n) values[n - 1] = fn(static_cast<double>(n));
  for (const auto& [n, v] : overrides) {
    if (n >= 1 && n <= horizon) values[n - 1] = v;
  }
  validate(values, description);
  return WeightSequence(WeightKind::ClosedForm, horizon, std::move(description),
                        std::make_shared<const std::vector<double>>(std::move(values)));
}

WeightSequence WeightSequence::table(std::vector<double> values, std::string description) {
  if (values.empty()) fail(ErrorCode::InvalidWeights, "weight table '" + description + "' is empty");
  validate(values, description);
  const std::uint64_t horizon = values.size();
  return WeightSequence(WeightKind::Table, horizon, std::move(description),
                        std::make_shared<const std::vector<double>>(std::move(values)));
}

double WeightSequence::at(std::uint64_t n) const {
  if (n == 0 || n > horizon_) {
    fail(ErrorCode::HorizonExceeded, "weights '" + description_ + "': index " + std::to_string(n) +
                                         " outside 1.." + std::to_string(horizon_));
  }
  if (!values_) return static_cast<double>(n);
  return (*values_)[n - 1];
}

WeightSpec parse_weight_spec(std::string_view text) {
  WeightSpec spec;
  spec.text = std::string(text);
  if (text == "statistical") {
    spec.kind = WeightKind::Statistical;
    return spec;
  }
  if (text.starts_with("expr:")) {
    spec.kind = WeightKind::ClosedForm;
    std::vector<std::string> parts;
    std::istringstream body{std::string(text.substr(5))};
    for (std::string part; std::getline(body, part, ';');) parts.push_back(part);
    if (parts.empty()) fail(ErrorCode::ParseError, "empty weight expression");
    spec.expression = parts.front();
    // Remaining "i=v" clauses pin individual terms.
    for (std::size_t p = 1; p < parts.size(); ++p) {
      const std::string& clause = parts[p];
      const auto eq = clause.find('=');
      if (eq == std::string::npos)
        fail(ErrorCode::ParseError, "weight pin '" + clause + "' must look like <index>=<value>");
      try {
        const auto index = std::stoull(clause.substr(0, eq));
        const double value = std::stod(clause.substr(eq + 1));
        spec.overrides[index] = value;
      } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "weight pin '" + clause + "' is malformed");
      }
    }
    Expression::parse(spec.expression);  // reject bad syntax early
    return spec;
  }
  if (text.starts_with("table:")) {
    spec.kind = WeightKind::Table;
    spec.table_path = std::string(text.substr(6));
    return spec;
  }
  fail(ErrorCode::ParseError, "unknown weight spec '" + std::string(text) +
                                  "' (expected statistical, expr:<expr>, or table:<path>)");
}

WeightSequence make_weights(const WeightSpec& spec, std::uint64_t horizon) {
  switch (spec.kind) {
    case WeightKind::Statistical:
      return WeightSequence::statistical(horizon);
    case WeightKind::ClosedForm: {
      auto expr = Expression::parse(spec.expression);
      std::string description = "expr:" + spec.expression;
      for (const auto& [n, v] : spec.overrides) {
        std::ostringstream pin;
        pin << ";" << n << "=" << v;
        description += pin.str();
      }
      return WeightSequence::closed_form(expr, horizon, spec.overrides, description);
    }
    case WeightKind::Table: {
      std::vector<double> values =
          spec.table_path.empty() ? spec.table_values : read_value_column(spec.table_path);
      auto w = WeightSequence::table(std::move(values), spec.text.empty() ? "table" : spec.text);
      if (w.horizon() < horizon) {
        fail(ErrorCode::HorizonExceeded, "weight table '" + w.description() + "' has " +
                                             std::to_string(w.horizon()) + " entries, " +
                                             std::to_string(horizon) + " required");
      }
      return w;
    }
  }
  fail(ErrorCode::InvalidWeights, "unhandled weight kind");
}

WeightSequence make_weights(std::string_view text, std::uint64_t horizon) {
  return make_weights(parse_weight_spec(text), horizon);
}

ConditionReport check_conditions(const WeightSequence& weights, std::uint64_t horizon,
                                 const ConditionBounds& bounds) {
  if (horizon == 0 || horizon + 1 > weights.horizon()) {
    fail(ErrorCode::HorizonExceeded,
         "check_conditions needs rho on 1.." + std::to_string(horizon + 1) + ", weights '" +
             weights.description() + "' stop at " + std::to_string(weights.horizon()));
  }
  ConditionReport report;
  report.horizon = horizon;
  report.bounds = bounds;

  const double floor = bounds.divergence_floor ? bounds.divergence_floor(horizon)
                                               : std::log(static_cast<double>(horizon));

  double max_ratio = 0.0;
  double max_increment = -std::numeric_limits<double>::infinity();
  double prev = weights.at(1);
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    const double rho = prev;
    const double next = weights.at(n + 1);
    const double ratio = rho / static_cast<double>(n);
    const double increment = next - rho;

    max_ratio = std::max(max_ratio, ratio);
    max_increment = std::max(max_increment, increment);
    if (report.non_decreasing.passed && next < rho) {
      report.non_decreasing.passed = false;
      report.non_decreasing.witness = n;
    }
    if (report.ratio_bounded.passed && ratio > bounds.ratio_bound) {
      report.ratio_bounded.passed = false;
      report.ratio_bounded.witness = n;
    }
    if (report.increment_bounded.passed && increment > bounds.increment_bound) {
      report.increment_bounded.passed = false;
      report.increment_bounded.witness = n;
    }
    prev = next;
  }
  report.ratio_bounded.observed = max_ratio;
  report.increment_bounded.observed = max_increment;

  report.divergent.observed = weights.at(horizon);
  if (weights.at(horizon) < floor) {
    report.divergent.passed = false;
    report.divergent.witness = horizon;
  }
  return report;
}

}  // namespace rhostat
