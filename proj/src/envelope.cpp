#include "natline/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "natline/errors.hpp"

namespace natline {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTabulatedAreaTolerance = 1e-6;

void require_positive_rate(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw InvalidEnvelope("envelope rate must be positive and finite");
  }
}

}  // namespace

std::string_view to_string(EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::Rectangular:
      return "rect";
    case EnvelopeKind::Sine:
      return "sine";
    case EnvelopeKind::Tabulated:
      return "tabulated";
  }
  return "unknown";
}

Envelope::Envelope(EnvelopeKind kind, double rate, double duration,
                   std::vector<EnvelopeSample> table)
    : kind_(kind), rate_(rate), duration_(duration), table_(std::move(table)) {
  if (!table_.empty()) {
    cumulative_area_.resize(table_.size(), 0.0);
    for (std::size_t i = 1; i < table_.size(); ++i) {
      const double dt = table_[i].t - table_[i - 1].t;
      cumulative_area_[i] = cumulative_area_[i - 1] +
                            0.5 * dt * (table_[i].omega + table_[i - 1].omega);
    }
  }
}

Envelope Envelope::rectangular(double rate) {
  require_positive_rate(rate);
  return Envelope(EnvelopeKind::Rectangular, rate, kPi / rate, {});
}

Envelope Envelope::sine(double rate) {
  require_positive_rate(rate);
  return Envelope(EnvelopeKind::Sine, rate, kPi / rate, {});
}

Envelope Envelope::tabulated(std::vector<EnvelopeSample> table) {
  if (table.size() < 2) {
    throw InvalidEnvelope("tabulated envelope needs at least two samples");
  }
  for (const auto& s : table) {
    if (!std::isfinite(s.t) || !std::isfinite(s.omega)) {
      throw InvalidEnvelope("tabulated envelope contains non-finite values");
    }
  }
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!(table[i].t > table[i - 1].t)) {
      throw InvalidEnvelope(
          "tabulated envelope times must be strictly ascending");
    }
  }
  const double duration = -table.front().t;
  if (!(duration > 0.0)) {
    throw InvalidEnvelope("tabulated envelope must start at negative time");
  }
  if (std::abs(table.back().t) > 1e-9 * duration) {
    throw InvalidEnvelope("tabulated envelope must end at t = 0");
  }
  table.back().t = 0.0;

  Envelope env(EnvelopeKind::Tabulated, kPi / duration, duration,
               std::move(table));
  const double total = env.cumulative_area_.back();
  if (std::abs(total - kPi) > kTabulatedAreaTolerance * kPi) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "tabulated envelope area " << total << " differs from pi";
    throw InvalidEnvelope(msg.str());
  }
  return env;
}

Envelope Envelope::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidEnvelope("cannot open envelope file " + path.string());
  }
  in.imbue(std::locale::classic());
  std::vector<EnvelopeSample> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    EnvelopeSample s{};
    std::string rest;
    if (!(row >> s.t >> s.omega) || (row >> rest)) {
      throw InvalidEnvelope("malformed envelope row " +
                            std::to_string(line_no) + " in " + path.string());
    }
    table.push_back(s);
  }
  if (table.empty()) {
    throw InvalidEnvelope("envelope file " + path.string() + " is empty");
  }
  return tabulated(std::move(table));
}

double Envelope::evaluate(double t) const {
  if (t < -duration_ || t > 0.0) return 0.0;
  switch (kind_) {
    case EnvelopeKind::Rectangular:
      return rate_;
    case EnvelopeKind::Sine:
      // sin(rate * t) may round to a tiny positive value at t = -duration.
      return std::max(0.0, -0.5 * kPi * rate_ * std::sin(rate_ * t));
    case EnvelopeKind::Tabulated: {
      auto it = std::upper_bound(
          table_.begin(), table_.end(), t,
          [](double value, const EnvelopeSample& s) { return value < s.t; });
      if (it == table_.end()) return table_.back().omega;
      if (it == table_.begin()) return table_.front().omega;
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (t - lo.t) / (hi.t - lo.t);
      return lo.omega + w * (hi.omega - lo.omega);
    }
  }
  return 0.0;
}

double Envelope::area(double t) const {
  t = std::clamp(t, -duration_, 0.0);
  switch (kind_) {
    case EnvelopeKind::Rectangular:
      return rate_ * (t + duration_);
    case EnvelopeKind::Sine:
      return 0.5 * kPi * (std::cos(rate_ * t) + 1.0);
    case EnvelopeKind::Tabulated: {
      auto it = std::upper_bound(
          table_.begin(), table_.end(), t,
          [](double value, const EnvelopeSample& s) { return value < s.t; });
      if (it == table_.end()) return cumulative_area_.back();
      if (it == table_.begin()) return 0.0;
      const std::size_t i = static_cast<std::size_t>(it - table_.begin()) - 1;
      const auto& lo = table_[i];
      const double dt = t - lo.t;
      const double w_now = evaluate(t);
      return cumulative_area_[i] + 0.5 * dt * (lo.omega + w_now);
    }
  }
  return 0.0;
}

std::vector<double> Envelope::breakpoints() const {
  if (kind_ != EnvelopeKind::Tabulated) return {-duration_, 0.0};
  std::vector<double> out;
  out.reserve(table_.size());
  for (const auto& s : table_) out.push_back(s.t);
  return out;
}

}  // namespace natline
