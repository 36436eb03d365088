#include "gb2kit/sample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gb2kit/errors.hpp"

namespace gb2kit {

namespace {

std::vector<double> checked_sorted(const std::vector<double>& values) {
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw DataError("Sample: observations must be finite and strictly positive");
    }
    std::vector<double> s = values;
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

Sample::Sample(std::vector<double> values, std::string label)
    : values_(std::move(values)), sorted_(checked_sorted(values_)), label_(std::move(label)) {}

Sample::Sample(std::vector<double> values, std::vector<int> years, std::string label)
    : values_(std::move(values)),
      sorted_(checked_sorted(values_)),
      years_(std::move(years)),
      label_(std::move(label)) {
    if (!years_.empty() && years_.size() != values_.size())
        throw DataError("Sample: year column length does not match value column");
}

double Sample::mean() const {
    if (values_.empty()) throw DataError("Sample: empty");
    double acc = 0.0;
    for (double v : values_) acc += v;
    return acc / static_cast<double>(values_.size());
}

double Sample::rms() const {
    if (values_.empty()) throw DataError("Sample: empty");
    double acc = 0.0;
    for (double v : values_) acc += v * v;
    return std::sqrt(acc / static_cast<double>(values_.size()));
}

double Sample::std_dev() const {
    const double m = mean();
    double acc = 0.0;
    for (double v : values_) acc += (v - m) * (v - m);
    return std::sqrt(acc / static_cast<double>(values_.size()));
}

double Sample::quantile(double u) const {
    if (values_.empty()) throw DataError("Sample: empty");
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("Sample::quantile: u outside [0, 1]");
    const double pos = u * static_cast<double>(sorted_.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted_.size()) return sorted_.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted_[lo] * (1.0 - frac) + sorted_[lo + 1] * frac;
}

}  // namespace gb2kit
