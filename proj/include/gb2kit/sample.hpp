#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gb2kit {

// Positive observations kept in arrival order with a sorted view alongside.
class Sample {
public:
    Sample() = default;
    explicit Sample(std::vector<double> values, std::string label = {});
    Sample(std::vector<double> values, std::vector<int> years, std::string label = {});

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    const std::vector<double>& values() const { return values_; }  // original order
    const std::vector<double>& sorted() const { return sorted_; }  // ascending

    const std::string& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    bool has_years() const { return !years_.empty(); }
    const std::vector<int>& years() const { return years_; }

    const std::optional<std::string>& deflator_base() const { return deflator_base_; }
    void set_deflator_base(std::string base) { deflator_base_ = std::move(base); }

    double min() const { return sorted_.front(); }
    double max() const { return sorted_.back(); }
    double mean() const;
    double rms() const;     // sqrt of the mean square
    double std_dev() const;
    // Order statistic at probability u, linear interpolation between ranks.
    double quantile(double u) const;

private:
    std::vector<double> values_;
    std::vector<double> sorted_;
    std::vector<int> years_;
    std::string label_;
    std::optional<std::string> deflator_base_;
};

}  // namespace gb2kit
