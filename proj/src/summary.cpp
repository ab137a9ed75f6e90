#include "mpss/model_io.hpp"

#include <algorithm>
#include <cmath>

namespace mpss {

const MeasureSummary& SummaryStats::at(std::string_view measure) const {
  for (const auto& m : measures) {
    if (m.measure == measure) return m;
  }
  throw ValidationError("no summary for measure '" + std::string(measure) + "'");
}

SummaryStats summarize(const Dataset& dataset) {
  dataset.validate();
  SummaryStats out;
  const auto n = static_cast<double>(dataset.size());
  for (const auto& name : dataset.measure_names()) {
    const Eigen::VectorXd& v = dataset.measure(name);
    MeasureSummary s;
    s.measure = name;
    if (v.size() > 0) {
      s.mean = v.mean();
      s.min = v.minCoeff();
      s.max = v.maxCoeff();
      s.sd = v.size() > 1 ? std::sqrt((v.array() - s.mean).square().sum() / (n - 1.0)) : 0.0;
      // Guard the documented ordering against last-bit rounding of the mean.
      s.mean = std::clamp(s.mean, s.min, s.max);
    }
    out.measures.push_back(std::move(s));
  }
  return out;
}

}  // namespace mpss
