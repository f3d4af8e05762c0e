#pragma once

// Estimation accuracy: MRE/MMRE, MER/MMER, mean error and its sample
// standard deviation, plus model-vs-model improvement in percentage points.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ucp/errors.hpp"

namespace ucp {

struct ObservationPair {
    std::string project_id;
    double actual = 0.0;
    double predicted = 0.0;
};

inline double mre(const ObservationPair& o) {
    if (!(o.actual > 0.0)) throw ValidationError(o.project_id, "actual", "must be positive for MRE");
    return std::abs(o.actual - o.predicted) / o.actual;
}

inline double mer(const ObservationPair& o) {
    if (!(o.predicted > 0.0)) throw ValidationError(o.project_id, "predicted", "must be positive for MER");
    return std::abs(o.actual - o.predicted) / o.predicted;
}

/// Signed error, actual minus predicted.
inline double signed_error(const ObservationPair& o) { return o.actual - o.predicted; }

/// Published comparison tables print predicted minus actual.
inline double display_error(double internal_error) { return -internal_error; }

struct AccuracySummary {
    double mmre = 0.0;
    double mmer = 0.0;
    double mean_error = 0.0;   // mean of actual - predicted
    std::optional<double> sd;  // sample SD (N-1); empty for a single observation
    std::size_t n = 0;
    std::vector<std::string> project_ids;
};

inline AccuracySummary summarize(std::span<const ObservationPair> pairs) {
    if (pairs.empty()) throw ValidationError("summary", "", "no observations");
    AccuracySummary s;
    s.n = pairs.size();
    for (const auto& p : pairs) {
        s.mmre += mre(p);
        s.mmer += mer(p);
        s.mean_error += signed_error(p);
        s.project_ids.push_back(p.project_id);
    }
    const auto n = static_cast<double>(s.n);
    s.mmre /= n;
    s.mmer /= n;
    s.mean_error /= n;
    if (s.n >= 2) {
        double ss = 0.0;
        for (const auto& p : pairs) {
            const double d = signed_error(p) - s.mean_error;
            ss += d * d;
        }
        s.sd = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

/// Reduction of MMRE and MMER from `base` to `candidate`, in percentage points.
/// Positive means the candidate is more accurate.
struct Improvement {
    double mmre_points = 0.0;
    double mmer_points = 0.0;
};

inline Improvement improvement(const AccuracySummary& base, const AccuracySummary& candidate) {
    auto a = base.project_ids;
    auto b = candidate.project_ids;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw ValidationError("improvement", "", "summaries cover different project sets");
    return {100.0 * (base.mmre - candidate.mmre), 100.0 * (base.mmer - candidate.mmer)};
}

}  // namespace ucp
