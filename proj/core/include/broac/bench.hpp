#pragma once

#include <string>
#include <vector>

#include "broac/resolver.hpp"
#include "broac/worldgen.hpp"

namespace broac {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares of y over x. Needs at least two distinct x values.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// What the benchmark queries retrieve per item, standing in for a row
/// fetched from a store.
struct ItemRecord {
    std::string id;
    std::string type;
};

/// Retrieves every live item, no permission checking.
std::vector<ItemRecord> retrieve_all_items(const World& world);

/// Retrieves the live items the agent holds `ability` on; the permission
/// filter runs inside, so timing this measures checking plus retrieval.
std::vector<ItemRecord> retrieve_visible_items(const World& world, const PermissionStore& store,
                                               EntityIndex agent, std::string_view ability);

struct BenchPoint {
    std::size_t users = 0;
    std::size_t item_count = 0;
    double filtered_ns = 0.0;    // mean wall time per query over the runs
    double unfiltered_ns = 0.0;
};

struct BenchReport {
    std::vector<BenchPoint> points;
    LinearFit filtered_fit;    // query time vs item count
    LinearFit unfiltered_fit;
    std::size_t reps = 0;

    double slope_ratio() const { return filtered_fit.slope / unfiltered_fit.slope; }
};

/// Builds one world per user count (12 items / 24 permissions per user by
/// default), times `reps` runs of the anonymous visible-items query and of
/// the unfiltered enumeration, and fits both mean-time series against item
/// count. World construction stays outside the timed region.
BenchReport run_scaling_benchmark(const std::vector<std::size_t>& user_counts,
                                  const WorldGenParams& base, std::size_t reps = 10);

std::string format_bench_table(const BenchReport& report);
/// One CSV row per size: item_count,t_filtered_ns,t_unfiltered_ns; the fit
/// summary follows as `#` comment lines.
std::string bench_csv(const BenchReport& report);

}  // namespace broac
