#pragma once

#include "tmcrf/dataset.hpp"
#include "tmcrf/residue.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tmcrf {

struct LabelPair {
    std::string id;
    std::span<const Label> gold;
    std::span<const Label> pred;
};

/// Percentage, or nullopt when the denominator is zero.
using Percent = std::optional<double>;

[[nodiscard]] Percent percent(std::size_t num, std::size_t den) noexcept;
/// Two decimals, or "NA".
[[nodiscard]] std::string format_percent(const Percent& p);

struct ResidueMetrics {
    std::size_t tp = 0, fn = 0, fp = 0, tn = 0;

    [[nodiscard]] std::size_t total() const noexcept { return tp + fn + fp + tn; }
    [[nodiscard]] Percent q2() const noexcept { return percent(tp + tn, total()); }
    [[nodiscard]] Percent q2t_obs() const noexcept { return percent(tp, tp + fn); }
    [[nodiscard]] Percent q2t_prd() const noexcept { return percent(tp, tp + fp); }
    [[nodiscard]] Percent q2n_obs() const noexcept { return percent(tn, tn + fp); }
    [[nodiscard]] Percent q2n_prd() const noexcept { return percent(tn, tn + fn); }
};

struct SegmentMetrics {
    std::size_t proteins = 0;
    std::size_t proteins_ok = 0;
    std::size_t observed = 0;
    std::size_t predicted = 0;
    std::size_t matched = 0;

    [[nodiscard]] Percent qok() const noexcept { return percent(proteins_ok, proteins); }
    [[nodiscard]] Percent qtmh_obs() const noexcept { return percent(matched, observed); }
    [[nodiscard]] Percent qtmh_prd() const noexcept { return percent(matched, predicted); }
};

/// Pooled over every residue of every pair. Throws MalformedPair on a
/// length mismatch.
[[nodiscard]] ResidueMetrics per_residue(std::span<const LabelPair> pairs);

/// (observed index, predicted index) pairs. Observed segments are visited
/// left to right; each takes the free predicted segment of largest overlap
/// (leftmost on ties) if that overlap is at least `min_overlap`.
[[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>>
match_segments(std::span<const Segment> obs, std::span<const Segment> pred, std::size_t min_overlap = 3);

[[nodiscard]] SegmentMetrics per_segment(std::span<const LabelPair> pairs);

struct MetricsReport {
    ResidueMetrics residue;
    SegmentMetrics segment;
};

[[nodiscard]] MetricsReport evaluate(std::span<const LabelPair> pairs);

/// `metric<TAB>value` rows, metrics first, then counts.
void write_metrics_tsv(std::ostream& out, const MetricsReport& report);
/// Human-readable block in the conventional per-residue, per-segment order.
void write_metrics_table(std::ostream& out, const MetricsReport& report);

} // namespace tmcrf
