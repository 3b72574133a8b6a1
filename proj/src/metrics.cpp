#include "tmcrf/metrics.hpp"

#include "tmcrf/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <ostream>

namespace tmcrf {

namespace {

void check_pair(const LabelPair& p)
{
    if (p.gold.size() != p.pred.size()) {
        throw Error(ErrorCode::MalformedPair, "'" + p.id + "': gold has " + std::to_string(p.gold.size())
                                                  + " labels, prediction has " + std::to_string(p.pred.size()));
    }
}

std::size_t overlap(const Segment& a, const Segment& b) noexcept
{
    const auto lo = std::max(a.start, b.start);
    const auto hi = std::min(a.end, b.end);
    return hi >= lo ? hi - lo + 1 : 0;
}

struct Row {
    const char* label;
    const char* key;
    Percent value;
};

std::vector<Row> rows(const MetricsReport& r)
{
    return {
        {"TMH recall", "Q2T_obs", r.residue.q2t_obs()},
        {"TMH precision", "Q2T_prd", r.residue.q2t_prd()},
        {"NTMH recall", "Q2N_obs", r.residue.q2n_obs()},
        {"NTMH precision", "Q2N_prd", r.residue.q2n_prd()},
        {"Residues correctly predicted", "Q2", r.residue.q2()},
        {"Observed TMH correctly predicted", "Qtmh_obs", r.segment.qtmh_obs()},
        {"Predicted TMH correctly predicted", "Qtmh_prd", r.segment.qtmh_prd()},
        {"Proteins with all TMH correct", "Qok", r.segment.qok()},
    };
}

} // namespace

Percent percent(std::size_t num, std::size_t den) noexcept
{
    if (den == 0) {
        return std::nullopt;
    }
    return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

std::string format_percent(const Percent& p)
{
    if (!p) {
        return "NA";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *p);
    return buf;
}

ResidueMetrics per_residue(std::span<const LabelPair> pairs)
{
    ResidueMetrics m;
    for (const auto& p : pairs) {
        check_pair(p);
        for (std::size_t i = 0; i < p.gold.size(); ++i) {
            const bool g = p.gold[i] == Label::Helix;
            const bool y = p.pred[i] == Label::Helix;
            if (g && y) {
                ++m.tp;
            } else if (g) {
                ++m.fn;
            } else if (y) {
                ++m.fp;
            } else {
                ++m.tn;
            }
        }
    }
    return m;
}

std::vector<std::pair<std::size_t, std::size_t>>
match_segments(std::span<const Segment> obs, std::span<const Segment> pred, std::size_t min_overlap)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::vector<bool> used(pred.size(), false);
    for (std::size_t o = 0; o < obs.size(); ++o) {
        std::size_t best = pred.size();
        std::size_t best_overlap = 0;
        for (std::size_t p = 0; p < pred.size(); ++p) {
            if (used[p]) {
                continue;
            }
            const auto ov = overlap(obs[o], pred[p]);
            if (ov >= min_overlap && ov > best_overlap) {
                best = p;
                best_overlap = ov;
            }
        }
        if (best < pred.size()) {
            used[best] = true;
            out.emplace_back(o, best);
        }
    }
    return out;
}

SegmentMetrics per_segment(std::span<const LabelPair> pairs)
{
    SegmentMetrics m;
    for (const auto& p : pairs) {
        check_pair(p);
        const auto obs = segmentize(p.gold);
        const auto pred = segmentize(p.pred);
        const auto matched = match_segments(obs, pred).size();
        ++m.proteins;
        m.observed += obs.size();
        m.predicted += pred.size();
        m.matched += matched;
        if (obs.size() == matched && pred.size() == matched) {
            ++m.proteins_ok;
        }
    }
    return m;
}

MetricsReport evaluate(std::span<const LabelPair> pairs)
{
    return {per_residue(pairs), per_segment(pairs)};
}

void write_metrics_tsv(std::ostream& out, const MetricsReport& report)
{
    out << "metric\tvalue\n";
    for (const auto& row : rows(report)) {
        out << row.key << '\t' << format_percent(row.value) << '\n';
    }
    out << "proteins\t" << report.segment.proteins << '\n'
        << "residues\t" << report.residue.total() << '\n'
        << "observed_segments\t" << report.segment.observed << '\n'
        << "predicted_segments\t" << report.segment.predicted << '\n'
        << "matched_segments\t" << report.segment.matched << '\n';
}

void write_metrics_table(std::ostream& out, const MetricsReport& report)
{
    const auto all = rows(report);
    std::size_t width = 0;
    for (const auto& r : all) {
        width = std::max(width, std::string_view(r.label).size());
    }
    auto emit = [&](std::size_t first, std::size_t last) {
        for (auto k = first; k < last; ++k) {
            out << "  " << std::left << std::setw(static_cast<int>(width)) << all[k].label << "  " << std::setw(9)
                << all[k].key << std::right << std::setw(7) << format_percent(all[k].value) << '\n';
        }
    };
    out << "Per-residue (" << report.residue.total() << " residues)\n";
    emit(0, 5);
    out << "Per-segment (" << report.segment.proteins << " proteins, " << report.segment.observed << " observed, "
        << report.segment.predicted << " predicted, " << report.segment.matched << " matched)\n";
    emit(5, all.size());
}

} // namespace tmcrf
