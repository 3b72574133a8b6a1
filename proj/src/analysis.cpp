#include "tmcrf/analysis.hpp"

#include "tmcrf/errors.hpp"
#include "tmcrf/model.hpp"
#include "tmcrf/tables.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

namespace tmcrf {

namespace {

void check(const LabeledSequence& item)
{
    if (item.sequence.size() != item.labels.size()) {
        throw Error(ErrorCode::MalformedPair, "'" + item.id + "': sequence and labels differ in length");
    }
}

bool iequals(std::string_view a, std::string_view b)
{
    return std::ranges::equal(a, b, [](char x, char y) {
        return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
    });
}

} // namespace

Composition central_composition(std::span<const LabeledSequence> items, std::size_t half_width)
{
    Composition c;
    for (const auto& item : items) {
        check(item);
        for (const auto& seg : segmentize(item.labels)) {
            const auto center = helix_center(seg);
            const auto lo = center >= seg.start + half_width ? center - half_width : seg.start;
            const auto hi = std::min(seg.end, center + half_width);
            for (auto i = lo; i <= hi; ++i) {
                ++c.counts[index_of(item.sequence[i])];
                ++c.total;
            }
            ++c.helices;
        }
    }
    if (c.helices == 0) {
        throw Error(ErrorCode::EmptyAnalysis, "no helices to analyze");
    }
    return c;
}

std::optional<double> PositionalProfile::frequency(int offset) const
{
    const auto k = static_cast<std::size_t>(offset + radius);
    if (denominators[k] == 0) {
        return std::nullopt;
    }
    return static_cast<double>(counts[k]) / static_cast<double>(denominators[k]);
}

PositionalProfile positional_profile(std::span<const LabeledSequence> items, const ResidueSet& set, int radius)
{
    if (radius < 1) {
        throw Error(ErrorCode::InvalidConfig, "profile radius must be at least 1");
    }
    PositionalProfile p;
    p.radius = radius;
    p.counts.assign(static_cast<std::size_t>(2 * radius + 1), 0);
    p.denominators.assign(p.counts.size(), 0);
    for (const auto& item : items) {
        check(item);
        const auto n = static_cast<long>(item.sequence.size());
        for (const auto& seg : segmentize(item.labels)) {
            const auto center = static_cast<long>(helix_center(seg));
            for (int off = -radius; off <= radius; ++off) {
                const auto i = center + off;
                if (i < 0 || i >= n) {
                    continue;
                }
                const auto k = static_cast<std::size_t>(off + radius);
                ++p.denominators[k];
                if (set.test(index_of(item.sequence[static_cast<std::size_t>(i)]))) {
                    ++p.counts[k];
                }
            }
            ++p.helices;
        }
    }
    if (p.helices == 0) {
        throw Error(ErrorCode::EmptyAnalysis, "no helices to analyze");
    }
    return p;
}

ResidueSet parse_residue_selector(std::string_view selector)
{
    if (iequals(selector, "all")) {
        return residue_set(kStandardLetters);
    }
    for (const auto& g : standard_property_groups()) {
        if (iequals(selector, g.name)) {
            return g.members;
        }
    }
    if (selector.empty()) {
        throw Error(ErrorCode::InvalidConfig, "empty residue selector");
    }
    ResidueSet set;
    for (char ch : selector) {
        const auto r = residue_from_letter(ch);
        if (!r) {
            throw Error(ErrorCode::InvalidConfig, "unknown residue selector '" + std::string(selector) + "'");
        }
        set.set(index_of(*r));
    }
    return set;
}

void write_composition_tsv(std::ostream& out, const Composition& c)
{
    out << "residue\tcount\tfrequency\n";
    for (std::size_t i = 0; i < kResidueAlphabetSize; ++i) {
        const auto r = static_cast<Residue>(i);
        if (r == Residue::Unk && c.counts[i] == 0) {
            continue;
        }
        out << residue_letter(r) << '\t' << c.counts[i] << '\t' << format_double(c.frequency(r)) << '\n';
    }
}

void write_profile_tsv(std::ostream& out, const PositionalProfile& p)
{
    out << "offset\tcount\tdenominator\tfrequency\n";
    for (int off = -p.radius; off <= p.radius; ++off) {
        const auto k = static_cast<std::size_t>(off + p.radius);
        const auto f = p.frequency(off);
        out << off << '\t' << p.counts[k] << '\t' << p.denominators[k] << '\t' << (f ? format_double(*f) : "NA")
            << '\n';
    }
}

} // namespace tmcrf
