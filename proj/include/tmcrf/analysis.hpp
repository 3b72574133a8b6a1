#pragma once

#include "tmcrf/dataset.hpp"
#include "tmcrf/residue.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tmcrf {

/// A sequence with the helix labeling to analyze (usually a prediction).
struct LabeledSequence {
    std::string id;
    std::span<const Residue> sequence;
    std::span<const Label> labels;
};

/// Midpoint residue of a segment; the lower median for even lengths.
[[nodiscard]] constexpr std::size_t helix_center(const Segment& s) noexcept
{
    return s.start + (s.length() - 1) / 2;
}

struct Composition {
    std::array<std::size_t, kResidueAlphabetSize> counts{};
    std::size_t total = 0;
    std::size_t helices = 0;

    [[nodiscard]] double frequency(Residue r) const
    {
        return static_cast<double>(counts[index_of(r)]) / static_cast<double>(total);
    }
};

/// Residue tallies over a window of 2*half_width+1 residues centered on
/// every helix, clipped to the helix. Throws EmptyAnalysis if there are no
/// helices and MalformedPair on a length mismatch.
[[nodiscard]] Composition central_composition(std::span<const LabeledSequence> items, std::size_t half_width = 4);

struct PositionalProfile {
    int radius = 0;
    std::size_t helices = 0;
    /// Indexed by offset + radius.
    std::vector<std::size_t> counts;
    std::vector<std::size_t> denominators;

    [[nodiscard]] std::optional<double> frequency(int offset) const;
};

/// Fraction of residues in `set` at each offset from the helix centers,
/// over offsets that fall inside the sequence.
[[nodiscard]] PositionalProfile positional_profile(std::span<const LabeledSequence> items, const ResidueSet& set,
                                                   int radius = 25);

/// "hydrophobic", "polar", "charged" (and the other property group names,
/// case-insensitive), "all", or a string of one-letter codes.
[[nodiscard]] ResidueSet parse_residue_selector(std::string_view selector);

/// `residue<TAB>count<TAB>frequency`
void write_composition_tsv(std::ostream& out, const Composition& c);
/// `offset<TAB>count<TAB>denominator<TAB>frequency`
void write_profile_tsv(std::ostream& out, const PositionalProfile& p);

} // namespace tmcrf
