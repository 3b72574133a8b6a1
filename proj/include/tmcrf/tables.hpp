#pragma once

#include "tmcrf/residue.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tmcrf {

/// Kyte-Doolittle hydropathy in tenths, so window sums and threshold tests
/// stay exact. The sentinel residue contributes 0.
[[nodiscard]] int kd_tenths(Residue r) noexcept;
[[nodiscard]] double kd_value(Residue r) noexcept;

/// Mean hydropathy over positions [i - w/2, i + w/2] clipped to the
/// sequence; the divisor is the number of positions actually covered.
[[nodiscard]] double window_mean_kd(std::span<const Residue> seq, std::size_t i, std::size_t w);

/// Sum of `kd_tenths` over [first, last] (inclusive).
[[nodiscard]] int kd_sum_tenths(std::span<const Residue> seq, std::size_t first, std::size_t last);

enum class ElectronicClass : std::uint8_t { StrongDonor, WeakDonor, Neutral, WeakAcceptor, StrongAcceptor };

inline constexpr std::size_t kElectronicClassCount = 5;

[[nodiscard]] std::string_view electronic_name(ElectronicClass c) noexcept;

struct NamedResidueSet {
    std::string name;
    ResidueSet members;

    friend bool operator==(const NamedResidueSet&, const NamedResidueSet&) = default;
};

struct ResidueClassTables {
    /// Aromatic, Hydrophobic, Positive, Polar, Charged, Negative, Aliphatic,
    /// Small, Tiny. Groups overlap.
    std::vector<NamedResidueSet> property_groups;
    /// Partition of the 20 standard residues.
    std::array<std::optional<ElectronicClass>, kResidueAlphabetSize> electronic{};
    /// Side-chain chemical component groups, named "1".."18".
    std::vector<NamedResidueSet> chemical_groups;

    [[nodiscard]] static const ResidueClassTables& standard();
};

[[nodiscard]] const std::vector<NamedResidueSet>& standard_property_groups();

struct Classification {
    std::vector<std::string> properties;
    std::optional<ElectronicClass> electronic;
    std::vector<int> chemical_groups;
};

[[nodiscard]] Classification classify(Residue r, const ResidueClassTables& tables = ResidueClassTables::standard());

} // namespace tmcrf
