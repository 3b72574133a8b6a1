#pragma once

#include "tmcrf/dataset.hpp"
#include "tmcrf/tables.hpp"
#include "tmcrf/topology.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tmcrf {

/// The eighteen feature groups. `Edges` covers the start, end and
/// label-transition indicators.
enum class FeatureGroup : std::uint8_t {
    Edges,
    Basic,
    HydrophobicWindow,
    HydrophilicWindow,
    Single,
    SingleShuffled,
    SingleHydrophobic,
    SingleHydrophilic,
    Double,
    DoubleShuffled,
    DoubleHydrophobic,
    DoubleHydrophilic,
    Properties,
    Border,
    ShortLoops,
    Electronic,
    ChemicalGroups,
    States,
};

inline constexpr std::size_t kFeatureGroupCount = 18;
inline constexpr std::size_t kHydropathyWindow = 19;
/// Hydropathy threshold in tenths (1.0).
inline constexpr int kHydropathyThresholdTenths = 10;

[[nodiscard]] std::string_view group_tag(FeatureGroup g) noexcept;
[[nodiscard]] std::optional<FeatureGroup> group_from_tag(std::string_view tag) noexcept;
/// Neighbor groups carry a maximum neighbor count k.
[[nodiscard]] bool has_order_bound(FeatureGroup g) noexcept;
[[nodiscard]] constexpr std::size_t group_index(FeatureGroup g) noexcept { return static_cast<std::size_t>(g); }

enum class TopologyChoice : std::uint8_t { Auto, Binary, Extended };

struct FeatureConfig {
    std::array<bool, kFeatureGroupCount> enabled{};
    std::array<int, kFeatureGroupCount> max_order{};
    TopologyChoice topology = TopologyChoice::Auto;
    std::vector<NamedResidueSet> property_groups = standard_property_groups();

    [[nodiscard]] bool is_enabled(FeatureGroup g) const noexcept { return enabled[group_index(g)]; }
    [[nodiscard]] int order(FeatureGroup g) const noexcept { return max_order[group_index(g)]; }
    /// `order` is ignored for groups without a neighbor bound.
    void enable(FeatureGroup g, int order = 0);
    void disable(FeatureGroup g);

    /// Short loops and sequence states are only expressible on the
    /// extended alphabet.
    [[nodiscard]] bool needs_extended() const noexcept;
    /// Throws ConfigConflict for an explicit binary topology that
    /// `needs_extended`.
    [[nodiscard]] TopologyKind resolve_topology() const;

    friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;

    /// Neighbor bounds of the full feature set (exp8).
    [[nodiscard]] static int default_order(FeatureGroup g) noexcept;
    /// One of the eight experiment presets, 1-based.
    [[nodiscard]] static FeatureConfig preset(int experiment);
};

/// Flat `key = value` lines in a fixed order; the property table is only
/// written when it differs from the standard one.
[[nodiscard]] std::string dump_feature_config(const FeatureConfig& config);
/// Applies one `key = value` pair. Returns false if the key does not
/// belong to the feature configuration; throws InvalidConfig on bad values.
bool set_feature_option(FeatureConfig& config, std::string_view key, std::string_view value);
/// FNV-1a over `dump_feature_config`.
[[nodiscard]] std::uint64_t config_hash(const FeatureConfig& config);

enum class Arity : std::uint8_t { Unigram, Bigram };

/// Label-free boolean test on (sequence, position), identified by its group
/// and a group-specific key such as `L3:AKL` or `Aromatic`.
struct ObservationPredicate {
    FeatureGroup group;
    std::string key;
    Arity arity = Arity::Unigram;

    friend bool operator==(const ObservationPredicate&, const ObservationPredicate&) = default;
    friend auto operator<=>(const ObservationPredicate&, const ObservationPredicate&) = default;
};

using PositionPredicates = std::vector<ObservationPredicate>;

/// Active predicates at every position of the record.
[[nodiscard]] std::vector<PositionPredicates> enumerate_predicates(const ProteinRecord& record,
                                                                   const FeatureConfig& config);

} // namespace tmcrf
