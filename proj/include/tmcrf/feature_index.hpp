#pragma once

#include "tmcrf/features.hpp"
#include "tmcrf/topology.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tmcrf {

/// Label granularity a feature group conditions on.
enum class ContextSpace : std::uint8_t {
    State,        // one concrete state (start/end indicators)
    Binary,       // the projected helix/non-helix label
    StatePair,    // an admissible transition between concrete states
    BinaryChange, // a transition whose endpoints project differently
    ShortLoop,    // any ShortLoop state
    Family,       // HelixCore / HelixEnd / LoopEnd
};

inline constexpr std::size_t kContextSpaceCount = 6;

[[nodiscard]] constexpr bool is_transition_space(ContextSpace s) noexcept
{
    return s == ContextSpace::StatePair || s == ContextSpace::BinaryChange;
}

[[nodiscard]] ContextSpace context_space(FeatureGroup group, Arity arity) noexcept;

/// Projection of states (or state pairs) onto the context symbols of each
/// space. Symbols are dense per space; -1 means "no context".
class ContextMap {
public:
    ContextMap() = default;
    explicit ContextMap(const StateTopology& topo);

    [[nodiscard]] int of_state(ContextSpace space, StateId s) const { return map_[idx(space)][s]; }
    [[nodiscard]] int of_transition(ContextSpace space, StateId prev, StateId cur) const
    {
        return map_[idx(space)][prev * states_ + cur];
    }
    [[nodiscard]] std::size_t count(ContextSpace space) const { return names_[idx(space)].size(); }
    [[nodiscard]] const std::string& name(ContextSpace space, int ctx) const
    {
        return names_[idx(space)][static_cast<std::size_t>(ctx)];
    }
    [[nodiscard]] std::optional<int> find(ContextSpace space, std::string_view name) const;
    [[nodiscard]] std::size_t states() const noexcept { return states_; }

private:
    static constexpr std::size_t idx(ContextSpace s) noexcept { return static_cast<std::size_t>(s); }

    std::size_t states_ = 0;
    std::array<std::vector<std::string>, kContextSpaceCount> names_;
    std::array<std::vector<int>, kContextSpaceCount> map_;
};

/// An observation predicate crossed with a label context.
struct FeatureKey {
    ObservationPredicate predicate;
    std::string context;

    friend bool operator==(const FeatureKey&, const FeatureKey&) = default;
};

/// Ordering used for dense index assignment: group, key, label context.
[[nodiscard]] bool feature_key_less(const FeatureKey& a, const FeatureKey& b);

using FeatureId = std::uint32_t;
using PredicateId = std::uint32_t;

struct ContextFeature {
    int context;
    FeatureId feature;
};

/// Bijection between instantiated feature keys and 0..K-1, with a
/// predicate-level view used when building potentials.
class FeatureIndex {
public:
    FeatureIndex() = default;
    /// Sorts and deduplicates the keys. Throws InvalidConfig for a context
    /// that does not exist in the topology.
    FeatureIndex(std::vector<FeatureKey> keys, const StateTopology& topo);

    [[nodiscard]] std::size_t size() const noexcept { return keys_.size(); }
    [[nodiscard]] const FeatureKey& key(FeatureId f) const { return keys_.at(f); }
    [[nodiscard]] std::optional<FeatureId> find(const FeatureKey& key) const;

    [[nodiscard]] std::size_t predicate_count() const noexcept { return predicate_space_.size(); }
    [[nodiscard]] std::optional<PredicateId> find_predicate(const ObservationPredicate& p) const;
    [[nodiscard]] ContextSpace space(PredicateId p) const { return predicate_space_[p]; }
    [[nodiscard]] std::span<const ContextFeature> features_of(PredicateId p) const
    {
        return {pred_features_.data() + pred_offsets_[p], pred_offsets_[p + 1] - pred_offsets_[p]};
    }
    [[nodiscard]] const ContextMap& contexts() const noexcept { return contexts_; }

    /// `group<TAB>key<TAB>context<TAB>index`
    [[nodiscard]] std::string row(FeatureId f) const;
    void write(std::ostream& out) const;
    /// Parses `write` output (extra trailing columns are ignored). Rows must
    /// appear in dense-index order.
    [[nodiscard]] static FeatureIndex read(std::istream& in, const StateTopology& topo);

    friend bool operator==(const FeatureIndex& a, const FeatureIndex& b) { return a.keys_ == b.keys_; }

private:
    static std::string predicate_lookup_key(const ObservationPredicate& p);

    std::vector<FeatureKey> keys_;
    ContextMap contexts_;
    std::unordered_map<std::string, PredicateId> predicate_ids_;
    std::vector<ContextSpace> predicate_space_;
    std::vector<std::size_t> pred_offsets_;
    std::vector<ContextFeature> pred_features_;
};

/// Predicates at each position resolved against an index (CSR layout).
/// Predicates unknown to the index are dropped.
struct CompiledSequence {
    std::vector<std::uint32_t> offsets;
    std::vector<PredicateId> predicates;

    [[nodiscard]] std::size_t length() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
    [[nodiscard]] std::span<const PredicateId> at(std::size_t i) const
    {
        return {predicates.data() + offsets[i], offsets[i + 1] - offsets[i]};
    }
};

[[nodiscard]] CompiledSequence compile(const std::vector<PositionPredicates>& predicates, const FeatureIndex& index);

/// Instantiates exactly the keys whose predicate fires somewhere in the
/// training data together with the gold label context at that position.
[[nodiscard]] FeatureIndex build_index(const Dataset& train, const FeatureConfig& config, const StateTopology& topo);

} // namespace tmcrf
