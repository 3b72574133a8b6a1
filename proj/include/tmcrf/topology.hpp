#pragma once

#include "tmcrf/residue.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tmcrf {

enum class TopologyKind { Binary, Extended };

[[nodiscard]] std::string_view topology_name(TopologyKind kind) noexcept;
[[nodiscard]] std::optional<TopologyKind> topology_from_name(std::string_view name) noexcept;

/// Role of a state inside a run of equal binary labels.
enum class StateFamily : std::uint8_t {
    NonHelix,     // binary topology
    Helix,        // binary topology
    LoopIn,       // first residues of a loop of length >= 7
    LoopInterior,
    LoopOut,      // last residues of a loop of length >= 7
    NTermIn,      // N-terminal loop shorter than 7
    NTermOut,
    CTermIn,      // C-terminal loop shorter than 7
    CTermOut,
    ShortLoop,    // loop shorter than 7 between two helices
    HelixIn,
    HelixCore,
    HelixOut,
};

struct StateInfo {
    std::string name;
    Label projection;
    StateFamily family;
    /// 1-based position for entering states, residues remaining (including
    /// this one) for exiting states, 0 for self-looping states.
    int count;
};

using StateId = std::uint16_t;
using StatePath = std::vector<StateId>;

/// Label alphabet of the chain together with its hard transition
/// constraints and the projection back to helix/non-helix labels.
///
/// The extended alphabet is a duration expansion: helix runs decompose
/// into up to 5 entering states, a self-looping core and up to 5 exiting
/// states; loops between helices shorter than 7 use ShortLoop1..6; other
/// loops use the same end/interior split. Every binary string has exactly
/// one admissible state path.
class StateTopology {
public:
    static StateTopology binary();
    static StateTopology extended();
    static StateTopology of_kind(TopologyKind kind);

    [[nodiscard]] TopologyKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
    [[nodiscard]] const StateInfo& state(StateId s) const { return states_.at(s); }
    [[nodiscard]] const std::vector<StateInfo>& states() const noexcept { return states_; }
    [[nodiscard]] Label projection(StateId s) const { return states_[s].projection; }
    [[nodiscard]] std::optional<StateId> find(std::string_view name) const;

    [[nodiscard]] bool allowed(StateId from, StateId to) const { return transitions_(from, to); }
    [[nodiscard]] bool allowed_start(StateId s) const { return start_[s]; }
    [[nodiscard]] bool allowed_end(StateId s) const { return end_[s]; }
    [[nodiscard]] const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& transitions() const noexcept
    {
        return transitions_;
    }

private:
    StateTopology() = default;
    StateId add(std::string name, Label projection, StateFamily family, int count);
    void allow(StateId from, StateId to) { transitions_(from, to) = true; }

    TopologyKind kind_ = TopologyKind::Binary;
    std::vector<StateInfo> states_;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> transitions_;
    std::vector<bool> start_;
    std::vector<bool> end_;
};

/// Maps gold binary labels onto the state alphabet. For the binary
/// topology this is the identity on labels.
[[nodiscard]] StatePath derive_states(std::span<const Label> gold, const StateTopology& topo);

[[nodiscard]] Labels project(std::span<const StateId> path, const StateTopology& topo);

/// Start, end and every transition admissible.
[[nodiscard]] bool is_admissible(std::span<const StateId> path, const StateTopology& topo);

} // namespace tmcrf
