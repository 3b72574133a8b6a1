#include "tmcrf/topology.hpp"

#include "tmcrf/dataset.hpp"
#include "tmcrf/errors.hpp"

#include <algorithm>
#include <array>

namespace tmcrf {

namespace {

constexpr int kEndStates = 5;
constexpr int kShortLoopMax = 6;
constexpr int kTerminalShortMax = 3; // ceil(6 / 2)

struct ExtendedIds {
    std::array<StateId, kEndStates + 1> loop_in{};  // 1-based
    StateId loop_interior{};
    std::array<StateId, kEndStates + 1> loop_out{}; // indexed by residues remaining
    std::array<StateId, kTerminalShortMax + 1> nterm_in{};
    std::array<StateId, kTerminalShortMax + 1> nterm_out{};
    std::array<StateId, kTerminalShortMax + 1> cterm_in{};
    std::array<StateId, kTerminalShortMax + 1> cterm_out{};
    std::array<StateId, kShortLoopMax + 1> short_loop{};
    std::array<StateId, kEndStates + 1> helix_in{};
    StateId helix_core{};
    std::array<StateId, kEndStates + 1> helix_out{};
};

ExtendedIds extended_ids(const StateTopology& topo)
{
    ExtendedIds ids;
    auto get = [&](const std::string& name) { return *topo.find(name); };
    for (int k = 1; k <= kEndStates; ++k) {
        ids.loop_in[k] = get("LoopIn" + std::to_string(k));
        ids.loop_out[k] = get("LoopOut" + std::to_string(k));
        ids.helix_in[k] = get("HelixIn" + std::to_string(k));
        ids.helix_out[k] = get("HelixOut" + std::to_string(k));
    }
    for (int k = 1; k <= kTerminalShortMax; ++k) {
        ids.nterm_in[k] = get("NTermIn" + std::to_string(k));
        ids.nterm_out[k] = get("NTermOut" + std::to_string(k));
        ids.cterm_in[k] = get("CTermIn" + std::to_string(k));
        ids.cterm_out[k] = get("CTermOut" + std::to_string(k));
    }
    for (int k = 1; k <= kShortLoopMax; ++k) {
        ids.short_loop[k] = get("ShortLoop" + std::to_string(k));
    }
    ids.loop_interior = get("LoopInterior");
    ids.helix_core = get("HelixCore");
    return ids;
}

// Appends the end/interior decomposition of a run of length n.
template <std::size_t N, std::size_t M>
void emit_split(StatePath& out, std::size_t n, int cap, const std::array<StateId, N>& in,
                std::optional<StateId> interior, const std::array<StateId, M>& exit)
{
    const auto entering = std::min<std::size_t>(static_cast<std::size_t>(cap), (n + 1) / 2);
    const auto exiting = std::min<std::size_t>(static_cast<std::size_t>(cap), n / 2);
    const auto middle = n - entering - exiting;
    for (std::size_t k = 1; k <= entering; ++k) {
        out.push_back(in[k]);
    }
    for (std::size_t k = 0; k < middle; ++k) {
        out.push_back(*interior);
    }
    for (std::size_t k = exiting; k >= 1; --k) {
        out.push_back(exit[k]);
    }
}

} // namespace

std::string_view topology_name(TopologyKind kind) noexcept
{
    return kind == TopologyKind::Binary ? "binary" : "extended";
}

std::optional<TopologyKind> topology_from_name(std::string_view name) noexcept
{
    if (name == "binary") {
        return TopologyKind::Binary;
    }
    if (name == "extended") {
        return TopologyKind::Extended;
    }
    return std::nullopt;
}

StateId StateTopology::add(std::string name, Label projection, StateFamily family, int count)
{
    states_.push_back({std::move(name), projection, family, count});
    return static_cast<StateId>(states_.size() - 1);
}

std::optional<StateId> StateTopology::find(std::string_view name) const
{
    for (std::size_t s = 0; s < states_.size(); ++s) {
        if (states_[s].name == name) {
            return static_cast<StateId>(s);
        }
    }
    return std::nullopt;
}

StateTopology StateTopology::binary()
{
    StateTopology topo;
    topo.kind_ = TopologyKind::Binary;
    topo.add("NH", Label::NonHelix, StateFamily::NonHelix, 0);
    topo.add("H", Label::Helix, StateFamily::Helix, 0);
    topo.transitions_ = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(2, 2, true);
    topo.start_.assign(2, true);
    topo.end_.assign(2, true);
    return topo;
}

StateTopology StateTopology::extended()
{
    StateTopology topo;
    topo.kind_ = TopologyKind::Extended;
    const auto loop = Label::NonHelix;
    const auto helix = Label::Helix;
    ExtendedIds ids;

    // Loop states first so that ties in decoding fall to non-helix.
    for (int k = 1; k <= kEndStates; ++k) {
        ids.loop_in[k] = topo.add("LoopIn" + std::to_string(k), loop, StateFamily::LoopIn, k);
    }
    ids.loop_interior = topo.add("LoopInterior", loop, StateFamily::LoopInterior, 0);
    for (int k = kEndStates; k >= 1; --k) {
        ids.loop_out[k] = topo.add("LoopOut" + std::to_string(k), loop, StateFamily::LoopOut, k);
    }
    for (int k = 1; k <= kTerminalShortMax; ++k) {
        ids.nterm_in[k] = topo.add("NTermIn" + std::to_string(k), loop, StateFamily::NTermIn, k);
    }
    for (int k = kTerminalShortMax; k >= 1; --k) {
        ids.nterm_out[k] = topo.add("NTermOut" + std::to_string(k), loop, StateFamily::NTermOut, k);
    }
    for (int k = 1; k <= kTerminalShortMax; ++k) {
        ids.cterm_in[k] = topo.add("CTermIn" + std::to_string(k), loop, StateFamily::CTermIn, k);
    }
    for (int k = kTerminalShortMax; k >= 1; --k) {
        ids.cterm_out[k] = topo.add("CTermOut" + std::to_string(k), loop, StateFamily::CTermOut, k);
    }
    for (int k = 1; k <= kShortLoopMax; ++k) {
        ids.short_loop[k] = topo.add("ShortLoop" + std::to_string(k), loop, StateFamily::ShortLoop, k);
    }
    for (int k = 1; k <= kEndStates; ++k) {
        ids.helix_in[k] = topo.add("HelixIn" + std::to_string(k), helix, StateFamily::HelixIn, k);
    }
    ids.helix_core = topo.add("HelixCore", helix, StateFamily::HelixCore, 0);
    for (int k = kEndStates; k >= 1; --k) {
        ids.helix_out[k] = topo.add("HelixOut" + std::to_string(k), helix, StateFamily::HelixOut, k);
    }

    const auto n = topo.states_.size();
    topo.transitions_ = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
        static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), false);
    topo.start_.assign(n, false);
    topo.end_.assign(n, false);

    // Counting chain for one run type: entering states 1..cap, optional
    // interior (only reachable after all `cap` entering states), exiting
    // countdown. A run of length n uses ceil(n/2) entering and floor(n/2)
    // exiting states while both are below `cap`. `min_entering` forbids runs
    // that end before that many entering states were used.
    auto wire_run = [&topo](auto& in, std::optional<StateId> interior, auto& out, int cap, int min_entering,
                            std::vector<StateId>& exits) {
        for (int k = 1; k <= cap; ++k) {
            if (k < cap) {
                topo.allow(in[k], in[k + 1]);
            }
            if (k >= min_entering) {
                topo.allow(in[k], out[k]);      // even length 2k
                if (k >= 2) {
                    topo.allow(in[k], out[k - 1]); // odd length 2k-1
                }
            }
            if (k >= 2) {
                topo.allow(out[k], out[k - 1]);
            }
        }
        if (interior) {
            topo.allow(in[cap], *interior);
            topo.allow(*interior, *interior);
            topo.allow(*interior, out[cap]);
        }
        exits.push_back(out[1]);
        if (min_entering <= 1) {
            exits.push_back(in[1]); // length-1 run
        }
    };

    std::vector<StateId> helix_exits;
    wire_run(ids.helix_in, ids.helix_core, ids.helix_out, kEndStates, 1, helix_exits);
    std::vector<StateId> loop_exits;
    wire_run(ids.loop_in, ids.loop_interior, ids.loop_out, kEndStates, 4, loop_exits); // length >= 7
    std::vector<StateId> nterm_exits;
    wire_run(ids.nterm_in, std::nullopt, ids.nterm_out, kTerminalShortMax, 1, nterm_exits);
    std::vector<StateId> cterm_exits;
    wire_run(ids.cterm_in, std::nullopt, ids.cterm_out, kTerminalShortMax, 1, cterm_exits);

    for (int k = 1; k <= kShortLoopMax; ++k) {
        if (k < kShortLoopMax) {
            topo.allow(ids.short_loop[k], ids.short_loop[k + 1]);
        }
        topo.allow(ids.short_loop[k], ids.helix_in[1]);
    }

    // helix -> following loop
    for (auto h : helix_exits) {
        topo.allow(h, ids.loop_in[1]);
        topo.allow(h, ids.cterm_in[1]);
        topo.allow(h, ids.short_loop[1]);
        topo.end_[h] = true;
    }
    // loop -> following helix
    for (auto l : loop_exits) {
        topo.allow(l, ids.helix_in[1]);
        topo.end_[l] = true;
    }
    for (auto l : nterm_exits) {
        topo.allow(l, ids.helix_in[1]);
        topo.end_[l] = true;
    }
    for (auto l : cterm_exits) {
        topo.end_[l] = true;
    }

    topo.start_[ids.helix_in[1]] = true;
    topo.start_[ids.loop_in[1]] = true;
    topo.start_[ids.nterm_in[1]] = true;
    return topo;
}

StateTopology StateTopology::of_kind(TopologyKind kind)
{
    return kind == TopologyKind::Binary ? binary() : extended();
}

StatePath derive_states(std::span<const Label> gold, const StateTopology& topo)
{
    StatePath out;
    out.reserve(gold.size());
    if (topo.kind() == TopologyKind::Binary) {
        for (auto l : gold) {
            out.push_back(l == Label::Helix ? 1 : 0);
        }
        return out;
    }

    const auto ids = extended_ids(topo);
    const auto n = gold.size();
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && gold[j + 1] == gold[i]) {
            ++j;
        }
        const auto len = j - i + 1;
        if (gold[i] == Label::Helix) {
            emit_split(out, len, kEndStates, ids.helix_in, ids.helix_core, ids.helix_out);
        } else {
            const bool leading = i == 0;
            const bool trailing = j + 1 == n;
            if (!leading && !trailing && len <= static_cast<std::size_t>(kShortLoopMax)) {
                for (std::size_t k = 1; k <= len; ++k) {
                    out.push_back(ids.short_loop[k]);
                }
            } else if (len > static_cast<std::size_t>(kShortLoopMax)) {
                emit_split(out, len, kEndStates, ids.loop_in, ids.loop_interior, ids.loop_out);
            } else if (leading) {
                emit_split(out, len, kTerminalShortMax, ids.nterm_in, std::nullopt, ids.nterm_out);
            } else {
                emit_split(out, len, kTerminalShortMax, ids.cterm_in, std::nullopt, ids.cterm_out);
            }
        }
        i = j + 1;
    }
    return out;
}

Labels project(std::span<const StateId> path, const StateTopology& topo)
{
    Labels out;
    out.reserve(path.size());
    for (auto s : path) {
        out.push_back(topo.projection(s));
    }
    return out;
}

bool is_admissible(std::span<const StateId> path, const StateTopology& topo)
{
    if (path.empty()) {
        return false;
    }
    for (auto s : path) {
        if (s >= topo.size()) {
            return false;
        }
    }
    if (!topo.allowed_start(path.front()) || !topo.allowed_end(path.back())) {
        return false;
    }
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (!topo.allowed(path[i - 1], path[i])) {
            return false;
        }
    }
    return true;
}

} // namespace tmcrf
