#include "tmcrf/feature_index.hpp"

#include "tmcrf/errors.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace tmcrf {

namespace {

Arity predicate_arity(FeatureGroup group, std::string_view key)
{
    if (group == FeatureGroup::Border || (group == FeatureGroup::Edges && key == "transition")) {
        return Arity::Bigram;
    }
    return Arity::Unigram;
}

std::vector<std::string_view> split_tabs(std::string_view line)
{
    std::vector<std::string_view> cols;
    std::size_t pos = 0;
    while (true) {
        auto tab = line.find('\t', pos);
        cols.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
        if (tab == std::string_view::npos) {
            break;
        }
        pos = tab + 1;
    }
    return cols;
}

} // namespace

ContextSpace context_space(FeatureGroup group, Arity arity) noexcept
{
    switch (group) {
    case FeatureGroup::Edges: return arity == Arity::Bigram ? ContextSpace::StatePair : ContextSpace::State;
    case FeatureGroup::Border: return ContextSpace::BinaryChange;
    case FeatureGroup::ShortLoops: return ContextSpace::ShortLoop;
    case FeatureGroup::States: return ContextSpace::Family;
    default: return ContextSpace::Binary;
    }
}

ContextMap::ContextMap(const StateTopology& topo)
    : states_(topo.size())
{
    const auto n = topo.size();
    auto& state_names = names_[idx(ContextSpace::State)];
    auto& state_map = map_[idx(ContextSpace::State)];
    for (std::size_t s = 0; s < n; ++s) {
        state_names.push_back(topo.state(static_cast<StateId>(s)).name);
        state_map.push_back(static_cast<int>(s));
    }

    names_[idx(ContextSpace::Binary)] = {"NH", "H"};
    for (std::size_t s = 0; s < n; ++s) {
        map_[idx(ContextSpace::Binary)].push_back(static_cast<int>(topo.projection(static_cast<StateId>(s))));
    }

    auto& pair_map = map_[idx(ContextSpace::StatePair)];
    auto& change_map = map_[idx(ContextSpace::BinaryChange)];
    pair_map.assign(n * n, -1);
    change_map.assign(n * n, -1);
    names_[idx(ContextSpace::BinaryChange)] = {"NH>H", "H>NH"};
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t s = 0; s < n; ++s) {
            const auto sp = static_cast<StateId>(p);
            const auto ss = static_cast<StateId>(s);
            if (!topo.allowed(sp, ss)) {
                continue;
            }
            auto& pair_names = names_[idx(ContextSpace::StatePair)];
            pair_map[p * n + s] = static_cast<int>(pair_names.size());
            pair_names.push_back(topo.state(sp).name + ">" + topo.state(ss).name);
            if (topo.projection(sp) != topo.projection(ss)) {
                change_map[p * n + s] = topo.projection(sp) == Label::NonHelix ? 0 : 1;
            }
        }
    }

    auto& loop_map = map_[idx(ContextSpace::ShortLoop)];
    auto& family_map = map_[idx(ContextSpace::Family)];
    loop_map.assign(n, -1);
    family_map.assign(n, -1);
    if (topo.kind() == TopologyKind::Extended) {
        names_[idx(ContextSpace::ShortLoop)] = {"ShortLoop"};
        names_[idx(ContextSpace::Family)] = {"HelixCore", "HelixEnd", "LoopEnd"};
        for (std::size_t s = 0; s < n; ++s) {
            switch (topo.state(static_cast<StateId>(s)).family) {
            case StateFamily::ShortLoop: loop_map[s] = 0; break;
            case StateFamily::HelixCore: family_map[s] = 0; break;
            case StateFamily::HelixIn:
            case StateFamily::HelixOut: family_map[s] = 1; break;
            case StateFamily::LoopIn:
            case StateFamily::LoopOut:
            case StateFamily::NTermIn:
            case StateFamily::NTermOut:
            case StateFamily::CTermIn:
            case StateFamily::CTermOut: family_map[s] = 2; break;
            default: break;
            }
        }
    }
}

std::optional<int> ContextMap::find(ContextSpace space, std::string_view name) const
{
    const auto& names = names_[idx(space)];
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            return static_cast<int>(i);
        }
    }
    return std::nullopt;
}

bool feature_key_less(const FeatureKey& a, const FeatureKey& b)
{
    if (a.predicate.group != b.predicate.group) {
        return a.predicate.group < b.predicate.group;
    }
    if (a.predicate.key != b.predicate.key) {
        return a.predicate.key < b.predicate.key;
    }
    return a.context < b.context;
}

std::string FeatureIndex::predicate_lookup_key(const ObservationPredicate& p)
{
    std::string k(group_tag(p.group));
    k += '\t';
    k += p.key;
    return k;
}

FeatureIndex::FeatureIndex(std::vector<FeatureKey> keys, const StateTopology& topo)
    : contexts_(topo)
{
    std::sort(keys.begin(), keys.end(), feature_key_less);
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    keys_ = std::move(keys);

    pred_offsets_.push_back(0);
    for (std::size_t f = 0; f < keys_.size(); ++f) {
        const auto& k = keys_[f];
        const auto space = context_space(k.predicate.group, k.predicate.arity);
        const auto ctx = contexts_.find(space, k.context);
        if (!ctx) {
            throw Error(ErrorCode::InvalidConfig, "label context '" + k.context + "' does not exist in the "
                                                      + std::string(topology_name(topo.kind())) + " topology");
        }
        const bool new_predicate = f == 0 || keys_[f - 1].predicate != k.predicate;
        if (new_predicate) {
            if (f > 0) {
                pred_offsets_.push_back(pred_features_.size());
            }
            predicate_ids_.emplace(predicate_lookup_key(k.predicate), static_cast<PredicateId>(predicate_space_.size()));
            predicate_space_.push_back(space);
        }
        pred_features_.push_back({*ctx, static_cast<FeatureId>(f)});
    }
    if (!keys_.empty()) {
        pred_offsets_.push_back(pred_features_.size());
    }
}

std::optional<PredicateId> FeatureIndex::find_predicate(const ObservationPredicate& p) const
{
    auto it = predicate_ids_.find(predicate_lookup_key(p));
    if (it == predicate_ids_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<FeatureId> FeatureIndex::find(const FeatureKey& key) const
{
    auto pred = find_predicate(key.predicate);
    if (!pred) {
        return std::nullopt;
    }
    for (const auto& cf : features_of(*pred)) {
        if (keys_[cf.feature].context == key.context) {
            return cf.feature;
        }
    }
    return std::nullopt;
}

std::string FeatureIndex::row(FeatureId f) const
{
    const auto& k = keys_.at(f);
    std::string out(group_tag(k.predicate.group));
    out += '\t';
    out += k.predicate.key;
    out += '\t';
    out += k.context;
    out += '\t';
    out += std::to_string(f);
    return out;
}

void FeatureIndex::write(std::ostream& out) const
{
    for (std::size_t f = 0; f < keys_.size(); ++f) {
        out << row(static_cast<FeatureId>(f)) << '\n';
    }
}

FeatureIndex FeatureIndex::read(std::istream& in, const StateTopology& topo)
{
    std::vector<FeatureKey> keys;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto cols = split_tabs(line);
        if (cols.size() < 4) {
            throw Error(ErrorCode::IncompatibleModel, "feature row needs 4 columns: '" + line + "'");
        }
        const auto group = group_from_tag(cols[0]);
        std::size_t index = 0;
        auto [ptr, ec] = std::from_chars(cols[3].data(), cols[3].data() + cols[3].size(), index);
        if (!group || ec != std::errc{} || index != keys.size()) {
            throw Error(ErrorCode::IncompatibleModel, "bad feature row: '" + line + "'");
        }
        keys.push_back({{*group, std::string(cols[1]), predicate_arity(*group, cols[1])}, std::string(cols[2])});
    }
    auto original = keys;
    FeatureIndex index;
    try {
        index = FeatureIndex(std::move(keys), topo);
    } catch (const Error& e) {
        throw Error(ErrorCode::IncompatibleModel, e.detail());
    }
    if (index.keys_ != original) {
        throw Error(ErrorCode::IncompatibleModel, "feature rows are not in canonical order");
    }
    return index;
}

CompiledSequence compile(const std::vector<PositionPredicates>& predicates, const FeatureIndex& index)
{
    CompiledSequence out;
    out.offsets.reserve(predicates.size() + 1);
    out.offsets.push_back(0);
    for (const auto& position : predicates) {
        for (const auto& p : position) {
            if (auto id = index.find_predicate(p)) {
                out.predicates.push_back(*id);
            }
        }
        out.offsets.push_back(static_cast<std::uint32_t>(out.predicates.size()));
    }
    return out;
}

FeatureIndex build_index(const Dataset& train, const FeatureConfig& config, const StateTopology& topo)
{
    if (train.empty()) {
        throw Error(ErrorCode::EmptyTraining, "training set is empty");
    }
    const ContextMap contexts(topo);
    std::unordered_set<std::string> seen;
    std::vector<FeatureKey> keys;
    for (const auto& rec : train) {
        if (!rec.gold()) {
            throw Error(ErrorCode::MissingGold, "training record '" + rec.id() + "' has no labels");
        }
        const auto path = derive_states(*rec.gold(), topo);
        const auto predicates = enumerate_predicates(rec, config);
        for (std::size_t i = 0; i < predicates.size(); ++i) {
            for (const auto& p : predicates[i]) {
                const auto space = context_space(p.group, p.arity);
                int ctx = -1;
                if (p.arity == Arity::Unigram) {
                    ctx = contexts.of_state(space, path[i]);
                } else if (i > 0) {
                    ctx = contexts.of_transition(space, path[i - 1], path[i]);
                }
                if (ctx < 0) {
                    continue;
                }
                const auto& ctx_name = contexts.name(space, ctx);
                std::string dedup(group_tag(p.group));
                dedup += '\t';
                dedup += p.key;
                dedup += '\t';
                dedup += ctx_name;
                if (seen.insert(std::move(dedup)).second) {
                    keys.push_back({p, ctx_name});
                }
            }
        }
    }
    return FeatureIndex(std::move(keys), topo);
}

} // namespace tmcrf
