#include "tmcrf/features.hpp"

#include "tmcrf/errors.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace tmcrf {

namespace {

constexpr std::array<std::string_view, kFeatureGroupCount> kGroupTags = {
    "edges",
    "basic",
    "hydrophobic_window",
    "hydrophilic_window",
    "single",
    "single_shuffled",
    "single_hydrophobic",
    "single_hydrophilic",
    "double",
    "double_shuffled",
    "double_hydrophobic",
    "double_hydrophilic",
    "properties",
    "border",
    "short_loops",
    "electronic",
    "chemical_groups",
    "states",
};

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

bool parse_switch(std::string_view key, std::string_view value)
{
    if (value == "on") {
        return true;
    }
    if (value == "off") {
        return false;
    }
    throw Error(ErrorCode::InvalidConfig, "'" + std::string(key) + "' expects on|off, got '" + std::string(value) + "'");
}

std::string sorted_copy(std::string s)
{
    std::sort(s.begin(), s.end());
    return s;
}

} // namespace

std::string_view group_tag(FeatureGroup g) noexcept { return kGroupTags[group_index(g)]; }

std::optional<FeatureGroup> group_from_tag(std::string_view tag) noexcept
{
    for (std::size_t i = 0; i < kGroupTags.size(); ++i) {
        if (kGroupTags[i] == tag) {
            return static_cast<FeatureGroup>(i);
        }
    }
    return std::nullopt;
}

bool has_order_bound(FeatureGroup g) noexcept
{
    return g >= FeatureGroup::Single && g <= FeatureGroup::DoubleHydrophilic;
}

int FeatureConfig::default_order(FeatureGroup g) noexcept
{
    switch (g) {
    case FeatureGroup::Single: return 5;
    case FeatureGroup::Double: return 3;
    case FeatureGroup::SingleShuffled: return 6;
    case FeatureGroup::DoubleShuffled: return 3;
    case FeatureGroup::SingleHydrophobic:
    case FeatureGroup::SingleHydrophilic: return 6;
    case FeatureGroup::DoubleHydrophobic:
    case FeatureGroup::DoubleHydrophilic: return 3;
    default: return 0;
    }
}

void FeatureConfig::enable(FeatureGroup g, int order)
{
    enabled[group_index(g)] = true;
    if (has_order_bound(g)) {
        auto& current = max_order[group_index(g)];
        if (order > 0) {
            current = order;
        } else if (current <= 0) {
            current = default_order(g);
        }
    }
}

void FeatureConfig::disable(FeatureGroup g)
{
    enabled[group_index(g)] = false;
    max_order[group_index(g)] = 0;
}

bool FeatureConfig::needs_extended() const noexcept
{
    return is_enabled(FeatureGroup::ShortLoops) || is_enabled(FeatureGroup::States);
}

TopologyKind FeatureConfig::resolve_topology() const
{
    switch (topology) {
    case TopologyChoice::Binary:
        if (needs_extended()) {
            throw Error(ErrorCode::ConfigConflict, "short_loops/states require the extended topology");
        }
        return TopologyKind::Binary;
    case TopologyChoice::Extended: return TopologyKind::Extended;
    case TopologyChoice::Auto: break;
    }
    return needs_extended() ? TopologyKind::Extended : TopologyKind::Binary;
}

FeatureConfig FeatureConfig::preset(int experiment)
{
    using G = FeatureGroup;
    if (experiment < 1 || experiment > 8) {
        throw Error(ErrorCode::InvalidConfig, "unknown preset exp" + std::to_string(experiment));
    }
    FeatureConfig c;
    c.enable(G::Edges);
    // Rows of the experiment table; column index is experiment - 1.
    struct Row {
        G group;
        std::array<int, 8> value; // 0 = off, 1 = on for unbounded groups, k = neighbor bound
    };
    const std::array<Row, 17> rows = {{
        {G::Basic, {1, 0, 1, 1, 1, 1, 1, 1}},
        {G::Properties, {1, 0, 1, 1, 1, 1, 1, 1}},
        {G::HydrophobicWindow, {0, 0, 1, 1, 1, 1, 1, 1}},
        {G::HydrophilicWindow, {0, 0, 1, 1, 1, 1, 1, 1}},
        {G::Single, {0, 2, 5, 3, 5, 5, 5, 5}},
        {G::Double, {0, 1, 1, 1, 3, 3, 3, 3}},
        {G::SingleShuffled, {0, 0, 0, 3, 6, 6, 6, 6}},
        {G::DoubleShuffled, {0, 0, 0, 1, 3, 3, 3, 3}},
        {G::SingleHydrophobic, {0, 0, 0, 0, 0, 3, 6, 6}},
        {G::DoubleHydrophobic, {0, 0, 0, 0, 0, 1, 3, 3}},
        {G::SingleHydrophilic, {0, 0, 0, 0, 0, 3, 6, 6}},
        {G::DoubleHydrophilic, {0, 0, 0, 0, 0, 1, 3, 3}},
        {G::Border, {0, 0, 0, 0, 0, 0, 1, 1}},
        {G::ShortLoops, {0, 0, 0, 0, 0, 0, 1, 1}},
        {G::Electronic, {0, 0, 0, 0, 0, 0, 1, 1}},
        {G::ChemicalGroups, {0, 0, 0, 0, 0, 0, 0, 1}},
        {G::States, {0, 0, 0, 0, 0, 0, 0, 1}},
    }};
    for (const auto& row : rows) {
        const int v = row.value[static_cast<std::size_t>(experiment - 1)];
        if (v > 0) {
            c.enable(row.group, has_order_bound(row.group) ? v : 0);
        }
    }
    return c;
}

std::string dump_feature_config(const FeatureConfig& config)
{
    std::ostringstream out;
    const std::string_view topo = config.topology == TopologyChoice::Auto     ? "auto"
                                  : config.topology == TopologyChoice::Binary ? "binary"
                                                                              : "extended";
    out << "topology = " << topo << '\n';
    for (std::size_t i = 0; i < kFeatureGroupCount; ++i) {
        const auto g = static_cast<FeatureGroup>(i);
        out << "group." << group_tag(g) << " = " << (config.is_enabled(g) ? "on" : "off") << '\n';
        if (config.is_enabled(g) && has_order_bound(g)) {
            out << "group." << group_tag(g) << ".max = " << config.order(g) << '\n';
        }
    }
    if (config.property_groups != standard_property_groups()) {
        for (const auto& p : config.property_groups) {
            out << "property." << p.name << " = " << residue_set_letters(p.members) << '\n';
        }
    }
    return out.str();
}

bool set_feature_option(FeatureConfig& config, std::string_view key, std::string_view value)
{
    key = trim(key);
    value = trim(value);
    if (key == "topology") {
        if (value == "auto") {
            config.topology = TopologyChoice::Auto;
        } else if (value == "binary") {
            config.topology = TopologyChoice::Binary;
        } else if (value == "extended") {
            config.topology = TopologyChoice::Extended;
        } else {
            throw Error(ErrorCode::InvalidConfig, "topology must be auto|binary|extended");
        }
        return true;
    }
    if (key.starts_with("property.")) {
        const auto name = key.substr(9);
        if (name.empty() || value.empty() || value.find_first_not_of(kStandardLetters) != std::string_view::npos) {
            throw Error(ErrorCode::InvalidConfig, "bad property group '" + std::string(key) + "'");
        }
        if (config.property_groups == standard_property_groups()) {
            config.property_groups.clear();
        }
        auto it = std::find_if(config.property_groups.begin(), config.property_groups.end(),
                               [&](const NamedResidueSet& p) { return p.name == name; });
        if (it != config.property_groups.end()) {
            it->members = residue_set(value);
        } else {
            config.property_groups.push_back({std::string(name), residue_set(value)});
        }
        return true;
    }
    if (!key.starts_with("group.")) {
        return false;
    }
    auto rest = key.substr(6);
    bool is_max = false;
    if (rest.ends_with(".max")) {
        rest.remove_suffix(4);
        is_max = true;
    }
    const auto group = group_from_tag(rest);
    if (!group) {
        throw Error(ErrorCode::InvalidConfig, "unknown feature group '" + std::string(rest) + "'");
    }
    if (is_max) {
        int k = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), k);
        if (!has_order_bound(*group) || ec != std::errc{} || ptr != value.data() + value.size() || k < 1) {
            throw Error(ErrorCode::InvalidConfig, "bad neighbor bound for '" + std::string(key) + "'");
        }
        config.max_order[group_index(*group)] = k;
        return true;
    }
    if (parse_switch(key, value)) {
        config.enable(*group);
    } else {
        config.disable(*group);
    }
    return true;
}

std::uint64_t config_hash(const FeatureConfig& config)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dump_feature_config(config)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<PositionPredicates> enumerate_predicates(const ProteinRecord& record, const FeatureConfig& config)
{
    using G = FeatureGroup;
    (void)config.resolve_topology();

    const auto& seq = record.sequence();
    const auto n = seq.size();
    std::vector<PositionPredicates> out(n);

    // prefix sums of hydropathy and of sentinel residues
    std::vector<int> kd(n + 1, 0);
    std::vector<int> unk(n + 1, 0);
    for (std::size_t k = 0; k < n; ++k) {
        kd[k + 1] = kd[k] + kd_tenths(seq[k]);
        unk[k + 1] = unk[k] + (is_standard(seq[k]) ? 0 : 1);
    }
    auto kd_sum = [&](std::size_t first, std::size_t last) { return kd[last + 1] - kd[first]; };
    auto clean = [&](std::size_t first, std::size_t last) { return unk[last + 1] == unk[first]; };
    auto gram = [&](std::size_t first, std::size_t last) {
        return sequence_string(std::span(seq).subspan(first, last - first + 1));
    };
    auto on = [&](G g) { return config.is_enabled(g); };
    auto bound = [&](G g) { return static_cast<std::size_t>(config.order(g)); };
    const auto& tables = ResidueClassTables::standard();

    for (std::size_t i = 0; i < n; ++i) {
        auto& p = out[i];
        auto emit = [&p](G g, std::string key, Arity arity = Arity::Unigram) {
            p.push_back({g, std::move(key), arity});
        };
        const Residue r = seq[i];
        const bool standard = is_standard(r);
        const std::string letter(1, residue_letter(r));

        if (on(G::Edges)) {
            if (i == 0) {
                emit(G::Edges, "start");
            }
            if (i + 1 == n) {
                emit(G::Edges, "end");
            }
            if (i > 0) {
                emit(G::Edges, "transition", Arity::Bigram);
            }
        }
        if (on(G::Basic) && standard) {
            emit(G::Basic, letter);
        }
        if (on(G::HydrophobicWindow) || on(G::HydrophilicWindow)) {
            const auto half = kHydropathyWindow / 2;
            const auto first = i >= half ? i - half : 0;
            const auto last = std::min(n - 1, i + half);
            const int sum = kd_sum(first, last);
            const int scaled = kHydropathyThresholdTenths * static_cast<int>(last - first + 1);
            if (on(G::HydrophobicWindow) && sum > scaled) {
                emit(G::HydrophobicWindow, std::to_string(kHydropathyWindow));
            }
            if (on(G::HydrophilicWindow) && sum < scaled) {
                emit(G::HydrophilicWindow, std::to_string(kHydropathyWindow));
            }
        }

        // one-sided neighbor windows [i-k, i-1] and [i+1, i+k]
        const auto single_max = std::max({bound(G::Single), bound(G::SingleShuffled), bound(G::SingleHydrophobic),
                                          bound(G::SingleHydrophilic)});
        for (std::size_t k = 1; k <= single_max; ++k) {
            for (int side = 0; side < 2; ++side) {
                const bool left = side == 0;
                if (left ? i < k : i + k >= n) {
                    continue;
                }
                const auto first = left ? i - k : i + 1;
                const auto last = left ? i - 1 : i + k;
                const std::string tag = (left ? "L" : "R") + std::to_string(k);
                const bool no_unk = clean(first, last);
                if (on(G::Single) && k <= bound(G::Single) && no_unk) {
                    emit(G::Single, tag + ":" + gram(first, last));
                }
                if (on(G::SingleShuffled) && k <= bound(G::SingleShuffled) && no_unk) {
                    emit(G::SingleShuffled, tag + ":" + sorted_copy(gram(first, last)));
                }
                const int sum = kd_sum(first, last);
                const int scaled = kHydropathyThresholdTenths * static_cast<int>(k);
                if (on(G::SingleHydrophobic) && k <= bound(G::SingleHydrophobic) && sum > scaled) {
                    emit(G::SingleHydrophobic, tag);
                }
                if (on(G::SingleHydrophilic) && k <= bound(G::SingleHydrophilic) && sum < scaled) {
                    emit(G::SingleHydrophilic, tag);
                }
            }
        }

        // symmetric windows [i-k, i-1] + [i+1, i+k]
        const auto double_max = std::max({bound(G::Double), bound(G::DoubleShuffled), bound(G::DoubleHydrophobic),
                                          bound(G::DoubleHydrophilic)});
        for (std::size_t k = 1; k <= double_max && i >= k && i + k < n; ++k) {
            const std::string tag = std::to_string(k);
            const bool no_unk = clean(i - k, i - 1) && clean(i + 1, i + k);
            if (no_unk && (on(G::Double) || on(G::DoubleShuffled))) {
                const auto left = gram(i - k, i - 1);
                const auto right = gram(i + 1, i + k);
                if (on(G::Double) && k <= bound(G::Double)) {
                    emit(G::Double, tag + ":" + left + "|" + right);
                }
                if (on(G::DoubleShuffled) && k <= bound(G::DoubleShuffled)) {
                    emit(G::DoubleShuffled, tag + ":" + sorted_copy(left + right));
                }
            }
            const int sum = kd_sum(i - k, i - 1) + kd_sum(i + 1, i + k);
            const int scaled = kHydropathyThresholdTenths * static_cast<int>(2 * k);
            if (on(G::DoubleHydrophobic) && k <= bound(G::DoubleHydrophobic) && sum > scaled) {
                emit(G::DoubleHydrophobic, tag);
            }
            if (on(G::DoubleHydrophilic) && k <= bound(G::DoubleHydrophilic) && sum < scaled) {
                emit(G::DoubleHydrophilic, tag);
            }
        }

        if (!standard) {
            continue;
        }
        if (on(G::Properties)) {
            for (const auto& group : config.property_groups) {
                if (group.members.test(index_of(r))) {
                    emit(G::Properties, group.name);
                }
            }
        }
        if (on(G::Border) && i > 0 && is_standard(seq[i - 1])) {
            emit(G::Border, gram(i - 1, i), Arity::Bigram);
        }
        if (on(G::ShortLoops)) {
            emit(G::ShortLoops, letter);
        }
        if (on(G::Electronic)) {
            if (auto cls = tables.electronic[index_of(r)]) {
                emit(G::Electronic, std::string(electronic_name(*cls)));
            }
        }
        if (on(G::ChemicalGroups)) {
            for (std::size_t g = 0; g < tables.chemical_groups.size(); ++g) {
                if (tables.chemical_groups[g].members.test(index_of(r))) {
                    emit(G::ChemicalGroups, tables.chemical_groups[g].name);
                }
            }
        }
        if (on(G::States)) {
            emit(G::States, letter);
        }
    }
    return out;
}

} // namespace tmcrf
