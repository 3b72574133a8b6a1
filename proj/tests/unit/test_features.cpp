#include "tmcrf/errors.hpp"
#include "tmcrf/feature_index.hpp"
#include "tmcrf/features.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

using namespace tmcrf;
using G = FeatureGroup;

namespace {

Sequence seq(std::string_view s)
{
    Sequence out;
    for (char c : s) {
        out.push_back(c == 'X' ? Residue::Unk : *residue_from_letter(c));
    }
    return out;
}

ProteinRecord record(std::string_view s) { return {"r", seq(s)}; }

FeatureConfig only(std::initializer_list<std::pair<G, int>> groups)
{
    FeatureConfig c;
    for (auto [g, k] : groups) {
        c.enable(g, k);
    }
    return c;
}

std::vector<std::string> keys_at(const std::vector<PositionPredicates>& p, std::size_t i, G group)
{
    std::vector<std::string> out;
    for (const auto& pred : p[i]) {
        if (pred.group == group) {
            out.push_back(pred.key);
        }
    }
    return out;
}

bool has(const std::vector<std::string>& v, std::string_view k) { return std::find(v.begin(), v.end(), k) != v.end(); }

FeatureConfig toy_config()
{
    FeatureConfig c = only({{G::Basic, 0}, {G::Properties, 0}});
    c.topology = TopologyChoice::Binary;
    (void)set_feature_option(c, "property.Hydrophobic", "ACF");
    (void)set_feature_option(c, "property.Polar", "CDE");
    return c;
}

Dataset toy_data()
{
    return parse_dataset(">t1\nCAAF\n0111\n>t2\nCDED\n1000\n>t3\nDFAE\n0110\n");
}

} // namespace

TEST_CASE("basic predicate is the residue identity")
{
    const auto p = enumerate_predicates(record("CAAF"), only({{G::Basic, 0}}));
    CHECK(keys_at(p, 0, G::Basic) == std::vector<std::string>{"C"});
    CHECK(keys_at(p, 3, G::Basic) == std::vector<std::string>{"F"});
}

TEST_CASE("toy property predicates")
{
    const auto p = enumerate_predicates(record("CAAF"), toy_config());
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(has(keys_at(p, i, G::Properties), "Hydrophobic"));
    }
    CHECK(has(keys_at(p, 0, G::Properties), "Polar"));
    CHECK_FALSE(has(keys_at(p, 1, G::Properties), "Polar"));
}

TEST_CASE("edge predicates")
{
    const auto p = enumerate_predicates(record("ACD"), only({{G::Edges, 0}}));
    CHECK(keys_at(p, 0, G::Edges) == std::vector<std::string>{"start"});
    CHECK(keys_at(p, 1, G::Edges) == std::vector<std::string>{"transition"});
    CHECK(keys_at(p, 2, G::Edges) == std::vector<std::string>{"end", "transition"});
    CHECK(p[1][0].arity == Arity::Bigram);
    const auto single = enumerate_predicates(record("A"), only({{G::Edges, 0}}));
    CHECK(keys_at(single, 0, G::Edges) == std::vector<std::string>{"start", "end"});
}

TEST_CASE("single side neighbor grams exclude the center and stop at the boundary")
{
    const auto p = enumerate_predicates(record("CAAFD"), only({{G::Single, 3}}));
    const auto k0 = keys_at(p, 0, G::Single);
    CHECK(std::none_of(k0.begin(), k0.end(), [](const std::string& k) { return k.starts_with("L"); }));
    CHECK(has(k0, "R3:AAF"));
    const auto k3 = keys_at(p, 3, G::Single);
    CHECK(has(k3, "L1:A"));
    CHECK(has(k3, "L3:CAA"));
    CHECK(has(k3, "R1:D"));
    CHECK_FALSE(has(k3, "R2:D"));
    const auto k2 = keys_at(p, 2, G::Single);
    CHECK(k2.size() == 4); // L1, L2, R1, R2
}

TEST_CASE("shuffled keys are permutation invariant")
{
    const auto cfg = only({{G::SingleShuffled, 3}, {G::DoubleShuffled, 2}, {G::Single, 3}});
    // Same letters inside [i-3, i-1], [i-2, i-1] and [i+1, i+2]; different order.
    const auto a = enumerate_predicates(record("CAFIDE"), cfg);
    const auto b = enumerate_predicates(record("CFAIED"), cfg);
    auto with = [](std::vector<std::string> keys, std::string_view prefix) {
        std::erase_if(keys, [&](const std::string& k) { return !k.starts_with(prefix); });
        return keys;
    };
    const auto sa = keys_at(a, 3, G::SingleShuffled);
    const auto sb = keys_at(b, 3, G::SingleShuffled);
    CHECK(with(sa, "L3:") == std::vector<std::string>{"L3:ACF"});
    CHECK(with(sa, "L3:") == with(sb, "L3:"));
    CHECK(with(sa, "L2:") == with(sb, "L2:"));
    CHECK(with(sa, "R2:") == with(sb, "R2:"));
    CHECK(with(sa, "L1:") != with(sb, "L1:"));
    const auto da = keys_at(a, 3, G::DoubleShuffled);
    CHECK(with(da, "2:") == std::vector<std::string>{"2:ADEF"});
    CHECK(with(da, "2:") == with(keys_at(b, 3, G::DoubleShuffled), "2:"));
    CHECK(with(keys_at(a, 3, G::Single), "L2:") != with(keys_at(b, 3, G::Single), "L2:"));
}

TEST_CASE("double side grams")
{
    const auto p = enumerate_predicates(record("CAFIDE"), only({{G::Double, 3}, {G::DoubleShuffled, 3}}));
    CHECK(keys_at(p, 2, G::Double) == std::vector<std::string>{"1:A|I", "2:CA|ID"});
    CHECK(keys_at(p, 2, G::DoubleShuffled) == std::vector<std::string>{"1:AI", "2:ACDI"});
    CHECK(keys_at(p, 0, G::Double).empty());
}

TEST_CASE("hydropathy neighbor windows")
{
    const auto cfg = only({{G::SingleHydrophobic, 2}, {G::SingleHydrophilic, 2}, {G::DoubleHydrophobic, 1},
                           {G::DoubleHydrophilic, 1}});
    const auto p = enumerate_predicates(record("IIKK"), cfg);
    // position 1: left I (4.5), right K (-3.9), right two K K
    CHECK(keys_at(p, 1, G::SingleHydrophobic) == std::vector<std::string>{"L1"});
    CHECK(keys_at(p, 1, G::SingleHydrophilic) == std::vector<std::string>{"R1", "R2"});
    // double k=1 at position 1: I and K, mean 0.3 < 1
    CHECK(keys_at(p, 1, G::DoubleHydrophilic) == std::vector<std::string>{"1"});
    CHECK(keys_at(p, 1, G::DoubleHydrophobic).empty());
}

TEST_CASE("window predicates are exclusive and silent at exactly the threshold")
{
    const auto cfg = only({{G::HydrophobicWindow, 0}, {G::HydrophilicWindow, 0}});
    // F (2.8) and S (-0.8) average to exactly 1.0
    const auto p = enumerate_predicates(record("FS"), cfg);
    CHECK(p[0].empty());
    CHECK(p[1].empty());

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::string s;
        const auto n = std::uniform_int_distribution<int>(1, 50)(rng);
        for (int i = 0; i < n; ++i) {
            s.push_back(kStandardLetters[std::uniform_int_distribution<std::size_t>(0, 19)(rng)]);
        }
        const auto r = enumerate_predicates(record(s), cfg);
        for (std::size_t i = 0; i < r.size(); ++i) {
            const auto up = keys_at(r, i, G::HydrophobicWindow).size();
            const auto down = keys_at(r, i, G::HydrophilicWindow).size();
            CHECK(up + down <= 1);
            const double mean = window_mean_kd(seq(s), i, 19);
            CHECK(up == (mean > 1.0 + 1e-12 ? 1U : 0U));
            CHECK(down == (mean < 1.0 - 1e-12 ? 1U : 0U));
        }
    }
}

TEST_CASE("border, identity-family and class groups")
{
    FeatureConfig cfg = only({{G::Border, 0}, {G::ShortLoops, 0}, {G::States, 0}, {G::Electronic, 0},
                              {G::ChemicalGroups, 0}});
    const auto p = enumerate_predicates(record("FP"), cfg);
    CHECK(keys_at(p, 0, G::Border).empty());
    CHECK(keys_at(p, 1, G::Border) == std::vector<std::string>{"FP"});
    CHECK(keys_at(p, 1, G::ShortLoops) == std::vector<std::string>{"P"});
    CHECK(keys_at(p, 1, G::States) == std::vector<std::string>{"P"});
    CHECK(keys_at(p, 0, G::Electronic) == std::vector<std::string>{"WeakAcceptor"});
    CHECK(keys_at(p, 1, G::ChemicalGroups) == std::vector<std::string>{"5", "8", "18"});
}

TEST_CASE("electronic predicate fires exactly once per standard residue")
{
    const auto p = enumerate_predicates(record(kStandardLetters), only({{G::Electronic, 0}}));
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(keys_at(p, i, G::Electronic).size() == 1);
    }
}

TEST_CASE("the sentinel residue activates no identity predicates")
{
    FeatureConfig cfg = FeatureConfig::preset(8);
    const ProteinRecord r("x", seq("AXA"));
    const auto p = enumerate_predicates(r, cfg);
    for (const auto& pred : p[1]) {
        CHECK(pred.group != G::Basic);
        CHECK(pred.group != G::Properties);
        CHECK(pred.group != G::Electronic);
        CHECK(pred.key.find('X') == std::string::npos);
    }
    for (const auto& pos : p) {
        for (const auto& pred : pos) {
            CHECK(pred.key.find('X') == std::string::npos);
        }
    }
}

TEST_CASE("predicates do not depend on labels and are repeatable")
{
    const auto cfg = FeatureConfig::preset(8);
    const ProteinRecord a("a", seq("MKLVIAFGRDESTWY"));
    const ProteinRecord b("a", seq("MKLVIAFGRDESTWY"), *parse_labels("000111111110000"));
    CHECK(enumerate_predicates(a, cfg) == enumerate_predicates(b, cfg));
    CHECK(enumerate_predicates(a, cfg) == enumerate_predicates(a, cfg));
}

TEST_CASE("topology resolution")
{
    FeatureConfig cfg = only({{G::Basic, 0}});
    CHECK(cfg.resolve_topology() == TopologyKind::Binary);
    cfg.enable(G::ShortLoops);
    CHECK(cfg.resolve_topology() == TopologyKind::Extended);
    cfg.topology = TopologyChoice::Binary;
    CHECK_THROWS_AS((void)cfg.resolve_topology(), Error);
    try {
        (void)enumerate_predicates(record("AC"), cfg);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigConflict);
    }
    CHECK(FeatureConfig::preset(8).resolve_topology() == TopologyKind::Extended);
    CHECK(FeatureConfig::preset(6).resolve_topology() == TopologyKind::Binary);
}

TEST_CASE("worked example instantiates the ten features")
{
    const auto topo = StateTopology::binary();
    const auto index = build_index(toy_data(), toy_config(), topo);
    REQUIRE(index.size() == 10);
    std::vector<std::string> rows;
    for (FeatureId f = 0; f < index.size(); ++f) {
        const auto& k = index.key(f);
        rows.push_back(std::string(group_tag(k.predicate.group)) + " " + k.predicate.key + " " + k.context);
    }
    std::sort(rows.begin(), rows.end());
    CHECK(rows == std::vector<std::string>{"basic A H", "basic C H", "basic C NH", "basic D NH", "basic E NH",
                                           "basic F H", "properties Hydrophobic H", "properties Hydrophobic NH",
                                           "properties Polar H", "properties Polar NH"});
}

TEST_CASE("single record, basic group only")
{
    const auto d = parse_dataset(">a\nA\n1\n");
    const auto index = build_index(d, only({{G::Basic, 0}}), StateTopology::binary());
    REQUIRE(index.size() == 1);
    CHECK(index.key(0).predicate.key == "A");
    CHECK(index.key(0).context == "H");
}

TEST_CASE("presets follow the experiment table")
{
    const auto e1 = FeatureConfig::preset(1);
    for (std::size_t g = 0; g < kFeatureGroupCount; ++g) {
        const auto group = static_cast<G>(g);
        const bool expected = group == G::Basic || group == G::Properties || group == G::Edges;
        CHECK(e1.is_enabled(group) == expected);
    }
    const auto e8 = FeatureConfig::preset(8);
    for (std::size_t g = 0; g < kFeatureGroupCount; ++g) {
        CHECK(e8.is_enabled(static_cast<G>(g)));
    }
    CHECK(e8.order(G::Single) == 5);
    CHECK(e8.order(G::Double) == 3);
    CHECK(e8.order(G::SingleShuffled) == 6);
    CHECK(e8.order(G::DoubleShuffled) == 3);
    CHECK(e8.order(G::SingleHydrophobic) == 6);
    CHECK(e8.order(G::DoubleHydrophobic) == 3);
    CHECK(e8.order(G::SingleHydrophilic) == 6);
    CHECK(e8.order(G::DoubleHydrophilic) == 3);
    const auto e2 = FeatureConfig::preset(2);
    CHECK_FALSE(e2.is_enabled(G::Basic));
    CHECK(e2.order(G::Single) == 2);
    CHECK(e2.order(G::Double) == 1);
    CHECK_THROWS_AS((void)FeatureConfig::preset(9), Error);
}

TEST_CASE("feature config text round trip")
{
    for (int e = 1; e <= 8; ++e) {
        auto cfg = FeatureConfig::preset(e);
        FeatureConfig parsed;
        const auto text = dump_feature_config(cfg);
        std::size_t pos = 0;
        while (pos < text.size()) {
            const auto nl = text.find('\n', pos);
            const auto line = std::string_view(text).substr(pos, nl - pos);
            const auto eq = line.find('=');
            CHECK(set_feature_option(parsed, line.substr(0, eq), line.substr(eq + 1)));
            pos = nl + 1;
        }
        CHECK(parsed == cfg);
        CHECK(config_hash(parsed) == config_hash(cfg));
    }
    CHECK(config_hash(FeatureConfig::preset(1)) != config_hash(FeatureConfig::preset(2)));
    FeatureConfig c;
    CHECK_FALSE(set_feature_option(c, "train.sigma2", "1"));
    CHECK_THROWS_AS(set_feature_option(c, "group.nope", "on"), Error);
    CHECK_THROWS_AS(set_feature_option(c, "group.basic", "maybe"), Error);
    CHECK_THROWS_AS(set_feature_option(c, "group.basic.max", "3"), Error);
    CHECK_THROWS_AS(set_feature_option(c, "group.single.max", "0"), Error);
}
