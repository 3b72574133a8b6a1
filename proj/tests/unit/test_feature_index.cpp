#include "tmcrf/errors.hpp"
#include "tmcrf/feature_index.hpp"

#include "support/synthetic.hpp"

#include <doctest.h>

#include <sstream>

using namespace tmcrf;
using G = FeatureGroup;

TEST_CASE("context spaces")
{
    CHECK(context_space(G::Edges, Arity::Unigram) == ContextSpace::State);
    CHECK(context_space(G::Edges, Arity::Bigram) == ContextSpace::StatePair);
    CHECK(context_space(G::Basic, Arity::Unigram) == ContextSpace::Binary);
    CHECK(context_space(G::Border, Arity::Bigram) == ContextSpace::BinaryChange);
    CHECK(context_space(G::ShortLoops, Arity::Unigram) == ContextSpace::ShortLoop);
    CHECK(context_space(G::States, Arity::Unigram) == ContextSpace::Family);
}

TEST_CASE("context map on the binary alphabet")
{
    const ContextMap m(StateTopology::binary());
    CHECK(m.count(ContextSpace::StatePair) == 4);
    CHECK(m.name(ContextSpace::StatePair, m.of_transition(ContextSpace::StatePair, 0, 1)) == "NH>H");
    CHECK(m.of_transition(ContextSpace::BinaryChange, 0, 0) == -1);
    CHECK(m.name(ContextSpace::BinaryChange, m.of_transition(ContextSpace::BinaryChange, 1, 0)) == "H>NH");
    CHECK(m.count(ContextSpace::ShortLoop) == 0);
    CHECK(m.count(ContextSpace::Family) == 0);
}

TEST_CASE("context map on the extended alphabet")
{
    const auto t = StateTopology::extended();
    const ContextMap m(t);
    const auto core = *t.find("HelixCore");
    const auto end = *t.find("HelixIn3");
    const auto loop_end = *t.find("LoopOut2");
    const auto interior = *t.find("LoopInterior");
    const auto sl = *t.find("ShortLoop4");
    CHECK(m.name(ContextSpace::Family, m.of_state(ContextSpace::Family, core)) == "HelixCore");
    CHECK(m.name(ContextSpace::Family, m.of_state(ContextSpace::Family, end)) == "HelixEnd");
    CHECK(m.name(ContextSpace::Family, m.of_state(ContextSpace::Family, loop_end)) == "LoopEnd");
    CHECK(m.of_state(ContextSpace::Family, interior) == -1);
    CHECK(m.of_state(ContextSpace::ShortLoop, sl) == 0);
    CHECK(m.of_state(ContextSpace::ShortLoop, interior) == -1);
    CHECK(m.of_state(ContextSpace::Binary, core) == 1);
    CHECK(m.count(ContextSpace::StatePair) == static_cast<std::size_t>(t.transitions().count()));
}

TEST_CASE("index is sorted, dense and round-trips")
{
    const auto data = synthetic::dataset(7, 6);
    for (int e : {1, 5, 8}) {
        const auto cfg = FeatureConfig::preset(e);
        const auto topo = StateTopology::of_kind(cfg.resolve_topology());
        const auto index = build_index(data, cfg, topo);
        REQUIRE(index.size() > 0);
        for (FeatureId f = 1; f < index.size(); ++f) {
            CHECK(feature_key_less(index.key(f - 1), index.key(f)));
        }
        for (FeatureId f = 0; f < index.size(); ++f) {
            CHECK(index.find(index.key(f)) == f);
        }
        std::stringstream s;
        index.write(s);
        CHECK(FeatureIndex::read(s, topo) == index);
        CHECK(build_index(data, cfg, topo) == index);
    }
}

TEST_CASE("every feature that fires under the gold labeling is indexed")
{
    const auto data = synthetic::dataset(8, 5);
    const auto cfg = FeatureConfig::preset(8);
    const auto topo = StateTopology::extended();
    const auto index = build_index(data, cfg, topo);
    const auto& ctx = index.contexts();
    std::size_t checked = 0;
    for (const auto& rec : data) {
        const auto path = derive_states(*rec.gold(), topo);
        const auto preds = enumerate_predicates(rec, cfg);
        for (std::size_t i = 0; i < preds.size(); ++i) {
            for (const auto& p : preds[i]) {
                const auto space = context_space(p.group, p.arity);
                const int c = p.arity == Arity::Unigram ? ctx.of_state(space, path[i])
                              : i > 0                   ? ctx.of_transition(space, path[i - 1], path[i])
                                                        : -1;
                if (c < 0) {
                    continue;
                }
                CHECK(index.find({p, ctx.name(space, c)}));
                ++checked;
            }
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("border features only pair with label changes")
{
    const auto data = synthetic::dataset(9, 4);
    FeatureConfig cfg;
    cfg.enable(G::Border);
    const auto index = build_index(data, cfg, StateTopology::binary());
    REQUIRE(index.size() > 0);
    for (FeatureId f = 0; f < index.size(); ++f) {
        const auto& c = index.key(f).context;
        CHECK((c == "NH>H" || c == "H>NH"));
    }
}

TEST_CASE("read rejects malformed rows")
{
    const auto topo = StateTopology::binary();
    auto read = [&](const std::string& text) {
        std::istringstream in(text);
        return FeatureIndex::read(in, topo);
    };
    CHECK_THROWS_AS(read("basic\tA\tH\n"), Error);
    CHECK_THROWS_AS(read("basic\tA\tH\t1\n"), Error);
    CHECK_THROWS_AS(read("nope\tA\tH\t0\n"), Error);
    CHECK_THROWS_AS(read("basic\tC\tH\t0\nbasic\tA\tH\t1\n"), Error);
    CHECK_THROWS_AS(read("basic\tA\tHelixCore\t0\n"), Error);
    CHECK(read("basic\tA\tH\t0\t1.5\n").size() == 1);
}

TEST_CASE("build_index errors")
{
    CHECK_THROWS_AS(build_index(Dataset{}, FeatureConfig::preset(1), StateTopology::binary()), Error);
    const auto unlabeled = parse_dataset(">a\nAC\n");
    try {
        (void)build_index(unlabeled, FeatureConfig::preset(1), StateTopology::binary());
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingGold);
    }
}

TEST_CASE("compile drops predicates unknown to the index")
{
    const auto train = parse_dataset(">a\nAC\n01\n");
    FeatureConfig cfg;
    cfg.enable(G::Basic);
    const auto index = build_index(train, cfg, StateTopology::binary());
    const ProteinRecord query("q", {Residue::A, Residue::D, Residue::C});
    const auto compiled = compile(enumerate_predicates(query, cfg), index);
    REQUIRE(compiled.length() == 3);
    CHECK(compiled.at(0).size() == 1);
    CHECK(compiled.at(1).empty());
    CHECK(compiled.at(2).size() == 1);
}
