#include "tmcrf/errors.hpp"
#include "tmcrf/dataset.hpp"
#include "tmcrf/experiment.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace tmcrf;

TEST_CASE("presets dump exactly as the checked-in goldens")
{
    for (int e = 1; e <= 8; ++e) {
        ExperimentConfig c;
        set_experiment_option(c, "preset", "exp" + std::to_string(e));
        const auto golden = read_text_file(std::string(TMCRF_GOLDEN_DIR) + "/exp" + std::to_string(e) + ".conf");
        CHECK_MESSAGE(dump_experiment_config(c) == golden, "exp" << e);
        CHECK(parse_experiment_config(golden) == c);
    }
}

TEST_CASE("later lines override earlier ones")
{
    const auto c = parse_experiment_config("# comment\n"
                                           "preset = exp8\n"
                                           "group.states = off\n"
                                           "group.single.max = 2\n"
                                           "train.sigma2 = inf\n"
                                           "train.max_iters = 50\n"
                                           "data.train = a.txt\n"
                                           "data.exclude_prefix = cox\n");
    CHECK_FALSE(c.features.is_enabled(FeatureGroup::States));
    CHECK(c.features.order(FeatureGroup::Single) == 2);
    CHECK(std::isinf(c.train.sigma2));
    CHECK(c.train.max_iters == 50);
    CHECK(c.train_path == "a.txt");
    CHECK(c.exclude_prefix == "cox");
    CHECK(parse_experiment_config(dump_experiment_config(c)) == c);
}

TEST_CASE("the worked-example configuration")
{
    const auto c = parse_experiment_config(read_text_file(std::string(TMCRF_TEST_DATA) + "/toy.conf"));
    CHECK(c.features.resolve_topology() == TopologyKind::Binary);
    CHECK_FALSE(c.features.is_enabled(FeatureGroup::Edges));
    REQUIRE(c.features.property_groups.size() == 2);
    CHECK(c.features.property_groups[0].name == "Hydrophobic");
    CHECK(residue_set_letters(c.features.property_groups[1].members) == "CDE");
}

TEST_CASE("configuration errors")
{
    auto code = [](std::string_view text) {
        try {
            (void)parse_experiment_config(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    CHECK(code("nonsense = 1\n") == ErrorCode::InvalidConfig);
    CHECK(code("preset = exp9\n") == ErrorCode::InvalidConfig);
    CHECK(code("train.sigma2 = -1\n") == ErrorCode::InvalidConfig);
    CHECK(code("train.max_iters = many\n") == ErrorCode::InvalidConfig);
    CHECK(code("just a line\n") == ErrorCode::InvalidConfig);
    CHECK(code("topology = ternary\n") == ErrorCode::InvalidConfig);
    try {
        (void)parse_experiment_config("\n\ngroup.basic = perhaps\n");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK(parse_preset_name("exp4") == 4);
}
