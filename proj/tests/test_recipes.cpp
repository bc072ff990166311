#include "qnec/recipes.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>

using namespace qnec;
using nlohmann::json;

namespace {

Recipe constant_recipe(double value, const std::string& op, double expected, double tol) {
    return parse_recipe(json{{"name", "const"},
                             {"probe", "constant"},
                             {"params", {{"x", value}}},
                             {"assertions", json::array({{{"metric", "x"}, {"op", op}, {"expected", expected}, {"tolerance", tol}}})}});
}

}  // namespace

TEST(Recipes, Comparators) {
    Assertion a{"m", "le", 1.0, 0.1, ""};
    EXPECT_TRUE(check_assertion(a, 1.05));
    EXPECT_FALSE(check_assertion(a, 1.2));
    a.op = "rel";
    EXPECT_TRUE(check_assertion(a, 1.09));
    EXPECT_FALSE(check_assertion(a, 0.85));
    a.op = "gt";
    EXPECT_FALSE(check_assertion(a, 1.0));
    a.op = "eq";
    EXPECT_FALSE(check_assertion(a, std::nan("")));
    a.op = "approx";
    EXPECT_THROW(check_assertion(a, 1.0), std::invalid_argument);
}

TEST(Recipes, EmptySetPasses) {
    const auto reports = run_all({});
    EXPECT_TRUE(reports.empty());
    EXPECT_TRUE(report_json(reports).at("pass").get<bool>());
}

TEST(Recipes, ImpossibleToleranceFailsAndNamesAssertion) {
    const auto rep = run_recipe(constant_recipe(1.0, "eq", 2.0, 1e-12));
    EXPECT_FALSE(rep.pass);
    const auto j = report_json({rep});
    EXPECT_FALSE(j.at("pass").get<bool>());
    const auto& a = j.at("recipes")[0].at("assertions")[0];
    EXPECT_EQ(a.at("metric"), "x");
    EXPECT_FALSE(a.at("pass").get<bool>());
    EXPECT_DOUBLE_EQ(a.at("measured").get<double>(), 1.0);
}

TEST(Recipes, PassingRecipe) {
    const auto rep = run_recipe(constant_recipe(1.0, "rel", 1.05, 0.1));
    EXPECT_TRUE(rep.pass);
}

TEST(Recipes, MissingMetricAndProbeErrorsFail) {
    auto r = constant_recipe(1.0, "eq", 1.0, 0.0);
    r.assertions[0].metric = "absent";
    const auto rep = run_recipe(r);
    EXPECT_FALSE(rep.pass);
    EXPECT_FALSE(rep.results[0].measured);

    r.probe = "no_such_probe";
    const auto bad = run_recipe(r);
    EXPECT_FALSE(bad.pass);
    ASSERT_TRUE(bad.error);
}

TEST(Recipes, MalformedRecipesAreRejected) {
    EXPECT_THROW(parse_recipe(json{{"name", "x"}}), std::invalid_argument);
    EXPECT_THROW(parse_recipe(json{{"name", "x"},
                                   {"probe", "constant"},
                                   {"assertions", json::array({{{"metric", "x"}, {"op", "roughly"}, {"expected", 1}}})}}),
                 std::invalid_argument);
    EXPECT_THROW(load_recipe("recipes/missing.json"), std::runtime_error);
    EXPECT_THROW(recipe_files("no_such_dir"), std::runtime_error);
}

TEST(Recipes, BundledRecipesCoverEveryCriterionOnce) {
    std::set<int> criteria;
    for (const auto& f : recipe_files("recipes")) {
        const auto r = load_recipe(f);
        EXPECT_TRUE(criteria.insert(r.criterion).second) << f;
        EXPECT_FALSE(r.assertions.empty()) << f;
        const auto names = probe_names();
        EXPECT_NE(std::find(names.begin(), names.end(), r.probe), names.end()) << r.probe;
    }
    EXPECT_EQ(criteria.size(), 15u);
    EXPECT_EQ(*criteria.begin(), 1);
    EXPECT_EQ(*criteria.rbegin(), 15);
}

TEST(Recipes, ParallelRunKeepsOrder) {
    std::vector<Recipe> list;
    for (int i = 0; i < 6; ++i) {
        auto r = constant_recipe(i, "eq", i, 0.0);
        r.name = "r" + std::to_string(i);
        list.push_back(r);
    }
    const auto reps = run_all(list, 3);
    for (int i = 0; i < 6; ++i) {
        EXPECT_EQ(reps[static_cast<std::size_t>(i)].name, "r" + std::to_string(i));
        EXPECT_TRUE(reps[static_cast<std::size_t>(i)].pass);
    }
}
