#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qnec {

using Metrics = std::map<std::string, double>;

// Named computations behind the reproduction recipes. `params` may override defaults;
// `base_dir` resolves relative paths inside params.
Metrics run_probe(const std::string& probe, const nlohmann::json& params = nlohmann::json::object(),
                  const std::string& base_dir = ".");
std::vector<std::string> probe_names();

struct Assertion {
    std::string metric;
    std::string op;  // le, lt, ge, gt, eq (|m - e| <= tol), rel (|m - e| <= tol |e|)
    double expected = 0.0;
    double tolerance = 0.0;
    std::string basis;  // where the expected value comes from
};

struct Recipe {
    std::string name;
    int criterion = 0;
    std::string figure;
    std::string probe;
    nlohmann::json params = nlohmann::json::object();
    std::vector<Assertion> assertions;
    std::string base_dir = ".";
};

struct AssertionResult {
    Assertion assertion;
    std::optional<double> measured;
    bool pass = false;
};

struct RecipeReport {
    std::string name;
    int criterion = 0;
    bool pass = false;
    double seconds = 0.0;
    std::optional<std::string> error;
    std::vector<AssertionResult> results;
};

bool check_assertion(const Assertion& a, double measured);

Recipe parse_recipe(const nlohmann::json& j, const std::string& base_dir = ".");
Recipe load_recipe(const std::string& path);
// Every *.json file of a directory, sorted by name.
std::vector<std::string> recipe_files(const std::string& dir);

RecipeReport run_recipe(const Recipe& r);
// Runs recipes (in parallel when threads > 1) and returns reports in input order.
std::vector<RecipeReport> run_all(const std::vector<Recipe>& recipes, unsigned threads = 1);
nlohmann::json report_json(const std::vector<RecipeReport>& reports, bool include_timing = true);

}  // namespace qnec
