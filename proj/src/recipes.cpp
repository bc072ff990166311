#include "qnec/recipes.hpp"

#include "qnec/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace qnec {

using nlohmann::json;

bool check_assertion(const Assertion& a, double m) {
    if (std::isnan(m)) return false;
    if (a.op == "le") return m <= a.expected + a.tolerance;
    if (a.op == "lt") return m < a.expected;
    if (a.op == "ge") return m >= a.expected - a.tolerance;
    if (a.op == "gt") return m > a.expected;
    if (a.op == "eq") return std::abs(m - a.expected) <= a.tolerance;
    if (a.op == "rel") return std::abs(m - a.expected) <= a.tolerance * std::abs(a.expected);
    throw std::invalid_argument("unknown comparator '" + a.op + "'");
}

Recipe parse_recipe(const json& j, const std::string& base_dir) {
    Recipe r;
    try {
        r.name = j.at("name").get<std::string>();
        r.criterion = j.value("criterion", 0);
        r.figure = j.value("figure", std::string());
        r.probe = j.at("probe").get<std::string>();
        if (j.contains("params")) r.params = j.at("params");
        for (const auto& a : j.at("assertions")) {
            Assertion x;
            x.metric = a.at("metric").get<std::string>();
            x.op = a.at("op").get<std::string>();
            x.expected = a.at("expected").get<double>();
            x.tolerance = a.value("tolerance", 0.0);
            x.basis = a.value("basis", std::string());
            check_assertion(x, x.expected);  // rejects unknown comparators early
            r.assertions.push_back(std::move(x));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument("recipe: " + std::string(e.what()));
    }
    r.base_dir = base_dir;
    return r;
}

Recipe load_recipe(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing recipe file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("recipe '" + path + "': " + e.what());
    }
    // recipes live in <root>/recipes; params paths are relative to <root>
    const auto dir = std::filesystem::absolute(path).parent_path();
    return parse_recipe(j, dir.parent_path().string());
}

std::vector<std::string> recipe_files(const std::string& dir) {
    if (!std::filesystem::is_directory(dir)) throw std::runtime_error("missing recipe directory '" + dir + "'");
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

RecipeReport run_recipe(const Recipe& r) {
    RecipeReport rep;
    rep.name = r.name;
    rep.criterion = r.criterion;
    const auto t0 = std::chrono::steady_clock::now();
    Metrics m;
    try {
        m = run_probe(r.probe, r.params, r.base_dir);
    } catch (const std::exception& e) {
        rep.error = e.what();
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.pass = !rep.error;
    for (const auto& a : r.assertions) {
        AssertionResult ar;
        ar.assertion = a;
        if (const auto it = m.find(a.metric); it != m.end()) {
            ar.measured = it->second;
            ar.pass = check_assertion(a, it->second);
        }
        rep.pass = rep.pass && ar.pass;
        rep.results.push_back(std::move(ar));
    }
    return rep;
}

std::vector<RecipeReport> run_all(const std::vector<Recipe>& recipes, unsigned threads) {
    std::vector<RecipeReport> out(recipes.size());
    parallel_for(recipes.size(), threads, [&](std::size_t i) { out[i] = run_recipe(recipes[i]); });
    return out;
}

json report_json(const std::vector<RecipeReport>& reports, bool include_timing) {
    json root;
    bool all = true;
    json list = json::array();
    for (const auto& r : reports) {
        all = all && r.pass;
        json jr;
        jr["name"] = r.name;
        jr["criterion"] = r.criterion;
        jr["pass"] = r.pass;
        if (include_timing) jr["seconds"] = r.seconds;
        if (r.error) jr["error"] = *r.error;
        json as = json::array();
        for (const auto& a : r.results) {
            json ja;
            ja["metric"] = a.assertion.metric;
            ja["op"] = a.assertion.op;
            ja["expected"] = a.assertion.expected;
            ja["tolerance"] = a.assertion.tolerance;
            ja["basis"] = a.assertion.basis;
            ja["measured"] = a.measured ? json(*a.measured) : json(nullptr);
            ja["pass"] = a.pass;
            as.push_back(std::move(ja));
        }
        jr["assertions"] = std::move(as);
        list.push_back(std::move(jr));
    }
    root["pass"] = all;
    root["recipes"] = std::move(list);
    return root;
}

}  // namespace qnec
