#include "hallcoh/verify.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <regex>

using namespace hallcoh;
using json = nlohmann::json;

namespace {

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

// atom := O(k) | O(a;b1,..,bn) | S(i,j) | S(i,j,len) | T(r); branches are 1-based
HallElement parse_atom(const CohModel& M, const std::string& atom) {
    static const std::regex re(R"(^\s*([OST])\(([^)]*)\)\s*$)");
    std::smatch m;
    if (!std::regex_match(atom, m, re)) throw std::invalid_argument("cannot parse factor '" + atom + "'");
    std::string kind = m[1], args = m[2];
    const WeightData& w = M.weights();
    if (kind == "O") {
        auto semi = args.find(';');
        if (semi == std::string::npos) return hall_basis(M.line_c(std::stoi(args)));
        std::vector<int> b = parse_ints(args.substr(semi + 1));
        if (static_cast<int>(b.size()) != w.branches()) throw std::invalid_argument("O(a;b): need one b per branch");
        return hall_basis(M.line(w.normal_form(std::stoi(args.substr(0, semi)), b)));
    }
    std::vector<int> a = parse_ints(args);
    if (kind == "T") {
        if (a.size() != 1) throw std::invalid_argument("T(r) takes one argument");
        return build_Tr(M, a[0]);
    }
    if (a.size() < 2 || a.size() > 3) throw std::invalid_argument("S(i,j[,len]) takes two or three arguments");
    if (a[0] < 1 || a[0] > w.branches()) throw std::invalid_argument("branch out of range");
    return hall_basis(M.simple(a[0] - 1, a[1], a.size() == 3 ? a[2] : 1));
}

std::vector<SheafKey> sample_objects(const CohModel& M) {
    const WeightData& w = M.weights();
    std::vector<SheafKey> out;
    for (int k = -1; k <= 1; ++k) out.push_back(M.line_c(k));
    for (int i = 0; i < w.branches(); ++i) {
        if (w.weight(i) < 2) continue;
        for (int j = 0; j < w.weight(i); ++j) out.push_back(M.simple(i, j));
        out.push_back(M.simple(i, 0, 2));
    }
    return out;
}

int cmd_verify(const std::string& config, const std::string& relations, int q, const std::string& out,
               const std::string& cache, int jobs) {
    Config cfg;
    try {
        cfg = Config::load(config);
        if (!relations.empty()) cfg.set("relations", relations);
        if (q) cfg.q = q;
        if (!out.empty()) cfg.report = out;
        if (!cache.empty()) cfg.cache_dir = cache;
        if (jobs) cfg.jobs = jobs;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }
    Report R = run_suite(cfg);
    std::cout << R.text();
    if (!cfg.report.empty()) {
        std::ofstream f(cfg.report);
        f << R.to_json().dump(2) << "\n";
    }
    return R.exit_code();
}

int cmd_hall_mul(const std::string& expr, const std::string& weights, int q) {
    CohModel M(WeightData(parse_ints(weights), q));
    HallElement acc;
    bool first = true;
    std::stringstream ss(expr);
    std::string atom;
    while (std::getline(ss, atom, '*')) {
        HallElement x = parse_atom(M, atom);
        acc = first ? x : hall_mul(M, acc, x);
        first = false;
    }
    if (first) throw std::invalid_argument("empty product");
    std::cout << hall_str(M, acc) << "\n";
    return 0;
}

int cmd_tables(const std::string& what, const std::string& weights, int q) {
    CohModel M(WeightData(parse_ints(weights), q));
    auto objs = sample_objects(M);
    json out = json::object();
    out["weights"] = parse_ints(weights);
    out["q"] = q;
    json rows = json::array();
    if (what == "hom") {
        for (auto& A : objs)
            for (auto& B : objs)
                rows.push_back({{"a", M.str(A)}, {"b", M.str(B)}, {"hom", M.hom_dim(A, B)}, {"ext", M.ext_dim(A, B)}});
    } else if (what == "aut") {
        for (auto& A : objs) rows.push_back({{"a", M.str(A)}, {"aut", M.aut_order(A).get_str()}});
    } else if (what == "hall") {
        for (auto& A : objs)
            for (auto& B : objs) {
                if (A.rank() + B.rank() > 1) continue;
                json terms = json::array();
                for (auto& [C, c] : M.mul(A, B)) terms.push_back({{"c", M.str(C)}, {"coeff", c.str()}});
                rows.push_back({{"a", M.str(A)}, {"b", M.str(B)}, {"product", terms}});
            }
    } else {
        throw std::invalid_argument("--what must be hom, hall or aut");
    }
    out[what] = rows;
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hall algebra of coherent sheaves on weighted projective lines"};
    app.require_subcommand(1);

    std::string config, relations, out, cache;
    int q = 0, jobs = 0;
    auto* verify = app.add_subcommand("verify", "run the relation suite for a configuration");
    verify->add_option("--config", config, "flat key = value configuration file")->required();
    verify->add_option("--relations", relations, "comma-separated relation ids or suite names");
    verify->add_option("--q", q, "override q");
    verify->add_option("--out", out, "JSON report path");
    verify->add_option("--cache", cache, "cache directory");
    verify->add_option("--jobs", jobs, "worker threads");

    std::string expr, weights;
    int hq = 2;
    auto* hall = app.add_subcommand("hall", "ad-hoc Hall algebra computations");
    auto* mul = hall->add_subcommand("mul", "multiply factors such as 'S(1,1)*O(0)' or 'T(2)*O(-1)'");
    mul->add_option("expr", expr, "product expression")->required();
    mul->add_option("--weights", weights, "comma-separated weights (empty: projective line)");
    mul->add_option("--q", hq, "field size");
    hall->require_subcommand(1);

    std::string what, tweights;
    int tq = 2;
    auto* tables = app.add_subcommand("tables", "structure-constant tables");
    auto* dump = tables->add_subcommand("dump", "print a table as JSON");
    dump->add_option("--what", what, "hom | hall | aut")->required();
    dump->add_option("--weights", tweights, "comma-separated weights");
    dump->add_option("--q", tq, "field size");
    tables->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);
    try {
        if (verify->parsed()) return cmd_verify(config, relations, q, out, cache, jobs);
        if (mul->parsed()) return cmd_hall_mul(expr, weights, hq);
        if (dump->parsed()) return cmd_tables(what, tweights, tq);
    } catch (const UnsupportedStratum& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
