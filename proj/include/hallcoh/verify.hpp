#pragma once
// Relation catalog over the loop-algebra generators, instantiation over index windows, the suite
// runner with verdicts and witnesses, JSON/text reports and the content-addressed cache.

#include "hallcoh/double.hpp"

#include "json.hpp"

#include <istream>
#include <string>
#include <vector>

namespace hallcoh {

struct Config {
    std::vector<int> weights;
    std::vector<int> lambdas;  // marked points beyond the third, as elements of F_q
    int q = 2;
    int k_max = 2;   // |k| <= k_max for x_{*,k}
    int r_max = 3;   // 1 <= |l| <= r_max for h_{s,l}, and |m| <= r_max for psi/phi
    int t_min = -2;  // tube indices of x_{[i,j],t}
    int t_max = 2;
    std::string rank2 = "auto";    // auto | on | off; auto enables it on the projective line only
    std::string vertices = "all";  // all | tube | star
    long enum_cap = 20000000;
    int section_cap = 7;
    std::vector<std::string> relations;  // ids or suite names; empty selects the whole catalog
    std::string cache_dir;
    std::string report;
    int jobs = 1;

    void set(const std::string& key, const std::string& value);  // throws std::invalid_argument
    void validate() const;                                        // throws std::invalid_argument
    bool rank2_enabled() const;
    // the fields that determine verdicts, in a fixed order; hashed for the cache key
    std::string canonical() const;
    std::string hash() const;

    static Config parse(std::istream& in);
    static Config load(const std::string& path);
};

std::string sha256_hex(const std::string& data);

struct Instance {
    std::string id;    // template id
    std::string kind;  // evaluation rule
    std::vector<Vertex> v;
    int sign = 1;
    std::vector<int> idx;
    std::string label() const;
};

struct Template {
    std::string id;
    std::string statement;
    std::string suite;  // tube-free R-relation, weighted, or double
};

const std::vector<Template>& catalog();
// ids from a mixed list of ids and suite names ("R", "weighted", "double", "all")
std::vector<std::string> expand_selection(const std::vector<std::string>& sel);
std::vector<Instance> instantiate(const std::string& id, const Generators& G, const Config& cfg);

struct Sides {
    DoubleElement lhs, rhs;
};
Sides evaluate(const Generators& G, const Instance& inst);

struct ReportEntry {
    Instance inst;
    std::string verdict;  // pass | fail | unsupported
    std::string witness;
    std::string central_note;
    long millis = 0;
};

struct Report {
    Config config;
    std::string config_hash;
    std::vector<std::string> notes;
    std::vector<ReportEntry> entries;
    long cache_hits = 0;

    long count(const std::string& verdict) const;
    nlohmann::json to_json(bool with_timing = true) const;
    std::string text() const;
    int exit_code() const { return count("fail") ? 1 : 0; }
};

ReportEntry judge(const Generators& G, const Instance& inst);
Report run_suite(const Config& cfg);

}  // namespace hallcoh
