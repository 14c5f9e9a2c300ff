#include "hallcoh/verify.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

namespace hallcoh {

namespace fs = std::filesystem;
using json = nlohmann::json;

// ---------------------------------------------------------------------------------------------
// Config

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(trim(item));
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    size_t pos = 0;
    long x = 0;
    try {
        x = std::stol(v, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != v.size()) throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + v + "'");
    return static_cast<int>(x);
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (auto& s : split_list(v)) out.push_back(to_int(key, s));
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
    if (key == "weights") weights = to_ints(key, value);
    else if (key == "lambdas") lambdas = to_ints(key, value);
    else if (key == "q") q = to_int(key, value);
    else if (key == "k_max") k_max = to_int(key, value);
    else if (key == "r_max") r_max = to_int(key, value);
    else if (key == "t_min") t_min = to_int(key, value);
    else if (key == "t_max") t_max = to_int(key, value);
    else if (key == "rank2") rank2 = value;
    else if (key == "vertices") vertices = value;
    else if (key == "enum_cap") enum_cap = to_int(key, value);
    else if (key == "section_cap") section_cap = to_int(key, value);
    else if (key == "relations") relations = split_list(value);
    else if (key == "cache_dir") cache_dir = value;
    else if (key == "report") report = value;
    else if (key == "jobs") jobs = to_int(key, value);
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

bool Config::rank2_enabled() const { return rank2 == "on" || (rank2 == "auto" && weights.empty()); }

void Config::validate() const {
    if (!admissible_q(q)) throw std::invalid_argument("q must be one of 2, 3, 5, 7");
    WeightData w(weights, q, lambdas);  // checks weights and lambdas
    if (rank2 != "auto" && rank2 != "on" && rank2 != "off")
        throw std::invalid_argument("rank2 must be auto, on or off");
    if (rank2 == "on" && !weights.empty())
        throw std::invalid_argument("rank2 = on is only exact on the projective line (no weights)");
    if (vertices != "all" && vertices != "tube" && vertices != "star")
        throw std::invalid_argument("vertices must be all, tube or star");
    if (k_max < 0 || r_max < 1 || t_min > t_max) throw std::invalid_argument("index windows are empty or inverted");
    if (r_max > 6 || k_max > 6 || t_max > 6 || t_min < -6) throw std::invalid_argument("index windows exceed 6");
    if (enum_cap < 1 || section_cap < 1) throw std::invalid_argument("caps must be positive");
    if (jobs < 1) throw std::invalid_argument("jobs must be positive");
    expand_selection(relations);  // checks ids
}

std::string Config::canonical() const {
    std::ostringstream os;
    os << "weights=" << join_ints(weights) << "\nlambdas=" << join_ints(lambdas) << "\nq=" << q
       << "\nk_max=" << k_max << "\nr_max=" << r_max << "\nt_min=" << t_min << "\nt_max=" << t_max
       << "\nrank2=" << (rank2_enabled() ? "on" : "off") << "\nvertices=" << vertices << "\nenum_cap=" << enum_cap
       << "\nsection_cap=" << section_cap << "\n";
    return os.str();
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

std::string Config::hash() const { return sha256_hex("hallcoh-config-v1\n" + canonical()); }

Config Config::parse(std::istream& in) {
    Config c;
    std::string line;
    int n = 0;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++n;
        auto h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(n) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second) throw std::invalid_argument("config key '" + key + "' given twice");
        c.set(key, value);
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read config file " + path);
    return parse(f);
}

// ---------------------------------------------------------------------------------------------
// Catalog

std::string Instance::label() const {
    std::ostringstream os;
    os << id << "(";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << vertex_name(v[i]);
    os << ";" << (sign > 0 ? "+" : "-") << ";";
    for (size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
    os << ")";
    return os.str();
}

const std::vector<Template>& catalog() {
    static const std::vector<Template> T = {
        {"R1", "[K_s, K_t] = 0 and [K_s, h_{t,l}] = 0", "R"},
        {"R2", "[h_{s,l}, h_{t,k}] = 0", "R"},
        {"R3", "K_s x^±_{t,k} K_s^-1 = v^{±a_st} x^±_{t,k}", "R"},
        {"R4", "[h_{s,l}, x^±_{t,k}] = ±(1/l)[l a_st] x^±_{t,k+l}", "R"},
        {"R5", "x^±_{s,k+1} x^±_{t,l} - v^{±a} x^±_{t,l} x^±_{s,k+1} = v^{±a} x^±_{s,k} x^±_{t,l+1} - x^±_{t,l+1} x^±_{s,k}",
         "R"},
        {"R6", "[x^+_{s,k}, x^-_{t,l}] = δ_st (psi_{s,k+l} - phi_{s,k+l})/(v - v^-1)", "R"},
        {"R7", "Sym_{k_1..k_n} sum_t (-1)^t [n,t] x_{s,k_1}..x_{s,k_t} x_{t,l} x_{s,k_t+1}..x_{s,k_n} = 0, n = 1 - a_st",
         "R"},
        {"S-a", "[T_r, u_O(kc)] = [2r]/r u_O((k+r)c) and [T_r, x^+_{[i,1],r1}] = -[r]/r x^+_{[i,1],r1+r}", "weighted"},
        {"S-b", "u_O((t1+1)c) u_O(t2 c) - v^2 u_O(t2 c) u_O((t1+1)c) = v^2 u_O(t1 c) u_O((t2+1)c) - u_O((t2+1)c) u_O(t1 c)",
         "weighted"},
        {"S-d", "R5 for (*, [i,1]) and ([i,1], [i,1]) with tube indices >= 0", "weighted"},
        {"S-e", "[h_{[i,k],l}, h_{[j,s],t}] = 0 and [h_{[i,k],l}, x^+_{[j,s],t}] = 0 for i != j", "weighted"},
        {"L-hh", "[h_{[i,j],k}, h_{[i,l],m}] = 0 (k, m > 0) and [h_{[i,l],k}, h_{*,m}] = 0", "weighted"},
        {"L-hsi", "[h_{*,l}, x^+_{[i,j],k}] = 0 for j >= 2, l > 0, k >= 0", "weighted"},
        {"L-hsi--", "[h_{*,l}, x^-_{[i,1],k}] = [l]/l x^-_{[i,1],k+l} for l > 0, k >= 1", "weighted"},
        {"L-hstar-jge2", "[h_{*,l}, x^-_{[i,j],k}] = 0 for j >= 2, l > 0, k >= 1", "weighted"},
        {"L-hsi-", "[x^+_{*,k}, x^-_{[i,j],1}] = 0", "weighted"},
        {"L-hi1-xast", "[h_{[i,1],l}, x^+_{*,k}] = -[l]/l x^+_{*,k+l} for l > 0", "weighted"},
        {"L-xi-h", "r h_{[i,1],r} = r xi_r - sum_{s<r} (v - v^-1) s h_{[i,1],s} xi_{r-s}", "weighted"},
        {"L-xi", "xi_r u_O(kc) = u_O(kc) xi_r + sum_{s<r} v^{-(s-1)}(v^-1 - v) u_O((k+s)c) xi_{r-s} - v^{-(r-1)} u_O((k+r)c)",
         "weighted"},
        {"L-xij-xast", "[x^+_{[i,j],l}, x^+_{*,k}] = 0 and [h_{[i,j],l}, x^+_{*,k}] = 0 for j >= 2, l >= 0", "weighted"},
        {"L-xm-xast", "[x^-_{[i,j],l}, x^+_{*,k}] = 0 for l >= 1", "weighted"},
        {"D-pipi", "[pi^+_{l1,k1}, pi^-_{l2,k2}] = 0 in one tube", "double"},
        {"D-hh", "R2 with l m < 0", "double"},
        {"D-hx", "R4 with l < 0", "double"},
        {"D-xx", "R6 for all vertex pairs", "double"},
        {"D-r5", "R5 with one tube vertex and the star vertex", "double"},
        {"D-serre", "R7 with a negative index: tube vertex twice (k1 <= 0) or the star twice (l < 0)", "double"},
    };
    return T;
}

std::vector<std::string> expand_selection(const std::vector<std::string>& sel) {
    std::vector<std::string> out;
    auto add = [&](const std::string& id) {
        if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
    };
    for (auto& s : sel) {
        bool found = false;
        for (auto& t : catalog())
            if (s == t.id || s == t.suite || s == "all") {
                add(t.id);
                found = true;
            }
        if (!found) throw std::invalid_argument("unknown relation id or suite '" + s + "'");
    }
    return out;
}

namespace {

struct Windows {
    const Generators& G;
    const Config& cfg;
    std::vector<Vertex> verts;

    Windows(const Generators& g, const Config& c) : G(g), cfg(c) {
        for (auto& s : G.vertices()) {
            if (cfg.vertices == "tube" && s.star()) continue;
            if (cfg.vertices == "star" && !s.star()) continue;
            verts.push_back(s);
        }
    }
    int lo(const Vertex& s) const { return s.star() ? -cfg.k_max : cfg.t_min; }
    int hi(const Vertex& s) const { return s.star() ? cfg.k_max : cfg.t_max; }
    bool in(const Vertex& s, int k) const { return k >= lo(s) && k <= hi(s); }
    std::vector<int> xs(const Vertex& s) const {
        std::vector<int> r;
        for (int k = lo(s); k <= hi(s); ++k) r.push_back(k);
        return r;
    }
    std::vector<int> hs() const {
        std::vector<int> r;
        for (int l = -cfg.r_max; l <= cfg.r_max; ++l)
            if (l) r.push_back(l);
        return r;
    }
    std::vector<int> hpos() const {
        std::vector<int> r;
        for (int l = 1; l <= cfg.r_max; ++l) r.push_back(l);
        return r;
    }
    std::vector<Vertex> tube(int jmin = 1, int jmax = 1000) const {
        std::vector<Vertex> r;
        for (auto& s : verts)
            if (!s.star() && s.j >= jmin && s.j <= jmax) r.push_back(s);
        return r;
    }
    bool has_star() const { return !verts.empty() && verts.front().star(); }
};

Instance mk(const std::string& id, const std::string& kind, std::vector<Vertex> v, int sign, std::vector<int> idx) {
    return Instance{id, kind, std::move(v), sign, std::move(idx)};
}

// R4 instances for s, t, sign, with l and k drawn from the given lists; require_rhs keeps k+l in the window
void add_hx(std::vector<Instance>& out, const Windows& W, const std::string& id, const Vertex& s, const Vertex& t,
            int sign, const std::vector<int>& ls, const std::vector<int>& ks, bool require_rhs) {
    for (int l : ls)
        for (int k : ks)
            if (!require_rhs || W.in(t, k + l)) out.push_back(mk(id, "HX", {s, t}, sign, {l, k}));
}

void add_serre(std::vector<Instance>& out, const Windows& W, const std::string& id, const Vertex& s, const Vertex& t,
               int sign, const std::function<bool(const std::vector<int>&, int)>& keep) {
    int n = 1 - W.G.cartan(s, t);
    std::vector<int> ks = W.xs(s);
    std::vector<int> cur;
    std::function<void(size_t)> rec = [&](size_t from) {
        if (static_cast<int>(cur.size()) == n) {
            for (int l : W.xs(t)) {
                if (!keep(cur, l)) continue;
                std::vector<int> idx = cur;
                idx.push_back(l);
                out.push_back(mk(id, "X7", {s, t}, sign, idx));
            }
            return;
        }
        for (size_t i = from; i < ks.size(); ++i) {
            cur.push_back(ks[i]);
            rec(i);
            cur.pop_back();
        }
    };
    rec(0);
}

}  // namespace

std::vector<Instance> instantiate(const std::string& id, const Generators& G, const Config& cfg) {
    Windows W(G, cfg);
    std::vector<Instance> out;
    const auto& V = W.verts;
    auto any = [](const std::vector<int>&, int) { return true; };
    if (id == "R1") {
        for (auto& s : V)
            for (auto& t : V) {
                out.push_back(mk(id, "K", {s, t}, 1, {0}));
                for (int l : W.hs()) out.push_back(mk(id, "K", {s, t}, 1, {l}));
            }
    } else if (id == "R2" || id == "D-hh") {
        std::vector<std::pair<Vertex, int>> hs;
        for (auto& s : V)
            for (int l : W.hs()) hs.emplace_back(s, l);
        for (size_t a = 0; a < hs.size(); ++a)
            for (size_t b = a + 1; b < hs.size(); ++b) {
                if (id == "D-hh" && hs[a].second * hs[b].second > 0) continue;
                out.push_back(mk(id, "HH", {hs[a].first, hs[b].first}, 1, {hs[a].second, hs[b].second}));
            }
    } else if (id == "R3") {
        for (auto& s : V)
            for (auto& t : V)
                for (int sg : {1, -1})
                    for (int k : W.xs(t)) out.push_back(mk(id, "KX", {s, t}, sg, {k}));
    } else if (id == "R4" || id == "D-hx") {
        std::vector<int> ls = W.hs();
        if (id == "D-hx") ls.erase(std::remove_if(ls.begin(), ls.end(), [](int l) { return l > 0; }), ls.end());
        for (auto& s : V)
            for (auto& t : V)
                for (int sg : {1, -1}) add_hx(out, W, id, s, t, sg, ls, W.xs(t), true);
    } else if (id == "R5" || id == "D-r5") {
        for (auto& s : V)
            for (auto& t : V) {
                if (id == "D-r5" && s.star() == t.star()) continue;
                for (int sg : {1, -1})
                    for (int k : W.xs(s))
                        for (int l : W.xs(t))
                            if (W.in(s, k + 1) && W.in(t, l + 1)) out.push_back(mk(id, "X5", {s, t}, sg, {k, l}));
            }
    } else if (id == "R6" || id == "D-xx") {
        for (auto& s : V)
            for (auto& t : V)
                for (int k : W.xs(s))
                    for (int l : W.xs(t))
                        if (!(s == t) || std::abs(k + l) <= cfg.r_max) out.push_back(mk(id, "X6", {s, t}, 1, {k, l}));
    } else if (id == "R7") {
        for (auto& s : V)
            for (auto& t : V)
                if (!(s == t))
                    for (int sg : {1, -1}) add_serre(out, W, id, s, t, sg, any);
    } else if (id == "D-serre") {
        for (auto& s : V)
            for (auto& t : V) {
                if (s == t || s.star() == t.star() || G.cartan(s, t) > 0) continue;
                if (!s.star() && s.j == 1)  // tube vertex twice, smallest index <= 0
                    add_serre(out, W, id, s, t, 1, [](const std::vector<int>& k, int) { return k.front() <= 0; });
                else if (s.star() && G.cartan(s, t) < 0)  // star twice, tube index < 0
                    add_serre(out, W, id, s, t, 1, [](const std::vector<int>&, int l) { return l < 0; });
                else if (s.star())  // commuting pair, tube index < 0
                    add_serre(out, W, id, s, t, 1, [](const std::vector<int>&, int l) { return l < 0; });
            }
    } else if (id == "S-a") {
        if (!W.has_star()) return out;
        Vertex st;
        add_hx(out, W, id, st, st, 1, W.hpos(), W.xs(st), false);
        for (auto& t : W.tube(1, 1)) {
            std::vector<int> ks;
            for (int k = 0; k <= cfg.t_max; ++k) ks.push_back(k);
            add_hx(out, W, id, st, t, 1, W.hpos(), ks, false);
        }
    } else if (id == "S-b") {
        if (!W.has_star()) return out;
        Vertex st;
        for (int k : W.xs(st))
            for (int l : W.xs(st))
                if (W.in(st, k + 1) && W.in(st, l + 1)) out.push_back(mk(id, "X5", {st, st}, 1, {k, l}));
    } else if (id == "S-d") {
        std::vector<int> ks;
        for (int k = 0; k + 1 <= cfg.t_max; ++k) ks.push_back(k);
        for (auto& t : W.tube(1, 1)) {
            if (W.has_star()) {
                Vertex st;
                for (int a : W.xs(st))
                    if (W.in(st, a + 1))
                        for (int r : ks) out.push_back(mk(id, "X5", {st, t}, 1, {a, r}));
            }
            for (int r1 : ks)
                for (int r2 : ks) out.push_back(mk(id, "X5", {t, t}, 1, {r1, r2}));
        }
    } else if (id == "S-e") {
        auto T = W.tube();
        std::vector<int> ks;
        for (int k = 0; k <= cfg.t_max; ++k) ks.push_back(k);
        for (auto& s : T)
            for (auto& t : T) {
                if (s.branch == t.branch) continue;
                for (int l : W.hpos())
                    for (int m : W.hpos())
                        if (s < t) out.push_back(mk(id, "HH", {s, t}, 1, {l, m}));
                add_hx(out, W, id, s, t, 1, W.hpos(), ks, false);
            }
    } else if (id == "L-hh") {
        auto T = W.tube();
        for (auto& s : T) {
            for (auto& t : T)
                if (s.branch == t.branch && s <= t)
                    for (int l : W.hpos())
                        for (int m : W.hpos())
                            if (!(s == t) || l < m) out.push_back(mk(id, "HH", {s, t}, 1, {l, m}));
            if (W.has_star())
                for (int l : W.hpos())
                    for (int m : W.hs()) out.push_back(mk(id, "HH", {s, Vertex{}}, 1, {l, m}));
        }
    } else if (id == "L-hsi" || id == "L-hsi--" || id == "L-hstar-jge2") {
        if (!W.has_star()) return out;
        bool minus = id != "L-hsi";
        auto T = id == "L-hsi--" ? W.tube(1, 1) : W.tube(2);
        std::vector<int> ks;
        for (int k = minus ? 1 : 0; k <= cfg.t_max; ++k) ks.push_back(k);
        for (auto& t : T) add_hx(out, W, id, Vertex{}, t, minus ? -1 : 1, W.hpos(), ks, false);
    } else if (id == "L-hsi-") {
        if (!W.has_star()) return out;
        for (auto& t : W.tube())
            for (int k : W.xs(Vertex{})) out.push_back(mk(id, "X6", {Vertex{}, t}, 1, {k, 1}));
    } else if (id == "L-hi1-xast") {
        if (!W.has_star()) return out;
        for (auto& s : W.tube(1, 1)) add_hx(out, W, id, s, Vertex{}, 1, W.hpos(), W.xs(Vertex{}), false);
    } else if (id == "L-xi-h") {
        for (auto& s : W.tube(1, 1))
            for (int r : W.hpos()) out.push_back(mk(id, "XIH", {s}, 1, {r}));
    } else if (id == "L-xi") {
        if (!W.has_star()) return out;
        for (auto& s : W.tube(1, 1))
            for (int r : W.hpos())
                for (int k : W.xs(Vertex{})) out.push_back(mk(id, "XI", {s}, 1, {r, k}));
    } else if (id == "L-xij-xast") {
        if (!W.has_star()) return out;
        std::vector<int> ks;
        for (int k = 0; k <= cfg.t_max; ++k) ks.push_back(k);
        for (auto& s : W.tube(2)) {
            for (int l : ks)
                for (int k : W.xs(Vertex{})) out.push_back(mk(id, "X7", {s, Vertex{}}, 1, {l, k}));
            add_hx(out, W, id, s, Vertex{}, 1, W.hpos(), W.xs(Vertex{}), false);
        }
    } else if (id == "L-xm-xast") {
        if (!W.has_star()) return out;
        for (auto& t : W.tube())
            for (int l = 1; l <= cfg.t_max; ++l)
                for (int k : W.xs(Vertex{})) out.push_back(mk(id, "X6", {Vertex{}, t}, 1, {k, l}));
    } else if (id == "D-pipi") {
        std::set<int> branches;
        for (auto& s : W.tube()) branches.insert(s.branch);
        const int rm = std::min(cfg.r_max, 2);
        for (int b : branches) {
            int p = G.algebra().weights().weight(b);
            for (int l1 = 1; l1 <= p; ++l1)
                for (int l2 = 1; l2 <= p; ++l2)
                    for (int k1 = 1; k1 <= rm; ++k1)
                        for (int k2 = 1; k2 <= rm; ++k2)
                            out.push_back(mk(id, "PP", {Vertex{b, 1}}, 1, {l1, k1, l2, k2}));
        }
    } else {
        throw std::invalid_argument("unknown relation id '" + id + "'");
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Evaluation

Sides evaluate(const Generators& G, const Instance& I) {
    const DoubleAlgebra& D = G.algebra();
    const CohModel& M = D.model();
    const int q = M.q();
    auto X = [&](int sign, const Vertex& s, int k) -> const DoubleElement& {
        return sign > 0 ? G.xplus(s, k) : G.xminus(s, k);
    };
    auto mul3 = [&](const DoubleElement& a, const DoubleElement& b, const DoubleElement& c) {
        return D.mul(D.mul(a, b), c);
    };
    const QScalar vd = qv_pow(q, 1) - qv_pow(q, -1);
    Sides S;
    const auto& V = I.v;
    if (I.kind == "K") {
        int l = I.idx[0];
        S.lhs = l == 0 ? D.commutator(G.K(V[0]), G.K(V[1])) : D.commutator(G.K(V[0]), G.h(V[1], l));
    } else if (I.kind == "HH") {
        S.lhs = D.commutator(G.h(V[0], I.idx[0]), G.h(V[1], I.idx[1]));
    } else if (I.kind == "KX") {
        const DoubleElement& x = X(I.sign, V[1], I.idx[0]);
        S.lhs = mul3(G.K(V[0]), x, G.K(V[0], -1));
        S.rhs = d_scale(x, qv_pow(q, I.sign * G.cartan(V[0], V[1])));
    } else if (I.kind == "HX") {
        int l = I.idx[0], k = I.idx[1];
        S.lhs = D.commutator(G.h(V[0], l), X(I.sign, V[1], k));
        QScalar c = QScalar(I.sign) * quantum_integer(q, static_cast<long>(l) * G.cartan(V[0], V[1])) / QScalar(l);
        if (!c.is_zero()) S.rhs = d_scale(X(I.sign, V[1], k + l), c);
    } else if (I.kind == "X5") {
        int k = I.idx[0], l = I.idx[1], sg = I.sign;
        QScalar va = qv_pow(q, sg * G.cartan(V[0], V[1]));
        const Vertex &s = V[0], &t = V[1];
        S.lhs = d_sub(D.mul(X(sg, s, k + 1), X(sg, t, l)), d_scale(D.mul(X(sg, t, l), X(sg, s, k + 1)), va));
        S.rhs = d_sub(d_scale(D.mul(X(sg, s, k), X(sg, t, l + 1)), va), D.mul(X(sg, t, l + 1), X(sg, s, k)));
    } else if (I.kind == "X6") {
        int k = I.idx[0], l = I.idx[1];
        S.lhs = D.commutator(G.xplus(V[0], k), G.xminus(V[1], l));
        if (V[0] == V[1]) S.rhs = d_scale(d_sub(G.psi(V[0], k + l), G.phi(V[0], k + l)), QScalar(1) / vd);
    } else if (I.kind == "X7") {
        const Vertex &s = V[0], &t = V[1];
        int n = static_cast<int>(I.idx.size()) - 1, l = I.idx.back();
        std::vector<int> ks(I.idx.begin(), I.idx.end() - 1);
        std::sort(ks.begin(), ks.end());
        do {
            for (int m = 0; m <= n; ++m) {
                DoubleElement term = D.one();
                for (int a = 0; a < m; ++a) term = D.mul(term, X(I.sign, s, ks[a]));
                term = D.mul(term, X(I.sign, t, l));
                for (int a = m; a < n; ++a) term = D.mul(term, X(I.sign, s, ks[a]));
                QScalar c = quantum_binomial(q, n, m);
                if (m % 2) c = -c;
                S.lhs = d_add(S.lhs, d_scale(term, c));
            }
        } while (std::next_permutation(ks.begin(), ks.end()));
    } else if (I.kind == "XI" || I.kind == "XIH") {
        const Vertex& s = V[0];
        int r = I.idx[0];
        std::vector<DoubleElement> xi(r + 1);
        for (int m = 1; m <= r; ++m) xi[m] = D.mul(D.commutator(G.xplus(s, m - 1), G.xminus(s, 1)), G.K(s, -1));
        if (I.kind == "XIH") {
            S.lhs = d_scale(G.h(s, r), QScalar(r));
            S.rhs = d_scale(xi[r], QScalar(r));
            for (int m = 1; m < r; ++m) S.rhs = d_sub(S.rhs, d_scale(D.mul(G.h(s, m), xi[r - m]), vd * QScalar(m)));
        } else {
            int k = I.idx[1];
            Vertex st;
            S.lhs = D.mul(xi[r], G.xplus(st, k));
            S.rhs = D.mul(G.xplus(st, k), xi[r]);
            for (int m = 1; m < r; ++m) {
                QScalar c = qv_pow(q, -(m - 1)) * (qv_pow(q, -1) - qv_pow(q, 1));
                S.rhs = d_add(S.rhs, d_scale(D.mul(G.xplus(st, k + m), xi[r - m]), c));
            }
            S.rhs = d_sub(S.rhs, d_scale(G.xplus(st, k + r), qv_pow(q, -(r - 1))));
        }
    } else if (I.kind == "PP") {
        int b = V[0].branch;
        DoubleElement p = D.plus(pi_elem(M, b, I.idx[0], I.idx[1]));
        DoubleElement m = D.minus(pi_elem(M, b, I.idx[2], I.idx[3]));
        S.lhs = D.commutator(p, m);
    } else {
        throw std::logic_error("evaluate: unknown kind " + I.kind);
    }
    return S;
}

namespace {

std::string clip(const std::string& s, size_t n = 4000) { return s.size() <= n ? s : s.substr(0, n) + " ..."; }

std::string delta_exponents(const CohModel& M, const DoubleElement& d) {
    std::set<int> e;
    for (auto& [k, c] : d) e.insert(k.torus[M.weights().delta_index()]);
    std::string s;
    for (int x : e) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
}

}  // namespace

ReportEntry judge(const Generators& G, const Instance& inst) {
    ReportEntry e;
    e.inst = inst;
    auto t0 = std::chrono::steady_clock::now();
    const DoubleAlgebra& D = G.algebra();
    try {
        Sides S = evaluate(G, inst);
        DoubleElement diff = d_sub(S.lhs, S.rhs);
        if (d_is_zero(diff)) {
            e.verdict = "pass";
        } else if (d_is_zero(D.central_reduce(diff))) {
            e.verdict = "pass";
            e.central_note = "equal after K_delta -> 1; exact difference has K_delta exponents {" +
                             delta_exponents(D.model(), diff) + "}: " + clip(D.str(diff));
        } else {
            e.verdict = "fail";
            e.witness = clip(D.str(diff));
        }
    } catch (const UnsupportedStratum& ex) {
        e.verdict = "unsupported";
        e.witness = std::string("stratum: ") + ex.what();
    } catch (const ResourceError& ex) {
        e.verdict = "unsupported";
        e.witness = std::string("resource: ") + ex.what();
    }
    e.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return e;
}

// ---------------------------------------------------------------------------------------------
// Serialization for the cache

namespace {

json key_to_json(const SheafKey& k) {
    json lines = json::array(), tors = json::array();
    for (auto& L : k.lines) lines.push_back({L.a, L.b});
    for (auto& [x, mod] : k.torsion) {
        json segs = json::array();
        for (auto& s : mod) segs.push_back({s.top, s.len});
        tors.push_back({x.branch, x.poly, segs});
    }
    return {{"l", lines}, {"t", tors}};
}

SheafKey key_from_json(const json& j) {
    SheafKey k;
    for (auto& L : j.at("l")) k.lines.push_back(VecL{L.at(0).get<int>(), L.at(1).get<std::vector<int>>()});
    for (auto& t : j.at("t")) {
        ClosedPoint x{t.at(0).get<int>(), t.at(1).get<Poly>()};
        TubeModule mod;
        for (auto& s : t.at(2)) mod.push_back(Segment{s.at(0).get<int>(), s.at(1).get<int>()});
        k.torsion[x] = mod;
    }
    return k;
}

json scalar_to_json(const QScalar& c) { return {c.a().get_str(), c.b().get_str()}; }

QScalar scalar_from_json(const json& j, int q) {
    mpq_class a(j.at(0).get<std::string>()), b(j.at(1).get<std::string>());
    a.canonicalize();
    b.canonicalize();
    return QScalar(a, b, q);
}

json element_to_json(const DoubleElement& x) {
    json out = json::array();
    for (auto& [k, c] : x) out.push_back({key_to_json(k.plus), k.torus, key_to_json(k.minus), scalar_to_json(c)});
    return out;
}

DoubleElement element_from_json(const json& j, int q) {
    DoubleElement x;
    for (auto& t : j)
        d_add_term(x, DKey{key_from_json(t.at(0)), t.at(1).get<Cls>(), key_from_json(t.at(2))},
                   scalar_from_json(t.at(3), q));
    return x;
}

// Cache file: versioned header, config hash, kind, and the sha256 of the serialized payload.
constexpr int kCacheVersion = 1;

fs::path cache_path(const std::string& dir, const std::string& hash, const std::string& kind) {
    return fs::path(dir) / (hash + "." + kind + ".json");
}

bool read_cache(const std::string& dir, const std::string& hash, const std::string& kind, json& payload) {
    fs::path p = cache_path(dir, hash, kind);
    std::ifstream f(p);
    if (!f) return false;
    try {
        json j = json::parse(f);
        if (j.at("format") != "hallcoh-cache" || j.at("version") != kCacheVersion || j.at("kind") != kind ||
            j.at("config_hash") != hash)
            return false;
        std::string body = j.at("payload").dump();
        if (sha256_hex(body) != j.at("payload_sha256").get<std::string>()) return false;
        payload = j.at("payload");
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

void write_cache(const std::string& dir, const std::string& hash, const std::string& kind, const json& payload) {
    fs::create_directories(dir);
    json j = {{"format", "hallcoh-cache"}, {"version", kCacheVersion}, {"kind", kind}, {"config_hash", hash},
              {"payload_sha256", sha256_hex(payload.dump())}, {"payload", payload}};
    fs::path p = cache_path(dir, hash, kind), tmp = p;
    tmp += ".tmp";
    {
        std::ofstream f(tmp);
        f << j.dump() << "\n";
    }
    fs::rename(tmp, p);
}

json instance_to_json(const Instance& I) {
    json v = json::array();
    for (auto& s : I.v) v.push_back(vertex_name(s));
    return {{"id", I.id}, {"kind", I.kind}, {"vertices", v}, {"sign", I.sign > 0 ? "+" : "-"}, {"indices", I.idx}};
}

}  // namespace

long Report::count(const std::string& verdict) const {
    return std::count_if(entries.begin(), entries.end(), [&](const ReportEntry& e) { return e.verdict == verdict; });
}

json Report::to_json(bool with_timing) const {
    json entries_j = json::array();
    for (auto& e : entries) {
        json j = {{"instance", instance_to_json(e.inst)}, {"label", e.inst.label()}, {"verdict", e.verdict},
                  {"witness", e.witness}, {"central_note", e.central_note}};
        if (with_timing) j["millis"] = e.millis;
        entries_j.push_back(j);
    }
    json cfg = {{"weights", config.weights}, {"lambdas", config.lambdas}, {"q", config.q},
                {"k_max", config.k_max},     {"r_max", config.r_max},     {"t_min", config.t_min},
                {"t_max", config.t_max},     {"rank2", config.rank2_enabled()}, {"vertices", config.vertices},
                {"relations", expand_selection(config.relations.empty() ? std::vector<std::string>{"all"}
                                                                         : config.relations)}};
    json summary = {{"total", entries.size()}, {"pass", count("pass")}, {"fail", count("fail")},
                    {"unsupported", count("unsupported")}};
    if (with_timing) summary["cache_hits"] = cache_hits;
    return {{"config", cfg}, {"config_hash", config_hash}, {"notes", notes}, {"entries", entries_j},
            {"summary", summary}};
}

std::string Report::text() const {
    std::ostringstream os;
    os << "config " << config_hash.substr(0, 16) << "  weights=(" << join_ints(config.weights) << ") q=" << config.q
       << "\n";
    for (auto& n : notes) os << "note: " << n << "\n";
    for (auto& e : entries) {
        os << std::left << std::setw(12) << e.verdict << e.inst.label();
        if (!e.central_note.empty()) os << "  [central]";
        os << "\n";
        if (!e.witness.empty()) os << "    " << e.witness << "\n";
    }
    os << "total " << entries.size() << "  pass " << count("pass") << "  fail " << count("fail") << "  unsupported "
       << count("unsupported") << "\n";
    return os.str();
}

Report run_suite(const Config& cfg) {
    cfg.validate();
    Report R;
    R.config = cfg;
    R.config_hash = cfg.hash();
    R.notes = {
        "eta elements use the vertex index j in both the power of v and in M_{j+1, delta - e_j}",
        "an ordinary point of degree d contributes to T_r only when d divides r",
        "verdicts compare exact normal forms; 'central' marks equality only after K_delta -> 1",
    };
    ModelOptions opt;
    opt.rank2 = cfg.rank2_enabled();
    opt.enum_cap = cfg.enum_cap;
    opt.section_cap = cfg.section_cap;
    WeightData w(cfg.weights, cfg.q, cfg.lambdas);
    CohModel M(w, opt);
    DoubleAlgebra D(M);
    Generators G(D);

    std::vector<Instance> todo;
    for (auto& id : expand_selection(cfg.relations.empty() ? std::vector<std::string>{"all"} : cfg.relations))
        for (auto& I : instantiate(id, G, cfg)) todo.push_back(I);

    std::map<std::string, ReportEntry> cached;
    const bool use_cache = !cfg.cache_dir.empty();
    if (use_cache) {
        json payload;
        if (read_cache(cfg.cache_dir, R.config_hash, "verdicts", payload)) {
            try {
                for (auto& j : payload) {
                    ReportEntry e;
                    e.verdict = j.at("verdict");
                    e.witness = j.at("witness");
                    e.central_note = j.at("central_note");
                    if (e.verdict != "pass" && e.verdict != "fail" && e.verdict != "unsupported")
                        throw std::runtime_error("bad verdict");
                    cached[j.at("label").get<std::string>()] = e;
                }
            } catch (const std::exception&) {
                cached.clear();
            }
        }
        if (read_cache(cfg.cache_dir, R.config_hash, "straighten", payload)) {
            try {
                std::vector<std::tuple<SheafKey, SheafKey, DoubleElement>> rows;
                for (auto& t : payload)
                    rows.emplace_back(key_from_json(t.at(0)), key_from_json(t.at(1)), element_from_json(t.at(2), cfg.q));
                for (auto& [a, b, x] : rows) D.preload_straighten(a, b, std::move(x));
            } catch (const std::exception&) {
                // an unreadable table is ignored; entries are recomputed on demand
            }
        }
    }

    R.entries.resize(todo.size());
    std::vector<char> done(todo.size(), 0);
    for (size_t i = 0; i < todo.size(); ++i) {
        auto it = cached.find(todo[i].label());
        if (it == cached.end()) continue;
        R.entries[i] = it->second;
        R.entries[i].inst = todo[i];
        done[i] = 1;
        ++R.cache_hits;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i; (i = next.fetch_add(1)) < todo.size();)
            if (!done[i]) R.entries[i] = judge(G, todo[i]);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < cfg.jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    if (use_cache) {
        json v = json::array();
        for (auto& e : R.entries)
            v.push_back({{"label", e.inst.label()}, {"verdict", e.verdict}, {"witness", e.witness},
                         {"central_note", e.central_note}});
        write_cache(cfg.cache_dir, R.config_hash, "verdicts", v);
        json s = json::array();
        for (auto& [a, b, x] : D.straighten_table()) s.push_back({key_to_json(a), key_to_json(b), element_to_json(x)});
        write_cache(cfg.cache_dir, R.config_hash, "straighten", s);
    }
    return R;
}

}  // namespace hallcoh
