#pragma once

// fibercurve command line: argument handling, disk cache and the verify battery.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fibercurve/fibercurve.hpp"

namespace fibercurve::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerification = 1;
inline constexpr int kExitUsage = 2;

inline constexpr int kCacheSchema = 1;
inline constexpr std::uint64_t kMaxVerifyPrime = 1000;
inline constexpr std::uint64_t kMaxLedgerPrime = 500;
inline constexpr std::uint64_t kMaxSupersingularCheckPrime = 100;
inline constexpr std::uint64_t kMaxOrbitConstancyPrime = 103;
inline constexpr std::size_t kQuotientSamples = 200;

struct Result {
    int code = kExitOk;
    std::string out;
    std::string err;
};

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Cache: one JSON file per (subcommand, selector, p) holding rendered outputs
// by format, tagged with a schema version and the input fingerprint.

class Cache {
public:
    explicit Cache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {}

    std::optional<std::string> lookup(const json& fingerprint, const std::string& format) const {
        if (!dir_) return std::nullopt;
        const auto entry = load(fingerprint);
        if (!entry || !entry->at("outputs").contains(format)) return std::nullopt;
        return entry->at("outputs").at(format).get<std::string>();
    }

    void store(const json& fingerprint, const std::string& format, const std::string& output) const {
        if (!dir_) return;
        json entry = load(fingerprint).value_or(json{{"schema", kCacheSchema}, {"fingerprint", fingerprint}, {"outputs", json::object()}});
        entry["outputs"][format] = output;
        std::filesystem::create_directories(*dir_);
        const auto target = path_for(fingerprint);
        static std::atomic<std::uint64_t> counter{0};
        const auto tmp = target.string() + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            f << entry.dump(1) << "\n";
            if (!f) throw std::runtime_error("cannot write cache file " + tmp);
        }
        std::filesystem::rename(tmp, target);
    }

private:
    std::filesystem::path path_for(const json& fp) const {
        std::string name = fp.at("subcommand").get<std::string>() + "-" + fp.at("selector").get<std::string>() + "-" +
                           std::to_string(fp.at("p").get<std::uint64_t>()) + ".json";
        return *dir_ / name;
    }

    std::optional<json> load(const json& fingerprint) const {
        std::ifstream f(path_for(fingerprint), std::ios::binary);
        if (!f) return std::nullopt;
        try {
            json entry = json::parse(f);
            // Stale schema or different inputs: recompute, never reinterpret.
            if (entry.at("schema") != kCacheSchema || entry.at("fingerprint") != fingerprint) return std::nullopt;
            if (!entry.at("outputs").is_object()) return std::nullopt;
            return entry;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }

    std::optional<std::filesystem::path> dir_;
};

// ---------------------------------------------------------------------------
// Renderers

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::optional<std::pair<ProjPoint, ProjPoint>> parse_orbit_pair(const std::string& s, std::uint64_t p) {
    if (s.empty()) return std::nullopt;
    const auto comma = s.find(',');
    detail::require(comma != std::string::npos, "--orbit-pair expects R1,R2");
    auto point = [&](const std::string& t) {
        if (t == "inf" || t == "oo") return ProjPoint::infinity();
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(t, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        detail::require(used == t.size() && !t.empty() && v < p, "orbit representative '" + t + "' is not in P^1(F_p)");
        return ProjPoint::finite(static_cast<std::uint32_t>(v));
    };
    return std::make_pair(point(s.substr(0, comma)), point(s.substr(comma + 1)));
}

inline std::string render_fiber(Family f, std::uint64_t p, const std::string& format) {
    FiberGraph g = special_fiber(f, p);
    if (is_cartan(f) && p <= kMaxLedgerPrime) g = with_genus_ledger(std::move(g));
    if (format == "dot") return to_dot(g);
    if (format == "text") return to_text(g);
    return dump(to_json(g));
}

inline std::string render_exceptional_drinfeld(ExceptionalKind k, std::uint64_t p,
                                               std::optional<std::pair<ProjPoint, ProjPoint>> pair,
                                               const std::string& format) {
    const auto d = exceptional_drinfeld(k, p, pair);
    if (format == "text") return to_text(d.curve) + "\n";
    json j;
    j["group"] = to_string(k);
    j["p"] = p;
    j["orbit_pair"] = {d.first.to_string(), d.second ? json(d.second->to_string()) : json(nullptr)};
    j["equation"] = to_text(d.curve);
    j["genus"] = cyclic_cover_genus(d.curve);
    j["curve"] = to_json(d.curve);
    json bv = json::array();
    for (const auto& [v, iso] : d.branch_values) bv.push_back({{"value", v.to_string()}, {"isotropy", iso}});
    j["branch_values"] = bv;
    return dump(j);
}

inline std::string render_cartan_drinfeld(CartanFamily f, std::uint64_t p, const std::string& format) {
    require_family(family_of(f), p);
    const auto ss = supersingular_data(p);
    std::vector<int> es = ss.e;
    es.erase(std::unique(es.begin(), es.end()), es.end());
    std::string text;
    json comps = json::array();
    for (int e : es) {
        const auto c = cartan_drinfeld(f, p, e);
        const auto g = cyclic_cover_genus(c);
        text += "e=" + std::to_string(e) + "  " + to_text(c) + "  genus " + std::to_string(g) + "\n";
        comps.push_back({{"e", e}, {"equation", to_text(c)}, {"form", c.form_tag()}, {"genus", g}, {"curve", to_json(c)}});
    }
    if (format == "text") return text;
    json j;
    j["family"] = to_string(f);
    j["p"] = p;
    j["components"] = comps;
    return dump(j);
}

inline std::string render_orbits(ExceptionalKind k, std::uint64_t p, const std::string& format) {
    const auto t = orbit_table(k, p);
    if (format == "text") {
        std::string s = to_string(k) + " orbits on P^1(F_" + std::to_string(p) + "): N_p = " +
                        std::to_string(t.orbit_count) + "\n";
        for (const auto& e : t.entries) {
            s += "  " + (e.label.empty() ? std::string("generic") : e.label) + "  size " +
                 std::to_string(e.orbit.size()) + "  isotropy " + std::to_string(e.orbit.isotropy) + "  rep " +
                 e.orbit.representative().to_string() + "\n";
        }
        return s;
    }
    json j;
    j["group"] = to_string(k);
    j["p"] = p;
    j["N_p"] = t.orbit_count;
    j["exceptional"] = t.exceptional;
    json os = json::array();
    for (const auto& e : t.entries) {
        json pts = json::array();
        for (const auto& P : e.orbit.points) pts.push_back(P.to_string());
        os.push_back({{"label", e.label}, {"size", e.orbit.size()}, {"isotropy", e.orbit.isotropy}, {"points", pts}});
    }
    j["orbits"] = os;
    return dump(j);
}

/// Returns the rendering and whether every check it carries passed.
inline std::pair<std::string, bool> render_neron(CartanFamily f, std::uint64_t p, const std::string& format) {
    const auto g = special_fiber(family_of(f), p);
    const auto inv = component_group(metrized_graph(g));
    std::optional<CorollaryCheck> cor;
    if (f == CartanFamily::NSPlus) cor = ns_plus_component_check(p);
    const bool ok = !cor || cor->passed;
    if (format == "text") {
        std::string s = "component group of X_" + to_string(f) + "(" + std::to_string(p) + "): " + inv.to_string() + "\n";
        if (cor)
            s += "expected " + cor->formula + ": " + cor->expected.to_string() + (cor->passed ? "  ok" : "  MISMATCH") + "\n";
        return {s, ok};
    }
    json j;
    j["family"] = to_string(f);
    j["p"] = p;
    j["invariants"] = to_json(inv);
    j["order"] = inv.order().str();
    if (cor) {
        j["expected"] = to_json(cor->expected);
        j["formula"] = cor->formula;
        j["vacuous"] = cor->vacuous;
        j["passed"] = cor->passed;
    }
    return {dump(j), ok};
}

// ---------------------------------------------------------------------------
// verify --suite paper

enum class Status { Pass, Fail, Skip };

struct CheckOutcome {
    Status status = Status::Skip;
    std::string detail;
};

inline CheckOutcome pass() { return {Status::Pass, ""}; }
inline CheckOutcome skip() { return {Status::Skip, ""}; }
inline CheckOutcome fail(std::string why) { return {Status::Fail, std::move(why)}; }
inline CheckOutcome check(bool ok, std::string why) { return ok ? pass() : fail(std::move(why)); }

struct WorkedEquation {
    ExceptionalKind kind;
    std::uint64_t p;
    const char* printed;
};

inline const std::vector<WorkedEquation>& worked_equations() {
    static const std::vector<WorkedEquation> w{
        {ExceptionalKind::A4, 13, "u^7 =t^5 (t-1)^5"},
        {ExceptionalKind::A4, 103, "u^{52} =t^{35} (t-3) (t+3)(t+1)(t-22)(t-39)(t+14)(t+39)(t-10)"},
        {ExceptionalKind::S4, 73, "u^{37} =(t+25)^{28} (t-14)^{25} t^{19} (t+15)"},
        {ExceptionalKind::A5, 421, "u^{211} =t (t-23)^{106} (t-47) (t-144)^{141} (t-161) (t-228) (t-292) (t-317)^{169}"},
    };
    return w;
}

/// Canonical text matches, exponent * isotropy = 1 mod N on every finite
/// branch value, and one branch value per orbit.
inline CheckOutcome check_worked_equation(const WorkedEquation& w) {
    const auto d = exceptional_drinfeld(w.kind, w.p);
    const auto expected = curve_from_text(static_cast<std::uint32_t>(w.p), w.printed);
    if (to_text(d.curve) != to_text(expected))
        return fail("got " + to_text(d.curve) + ", expected " + to_text(expected));
    for (const auto& [v, iso] : d.branch_values) {
        if (v.is_infinity()) continue;
        const auto it = std::find_if(d.curve.branches.begin(), d.curve.branches.end(),
                                     [&](const Branch& b) { return b.root == v.value(); });
        if (it == d.curve.branches.end()) return fail("branch value " + v.to_string() + " missing");
        if ((it->exponent * iso) % d.curve.N != 1 % d.curve.N) return fail("exponent * isotropy != 1 at " + v.to_string());
    }
    const auto np = orbit_table_row(w.kind, w.p).orbit_count(w.p);
    return check(d.branch_values.size() == np, "branch count " + std::to_string(d.branch_values.size()) +
                                                   " != N_p = " + std::to_string(np));
}

struct SuiteCheck {
    std::string name;
    CheckOutcome (*run)(std::uint64_t p);
};

inline const std::vector<SuiteCheck>& paper_suite() {
    static const std::vector<SuiteCheck> s{
        {"worked-equation",
         [](std::uint64_t p) {
             for (const auto& w : worked_equations())
                 if (w.p == p) return check_worked_equation(w);
             return skip();
         }},
        {"orbit-table",
         [](std::uint64_t p) {
             bool any = false;
             for (auto k : {ExceptionalKind::A4, ExceptionalKind::S4, ExceptionalKind::A5}) {
                 if (!exceptional_admissible(k, p)) continue;
                 orbit_table(k, p); // throws on disagreement with the table row
                 any = true;
             }
             return any ? pass() : skip();
         }},
        {"phi-orbit-constancy",
         [](std::uint64_t p) {
             if (p > kMaxOrbitConstancyPrime) return skip();
             bool any = false;
             for (auto k : {ExceptionalKind::A4, ExceptionalKind::S4, ExceptionalKind::A5}) {
                 if (!exceptional_admissible(k, p) || orbit_table_row(k, p).orbit_count(p) < 2) continue;
                 const auto r = phi_constant_on_orbits(k, p);
                 if (!r.constant) return fail(to_string(k) + ": " + r.witness);
                 any = true;
             }
             return any ? pass() : skip();
         }},
        {"point-count",
         [](std::uint64_t p) {
             if (p > kMaxPointCountPrime) return skip();
             const auto n = count_points_fp2(p, default_scale(p));
             const auto g = cyclic_cover_genus(drinfeld_model_curve(static_cast<std::uint32_t>(p)));
             return check(n == p * p * p + 1 && n == 1 + p * p + 2 * p * g,
                          "count " + std::to_string(n) + ", genus " + std::to_string(g));
         }},
        {"quotient-maps",
         [](std::uint64_t p) {
             if (p > kMaxPointCountPrime) return skip();
             for (auto f : {CartanFamily::NS, CartanFamily::NSPlus, CartanFamily::S, CartanFamily::SPlus}) {
                 const auto r = verify_quotient_maps(f, p, kQuotientSamples);
                 if (!r.passed) return fail(to_string(f) + ": " + r.witness);
             }
             return pass();
         }},
        {"genus-oracle-ns+",
         [](std::uint64_t p) {
             if (p > kMaxLedgerPrime) return skip();
             const auto g = static_cast<std::int64_t>(cartan_genus(CartanFamily::NSPlus, p));
             const auto q = static_cast<std::int64_t>(p);
             if (p == 13) return check(g == 3, "g = " + std::to_string(g));
             if (p % 12 == 5) return check(g * 24 == (q - 5) * (q - 5), "g = " + std::to_string(g));
             return skip();
         }},
        {"toric-rank",
         [](std::uint64_t p) {
             for (auto f : {Family::NS, Family::NSPlus, Family::S, Family::SPlus}) {
                 const auto g = special_fiber(f, p);
                 const auto rule = toric_rank_closed_form(f, p);
                 if (*g.toric_rank != rule.value)
                     return fail(to_string(f) + ": " + std::to_string(*g.toric_rank) + " vs " + rule.formula);
             }
             return pass();
         }},
        {"genus-consistency",
         [](std::uint64_t p) {
             if (p > kMaxLedgerPrime) return skip();
             const auto r = consistency_report(CartanFamily::NS, p);
             return check(r.closes, r.problems.empty() ? "" : r.problems.front());
         }},
        {"component-group",
         [](std::uint64_t p) {
             const auto c = ns_plus_component_check(p);
             return check(c.passed, c.actual.to_string() + " vs " + c.expected.to_string());
         }},
        {"supersingular-oracle",
         [](std::uint64_t p) {
             if (p >= kMaxSupersingularCheckPrime) return skip();
             return check(supersingular_data(p) == supersingular_data_bruteforce(p), "closed form disagrees");
         }},
        {"cross-curve",
         [](std::uint64_t p) {
             if (p != 13) return skip();
             const auto a = special_fiber(Family::SPlus, p), b = special_fiber(Family::NSPlus, p);
             for (const auto* g : {&a, &b})
                 for (const auto& v : g->vertices)
                     if (v.role == ComponentRole::HorizontalDrinfeld &&
                         (v.genus != 3 || v.curve->form_tag() != "Y^2 = X(X^n + A)" || v.curve->n != 7))
                         return fail(v.name + " of " + to_string(g->family) + " is " + to_text(*v.curve));
             return pass();
         }},
    };
    return s;
}

inline std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& s) {
    const auto dots = s.find("..");
    detail::require(dots != std::string::npos, "--primes expects LO..HI");
    std::uint64_t lo = 0, hi = 0;
    try {
        std::size_t a = 0, b = 0;
        const std::string l = s.substr(0, dots), h = s.substr(dots + 2);
        lo = std::stoull(l, &a);
        hi = std::stoull(h, &b);
        detail::require(a == l.size() && b == h.size(), "--primes expects LO..HI");
    } catch (const std::invalid_argument&) {
        throw precondition_error("--primes expects LO..HI");
    } catch (const std::out_of_range&) {
        throw precondition_error("--primes bound out of range");
    }
    detail::require(lo < hi, "--primes range is empty");
    if (hi > kMaxVerifyPrime + 1)
        throw bound_error("--primes upper bound limited to " + std::to_string(kMaxVerifyPrime + 1));
    return {lo, hi};
}

inline Result run_verify(const std::string& suite, const std::string& range, unsigned jobs) {
    detail::require(suite == "paper", "unknown suite '" + suite + "'");
    const auto [lo, hi] = parse_range(range);
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p = std::max<std::uint64_t>(lo, 5); p < hi; ++p)
        if (is_prime(p)) primes.push_back(p);
    const auto& checks = paper_suite();

    struct Item {
        std::size_t check;
        std::uint64_t p;
        CheckOutcome outcome;
    };
    std::vector<Item> items;
    for (std::size_t c = 0; c < checks.size(); ++c)
        for (auto p : primes) items.push_back({c, p, {}});

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) {
            auto& it = items[i];
            try {
                it.outcome = checks[it.check].run(it.p);
            } catch (const std::exception& e) {
                it.outcome = fail(e.what());
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < std::max(1u, jobs); ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    Result r;
    std::ostringstream out;
    out << "suite paper, primes in [" << lo << ", " << hi << "): " << primes.size() << " primes\n";
    out << std::left;
    out.width(22);
    out << "check" << "  pass  fail  skip\n";
    std::size_t tp = 0, tf = 0, ts = 0;
    std::vector<std::string> failures;
    for (std::size_t c = 0; c < checks.size(); ++c) {
        std::size_t np = 0, nf = 0, ns = 0;
        for (const auto& it : items) {
            if (it.check != c) continue;
            switch (it.outcome.status) {
            case Status::Pass: ++np; break;
            case Status::Fail:
                ++nf;
                failures.push_back("FAIL " + checks[c].name + " p=" + std::to_string(it.p) + ": " + it.outcome.detail);
                break;
            case Status::Skip: ++ns; break;
            }
        }
        tp += np;
        tf += nf;
        ts += ns;
        char line[128];
        std::snprintf(line, sizeof line, "%-22s %5zu %5zu %5zu\n", checks[c].name.c_str(), np, nf, ns);
        out << line;
    }
    char line[128];
    std::snprintf(line, sizeof line, "%-22s %5zu %5zu %5zu\n", "total", tp, tf, ts);
    out << line;
    for (const auto& f : failures) out << f << "\n";
    out << "result: " << (tf == 0 ? "PASS" : "FAIL") << "\n";
    r.out = out.str();
    r.code = tf == 0 ? kExitOk : kExitVerification;
    return r;
}

// ---------------------------------------------------------------------------
// Entry point

/// Runs one command line (without the program name).  `cache_env` is the
/// value of FIBERCURVE_CACHE, which overrides --cache.
inline Result run(const std::vector<std::string>& args, std::optional<std::string> cache_env = std::nullopt) {
    CLI::App app{"Special fibers of modular curves of prime level", "fibercurve"};
    app.require_subcommand(1);

    std::string family, group, format = "json", cache_dir, orbit_pair, suite, primes;
    std::uint64_t prime = 0;
    unsigned jobs = 1;
    const std::vector<std::string> formats{"json", "dot", "text"};

    auto* fiber = app.add_subcommand("fiber", "special fiber atlas");
    fiber->add_option("--family", family, "ns | ns+ | s | s+ | a4 | s4 | a5")->required();
    fiber->add_option("--prime", prime, "prime p > 3")->required();
    fiber->add_option("--format", format)->check(CLI::IsMember(formats));
    fiber->add_option("--cache", cache_dir);

    auto* drin = app.add_subcommand("drinfeld", "horizontal component equations");
    auto* fam_opt = drin->add_option("--family", family);
    auto* grp_opt = drin->add_option("--group", group, "a4 | s4 | a5");
    fam_opt->excludes(grp_opt);
    drin->add_option("--prime", prime)->required();
    drin->add_option("--orbit-pair", orbit_pair, "R1,R2");
    drin->add_option("--format", format)->check(CLI::IsMember(formats));
    drin->add_option("--cache", cache_dir);

    auto* orb = app.add_subcommand("orbits", "orbit table of an exceptional group");
    orb->add_option("--group", group)->required();
    orb->add_option("--prime", prime)->required();
    orb->add_option("--format", format)->check(CLI::IsMember(formats));
    orb->add_option("--cache", cache_dir);

    auto* ner = app.add_subcommand("neron", "component group of the Neron model");
    ner->add_option("--family", family, "ns+ | s+ | ns | s")->required();
    ner->add_option("--prime", prime)->required();
    ner->add_option("--format", format)->check(CLI::IsMember(formats));
    ner->add_option("--cache", cache_dir);

    auto* ver = app.add_subcommand("verify", "run a verification suite over a prime range");
    ver->add_option("--suite", suite)->required();
    ver->add_option("--primes", primes, "LO..HI, half-open")->required();
    ver->add_option("--jobs", jobs)->check(CLI::Range(1u, 256u));

    Result r;
    std::ostringstream out, err;
    std::vector<std::string> argv_store{"fibercurve"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        r.code = app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
        r.out = out.str();
        r.err = err.str();
        return r;
    }

    const std::optional<std::filesystem::path> dir =
        cache_env && !cache_env->empty() ? std::optional<std::filesystem::path>(*cache_env)
        : !cache_dir.empty()             ? std::optional<std::filesystem::path>(cache_dir)
                                         : std::nullopt;
    const Cache cache(dir);

    // Cached rendering: fingerprint covers every input except the format.
    auto cached = [&](const std::string& sub, const std::string& selector, const json& extra, auto compute) {
        const json fp{{"subcommand", sub}, {"selector", selector}, {"p", prime}, {"extra", extra}};
        if (auto hit = cache.lookup(fp, format)) return *hit;
        std::string rendered = compute();
        cache.store(fp, format, rendered);
        return rendered;
    };

    try {
        if (fiber->parsed()) {
            const Family f = parse_family(family);
            require_family(f, prime);
            r.out = cached("fiber", to_string(f), nullptr, [&] { return render_fiber(f, prime, format); });
        } else if (drin->parsed()) {
            detail::require(!family.empty() || !group.empty(), "drinfeld needs --family or --group");
            detail::require(format != "dot", "dot output is only available for fiber");
            const Family f = !group.empty() ? parse_family(group) : parse_family(family);
            detail::require(group.empty() || !is_cartan(f), "--group expects a4, s4 or a5");
            require_family(f, prime);
            if (is_cartan(f)) {
                detail::require(orbit_pair.empty(), "--orbit-pair applies to exceptional groups only");
                r.out = cached("drinfeld", to_string(f), nullptr,
                               [&] { return render_cartan_drinfeld(cartan_of(f), prime, format); });
            } else {
                const auto pair = parse_orbit_pair(orbit_pair, prime);
                const json extra = orbit_pair.empty() ? json(nullptr) : json(orbit_pair);
                r.out = cached("drinfeld", to_string(f), extra,
                               [&] { return render_exceptional_drinfeld(kind_of(f), prime, pair, format); });
            }
        } else if (orb->parsed()) {
            detail::require(format != "dot", "dot output is only available for fiber");
            const Family f = parse_family(group);
            detail::require(!is_cartan(f), "--group expects a4, s4 or a5");
            require_family(f, prime);
            r.out = cached("orbits", to_string(f), nullptr, [&] { return render_orbits(kind_of(f), prime, format); });
        } else if (ner->parsed()) {
            detail::require(format != "dot", "dot output is only available for fiber");
            const Family f = parse_family(family);
            detail::require(is_cartan(f), "neron expects ns, ns+, s or s+");
            require_family(f, prime);
            bool ok = true;
            r.out = cached("neron", to_string(f), nullptr, [&] {
                auto [s, good] = render_neron(cartan_of(f), prime, format);
                ok = good;
                return s;
            });
            // A cached rendering records its own verdict.
            if (r.out.find("MISMATCH") != std::string::npos || r.out.find("\"passed\": false") != std::string::npos)
                ok = false;
            if (!ok) r.code = kExitVerification;
        } else if (ver->parsed()) {
            return run_verify(suite, primes, jobs);
        }
    } catch (const verification_error& e) {
        r.code = kExitVerification;
        r.err = std::string("verification failed: ") + e.what() + "\n";
    } catch (const precondition_error& e) { // bound_error included
        r.code = kExitUsage;
        r.err = std::string("error: ") + e.what() + "\n";
    }
    return r;
}

} // namespace fibercurve::cli
