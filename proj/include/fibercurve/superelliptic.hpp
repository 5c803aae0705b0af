#pragma once

// Cyclic covers u^N = prod (t - c_i)^{m_i} and the closed hyperelliptic forms.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "modular.hpp"

namespace fibercurve {

enum class CurveForm {
    Cyclic,          // u^N = prod (t - c)^m
    PowerPlusOne,    // U^2 = V^n + 1
    XTimesPowerPlusOne, // Y^2 = X(X^n + 1)
    ProjectiveLine,
};

struct Branch {
    std::uint32_t root;
    std::uint64_t exponent;
    friend bool operator==(const Branch&, const Branch&) = default;
};

struct SuperellipticCurve {
    std::uint32_t p = 0;
    std::uint64_t N = 0;
    std::vector<Branch> branches; // sorted by root; only for CurveForm::Cyclic
    CurveForm form = CurveForm::Cyclic;
    std::uint64_t n = 0; // the exponent n of the closed forms

    static SuperellipticCurve cyclic(std::uint32_t p, std::uint64_t N, std::vector<Branch> br) {
        detail::require(N >= 2, "cover degree must be at least 2");
        std::sort(br.begin(), br.end(), [](const Branch& a, const Branch& b) { return a.root < b.root; });
        for (std::size_t i = 0; i < br.size(); ++i) {
            detail::require(br[i].root < p, "branch root out of range");
            detail::require(br[i].exponent >= 1 && br[i].exponent < N, "branch exponent must lie in [1, N)");
            detail::require(i == 0 || br[i].root != br[i - 1].root, "branch roots must be distinct");
        }
        SuperellipticCurve c;
        c.p = p;
        c.N = N;
        c.branches = std::move(br);
        return c;
    }
    static SuperellipticCurve closed(std::uint32_t p, CurveForm f, std::uint64_t n) {
        SuperellipticCurve c;
        c.p = p;
        c.N = f == CurveForm::ProjectiveLine ? 1 : 2;
        c.form = f;
        c.n = n;
        return c;
    }

    /// Exponents of the (geometric) branch points over the affine line.  The
    /// closed forms have only simple roots: n of them for V^n + 1, n + 1 for
    /// X(X^n + 1).
    std::vector<std::uint64_t> exponents() const {
        switch (form) {
        case CurveForm::Cyclic: {
            std::vector<std::uint64_t> e;
            for (const auto& b : branches) e.push_back(b.exponent);
            return e;
        }
        case CurveForm::PowerPlusOne: return std::vector<std::uint64_t>(n, 1);
        case CurveForm::XTimesPowerPlusOne: return std::vector<std::uint64_t>(n + 1, 1);
        case CurveForm::ProjectiveLine: return {};
        }
        return {};
    }

    /// Symbolic tag of the closed form, empty for cyclic covers.
    std::string form_tag() const {
        switch (form) {
        case CurveForm::Cyclic: return "";
        case CurveForm::PowerPlusOne: return "U^2 = V^n + A";
        case CurveForm::XTimesPowerPlusOne: return "Y^2 = X(X^n + A)";
        case CurveForm::ProjectiveLine: return "P^1";
        }
        return "";
    }

    friend bool operator==(const SuperellipticCurve&, const SuperellipticCurve&) = default;
};

inline std::uint64_t cyclic_cover_genus(std::uint64_t N, const std::vector<std::uint64_t>& exps) {
    if (N == 1) return 0;
    std::uint64_t g = N;
    std::uint64_t total = 0;
    for (auto m : exps) {
        g = std::gcd(g, m);
        total += m;
    }
    detail::require(g == 1, "reducible cover: gcd of N and all exponents is " + std::to_string(g));
    // 2g - 2 = -2N + sum (N - gcd(N, m_i)) + (N - gcd(N, sum m_i))
    std::int64_t twice = -2 * static_cast<std::int64_t>(N);
    for (auto m : exps) twice += static_cast<std::int64_t>(N - std::gcd(N, m));
    twice += static_cast<std::int64_t>(N - std::gcd(N, total));
    detail::verify(twice >= -2 && twice % 2 == 0, "Riemann-Hurwitz gave a non-integral genus");
    return static_cast<std::uint64_t>((twice + 2) / 2);
}

inline std::uint64_t cyclic_cover_genus(const SuperellipticCurve& c) {
    if (c.form == CurveForm::ProjectiveLine) return 0;
    return cyclic_cover_genus(c.N, c.exponents());
}

/// u^{p+1} = t^p - t, the affine chart y = 1 of x^p y - x y^p = z^{p+1}.
inline SuperellipticCurve drinfeld_model_curve(std::uint32_t p) {
    std::vector<Branch> br;
    for (std::uint32_t c = 0; c < p; ++c) br.push_back({c, 1});
    return SuperellipticCurve::cyclic(p, p + 1, std::move(br));
}

inline std::string to_text(const SuperellipticCurve& c) {
    switch (c.form) {
    case CurveForm::PowerPlusOne: return "U^2 = V^" + std::to_string(c.n) + " + 1";
    case CurveForm::XTimesPowerPlusOne:
        return c.n == 1 ? "Y^2 = X(X + 1)" : "Y^2 = X(X^" + std::to_string(c.n) + " + 1)";
    case CurveForm::ProjectiveLine: return "P^1";
    case CurveForm::Cyclic: break;
    }
    std::string s = "u^" + std::to_string(c.N) + " =";
    if (c.branches.empty()) return s + " 1";
    for (const auto& b : c.branches) {
        s += " ";
        s += b.root == 0 ? "t" : "(t-" + std::to_string(b.root) + ")";
        if (b.exponent > 1) s += "^" + std::to_string(b.exponent);
    }
    return s;
}

inline nlohmann::ordered_json to_json(const SuperellipticCurve& c) {
    nlohmann::ordered_json j;
    j["p"] = c.p;
    j["N"] = c.N;
    if (c.form == CurveForm::Cyclic) {
        auto f = nlohmann::ordered_json::array();
        for (const auto& b : c.branches) f.push_back({b.root, b.exponent});
        j["factors"] = f;
    } else {
        j["form"] = c.form_tag();
        j["n"] = c.n;
        j["A"] = 1;
    }
    return j;
}

inline SuperellipticCurve curve_from_json(const nlohmann::ordered_json& j) {
    const auto p = j.at("p").get<std::uint32_t>();
    if (!j.contains("form")) {
        std::vector<Branch> br;
        for (const auto& f : j.at("factors")) br.push_back({f.at(0).get<std::uint32_t>(), f.at(1).get<std::uint64_t>()});
        return SuperellipticCurve::cyclic(p, j.at("N").get<std::uint64_t>(), std::move(br));
    }
    const auto tag = j.at("form").get<std::string>();
    const auto n = j.at("n").get<std::uint64_t>();
    if (tag == "U^2 = V^n + A") return SuperellipticCurve::closed(p, CurveForm::PowerPlusOne, n);
    if (tag == "Y^2 = X(X^n + A)") return SuperellipticCurve::closed(p, CurveForm::XTimesPowerPlusOne, n);
    if (tag == "P^1") return SuperellipticCurve::closed(p, CurveForm::ProjectiveLine, n);
    throw precondition_error("unknown curve form '" + tag + "'");
}

/// Parses "u^N = t^a (t-c)^b (t+d) ..." as printed by hand: exponents may be
/// braced, shifts may be negative or exceed p, and TeX spacing or a trailing
/// period is ignored.  Roots are reduced mod p.
inline SuperellipticCurve curve_from_text(std::uint32_t p, const std::string& text) {
    std::string s;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\\' && i + 1 < text.size() && text[i + 1] == ',') {
            ++i;
            continue;
        }
        if (text.compare(i, 3, "\xe2\x88\x92") == 0) { // U+2212 minus sign
            s += '-';
            i += 2;
            continue;
        }
        if (c == ' ' || c == '{' || c == '}' || c == '.' || c == '\t') continue;
        s += c;
    }
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) -> SuperellipticCurve {
        throw precondition_error("cannot parse curve '" + text + "': " + why);
    };
    auto number = [&]() {
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) fail("expected a number at offset " + std::to_string(start));
        return std::stoull(s.substr(start, pos - start));
    };
    auto expect = [&](char c) {
        if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
        ++pos;
    };
    auto exponent = [&]() -> std::uint64_t {
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            return number();
        }
        return 1;
    };
    expect('u');
    expect('^');
    const std::uint64_t N = number();
    expect('=');
    std::vector<Branch> br;
    while (pos < s.size()) {
        std::int64_t root = 0;
        if (s[pos] == 't') {
            ++pos;
        } else {
            expect('(');
            expect('t');
            if (pos >= s.size() || (s[pos] != '-' && s[pos] != '+')) fail("expected a sign after t");
            const bool minus = s[pos++] == '-';
            const auto c = static_cast<std::int64_t>(number() % p);
            root = minus ? c : (static_cast<std::int64_t>(p) - c) % p;
            expect(')');
        }
        br.push_back({static_cast<std::uint32_t>(root), exponent()});
    }
    return SuperellipticCurve::cyclic(p, N, std::move(br));
}

} // namespace fibercurve
