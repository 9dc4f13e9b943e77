#pragma once

// Scenario files and the built-in catalog.
//
// A scenario is a JSON object; integers may be given as JSON numbers or as
// decimal strings. See README.md for the field list.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dm_stacks.hpp"
#include "height_zeta.hpp"

namespace toricdual {

using json = nlohmann::ordered_json;

// Schema or parse failure; line is 0 when it could not be located.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string field, long line, const std::string& what)
        : std::runtime_error(what), field_(std::move(field)), line_(line) {}

    const std::string& field() const noexcept { return field_; }
    long line() const noexcept { return line_; }

private:
    std::string field_;
    long line_;
};

struct IsogenyBlock {
    Matrix inclusion; // rows: A[i][j], A : X_*(T) -> X_*(T')
};

struct HeightBlock {
    std::vector<Matrix> cones;
    Matrix slopes;
};

struct Scenario {
    std::string name;
    std::size_t rank = 0;
    Matrix rays;
    Vec rho, eta;
    Curve curve;
    long order = 8;
    long cyclotomic_order = 1;
    std::vector<CharacterSpec> characters;
    std::optional<IsogenyBlock> isogeny;
    std::optional<HeightBlock> height;
    std::vector<std::string> checks;

    bool has_cone() const { return !rays.empty(); }
};

inline const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> k{"weak_duality", "orbit_duality", "stack_duality", "height_bridge"};
    return k;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    [[noreturn]] void fail(const std::string& field, const std::string& what) const {
        long line = locate(field);
        throw ScenarioError(field, line, "field '" + field + "': " + what);
    }

    Int integer(const json& j, const std::string& field) const {
        if (j.is_number_integer()) return Int(j.get<long>());
        if (j.is_string()) {
            const std::string s = j.get<std::string>();
            Int v;
            if (s.empty() || v.set_str(s, 10) != 0) fail(field, "expected a decimal integer, got \"" + s + "\"");
            return v;
        }
        fail(field, std::string("expected an integer, got ") + j.type_name());
    }

    long small(const json& j, const std::string& field) const {
        Int v = integer(j, field);
        if (!v.fits_slong_p()) fail(field, "integer out of range");
        return v.get_si();
    }

    Vec vector(const json& j, const std::string& field, std::optional<std::size_t> len = {}) const {
        if (!j.is_array()) fail(field, std::string("expected an array of integers, got ") + j.type_name());
        if (len && j.size() != *len) fail(field, "expected " + std::to_string(*len) + " entries, got " + std::to_string(j.size()));
        Vec v;
        for (std::size_t i = 0; i < j.size(); ++i) v.push_back(integer(j[i], field + "[" + std::to_string(i) + "]"));
        return v;
    }

    Matrix matrix(const json& j, const std::string& field, std::size_t cols) const {
        if (!j.is_array()) fail(field, std::string("expected an array of vectors, got ") + j.type_name());
        Matrix m;
        for (std::size_t i = 0; i < j.size(); ++i) m.push_back(vector(j[i], field + "[" + std::to_string(i) + "]", cols));
        return m;
    }

    const json& require(const json& obj, const std::string& key, const std::string& prefix) const {
        if (!obj.contains(key)) fail(prefix + key, "missing");
        return obj.at(key);
    }

private:
    // Best effort: follow the keys of the field path through the text.
    long locate(const std::string& field) const {
        std::size_t pos = 0;
        bool found = false;
        std::string key;
        auto flush = [&] {
            if (key.empty()) return;
            std::size_t p = text_.find("\"" + key + "\"", pos);
            if (p != std::string::npos) {
                pos = p;
                found = true;
            }
            key.clear();
        };
        bool in_index = false;
        for (char c : field) {
            if (c == '[') {
                flush();
                in_index = true;
            } else if (c == ']') {
                in_index = false;
            } else if (c == '.') {
                flush();
            } else if (!in_index) {
                key += c;
            }
        }
        flush();
        if (!found) return 0;
        return 1 + static_cast<long>(std::count(text_.begin(), text_.begin() + static_cast<long>(pos), '\n'));
    }

    const std::string& text_;
};

} // namespace detail

inline Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        long line = 1 + static_cast<long>(std::count(text.begin(), text.begin() + static_cast<long>(std::min(e.byte, text.size())), '\n'));
        throw ScenarioError("", line, std::string("malformed JSON: ") + e.what());
    }
    detail::Reader rd(text);
    if (!j.is_object()) rd.fail("", "scenario must be a JSON object");
    static const std::vector<std::string> allowed{"name", "rank", "rays", "rho", "eta", "curve", "order", "cyclotomic_order",
                                                  "characters", "isogeny", "height", "checks"};
    for (const auto& [k, v] : j.items())
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) rd.fail(k, "unknown field");

    Scenario s;
    const json& name = rd.require(j, "name", "");
    if (!name.is_string()) rd.fail("name", "expected a string");
    s.name = name.get<std::string>();
    long rank = rd.small(rd.require(j, "rank", ""), "rank");
    if (rank < 1) rd.fail("rank", "rank must be positive");
    s.rank = static_cast<std::size_t>(rank);
    s.order = rd.small(rd.require(j, "order", ""), "order");
    if (s.order < 0) rd.fail("order", "truncation order must be nonnegative");
    if (j.contains("cyclotomic_order")) {
        s.cyclotomic_order = rd.small(j["cyclotomic_order"], "cyclotomic_order");
        if (s.cyclotomic_order < 1) rd.fail("cyclotomic_order", "must be positive");
    }

    if (j.contains("rays")) {
        s.rays = rd.matrix(j["rays"], "rays", s.rank);
        if (s.rays.empty()) rd.fail("rays", "a cone needs at least one ray");
        s.rho = rd.vector(rd.require(j, "rho", ""), "rho", s.rank);
        s.eta = rd.vector(rd.require(j, "eta", ""), "eta", s.rank);
    } else {
        for (const char* k : {"rho", "eta"})
            if (j.contains(k)) rd.fail(k, "given without rays");
    }

    const json& cv = rd.require(j, "curve", "");
    if (!cv.is_object()) rd.fail("curve", "expected an object");
    s.curve.q = rd.small(rd.require(cv, "q", "curve."), "curve.q");
    s.curve.genus = cv.contains("genus") ? rd.small(cv["genus"], "curve.genus") : 0;
    if (s.curve.genus != 0) rd.fail("curve.genus", "only genus 0 is supported");
    if (cv.contains("spin")) {
        const json& sp = cv["spin"];
        if (!sp.is_array()) rd.fail("curve.spin", "expected an array");
        for (std::size_t i = 0; i < sp.size(); ++i) {
            std::string f = "curve.spin[" + std::to_string(i) + "].";
            SpinEntry e;
            const json& pl = rd.require(sp[i], "place", f);
            if (!pl.is_string()) rd.fail(f + "place", "expected a string");
            e.place = pl.get<std::string>();
            e.degree = rd.small(rd.require(sp[i], "degree", f), f + "degree");
            e.m = rd.small(rd.require(sp[i], "m", f), f + "m");
            s.curve.spin.push_back(e);
        }
    } else {
        s.curve.spin = {{"inf", 1, -1}};
    }
    try {
        s.curve.validate();
    } catch (const DimensionMismatch& e) {
        rd.fail("curve", e.what());
    }

    const json& chars = rd.require(j, "characters", "");
    if (!chars.is_array() || chars.empty()) rd.fail("characters", "expected a nonempty array");
    for (std::size_t i = 0; i < chars.size(); ++i) {
        std::string f = "characters[" + std::to_string(i) + "].";
        const json& c = chars[i];
        if (!c.is_object()) rd.fail(f.substr(0, f.size() - 1), "expected an object");
        CharacterSpec spec;
        spec.name = c.contains("name") && c["name"].is_string() ? c["name"].get<std::string>() : "chi" + std::to_string(i);
        spec.cyclotomic_order = c.contains("cyclotomic_order") ? rd.small(c["cyclotomic_order"], f + "cyclotomic_order") : s.cyclotomic_order;
        if (spec.cyclotomic_order < 1) rd.fail(f + "cyclotomic_order", "must be positive");
        const json& coords = rd.require(c, "coordinates", f);
        if (!coords.is_array() || coords.size() != s.rank)
            rd.fail(f + "coordinates", "expected " + std::to_string(s.rank) + " coordinates");
        for (std::size_t k = 0; k < coords.size(); ++k) {
            std::string g = f + "coordinates[" + std::to_string(k) + "]";
            const json& x = coords[k];
            if (!x.is_object()) rd.fail(g, "expected {\"formal\": true} or {\"root\": k, \"u\": c}");
            if (x.contains("formal")) {
                if (!x["formal"].is_boolean() || !x["formal"].get<bool>() || x.size() != 1) rd.fail(g + ".formal", "expected exactly {\"formal\": true}");
                spec.coords.push_back({});
            } else {
                long root = x.contains("root") ? rd.small(x["root"], g + ".root") : 0;
                long u = x.contains("u") ? rd.small(x["u"], g + ".u") : 0;
                for (const auto& [key, v] : x.items())
                    if (key != "root" && key != "u") rd.fail(g + "." + key, "unknown field");
                spec.coords.push_back({false, mod_floor(root, spec.cyclotomic_order), u});
            }
        }
        s.characters.push_back(std::move(spec));
    }

    if (j.contains("isogeny")) {
        const json& iso = j["isogeny"];
        if (!iso.is_object()) rd.fail("isogeny", "expected an object");
        s.isogeny = IsogenyBlock{rd.matrix(rd.require(iso, "inclusion", "isogeny."), "isogeny.inclusion", s.rank)};
        if (s.isogeny->inclusion.size() != s.rank) rd.fail("isogeny.inclusion", "expected a square matrix of size rank");
        if (determinant(s.isogeny->inclusion) == 0) rd.fail("isogeny.inclusion", "matrix is singular");
    }

    if (j.contains("height")) {
        const json& h = j["height"];
        if (!h.is_object()) rd.fail("height", "expected an object");
        HeightBlock hb;
        const json& cones = rd.require(h, "cones", "height.");
        if (!cones.is_array() || cones.empty()) rd.fail("height.cones", "expected a nonempty array of ray lists");
        for (std::size_t i = 0; i < cones.size(); ++i) hb.cones.push_back(rd.matrix(cones[i], "height.cones[" + std::to_string(i) + "]", s.rank));
        hb.slopes = rd.matrix(rd.require(h, "slopes", "height."), "height.slopes", s.rank);
        if (hb.slopes.size() != hb.cones.size()) rd.fail("height.slopes", "expected one slope per cone");
        s.height = hb;
    }

    const json& checks = rd.require(j, "checks", "");
    if (!checks.is_array()) rd.fail("checks", "expected an array of strings");
    for (std::size_t i = 0; i < checks.size(); ++i) {
        std::string f = "checks[" + std::to_string(i) + "]";
        if (!checks[i].is_string()) rd.fail(f, "expected a string");
        std::string c = checks[i].get<std::string>();
        if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end()) rd.fail(f, "unknown check '" + c + "'");
        if ((c == "weak_duality" || c == "orbit_duality" || c == "stack_duality") && !s.has_cone()) rd.fail(f, c + " needs rays, rho and eta");
        if (c == "stack_duality" && !s.isogeny) rd.fail(f, "stack_duality needs an isogeny block");
        if (c == "height_bridge" && !s.height) rd.fail(f, "height_bridge needs a height block");
        s.checks.push_back(c);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Serialization (catalog emission and report echo)

inline json int_json(const Int& x) {
    if (x.fits_slong_p()) return x.get_si();
    return x.get_str();
}

inline json vec_json(const Vec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(int_json(x));
    return a;
}

inline json matrix_json(const Matrix& m) {
    json a = json::array();
    for (const auto& r : m) a.push_back(vec_json(r));
    return a;
}

inline json character_json(const CharacterSpec& c, long default_order) {
    json j;
    j["name"] = c.name;
    if (c.cyclotomic_order != default_order) j["cyclotomic_order"] = c.cyclotomic_order;
    json coords = json::array();
    for (const auto& x : c.coords) {
        if (x.formal) coords.push_back({{"formal", true}});
        else coords.push_back({{"root", x.root_exponent}, {"u", x.u_exponent}});
    }
    j["coordinates"] = coords;
    return j;
}

inline json scenario_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["rank"] = s.rank;
    if (s.has_cone()) {
        j["rays"] = matrix_json(s.rays);
        j["rho"] = vec_json(s.rho);
        j["eta"] = vec_json(s.eta);
    }
    json spin = json::array();
    for (const auto& e : s.curve.spin) spin.push_back({{"place", e.place}, {"degree", e.degree}, {"m", e.m}});
    j["curve"] = {{"q", s.curve.q}, {"genus", s.curve.genus}, {"spin", spin}};
    j["order"] = s.order;
    j["cyclotomic_order"] = s.cyclotomic_order;
    json chars = json::array();
    for (const auto& c : s.characters) chars.push_back(character_json(c, s.cyclotomic_order));
    j["characters"] = chars;
    if (s.isogeny) j["isogeny"] = {{"inclusion", matrix_json(s.isogeny->inclusion)}};
    if (s.height) {
        json cones = json::array();
        for (const auto& c : s.height->cones) cones.push_back(matrix_json(c));
        j["height"] = {{"cones", cones}, {"slopes", matrix_json(s.height->slopes)}};
    }
    j["checks"] = s.checks;
    return j;
}

// ---------------------------------------------------------------------------
// Catalog

struct CatalogEntry {
    std::string name;
    std::string summary;
};

inline std::vector<CatalogEntry> catalog_entries() {
    return {
        {"tate", "A^1 with T = G_m, self-dual"},
        {"orthant_a2", "A^2, the positive orthant in rank 2"},
        {"quadric_cone", "cone on (1,0), (1,2); the A_1 surface singularity"},
        {"quadric_cone_eta21", "quadric cone with eta = (2,1), epsilon = 3"},
        {"square_cone_3d", "cone over a unit square, non-simplicial"},
        {"weight_n_stack", "A^1 covering [A^1 / mu_n], n from --n (default 2)"},
        {"weight_2_stack", "weight_n_stack with n = 2"},
        {"weight_3_stack", "weight_n_stack with n = 3"},
        {"height_p1", "complete fan of P^1 with height |x|"},
    };
}

// Smallest prime power q with q = 1 mod n.
inline long default_stack_q(long n) {
    for (long q = 2;; ++q)
        if (is_prime_power(q) && (q - 1) % n == 0) return q;
}

struct CatalogOptions {
    std::optional<long> q{}, order{}, n{};
};

inline CharacterSpec formal_spec(std::size_t r, long N = 1) {
    CharacterSpec c = CharacterSpec::make_formal(r);
    c.cyclotomic_order = N;
    return c;
}

inline Scenario catalog_scenario(const std::string& name, const CatalogOptions& opt = {}) {
    Scenario s;
    s.curve = Curve::p1(2);
    auto finish = [&](long q, long U) {
        s.curve = Curve::p1(opt.q.value_or(q));
        s.order = opt.order.value_or(U);
        return s;
    };
    auto mat = [](std::initializer_list<std::initializer_list<long>> rows) {
        Matrix m;
        for (auto r : rows) m.push_back(vec(r));
        return m;
    };
    if (name == "tate") {
        s.name = name;
        s.rank = 1;
        s.rays = mat({{1}});
        s.rho = vec({1});
        s.eta = vec({1});
        s.characters = {formal_spec(1), CharacterSpec::make_specialized(1, {0}, {-1}, "zu=1")};
        s.height = HeightBlock{{mat({{1}})}, mat({{1}})};
        s.checks = {"weak_duality", "orbit_duality", "height_bridge"};
        return finish(2, 16);
    }
    if (name == "orthant_a2") {
        s.name = name;
        s.rank = 2;
        s.rays = mat({{1, 0}, {0, 1}});
        s.rho = vec({1, 1});
        s.eta = vec({1, 1});
        CharacterSpec spec{"z1=u^-1", 1, {{false, 0, -1}, {}}};
        s.characters = {formal_spec(2), spec};
        s.height = HeightBlock{{mat({{1, 0}, {0, 1}})}, mat({{1, 1}})};
        s.checks = {"weak_duality", "orbit_duality", "height_bridge"};
        return finish(2, 10);
    }
    if (name == "quadric_cone" || name == "quadric_cone_eta21") {
        s.name = name;
        s.rank = 2;
        s.rays = mat({{1, 0}, {1, 2}});
        s.rho = vec({1, 1});
        if (name == "quadric_cone") {
            s.eta = vec({1, 1});
            CharacterSpec spec{"z1=u^-1", 1, {{false, 0, -1}, {}}};
            s.characters = {formal_spec(2), spec};
            s.checks = {"weak_duality", "orbit_duality"};
        } else {
            s.eta = vec({2, 1});
            s.characters = {formal_spec(2)};
            s.checks = {"weak_duality", "orbit_duality"};
        }
        return finish(2, 10);
    }
    if (name == "square_cone_3d") {
        s.name = name;
        s.rank = 3;
        s.rays = mat({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}});
        s.rho = vec({1, 1, 3});
        s.eta = vec({0, 0, 1});
        s.characters = {formal_spec(3)};
        s.checks = {"weak_duality", "orbit_duality"};
        return finish(2, 10);
    }
    if (name == "weight_n_stack" || name == "weight_2_stack" || name == "weight_3_stack") {
        long n = name == "weight_2_stack" ? 2 : name == "weight_3_stack" ? 3 : opt.n.value_or(2);
        if (n < 1) throw std::invalid_argument("weight must be positive");
        s.name = "weight_" + std::to_string(n) + "_stack";
        s.rank = 1;
        s.rays = mat({{1}});
        s.rho = vec({1});
        s.eta = vec({1});
        s.cyclotomic_order = n;
        s.characters = {formal_spec(1, n)};
        s.isogeny = IsogenyBlock{mat({{n}})};
        s.checks = {"weak_duality", "stack_duality"};
        return finish(default_stack_q(n), 10);
    }
    if (name == "height_p1") {
        s.name = name;
        s.rank = 1;
        s.characters = {formal_spec(1)};
        s.height = HeightBlock{{mat({{1}}), mat({{-1}})}, mat({{1}, {-1}})};
        s.checks = {"height_bridge"};
        return finish(2, 8);
    }
    throw std::invalid_argument("unknown catalog entry '" + name + "'");
}

} // namespace toricdual
