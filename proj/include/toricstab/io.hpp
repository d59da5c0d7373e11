#pragma once

// JSON bundle documents in, JSON values out. Rationals travel as integers or
// "p/q" strings; floating-point literals are rejected on input and never
// produced on output.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "toricstab/errors.hpp"
#include "toricstab/exactla.hpp"
#include "toricstab/fan.hpp"
#include "toricstab/klyachko.hpp"
#include "toricstab/parliament.hpp"
#include "toricstab/stability.hpp"

namespace toricstab {

inline constexpr int kSchemaVersion = 1;

struct LocatedError {
    std::string path;
    std::string message;
};

/// All problems found in a document, each with a JSON path.
class ParseError : public InputError {
public:
    explicit ParseError(std::vector<LocatedError> errors) : InputError(summarize(errors)), errors_(std::move(errors)) {}
    const std::vector<LocatedError>& errors() const noexcept { return errors_; }

private:
    static std::string summarize(const std::vector<LocatedError>& errors) {
        std::string s;
        for (const auto& e : errors) s += (s.empty() ? "" : "\n") + e.path + ": " + e.message;
        return s;
    }
    std::vector<LocatedError> errors_;
};

struct PolarizationSpec {
    std::optional<RatVector> weights;
    std::optional<RatVector> divisor;
};

struct BundleDocument {
    std::optional<std::string> name;
    Fan fan;
    std::optional<ToricBundle> bundle;
    std::optional<PolarizationSpec> polarization;
};

namespace detail {

class Reader {
public:
    std::vector<LocatedError> errors;

    void fail(const std::string& path, const std::string& msg) { errors.push_back({path, msg}); }

    bool object(const nlohmann::json& j, const std::string& path, std::initializer_list<const char*> allowed) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return false;
        }
        for (const auto& [k, v] : j.items()) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok) fail(path + "." + k, "unknown field");
        }
        return true;
    }

    const nlohmann::json* field(const nlohmann::json& j, const std::string& path, const char* key, bool required = true) {
        if (!j.is_object()) return nullptr;
        auto it = j.find(key);
        if (it == j.end()) {
            if (required) fail(path + "." + key, "missing field");
            return nullptr;
        }
        return &*it;
    }

    std::optional<Rational> rational(const nlohmann::json& j, const std::string& path) {
        if (j.is_number_integer()) return Rational(j.dump());
        if (j.is_string()) {
            try {
                return parse_rational(j.get<std::string>());
            } catch (const InputError& e) {
                fail(path, e.what());
                return std::nullopt;
            }
        }
        if (j.is_number_float()) fail(path, "floating-point numbers are not accepted; use an integer or a \"p/q\" string");
        else fail(path, "expected an integer or a \"p/q\" string");
        return std::nullopt;
    }

    std::optional<Integer> integer(const nlohmann::json& j, const std::string& path) {
        auto q = rational(j, path);
        if (!q) return std::nullopt;
        if (q->get_den() != 1) {
            fail(path, "expected an integer");
            return std::nullopt;
        }
        return q->get_num();
    }

    std::optional<std::size_t> index(const nlohmann::json& j, const std::string& path) {
        if (!j.is_number_integer() || j.get<long long>() < 0) {
            fail(path, "expected a nonnegative integer");
            return std::nullopt;
        }
        return j.get<std::size_t>();
    }

    template <class T, class F>
    std::optional<std::vector<T>> list(const nlohmann::json& j, const std::string& path, F&& item) {
        if (!j.is_array()) {
            fail(path, "expected an array");
            return std::nullopt;
        }
        std::vector<T> out;
        bool ok = true;
        for (std::size_t k = 0; k < j.size(); ++k) {
            auto x = item(j[k], path + "[" + std::to_string(k) + "]");
            if (x) out.push_back(std::move(*x));
            else ok = false;
        }
        if (!ok) return std::nullopt;
        return out;
    }

    std::optional<RatVector> rat_vector(const nlohmann::json& j, const std::string& path) {
        return list<Rational>(j, path, [&](const nlohmann::json& x, const std::string& p) { return rational(x, p); });
    }

    std::optional<IntVector> int_vector(const nlohmann::json& j, const std::string& path) {
        return list<Integer>(j, path, [&](const nlohmann::json& x, const std::string& p) { return integer(x, p); });
    }
};

inline std::optional<Fan> read_fan(Reader& rd, const nlohmann::json& j, const std::string& path) {
    if (!rd.object(j, path, {"dim", "rays", "max_cones"})) return std::nullopt;
    Fan f;
    const std::size_t before = rd.errors.size();
    if (auto d = rd.field(j, path, "dim")) {
        if (auto v = rd.index(*d, path + ".dim")) f.dim = *v;
    }
    if (auto r = rd.field(j, path, "rays")) {
        if (auto rays = rd.list<IntVector>(*r, path + ".rays", [&](const nlohmann::json& x, const std::string& p) { return rd.int_vector(x, p); }))
            f.rays = std::move(*rays);
    }
    if (auto c = rd.field(j, path, "max_cones")) {
        auto cones = rd.list<std::vector<std::size_t>>(*c, path + ".max_cones", [&](const nlohmann::json& x, const std::string& p) {
            return rd.list<std::size_t>(x, p, [&](const nlohmann::json& y, const std::string& q) { return rd.index(y, q); });
        });
        if (cones) f.max_cones = std::move(*cones);
    }
    if (rd.errors.size() != before) return std::nullopt;
    try {
        check_fan_structure(f);
    } catch (const InputError& e) {
        rd.fail(path, e.what());
        return std::nullopt;
    }
    return f;
}

inline std::optional<Subspace> read_space(Reader& rd, const nlohmann::json& j, const std::string& path, std::size_t rank) {
    if (j.is_string() && j.get<std::string>() == "full") return Subspace::full(rank);
    auto rows = rd.list<RatVector>(j, path, [&](const nlohmann::json& x, const std::string& p) -> std::optional<RatVector> {
        auto v = rd.rat_vector(x, p);
        if (v && v->size() != rank) {
            rd.fail(p, "row has length " + std::to_string(v->size()) + ", expected the rank " + std::to_string(rank));
            return std::nullopt;
        }
        return v;
    });
    if (!rows) return std::nullopt;
    return Subspace::span(*rows, rank);
}

inline std::optional<ToricBundle> read_bundle(Reader& rd, const nlohmann::json& j, const std::string& path, const Fan& fan) {
    if (!rd.object(j, path, {"rank", "filtrations", "summand"})) return std::nullopt;
    const std::size_t before = rd.errors.size();
    std::size_t rank = 0;
    if (auto r = rd.field(j, path, "rank"))
        if (auto v = rd.index(*r, path + ".rank")) rank = *v;
    if (rd.errors.size() != before) return std::nullopt;
    if (rank == 0) {
        rd.fail(path + ".rank", "rank must be positive");
        return std::nullopt;
    }
    std::vector<Filtration> fs;
    if (auto fj = rd.field(j, path, "filtrations")) {
        const std::string fp = path + ".filtrations";
        if (!fj->is_array()) {
            rd.fail(fp, "expected an array");
        } else {
            if (fj->size() != fan.ray_count())
                rd.fail(fp, std::to_string(fj->size()) + " filtrations for " + std::to_string(fan.ray_count()) + " rays");
            for (std::size_t i = 0; i < fj->size(); ++i) {
                const std::string ip = fp + "[" + std::to_string(i) + "]";
                const auto& fi = (*fj)[i];
                if (!rd.object(fi, ip, {"steps"})) continue;
                auto sj = rd.field(fi, ip, "steps");
                if (!sj) continue;
                const std::string sp = ip + ".steps";
                auto steps = rd.list<FiltrationStep>(*sj, sp, [&](const nlohmann::json& x, const std::string& p) -> std::optional<FiltrationStep> {
                    if (!rd.object(x, p, {"max_j", "space"})) return std::nullopt;
                    std::optional<Integer> a;
                    std::optional<Subspace> s;
                    if (auto aj = rd.field(x, p, "max_j")) a = rd.integer(*aj, p + ".max_j");
                    if (auto vj = rd.field(x, p, "space")) s = read_space(rd, *vj, p + ".space", rank);
                    if (!a || !s) return std::nullopt;
                    return FiltrationStep{*a, *s};
                });
                if (!steps) continue;
                try {
                    fs.emplace_back(rank, std::move(*steps));
                } catch (const InputError& e) {
                    rd.fail(sp, e.what());
                }
            }
        }
    }
    std::vector<std::size_t> summand;
    if (auto sj = rd.field(j, path, "summand", false)) {
        if (auto s = rd.list<std::size_t>(*sj, path + ".summand", [&](const nlohmann::json& x, const std::string& p) { return rd.index(x, p); }))
            summand = std::move(*s);
        if (!summand.empty() && summand.size() != rank) rd.fail(path + ".summand", "one summand index per fiber coordinate required");
    }
    if (rd.errors.size() != before) return std::nullopt;
    try {
        return ToricBundle(fan, rank, std::move(fs), std::move(summand));
    } catch (const InputError& e) {
        rd.fail(path, e.what());
        return std::nullopt;
    }
}

inline std::optional<PolarizationSpec> read_polarization(Reader& rd, const nlohmann::json& j, const std::string& path) {
    if (!rd.object(j, path, {"weights", "divisor"})) return std::nullopt;
    PolarizationSpec p;
    if (auto w = rd.field(j, path, "weights", false)) p.weights = rd.rat_vector(*w, path + ".weights");
    if (auto d = rd.field(j, path, "divisor", false)) p.divisor = rd.rat_vector(*d, path + ".divisor");
    const bool has_w = j.contains("weights"), has_d = j.contains("divisor");
    if (has_w == has_d) {
        rd.fail(path, "exactly one of \"weights\" or \"divisor\" is required");
        return std::nullopt;
    }
    if (!p.weights && !p.divisor) return std::nullopt;
    return p;
}

} // namespace detail

/// Parses and validates a bundle document. Never lets a library exception of
/// another kind escape: every failure becomes a located ParseError.
inline BundleDocument parse_document(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError({{"$", std::string("malformed JSON: ") + e.what()}});
    }
    detail::Reader rd;
    BundleDocument doc;
    if (!rd.object(j, "$", {"schema_version", "name", "description", "fan", "bundle", "polarization"})) throw ParseError(rd.errors);
    if (auto v = rd.field(j, "$", "schema_version")) {
        if (!v->is_number_integer() || v->get<long long>() != kSchemaVersion)
            rd.fail("$.schema_version", "unsupported schema version; expected " + std::to_string(kSchemaVersion));
    }
    if (auto n = rd.field(j, "$", "name", false)) {
        if (n->is_string()) doc.name = n->get<std::string>();
        else rd.fail("$.name", "expected a string");
    }
    if (auto d = rd.field(j, "$", "description", false))
        if (!d->is_string()) rd.fail("$.description", "expected a string");
    std::optional<Fan> fan;
    if (auto f = rd.field(j, "$", "fan")) fan = detail::read_fan(rd, *f, "$.fan");
    if (fan) {
        doc.fan = *fan;
        if (auto b = rd.field(j, "$", "bundle", false)) doc.bundle = detail::read_bundle(rd, *b, "$.bundle", *fan);
    }
    if (auto p = rd.field(j, "$", "polarization", false)) doc.polarization = detail::read_polarization(rd, *p, "$.polarization");
    if (!rd.errors.empty()) throw ParseError(rd.errors);
    return doc;
}

/// Resolves the document's polarization block against its fan.
inline std::optional<Polarization> document_polarization(const BundleDocument& doc) {
    if (!doc.polarization) return std::nullopt;
    if (doc.polarization->weights) return validate_polarization(doc.fan, *doc.polarization->weights);
    return weights_from_divisor(doc.fan, *doc.polarization->divisor);
}

// ---- output ---------------------------------------------------------------

using ojson = nlohmann::ordered_json;

inline ojson to_json(const Rational& q) { return q.get_str(); }

inline ojson to_json(const Integer& z) {
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}

inline ojson to_json(const RatVector& v) {
    ojson a = ojson::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

inline ojson to_json(const IntVector& v) {
    ojson a = ojson::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

/// Integer vectors that arrive as rationals (ground-set vectors) print as integers.
inline ojson to_json_integral(const RatVector& v) {
    ojson a = ojson::array();
    for (const auto& x : v) a.push_back(x.get_den() == 1 ? to_json(Integer(x.get_num())) : to_json(x));
    return a;
}

inline ojson to_json(const Subspace& s) {
    ojson a = ojson::array();
    for (const auto& row : s.basis()) a.push_back(to_json(row));
    return a;
}

inline ojson to_json(const std::vector<std::size_t>& v) {
    ojson a = ojson::array();
    for (auto x : v) a.push_back(x);
    return a;
}

inline ojson to_json(const Filtration& f) {
    ojson steps = ojson::array();
    for (const auto& s : f.steps())
        steps.push_back({{"max_j", to_json(s.max_j)}, {"space", s.space.is_full() ? ojson("full") : to_json(s.space)}});
    return {{"steps", steps}};
}

inline ojson to_json(const HPolytope& p, bool with_points = false) {
    ojson bounds = ojson::array();
    for (std::size_t i = 0; i < p.bounds().size(); ++i) bounds.push_back({{"ray", i}, {"bound", to_json(p.bounds()[i])}});
    ojson verts = ojson::array();
    for (const auto& v : p.vertices()) verts.push_back(to_json(v));
    ojson o{{"bounds", bounds}, {"empty", p.is_empty()}, {"vertices", verts}};
    if (with_points) {
        ojson pts = ojson::array();
        for (const auto& u : p.lattice_points()) pts.push_back(to_json(u));
        o["lattice_points"] = pts;
    }
    return o;
}

} // namespace toricstab
