#pragma once

// Command dispatch for the toricstab tool. dispatch() runs in-process so the
// test suite can drive it without spawning processes.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "toricstab/errors.hpp"
#include "toricstab/exactla.hpp"
#include "toricstab/fan.hpp"
#include "toricstab/io.hpp"
#include "toricstab/klyachko.hpp"
#include "toricstab/matroid.hpp"
#include "toricstab/parliament.hpp"
#include "toricstab/stability.hpp"
#include "toricstab/svg.hpp"

namespace toricstab {

enum ExitCode : int { kOk = 0, kInputInvalid = 1, kIncompatible = 2, kVerificationFailed = 3 };

struct CliOptions {
    std::string command;
    std::string input;
    std::uint64_t seed = 0;
    std::string format = "text";
    bool semistable_only = false;
    bool trace = false;
    std::string svg;
    long long wall = -1;
    std::string divisor;
    std::string weights;
};

namespace cli {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline RatVector parse_list(const std::string& text) {
    RatVector out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
        if (item.empty()) throw InputError("empty entry in list \"" + text + "\"");
        out.push_back(parse_rational(item));
    }
    if (out.empty()) throw InputError("empty list");
    return out;
}

template <class V>
std::string tuple(const V& v) {
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + to_string(v[k]);
    return s + ")";
}

inline std::string index_set(const std::vector<std::size_t>& v) {
    std::string s = "{";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
    return s + "}";
}

inline std::string space_text(const Subspace& s) {
    if (s.is_full()) return "full";
    if (s.is_zero()) return "0";
    std::string out = "<";
    for (std::size_t k = 0; k < s.basis().size(); ++k) out += (k ? ", " : "") + tuple(s.basis()[k]);
    return out + ">";
}

inline const ToricBundle& need_bundle(const BundleDocument& doc) {
    if (!doc.bundle) throw InputError("document has no bundle block");
    return *doc.bundle;
}

/// Summand of the direct sum a ground-set vector is supported on, if only one.
inline std::optional<std::size_t> provenance(const ToricBundle& b, const RatVector& e) {
    std::optional<std::size_t> s;
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (e[k] == 0) continue;
        if (s && *s != b.summand()[k]) return std::nullopt;
        s = b.summand()[k];
    }
    return s;
}

inline ojson ground_set_json(const ToricBundle& b, const GroundSet& g) {
    ojson a = ojson::array();
    for (std::size_t i = 0; i < g.size(); ++i) {
        ojson e{{"index", i}, {"vector", to_json_integral(g.vectors[i])}};
        auto p = provenance(b, g.vectors[i]);
        e["summand"] = p ? ojson(*p) : ojson(nullptr);
        a.push_back(e);
    }
    return a;
}

inline ojson trace_json(const ToricBundle& b, std::uint64_t seed) {
    const auto lattice = build_lattice(b);
    const auto g = compute_ground_set(lattice);
    const auto sheet = require_compatible(b, seed);
    ojson lat = ojson::array();
    for (const auto& v : lattice.elements) lat.push_back(to_json(v));
    ojson steps = ojson::array();
    for (std::size_t i = 0; i < g.size(); ++i) steps.push_back({{"vector", to_json_integral(g.vectors[i])}, {"lattice_element", g.step[i]}});
    ojson cones = ojson::array();
    for (const auto& s : sheet.cones) {
        ojson lines = ojson::array();
        for (std::size_t n = 0; n < s.basis.size(); ++n) lines.push_back({{"basis_vector", to_json_integral(s.basis[n])}, {"character", to_json(s.characters[n])}});
        cones.push_back({{"cone", s.cone}, {"lines", lines}});
    }
    return {{"lattice", lat}, {"ground_set_steps", steps}, {"character_sheet", cones}};
}

inline void trace_text(const ToricBundle& b, std::uint64_t seed, std::ostream& out) {
    const auto lattice = build_lattice(b);
    const auto g = compute_ground_set(lattice);
    const auto sheet = require_compatible(b, seed);
    out << "trace:\n  L(E):\n";
    for (std::size_t i = 0; i < lattice.elements.size(); ++i) out << "    [" << i << "] " << space_text(lattice.elements[i]) << "\n";
    out << "  ground set steps:\n";
    for (std::size_t i = 0; i < g.size(); ++i) out << "    e" << i << " = " << tuple(g.vectors[i]) << " at [" << g.step[i] << "]\n";
    out << "  character sheet:\n";
    for (const auto& s : sheet.cones) {
        out << "    cone " << s.cone << ":";
        for (std::size_t n = 0; n < s.basis.size(); ++n) out << " " << tuple(s.basis[n]) << " -> " << tuple(s.characters[n]) << ";";
        out << "\n";
    }
}

inline Polarization resolve_polarization(const BundleDocument& doc, const CliOptions& o) {
    if (!o.weights.empty()) return validate_polarization(doc.fan, parse_list(o.weights));
    if (!o.divisor.empty()) return weights_from_divisor(doc.fan, parse_list(o.divisor));
    auto p = document_polarization(doc);
    if (!p) throw InputError("no polarization: add a polarization block or pass --weights / --divisor");
    return *p;
}

inline ojson polarization_json(const Polarization& pol) {
    ojson o{{"source", pol.source == PolarizationSource::Weights ? "weights" : "divisor"}, {"weights", to_json(pol.weights)}};
    if (pol.divisor) o["divisor"] = to_json(*pol.divisor);
    return o;
}

inline int run_check(const BundleDocument& doc, const CliOptions& o, std::ostream& out) {
    const ToricBundle& b = need_bundle(doc);
    const Polarization pol = resolve_polarization(doc, o);
    const StabilityReport rep = check_stability(b, pol, o.seed);
    const FlatSlope* w = rep.witness_flat();
    std::string verdict;
    if (o.semistable_only) verdict = rep.semistable ? "SEMISTABLE" : "NOT SEMISTABLE";
    else verdict = rep.stable ? "STABLE" : rep.semistable ? "SEMISTABLE" : "UNSTABLE";
    if (o.format == "json") {
        ojson flats = ojson::array();
        for (const auto& f : rep.flats)
            flats.push_back({{"indices", to_json(f.flat.indices)},
                             {"rank", f.flat.rank()},
                             {"slope", to_json(f.slope)},
                             {"relation", to_string(f.relation)},
                             {"average_polytope", to_json(f.average)}});
        ojson j{{"schema_version", kSchemaVersion}, {"command", "check"}, {"seed", o.seed}, {"verdict", verdict}};
        j["mu"] = to_json(rep.mu);
        j["semistable"] = rep.semistable;
        if (!o.semistable_only) j["stable"] = rep.stable;
        j["polarization"] = polarization_json(pol);
        j["average_polytope"] = to_json(average_polytope(b, Subspace::full(b.rank())));
        j["ground_set"] = ground_set_json(b, rep.ground_set);
        j["flats"] = flats;
        j["witness"] = w ? ojson{{"indices", to_json(w->flat.indices)}, {"rank", w->flat.rank()}, {"slope", to_json(w->slope)}} : ojson(nullptr);
        if (o.trace) j["trace"] = trace_json(b, o.seed);
        out << j.dump(2) << "\n";
        return kOk;
    }
    out << verdict << ", μ(E)=" << rep.mu;
    if (w) out << ", max flat slope " << w->slope << "\n";
    else out << ", no proper nonzero flats\n";
    out << "weights: " << tuple(pol.weights) << "\n";
    out << "ground set:";
    for (std::size_t i = 0; i < rep.ground_set.size(); ++i) out << " e" << i << "=" << tuple(rep.ground_set.vectors[i]);
    out << "\nflats:\n";
    for (const auto& f : rep.flats) {
        out << "  " << index_set(f.flat.indices) << " rank " << f.flat.rank() << " slope " << f.slope << " (" << to_string(f.relation)
            << " than μ(E))\n    average polytope bounds " << tuple(f.average.bounds()) << ", vertices";
        for (const auto& v : f.average.vertices()) out << " " << tuple(v);
        out << "\n";
    }
    if (w) out << "witness: " << index_set(w->flat.indices) << " slope " << w->slope << "\n";
    if (o.trace) trace_text(b, o.seed, out);
    return kOk;
}

inline std::vector<SvgSegment> wall_segments(const ToricBundle& b, long long wall, std::uint64_t seed) {
    if (wall < 0) return {};
    const auto ws = walls(b.fan());
    if (static_cast<std::size_t>(wall) >= ws.size()) throw InputError("--wall " + std::to_string(wall) + " out of range (" + std::to_string(ws.size()) + " walls)");
    const auto r = restrict_to_curve(b, ws[static_cast<std::size_t>(wall)], seed);
    std::vector<SvgSegment> out;
    for (const auto& s : r.segments) out.push_back({s.from, s.to});
    return out;
}

inline int run_parliament(const BundleDocument& doc, const CliOptions& o, std::ostream& out) {
    const ToricBundle& b = need_bundle(doc);
    const Parliament p = parliament(b, o.seed);
    const bool gg = is_globally_generated(p);
    if (!o.svg.empty()) {
        SvgOptions so;
        so.segments = wall_segments(b, o.wall, o.seed);
        std::ofstream f(o.svg, std::ios::binary);
        if (!f) throw InputError("cannot write " + o.svg);
        f << render_svg(p, so);
    }
    if (o.format == "json") {
        ojson polys = ojson::array();
        for (std::size_t e = 0; e < p.polytopes.size(); ++e) {
            ojson x{{"label", e}, {"vector", to_json_integral(p.ground_set.vectors[e])}};
            x["polytope"] = to_json(p.polytopes[e], true);
            polys.push_back(x);
        }
        ojson ann = ojson::array();
        for (const auto& ca : p.annotations) {
            ojson entries = ojson::array();
            for (const auto& a : ca.entries) {
                ojson x{{"character", to_json(a.character)}, {"basis_vector", to_json_integral(a.basis_vector)}};
                x["label"] = a.label ? ojson(*a.label) : ojson(nullptr);
                x["flagged"] = a.flagged;
                if (a.flagged) x["flat"] = to_json(a.flat);
                entries.push_back(x);
            }
            ann.push_back({{"cone", ca.cone}, {"characters", entries}});
        }
        ojson j{{"schema_version", kSchemaVersion}, {"command", "parliament"}, {"seed", o.seed}};
        j["ground_set"] = ground_set_json(b, p.ground_set);
        j["polytopes"] = polys;
        j["annotations"] = ann;
        j["globally_generated"] = gg;
        if (o.trace) j["trace"] = trace_json(b, o.seed);
        out << j.dump(2) << "\n";
        return kOk;
    }
    for (std::size_t e = 0; e < p.polytopes.size(); ++e) {
        const auto& poly = p.polytopes[e];
        out << "P" << tuple(p.ground_set.vectors[e]) << ": bounds " << tuple(poly.bounds());
        if (poly.is_empty()) {
            out << ", empty\n";
            continue;
        }
        out << "\n  vertices";
        for (const auto& v : poly.vertices()) out << " " << tuple(v);
        out << "\n  lattice points";
        for (const auto& u : poly.lattice_points()) out << " " << tuple(u);
        out << "\n";
    }
    for (const auto& ca : p.annotations) {
        out << "cone " << ca.cone << ":";
        for (const auto& a : ca.entries) {
            out << " " << tuple(a.character) << " -> ";
            if (a.label) out << "P" << tuple(p.ground_set.vectors[*a.label]);
            else out << "flat " << index_set(a.flat) << " (flagged)";
            out << ";";
        }
        out << "\n";
    }
    out << "globally generated: " << (gg ? "yes" : "no") << "\n";
    if (o.trace) trace_text(b, o.seed, out);
    return kOk;
}

inline int run_flats(const BundleDocument& doc, const CliOptions& o, std::ostream& out) {
    const ToricBundle& b = need_bundle(doc);
    require_compatible(b, o.seed);
    const GroundSet g = ground_set(b);
    const auto flats = enumerate_flats(g);
    if (o.format == "json") {
        ojson a = ojson::array();
        for (const auto& f : flats) {
            const char* kind = f.indices.empty() ? "empty" : f.rank() == b.rank() ? "full" : "proper";
            a.push_back({{"indices", to_json(f.indices)},
                         {"rank", f.rank()},
                         {"kind", kind},
                         {"span", to_json(f.span)},
                         {"compatible", is_compatible_flat(b, g, f, o.seed).compatible}});
        }
        ojson j{{"schema_version", kSchemaVersion}, {"command", "flats"}, {"seed", o.seed}};
        j["ground_set"] = ground_set_json(b, g);
        j["flats"] = a;
        if (o.trace) j["trace"] = trace_json(b, o.seed);
        out << j.dump(2) << "\n";
        return kOk;
    }
    out << "ground set:";
    for (std::size_t i = 0; i < g.size(); ++i) out << " e" << i << "=" << tuple(g.vectors[i]);
    out << "\n";
    for (const auto& f : flats) {
        out << index_set(f.indices) << " rank " << f.rank();
        if (f.indices.empty()) out << " (empty)";
        else if (f.rank() == b.rank()) out << " (full)";
        out << (is_compatible_flat(b, g, f, o.seed).compatible ? " compatible" : " not compatible") << "\n";
    }
    if (o.trace) trace_text(b, o.seed, out);
    return kOk;
}

inline int run_restrict(const BundleDocument& doc, const CliOptions& o, std::ostream& out) {
    const ToricBundle& b = need_bundle(doc);
    if (o.wall < 0) throw InputError("restrict needs --wall K");
    const auto ws = walls(b.fan());
    if (static_cast<std::size_t>(o.wall) >= ws.size()) throw InputError("--wall " + std::to_string(o.wall) + " out of range (" + std::to_string(ws.size()) + " walls)");
    const Restriction r = restrict_to_curve(b, ws[static_cast<std::size_t>(o.wall)], o.seed);
    if (o.format == "json") {
        ojson segs = ojson::array();
        for (const auto& s : r.segments) {
            ojson x{{"from", to_json(s.from)}, {"to", to_json(s.to)}, {"degree", to_json(s.degree)}};
            x["label"] = s.label ? ojson(*s.label) : ojson(nullptr);
            segs.push_back(x);
        }
        ojson degs = ojson::array();
        for (const auto& d : r.degrees) degs.push_back(to_json(d));
        ojson j{{"schema_version", kSchemaVersion}, {"command", "restrict"}, {"seed", o.seed}};
        j["wall"] = {{"index", o.wall}, {"tau_rays", to_json(r.wall.tau_rays)}, {"sigma", r.wall.sigma}, {"sigma_prime", r.wall.sigma_prime}};
        j["normal"] = to_json(r.normal);
        j["degrees"] = degs;
        j["semistable"] = r.semistable;
        j["segments"] = segs;
        out << j.dump(2) << "\n";
        return kOk;
    }
    out << "degrees: [";
    for (std::size_t k = 0; k < r.degrees.size(); ++k) out << (k ? ", " : "") << r.degrees[k];
    out << "]; restriction " << (r.semistable ? "semistable" : "NOT semistable") << "\n";
    out << "wall " << o.wall << ": tau " << index_set(r.wall.tau_rays) << ", cones " << r.wall.sigma << " and " << r.wall.sigma_prime
        << ", normal " << tuple(r.normal) << "\n";
    for (const auto& s : r.segments) out << "  " << tuple(s.from) << " -- " << tuple(s.to) << " degree " << s.degree << "\n";
    return kOk;
}

inline int run_weights(const BundleDocument& doc, const CliOptions& o, std::ostream& out) {
    if (o.divisor.empty()) throw InputError("weights needs --divisor a_0,...,a_n");
    const Polarization pol = weights_from_divisor(doc.fan, parse_list(o.divisor));
    if (o.format == "json") {
        ojson j{{"schema_version", kSchemaVersion}, {"command", "weights"}};
        j["divisor"] = to_json(*pol.divisor);
        j["weights"] = to_json(pol.weights);
        j["newton_polytope"] = to_json(newton_polytope(doc.fan, *pol.divisor));
        out << j.dump(2) << "\n";
        return kOk;
    }
    out << tuple(pol.weights) << "\n";
    return kOk;
}

inline int run_reconstruct(const BundleDocument& doc, const CliOptions& o, std::ostream& out) {
    const ToricBundle& b = need_bundle(doc);
    const Parliament p = parliament(b, o.seed);
    const auto fs = reconstruct_filtrations(p);
    const bool same = fs == b.filtrations();
    if (o.format == "json") {
        ojson a = ojson::array();
        for (const auto& f : fs) a.push_back(to_json(f));
        ojson j{{"schema_version", kSchemaVersion}, {"command", "reconstruct"}, {"seed", o.seed}};
        j["filtrations"] = a;
        j["round_trip"] = same;
        out << j.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < fs.size(); ++i) {
            out << "ray " << i << ":";
            for (const auto& s : fs[i].steps()) out << " (" << s.max_j << ", " << space_text(s.space) << ")";
            out << "\n";
        }
        out << "round trip: " << (same ? "exact" : "MISMATCH") << "\n";
    }
    if (!same) throw VerificationFailure("reconstruct: recovered filtrations differ from the input");
    return kOk;
}

inline int run_validate(const BundleDocument& doc, const CliOptions& o, std::ostream& out) {
    const FanReport rep = validate_fan(doc.fan);
    std::optional<CompatibilityResult> cc;
    if (doc.bundle && rep.pass()) cc = check_compatibility(*doc.bundle, o.seed);
    if (o.format == "json") {
        ojson cones = ojson::array();
        for (const auto& c : rep.cones) cones.push_back({{"cone", c.cone}, {"det", to_json(c.det)}, {"smooth", c.smooth}});
        ojson ws = ojson::array();
        for (const auto& w : rep.walls) ws.push_back({{"tau", to_json(w.tau)}, {"cones", to_json(w.cones)}, {"paired", w.paired}});
        ojson j{{"schema_version", kSchemaVersion}, {"command", "validate"}, {"seed", o.seed}};
        j["fan"] = {{"pass", rep.pass()},
                    {"cones", cones},
                    {"walls", ws},
                    {"positively_spanning", rep.positively_spanning},
                    {"dual_graph_connected", rep.dual_graph_connected},
                    {"completeness_note", rep.completeness_note}};
        if (cc) {
            ojson c{{"compatible", cc->compatible()}};
            if (cc->compatible()) {
                ojson sheet = ojson::array();
                for (const auto& s : cc->sheet->cones) {
                    ojson u = ojson::array();
                    for (const auto& x : s.characters) u.push_back(to_json(x));
                    sheet.push_back({{"cone", s.cone}, {"characters", u}});
                }
                c["characters"] = sheet;
            } else {
                const auto& w = *cc->witness;
                c["witness"] = {{"cone", w.cone}, {"reason", w.reason}, {"profile", to_json(IntVector(w.profile))}, {"multiplicity", w.multiplicity}};
            }
            j["bundle"] = c;
        }
        if (o.trace && cc && cc->compatible()) j["trace"] = trace_json(*doc.bundle, o.seed);
        out << j.dump(2) << "\n";
    } else {
        out << "fan: " << (rep.pass() ? "PASS" : "FAIL") << "\n";
        for (const auto& c : rep.cones) out << "  cone " << c.cone << " det " << c.det << (c.smooth ? " smooth" : " NOT smooth") << "\n";
        for (const auto& w : rep.walls)
            if (!w.paired) out << "  wall " << index_set(w.tau) << " lies in " << w.cones.size() << " maximal cone(s)\n";
        out << "  positively spanning: " << (rep.positively_spanning ? "yes" : "no") << "\n";
        out << "  dual graph connected: " << (rep.dual_graph_connected ? "yes" : "no") << "\n";
        out << "  " << rep.completeness_note << "\n";
        if (cc) {
            if (cc->compatible()) {
                out << "bundle: compatible\n";
                for (const auto& s : cc->sheet->cones) {
                    auto u = s.characters;
                    std::sort(u.begin(), u.end());
                    out << "  cone " << s.cone << ": u =";
                    for (const auto& x : u) out << " " << tuple(x);
                    out << "\n";
                }
            } else {
                const auto& w = *cc->witness;
                out << "bundle: INCOMPATIBLE on cone " << w.cone << ": " << w.reason;
                if (!w.profile.empty()) out << " at profile " << tuple(w.profile) << " (m = " << w.multiplicity << ")";
                out << "\n";
            }
        }
        if (o.trace && cc && cc->compatible()) trace_text(*doc.bundle, o.seed, out);
    }
    if (!rep.pass()) return kInputInvalid;
    if (cc && !cc->compatible()) return kIncompatible;
    return kOk;
}

} // namespace cli

inline int run(const CliOptions& o, std::ostream& out, std::ostream& err) {
    try {
        if (o.format != "json" && o.format != "text") throw InputError("--format must be json or text");
        const BundleDocument doc = parse_document(cli::read_file(o.input));
        if (o.command == "check") return cli::run_check(doc, o, out);
        if (o.command == "parliament") return cli::run_parliament(doc, o, out);
        if (o.command == "flats") return cli::run_flats(doc, o, out);
        if (o.command == "restrict") return cli::run_restrict(doc, o, out);
        if (o.command == "weights") return cli::run_weights(doc, o, out);
        if (o.command == "reconstruct") return cli::run_reconstruct(doc, o, out);
        if (o.command == "validate") return cli::run_validate(doc, o, out);
        throw InputError("unknown command " + o.command);
    } catch (const ParseError& e) {
        for (const auto& l : e.errors()) err << "error: " << l.path << ": " << l.message << "\n";
        return kInputInvalid;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInputInvalid;
    } catch (const IncompatibleBundle& e) {
        err << "error: " << e.what() << "\n";
        return kIncompatible;
    } catch (const VerificationFailure& e) {
        err << "internal verification failed: " << e.what() << "\n";
        return kVerificationFailed;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kVerificationFailed;
    }
}

/// args excludes the program name.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Slope stability of toric vector bundles from Klyachko data", "toricstab"};
    app.require_subcommand(1);
    CliOptions o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("input", o.input, "bundle document (JSON)")->required();
        sub->add_option("--seed", o.seed, "seed for the randomized splitting search");
        sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
        sub->add_flag("--trace", o.trace, "dump L(E), the ground-set steps and the character sheets");
    };
    auto* check = app.add_subcommand("check", "stability report");
    common(check);
    check->add_flag("--semistable-only", o.semistable_only, "report only the semistability verdict");
    check->add_option("--weights", o.weights, "override polarization: t_0,...,t_n");
    check->add_option("--divisor", o.divisor, "override polarization: weights of the divisor a_0,...,a_n");
    auto* parl = app.add_subcommand("parliament", "polytopes, vertices, lattice points");
    common(parl);
    parl->add_option("--svg", o.svg, "write an SVG drawing (2-dimensional fans)");
    parl->add_option("--wall", o.wall, "overlay the restriction segments of wall K");
    auto* flats = app.add_subcommand("flats", "flats of the ground set with compatibility marks");
    common(flats);
    auto* restr = app.add_subcommand("restrict", "splitting degrees on the invariant curve of a wall");
    common(restr);
    restr->add_option("--wall", o.wall, "wall index, in order of the wall's ray set")->required();
    auto* weights = app.add_subcommand("weights", "weights of the polarization given by a divisor");
    common(weights);
    weights->add_option("--divisor", o.divisor, "a_0,...,a_n")->required();
    auto* recon = app.add_subcommand("reconstruct", "recover the filtrations from the parliament");
    common(recon);
    auto* val = app.add_subcommand("validate", "fan checks and the compatibility condition");
    common(val);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputInvalid;
    }
    o.command = app.get_subcommands().front()->get_name();
    return run(o, out, err);
}

} // namespace toricstab
