#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "toricstab/io.hpp"

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(FIXTURES_DIR) + "/" + name + ".json"; }

inline toricstab::BundleDocument load(const std::string& name) {
    std::ifstream in(path(name));
    std::ostringstream s;
    s << in.rdbuf();
    return toricstab::parse_document(s.str());
}

inline toricstab::ToricBundle bundle(const std::string& name) { return *load(name).bundle; }

inline toricstab::Polarization polarization(const std::string& name) { return *toricstab::document_polarization(load(name)); }

/// Every fixture with a compatible bundle and a polarization.
inline const std::vector<std::string>& stable_suite() {
    static const std::vector<std::string> names{"tp2",          "split_p2",           "split3_p2", "blp2_sum", "nontriv_rank3",
                                                "hirzebruch_h2", "hirzebruch_printed", "tp3",       "trivial2_p2"};
    return names;
}

} // namespace fixtures
