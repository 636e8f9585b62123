#pragma once

// Point-list files: one rational per line ("p/q" or "p"), '#' starts a
// comment, blank lines ignored.

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "setline/errors.hpp"
#include "setline/rational.hpp"

namespace setline {

inline std::vector<Rat> read_points(std::istream& in) {
    std::vector<Rat> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
        if (trimmed.empty()) continue;
        try {
            out.push_back(Rat::parse(trimmed));
        } catch (const std::exception&) {
            throw ValidationError("points file line " + std::to_string(lineno) +
                                  ": cannot parse rational '" + trimmed + "'");
        }
    }
    return out;
}

inline std::vector<Rat> read_points_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open points file: " + path);
    return read_points(in);
}

} // namespace setline
