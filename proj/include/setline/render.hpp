#pragma once

// Canonical text form of expressions; parse(render(e)) == e for normalized e.

#include <string>

#include "setline/set_expr.hpp"

namespace setline {

inline std::string render(const SetExpr& e) {
    if (e.is<Fin>()) {
        std::string s = "fin{";
        const auto& pts = e.as<Fin>().points;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) s += ", ";
            s += pts[i].to_string();
        }
        return s + "}";
    }
    if (e.is<Geom>()) {
        const auto& g = e.as<Geom>();
        return "geom(" + g.limit.to_string() + ", " + g.scale.to_string() + ", " +
               g.ratio.to_string() + ", " + (g.with_limit ? "closed" : "open") + ")";
    }
    if (e.is<Tail>()) {
        const auto& t = e.as<Tail>();
        return "tail(" + t.start.to_string() + ", " + t.step.to_string() + ", " +
               (t.up ? "up" : "down") + ")";
    }
    if (e.is<Affine>()) {
        const auto& a = e.as<Affine>();
        return "affine(" + render(*a.child) + ", " + a.scale.to_string() + ", " +
               a.offset.to_string() + ")";
    }
    const auto& kids = e.is<Union>() ? e.as<Union>().children : e.as<MSum>().children;
    std::string s = e.is<Union>() ? "union(" : "msum(";
    for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i) s += ", ";
        s += render(kids[i]);
    }
    return s + ")";
}

} // namespace setline
