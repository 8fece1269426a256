#pragma once

#include <map>
#include <sstream>
#include <string>

#include "prmc/automata/nfa.hpp"

namespace prmc {

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace detail

/// Graphviz rendering; parallel edges are merged into one edge whose label
/// lists every letter tuple.
inline std::string to_dot(const Nfa& a, const std::string& name = "A") {
    std::ostringstream out;
    out << "digraph \"" << detail::dot_escape(name) << "\" {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (State q = 0; q < a.num_states(); ++q)
        out << "  q" << q << " [label=\"" << q << "\"" << (a.is_accepting(q) ? ", shape=doublecircle" : "") << "];\n";
    for (State q : a.initial()) out << "  init" << q << " [shape=point];\n  init" << q << " -> q" << q << ";\n";
    for (State q = 0; q < a.num_states(); ++q) {
        std::map<State, std::string> edges;
        for (const auto& t : a.transitions(q)) {
            auto& lbl = edges[t.target];
            if (!lbl.empty()) lbl += "\\n";
            lbl += detail::dot_escape(a.layout().letter_to_string(t.letter));
        }
        for (const auto& [to, lbl] : edges) out << "  q" << q << " -> q" << to << " [label=\"" << lbl << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace prmc
