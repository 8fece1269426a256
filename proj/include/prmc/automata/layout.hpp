#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prmc/error.hpp"

namespace prmc {

/// A letter of a multi-track alphabet, interned as a mixed-radix integer.
/// Track 0 is the most significant digit, so numeric order on letters is
/// the lexicographic order on tuples (each track ordered by declaration).
using Letter = std::uint64_t;

/// A finite word over a layout.
using Word = std::vector<Letter>;

struct Track {
    std::string name;
    std::vector<std::string> symbols;

    bool operator==(const Track&) const = default;
};

/// Ordered list of named tracks. Every letter of an automaton over the layout
/// is a tuple whose i-th component is a symbol of track i.
class TrackLayout {
public:
    TrackLayout() = default;

    explicit TrackLayout(std::vector<Track> tracks) : tracks_(std::move(tracks)) {
        strides_.assign(tracks_.size(), 1);
        letter_count_ = 1;
        for (std::size_t i = tracks_.size(); i-- > 0;) {
            const auto& t = tracks_[i];
            if (t.name.empty()) throw LayoutError("track name must not be empty");
            if (t.symbols.empty()) throw LayoutError("track '" + t.name + "' has an empty domain");
            for (std::size_t j = 0; j < tracks_.size(); ++j)
                if (j != i && tracks_[j].name == t.name)
                    throw LayoutError("duplicate track name '" + t.name + "'");
            for (std::size_t a = 0; a < t.symbols.size(); ++a)
                for (std::size_t b = a + 1; b < t.symbols.size(); ++b)
                    if (t.symbols[a] == t.symbols[b])
                        throw LayoutError("duplicate symbol '" + t.symbols[a] + "' in track '" + t.name + "'");
            strides_[i] = letter_count_;
            if (letter_count_ > std::numeric_limits<Letter>::max() / t.symbols.size())
                throw CapacityError("letter space of layout overflows 64 bits");
            letter_count_ *= t.symbols.size();
        }
    }

    std::size_t arity() const { return tracks_.size(); }
    const std::vector<Track>& tracks() const { return tracks_; }
    const Track& track(std::size_t i) const { return tracks_.at(i); }
    std::size_t domain_size(std::size_t i) const { return tracks_[i].symbols.size(); }

    /// Number of distinct letters (product of the domain sizes).
    Letter letter_count() const { return letter_count_; }

    std::optional<std::size_t> find(const std::string& name) const {
        for (std::size_t i = 0; i < tracks_.size(); ++i)
            if (tracks_[i].name == name) return i;
        return std::nullopt;
    }

    std::size_t index_of(const std::string& name) const {
        if (auto i = find(name)) return *i;
        throw LayoutError("no track named '" + name + "'");
    }

    bool has(const std::string& name) const { return find(name).has_value(); }

    std::uint32_t component(Letter letter, std::size_t track) const {
        return static_cast<std::uint32_t>((letter / strides_[track]) % tracks_[track].symbols.size());
    }

    std::vector<std::uint32_t> decode(Letter letter) const {
        std::vector<std::uint32_t> out(tracks_.size());
        for (std::size_t i = 0; i < tracks_.size(); ++i) out[i] = component(letter, i);
        return out;
    }

    Letter encode(std::span<const std::uint32_t> components) const {
        if (components.size() != tracks_.size()) throw LayoutError("letter arity mismatch");
        Letter l = 0;
        for (std::size_t i = 0; i < tracks_.size(); ++i) {
            if (components[i] >= tracks_[i].symbols.size()) throw LayoutError("symbol index out of range");
            l += components[i] * strides_[i];
        }
        return l;
    }

    /// Index of `symbol` in track `track`.
    std::uint32_t symbol_index(std::size_t track, const std::string& symbol) const {
        const auto& syms = tracks_.at(track).symbols;
        for (std::size_t i = 0; i < syms.size(); ++i)
            if (syms[i] == symbol) return static_cast<std::uint32_t>(i);
        throw LayoutError("symbol '" + symbol + "' not in track '" + tracks_[track].name + "'");
    }

    Letter letter_from_symbols(const std::vector<std::string>& symbols) const {
        if (symbols.size() != tracks_.size()) throw LayoutError("letter arity mismatch");
        std::vector<std::uint32_t> c(symbols.size());
        for (std::size_t i = 0; i < symbols.size(); ++i) c[i] = symbol_index(i, symbols[i]);
        return encode(c);
    }

    /// "m,0,c" for a three-track letter.
    std::string letter_to_string(Letter letter) const {
        std::string s;
        for (std::size_t i = 0; i < tracks_.size(); ++i) {
            if (i) s += ',';
            s += tracks_[i].symbols[component(letter, i)];
        }
        return s;
    }

    /// Renders a word track by track ("ccm|001|ccc"). Symbols longer than one
    /// character are space-separated.
    std::string word_to_string(const Word& w) const {
        if (w.empty()) return "ε";
        std::string s;
        for (std::size_t i = 0; i < tracks_.size(); ++i) {
            if (i) s += '|';
            bool wide = false;
            for (const auto& sym : tracks_[i].symbols) wide = wide || sym.size() != 1;
            for (std::size_t p = 0; p < w.size(); ++p) {
                if (wide && p) s += ' ';
                s += tracks_[i].symbols[component(w[p], i)];
            }
        }
        return s;
    }

    /// Builds a word from one string per track, one character per symbol
    /// (only valid for single-character symbols).
    Word word_from_strings(const std::vector<std::string>& per_track) const {
        if (per_track.size() != tracks_.size()) throw LayoutError("word arity mismatch");
        const std::size_t len = per_track.empty() ? 0 : per_track[0].size();
        Word w(len);
        for (std::size_t p = 0; p < len; ++p) {
            std::vector<std::string> syms;
            for (std::size_t i = 0; i < tracks_.size(); ++i) {
                if (per_track[i].size() != len) throw LayoutError("tracks of unequal length");
                syms.emplace_back(1, per_track[i][p]);
            }
            w[p] = letter_from_symbols(syms);
        }
        return w;
    }

    bool operator==(const TrackLayout& o) const { return tracks_ == o.tracks_; }

private:
    std::vector<Track> tracks_;
    std::vector<Letter> strides_;
    Letter letter_count_ = 1;
};

inline Track bit_track(std::string name) { return Track{std::move(name), {"0", "1"}}; }

inline void require_same_layout(const TrackLayout& a, const TrackLayout& b, const char* op) {
    if (!(a == b)) throw LayoutError(std::string(op) + ": layouts differ");
}

}  // namespace prmc
