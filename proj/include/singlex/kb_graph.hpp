#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "singlex/errors.hpp"

namespace singlex {

// A Concept is a normalized text token: lowercase, no whitespace,
// internal whitespace runs collapsed to single underscores.
using Concept = std::string;

/// Normalize raw text into a Concept. Idempotent.
inline Concept normalize_concept(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    bool in_space = false;
    for (unsigned char ch : raw) {
        if (std::isspace(ch)) {
            in_space = !out.empty();
            continue;
        }
        if (in_space) {
            out.push_back('_');
            in_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(ch)));
    }
    if (out.empty()) throw EmptyConcept();
    return out;
}

// Open registry of relation names. Seeded with the usual ConceptNet-style
// inventory; ingestion registers any relation it encounters.
class RelationRegistry {
  public:
    static RelationRegistry& instance() {
        static RelationRegistry reg;
        return reg;
    }

    bool contains(const std::string& name) const { return names_.count(name) > 0; }

    void add(const std::string& name) {
        if (name.empty()) throw UnknownRelation("<empty>");
        names_.insert(name);
    }

    const std::set<std::string>& names() const { return names_; }

  private:
    RelationRegistry()
        : names_{"IsA",      "UsedFor",     "MadeOf",   "HasProperty",
                 "Causes",   "MotivatedBy", "PartOf",   "CapableOf",
                 "AtLocation", "Desires",   "HasA",     "CausesDesire"} {}
    std::set<std::string> names_;
};

// Case-sensitive relation token; must be registered.
struct Relation {
    std::string name;

    explicit Relation(std::string n, bool auto_register = false) : name(std::move(n)) {
        if (auto_register) RelationRegistry::instance().add(name);
        if (!RelationRegistry::instance().contains(name)) throw UnknownRelation(name);
    }

    auto operator<=>(const Relation&) const = default;
};

enum class EmotionCategory { Anger, Disgust, Surprise, Joy, Sadness, Fear };

inline constexpr std::array<EmotionCategory, 6> kAllEmotions = {
    EmotionCategory::Anger, EmotionCategory::Disgust, EmotionCategory::Surprise,
    EmotionCategory::Joy,   EmotionCategory::Sadness, EmotionCategory::Fear};

inline std::string to_string(EmotionCategory e) {
    switch (e) {
        case EmotionCategory::Anger: return "Anger";
        case EmotionCategory::Disgust: return "Disgust";
        case EmotionCategory::Surprise: return "Surprise";
        case EmotionCategory::Joy: return "Joy";
        case EmotionCategory::Sadness: return "Sadness";
        case EmotionCategory::Fear: return "Fear";
    }
    return "?";
}

inline EmotionCategory parse_emotion(const std::string& label) {
    for (EmotionCategory e : kAllEmotions)
        if (to_string(e) == label) return e;
    throw UnknownEmotion(label);
}

/// Lowercase node name an emotion category contributes to an affect graph.
inline Concept emotion_node(EmotionCategory e) {
    std::string s = to_string(e);
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// One directed, typed, confidence-weighted edge.
struct Assertion {
    Concept subject;
    Relation relation;
    Concept object;
    double confidence = 1.0;
};

// A set of assertions keyed by (subject, relation, object); duplicates
// max-merge their confidences. Immutable once construction is done.
class KnowledgeGraph {
  public:
    using Key = std::tuple<Concept, std::string, Concept>;

    void add(const Assertion& a) {
        if (a.subject == a.object) throw SelfLoop(a.subject);
        if (!std::isfinite(a.confidence) || a.confidence <= 0.0)
            throw OutOfRange("assertion confidence must be finite and positive");
        Key key{a.subject, a.relation.name, a.object};
        auto [it, inserted] = edges_.emplace(key, a.confidence);
        if (!inserted) it->second = std::max(it->second, a.confidence);
    }

    std::size_t size() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }

    bool contains(const Concept& s, const std::string& rel, const Concept& o) const {
        return edges_.count(Key{s, rel, o}) > 0;
    }

    std::optional<double> confidence(const Concept& s, const std::string& rel,
                                     const Concept& o) const {
        auto it = edges_.find(Key{s, rel, o});
        if (it == edges_.end()) return std::nullopt;
        return it->second;
    }

    std::set<Concept> nodes() const {
        std::set<Concept> out;
        for (const auto& [key, conf] : edges_) {
            out.insert(std::get<0>(key));
            out.insert(std::get<2>(key));
        }
        return out;
    }

    std::vector<Assertion> assertions() const {
        std::vector<Assertion> out;
        out.reserve(edges_.size());
        for (const auto& [key, conf] : edges_)
            out.push_back({std::get<0>(key), Relation(std::get<1>(key)),
                           std::get<2>(key), conf});
        return out;
    }

    const std::map<Key, double>& edges() const { return edges_; }

  private:
    std::map<Key, double> edges_;
};

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

inline bool skippable(const std::string& line) {
    return line.empty() || line[0] == '#';
}

inline double parse_confidence(const std::string& s, std::size_t line_no) {
    double v;
    std::size_t consumed = 0;
    try {
        v = std::stod(s, &consumed);
    } catch (const std::exception&) {
        throw ParseError("bad confidence '" + s + "'", line_no);
    }
    if (consumed != s.size()) throw ParseError("bad confidence '" + s + "'", line_no);
    if (!std::isfinite(v) || v <= 0.0)
        throw ParseError("confidence must be finite and positive", line_no);
    return v;
}

}  // namespace detail

/// Parse an assertion file: `subject<TAB>relation<TAB>object<TAB>confidence`
/// per line, '#' comments. Concepts are normalized; relations are registered
/// on sight; duplicate keys max-merge.
inline KnowledgeGraph load_assertions(std::istream& in) {
    KnowledgeGraph g;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::skippable(line)) continue;
        auto fields = detail::split_tabs(line);
        if (fields.size() != 4)
            throw ParseError("expected 4 tab-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        double conf = detail::parse_confidence(fields[3], line_no);
        if (fields[1].empty() || fields[1].find_first_of(" \t") != std::string::npos)
            throw ParseError("bad relation token '" + fields[1] + "'", line_no);
        Concept subj, obj;
        try {
            subj = normalize_concept(fields[0]);
            obj = normalize_concept(fields[2]);
        } catch (const EmptyConcept&) {
            throw ParseError("empty concept field", line_no);
        }
        try {
            g.add({subj, Relation(fields[1], /*auto_register=*/true), obj, conf});
        } catch (const SelfLoop&) {
            throw ParseError("self-loop on '" + subj + "'", line_no);
        }
    }
    return g;
}

inline KnowledgeGraph load_assertions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open assertion file '" + path + "'");
    return load_assertions(in);
}

/// Parse an emotion label file: `concept<TAB>EmotionCategory` per line.
inline std::vector<std::pair<Concept, EmotionCategory>> load_emotion_labels(
    std::istream& in) {
    std::vector<std::pair<Concept, EmotionCategory>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::skippable(line)) continue;
        auto fields = detail::split_tabs(line);
        if (fields.size() != 2)
            throw ParseError("expected 2 tab-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        Concept c;
        try {
            c = normalize_concept(fields[0]);
        } catch (const EmptyConcept&) {
            throw ParseError("empty concept field", line_no);
        }
        try {
            out.emplace_back(c, parse_emotion(fields[1]));
        } catch (const UnknownEmotion& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return out;
}

inline std::vector<std::pair<Concept, EmotionCategory>> load_emotion_labels(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open label file '" + path + "'");
    return load_emotion_labels(in);
}

/// Build an affect graph: one HasProperty edge per (concept, emotion) pair,
/// confidence 1.0, emotion nodes are the lowercased category names.
inline KnowledgeGraph build_affect_graph(
    const std::vector<std::pair<Concept, EmotionCategory>>& labels) {
    KnowledgeGraph g;
    for (const auto& [name, emotion] : labels)
        g.add({name, Relation("HasProperty"), emotion_node(emotion), 1.0});
    return g;
}

/// Write a graph back out in the assertion file format, sorted by key.
inline void save_assertions(const KnowledgeGraph& g, std::ostream& out) {
    char buf[64];
    for (const auto& [key, conf] : g.edges()) {
        std::snprintf(buf, sizeof(buf), "%.17g", conf);
        out << std::get<0>(key) << '\t' << std::get<1>(key) << '\t'
            << std::get<2>(key) << '\t' << buf << '\n';
    }
}

}  // namespace singlex
