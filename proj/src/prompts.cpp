#include "conceptlab/prompts.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "conceptlab/errors.hpp"
#include "conceptlab/rng.hpp"

namespace conceptlab {

std::string to_string(PromptMode m) {
    switch (m) {
        case PromptMode::Mlm: return "mlm";
        case PromptMode::Causal: return "causal";
        case PromptMode::MatchingObject: return "matching-object";
        case PromptMode::MatchingAttribute: return "matching-attribute";
    }
    return "?";
}

std::optional<PromptMode> prompt_mode_from_string(const std::string& s) {
    for (PromptMode m : {PromptMode::Mlm, PromptMode::Causal, PromptMode::MatchingObject,
                         PromptMode::MatchingAttribute}) {
        if (s == to_string(m)) return m;
    }
    return std::nullopt;
}

namespace {

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + needle.size())) {
        ++n;
    }
    return n;
}

std::string replace_all(std::string text, const std::string& placeholder,
                        const std::string& value) {
    for (auto pos = text.find(placeholder); pos != std::string::npos;
         pos = text.find(placeholder, pos + value.size())) {
        text.replace(pos, placeholder.size(), value);
    }
    return text;
}

void require_no_residue(const std::string& text) {
    for (const char* p : {"[Head]", "[Rel]", "[Tail]", "[Attribute]"}) {
        if (text.find(p) != std::string::npos) {
            throw ValidationError(std::string("unresolved placeholder ") + p);
        }
    }
}

} // namespace

void validate_template(const PromptTemplate& t) {
    if (t.task != "all" && !category_from_string(t.task)) {
        throw ValidationError("template task '" + t.task + "' is not a category or 'all'");
    }
    const std::size_t masks = count_occurrences(t.body, kMaskMarker);
    switch (t.mode) {
        case PromptMode::Mlm:
            if (masks != 1) {
                throw ValidationError("mlm template must contain exactly one [MASK]: " + t.body);
            }
            break;
        case PromptMode::Causal:
            if (masks != 0) {
                throw ValidationError("causal template must not contain [MASK]: " + t.body);
            }
            break;
        case PromptMode::MatchingObject:
            if (count_occurrences(t.body, "[Head]") != 1 ||
                t.body.find("[Attribute]") != std::string::npos) {
                throw ValidationError("matching-object template needs exactly one [Head]: " +
                                      t.body);
            }
            break;
        case PromptMode::MatchingAttribute:
            if (count_occurrences(t.body, "[Attribute]") != 1 ||
                t.body.find("[Head]") != std::string::npos) {
                throw ValidationError(
                    "matching-attribute template needs exactly one [Attribute]: " + t.body);
            }
            break;
    }
}

RelationLexicon RelationLexicon::standard() {
    RelationLexicon lex;
    auto put = [&](Relation r, const char* surface, const char* word) {
        lex.entries_[r] = RelationEntry{surface, antonym(r), word};
    };
    put(Relation::HeavierThan, "heavier", "heavy");
    put(Relation::LighterThan, "lighter", "light");
    put(Relation::HotterThan, "hotter", "hot");
    put(Relation::ColderThan, "colder", "cold");
    put(Relation::HarderThan, "harder", "hard");
    put(Relation::SofterThan, "softer", "soft");
    put(Relation::LargerThan, "larger", "large");
    put(Relation::SmallerThan, "smaller", "small");
    put(Relation::TallerThan, "taller", "tall");
    put(Relation::ShorterThan, "shorter", "short");
    return lex;
}

const RelationEntry& RelationLexicon::entry(Relation r) const {
    const auto it = entries_.find(r);
    if (it == entries_.end()) {
        throw ValidationError("relation '" + to_string(r) + "' missing from lexicon");
    }
    return it->second;
}

const std::string& RelationLexicon::surface(Relation r) const { return entry(r).surface; }

Relation RelationLexicon::antonym_of(Relation r) const { return entry(r).antonym; }

const std::string& RelationLexicon::attribute_word(Relation r) const {
    return entry(r).attribute_word;
}

void PromptBank::add(PromptTemplate t) {
    validate_template(t);
    templates_.push_back(std::move(t));
}

std::vector<PromptTemplate> PromptBank::for_task(Category task, PromptMode mode) const {
    std::vector<PromptTemplate> out;
    const std::string task_name = to_string(task);
    for (const auto& t : templates_) {
        if (t.mode == mode && (t.task == task_name || t.task == "all")) out.push_back(t);
    }
    return out;
}

PromptBank load_prompt_bank(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open prompt bank: " + path);
    PromptBank bank;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
        PromptTemplate t;
        try {
            t.task = j.at("task").get<std::string>();
            const std::string mode = j.at("mode").get<std::string>();
            const auto m = prompt_mode_from_string(mode);
            if (!m) throw ValidationError(where + ": unknown mode '" + mode + "'");
            t.mode = *m;
            t.body = j.at("template").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
        try {
            bank.add(std::move(t));
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
    }
    return bank;
}

MlmRendering render_mlm(const PromptTemplate& t, const ComparisonTriplet& x,
                        const RelationLexicon& lex) {
    if (t.mode != PromptMode::Mlm) throw ValidationError("template mode is not mlm");
    validate_template(t);
    std::string text = replace_all(t.body, "[Head]", x.head);
    text = replace_all(text, "[Rel]", lex.surface(x.relation));
    text = replace_all(text, "[Tail]", x.tail);
    require_no_residue(text);
    return MlmRendering{std::move(text), {"yes", "no"}};
}

MlmRendering render_mlm_option(const PromptTemplate& t, const AttributeInstance& x,
                               const std::string& option) {
    if (t.mode != PromptMode::Mlm) throw ValidationError("template mode is not mlm");
    validate_template(t);
    std::string text = replace_all(t.body, "[Head]", x.head);
    text = replace_all(text, "[Tail]", option);
    require_no_residue(text);
    return MlmRendering{std::move(text), {"yes", "no"}};
}

CausalPair render_causal_pair(const PromptTemplate& t, const ComparisonTriplet& x,
                              const RelationLexicon& lex) {
    if (t.mode != PromptMode::Causal) throw ValidationError("template mode is not causal");
    validate_template(t);
    std::string base = replace_all(t.body, "[Head]", x.head);
    base = replace_all(base, "[Tail]", x.tail);
    CausalPair pair;
    pair.assertion = replace_all(base, "[Rel]", lex.surface(x.relation));
    pair.antonym_assertion = replace_all(base, "[Rel]", lex.surface(lex.antonym_of(x.relation)));
    require_no_residue(pair.assertion);
    require_no_residue(pair.antonym_assertion);
    return pair;
}

CausalPair render_causal_options(const PromptTemplate& t, const AttributeInstance& x) {
    if (t.mode != PromptMode::Causal) throw ValidationError("template mode is not causal");
    validate_template(t);
    const std::string base = replace_all(t.body, "[Head]", x.head);
    CausalPair pair;
    pair.assertion = replace_all(base, "[Tail]", x.option_a);
    pair.antonym_assertion = replace_all(base, "[Tail]", x.option_b);
    require_no_residue(pair.assertion);
    require_no_residue(pair.antonym_assertion);
    return pair;
}

MatchingRendering render_matching(const PromptTemplate& object_t,
                                  const PromptTemplate& attribute_t,
                                  const ComparisonTriplet& x,
                                  const std::string& attribute_word) {
    if (object_t.mode != PromptMode::MatchingObject ||
        attribute_t.mode != PromptMode::MatchingAttribute) {
        throw ValidationError("render_matching needs matching-object and matching-attribute "
                              "templates");
    }
    validate_template(object_t);
    validate_template(attribute_t);
    MatchingRendering r;
    r.object_1 = replace_all(object_t.body, "[Head]", x.head);
    r.object_2 = replace_all(object_t.body, "[Head]", x.tail);
    r.attribute = replace_all(attribute_t.body, "[Attribute]", attribute_word);
    require_no_residue(r.object_1);
    require_no_residue(r.object_2);
    require_no_residue(r.attribute);
    return r;
}

MatchingRendering render_matching_options(const PromptTemplate& object_t,
                                          const PromptTemplate& attribute_t,
                                          const AttributeInstance& x) {
    if (object_t.mode != PromptMode::MatchingObject ||
        attribute_t.mode != PromptMode::MatchingAttribute) {
        throw ValidationError("render_matching_options needs matching-object and "
                              "matching-attribute templates");
    }
    validate_template(object_t);
    validate_template(attribute_t);
    MatchingRendering r;
    r.object_1 = replace_all(attribute_t.body, "[Attribute]", x.option_a);
    r.object_2 = replace_all(attribute_t.body, "[Attribute]", x.option_b);
    r.attribute = replace_all(object_t.body, "[Head]", x.head);
    require_no_residue(r.object_1);
    require_no_residue(r.object_2);
    require_no_residue(r.attribute);
    return r;
}

std::string assemble_few_shot(const std::vector<std::string>& demos, const std::string& query,
                              std::size_t k) {
    if (demos.size() != k) {
        throw ValidationError("few-shot k=" + std::to_string(k) + " but got " +
                              std::to_string(demos.size()) + " demonstrations");
    }
    std::ostringstream out;
    for (const auto& d : demos) out << d << "\n";
    out << query;
    return out.str();
}

std::vector<std::size_t> sample_demo_indices(std::size_t pool_size, std::size_t exclude,
                                             std::size_t k, std::uint64_t seed) {
    std::vector<std::size_t> pool;
    pool.reserve(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i) {
        if (i != exclude) pool.push_back(i);
    }
    if (k > pool.size()) {
        throw ValidationError("few-shot k=" + std::to_string(k) + " exceeds pool of " +
                              std::to_string(pool.size()));
    }
    Rng rng(seed);
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t n = 0; n < k; ++n) {
        const std::size_t pick = rng.uniform_below(pool.size());
        out.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return out;
}

} // namespace conceptlab
