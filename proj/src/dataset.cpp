#include "conceptlab/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "conceptlab/errors.hpp"
#include "conceptlab/rng.hpp"

namespace conceptlab {

using ordered_json = nlohmann::ordered_json;

std::string to_string(Unit u) {
    switch (u) {
        case Unit::Pounds: return "pounds";
        case Unit::DegreesCelsius: return "degrees-celsius";
        case Unit::MohsHardness: return "mohs-hardness";
    }
    return "?";
}

std::optional<Unit> unit_from_string(const std::string& s) {
    if (s == "pounds") return Unit::Pounds;
    if (s == "degrees-celsius") return Unit::DegreesCelsius;
    if (s == "mohs-hardness") return Unit::MohsHardness;
    return std::nullopt;
}

namespace {

struct RelationInfo {
    Relation id;
    const char* name;
    Relation opposite;
    bool greater; // head measurement larger than tail's
};

constexpr RelationInfo kRelations[] = {
    {Relation::HeavierThan, "heavier_than", Relation::LighterThan, true},
    {Relation::LighterThan, "lighter_than", Relation::HeavierThan, false},
    {Relation::HotterThan, "hotter_than", Relation::ColderThan, true},
    {Relation::ColderThan, "colder_than", Relation::HotterThan, false},
    {Relation::HarderThan, "harder_than", Relation::SofterThan, true},
    {Relation::SofterThan, "softer_than", Relation::HarderThan, false},
    {Relation::LargerThan, "larger_than", Relation::SmallerThan, true},
    {Relation::SmallerThan, "smaller_than", Relation::LargerThan, false},
    {Relation::TallerThan, "taller_than", Relation::ShorterThan, true},
    {Relation::ShorterThan, "shorter_than", Relation::TallerThan, false},
};

const RelationInfo& info(Relation r) {
    return kRelations[static_cast<int>(r)];
}

} // namespace

std::string to_string(Relation r) { return info(r).name; }

std::optional<Relation> relation_from_string(const std::string& s) {
    for (const auto& ri : kRelations) {
        if (s == ri.name) return ri.id;
    }
    return std::nullopt;
}

Relation antonym(Relation r) { return info(r).opposite; }

bool relation_is_greater(Relation r) { return info(r).greater; }

std::string to_string(Category c) {
    switch (c) {
        case Category::Color: return "color";
        case Category::Shape: return "shape";
        case Category::Material: return "material";
        case Category::Size: return "size";
        case Category::Height: return "height";
        case Category::Mass: return "mass";
        case Category::Temperature: return "temperature";
        case Category::Hardness: return "hardness";
    }
    return "?";
}

std::optional<Category> category_from_string(const std::string& s) {
    for (Category c : {Category::Color, Category::Shape, Category::Material, Category::Size,
                       Category::Height, Category::Mass, Category::Temperature, Category::Hardness}) {
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

bool is_comparison_category(Category c) {
    switch (c) {
        case Category::Size:
        case Category::Height:
        case Category::Mass:
        case Category::Temperature:
        case Category::Hardness:
            return true;
        default:
            return false;
    }
}

std::pair<Relation, Relation> relation_pair_for(Category c) {
    switch (c) {
        case Category::Size: return {Relation::LargerThan, Relation::SmallerThan};
        case Category::Height: return {Relation::TallerThan, Relation::ShorterThan};
        case Category::Mass: return {Relation::HeavierThan, Relation::LighterThan};
        case Category::Temperature: return {Relation::HotterThan, Relation::ColderThan};
        case Category::Hardness: return {Relation::HarderThan, Relation::SofterThan};
        default:
            throw ValidationError("category '" + to_string(c) + "' is not a comparison category");
    }
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

} // namespace

std::vector<MeasurementRecord> load_measurements(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open measurement table: " + path);

    std::optional<Unit> unit;
    std::vector<MeasurementRecord> records;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const std::string prefix = "# unit:";
            if (t.rfind(prefix, 0) == 0) {
                const std::string u = trim(t.substr(prefix.size()));
                unit = unit_from_string(u);
                if (!unit) {
                    throw ParseError(path + ":" + std::to_string(lineno) +
                                     ": unknown unit '" + u + "'");
                }
            }
            continue;
        }
        if (t == "object,value") continue; // optional header row
        const auto comma = t.rfind(',');
        if (comma == std::string::npos) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'object,value'");
        }
        MeasurementRecord rec;
        rec.object_name = trim(t.substr(0, comma));
        const std::string value_str = trim(t.substr(comma + 1));
        if (rec.object_name.empty()) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": empty object name");
        }
        try {
            std::size_t consumed = 0;
            rec.value = std::stod(value_str, &consumed);
            if (consumed != value_str.size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": bad numeric value '" + value_str + "'");
        }
        if (!std::isfinite(rec.value)) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": non-finite value");
        }
        if (!unit) {
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": measurement before '# unit:' declaration");
        }
        rec.unit = *unit;
        if (!seen.insert(rec.object_name).second) {
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": duplicate object name '" + rec.object_name + "'");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

ConceptDataset build_comparison_pairs(const std::vector<MeasurementRecord>& records,
                                      double threshold,
                                      std::pair<Relation, Relation> relation_pair,
                                      std::uint64_t seed,
                                      Category category) {
    if (!is_comparison_category(category)) {
        throw ValidationError("category '" + to_string(category) + "' has no pair builder");
    }
    if (!(threshold > 0.0)) throw ValidationError("threshold must be > 0");
    if (antonym(relation_pair.first) != relation_pair.second) {
        throw ValidationError("relation pair is not an antonym pair");
    }

    ConceptDataset ds;
    ds.category = category;
    ds.metadata.threshold = threshold;
    ds.metadata.seed = seed;

    if (records.empty()) {
        ds.metadata.item_count = 0;
        return ds;
    }

    std::unordered_set<std::string> seen;
    const Unit unit = records.front().unit;
    for (const auto& rec : records) {
        if (!seen.insert(rec.object_name).second) {
            throw ValidationError("duplicate object name '" + rec.object_name + "'");
        }
        if (rec.unit != unit) {
            throw ValidationError("mixed units in measurement table ('" + to_string(unit) +
                                  "' vs '" + to_string(rec.unit) + "')");
        }
        if (!std::isfinite(rec.value)) {
            throw ValidationError("non-finite measurement for '" + rec.object_name + "'");
        }
    }
    ds.metadata.threshold_unit = unit;

    Rng rng(seed);
    for (std::size_t i = 0; i < records.size(); ++i) {
        for (std::size_t j = i + 1; j < records.size(); ++j) {
            if (!(std::abs(records[i].value - records[j].value) > threshold)) continue;
            const bool swap = rng.coin_flip();
            const MeasurementRecord& head = swap ? records[j] : records[i];
            const MeasurementRecord& tail = swap ? records[i] : records[j];
            const Relation rel = rng.coin_flip() ? relation_pair.first : relation_pair.second;
            ComparisonTriplet trip;
            trip.head = head.object_name;
            trip.tail = tail.object_name;
            trip.relation = rel;
            trip.label = relation_is_greater(rel) ? head.value > tail.value
                                                  : head.value < tail.value;
            ds.triplets.push_back(std::move(trip));
        }
    }

    // Balance labels by swapping the relation (which flips the truth value)
    // on randomly chosen majority-class items.
    auto count_true = [&] {
        return static_cast<std::size_t>(
            std::count_if(ds.triplets.begin(), ds.triplets.end(),
                          [](const ComparisonTriplet& t) { return t.label; }));
    };
    std::size_t n_true = count_true();
    std::size_t n_false = ds.triplets.size() - n_true;
    while (n_true > n_false + 1 || n_false > n_true + 1) {
        const bool flip_true = n_true > n_false;
        std::vector<std::size_t> pool;
        for (std::size_t k = 0; k < ds.triplets.size(); ++k) {
            if (ds.triplets[k].label == flip_true) pool.push_back(k);
        }
        const std::size_t pick = pool[rng.uniform_below(pool.size())];
        ds.triplets[pick].relation = antonym(ds.triplets[pick].relation);
        ds.triplets[pick].label = !ds.triplets[pick].label;
        if (flip_true) {
            --n_true;
            ++n_false;
        } else {
            ++n_true;
            --n_false;
        }
    }

    ds.metadata.item_count = ds.triplets.size();
    return ds;
}

namespace {

void validate_triplet(const ComparisonTriplet& t, const std::string& where) {
    if (t.head.empty()) throw ValidationError(where + ": field 'head' is empty");
    if (t.tail.empty()) throw ValidationError(where + ": field 'tail' is empty");
    if (t.head == t.tail) throw ValidationError(where + ": field 'tail' equals 'head'");
}

void validate_instance(const AttributeInstance& a, const std::string& where) {
    if (a.head.empty()) throw ValidationError(where + ": field 'head' is empty");
    if (a.option_a.empty() || a.option_b.empty()) {
        throw ValidationError(where + ": field 'options' has an empty entry");
    }
    if (a.option_a == a.option_b) {
        throw ValidationError(where + ": field 'options' entries are identical");
    }
    if (a.gold != 0 && a.gold != 1) {
        throw ValidationError(where + ": field 'gold' must be 0 or 1");
    }
}

} // namespace

ConceptDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset: " + path);

    ConceptDataset ds;
    bool have_category = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
        if (!j.is_object() || !j.contains("category") || !j["category"].is_string()) {
            throw ParseError(where + ": missing 'category'");
        }
        const auto cat = category_from_string(j["category"].get<std::string>());
        if (!cat) {
            throw ValidationError(where + ": field 'category' has unknown value '" +
                                  j["category"].get<std::string>() + "'");
        }
        if (!have_category) {
            ds.category = *cat;
            have_category = true;
        } else if (*cat != ds.category) {
            throw ValidationError(where + ": field 'category' differs from previous lines");
        }
        try {
            if (is_comparison_category(*cat)) {
                ComparisonTriplet t;
                t.head = j.at("head").get<std::string>();
                const auto rel = relation_from_string(j.at("relation").get<std::string>());
                if (!rel) {
                    throw ValidationError(where + ": field 'relation' has unknown value");
                }
                t.relation = *rel;
                t.tail = j.at("tail").get<std::string>();
                t.label = j.at("label").get<bool>();
                validate_triplet(t, where);
                ds.triplets.push_back(std::move(t));
            } else {
                AttributeInstance a;
                a.head = j.at("head").get<std::string>();
                const auto& opts = j.at("options");
                if (!opts.is_array() || opts.size() != 2) {
                    throw ValidationError(where + ": field 'options' must be a 2-element array");
                }
                a.option_a = opts[0].get<std::string>();
                a.option_b = opts[1].get<std::string>();
                a.gold = j.at("gold").get<int>();
                validate_instance(a, where);
                ds.instances.push_back(std::move(a));
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    ds.metadata.item_count = ds.size();
    return ds;
}

std::string serialize_dataset(const ConceptDataset& ds) {
    std::ostringstream out;
    const std::string cat = to_string(ds.category);
    if (is_comparison_category(ds.category)) {
        for (const auto& t : ds.triplets) {
            ordered_json j;
            j["category"] = cat;
            j["head"] = t.head;
            j["relation"] = to_string(t.relation);
            j["tail"] = t.tail;
            j["label"] = t.label;
            out << j.dump() << "\n";
        }
    } else {
        for (const auto& a : ds.instances) {
            ordered_json j;
            j["category"] = cat;
            j["head"] = a.head;
            j["options"] = ordered_json::array({a.option_a, a.option_b});
            j["gold"] = a.gold;
            out << j.dump() << "\n";
        }
    }
    return out.str();
}

void save_dataset(const ConceptDataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write dataset: " + path);
    out << serialize_dataset(ds);
}

DatasetStats dataset_stats(const ConceptDataset& ds) {
    DatasetStats st;
    st.total = ds.size();
    std::unordered_set<std::string> entities;
    if (is_comparison_category(ds.category)) {
        for (const auto& t : ds.triplets) {
            (t.label ? st.label_true : st.label_false)++;
            entities.insert(t.head);
            entities.insert(t.tail);
        }
    } else {
        for (const auto& a : ds.instances) {
            (a.gold == 0 ? st.label_true : st.label_false)++;
            entities.insert(a.head);
        }
    }
    st.distinct_entities = entities.size();
    return st;
}

} // namespace conceptlab
