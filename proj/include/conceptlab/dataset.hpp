#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace conceptlab {

enum class Unit { Pounds, DegreesCelsius, MohsHardness };

std::string to_string(Unit u);
std::optional<Unit> unit_from_string(const std::string& s);

enum class Relation {
    HeavierThan,
    LighterThan,
    HotterThan,
    ColderThan,
    HarderThan,
    SofterThan,
    LargerThan,
    SmallerThan,
    TallerThan,
    ShorterThan,
};

std::string to_string(Relation r);
std::optional<Relation> relation_from_string(const std::string& s);

/// Antonym of a relation; an involution (antonym(antonym(r)) == r).
Relation antonym(Relation r);

/// True when the relation asserts that the head's measurement is the larger one.
bool relation_is_greater(Relation r);

enum class Category { Color, Shape, Material, Size, Height, Mass, Temperature, Hardness };

std::string to_string(Category c);
std::optional<Category> category_from_string(const std::string& s);

/// Comparison categories pose (head, relation, tail) judgments; the rest are
/// two-option attribute selection.
bool is_comparison_category(Category c);

/// The (relation, antonym) pair a comparison category is built from.
std::pair<Relation, Relation> relation_pair_for(Category c);

struct MeasurementRecord {
    std::string object_name;
    double value = 0.0;
    Unit unit = Unit::Pounds;
    std::optional<std::string> source_id;
};

struct ComparisonTriplet {
    std::string head;
    Relation relation;
    std::string tail;
    bool label = false; // whether the stated relation actually holds
};

struct AttributeInstance {
    std::string head;
    std::string option_a;
    std::string option_b;
    int gold = 0; // index of the correct option, 0 or 1
};

struct DatasetMetadata {
    std::optional<double> threshold;
    std::optional<Unit> threshold_unit;
    std::optional<std::uint64_t> seed;
    std::size_t item_count = 0;
};

struct ConceptDataset {
    Category category = Category::Mass;
    std::vector<ComparisonTriplet> triplets;   // populated for comparison categories
    std::vector<AttributeInstance> instances;  // populated for attribute categories
    DatasetMetadata metadata;

    std::size_t size() const {
        return is_comparison_category(category) ? triplets.size() : instances.size();
    }
};

struct DatasetStats {
    std::size_t total = 0;
    std::size_t label_true = 0;   // triplets with label true / instances with gold 0
    std::size_t label_false = 0;
    std::size_t distinct_entities = 0;
};

/// Parse a measurement table: two-column CSV `object,value` with a
/// `# unit: <pounds|degrees-celsius|mohs-hardness>` comment line.
std::vector<MeasurementRecord> load_measurements(const std::string& path);

/// Turn a measurement table into a balanced comparison dataset.
///
/// Every unordered object pair whose measurement gap strictly exceeds
/// `threshold` yields exactly one triplet. Orientation and relation are drawn
/// from `seed`; a balancing pass then swaps relations (and hence labels) on
/// randomly chosen majority-class items until |#true - #false| <= 1.
ConceptDataset build_comparison_pairs(const std::vector<MeasurementRecord>& records,
                                      double threshold,
                                      std::pair<Relation, Relation> relation_pair,
                                      std::uint64_t seed,
                                      Category category);

/// Read a dataset from canonical JSON-lines and validate all invariants.
ConceptDataset load_dataset(const std::string& path);

/// Serialize in the canonical line format. Stable: identical datasets give
/// identical bytes.
std::string serialize_dataset(const ConceptDataset& ds);
void save_dataset(const ConceptDataset& ds, const std::string& path);

DatasetStats dataset_stats(const ConceptDataset& ds);

} // namespace conceptlab
