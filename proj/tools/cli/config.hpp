#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "isofield/correlation.hpp"
#include "isofield/error.hpp"
#include "isofield/simulate.hpp"
#include "isofield/sphere.hpp"
#include "json.hpp"

namespace isofield::cli {

using nlohmann::json;

json load_json_file(const std::string& path);

// Reads one JSON object, rejecting unknown keys. Defaults that are applied get written into
// `resolved`, so the effective configuration can be echoed into output metadata.
class JsonReader {
public:
    JsonReader(const json& in, json& resolved, std::string path);

    bool has(const std::string& key) const;
    const json& raw(const std::string& key);

    template <class T>
    T get(const std::string& key) {
        return convert<T>(raw(key), key);
    }

    template <class T>
    T get_or(const std::string& key, const T& fallback) {
        if (!has(key)) {
            used_.insert(key);
            resolved_[key] = fallback;
            return fallback;
        }
        return get<T>(key);
    }

    JsonReader object(const std::string& key);
    std::string where(const std::string& key) const { return path_ + "." + key; }
    // Throws a validation error naming the first key that was never read.
    void finish() const;

private:
    template <class T>
    T convert(const json& j, const std::string& key) const {
        try {
            return j.get<T>();
        } catch (const json::exception&) {
            fail_validation("invalid value for key '" + where(key) + "'");
        }
    }

    const json& in_;
    json& resolved_;
    std::string path_;
    std::set<std::string> used_;
};

SpectralMeasure parse_atoms(const json& j, const std::string& where);
VectorSpectralPair parse_vector_pair(JsonReader r);
RadialFn parse_radial(JsonReader r, const std::string& base_dir);

struct CorrModel {
    enum class Kind { scalar, vector, kernel } kind = Kind::scalar;
    SpectralMeasure scalar;
    int dimension = 3;
    VectorSpectralPair pair;
    bool yaglom_route = false;
    RadialKernelSet kernels;
};

struct TensorEntry {
    std::vector<int> index;  // Cartesian indices, 1-based
    double value = 0.0;
};

CorrModel parse_model(const json& in, json& resolved, const std::string& base_dir);
std::vector<TensorEntry> evaluate_model(const CorrModel& m, const Vec3& sep);
// Column names for the index part of evaluate_model rows.
std::vector<std::string> model_index_names(const CorrModel& m);

SimulationPlan parse_plan(const json& in, json& resolved, FieldKind kind);
std::vector<std::pair<int, int>> parse_pairs(const json& in);

// Spectrum up to ell_max, from a closed form or a per-ell table.
AngularPowerSpectrum parse_spectrum(const json& in, json& resolved, int ell_max, bool& enforce_parity);

std::string field_kind_name(FieldKind k);
std::vector<std::string> component_names(FieldKind k);

}  // namespace isofield::cli
