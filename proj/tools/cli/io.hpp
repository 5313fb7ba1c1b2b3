#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "csv.hpp"
#include "json.hpp"
#include "isofield/simulate.hpp"
#include "isofield/sphere.hpp"

namespace isofield::cli {

// Long format: realization, point, x, y, z, component, value.
void write_realization(std::ostream& out, const FieldRealization& real, const CsvMeta& meta);

struct LoadedRealization {
    FieldRealization real;
    std::vector<Vec3> points;
    std::vector<std::string> components;
};

LoadedRealization read_realization(const CsvTable& t);

// Columns: p, q, a, b, value, stderr.
void write_correlation_estimates(std::ostream& out, const std::vector<CorrelationEstimate>& est,
                                 const std::vector<std::string>& components, const CsvMeta& meta);

// Columns: theta, phi, Theta, Q, U, V.
void write_stokes_map(std::ostream& out, const StokesMap& map, const CsvMeta& meta);
StokesMap read_stokes_map(const CsvTable& t);

// Number of Gauss-Legendre rows of a map written on sphere_grid(n); validation error when the
// nodes do not match that grid.
int infer_grid_rows(const StokesMap& map);

// Columns: ell, pair, value, stderr, over the ten pairs TT, TE, TB, TV, EE, EB, EV, BB, BV, VV.
void write_cell(std::ostream& out, const CellEstimate& est, const CsvMeta& meta);

CsvMeta make_meta(const std::string& command, const nlohmann::json& config, std::optional<std::uint64_t> seed);

// The outputs of `simulate` and `cmb synth`, shared with the determinism check.
void emit_simulation(std::ostream& out, const SimulationPlan& plan, const nlohmann::json& config);
void emit_cmb_synth(std::ostream& out, const AngularPowerSpectrum& spec, int grid_rows, std::uint64_t seed,
                    const nlohmann::json& config);

}  // namespace isofield::cli
