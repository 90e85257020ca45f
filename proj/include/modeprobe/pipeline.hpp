#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "modeprobe/detect.hpp"
#include "modeprobe/mie.hpp"
#include "modeprobe/types.hpp"
#include "modeprobe/weakmeas.hpp"

namespace modeprobe {

inline constexpr const char* artifact_version = "1.0.0";

// Scenario names accepted by the CLI, in canonical order.
const std::vector<std::string>& scenario_names();
bool is_scenario(const std::string& name);

// Sweep axis of a scenario. values() returns `points` samples from min to
// max inclusive, spaced linearly or geometrically; a log sweep requires
// 0 < min and 0 < max. Throws ConfigInvalid on a malformed axis.
struct SweepSpec {
    std::string variable;
    double min = 0.0;
    double max = 0.0;
    int points = 1;
    bool log = false;

    std::vector<double> values() const;
};

// A run configuration is a flat map from dotted keys to JSON scalars. Units
// are SI base units (meters, watts, hertz, radians); no unit suffixes are
// parsed. Unknown keys, nested values, and type mismatches against the
// defaults are rejected with ConfigInvalid naming the key.
class RunConfig {
  public:
    // Full key set with default values for the scenario: Fig. 5 caption
    // geometry (sphere diameter 250 um, tau_r = 1 Hz, lambda = 125 um,
    // omega_0 = 150 um), relative index 2.19, both dark fractions 0.5 %.
    // fig6/fig7 override theta = phi = 0.01 rad, and each scenario carries
    // its own sweep axis.
    static RunConfig defaults(const std::string& scenario);

    // defaults(scenario) overlaid with the parsed config file and then the
    // CLI `key=value` overrides, in that order. A "scenario" key in the
    // overlay must agree with the scenario argument; "artifact.version" is
    // accepted and rewritten, so a sidecar can be fed back as a config.
    static RunConfig resolve(const std::string& scenario, const nlohmann::json& overlay,
                             const std::vector<std::string>& overrides);

    // Reads and parses a JSON config file. Throws IOFailure when unreadable
    // and ConfigInvalid when not a flat JSON object of scalars.
    static nlohmann::json parse_file(const std::string& path);

    const std::string& scenario() const { return scenario_; }

    // Typed access; ConfigInvalid when the key is absent or mistyped.
    double number(const std::string& key) const;
    long long integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::string text(const std::string& key) const;

    void set(const std::string& key, const nlohmann::json& value);

    // Domain views assembled from the flat keys.
    BeamGeometry geometry() const;
    MieMedium sphere() const;
    InterferometerSetting interferometer() const;
    DetectionSetting detection() const;
    Deformation deformation() const;
    ModeIndex probe() const;
    SweepSpec sweep() const;
    std::uint64_t seed() const;
    std::string output_path() const;

    // Fully resolved config (defaults included) with sorted keys.
    nlohmann::json to_json() const;

  private:
    std::string scenario_;
    std::map<std::string, nlohmann::json> entries_;
};

// Warnings, not errors: deformation outside the linear regime, theta or phi
// near 0 or pi, probe waist smaller than the sphere radius, and output
// conventions that differ from the documented headline choice. The fully
// default config of every scenario yields none.
std::vector<std::string> validate(const RunConfig& config);

// One output table. `suffix` is empty for the primary table and is inserted
// before the output path's extension otherwise (the mie scenario emits a
// second, angular table under "_angles").
struct OutputTable {
    std::string suffix;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Scenario computation without file output. Sweep points are evaluated
// concurrently; rows appear in sweep order regardless of completion order.
std::vector<OutputTable> run_tables(const RunConfig& config);

// CSV text of a table: comma-separated header plus rows, '\n' line ends,
// floats already formatted to 17 significant digits by the row builders.
std::string csv_text(const OutputTable& table);

// File names derived from the output path: "out.csv" maps to "out_angles.csv"
// for suffix "_angles" and to "out.config.json" for the sidecar.
std::string table_path(const std::string& output_path, const std::string& suffix);
std::string sidecar_path(const std::string& output_path);

// run_tables plus file output: one CSV per table and a sidecar JSON of the
// resolved config, so a rerun from the sidecar reproduces every CSV byte for
// byte. Returns the paths written, primary table first, sidecar last.
std::vector<std::string> run_scenario(const RunConfig& config);

}  // namespace modeprobe
