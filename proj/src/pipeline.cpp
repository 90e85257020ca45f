#include "modeprobe/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>

#include "modeprobe/constants.hpp"
#include "modeprobe/deform.hpp"
#include "modeprobe/detect.hpp"
#include "modeprobe/errors.hpp"
#include "modeprobe/fisher.hpp"
#include "modeprobe/hgbasis.hpp"
#include "modeprobe/mie.hpp"

namespace modeprobe {

namespace {

using Row = std::vector<std::string>;
using nlohmann::json;

std::string cell(double v) { return format_double(v); }
std::string cell(int v) { return std::to_string(v); }

// Runs body(i) for i in [0, count) under OpenMP; the first exception thrown
// by any iteration is rethrown after the region so it cannot cross the
// parallel boundary.
template <typename Body>
void for_each_index(std::size_t count, const Body& body) {
    std::exception_ptr failure;
    const long long n = static_cast<long long>(count);
#pragma omp parallel for
    for (long long i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical
            {
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
}

PhotonConvention photon_convention_from(const std::string& text) {
    if (text == "paper") return PhotonConvention::paper;
    if (text == "physical") return PhotonConvention::physical;
    throw ConfigInvalid("detection.photon_convention must be 'paper' or 'physical', got '" +
                        text + "'");
}

ClipIntegrand clip_from(const std::string& text) {
    if (text == "amplitude") return ClipIntegrand::amplitude;
    if (text == "intensity") return ClipIntegrand::intensity;
    throw ConfigInvalid("detection.clip must be 'amplitude' or 'intensity', got '" + text +
                        "'");
}

DetectorModel detector_from(const std::string& text) {
    if (text == "bhd") return DetectorModel::bhd;
    if (text == "ad") return DetectorModel::ad;
    throw ConfigInvalid("montecarlo.detector must be 'bhd' or 'ad', got '" + text + "'");
}

const char* convention_name(PhotonConvention c) {
    return c == PhotonConvention::paper ? "paper" : "physical";
}

const char* clip_name(ClipIntegrand c) {
    return c == ClipIntegrand::amplitude ? "amplitude" : "intensity";
}

bool value_allowed(const json& v) {
    return v.is_number() || v.is_boolean() || v.is_string();
}

// Photon number per resolution bandwidth entering every sensitivity formula:
// the clipped scattered power under the configured integrand and convention.
double photon_count(const RunConfig& cfg) {
    const DetectionSetting setting = cfg.detection();
    const double p = scattered_power(setting.probe_power, cfg.geometry(), setting.clip);
    return photon_number(p, setting.probe_wavelength, setting.resolution_bandwidth,
                         setting.photon_convention);
}

int sweep_order(double value, const std::string& variable) {
    const long long s = std::llround(value);
    if (s < 0 || std::abs(value - static_cast<double>(s)) > 1e-9) {
        throw ConfigInvalid("sweep over " + variable + " needs nonnegative integers, got " +
                            format_double(value));
    }
    return static_cast<int>(s);
}

std::vector<OutputTable> run_fig2(const RunConfig& cfg) {
    const BeamGeometry geom = cfg.geometry();
    const ModeIndex probe = cfg.probe();
    const int cutoff = static_cast<int>(cfg.integer("probe.cutoff"));
    const SweepSpec sweep = cfg.sweep();
    const std::vector<double> values = sweep.values();

    enum class Var { eps_x, eps_y, dz } var;
    if (sweep.variable == "eps_x") {
        var = Var::eps_x;
    } else if (sweep.variable == "eps_y") {
        var = Var::eps_y;
    } else if (sweep.variable == "dz") {
        var = Var::dz;
    } else {
        throw ConfigInvalid("fig2 sweep.variable must be eps_x, eps_y, or dz, got '" +
                            sweep.variable + "'");
    }

    // Tracked first-order coefficient: the (n+2, m) neighbor for eps_x and
    // dz, the (n, m+2) neighbor for eps_y.
    const ModeIndex tracked = var == Var::eps_y ? ModeIndex{probe.n, probe.m + 2}
                                                : ModeIndex{probe.n + 2, probe.m};
    const std::string label = std::to_string(tracked.n) + std::to_string(tracked.m);

    std::vector<std::array<Row, 2>> groups(values.size());
    for_each_index(values.size(), [&](std::size_t i) {
        const double v = values[i];
        Deformation def;
        ModeVector exact(cutoff);
        switch (var) {
            case Var::eps_x:
                def.d_waist_x = v * geom.waist_x;
                exact = exact_waist_scaling_coefficients(v, Axis::x, probe, cutoff, geom, {},
                                                         Execution::serial);
                break;
            case Var::eps_y:
                def.d_waist_y = v * geom.waist_y;
                exact = exact_waist_scaling_coefficients(v, Axis::y, probe, cutoff, geom, {},
                                                         Execution::serial);
                break;
            case Var::dz:
                def.d_z = v;
                exact = exact_waist_shift_coefficients(v, geom, probe, cutoff, {},
                                                       Execution::serial);
                break;
        }
        const ModeVector first = firstorder_decomposition(def, geom, probe);
        const cplx cf = first.at_or_zero(tracked.n, tracked.m);
        const cplx ce = exact.at_or_zero(tracked.n, tracked.m);
        groups[i][0] = Row{cell(v), cell(cf.real()), cell(cf.imag()), label, "firstorder"};
        groups[i][1] = Row{cell(v), cell(ce.real()), cell(ce.imag()), label, "exact"};
    });

    OutputTable table{"", {"epsilon_or_dz", "re_c", "im_c", "nm_label", "model"}, {}};
    for (const auto& g : groups) {
        table.rows.push_back(g[0]);
        table.rows.push_back(g[1]);
    }
    return {table};
}

std::vector<OutputTable> run_fig5(const RunConfig& cfg) {
    const BeamGeometry geom = cfg.geometry();
    const SweepSpec sweep = cfg.sweep();
    const std::vector<double> values = sweep.values();
    const DetectionSetting base = cfg.detection();
    const InterferometerSetting ifm = cfg.interferometer();

    const std::string& scenario = cfg.scenario();
    const std::string expected = scenario == "fig5a"   ? "postselection"
                                 : scenario == "fig5b" ? "probe_power"
                                                       : "probe_order";
    if (sweep.variable != expected) {
        throw ConfigInvalid(scenario + " sweep.variable must be '" + expected + "', got '" +
                            sweep.variable + "'");
    }

    static constexpr std::array<PhotonConvention, 2> conventions{PhotonConvention::paper,
                                                                 PhotonConvention::physical};
    std::vector<std::array<Row, 2>> groups(values.size());
    for_each_index(values.size(), [&](std::size_t i) {
        const double v = values[i];
        DetectionSetting setting = base;
        InterferometerSetting point_ifm = ifm;
        if (scenario == "fig5a") {
            // Sweep value is the postselection probability of each monitored
            // dark port as a fraction of the total input power.
            point_ifm = InterferometerSetting::from_dark_probabilities(v, v);
        } else if (scenario == "fig5b") {
            setting.probe_power = v;
        } else {
            const int s = sweep_order(v, "probe_order");
            setting.probe_order = ModeIndex{s, s};
        }
        for (std::size_t c = 0; c < conventions.size(); ++c) {
            setting.photon_convention = conventions[c];
            const MMDResult r = mmd(setting, point_ifm, geom);
            groups[i][c] = Row{cell(v), cell(r.d_waist_x_min), cell(r.d_waist_y_min),
                               cell(r.d_z_min), convention_name(conventions[c])};
        }
    });

    OutputTable table{"", {"sweep_value", "mmd_x_m", "mmd_y_m", "mmd_z_m", "convention"}, {}};
    for (const auto& g : groups) {
        table.rows.push_back(g[0]);
        table.rows.push_back(g[1]);
    }
    return {table};
}

std::vector<OutputTable> run_fisher(const RunConfig& cfg) {
    const BeamGeometry geom = cfg.geometry();
    const InterferometerSetting ifm = cfg.interferometer();
    const WeakValueSet wv = weak_values(ifm);
    const double sigma = cfg.number("fisher.sigma");
    const double k = geom.k();
    const double n_photon = photon_count(cfg);
    const double wv_magnitude = std::abs(wv.a_w1);
    const double p_s = wv.p_s1;
    const SweepSpec sweep = cfg.sweep();
    const std::vector<double> values = sweep.values();
    const bool order_axis = sweep.variable == "probe_order";
    if (!order_axis && sweep.variable != "deformation") {
        throw ConfigInvalid(cfg.scenario() +
                            " sweep.variable must be 'probe_order' or 'deformation', got '" +
                            sweep.variable + "'");
    }

    const std::vector<FisherKind> kinds = cfg.scenario() == "fig6"
                                              ? std::vector<FisherKind>{FisherKind::qfi}
                                              : std::vector<FisherKind>{FisherKind::cfi_ad,
                                                                        FisherKind::cfi_bhd};
    const auto kind_name = [](FisherKind kind) {
        switch (kind) {
            case FisherKind::qfi:
                return "qfi";
            case FisherKind::cfi_ad:
                return "cfi_ad";
            default:
                return "cfi_bhd";
        }
    };
    const auto build = [&](FisherKind kind, ModeIndex probe) {
        switch (kind) {
            case FisherKind::qfi:
                return qfi(probe, wv_magnitude, p_s, n_photon, sigma, k);
            case FisherKind::cfi_ad:
                return cfi_ad(probe, wv_magnitude, p_s, n_photon, sigma, k);
            default:
                return cfi_bhd(probe, wv_magnitude, p_s, n_photon, sigma, k);
        }
    };

    std::vector<std::vector<Row>> groups(values.size());
    for_each_index(values.size(), [&](std::size_t i) {
        const double v = values[i];
        // The printed information matrices carry no deformation dependence,
        // so a deformation axis sweeps the probe order from the config and
        // yields visibly flat rows.
        const ModeIndex probe = order_axis
                                    ? ModeIndex{sweep_order(v, "probe_order"),
                                                sweep_order(v, "probe_order")}
                                    : cfg.probe();
        const std::string axis_cell = order_axis ? cell(sweep_order(v, "probe_order"))
                                                 : cell(v);
        for (FisherKind kind : kinds) {
            const FisherMatrix f = build(kind, probe);
            groups[i].push_back(Row{axis_cell, cell(f.at(0, 0)), cell(f.at(1, 1)),
                                    cell(f.at(2, 2)), kind_name(kind)});
        }
    });

    OutputTable table{"", {"order_or_g", "entry_11", "entry_22", "entry_33", "kind"}, {}};
    for (const auto& g : groups) {
        table.rows.insert(table.rows.end(), g.begin(), g.end());
    }
    return {table};
}

std::vector<OutputTable> run_mie(const RunConfig& cfg) {
    const MieMedium medium = cfg.sphere();
    const SweepSpec sweep = cfg.sweep();
    if (sweep.variable != "theta") {
        throw ConfigInvalid("mie sweep.variable must be 'theta', got '" + sweep.variable +
                            "'");
    }

    OutputTable coefficients{"", {"iota", "re_a", "im_a", "re_b", "im_b"}, {}};
    for (const MieCoefficients& c : mie_table(medium)) {
        coefficients.rows.push_back(Row{cell(c.iota), cell(c.a.real()), cell(c.a.imag()),
                                        cell(c.b.real()), cell(c.b.imag())});
    }

    const std::vector<double> values = sweep.values();
    std::vector<Row> angle_rows(values.size());
    for_each_index(values.size(), [&](std::size_t i) {
        const AmplitudePair p = amplitude_functions(values[i], medium);
        angle_rows[i] = Row{cell(values[i]), cell(p.s1.real()), cell(p.s1.imag()),
                            cell(p.s2.real()), cell(p.s2.imag())};
    });
    OutputTable angles{"_angles", {"theta", "re_s1", "im_s1", "re_s2", "im_s2"}, {}};
    angles.rows = std::move(angle_rows);

    return {coefficients, angles};
}

std::vector<OutputTable> run_ports(const RunConfig& cfg) {
    const int cutoff = static_cast<int>(cfg.integer("probe.cutoff"));
    PortOptions options;
    options.converter_fidelity = cfg.number("ports.converter_fidelity");
    const PortStates states = higher_order_port_states(cfg.probe(), cutoff, cfg.deformation(),
                                                       cfg.interferometer(), cfg.geometry(),
                                                       options);

    OutputTable table{"",
                      {"port", "n", "m", "re_c", "im_c", "prefactor_re", "prefactor_im",
                       "gouy_phase"},
                      {}};
    const auto emit = [&](const PortState& port, const char* name) {
        for (int n = 0; n <= port.state.cutoff(); ++n) {
            for (int m = 0; m <= port.state.cutoff(); ++m) {
                const cplx c = port.state.at(n, m);
                table.rows.push_back(Row{name, cell(n), cell(m), cell(c.real()),
                                         cell(c.imag()), cell(port.prefactor.real()),
                                         cell(port.prefactor.imag()),
                                         cell(port.global_gouy_phase)});
            }
        }
    };
    emit(states.dark1, "dark1");
    emit(states.dark2, "dark2");
    emit(states.bright2, "bright2");
    return {table};
}

std::vector<OutputTable> run_mmd(const RunConfig& cfg) {
    const BeamGeometry geom = cfg.geometry();
    const InterferometerSetting ifm = cfg.interferometer();
    const DetectionSetting base = cfg.detection();

    OutputTable table;
    Row row;
    for (PhotonConvention convention :
         {PhotonConvention::paper, PhotonConvention::physical}) {
        for (ClipIntegrand clip : {ClipIntegrand::amplitude, ClipIntegrand::intensity}) {
            DetectionSetting setting = base;
            setting.photon_convention = convention;
            setting.clip = clip;
            const MMDResult r = mmd(setting, ifm, geom);
            const std::string tag =
                std::string(convention_name(convention)) + "_" + clip_name(clip);
            table.header.push_back("mmd_x_" + tag + "_m");
            table.header.push_back("mmd_y_" + tag + "_m");
            table.header.push_back("mmd_z_" + tag + "_m");
            row.push_back(cell(r.d_waist_x_min));
            row.push_back(cell(r.d_waist_y_min));
            row.push_back(cell(r.d_z_min));
        }
    }
    table.rows.push_back(row);
    return {table};
}

std::vector<OutputTable> run_montecarlo(const RunConfig& cfg) {
    const BeamGeometry geom = cfg.geometry();
    const InterferometerSetting ifm = cfg.interferometer();
    const DetectionSetting setting = cfg.detection();
    const Deformation truth = cfg.deformation();
    const long long samples = cfg.integer("montecarlo.samples");
    const DetectorModel detector = detector_from(cfg.text("montecarlo.detector"));

    const MonteCarloResult result = monte_carlo_estimation(truth, setting, ifm, geom, samples,
                                                           cfg.seed(), detector);

    // Per-sample information of each readout, mirroring the slopes inside
    // the estimator: |A_W|^2 P_s N over the squared length scale, with the
    // flip-overlap factor on the waist channels of the array detector.
    const WeakValueSet wv = weak_values(ifm);
    const double n_photon = photon_count(cfg);
    const double mask = detector == DetectorModel::ad ? flip_overlap_factor() : 1.0;
    const double zr2 = 2.0 * geom.rayleigh();
    const std::array<double, 3> info{
        std::norm(wv.a_w1) * wv.p_s1 * n_photon * mask / (geom.waist_y * geom.waist_y),
        std::norm(wv.a_w2) * wv.p_s2 * n_photon * mask / (geom.waist_x * geom.waist_x),
        std::norm(wv.a_w3) * wv.p_s3 * n_photon / (zr2 * zr2)};

    OutputTable table{"",
                      {"parameter", "true_value_m", "mean_estimate_m", "variance_m2",
                       "crlb_variance_m2", "detector"},
                      {}};
    const char* name = detector == DetectorModel::ad ? "ad" : "bhd";
    table.rows.push_back(Row{"d_waist_y", cell(truth.d_waist_y),
                             cell(result.mean_estimate.d_waist_y), cell(result.variance[0]),
                             cell(1.0 / info[0]), name});
    table.rows.push_back(Row{"d_waist_x", cell(truth.d_waist_x),
                             cell(result.mean_estimate.d_waist_x), cell(result.variance[1]),
                             cell(1.0 / info[1]), name});
    table.rows.push_back(Row{"d_z", cell(truth.d_z), cell(result.mean_estimate.d_z),
                             cell(result.variance[2]), cell(1.0 / info[2]), name});
    return {table};
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"fig2", "fig5a", "fig5b", "fig5c", "fig6",
                                                "fig7", "mie",   "ports", "mmd",   "montecarlo"};
    return names;
}

bool is_scenario(const std::string& name) {
    const auto& names = scenario_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<double> SweepSpec::values() const {
    if (points < 1) {
        throw ConfigInvalid("sweep.points must be >= 1, got " + std::to_string(points));
    }
    if (log && (min <= 0.0 || max <= 0.0)) {
        throw ConfigInvalid("sweep.log requires positive sweep.min and sweep.max");
    }
    std::vector<double> out(static_cast<std::size_t>(points));
    if (points == 1) {
        out[0] = min;
        return out;
    }
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        out[static_cast<std::size_t>(i)] =
            log ? min * std::exp(t * std::log(max / min)) : min + t * (max - min);
    }
    return out;
}

RunConfig RunConfig::defaults(const std::string& scenario) {
    if (!is_scenario(scenario)) {
        throw ConfigInvalid("unknown scenario '" + scenario + "'");
    }
    RunConfig cfg;
    cfg.scenario_ = scenario;
    auto& e = cfg.entries_;

    e["scenario"] = scenario;
    e["artifact.version"] = artifact_version;

    e["geometry.wavelength"] = 125e-6;
    e["geometry.waist"] = 150e-6;
    e["geometry.waist_x"] = 150e-6;
    e["geometry.waist_y"] = 150e-6;
    e["sphere.radius"] = 125e-6;
    e["sphere.index_re"] = 2.19;
    e["sphere.index_im"] = 0.0;

    const bool fisher_scenario = scenario == "fig6" || scenario == "fig7";
    const InterferometerSetting ifm =
        fisher_scenario ? InterferometerSetting::make(0.01, 0.01)
                        : InterferometerSetting::from_dark_probabilities(0.005, 0.005);
    e["interferometer.theta"] = ifm.theta;
    e["interferometer.phi"] = ifm.phi;

    e["detection.probe_power"] = 5e-6;
    e["detection.resolution_bandwidth"] = 1.0;
    e["detection.lo_power"] = 1e-3;
    e["detection.photon_convention"] = "paper";
    e["detection.clip"] = "amplitude";

    e["probe.n"] = 0;
    e["probe.m"] = 0;
    e["probe.cutoff"] = 12;

    e["deformation.d_waist_x"] = 0.0;
    e["deformation.d_waist_y"] = 0.0;
    e["deformation.d_z"] = 0.0;

    e["ports.converter_fidelity"] = 1.0;
    e["fisher.sigma"] = 1e-4;

    e["montecarlo.samples"] = 1000000;
    e["montecarlo.detector"] = "bhd";

    e["seed"] = 12345;
    e["output_path"] = scenario + ".csv";

    std::string variable = "none";
    double lo = 0.0, hi = 0.0;
    int points = 1;
    bool logscale = false;
    if (scenario == "fig2") {
        variable = "eps_x";
        lo = -0.3;
        hi = 0.3;
        points = 121;
    } else if (scenario == "fig5a") {
        variable = "postselection";
        lo = 1e-4;
        hi = 0.1;
        points = 61;
        logscale = true;
    } else if (scenario == "fig5b") {
        variable = "probe_power";
        lo = 1e-7;
        hi = 1e-4;
        points = 61;
        logscale = true;
    } else if (scenario == "fig5c" || scenario == "fig6") {
        variable = "probe_order";
        lo = 0.0;
        hi = 6.0;
        points = 7;
    } else if (scenario == "fig7") {
        variable = "deformation";
        lo = 1e-13;
        hi = 1e-11;
        points = 41;
        logscale = true;
    } else if (scenario == "mie") {
        variable = "theta";
        lo = 0.0;
        hi = constants::pi;
        points = 181;
    }
    e["sweep.variable"] = variable;
    e["sweep.min"] = lo;
    e["sweep.max"] = hi;
    e["sweep.points"] = points;
    e["sweep.log"] = logscale;

    return cfg;
}

void RunConfig::set(const std::string& key, const json& value) {
    if (key == "scenario") {
        if (!value.is_string() || value.get<std::string>() != scenario_) {
            throw ConfigInvalid("config key 'scenario' disagrees with the scenario argument '" +
                                scenario_ + "'");
        }
        return;
    }
    if (key == "artifact.version") {
        return;  // informational; always rewritten to the current version
    }
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw ConfigInvalid("unknown config key '" + key + "'");
    }
    if (!value_allowed(value)) {
        throw ConfigInvalid("config key '" + key + "' must be a JSON scalar");
    }
    const json& current = it->second;
    if (current.is_string()) {
        if (!value.is_string()) {
            throw ConfigInvalid("config key '" + key + "' must be a string");
        }
        it->second = value;
    } else if (current.is_boolean()) {
        if (!value.is_boolean()) {
            throw ConfigInvalid("config key '" + key + "' must be a boolean");
        }
        it->second = value;
    } else if (current.is_number_integer() || current.is_number_unsigned()) {
        if (value.is_number_integer() || value.is_number_unsigned()) {
            it->second = value;
        } else if (value.is_number_float()) {
            const double v = value.get<double>();
            if (v != std::floor(v) || std::abs(v) > 9.0e15) {
                throw ConfigInvalid("config key '" + key + "' must be an integer");
            }
            it->second = static_cast<long long>(v);
        } else {
            throw ConfigInvalid("config key '" + key + "' must be an integer");
        }
    } else {
        if (!value.is_number()) {
            throw ConfigInvalid("config key '" + key + "' must be a number");
        }
        it->second = value.get<double>();
    }
}

RunConfig RunConfig::resolve(const std::string& scenario, const json& overlay,
                             const std::vector<std::string>& overrides) {
    RunConfig cfg = defaults(scenario);
    if (!overlay.is_null() && !overlay.is_object()) {
        throw ConfigInvalid("config must be a JSON object of flat dotted keys");
    }

    std::set<std::string> explicit_keys;
    if (overlay.is_object()) {
        for (const auto& item : overlay.items()) {
            cfg.set(item.key(), item.value());
            explicit_keys.insert(item.key());
        }
    }
    for (const std::string& text : overrides) {
        const auto pos = text.find('=');
        if (pos == std::string::npos || pos == 0) {
            throw ConfigInvalid("--set expects key=value, got '" + text + "'");
        }
        const std::string key = text.substr(0, pos);
        const std::string raw = text.substr(pos + 1);
        json value = json::parse(raw, nullptr, false);
        if (value.is_discarded() || !value_allowed(value)) {
            value = raw;  // unquoted strings arrive as-is
        }
        cfg.set(key, value);
        explicit_keys.insert(key);
    }

    // geometry.waist seeds both per-axis waists unless those were set
    // themselves; afterwards the resolved config is fully explicit.
    if (explicit_keys.count("geometry.waist")) {
        if (!explicit_keys.count("geometry.waist_x")) {
            cfg.entries_["geometry.waist_x"] = cfg.entries_["geometry.waist"];
        }
        if (!explicit_keys.count("geometry.waist_y")) {
            cfg.entries_["geometry.waist_y"] = cfg.entries_["geometry.waist"];
        }
    }
    return cfg;
}

nlohmann::json RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IOFailure("cannot read config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    json parsed = json::parse(buffer.str(), nullptr, false);
    if (parsed.is_discarded()) {
        throw ConfigInvalid("config file '" + path + "' is not valid JSON");
    }
    if (!parsed.is_object()) {
        throw ConfigInvalid("config file '" + path + "' must hold a JSON object");
    }
    for (const auto& item : parsed.items()) {
        if (!value_allowed(item.value())) {
            throw ConfigInvalid("config key '" + item.key() +
                                "' must be a flat JSON scalar (dotted keys, no nesting)");
        }
    }
    return parsed;
}

double RunConfig::number(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end() || !it->second.is_number()) {
        throw ConfigInvalid("config key '" + key + "' missing or not a number");
    }
    return it->second.get<double>();
}

long long RunConfig::integer(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end() ||
        !(it->second.is_number_integer() || it->second.is_number_unsigned())) {
        throw ConfigInvalid("config key '" + key + "' missing or not an integer");
    }
    return it->second.get<long long>();
}

bool RunConfig::flag(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end() || !it->second.is_boolean()) {
        throw ConfigInvalid("config key '" + key + "' missing or not a boolean");
    }
    return it->second.get<bool>();
}

std::string RunConfig::text(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end() || !it->second.is_string()) {
        throw ConfigInvalid("config key '" + key + "' missing or not a string");
    }
    return it->second.get<std::string>();
}

BeamGeometry RunConfig::geometry() const {
    return BeamGeometry::make(number("geometry.wavelength"), number("geometry.waist_x"),
                              number("geometry.waist_y"));
}

MieMedium RunConfig::sphere() const {
    return MieMedium::make(number("sphere.radius"),
                           cplx(number("sphere.index_re"), number("sphere.index_im")),
                           number("geometry.wavelength"));
}

InterferometerSetting RunConfig::interferometer() const {
    return InterferometerSetting::make(number("interferometer.theta"),
                                       number("interferometer.phi"));
}

DetectionSetting RunConfig::detection() const {
    DetectionSetting setting;
    setting.probe_power = number("detection.probe_power");
    setting.probe_wavelength = number("geometry.wavelength");
    setting.resolution_bandwidth = number("detection.resolution_bandwidth");
    setting.lo_power.fill(number("detection.lo_power"));
    setting.lo_wavelength.fill(setting.probe_wavelength);
    setting.probe_order = probe();
    setting.photon_convention = photon_convention_from(text("detection.photon_convention"));
    setting.clip = clip_from(text("detection.clip"));
    setting.validate();
    return setting;
}

Deformation RunConfig::deformation() const {
    Deformation def;
    def.d_waist_x = number("deformation.d_waist_x");
    def.d_waist_y = number("deformation.d_waist_y");
    def.d_z = number("deformation.d_z");
    return def;
}

ModeIndex RunConfig::probe() const {
    const long long n = integer("probe.n");
    const long long m = integer("probe.m");
    if (n < 0 || m < 0) {
        throw ConfigInvalid("probe.n and probe.m must be nonnegative");
    }
    return ModeIndex{static_cast<int>(n), static_cast<int>(m)};
}

SweepSpec RunConfig::sweep() const {
    SweepSpec spec;
    spec.variable = text("sweep.variable");
    spec.min = number("sweep.min");
    spec.max = number("sweep.max");
    spec.points = static_cast<int>(integer("sweep.points"));
    spec.log = flag("sweep.log");
    return spec;
}

std::uint64_t RunConfig::seed() const {
    const auto it = entries_.find("seed");
    if (it == entries_.end()) {
        throw ConfigInvalid("config key 'seed' missing");
    }
    if (it->second.is_number_unsigned()) {
        return it->second.get<std::uint64_t>();
    }
    if (it->second.is_number_integer()) {
        const long long v = it->second.get<long long>();
        if (v >= 0) return static_cast<std::uint64_t>(v);
    }
    throw ConfigInvalid("config key 'seed' must be a nonnegative integer");
}

std::string RunConfig::output_path() const { return text("output_path"); }

nlohmann::json RunConfig::to_json() const {
    json out = json::object();
    for (const auto& [key, value] : entries_) {
        out[key] = value;
    }
    out["artifact.version"] = artifact_version;
    return out;
}

std::vector<std::string> validate(const RunConfig& config) {
    std::vector<std::string> warnings;
    const BeamGeometry geom = config.geometry();

    if (!in_linear_regime(config.deformation(), geom)) {
        warnings.push_back(
            "deformation outside the linear regime; first-order port content is not "
            "quantitative there");
    }

    const double theta = config.number("interferometer.theta");
    const double phi = config.number("interferometer.phi");
    for (const auto& [name, angle] : {std::pair<const char*, double>{"interferometer.theta",
                                                                     theta},
                                      {"interferometer.phi", phi}}) {
        if (angle < 1e-3 || angle > constants::pi - 1e-3) {
            warnings.push_back(std::string(name) + " = " + format_double(angle) +
                               " is within 1e-3 of 0 or pi; postselection probabilities and "
                               "weak values are extreme there");
        }
    }

    const double radius = config.number("sphere.radius");
    if (std::min(geom.waist_x, geom.waist_y) < radius) {
        warnings.push_back(
            "probe waist smaller than sphere radius; the scattered-mode model assumes a "
            "waist moderately larger than the sphere");
    }

    if (config.text("detection.photon_convention") != "paper") {
        warnings.push_back(
            "detection.photon_convention differs from the headline 'paper' choice; photon "
            "numbers shift by 2 pi and minimum measurable deformations by sqrt(2 pi)");
    }
    if (config.text("detection.clip") != "amplitude") {
        warnings.push_back(
            "detection.clip differs from the headline 'amplitude' choice; the clipped power "
            "ratio becomes erf(sqrt 2)^2 instead of erf(1)^2");
    }
    return warnings;
}

std::vector<OutputTable> run_tables(const RunConfig& config) {
    const std::string& s = config.scenario();
    if (s == "fig2") return run_fig2(config);
    if (s == "fig5a" || s == "fig5b" || s == "fig5c") return run_fig5(config);
    if (s == "fig6" || s == "fig7") return run_fisher(config);
    if (s == "mie") return run_mie(config);
    if (s == "ports") return run_ports(config);
    if (s == "mmd") return run_mmd(config);
    if (s == "montecarlo") return run_montecarlo(config);
    throw ConfigInvalid("unknown scenario '" + s + "'");
}

std::string csv_text(const OutputTable& table) {
    std::string out;
    const auto append_line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    append_line(table.header);
    for (const Row& row : table.rows) {
        append_line(row);
    }
    return out;
}

std::string table_path(const std::string& output_path, const std::string& suffix) {
    if (suffix.empty()) return output_path;
    const std::string ext = ".csv";
    if (output_path.size() > ext.size() &&
        output_path.compare(output_path.size() - ext.size(), ext.size(), ext) == 0) {
        return output_path.substr(0, output_path.size() - ext.size()) + suffix + ext;
    }
    return output_path + suffix;
}

std::string sidecar_path(const std::string& output_path) {
    const std::string ext = ".csv";
    if (output_path.size() > ext.size() &&
        output_path.compare(output_path.size() - ext.size(), ext.size(), ext) == 0) {
        return output_path.substr(0, output_path.size() - ext.size()) + ".config.json";
    }
    return output_path + ".config.json";
}

std::vector<std::string> run_scenario(const RunConfig& config) {
    const std::vector<OutputTable> tables = run_tables(config);
    const std::string base = config.output_path();

    std::vector<std::string> written;
    const auto write_file = [](const std::string& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IOFailure("cannot open '" + path + "' for writing");
        }
        out << text;
        if (!out) {
            throw IOFailure("write to '" + path + "' failed");
        }
    };

    for (const OutputTable& table : tables) {
        const std::string path = table_path(base, table.suffix);
        write_file(path, csv_text(table));
        written.push_back(path);
    }
    const std::string side = sidecar_path(base);
    write_file(side, config.to_json().dump(2) + "\n");
    written.push_back(side);
    return written;
}

}  // namespace modeprobe
