#include "alphaflow/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace alphaflow {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& field, const std::string& text) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError(field + ": expected a number, got '" + text + "'");
    }
}

long parse_long(const std::string& field, const std::string& text) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError(field + ": expected an integer, got '" + text + "'");
    }
}

std::vector<double> parse_double_list(const std::string& field, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(field, item));
    }
    return out;
}

}  // namespace

double NuRule::nu_for(double alpha) const {
    return kind == Kind::linear ? coeff * alpha : std::pow(alpha, coeff);
}

NuRule NuRule::parse(const std::string& text) {
    NuRule rule;
    rule.label = trim(text);
    const std::string& s = rule.label;
    if (const auto star = s.find("*alpha"); star != std::string::npos && star + 6 == s.size()) {
        rule.kind = Kind::linear;
        rule.coeff = parse_double("sweep.nu_rules", s.substr(0, star));
        return rule;
    }
    if (s.rfind("alpha^", 0) == 0) {
        rule.kind = Kind::power;
        rule.coeff = parse_double("sweep.nu_rules", s.substr(6));
        return rule;
    }
    if (s == "alpha") {
        rule.kind = Kind::linear;
        rule.coeff = 1.0;
        return rule;
    }
    throw ConfigError("sweep.nu_rules: expected 'c*alpha' or 'alpha^e', got '" + s + "'");
}

GridPtr ExperimentConfig::build_grid() const {
    if (shape == "disk") return build_disk(r_outer, n_radial, n_angular);
    return build_annulus(r_inner, r_outer, n_radial, n_angular, spacing);
}

void ExperimentConfig::validate() const {
    if (shape != "annulus" && shape != "disk")
        throw ConfigError("grid.shape: expected annulus or disk, got '" + shape + "'");
    model.validate();
    for (const auto& ladder : {sweep_alphas, probe_alphas}) {
        for (std::size_t i = 1; i < ladder.size(); ++i)
            if (!(ladder[i] < ladder[i - 1]))
                throw ConfigError("alpha ladder must be strictly decreasing");
    }
    if (probe_trials < 0) throw ConfigError("probe.trials: must be >= 0");
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find_first_of("#;"); hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "grid.shape") {
            cfg.shape = value;
        } else if (key == "grid.r_inner") {
            cfg.r_inner = parse_double(key, value);
        } else if (key == "grid.r_outer") {
            cfg.r_outer = parse_double(key, value);
        } else if (key == "grid.n_radial") {
            cfg.n_radial = static_cast<int>(parse_long(key, value));
        } else if (key == "grid.n_angular") {
            cfg.n_angular = static_cast<int>(parse_long(key, value));
        } else if (key == "grid.spacing") {
            if (value == "chebyshev")
                cfg.spacing = RadialSpacing::chebyshev;
            else if (value == "uniform")
                cfg.spacing = RadialSpacing::uniform;
            else
                throw ConfigError(key + ": expected chebyshev or uniform, got '" + value + "'");
        } else if (key == "model.type") {
            if (value == "alpha_euler")
                cfg.model.model = ModelKind::alpha_euler;
            else if (value == "alpha_euler_regularized")
                cfg.model.model = ModelKind::alpha_euler_regularized;
            else if (value == "second_grade")
                cfg.model.model = ModelKind::second_grade;
            else if (value == "euler_reference")
                cfg.model.model = ModelKind::euler_reference;
            else
                throw ConfigError(key + ": unknown model '" + value + "'");
        } else if (key == "model.alpha") {
            cfg.model.alpha = parse_double(key, value);
        } else if (key == "model.nu") {
            cfg.model.nu = parse_double(key, value);
        } else if (key == "model.epsilon") {
            cfg.model.epsilon = parse_double(key, value);
        } else if (key == "model.p") {
            cfg.model.p = parse_double(key, value);
        } else if (key == "model.enforce_nu_bound") {
            cfg.model.enforce_nu_bound = value == "true" || value == "1";
        } else if (key == "model.nu_bound_margin") {
            cfg.model.nu_bound_margin = parse_double(key, value);
        } else if (key == "time.cfl") {
            cfg.model.cfl = parse_double(key, value);
        } else if (key == "time.t_end") {
            cfg.model.t_end = parse_double(key, value);
        } else if (key == "initial.profile") {
            if (value == "gaussian_ring")
                cfg.model.initial.profile = InitialCondition::Profile::gaussian_ring;
            else if (value == "perturbed_ring")
                cfg.model.initial.profile = InitialCondition::Profile::perturbed_ring;
            else
                throw ConfigError(key + ": unknown profile '" + value + "'");
        } else if (key == "initial.scale") {
            cfg.model.initial.scale = parse_double(key, value);
        } else if (key == "initial.r_center") {
            cfg.model.initial.r_center = parse_double(key, value);
        } else if (key == "initial.sigma") {
            cfg.model.initial.sigma = parse_double(key, value);
        } else if (key == "initial.amplitude") {
            cfg.model.initial.amplitude = parse_double(key, value);
        } else if (key == "initial.mode") {
            cfg.model.initial.mode = static_cast<int>(parse_long(key, value));
        } else if (key == "initial.gamma1") {
            cfg.model.initial.gamma1 = parse_double(key, value);
        } else if (key == "output.diagnostic_cadence") {
            cfg.diagnostic_cadence = parse_double(key, value);
        } else if (key == "output.snapshot_cadence") {
            cfg.snapshot_cadence = parse_double(key, value);
        } else if (key == "sweep.alphas") {
            cfg.sweep_alphas = parse_double_list(key, value);
        } else if (key == "sweep.nu_rules") {
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (!item.empty()) cfg.nu_rules.push_back(NuRule::parse(item));
            }
        } else if (key == "probe.p") {
            cfg.probe_p = parse_double(key, value);
        } else if (key == "probe.trials") {
            cfg.probe_trials = static_cast<int>(parse_long(key, value));
        } else if (key == "probe.seed") {
            cfg.probe_seed = static_cast<unsigned long>(parse_long(key, value));
        } else if (key == "probe.alphas") {
            cfg.probe_alphas = parse_double_list(key, value);
        } else {
            throw ConfigError("unknown configuration key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

// ------------------------------------------------------------ serializers

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvRecorder::on_record(const DiagnosticRecord& record) { records_.push_back(record); }

std::string CsvRecorder::to_csv() const {
    std::string out =
        "t,gamma_1,gamma_1_recomputed,energy_h1_alpha,lp_norm_q,integral_q,l2_norm_u,h1_norm_u\n";
    for (const auto& r : records_) {
        const double g = r.gamma.empty() ? 0.0 : r.gamma[0];
        const double gr = r.gamma_recomputed.empty() ? 0.0 : r.gamma_recomputed[0];
        out += format_g17(r.time) + "," + format_g17(g) + "," + format_g17(gr) + "," +
               format_g17(r.energy_h1_alpha) + "," + format_g17(r.lp_norm_q) + "," +
               format_g17(r.integral_q) + "," + format_g17(r.l2_norm_u) + "," +
               format_g17(r.h1_norm_u) + "\n";
    }
    return out;
}

void CsvRecorder::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << to_csv();
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_snapshot(const std::string& dir, const std::string& field_name, int index, double time,
                    const GridPtr& grid, const std::vector<double>& values) {
    char stem[64];
    std::snprintf(stem, sizeof(stem), "%s_%06d", field_name.c_str(), index);
    const fs::path raw = fs::path(dir) / (std::string(stem) + ".f64");
    const fs::path sidecar = fs::path(dir) / (std::string(stem) + ".json");

    std::ofstream out(raw, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + raw.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write failed for '" + raw.string() + "'");

    nlohmann::json meta = {
        {"field", field_name},           {"time", time},
        {"r_inner", grid->r_inner()},    {"r_outer", grid->r_outer()},
        {"n_radial", grid->n_radial()},  {"n_angular", grid->n_angular()},
        {"layout", "radial_major"},
    };
    std::ofstream js(sidecar, std::ios::binary);
    if (!js) throw std::runtime_error("cannot open '" + sidecar.string() + "' for writing");
    js << meta.dump(2) << "\n";
}

// ------------------------------------------------------------- commands

namespace {

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const GridError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CflError& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::runtime_error& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw fs::filesystem_error("cannot create output directory", dir, ec);
}

struct RunOutput {
    SimState final_state;
    CsvRecorder recorder;
};

RunOutput run_to_dir(const ModalEllipticWorkspace& ws, const ModelConfig& model, double diag_dt,
                     double snap_dt, const std::string& dir) {
    ensure_dir(dir);
    RunOutput out;
    RunOptions opts;
    opts.diagnostic_cadence = diag_dt;
    opts.snapshot_cadence = snap_dt;
    int snap_index = 0;
    if (snap_dt > 0.0) {
        opts.on_snapshot = [&](const SimState& s) {
            write_snapshot(dir, "q", snap_index, s.time, ws.grid_ptr(), s.q.values);
            write_snapshot(dir, "u_r", snap_index, s.time, ws.grid_ptr(), s.u_cache.radial);
            write_snapshot(dir, "u_theta", snap_index, s.time, ws.grid_ptr(), s.u_cache.angular);
            ++snap_index;
        };
    }
    out.final_state = run(ws, model, out.recorder, opts);
    out.recorder.write(dir + "/diagnostics.csv");
    return out;
}

std::string alpha_dir_name(double alpha) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "alpha_%.6g", alpha);
    return buf;
}

std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c == '*' || c == '^' || c == '/' || c == ' ') c = '_';
    return out;
}

}  // namespace

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    return run_guarded([&]() {
        const ExperimentConfig cfg = load_config(config_path);
        const GridPtr grid = cfg.build_grid();
        const ModalEllipticWorkspace ws(grid);
        run_to_dir(ws, cfg.model, cfg.diagnostic_cadence, cfg.snapshot_cadence, out_dir);
        return 0;
    });
}

int cmd_sweep_alpha(const std::string& config_path, const std::vector<double>& alphas_override,
                    const std::string& out_dir) {
    return run_guarded([&]() {
        const ExperimentConfig cfg = load_config(config_path);
        std::vector<double> alphas = alphas_override.empty() ? cfg.sweep_alphas : alphas_override;
        if (alphas.size() < 2)
            throw ConfigError("sweep.alphas: need at least two ladder entries, got " +
                              std::to_string(alphas.size()));
        for (std::size_t i = 1; i < alphas.size(); ++i)
            if (!(alphas[i] < alphas[i - 1]))
                throw ConfigError("sweep.alphas: ladder must be strictly decreasing");
        if (cfg.model.model == ModelKind::euler_reference)
            throw ConfigError("model.type: sweep-alpha needs an alpha-family model");

        ensure_dir(out_dir);
        const GridPtr grid = cfg.build_grid();
        const ModalEllipticWorkspace ws(grid);

        // one worker per alpha plus the reference; each owns its directory
        struct Result {
            std::optional<VectorField> final_u;
            std::string error;
        };
        auto launch = [&](const ModelConfig& model, const std::string& dir) {
            return std::async(std::launch::async, [&, model, dir]() {
                Result res;
                try {
                    res.final_u = run_to_dir(ws, model, cfg.diagnostic_cadence,
                                             cfg.snapshot_cadence, dir)
                                      .final_state.u_cache;
                } catch (const std::exception& e) {
                    res.error = e.what();
                }
                return res;
            });
        };

        std::vector<std::future<Result>> futures;
        for (const double alpha : alphas) {
            ModelConfig m = cfg.model;
            m.alpha = alpha;
            futures.push_back(launch(m, out_dir + "/" + alpha_dir_name(alpha)));
        }
        ModelConfig ref = cfg.model;
        ref.model = ModelKind::euler_reference;
        ref.nu = 0.0;
        ref.epsilon = 0.0;
        futures.push_back(launch(ref, out_dir + "/euler_reference"));

        std::vector<Result> results;
        results.reserve(futures.size());
        for (auto& f : futures) results.push_back(f.get());

        bool failed = false;
        for (std::size_t i = 0; i < results.size(); ++i) {
            if (!results[i].error.empty()) {
                std::cerr << "run " << i << " failed: " << results[i].error << "\n";
                failed = true;
            }
        }
        if (failed) return 3;

        std::vector<std::pair<double, VectorField>> runs;
        for (std::size_t i = 0; i < alphas.size(); ++i)
            runs.emplace_back(alphas[i], std::move(*results[i].final_u));
        const auto table = convergence_table(runs, *results.back().final_u);

        std::ofstream summary(out_dir + "/summary.csv", std::ios::binary);
        if (!summary) throw std::runtime_error("cannot open summary.csv");
        summary << "alpha,error_l2,observed_order\n";
        for (const auto& row : table)
            summary << format_g17(row.alpha) << "," << format_g17(row.error_l2) << ","
                    << format_g17(row.observed_order) << "\n";
        return 0;
    });
}

int cmd_second_grade_obstruction(const std::string& config_path, const std::string& out_dir) {
    return run_guarded([&]() {
        const ExperimentConfig cfg = load_config(config_path);
        if (cfg.nu_rules.empty())
            throw ConfigError("sweep.nu_rules: obstruction run needs at least one nu rule");
        if (cfg.sweep_alphas.empty())
            throw ConfigError("sweep.alphas: obstruction run needs an alpha ladder");
        ensure_dir(out_dir);
        const GridPtr grid = cfg.build_grid();
        const ModalEllipticWorkspace ws(grid);

        std::ofstream summary(out_dir + "/obstruction_summary.csv", std::ios::binary);
        if (!summary) throw std::runtime_error("cannot open obstruction_summary.csv");
        summary << "rule,alpha,nu,max_lp_q,final_compensated_mean\n";

        for (const auto& rule : cfg.nu_rules) {
            for (const double alpha : cfg.sweep_alphas) {
                ModelConfig m = cfg.model;
                m.model = ModelKind::second_grade;
                m.alpha = alpha;
                m.nu = rule.nu_for(alpha);
                m.epsilon = 0.0;
                m.enforce_nu_bound = false;
                const std::string dir =
                    out_dir + "/" + sanitize(rule.label) + "/" + alpha_dir_name(alpha);
                const RunOutput out =
                    run_to_dir(ws, m, cfg.diagnostic_cadence, cfg.snapshot_cadence, dir);

                double max_lp = 0.0;
                for (const auto& rec : out.recorder.records())
                    max_lp = std::max(max_lp, rec.lp_norm_q);
                const auto& last = out.recorder.records().back();
                // exp(+nu t / alpha)-compensated mean vorticity
                const double compensated =
                    last.integral_q * std::exp(m.nu * last.time / m.alpha);
                summary << rule.label << "," << format_g17(alpha) << "," << format_g17(m.nu)
                        << "," << format_g17(max_lp) << "," << format_g17(compensated) << "\n";
            }
        }
        return 0;
    });
}

int cmd_probe_operator(const std::string& config_path, const ProbeOverrides& overrides,
                       const std::string& out_dir) {
    return run_guarded([&]() {
        const ExperimentConfig cfg = load_config(config_path);
        const std::vector<double> alphas = overrides.alphas.value_or(cfg.probe_alphas);
        const double p = overrides.p.value_or(cfg.probe_p);
        const int trials = overrides.trials.value_or(cfg.probe_trials);
        const unsigned long seed = overrides.seed.value_or(cfg.probe_seed);
        if (alphas.size() < 3)
            throw ConfigError("probe.alphas: need a ladder of at least 3 points, got " +
                              std::to_string(alphas.size()));
        if (trials < 1)
            throw ConfigError("probe.trials: must be >= 1, got " + std::to_string(trials));

        ensure_dir(out_dir);
        const GridPtr grid = cfg.build_grid();
        const ModalEllipticWorkspace ws(grid);

        std::ofstream ratios(out_dir + "/ratios.csv", std::ios::binary);
        std::ofstream sup(out_dir + "/sup_ratios.csv", std::ios::binary);
        if (!ratios || !sup) throw std::runtime_error("cannot open probe output files");
        ratios << "alpha,trial,ratio\n";
        sup << "alpha,sup_ratio\n";

        std::vector<double> sups;
        for (const double alpha : alphas) {
            const OperatorBoundReport report = probe_operator_bound(ws, alpha, p, trials, seed);
            for (std::size_t t = 0; t < report.ratios.size(); ++t)
                ratios << format_g17(alpha) << "," << t << "," << format_g17(report.ratios[t])
                       << "\n";
            sup << format_g17(alpha) << "," << format_g17(report.sup_ratio) << "\n";
            sups.push_back(report.sup_ratio);
        }
        const double slope = log_log_slope(alphas, sups);
        std::ofstream fit(out_dir + "/fit.csv", std::ios::binary);
        if (!fit) throw std::runtime_error("cannot open fit.csv");
        fit << "slope\n" << format_g17(slope) << "\n";
        return 0;
    });
}

}  // namespace alphaflow
