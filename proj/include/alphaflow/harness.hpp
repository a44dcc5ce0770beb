#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alphaflow/dynamics.hpp"

namespace alphaflow {

// nu ladder rule: "c*alpha" or "alpha^e"
struct NuRule {
    enum class Kind { linear, power };
    Kind kind = Kind::linear;
    double coeff = 1.0;
    std::string label;

    double nu_for(double alpha) const;
    static NuRule parse(const std::string& text);  // throws ConfigError
};

// Flat key-value experiment description (INI-style sections).
struct ExperimentConfig {
    // [grid]
    std::string shape = "annulus";  // annulus | disk
    double r_inner = 1.0, r_outer = 2.0;
    int n_radial = 64, n_angular = 128;
    RadialSpacing spacing = RadialSpacing::chebyshev;

    ModelConfig model;  // [model], [time], [initial]

    // [output]
    double diagnostic_cadence = 0.05;
    double snapshot_cadence = 0.0;

    // [sweep]
    std::vector<double> sweep_alphas;
    std::vector<NuRule> nu_rules;

    // [probe]
    double probe_p = 2.0;
    int probe_trials = 32;
    unsigned long probe_seed = 1;
    std::vector<double> probe_alphas;

    GridPtr build_grid() const;
    void validate() const;  // throws ConfigError naming the offending field
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);  // throws ConfigError

// In-memory diagnostics sink; serializes rows with 17 significant digits
// under the fixed header
//   t,gamma_1,gamma_1_recomputed,energy_h1_alpha,lp_norm_q,integral_q,l2_norm_u,h1_norm_u
class CsvRecorder : public Recorder {
  public:
    void on_record(const DiagnosticRecord& record) override;
    const std::vector<DiagnosticRecord>& records() const { return records_; }
    std::string to_csv() const;
    void write(const std::string& path) const;  // throws std::runtime_error on IO failure

  private:
    std::vector<DiagnosticRecord> records_;
};

std::string format_g17(double v);

// Raw little-endian float64 snapshot, radial-major, plus a JSON sidecar
// describing the layout.
void write_snapshot(const std::string& dir, const std::string& field_name, int index, double time,
                    const GridPtr& grid, const std::vector<double>& values);

// exit codes: 0 success, 2 config error, 3 runtime (CFL/solver) error, 4 IO
struct ProbeOverrides {
    std::optional<std::vector<double>> alphas;
    std::optional<double> p;
    std::optional<int> trials;
    std::optional<unsigned long> seed;
};

int cmd_simulate(const std::string& config_path, const std::string& out_dir);
int cmd_sweep_alpha(const std::string& config_path, const std::vector<double>& alphas_override,
                    const std::string& out_dir);
int cmd_second_grade_obstruction(const std::string& config_path, const std::string& out_dir);
int cmd_probe_operator(const std::string& config_path, const ProbeOverrides& overrides,
                       const std::string& out_dir);

}  // namespace alphaflow
