#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <qsearch/sim_core.hpp>

namespace qsearch {

enum class OutputFormat { csv, json_lines };

struct ExperimentConfig {
    std::string experiment;
    std::vector<std::size_t> sizes;
    std::size_t trials = 1;
    std::uint64_t seed = 1;
    /// Empty means standard output.
    std::string out;
    OutputFormat format = OutputFormat::csv;
    std::size_t jobs = 1;
    /// Experiment-specific settings (k, d, holding, budget, ...).
    std::map<std::string, std::string> params;

    /// Sets one key; unknown keys become experiment parameters.
    void set(const std::string& key, const std::string& value);
    /// Throws UsageError on an empty experiment name, no sizes, sizes that are
    /// not strictly increasing, or zero trials or jobs.
    void validate() const;

    double param(const std::string& key, double fallback) const;
    std::string param(const std::string& key, const std::string& fallback) const;

    /// key=value lines; '#' starts a comment.
    static ExperimentConfig parse(std::istream& in);
    static ExperimentConfig load(const std::string& path);
};

/// "4,16,64", "8..64:8" (additive), "64..16384:x4" (multiplicative), or a
/// comma list mixing these. "a..b" alone steps by 1.
std::vector<std::size_t> parse_sizes(const std::string& text);

OutputFormat parse_format(const std::string& text);

struct ExperimentRecord {
    std::string experiment;
    std::size_t size = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t queries = 0;
    std::uint64_t steps = 0;
    bool success = false;
    double ms = 0.0;

    bool operator==(const ExperimentRecord&) const = default;
};

inline constexpr const char* kCsvHeader = "experiment,size,trial,seed,queries,steps,success,ms";

/// Serializes records as CSV (header first) or JSON lines.
class RecordWriter {
public:
    RecordWriter(std::ostream& out, OutputFormat format);
    void write(const ExperimentRecord& r);

private:
    std::ostream& out_;
    OutputFormat format_;
};

/// Writes to path (standard output for an empty path). Throws IoError when
/// the path cannot be opened.
void emit(const std::vector<ExperimentRecord>& records, OutputFormat format, const std::string& path);

std::vector<ExperimentRecord> parse_csv_records(std::istream& in);
std::vector<ExperimentRecord> parse_json_records(std::istream& in);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    double min_size = 0.0;
    double max_size = 0.0;
};

/// Least squares on (log size, log cost). Needs three or more points, all positive.
ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& points);

/// Least squares of log(cost) on size; the slope is log(base) per unit size.
ScalingFit fit_log_linear(const std::vector<std::pair<double, double>>& points);

struct TrialResult {
    std::uint64_t queries = 0;
    std::uint64_t steps = 0;
    bool success = false;
};

struct ExperimentSummary;

struct ExperimentSpec {
    std::string name;
    std::string description;
    /// Value the summary compares the fitted exponent against.
    double expected_exponent = 0.0;
    /// Which mean the fit uses: "queries" or "steps".
    std::string cost_column = "queries";
    /// Throws SizeError naming the cap when a size is out of range.
    std::function<void(const ExperimentConfig&)> check_sizes;
    std::function<TrialResult(const ExperimentConfig&, std::size_t size, SeededRng& rng)> run;
    /// Abscissa of the fit for a size; the size itself when unset.
    std::function<double(const ExperimentConfig&, std::size_t size)> fit_x;
    std::string fit_x_label = "size";
    /// Extra summary work, e.g. derived quantities.
    std::function<void(const ExperimentConfig&, ExperimentSummary&)> finish;
};

const std::vector<ExperimentSpec>& experiments();
const ExperimentSpec& find_experiment(const std::string& name);

/// Per-trial stream id; fixed by (size, trial) so output is independent of
/// scheduling.
std::uint64_t trial_stream(std::size_t size, std::size_t trial);

/// Runs every (size, trial) pair on up to config.jobs threads. on_record sees
/// records in (size, trial) order as soon as each prefix completes.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config,
                                             const std::function<void(const ExperimentRecord&)>& on_record = {});

struct SizeSummary {
    std::size_t size = 0;
    double mean_queries = 0.0;
    double mean_steps = 0.0;
    double success_rate = 0.0;
};

struct ExperimentSummary {
    std::string experiment;
    std::vector<SizeSummary> sizes;
    double expected_exponent = 0.0;
    std::optional<ScalingFit> fit;
    std::string cost_label;
    std::string x_label;
    std::vector<std::string> notes;
};

ExperimentSummary summarize(const ExperimentConfig& config, const std::vector<ExperimentRecord>& records);
void print_summary(std::ostream& out, const ExperimentSummary& summary);

struct SelftestCase {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Small exact and trivially checkable examples across every module.
std::vector<SelftestCase> run_selftest();

} // namespace qsearch
