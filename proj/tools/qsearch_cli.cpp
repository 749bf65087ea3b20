#include <qsearch/bench.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace {

constexpr int kUsageExit = 2;
constexpr int kSelftestExit = 3;

struct RunFlags {
    std::string config_path;
    std::string experiment;
    std::string sizes;
    std::string trials;
    std::string seed;
    std::string out;
    std::string format;
    std::string jobs;
    std::vector<std::string> params;
    bool quiet = false;
};

qsearch::ExperimentConfig build_config(const RunFlags& f) {
    qsearch::ExperimentConfig c;
    if (!f.config_path.empty()) {
        c = qsearch::ExperimentConfig::load(f.config_path);
    }
    const std::pair<const char*, const std::string*> overrides[] = {
        {"experiment", &f.experiment}, {"sizes", &f.sizes}, {"trials", &f.trials}, {"seed", &f.seed},
        {"out", &f.out},               {"format", &f.format}, {"jobs", &f.jobs},
    };
    for (const auto& [key, value] : overrides) {
        if (!value->empty()) {
            c.set(key, *value);
        }
    }
    for (const auto& p : f.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) {
            throw qsearch::UsageError("--param expects key=value, got '" + p + "'");
        }
        c.set(p.substr(0, eq), p.substr(eq + 1));
    }
    c.validate();
    return c;
}

int run(const RunFlags& flags) {
    const qsearch::ExperimentConfig config = build_config(flags);
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!config.out.empty() && config.out != "-") {
        file.open(config.out, std::ios::out | std::ios::trunc);
        if (!file) {
            throw qsearch::IoError("cannot write " + config.out);
        }
        out = &file;
    }
    qsearch::RecordWriter writer(*out, config.format);
    const auto records = qsearch::run_experiment(config, [&](const qsearch::ExperimentRecord& r) { writer.write(r); });
    if (!*out) {
        throw qsearch::IoError("write failed");
    }
    if (!flags.quiet) {
        qsearch::print_summary(std::cerr, qsearch::summarize(config, records));
    }
    return 0;
}

int list() {
    for (const auto& e : qsearch::experiments()) {
        std::cout << e.name << "\t" << e.description << " (expected exponent " << e.expected_exponent << ")\n";
    }
    return 0;
}

int selftest() {
    std::size_t failed = 0;
    const auto cases = qsearch::run_selftest();
    for (const auto& c : cases) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.passed) {
            std::cout << " (" << c.detail << ")";
            ++failed;
        }
        std::cout << '\n';
    }
    std::cout << cases.size() - failed << "/" << cases.size() << " passed\n";
    return failed == 0 ? 0 : kSelftestExit;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qsearch: quantum search simulations and scaling experiments"};
    app.require_subcommand(1);

    RunFlags flags;
    auto* run_cmd = app.add_subcommand("run", "run an experiment and write records");
    run_cmd->add_option("config", flags.config_path, "key=value config file")->check(CLI::ExistingFile);
    run_cmd->add_option("--experiment,-e", flags.experiment, "experiment name (see list)");
    run_cmd->add_option("--sizes,-s", flags.sizes, "sizes, e.g. 4,16,64 or 8..64:8 or 64..16384:x4");
    run_cmd->add_option("--trials,-t", flags.trials, "trials per size");
    run_cmd->add_option("--seed", flags.seed, "master seed");
    run_cmd->add_option("--out,-o", flags.out, "output path (default standard output)");
    run_cmd->add_option("--format,-f", flags.format, "csv or json-lines");
    run_cmd->add_option("--jobs,-j", flags.jobs, "worker threads");
    run_cmd->add_option("--param,-p", flags.params, "experiment parameter key=value (repeatable)");
    run_cmd->add_flag("--quiet,-q", flags.quiet, "skip the summary on standard error");

    app.add_subcommand("list", "list experiments");
    app.add_subcommand("selftest", "run the built-in example checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageExit;
    }

    try {
        if (*run_cmd) {
            return run(flags);
        }
        if (app.got_subcommand("list")) {
            return list();
        }
        return selftest();
    } catch (const qsearch::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsageExit;
    } catch (const qsearch::SizeError& e) {
        std::cerr << "size error: " << e.what() << '\n';
        return kUsageExit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
