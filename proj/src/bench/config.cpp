#include <qsearch/bench.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace qsearch {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw UsageError("invalid " + what + ": '" + text + "'");
    }
    return value;
}

} // namespace

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            throw UsageError("empty entry in size list '" + text + "'");
        }
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_number<std::size_t>(item, "size"));
            continue;
        }
        const auto a = parse_number<std::size_t>(item.substr(0, dots), "range start");
        std::string rest = item.substr(dots + 2);
        std::string step = "1";
        const auto colon = rest.find(':');
        if (colon != std::string::npos) {
            step = trim(rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        const auto b = parse_number<std::size_t>(rest, "range end");
        if (b < a) {
            throw UsageError("size range '" + item + "' runs backwards");
        }
        if (!step.empty() && (step[0] == 'x' || step[0] == '*')) {
            const auto f = parse_number<std::size_t>(step.substr(1), "range factor");
            if (f < 2 || a == 0) {
                throw UsageError("multiplicative range '" + item + "' needs a factor >= 2 and a positive start");
            }
            for (std::size_t v = a; v <= b; v *= f) {
                out.push_back(v);
                if (v > b / f) {
                    break;
                }
            }
        } else {
            const auto d = parse_number<std::size_t>(step, "range step");
            if (d == 0) {
                throw UsageError("range step must be positive in '" + item + "'");
            }
            for (std::size_t v = a; v <= b; v += d) {
                out.push_back(v);
            }
        }
    }
    if (out.empty()) {
        throw UsageError("size list is empty");
    }
    return out;
}

OutputFormat parse_format(const std::string& text) {
    const std::string t = trim(text);
    if (t == "csv") {
        return OutputFormat::csv;
    }
    if (t == "json" || t == "jsonl" || t == "json-lines") {
        return OutputFormat::json_lines;
    }
    throw UsageError("unknown format '" + text + "' (expected csv or json-lines)");
}

void ExperimentConfig::set(const std::string& key_in, const std::string& value_in) {
    const std::string key = trim(key_in);
    const std::string value = trim(value_in);
    if (key == "experiment") {
        experiment = value;
    } else if (key == "sizes") {
        sizes = parse_sizes(value);
    } else if (key == "trials") {
        trials = parse_number<std::size_t>(value, "trials");
    } else if (key == "seed") {
        seed = parse_number<std::uint64_t>(value, "seed");
    } else if (key == "out") {
        out = value;
    } else if (key == "format") {
        format = parse_format(value);
    } else if (key == "jobs") {
        jobs = parse_number<std::size_t>(value, "jobs");
    } else if (!key.empty()) {
        params[key] = value;
    } else {
        throw UsageError("empty configuration key");
    }
}

void ExperimentConfig::validate() const {
    if (experiment.empty()) {
        throw UsageError("no experiment given");
    }
    if (sizes.empty()) {
        throw UsageError("no sizes given");
    }
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (sizes[i] <= sizes[i - 1]) {
            throw UsageError("sizes must be strictly increasing");
        }
    }
    if (trials == 0) {
        throw UsageError("trials must be at least 1");
    }
    if (jobs == 0) {
        throw UsageError("jobs must be at least 1");
    }
}

double ExperimentConfig::param(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    if (it == params.end()) {
        return fallback;
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) {
            throw std::invalid_argument(key);
        }
        return v;
    } catch (const std::exception&) {
        throw UsageError("parameter " + key + " is not a number: '" + it->second + "'");
    }
}

std::string ExperimentConfig::param(const std::string& key, const std::string& fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
    ExperimentConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        config.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return config;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path);
    }
    return parse(in);
}

} // namespace qsearch
