#include <qsearch/bench.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace qsearch {

namespace {

std::string format_ms(double ms) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    return buf;
}

} // namespace

RecordWriter::RecordWriter(std::ostream& out, OutputFormat format) : out_(out), format_(format) {
    if (format_ == OutputFormat::csv) {
        out_ << kCsvHeader << '\n';
    }
}

void RecordWriter::write(const ExperimentRecord& r) {
    if (format_ == OutputFormat::csv) {
        out_ << r.experiment << ',' << r.size << ',' << r.trial << ',' << r.seed << ',' << r.queries << ','
             << r.steps << ',' << (r.success ? 1 : 0) << ',' << format_ms(r.ms) << '\n';
    } else {
        nlohmann::ordered_json j;
        j["experiment"] = r.experiment;
        j["size"] = r.size;
        j["trial"] = r.trial;
        j["seed"] = r.seed;
        j["queries"] = r.queries;
        j["steps"] = r.steps;
        j["success"] = r.success;
        j["ms"] = std::stod(format_ms(r.ms));
        out_ << j.dump() << '\n';
    }
    out_.flush();
}

void emit(const std::vector<ExperimentRecord>& records, OutputFormat format, const std::string& path) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!path.empty() && path != "-") {
        file.open(path, std::ios::out | std::ios::trunc);
        if (!file) {
            throw IoError("cannot write " + path);
        }
        out = &file;
    }
    RecordWriter writer(*out, format);
    for (const auto& r : records) {
        writer.write(r);
    }
    if (!*out) {
        throw IoError("write failed for " + (path.empty() ? std::string("standard output") : path));
    }
}

std::vector<ExperimentRecord> parse_csv_records(std::istream& in) {
    std::vector<ExperimentRecord> out;
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ParseError("CSV: missing or unexpected header");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::stringstream ss(line);
        std::vector<std::string> f;
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 8) {
            throw ParseError("CSV line " + std::to_string(line_no) + ": expected 8 fields");
        }
        try {
            ExperimentRecord r;
            r.experiment = f[0];
            r.size = std::stoull(f[1]);
            r.trial = std::stoull(f[2]);
            r.seed = std::stoull(f[3]);
            r.queries = std::stoull(f[4]);
            r.steps = std::stoull(f[5]);
            r.success = f[6] == "1";
            r.ms = std::stod(f[7]);
            out.push_back(r);
        } catch (const std::exception&) {
            throw ParseError("CSV line " + std::to_string(line_no) + ": malformed field");
        }
    }
    return out;
}

std::vector<ExperimentRecord> parse_json_records(std::istream& in) {
    std::vector<ExperimentRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(line);
            ExperimentRecord r;
            r.experiment = j.at("experiment").get<std::string>();
            r.size = j.at("size").get<std::size_t>();
            r.trial = j.at("trial").get<std::size_t>();
            r.seed = j.at("seed").get<std::uint64_t>();
            r.queries = j.at("queries").get<std::uint64_t>();
            r.steps = j.at("steps").get<std::uint64_t>();
            r.success = j.at("success").get<bool>();
            r.ms = j.at("ms").get<double>();
            out.push_back(r);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("JSON record: ") + e.what());
        }
    }
    return out;
}

} // namespace qsearch
