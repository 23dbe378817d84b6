#include "fkm/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fkm {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

struct ParsedPoints {
    std::vector<double> data;
    std::vector<uint64_t> weights;
    std::size_t dim = 0;
    bool weighted = false;
    std::map<std::string, std::string> header;
};

ParsedPoints parse_points(std::istream& in) {
    ParsedPoints parsed;
    std::string line;
    std::size_t line_no = 0;
    bool saw_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty()) continue;
        if (text[0] == '#') {
            const std::string comment = trim(text.substr(1));
            if (comment == "weighted") {
                if (saw_data)
                    throw std::runtime_error(
                        "line " + std::to_string(line_no) +
                        ": weighted header after data lines");
                parsed.weighted = true;
            } else if (const auto eq = comment.find('='); eq != std::string::npos) {
                parsed.header[trim(comment.substr(0, eq))] =
                    trim(comment.substr(eq + 1));
            }
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(text);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(trim(field));
        if (fields.empty())
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": no fields");
        const std::size_t coords = parsed.weighted ? fields.size() - 1 : fields.size();
        if (coords == 0)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": no coordinates");
        if (!saw_data) {
            parsed.dim = coords;
            saw_data = true;
        } else if (coords != parsed.dim) {
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": inconsistent dimension");
        }
        for (std::size_t d = 0; d < parsed.dim; ++d) {
            char* end = nullptr;
            const double value = std::strtod(fields[d].c_str(), &end);
            if (end == fields[d].c_str() || *end != '\0')
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": bad coordinate '" + fields[d] + "'");
            parsed.data.push_back(value);
        }
        if (parsed.weighted) {
            const std::string& last = fields.back();
            char* end = nullptr;
            const unsigned long long weight =
                std::strtoull(last.c_str(), &end, 10);
            if (end == last.c_str() || *end != '\0' || weight == 0)
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": bad weight '" + last + "'");
            parsed.weights.push_back(weight);
        }
    }
    if (!saw_data) throw std::runtime_error("no points in input");
    return parsed;
}

void write_rows(std::ostream& out, const std::vector<double>& data,
                std::size_t dim, const std::vector<uint64_t>* weights) {
    const std::size_t n = data.size() / dim;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
            if (d > 0) out << ',';
            out << format_double(data[i * dim + d]);
        }
        if (weights != nullptr) out << ',' << (*weights)[i];
        out << '\n';
    }
}

void write_echo(std::ostream& out, const HeaderEcho& echo) {
    for (const auto& [key, value] : echo) out << "# " << key << '=' << value << '\n';
}

}  // namespace

void write_points(std::ostream& out, const WeightedDataset& x,
                  const HeaderEcho& echo) {
    const bool weighted = !x.unit_weights();
    if (weighted) out << "# weighted\n";
    write_echo(out, echo);
    write_rows(out, x.data(), x.dim(), weighted ? &x.weights() : nullptr);
}

WeightedDataset read_points(std::istream& in,
                            std::map<std::string, std::string>* header) {
    ParsedPoints parsed = parse_points(in);
    if (header != nullptr) *header = std::move(parsed.header);
    if (parsed.weighted)
        return WeightedDataset(std::move(parsed.data), parsed.dim,
                               std::move(parsed.weights));
    return WeightedDataset(std::move(parsed.data), parsed.dim);
}

void write_coreset(std::ostream& out, const Coreset& coreset,
                   const HeaderEcho& echo) {
    out << "# weighted\n";
    out << "# source_total=" << coreset.source_total << '\n';
    write_echo(out, echo);
    write_rows(out, coreset.points, coreset.dim, &coreset.weights);
}

Coreset read_coreset(std::istream& in,
                     std::map<std::string, std::string>* header) {
    std::map<std::string, std::string> kv;
    ParsedPoints parsed = parse_points(in);
    kv = parsed.header;
    if (!parsed.weighted)
        throw std::runtime_error("coreset files must carry a weight column");
    Coreset coreset;
    coreset.dim = parsed.dim;
    coreset.points = std::move(parsed.data);
    coreset.weights = std::move(parsed.weights);
    coreset.source_total = 0;
    if (const auto it = kv.find("source_total"); it != kv.end())
        coreset.source_total = std::strtoull(it->second.c_str(), nullptr, 10);
    if (coreset.source_total == 0) coreset.source_total = coreset.weight_sum();
    if (header != nullptr) *header = std::move(kv);
    return coreset;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

}  // namespace

void write_points_file(const std::string& path, const WeightedDataset& x,
                       const HeaderEcho& echo) {
    auto out = open_out(path);
    write_points(out, x, echo);
}

WeightedDataset read_points_file(const std::string& path,
                                 std::map<std::string, std::string>* header) {
    auto in = open_in(path);
    return read_points(in, header);
}

void write_coreset_file(const std::string& path, const Coreset& coreset,
                        const HeaderEcho& echo) {
    auto out = open_out(path);
    write_coreset(out, coreset, echo);
}

Coreset read_coreset_file(const std::string& path,
                          std::map<std::string, std::string>* header) {
    auto in = open_in(path);
    return read_coreset(in, header);
}

namespace {

void write_coreset_block(std::ostream& out, const Coreset& coreset) {
    out << "points=" << coreset.size() << " source_total=" << coreset.source_total
        << '\n';
    for (std::size_t i = 0; i < coreset.size(); ++i) {
        const auto p = coreset.point(i);
        for (std::size_t d = 0; d < coreset.dim; ++d) {
            if (d > 0) out << ',';
            out << format_double(p[d]);
        }
        out << ',' << coreset.weights[i] << '\n';
    }
}

Coreset read_coreset_block(std::istream& in, std::size_t dim) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("checkpoint truncated in coreset block");
    std::size_t count = 0;
    unsigned long long source_total = 0;
    if (std::sscanf(line.c_str(), "points=%zu source_total=%llu", &count,
                    &source_total) != 2)
        throw std::runtime_error("bad coreset block header: " + line);
    Coreset coreset;
    coreset.dim = dim;
    coreset.source_total = source_total;
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line))
            throw std::runtime_error("checkpoint truncated in coreset points");
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != dim + 1)
            throw std::runtime_error("bad coreset point line: " + line);
        for (std::size_t d = 0; d < dim; ++d)
            coreset.points.push_back(std::strtod(fields[d].c_str(), nullptr));
        coreset.weights.push_back(
            std::strtoull(fields[dim].c_str(), nullptr, 10));
    }
    return coreset;
}

uint64_t parse_kv_u64(const std::map<std::string, std::string>& kv,
                      const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end())
        throw std::runtime_error("checkpoint missing field: " + key);
    return std::strtoull(it->second.c_str(), nullptr, 10);
}

double parse_kv_double(const std::map<std::string, std::string>& kv,
                       const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end())
        throw std::runtime_error("checkpoint missing field: " + key);
    return std::strtod(it->second.c_str(), nullptr);
}

}  // namespace

void save_checkpoint(std::ostream& out, const CoresetStream& stream) {
    const StreamConfig& config = stream.config();
    out << "# fkm stream checkpoint\n";
    out << "version=1\n";
    out << "dim=" << stream.dim() << '\n';
    out << "k=" << config.params.k << '\n';
    out << "m=" << format_double(config.params.m) << '\n';
    out << "epsilon=" << format_double(config.params.epsilon) << '\n';
    out << "delta=" << format_double(config.params.delta) << '\n';
    out << "const_q=" << format_double(config.params.const_q) << '\n';
    out << "const_a=" << format_double(config.params.const_a) << '\n';
    out << "const_b=" << format_double(config.params.const_b) << '\n';
    out << "const_c=" << format_double(config.params.const_c) << '\n';
    out << "alpha=" << format_double(config.bicriteria.alpha) << '\n';
    out << "beta=" << format_double(config.bicriteria.beta) << '\n';
    out << "block_size=" << stream.block_size() << '\n';
    out << "max_depth=" << config.max_depth << '\n';
    out << "seed=" << config.seed << '\n';
    out << "total_seen=" << stream.total_seen() << '\n';
    out << "reductions=" << stream.reductions() << '\n';
    out << "buffer_count=" << stream.buffer_count() << '\n';
    const auto& buffer = stream.buffer();
    const std::size_t dim = stream.dim();
    for (std::size_t i = 0; i < stream.buffer_count(); ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
            if (d > 0) out << ',';
            out << format_double(buffer[i * dim + d]);
        }
        out << '\n';
    }
    std::size_t occupied = 0;
    for (const auto& level : stream.levels())
        if (level.has_value()) ++occupied;
    out << "levels=" << occupied << '\n';
    for (std::size_t i = 0; i < stream.levels().size(); ++i) {
        if (!stream.levels()[i].has_value()) continue;
        out << "level=" << i << '\n';
        write_coreset_block(out, *stream.levels()[i]);
    }
}

CoresetStream load_checkpoint(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t buffer_count = 0;
    // Header scan up to the buffer section.
    while (std::getline(in, line)) {
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("bad checkpoint line: " + line);
        kv[text.substr(0, eq)] = text.substr(eq + 1);
        if (text.substr(0, eq) == "buffer_count") {
            buffer_count = std::strtoull(text.substr(eq + 1).c_str(), nullptr, 10);
            break;
        }
    }
    StreamConfig config;
    config.params.k = static_cast<uint32_t>(parse_kv_u64(kv, "k"));
    config.params.m = parse_kv_double(kv, "m");
    config.params.epsilon = parse_kv_double(kv, "epsilon");
    config.params.delta = parse_kv_double(kv, "delta");
    config.params.const_q = parse_kv_double(kv, "const_q");
    config.params.const_a = parse_kv_double(kv, "const_a");
    config.params.const_b = parse_kv_double(kv, "const_b");
    config.params.const_c = parse_kv_double(kv, "const_c");
    config.bicriteria.alpha = parse_kv_double(kv, "alpha");
    config.bicriteria.beta = parse_kv_double(kv, "beta");
    config.base_block_size = parse_kv_u64(kv, "block_size");
    config.max_depth = static_cast<uint32_t>(parse_kv_u64(kv, "max_depth"));
    config.seed = parse_kv_u64(kv, "seed");
    const uint64_t total_seen = parse_kv_u64(kv, "total_seen");
    const uint64_t reductions = parse_kv_u64(kv, "reductions");
    const std::size_t dim = parse_kv_u64(kv, "dim");

    std::vector<double> buffer;
    buffer.reserve(buffer_count * dim);
    for (std::size_t i = 0; i < buffer_count; ++i) {
        if (!std::getline(in, line))
            throw std::runtime_error("checkpoint truncated in buffer");
        std::stringstream ss(line);
        std::string field;
        std::size_t d = 0;
        while (std::getline(ss, field, ',')) {
            buffer.push_back(std::strtod(field.c_str(), nullptr));
            ++d;
        }
        if (d != dim) throw std::runtime_error("bad buffer line: " + line);
    }

    if (!std::getline(in, line) || line.rfind("levels=", 0) != 0)
        throw std::runtime_error("checkpoint missing levels section");
    const std::size_t occupied = std::strtoull(line.c_str() + 7, nullptr, 10);
    std::vector<std::optional<Coreset>> levels(config.max_depth + 1);
    for (std::size_t i = 0; i < occupied; ++i) {
        if (!std::getline(in, line) || line.rfind("level=", 0) != 0)
            throw std::runtime_error("checkpoint missing level header");
        const std::size_t index = std::strtoull(line.c_str() + 6, nullptr, 10);
        if (index >= levels.size())
            throw std::runtime_error("checkpoint level beyond the configured depth");
        levels[index] = read_coreset_block(in, dim);
    }

    CoresetStream stream(dim, config);
    stream.restore(std::move(levels), std::move(buffer), total_seen, reductions);
    return stream;
}

void save_checkpoint_file(const std::string& path, const CoresetStream& stream) {
    auto out = open_out(path);
    save_checkpoint(out, stream);
}

CoresetStream load_checkpoint_file(const std::string& path) {
    auto in = open_in(path);
    return load_checkpoint(in);
}

}  // namespace fkm
