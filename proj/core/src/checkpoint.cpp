#include "chemoswarm/checkpoint.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chemo {

namespace {

using nlohmann::json;

constexpr const char* kWeightLayout =
    "row-major; [0,54) input_to_hidden[6][9] with columns bias,s0..s5,c0,c1; "
    "[54,82) hidden_to_output[4][7] with rows v,omega,c0,c1 and columns bias,h0..h5";

void append_exact(std::string& out, double v) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

template <class Seq>
void append_array(std::string& out, const Seq& values) {
    out += '[';
    bool first = true;
    for (double v : values) {
        if (!first) out += ", ";
        first = false;
        append_exact(out, v);
    }
    out += ']';
}

void append_vector(std::string& out, const Eigen::VectorXd& v) {
    append_array(out, std::vector<double>(v.data(), v.data() + v.size()));
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw ParseError(std::string("missing field '") + name + "'");
    return j.at(name);
}

double as_double(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_number()) throw ParseError(std::string("field '") + name + "' must be a number");
    return v.get<double>();
}

int as_int(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_number_integer()) throw ParseError(std::string("field '") + name + "' must be an integer");
    return v.get<int>();
}

std::vector<double> as_doubles(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_array()) throw ParseError(std::string("field '") + name + "' must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number()) throw ParseError(std::string("field '") + name + "' must contain only numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

void check_schema(const json& j) {
    const int version = as_int(j, "schema_version");
    if (version != kCheckpointSchemaVersion) {
        throw ParseError("unsupported schema_version " + std::to_string(version));
    }
}

std::string genome_body(const GenomeCheckpoint& c, const std::string& indent) {
    std::string out;
    out += indent + "\"schema_version\": " + std::to_string(kCheckpointSchemaVersion) + ",\n";
    out += indent + "\"generation\": " + std::to_string(c.generation) + ",\n";
    out += indent + "\"fitness\": ";
    if (c.fitness) {
        append_exact(out, *c.fitness);
    } else {
        out += "null";
    }
    out += ",\n";
    out += indent + "\"weight_layout\": \"" + kWeightLayout + "\",\n";
    out += indent + "\"weights\": ";
    append_array(out, c.genome.weights());
    out += '\n';
    return out;
}

GenomeCheckpoint genome_from_json(const json& j) {
    check_schema(j);
    GenomeCheckpoint c;
    c.generation = as_int(j, "generation");
    const json& f = field(j, "fitness");
    if (f.is_number()) {
        c.fitness = f.get<double>();
    } else if (!f.is_null()) {
        throw ParseError("field 'fitness' must be a number or null");
    }
    try {
        c.genome = Genome::from_weights(as_doubles(j, "weights"));
    } catch (const InvalidGenome& e) {
        throw ParseError(std::string("field 'weights': ") + e.what());
    }
    return c;
}

} // namespace

std::string genome_checkpoint_json(const GenomeCheckpoint& checkpoint) {
    return "{\n" + genome_body(checkpoint, "  ") + "}\n";
}

GenomeCheckpoint parse_genome_checkpoint(const std::string& text) {
    return genome_from_json(parse_json(text));
}

std::string run_state_json(const RunState& state) {
    const CmaState& s = state.cma;
    std::string out = "{\n";
    out += "  \"schema_version\": " + std::to_string(kCheckpointSchemaVersion) + ",\n";
    out += "  \"generation\": " + std::to_string(s.generation) + ",\n";
    out += "  \"sigma\": ";
    append_exact(out, s.sigma);
    out += ",\n  \"mean\": ";
    append_vector(out, s.mean);
    out += ",\n  \"p_sigma\": ";
    append_vector(out, s.p_sigma);
    out += ",\n  \"p_c\": ";
    append_vector(out, s.p_c);
    out += ",\n  \"covariance\": [";
    for (Eigen::Index r = 0; r < s.cov.rows(); ++r) {
        out += r ? ",\n    " : "\n    ";
        append_vector(out, s.cov.row(r).transpose());
    }
    out += "\n  ]";
    if (state.best) {
        out += ",\n  \"best\": {\n" + genome_body(*state.best, "    ") + "  }";
    }
    out += "\n}\n";
    return out;
}

RunState parse_run_state(const std::string& text) {
    const json j = parse_json(text);
    check_schema(j);
    RunState state;
    CmaState& s = state.cma;
    s.generation = as_int(j, "generation");
    s.sigma = as_double(j, "sigma");
    auto vec = [&](const char* name) {
        const auto v = as_doubles(j, name);
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    };
    s.mean = vec("mean");
    s.p_sigma = vec("p_sigma");
    s.p_c = vec("p_c");
    const json& cov = field(j, "covariance");
    if (!cov.is_array()) throw ParseError("field 'covariance' must be an array");
    const auto n = static_cast<Eigen::Index>(cov.size());
    s.cov.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const json& row = cov[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw ParseError("field 'covariance' must be a square matrix");
        }
        for (Eigen::Index c = 0; c < n; ++c) {
            if (!row[static_cast<std::size_t>(c)].is_number()) throw ParseError("covariance entries must be numbers");
            s.cov(r, c) = row[static_cast<std::size_t>(c)].get<double>();
        }
    }
    if (j.contains("best")) state.best = genome_from_json(j.at("best"));
    return state;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file_atomic(const std::filesystem::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace chemo
