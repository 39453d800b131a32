#include "chemoswarm/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>

namespace chemo {

namespace {

constexpr std::size_t kTraceColumns = 17;

void append_double(std::string& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

template <class T>
T parse_number(std::string_view text, std::size_t line, std::string_view column) {
    T value{};
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ParseError("bad value '" + std::string(text) + "' in column " + std::string(column), line);
    }
    return value;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            parts.push_back(line.substr(start));
            break;
        }
        parts.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return parts;
}

} // namespace

std::string format_double(double v) {
    std::string s;
    append_double(s, v);
    return s;
}

void write_trace_csv(std::ostream& out, std::span<const AgentTrace> traces) {
    out << kTraceHeader << '\n';
    std::size_t rows = 0;
    for (const auto& t : traces) rows = std::max(rows, t.rows.size());
    std::vector<const AgentTrace*> ordered;
    for (const auto& t : traces) ordered.push_back(&t);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const AgentTrace* a, const AgentTrace* b) { return a->agent < b->agent; });

    std::string line;
    for (std::size_t r = 0; r < rows; ++r) {
        for (const AgentTrace* t : ordered) {
            if (r >= t->rows.size()) continue;
            const TraceRow& row = t->rows[r];
            line.clear();
            line += std::to_string(row.step);
            line += ',';
            line += std::to_string(t->agent);
            for (double s : row.sensors) {
                line += ',';
                append_double(line, s);
            }
            for (double v : {row.raw[0], row.raw[1], row.context[0], row.context[1], row.pos.x, row.pos.y, row.gain,
                             row.prev.x, row.prev.y}) {
                line += ',';
                append_double(line, v);
            }
            line += '\n';
            out << line;
        }
    }
}

std::vector<AgentTrace> read_trace_csv(std::istream& in) {
    static const auto column_names = split(kTraceHeader);
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty trace file", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTraceHeader) throw ParseError("trace header mismatch, expected '" + std::string(kTraceHeader) + "'", 1);

    std::map<AgentId, AgentTrace> by_agent;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != kTraceColumns) {
            throw ParseError("expected " + std::to_string(kTraceColumns) + " columns, got " + std::to_string(f.size()),
                             line_no);
        }
        auto num = [&](std::size_t i) { return parse_number<double>(f[i], line_no, column_names[i]); };
        TraceRow row;
        row.step = parse_number<int>(f[0], line_no, column_names[0]);
        const auto agent = parse_number<AgentId>(f[1], line_no, column_names[1]);
        for (std::size_t k = 0; k < kSensorCount; ++k) row.sensors[k] = num(2 + k);
        row.raw = {num(8), num(9)};
        row.context = {num(10), num(11)};
        row.pos = {num(12), num(13)};
        row.gain = num(14);
        row.prev = {num(15), num(16)};
        auto& trace = by_agent[agent];
        trace.agent = agent;
        trace.rows.push_back(row);
    }

    std::vector<AgentTrace> traces;
    traces.reserve(by_agent.size());
    for (auto& [id, trace] : by_agent) traces.push_back(std::move(trace));
    return traces;
}

} // namespace chemo
