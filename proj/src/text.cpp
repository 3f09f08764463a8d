#include "mwsched/text.hpp"

#include "mwsched/error.hpp"
#include "mwsched/nsga3.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace mwsched {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

bool parse_double(std::string_view text, double& out) {
    text = trim(text);
    if (text == "nan") {
        out = std::nan("");
        return true;
    }
    if (text == "inf" || text == "-inf") {
        out = text[0] == '-' ? -INFINITY : INFINITY;
        return true;
    }
    auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc() && res.ptr == text.data() + text.size() && !text.empty();
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == sep) {
            out.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string front_to_csv(const Front& front) {
    std::string out = "makespan,cost,unfairness,genes\n";
    for (const auto& ind : front.solutions) {
        for (std::size_t i = 0; i < 3; ++i) out += format_double(ind.objectives[i]) + ',';
        for (std::size_t g = 0; g < ind.assignment.genes.size(); ++g) {
            if (g) out += ' ';
            out += std::to_string(ind.assignment.genes[g]);
        }
        out += '\n';
    }
    return out;
}

Front front_from_csv(std::string_view text, std::string_view source) {
    Front front;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (line_no == 1 && line.starts_with("makespan")) continue;
        auto where = [&] { return std::string(source) + ":" + std::to_string(line_no) + ": "; };
        const auto cols = split(line, ',');
        if (cols.size() < 3 || cols.size() > 4) throw Error(ErrorKind::Parse, where() + "expected 3 objectives and genes");
        Individual ind;
        for (std::size_t i = 0; i < 3; ++i) {
            if (!parse_double(cols[i], ind.objectives[i])) {
                throw Error(ErrorKind::Parse, where() + "bad number '" + std::string(cols[i]) + "'");
            }
        }
        if (cols.size() == 4) {
            for (auto tok : split(trim(cols[3]), ' ')) {
                if (tok.empty()) continue;
                int g = 0;
                auto res = std::from_chars(tok.data(), tok.data() + tok.size(), g);
                if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
                    throw Error(ErrorKind::Parse, where() + "bad gene '" + std::string(tok) + "'");
                }
                ind.assignment.genes.push_back(g);
            }
        }
        front.solutions.push_back(std::move(ind));
    }
    return front;
}

} // namespace mwsched
