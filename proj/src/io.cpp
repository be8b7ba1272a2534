#include "brent/io.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

namespace brent {

namespace {

std::pair<std::size_t, std::size_t> line_column_at(const std::string& bytes, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < bytes.size(); ++i) {
        if (bytes[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

Rational parse_entry(const std::string& token, std::size_t line, std::size_t column) {
    try {
        return Rational::parse(token);
    } catch (const std::domain_error&) {
        throw ValueError("zero denominator in entry '" + token + "'");
    } catch (const std::invalid_argument&) {
        throw ParseError("invalid entry '" + token + "'", line, column);
    }
}

Rational json_entry(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_unsigned()) return Rational(static_cast<long long>(j.get<unsigned long long>()));
    if (j.is_string()) return parse_entry(j.get<std::string>(), 1, 1);
    throw ParseError("entry must be an integer or a \"num/den\" string", 1, 1);
}

RationalMatrix json_matrix(const nlohmann::json& j, Index rows, Index cols,
                           const std::string& where) {
    if (!j.is_array() || static_cast<Index>(j.size()) != rows)
        throw ShapeError(where + ": expected " + std::to_string(rows) + " rows");
    RationalMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const nlohmann::json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw ShapeError(where + ": expected rows of " + std::to_string(cols) + " entries");
        for (Index c = 0; c < cols; ++c) m(i, c) = json_entry(row[static_cast<std::size_t>(c)]);
    }
    return m;
}

Algorithm parse_json(const std::string& bytes) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, column] = line_column_at(bytes, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError("invalid JSON", line, column);
    }
    if (!j.is_object() || !j.contains("format") || !j.contains("terms"))
        throw ParseError("expected an object with \"format\" and \"terms\"", 1, 1);
    const nlohmann::json& f = j["format"];
    if (!f.is_object() || !f.contains("m") || !f.contains("n") || !f.contains("p") ||
        !f["m"].is_number_integer() || !f["n"].is_number_integer() || !f["p"].is_number_integer())
        throw ParseError("\"format\" must hold integer m, n, p", 1, 1);
    const MatMulFormat format(f["m"].get<int>(), f["n"].get<int>(), f["p"].get<int>());

    const nlohmann::json& terms = j["terms"];
    if (!terms.is_array() || terms.empty()) throw ValueError("\"terms\" must be a nonempty array");
    if (j.contains("length") &&
        (!j["length"].is_number_integer() || j["length"].get<Index>() != static_cast<Index>(terms.size())))
        throw ShapeError("\"length\" does not match the number of terms");

    std::vector<TriadTerm> parsed;
    parsed.reserve(terms.size());
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const nlohmann::json& term = terms[t];
        const std::string where = "term " + std::to_string(t + 1);
        if (!term.is_object() || !term.contains("u") || !term.contains("v") || !term.contains("w"))
            throw ParseError(where + " must hold \"u\", \"v\" and \"w\"", 1, 1);
        parsed.push_back({json_matrix(term["u"], format.m, format.n, where + " u"),
                          json_matrix(term["v"], format.n, format.p, where + " v"),
                          json_matrix(term["w"], format.p, format.m, where + " w")});
    }
    return Algorithm(format, std::move(parsed));
}

struct TextCursor {
    std::vector<std::string> lines;
    std::size_t next = 0;

    explicit TextCursor(const std::string& bytes) {
        std::istringstream in(bytes);
        std::string line;
        while (std::getline(in, line)) lines.push_back(std::move(line));
    }

    static bool blank(const std::string& line) {
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) return false;
        return true;
    }

    void skip_blanks() {
        while (next < lines.size() && blank(lines[next])) ++next;
    }

    bool at_end() {
        skip_blanks();
        return next == lines.size();
    }
};

struct Token {
    std::string text;
    std::size_t column;
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i == line.size()) break;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        tokens.push_back({line.substr(start, i - start), start + 1});
    }
    return tokens;
}

RationalMatrix text_block(TextCursor& cur, Index rows, Index cols, const std::string& where) {
    cur.skip_blanks();
    RationalMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        if (cur.next == cur.lines.size() || TextCursor::blank(cur.lines[cur.next]))
            throw ShapeError(where + ": expected " + std::to_string(rows) + " rows, found " +
                             std::to_string(i));
        const std::size_t line_number = cur.next + 1;
        const std::vector<Token> tokens = tokenize(cur.lines[cur.next]);
        if (static_cast<Index>(tokens.size()) != cols)
            throw ShapeError(where + " line " + std::to_string(line_number) + ": expected " +
                             std::to_string(cols) + " entries, found " +
                             std::to_string(tokens.size()));
        for (Index c = 0; c < cols; ++c)
            m(i, c) = parse_entry(tokens[static_cast<std::size_t>(c)].text, line_number,
                                  tokens[static_cast<std::size_t>(c)].column);
        ++cur.next;
    }
    return m;
}

Algorithm parse_text(const std::string& bytes) {
    TextCursor cur(bytes);
    cur.skip_blanks();
    if (cur.next == cur.lines.size()) throw ParseError("empty input", 1, 1);

    const std::size_t header_line = cur.next + 1;
    const std::vector<Token> header = tokenize(cur.lines[cur.next]);
    if (header.size() != 4)
        throw ParseError("header must read \"m n p r\"", header_line,
                         header.empty() ? 1 : header[0].column);
    long long values[4];
    for (int i = 0; i < 4; ++i) {
        try {
            values[i] = std::stoll(header[static_cast<std::size_t>(i)].text);
        } catch (const std::exception&) {
            throw ParseError("header entry '" + header[static_cast<std::size_t>(i)].text +
                                 "' is not an integer",
                             header_line, header[static_cast<std::size_t>(i)].column);
        }
    }
    ++cur.next;
    const MatMulFormat format(static_cast<int>(values[0]), static_cast<int>(values[1]),
                              static_cast<int>(values[2]));
    if (values[3] < 1) throw ValueError("header length must be at least 1");

    std::vector<TriadTerm> terms;
    for (long long t = 0; t < values[3]; ++t) {
        const std::string where = "term " + std::to_string(t + 1);
        TriadTerm term;
        term.u = text_block(cur, format.m, format.n, where + " u");
        term.v = text_block(cur, format.n, format.p, where + " v");
        term.w = text_block(cur, format.p, format.m, where + " w");
        terms.push_back(std::move(term));
    }
    if (!cur.at_end())
        throw ShapeError("trailing content at line " + std::to_string(cur.next + 1));
    return Algorithm(format, std::move(terms));
}

std::string entry_text(const Rational& r) {
    if (r.denominator() == 1) {
        static const Int lo = Int(-1) << 53, hi = Int(1) << 53;
        if (r.numerator() > lo && r.numerator() < hi) return r.str();
    }
    return "\"" + r.str() + "\"";
}

std::string matrix_text(const RationalMatrix& m) {
    std::string out = "[";
    for (Index i = 0; i < m.rows(); ++i) {
        out += i == 0 ? "[" : ", [";
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ", ";
            out += entry_text(m(i, j));
        }
        out += "]";
    }
    return out + "]";
}

std::string serialize_json(const Algorithm& q) {
    std::string out = "{\n";
    out += "  \"format\": {\"m\": " + std::to_string(q.format.m) + ", \"n\": " +
           std::to_string(q.format.n) + ", \"p\": " + std::to_string(q.format.p) + "},\n";
    out += "  \"length\": " + std::to_string(q.length()) + ",\n";
    out += "  \"terms\": [\n";
    for (int t = 0; t < q.length(); ++t) {
        const TriadTerm& term = q.terms[static_cast<std::size_t>(t)];
        out += "    {\n";
        out += "      \"u\": " + matrix_text(term.u) + ",\n";
        out += "      \"v\": " + matrix_text(term.v) + ",\n";
        out += "      \"w\": " + matrix_text(term.w) + "\n";
        out += t + 1 < q.length() ? "    },\n" : "    }\n";
    }
    out += "  ]\n}\n";
    return out;
}

void append_block(std::string& out, const RationalMatrix& m) {
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ' ';
            out += m(i, j).str();
        }
        out += '\n';
    }
}

std::string serialize_text(const Algorithm& q) {
    std::string out = std::to_string(q.format.m) + " " + std::to_string(q.format.n) + " " +
                      std::to_string(q.format.p) + " " + std::to_string(q.length()) + "\n";
    for (const TriadTerm& term : q.terms) {
        out += '\n';
        append_block(out, term.u);
        out += '\n';
        append_block(out, term.v);
        out += '\n';
        append_block(out, term.w);
    }
    return out;
}

AlgorithmFormat sniff_format(const std::filesystem::path& path, const std::string& bytes) {
    if (path.extension() == ".json") return AlgorithmFormat::json;
    for (char c : bytes) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{' ? AlgorithmFormat::json : AlgorithmFormat::text;
    }
    return AlgorithmFormat::text;
}

}  // namespace

std::string to_string(AlgorithmFormat f) {
    return f == AlgorithmFormat::json ? "json" : "text";
}

Algorithm parse_algorithm(const std::string& bytes, AlgorithmFormat format) {
    return format == AlgorithmFormat::json ? parse_json(bytes) : parse_text(bytes);
}

Algorithm parse_algorithm_file(const std::filesystem::path& path,
                               std::optional<AlgorithmFormat> hint) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValueError("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();
    return parse_algorithm(bytes, hint.value_or(sniff_format(path, bytes)));
}

std::string serialize_algorithm(const Algorithm& q, AlgorithmFormat format) {
    return format == AlgorithmFormat::json ? serialize_json(q) : serialize_text(q);
}

void write_algorithm_file(const std::filesystem::path& path, const Algorithm& q,
                          std::optional<AlgorithmFormat> hint) {
    const AlgorithmFormat format = hint.value_or(
        path.extension() == ".json" ? AlgorithmFormat::json : AlgorithmFormat::text);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValueError("cannot open file for writing: " + path.string());
    out << serialize_algorithm(q, format);
}

}  // namespace brent
