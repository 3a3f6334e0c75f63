#include "fracode/textio.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace fracode {

std::string poly_to_string(const LaurentPoly& a) {
    std::ostringstream os;
    os << "p=" << a.prime() << "; vars=" << a.nvars() << "; ";
    if (a.is_zero()) {
        os << "0";
        return os.str();
    }
    bool first = true;
    for (const auto& [e, c] : a.terms()) {
        if (!first) os << " + ";
        first = false;
        os << c;
        if (!e.empty()) {
            os << "*";
            for (std::size_t i = 0; i < e.size(); ++i) os << "x" << (i + 1) << "^" << e[i];
        }
    }
    return os.str();
}

namespace {

std::string expect_prefix(const std::string& s, const std::string& prefix, const char* what) {
    if (s.rfind(prefix, 0) != 0)
        throw std::invalid_argument(std::string(what) + ": expected '" + prefix + "' in '" + s + "'");
    return s.substr(prefix.size());
}

std::vector<std::string> split(const std::string& s, const std::string& sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find(sep, pos);
        if (next == std::string::npos) {
            parts.push_back(s.substr(pos));
            return parts;
        }
        parts.push_back(s.substr(pos, next - pos));
        pos = next + sep.size();
    }
}

}  // namespace

LaurentPoly poly_from_string(const std::string& text) {
    auto parts = split(text, "; ");
    if (parts.size() != 3) throw std::invalid_argument("poly_from_string: malformed '" + text + "'");
    Prime p(static_cast<std::uint32_t>(std::stoul(expect_prefix(parts[0], "p=", "poly_from_string"))));
    std::size_t nvars = std::stoul(expect_prefix(parts[1], "vars=", "poly_from_string"));
    LaurentPoly a(p, nvars);
    if (parts[2] == "0") return a;
    for (const auto& term : split(parts[2], " + ")) {
        std::size_t star = term.find('*');
        std::int64_t coeff = std::stoll(term.substr(0, star));
        Exponents e(nvars, 0);
        if (star != std::string::npos) {
            std::size_t pos = star + 1;
            for (std::size_t i = 0; i < nvars; ++i) {
                std::size_t caret = term.find('^', pos);
                if (caret == std::string::npos || term[pos] != 'x')
                    throw std::invalid_argument("poly_from_string: malformed term '" + term + "'");
                std::size_t idx = std::stoul(term.substr(pos + 1, caret - pos - 1));
                if (idx != i + 1) throw std::invalid_argument("poly_from_string: variables out of order");
                std::size_t consumed = 0;
                e[i] = std::stoi(term.substr(caret + 1), &consumed);
                pos = caret + 1 + consumed;
            }
        }
        a.add_term(e, coeff);
    }
    return a;
}

namespace {

struct PolyParser {
    const std::string& s;
    std::size_t pos = 0;
    Prime p;
    std::size_t nvars;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    std::int64_t parse_int() {
        skip_ws();
        std::size_t consumed = 0;
        std::int64_t v = std::stoll(s.substr(pos), &consumed);
        pos += consumed;
        return v;
    }

    // Returns the 0-based variable index, or npos if not a variable token.
    std::size_t parse_var() {
        skip_ws();
        if (pos >= s.size() || !std::isalpha(static_cast<unsigned char>(s[pos]))) return std::string::npos;
        char name = s[pos];
        static const std::string aliases = "xyzw";
        std::size_t alias_idx = aliases.find(name);
        if (alias_idx == std::string::npos)
            throw std::invalid_argument("parse_poly: unknown variable '" + std::string(1, name) + "'");
        ++pos;
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            std::size_t consumed = 0;
            std::size_t idx = std::stoul(s.substr(pos), &consumed);
            pos += consumed;
            if (idx < 1 || idx > nvars)
                throw std::invalid_argument("parse_poly: variable index out of range");
            return idx - 1;
        }
        // bare alias letter: x,y both mean x1 in one-variable contexts, and
        // x,y,z,w name the first variables otherwise
        std::size_t idx = nvars == 1 ? 0 : alias_idx;
        if (idx >= nvars) throw std::invalid_argument("parse_poly: variable alias out of range");
        return idx;
    }

    LaurentPoly parse() {
        LaurentPoly out(p, nvars);
        bool expect_term = true;
        std::int64_t sign = 1;
        while (!eof()) {
            char c = peek();
            if (c == '+') {
                ++pos;
                sign = 1;
                expect_term = true;
                continue;
            }
            if (c == '-') {
                ++pos;
                sign = -1;
                expect_term = true;
                continue;
            }
            if (!expect_term) throw std::invalid_argument("parse_poly: expected '+' or '-' in '" + s + "'");
            // term: [int] [* ] factor*
            std::int64_t coeff = 1;
            Exponents e(nvars, 0);
            bool saw_factor = false;
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                coeff = parse_int();
                saw_factor = true;
            }
            for (;;) {
                if (peek() == '*') {
                    ++pos;
                    continue;
                }
                std::size_t var = parse_var();
                if (var == std::string::npos) break;
                std::int64_t exp = 1;
                if (peek() == '^') {
                    ++pos;
                    exp = parse_int();
                }
                e[var] += static_cast<std::int32_t>(exp);
                saw_factor = true;
            }
            if (!saw_factor) throw std::invalid_argument("parse_poly: empty term in '" + s + "'");
            out.add_term(e, sign * coeff);
            expect_term = false;
            sign = 1;
        }
        if (expect_term) throw std::invalid_argument("parse_poly: trailing operator in '" + s + "'");
        return out;
    }
};

}  // namespace

LaurentPoly parse_poly(const std::string& text, Prime p, std::size_t nvars) {
    PolyParser parser{text, 0, p, nvars};
    return parser.parse();
}

std::string operator_to_string(const CssOperator& op) {
    std::ostringstream os;
    os << (op.species == Species::X ? "X" : "Z") << " " << op.p << " " << op.dims << " "
       << op.nqudits << " anchor=";
    for (std::size_t i = 0; i < op.anchor.size(); ++i) os << (i ? "," : "") << op.anchor[i];
    if (op.anchor.empty()) os << "-";
    os << "\n";
    for (const auto& c : op.coeffs) os << poly_to_string(c) << "\n";
    return os.str();
}

namespace {

CssOperator operator_from_lines(const std::vector<std::string>& lines, std::size_t& cursor) {
    if (cursor >= lines.size()) throw std::invalid_argument("operator_from_string: missing header");
    std::istringstream hs(lines[cursor++]);
    std::string species_token, anchor_token;
    std::uint32_t p;
    std::size_t dims, nq;
    hs >> species_token >> p >> dims >> nq >> anchor_token;
    if (!hs || (species_token != "X" && species_token != "Z"))
        throw std::invalid_argument("operator_from_string: malformed header");
    Exponents anchor;
    std::string av = expect_prefix(anchor_token, "anchor=", "operator_from_string");
    if (av != "-")
        for (const auto& part : split(av, ",")) anchor.push_back(std::stoi(part));
    if (anchor.size() != dims) throw std::invalid_argument("operator_from_string: anchor arity mismatch");
    std::vector<LaurentPoly> coeffs;
    for (std::size_t i = 0; i < nq; ++i) {
        if (cursor >= lines.size()) throw std::invalid_argument("operator_from_string: missing coefficient");
        coeffs.push_back(poly_from_string(lines[cursor++]));
    }
    CssOperator raw = make_operator(species_token == "X" ? Species::X : Species::Z, Prime(p), dims,
                                    nq, std::move(coeffs));
    // The stored coefficients are already anchored; the header anchor is an
    // absolute translation on top of them.
    for (std::size_t i = 0; i < dims; ++i) raw.anchor[i] += anchor[i];
    return raw;
}

std::vector<std::string> nonempty_lines(const std::string& text) {
    std::vector<std::string> lines;
    for (const auto& line : split(text, "\n"))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

}  // namespace

CssOperator operator_from_string(const std::string& text) {
    auto lines = nonempty_lines(text);
    std::size_t cursor = 0;
    return operator_from_lines(lines, cursor);
}

std::string spec_to_string(const CodeSpec& spec) {
    std::ostringstream os;
    os << "codespec p=" << spec.p << " D=" << spec.dims << " N=" << spec.nqudits
       << " xgens=" << spec.xgens.size() << " zgens=" << spec.zgens.size() << "\n";
    for (const auto& g : spec.xgens) os << operator_to_string(g);
    for (const auto& g : spec.zgens) os << operator_to_string(g);
    return os.str();
}

CodeSpec spec_from_string(const std::string& text) {
    auto lines = nonempty_lines(text);
    if (lines.empty()) throw std::invalid_argument("spec_from_string: empty input");
    std::istringstream hs(lines[0]);
    std::string tag, ptok, dtok, ntok, xtok, ztok;
    hs >> tag >> ptok >> dtok >> ntok >> xtok >> ztok;
    if (tag != "codespec") throw std::invalid_argument("spec_from_string: missing codespec header");
    Prime p(static_cast<std::uint32_t>(std::stoul(expect_prefix(ptok, "p=", "spec_from_string"))));
    std::size_t dims = std::stoul(expect_prefix(dtok, "D=", "spec_from_string"));
    std::size_t nq = std::stoul(expect_prefix(ntok, "N=", "spec_from_string"));
    std::size_t nx = std::stoul(expect_prefix(xtok, "xgens=", "spec_from_string"));
    std::size_t nz = std::stoul(expect_prefix(ztok, "zgens=", "spec_from_string"));
    std::size_t cursor = 1;
    std::vector<CssOperator> xg, zg;
    for (std::size_t i = 0; i < nx; ++i) xg.push_back(operator_from_lines(lines, cursor));
    for (std::size_t i = 0; i < nz; ++i) zg.push_back(operator_from_lines(lines, cursor));
    return CodeSpec::make(p, dims, nq, std::move(xg), std::move(zg));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << content;
}

CodeSpec spec_from_file(const std::string& path) { return spec_from_string(read_file(path)); }
void spec_to_file(const CodeSpec& spec, const std::string& path) {
    write_file(path, spec_to_string(spec));
}

std::string ruleset_to_string(const LcaRuleSet& rules) {
    std::ostringstream os;
    os << rules.p << " " << rules.new_dims << " " << rules.dims << " " << rules.order << "\n";
    for (const auto& rule : rules.rules)
        for (const auto& f : rule) os << poly_to_string(f) << "\n";
    return os.str();
}

LcaRuleSet ruleset_from_string(const std::string& text) {
    auto lines = nonempty_lines(text);
    if (lines.empty()) throw std::invalid_argument("ruleset_from_string: empty input");
    std::istringstream hs(lines[0]);
    std::uint32_t p;
    std::size_t m, D, order;
    hs >> p >> m >> D >> order;
    if (!hs) throw std::invalid_argument("ruleset_from_string: malformed header");
    std::vector<std::vector<LaurentPoly>> rules(D);
    std::size_t cursor = 1;
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < order; ++j) {
            if (cursor >= lines.size()) throw std::invalid_argument("ruleset_from_string: missing rule");
            rules[i].push_back(poly_from_string(lines[cursor++]));
        }
    return LcaRuleSet::make(Prime(p), D, m, order, std::move(rules));
}

LcaRuleSet ruleset_from_file(const std::string& path) {
    return ruleset_from_string(read_file(path));
}

FpMat kmatrix_from_string(const std::string& text, Prime p) {
    auto lines = nonempty_lines(text);
    if (lines.empty()) throw std::invalid_argument("kmatrix: empty input");
    FpMat K(p.value, 0, lines[0].size());
    for (const auto& line : lines) {
        if (line.size() != lines[0].size()) throw std::invalid_argument("kmatrix: ragged rows");
        std::vector<std::uint32_t> row;
        for (char c : line) {
            if (c != '0' && c != '1') throw std::invalid_argument("kmatrix: entries must be 0 or 1");
            row.push_back(c - '0');
        }
        K.append_row(row);
    }
    return K;
}

FpMat kmatrix_from_file(const std::string& path, Prime p) {
    return kmatrix_from_string(read_file(path), p);
}

}  // namespace fracode
